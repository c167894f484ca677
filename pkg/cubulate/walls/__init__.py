"""
墙与墙空间
"""

from cubulate.walls.wallspace import Wall, WallFamily, Wallspace, build_wallspace

__all__ = ["Wall", "WallFamily", "Wallspace", "build_wallspace"]
