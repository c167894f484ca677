"""
cubulate

在有限 Cayley 球上构造墙空间与 Sageev 对偶立方复形，检查非正曲率与特殊性，
并计算几何化判据（线性分离剖面、轴分离、墙的选择与诱导墙空间）。
"""

__version__ = "0.1.0"

from cubulate.core import CayleyBall, GroupPresentation, build_ball
from cubulate.walls import Wall, Wallspace
from cubulate.dual import DualComplex, build_dual
from cubulate.cubes import CubeComplex, check_npc, check_special

__all__ = [
    "__version__",
    "CayleyBall",
    "GroupPresentation",
    "build_ball",
    "Wall",
    "Wallspace",
    "DualComplex",
    "build_dual",
    "CubeComplex",
    "check_npc",
    "check_special",
]
