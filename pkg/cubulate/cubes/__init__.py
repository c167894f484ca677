"""
立方复形、Gromov 链接条件与超平面病态检查
"""

from cubulate.cubes.complex import CubeComplex, check_npc
from cubulate.cubes.hyperplanes import check_special

__all__ = ["CubeComplex", "check_npc", "check_special"]
