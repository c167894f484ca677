"""
群表示、正规形式与 Cayley 球
"""

from cubulate.core.errors import CubulateError
from cubulate.core.presentation import GroupPresentation, load_presentation
from cubulate.core.ball import CayleyBall, build_ball

__all__ = ["CubulateError", "GroupPresentation", "load_presentation", "CayleyBall", "build_ball"]
