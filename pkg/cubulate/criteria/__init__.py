"""
几何化判据
"""

from cubulate.criteria.profile import linear_separation_profile
from cubulate.criteria.axis import axis_separation
from cubulate.criteria.selection import select_walls, verify_selection
from cubulate.criteria.induced import induce_wallspace

__all__ = [
    "linear_separation_profile",
    "axis_separation",
    "select_walls",
    "verify_selection",
    "induce_wallspace",
]
