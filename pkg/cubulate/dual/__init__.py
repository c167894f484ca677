"""
Sageev 对偶立方复形
"""

from cubulate.dual.sageev import DualComplex, build_dual, check_median

__all__ = ["DualComplex", "build_dual", "check_median"]
