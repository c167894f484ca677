"""
cubulate 的异常层级

所有库内异常都继承自 CubulateError，并携带所属模块标签，
CLI 统一以 ``[模块] 信息`` 的形式输出，退出码为 2。
判定失败（中位性失败、非 NPC、病态超平面、覆盖不全等）属于结果数据，不走异常。
"""
from __future__ import annotations

from typing import Any, Dict, Optional


class CubulateError(Exception):
    """所有 cubulate 异常的基类"""

    module = "cubulate"

    def __init__(self, message: str, *, module: Optional[str] = None):
        if module:
            self.module = module
        self.message = message
        super().__init__(f"[{self.module}] {message}")


class MalformedInputError(CubulateError):
    """输入里出现字母表之外的符号，或文件语法错误"""

    module = "group-core"


class DivergenceError(CubulateError):
    """重写步数超过预算（重写系统可能不终止）"""

    module = "group-core"

    def __init__(self, message: str, *, budget: int, module: Optional[str] = None):
        self.budget = budget
        super().__init__(message, module=module)


class SizeError(CubulateError):
    """构造规模超过预算，count 为失败时的计数"""

    def __init__(
        self,
        message: str,
        *,
        count: int,
        census: Optional[Dict[str, Any]] = None,
        module: Optional[str] = None,
    ):
        self.count = count
        self.census = dict(census or {})
        super().__init__(message, module=module)


class ScaleError(CubulateError):
    """当前半径不足以得出结论，minimal_radius 为建议的最小半径（未知时为 None）"""

    def __init__(self, message: str, *, minimal_radius: Optional[int] = None, module: Optional[str] = None):
        self.minimal_radius = minimal_radius
        super().__init__(message, module=module)


class NotCodimensionOneError(ScaleError):
    """在当前尺度下补集的深分支少于两个"""

    module = "wallspace"

    def __init__(self, message: str, *, census: Dict[str, Any], module: Optional[str] = None):
        self.census = dict(census)
        super().__init__(message, module=module)


class BoundaryUncertaintyError(CubulateError):
    """谓词触及了不可信的球边界"""

    module = "wallspace"


class UnreachableError(CubulateError):
    """对偶 1-骨架不连通（违反连通性不变量，按 bug 报告）"""

    module = "sageev-dual"


class StructuralError(CubulateError):
    """立方复形的面数据不合法"""

    module = "cube-complex"


class InputError(CubulateError):
    """输入对象本身不自洽，例如墙的某一侧在可信子球上为空"""


class OracleRefusedError(CubulateError):
    """穷举定向的 oracle 只接受不超过 20 面墙"""

    module = "sageev-dual"


__all__ = [
    "CubulateError",
    "MalformedInputError",
    "DivergenceError",
    "SizeError",
    "ScaleError",
    "NotCodimensionOneError",
    "BoundaryUncertaintyError",
    "UnreachableError",
    "StructuralError",
    "InputError",
    "OracleRefusedError",
]
