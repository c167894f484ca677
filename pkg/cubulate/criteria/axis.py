"""
轴分离判据

对无限阶元素 g，寻找一面墙 W 与幂次 n，使 ←W ⊂ g^{±n}←W、→W ⊂ g^{∓n}→W，
再验证 {g^{kn}W : |k| ≤ k_max} 两两嵌套且互不相同。
平移后的半空间只在 Ω = T ∩ h(球) ∩ h⁻¹(球) 上比较。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cubulate.core.ball import CayleyBall
from cubulate.core.bitset import full_mask, translate_mask
from cubulate.core.errors import ScaleError
from cubulate.core.presentation import GroupElement, Word
from cubulate.walls.wallspace import Wallspace, relation_on

logger = logging.getLogger(__name__)

DEFAULT_K_MAX = 2


@dataclass(frozen=True)
class AxisWitness:
    wall: int
    family: Optional[int]
    translate: Optional[Word]
    n: int
    sign: int
    label: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "wall": self.wall,
            "family": self.family,
            "translate": self.translate,
            "n": self.n,
            "sign": self.sign,
            "label": self.label,
        }


@dataclass
class AxisReport:
    element: GroupElement
    verdict: bool
    witness: Optional[AxisWitness] = None
    chain_length: int = 0
    k_max: int = DEFAULT_K_MAX
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "element": self.element,
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "chain_length": self.chain_length,
            "k_max": self.k_max,
            "note": self.note,
        }


def is_torsion(ball: CayleyBall, g: GroupElement, order_bound: Optional[int] = None) -> bool:
    """g^k = 1 对某个 1 ≤ k ≤ order_bound（默认 2R）成立"""
    p = ball.presentation
    bound = 2 * ball.radius if order_bound is None else order_bound
    h = ""
    for _ in range(max(1, bound)):
        h = p.multiply(h, g)
        if not h:
            return True
    return False


def _image(ball: CayleyBall, h: Word) -> int:
    """h·球 ∩ 球"""
    return translate_mask(full_mask(len(ball)), ball.translation_map(h))


def _translated(ws: Wallspace, mask: int, h: Word) -> int:
    return translate_mask(mask, ws.ball.translation_map(h))


def nesting_power(ws: Wallspace, wall: int, h: Word) -> bool:
    """在 Ω 上检查 ←W ⊊ h←W 且 →W ⊆ h⁻¹→W，两侧都与 Ω 相交"""
    p = ws.ball.presentation
    h_inv = p.invert(h)
    omega = ws.trusted & _image(ws.ball, h) & _image(ws.ball, h_inv)
    w = ws.walls[wall]
    L, R = w.L & omega, w.R & omega
    if not L or not R:
        return False
    hL = _translated(ws, w.L, h) & omega
    hR = _translated(ws, w.R, h_inv) & omega
    return (L & ~hL) == 0 and hL != L and (R & ~hR) == 0


def nested_chain(ws: Wallspace, wall: int, step: Word, k_max: int) -> int:
    """{step^k W : |k| ≤ k_max} 在共同定义域上两两嵌套且互不相同时返回链长，否则返回 0"""
    p = ws.ball.presentation
    powers = [p.power(step, k) for k in range(-k_max, k_max + 1)]
    omega = ws.trusted
    for h in powers:
        omega &= _image(ws.ball, h)
    w = ws.walls[wall]
    chain: List[Tuple[int, int]] = [
        (_translated(ws, w.L, h) & omega, _translated(ws, w.R, h) & omega) for h in powers
    ]
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            (l1, r1), (l2, r2) = chain[i], chain[j]
            if (l1, r1) == (l2, r2):
                return 0
            if relation_on(l1, r1, l2, r2, omega) is None:
                return 0
    return len(chain)


def power_cap(ws: Wallspace, g: GroupElement, k_max: int, n_max: Optional[int]) -> int:
    p = ws.ball.presentation
    reach = len(p.power(g, k_max))
    if reach > ws.trusted_radius:
        raise ScaleError(
            f"|g^{k_max}| = {reach} 超过可信半径 {ws.trusted_radius}",
            minimal_radius=reach + ws.margin,
            module="criteria",
        )
    n = 1
    while (n_max is None or n < n_max) and len(p.power(g, k_max * (n + 1))) <= ws.trusted_radius:
        n += 1
    return n


def axis_witness(
    ws: Wallspace,
    g: GroupElement,
    wall: int,
    n_max: int,
    k_max: int = DEFAULT_K_MAX,
) -> Optional[Tuple[AxisWitness, int]]:
    """单面墙的检验：返回 (见证, 链长)，找不到时返回 None"""
    p = ws.ball.presentation
    w = ws.walls[wall]
    for n in range(1, n_max + 1):
        for sign in (1, -1):
            h = p.power(g, sign * n)
            if not nesting_power(ws, wall, h):
                continue
            length = nested_chain(ws, wall, h, k_max)
            if length:
                family, translate = w.origin if w.origin is not None else (None, None)
                return AxisWitness(wall, family, translate, n, sign, w.label), length
    return None


def axis_separation(
    ws: Wallspace,
    g: str,
    n_max: Optional[int] = None,
    k_max: int = DEFAULT_K_MAX,
    candidates: Optional[Sequence[int]] = None,
    order_bound: Optional[int] = None,
) -> AxisReport:
    """按墙空间中的顺序（或 candidates）寻找第一个见证"""
    p = ws.ball.presentation
    g = p.element(g)
    if not g or is_torsion(ws.ball, g, order_bound):
        logger.info("元素 %s 是有限阶的，跳过", g or "1")
        return AxisReport(g, False, k_max=k_max, note="torsion")
    n_cap = power_cap(ws, g, k_max, n_max)
    pool = range(len(ws.walls)) if candidates is None else candidates
    for i in pool:
        if not ws.is_trusted(i):
            continue
        found = axis_witness(ws, g, i, n_cap, k_max)
        if found is not None:
            witness, length = found
            logger.info("元素 %s: 墙 %s 在 n=%d 处给出见证，链长 %d", g, witness.label, witness.n, length)
            return AxisReport(g, True, witness, length, k_max)
    return AxisReport(g, False, k_max=k_max, note="no-witness")


__all__ = [
    "AxisWitness",
    "AxisReport",
    "DEFAULT_K_MAX",
    "is_torsion",
    "power_cap",
    "nesting_power",
    "nested_chain",
    "axis_witness",
    "axis_separation",
]
