"""
线性分离剖面：#(1, g) 随 |g| 的增长
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

from cubulate.core.errors import ScaleError
from cubulate.walls.wallspace import Wallspace, carrier_ambiguous, separating_walls

logger = logging.getLogger(__name__)


@dataclass
class SeparationProfile:
    """distances[i] = i + 1；mins/means/maxs 是球面上 #(1, g) 的统计

    carrier_skipped[i] 是该球面上因载体包含端点而没有计数的墙数的最大值。
    """

    L: int
    mins: List[int]
    means: List[float]
    maxs: List[int]
    witnesses: List[str]
    step: int = 1
    envelope: List[int] = field(default_factory=list)
    plausible: bool = False
    carrier_skipped: List[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.envelope:
            self.envelope = [min(self.mins[i:]) for i in range(len(self.mins))]

    @property
    def distances(self) -> List[int]:
        return list(range(1, self.L + 1))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "n": self.distances,
                "min": self.mins,
                "mean": self.means,
                "max": self.maxs,
                "envelope": self.envelope,
                "witness": [w or "1" for w in self.witnesses],
                "carrier_skipped": self.carrier_skipped or [0] * self.L,
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "step": self.step,
            "min": list(self.mins),
            "mean": [round(x, 6) for x in self.means],
            "max": list(self.maxs),
            "envelope": list(self.envelope),
            "witnesses": list(self.witnesses),
            "plausible": self.plausible,
            "carrier_skipped": list(self.carrier_skipped),
        }


def _plausible(mins: List[int], step: int) -> bool:
    """至少每 step 步严格增长一次，且最后一项为正"""
    if not mins or mins[-1] <= 0:
        return False
    return all(mins[i + step] > mins[i] for i in range(len(mins) - step))


def linear_separation_profile(ws: Wallspace, L: int, step: int = 1) -> SeparationProfile:
    if L < 1:
        raise ScaleError(f"L 必须为正: {L}", module="criteria")
    if L > ws.trusted_radius:
        raise ScaleError(
            f"L={L} 超过可信半径 {ws.trusted_radius}",
            minimal_radius=L + ws.margin,
            module="criteria",
        )
    if not ws.walls:
        logger.warning("墙空间为空，剖面恒为 0")
    ball = ws.ball
    mins: List[int] = []
    means: List[float] = []
    maxs: List[int] = []
    witnesses: List[str] = []
    skipped: List[int] = []
    for n in range(1, L + 1):
        sphere = ball.sphere(n)
        counts = [separating_walls(ws, 0, v).bit_count() for v in sphere]
        low = min(counts)
        mins.append(low)
        means.append(sum(counts) / len(counts))
        maxs.append(max(counts))
        witnesses.append(ball.words[sphere[counts.index(low)]])
        skipped.append(max(len(carrier_ambiguous(ws, 0, v)) for v in sphere))
    profile = SeparationProfile(
        L=L, mins=mins, means=means, maxs=maxs, witnesses=witnesses, step=step,
        plausible=_plausible(mins, step), carrier_skipped=skipped,
    )
    if any(skipped):
        logger.info("有墙的载体包含端点，未计入 #(1, g)：每个球面最多 %s 面", skipped)
    logger.info("线性分离剖面 L=%d: min=%s, plausible=%s", L, mins, profile.plausible)
    return profile


__all__ = ["SeparationProfile", "linear_separation_profile"]
