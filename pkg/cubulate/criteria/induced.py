"""
子群上的诱导墙空间：把外围墙限制到子群的球上
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cubulate.core.ball import CayleyBall, build_ball
from cubulate.core.errors import ScaleError
from cubulate.core.presentation import Word
from cubulate.walls.wallspace import Wallspace, default_margin, make_wall

logger = logging.getLogger(__name__)


@dataclass
class InducedWallspace:
    subgroup_generators: Tuple[Word, ...]
    wallspace: Wallspace
    provenance: List[List[int]] = field(default_factory=list)  # 诱导墙 -> 外围墙下标
    discarded: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subgroup_generators": list(self.subgroup_generators),
            "wallspace": self.wallspace.to_dict(),
            "provenance": [list(p) for p in self.provenance],
            "discarded": self.discarded,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InducedWallspace":
        return cls(
            subgroup_generators=tuple(data["subgroup_generators"]),
            wallspace=Wallspace.from_dict(data["wallspace"]),
            provenance=[list(p) for p in data.get("provenance", [])],
            discarded=int(data.get("discarded", 0)),
        )


def _embedding(ws: Wallspace, sub: CayleyBall) -> List[int]:
    ambient = ws.ball
    index = []
    worst = 0
    for w in sub.words:
        i = ambient.index_of(w)
        if i is None or not (ws.trusted >> i) & 1:
            worst = max(worst, len(w))
            index.append(-1)
        else:
            index.append(i)
    if worst:
        raise ScaleError(
            f"子群的球离开了外围可信子球（半径 {ws.trusted_radius}）",
            minimal_radius=worst + ws.margin,
            module="criteria",
        )
    return index


def induce_wallspace(
    ws: Wallspace,
    subgroup_generators: Sequence[Word],
    R_sub: int,
    margin: Optional[int] = None,
) -> InducedWallspace:
    """限制每面外围墙；丢掉在可信子球内单侧的限制，相同的限制只保留一份并记录来源"""
    p = ws.ball.presentation
    gens = tuple(p.element(g) for g in subgroup_generators if p.element(g))
    sub = build_ball(p, R_sub, generators=gens)
    index = _embedding(ws, sub)
    m = default_margin(R_sub) if margin is None else margin

    T = sub.trusted_mask(m)
    walls = []
    provenance: List[List[int]] = []
    seen: Dict[Tuple[int, int, int], int] = {}
    discarded = 0
    for k, wall in enumerate(ws.walls):
        left = right = carrier = 0
        for i, j in enumerate(index):
            bit = 1 << i
            if (wall.L >> j) & 1:
                left |= bit
            elif (wall.R >> j) & 1:
                right |= bit
            else:
                carrier |= bit
        # 两侧都要落进子球的可信部分
        if not left & T or not right & T:
            discarded += 1
            continue
        key = (left, right, carrier)
        if key in seen:
            provenance[seen[key]].append(k)
            continue
        seen[key] = len(walls)
        provenance.append([k])
        walls.append(make_wall(sub, left, right, carrier=carrier, label=f"trace({wall.label or k})"))

    induced = Wallspace(ball=sub, walls=tuple(walls), margin=m)
    logger.info(
        "诱导墙空间 ⟨%s⟩: %d 面墙（丢弃 %d 个单侧限制）", ",".join(gens) or "1", len(walls), discarded
    )
    return InducedWallspace(gens, induced, provenance, discarded)


__all__ = ["InducedWallspace", "induce_wallspace"]
