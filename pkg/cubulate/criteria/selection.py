"""
有限墙选择：贪心地为每个共轭类代表找轴分离见证，再补足顶点对的分离
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import pandas as pd

from cubulate.core.ball import CayleyBall, build_ball
from cubulate.core.bitset import iter_bits, lowest
from cubulate.core.errors import CubulateError, ScaleError
from cubulate.core.presentation import GroupPresentation, Word
from cubulate.criteria.axis import (
    DEFAULT_K_MAX,
    AxisWitness,
    power_cap,
    axis_witness,
    is_torsion,
)
from cubulate.dual.sageev import build_dual
from cubulate.utils.system import parallel_map
from cubulate.walls.wallspace import (
    WallFamily,
    Wallspace,
    default_depth_threshold,
    default_margin,
    family_translates,
    subgroup_elements,
)

logger = logging.getLogger(__name__)


def _rotation_rep(ball: CayleyBall, w: Word) -> Word:
    p = ball.presentation
    forms = {p.normal_form(w[i:] + w[:i]) for i in range(len(w))} | {w}
    return min(forms, key=p.shortlex_key)


def classify_representatives(
    ball: CayleyBall,
    L: int,
    parabolic: Sequence[Sequence[Word]] = (),
    order_bound: Optional[int] = None,
) -> Dict[str, List[Word]]:
    """|g| ≤ L 的元素按循环旋转取代表，分成 loxodromic / torsion / parabolic 三类"""
    p = ball.presentation
    reps: Set[Word] = set()
    for w, d in zip(ball.words, ball.distance):
        if 1 <= d <= L:
            reps.add(_rotation_rep(ball, w))
    parabolic_sets = [set(subgroup_elements(ball, gens, L)) for gens in parabolic]
    out: Dict[str, List[Word]] = {"loxodromic": [], "torsion": [], "parabolic": []}
    for g in sorted(reps, key=p.shortlex_key):
        if not g:
            continue
        if is_torsion(ball, g, order_bound):
            out["torsion"].append(g)
            continue
        rotations = {p.normal_form(g[i:] + g[:i]) for i in range(len(g))}
        if any(rotations & members for members in parabolic_sets):
            out["parabolic"].append(g)
            continue
        out["loxodromic"].append(g)
    return out


def conjugacy_representatives(
    ball: CayleyBall,
    L: int,
    parabolic: Sequence[Sequence[Word]] = (),
) -> List[Word]:
    """循环旋转中 shortlex 最小的正规形式，去掉有限阶元素与抛物元素"""
    groups = classify_representatives(ball, L, parabolic)
    if groups["torsion"] or groups["parabolic"]:
        logger.info("跳过 %d 个有限阶、%d 个抛物代表", len(groups["torsion"]), len(groups["parabolic"]))
    return groups["loxodromic"]


@dataclass
class SelectionResult:
    pool: Wallspace
    L: int
    k_max: int
    axis_walls: List[int] = field(default_factory=list)
    separation_walls: List[int] = field(default_factory=list)
    coverage: Dict[Word, AxisWitness] = field(default_factory=dict)
    uncovered: List[Word] = field(default_factory=list)
    unseparated: List[Tuple[Word, Word]] = field(default_factory=list)
    exempt: Dict[str, List[Word]] = field(default_factory=dict)

    @property
    def selected(self) -> List[int]:
        return sorted(set(self.axis_walls) | set(self.separation_walls))

    @property
    def complete(self) -> bool:
        return not self.uncovered and not self.unseparated

    def chosen(self, indices: Optional[Iterable[int]] = None) -> List[Tuple[Optional[int], Optional[Word]]]:
        """(族下标, 平移元)"""
        out = []
        for i in self.axis_walls if indices is None else indices:
            origin = self.pool.walls[i].origin
            out.append(origin if origin is not None else (None, None))
        return out

    def selected_wallspace(self) -> Tuple[Wallspace, Dict[int, int]]:
        """只含被选中墙的墙空间，以及原下标到新下标的映射"""
        keep = self.selected
        return self.pool.subset(keep), {old: new for new, old in enumerate(keep)}

    def coverage_frame(self) -> pd.DataFrame:
        rows = []
        for g, w in self.coverage.items():
            rows.append({"element": g, "covered": True, "wall": w.wall, "label": w.label, "n": w.n, "sign": w.sign})
        for g in self.uncovered:
            rows.append({"element": g, "covered": False, "wall": None, "label": "", "n": None, "sign": None})
        return pd.DataFrame(rows, columns=["element", "covered", "wall", "label", "n", "sign"])

    def to_dict(self) -> Dict[str, Any]:
        walls = self.pool.walls
        return {
            "L": self.L,
            "k_max": self.k_max,
            "pool_size": len(walls),
            "axis_walls": [{"index": i, "label": walls[i].label} for i in self.axis_walls],
            "separation_walls": [{"index": i, "label": walls[i].label} for i in self.separation_walls],
            "coverage": {g: w.to_dict() for g, w in self.coverage.items()},
            "uncovered": list(self.uncovered),
            "unseparated": [list(pair) for pair in self.unseparated],
            "exempt": {k: list(v) for k, v in self.exempt.items()},
            "complete": self.complete,
        }


def candidate_pool(
    ball: CayleyBall,
    families: Sequence[WallFamily],
    translate_radius: Optional[int] = None,
    margin: Optional[int] = None,
) -> Wallspace:
    """按族顺序、族内按平移元 shortlex 顺序排列的候选墙"""
    m = default_margin(ball.radius) if margin is None else margin
    threshold = default_depth_threshold(ball.radius, m)
    walls = []
    seen = set()
    for index, family in enumerate(families):
        for wall in family_translates(
            ball, family, translate_radius, margin=m, depth_threshold=threshold, family_index=index
        ):
            key = (wall.L, wall.R, wall.carrier)
            if key not in seen:
                seen.add(key)
                walls.append(wall)
    return Wallspace(ball=ball, walls=tuple(walls), families=tuple(families), margin=m, depth_threshold=threshold)


def select_walls(
    ball: CayleyBall,
    candidate_families: Sequence[WallFamily],
    L: int,
    *,
    translate_radius: Optional[int] = None,
    margin: Optional[int] = None,
    k_max: int = DEFAULT_K_MAX,
    parabolic: Sequence[Sequence[Word]] = (),
    separate_pairs: bool = True,
    threads: Optional[int] = None,
) -> SelectionResult:
    """贪心选择

    见证表可以并行计算；选择本身按代表的 shortlex 顺序串行进行，
    候选的先后是族顺序、再按平移元 shortlex。
    """
    pool = candidate_pool(ball, candidate_families, translate_radius, margin)
    groups = classify_representatives(ball, L, parabolic)
    reps = groups["loxodromic"]
    result = SelectionResult(
        pool=pool,
        L=L,
        k_max=k_max,
        exempt={"torsion": groups["torsion"], "parabolic": groups["parabolic"]},
    )
    trusted_walls = [i for i in range(len(pool.walls)) if pool.is_trusted(i)]

    def _witnesses(g: Word) -> List[AxisWitness]:
        try:
            n_cap = power_cap(pool, g, k_max, None)
        except ScaleError as exc:
            logger.info("元素 %s 超出尺度: %s", g, exc)
            return []
        found = []
        for i in trusted_walls:
            hit = axis_witness(pool, g, i, n_cap, k_max)
            if hit is not None:
                found.append(hit[0])
        return found

    table = parallel_map(_witnesses, reps, threads)
    selected: List[int] = []
    for g, witnesses in zip(reps, table):
        if not witnesses:
            result.uncovered.append(g)
            continue
        reuse = [w for w in witnesses if w.wall in selected]
        if reuse:
            result.coverage[g] = min(reuse, key=lambda w: selected.index(w.wall))
            continue
        first = witnesses[0]
        selected.append(first.wall)
        result.coverage[g] = first
    result.axis_walls = selected

    if separate_pairs:
        _separate_pairs(result, L)
    logger.info(
        "选择了 %d 面轴墙、%d 面分离墙；未覆盖 %d 个，未分离 %d 对",
        len(result.axis_walls),
        len(result.separation_walls),
        len(result.uncovered),
        len(result.unseparated),
    )
    return result


def _separate_pairs(result: SelectionResult, L: int) -> None:
    pool = result.pool
    ball = pool.ball
    region = [v for v in iter_bits(pool.trusted) if ball.distance[v] <= L]
    chosen = 0
    for i in result.axis_walls:
        chosen |= 1 << i
    Lm, Rm = pool.left_masks, pool.right_masks
    for a, u in enumerate(region):
        for v in region[a + 1:]:
            separating = (Lm[u] & Rm[v]) | (Rm[u] & Lm[v])
            if separating & chosen:
                continue
            if not separating:
                result.unseparated.append((ball.words[u], ball.words[v]))
                continue
            i = lowest(separating)
            chosen |= 1 << i
            result.separation_walls.append(i)


def verify_selection(
    result: SelectionResult,
    ball: Optional[CayleyBall] = None,
    ws: Optional[Wallspace] = None,
) -> List[Dict[str, Any]]:
    """只用选中的墙重建墙空间与对偶复形，重新验证每个见证；返回失败列表"""
    ws = result.pool if ws is None else ws
    if ball is not None and ball != ws.ball:
        raise CubulateError("选择结果与给定的球不一致", module="criteria")
    sub, remap = result.selected_wallspace()
    failures: List[Dict[str, Any]] = []
    try:
        dc = build_dual(sub)
        logger.info("选中墙的对偶复形: %s", dc.census())
    except CubulateError as exc:
        failures.append({"element": None, "reason": f"dual rebuild failed: {exc}"})
    for g, witness in result.coverage.items():
        j = remap.get(witness.wall)
        if j is None:
            failures.append({"element": g, "reason": "witness wall not selected"})
            continue
        hit = axis_witness(sub, g, j, witness.n, result.k_max)
        if hit is None:
            failures.append({"element": g, "reason": "axis check failed on selected walls"})
    logger.info("选择验证: %d 个见证，%d 个失败", len(result.coverage), len(failures))
    return failures


def selection_stability(
    p: GroupPresentation,
    families: Sequence[WallFamily],
    L: int,
    radii: Sequence[int],
    margin: Optional[int] = None,
    translate_radius: Optional[int] = None,
    **kwargs: Any,
) -> Dict[str, Any]:
    """比较最大两个半径上选出的 (族, 平移元) 集合"""
    runs: Dict[int, List[Tuple[Optional[int], Optional[Word]]]] = {}
    for R in sorted(radii)[-2:]:
        ball = build_ball(p, R)
        result = select_walls(ball, families, L, translate_radius=translate_radius, margin=margin, **kwargs)
        runs[R] = sorted(result.chosen(), key=lambda x: (x[0] if x[0] is not None else -1, x[1] or ""))
    values = list(runs.values())
    stable = len(values) == 2 and values[0] == values[1]
    return {
        "stable": stable,
        "radii": sorted(runs),
        "selections": {str(R): [[f, t] for f, t in sel] for R, sel in runs.items()},
    }


__all__ = [
    "SelectionResult",
    "classify_representatives",
    "conjugacy_representatives",
    "candidate_pool",
    "select_walls",
    "verify_selection",
    "selection_stability",
]
