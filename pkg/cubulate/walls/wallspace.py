"""
墙空间：球上的互补半空间对 {←N, →N}

- 半空间、载体都是 int bitset（第 i 位对应球的第 i 个顶点）。
- 子群墙：删掉陪集邻域 gN_r(H) 后取补集的连通分支，深分支不少于两个才算一面墙。
- 抽象墙：直接给出的二分（例如单条割边），载体为空。
- 边界敏感的谓词（穿越、嵌套、深度）只在半径 R - m 的可信子球上量化。
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import toml

from cubulate.core.ball import CayleyBall, VertexRef
from cubulate.core.bitset import bits, full_mask, iter_bits, lowest, mask_of
from cubulate.core.errors import (
    BoundaryUncertaintyError,
    CubulateError,
    InputError,
    MalformedInputError,
    NotCodimensionOneError,
    ScaleError,
    SizeError,
)
from cubulate.core.presentation import Word

logger = logging.getLogger(__name__)

WALLSPACE_FORMAT = "cubulate.wallspace"
WALLSPACE_VERSION = 1
DEFAULT_SUBGROUP_BUDGET = 100_000


def default_margin(radius: int) -> int:
    """m = ⌈R/4⌉"""
    return (radius + 3) // 4


def default_depth_threshold(radius: int, margin: int) -> int:
    """⌈(R - m)/2⌉"""
    return max(0, math.ceil((radius - margin) / 2))


class Side(Enum):
    LEFT = "L"
    RIGHT = "R"

    def __str__(self):
        return self.value

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class Nesting(Enum):
    """nests 的判定：XY 表示 W1 的 X 侧与 W2 的 Y 侧在可信子球上不相交"""
    LL = "LL"
    LR = "LR"
    RL = "RL"
    RR = "RR"

    def __str__(self):
        return self.value

    def swapped(self) -> "Nesting":
        return Nesting(self.value[::-1])


@dataclass(frozen=True)
class Halfspace:
    ball_id: str
    members: int
    side: Side

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, v: int) -> bool:
        return bool((self.members >> v) & 1)


@dataclass(frozen=True)
class Wall:
    """一面墙；origin 为 (族下标, 平移元) ，抽象墙为 None"""

    left: Halfspace
    right: Halfspace
    carrier: int = 0
    origin: Optional[Tuple[int, Word]] = None
    deep_flags: Tuple[bool, bool] = (True, True)
    label: str = ""
    radius_used: int = 0
    neighborhood: int = 0
    deep_vertices: int = 0

    @property
    def L(self) -> int:
        return self.left.members

    @property
    def R(self) -> int:
        return self.right.members

    def side_of(self, v: int) -> Optional[Side]:
        if (self.L >> v) & 1:
            return Side.LEFT
        if (self.R >> v) & 1:
            return Side.RIGHT
        return None

    def members(self, side: Side) -> int:
        return self.L if side is Side.LEFT else self.R

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "left": bits(self.L),
            "right": bits(self.R),
            "carrier": bits(self.carrier),
            "origin": [self.origin[0], self.origin[1]] if self.origin is not None else None,
            "deep_flags": list(self.deep_flags),
            "radius_used": self.radius_used,
            "neighborhood": bits(self.neighborhood),
            "deep_vertices": bits(self.deep_vertices),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], ball_id: str) -> "Wall":
        origin = data.get("origin")
        return cls(
            left=Halfspace(ball_id, mask_of(data["left"]), Side.LEFT),
            right=Halfspace(ball_id, mask_of(data["right"]), Side.RIGHT),
            carrier=mask_of(data.get("carrier", [])),
            origin=(int(origin[0]), str(origin[1])) if origin is not None else None,
            deep_flags=tuple(bool(x) for x in data.get("deep_flags", (True, True))),
            label=str(data.get("label", "")),
            radius_used=int(data.get("radius_used", 0)),
            neighborhood=mask_of(data.get("neighborhood", [])),
            deep_vertices=mask_of(data.get("deep_vertices", [])),
        )


@dataclass(frozen=True)
class WallFamily:
    """一族墙：H = ⟨subgroup_generators⟩，邻域半径 r

    absorb_carrier 为真时载体并入 →N（→N = Γ - ←N），这样的墙载体为空；
    anchor 指定 ←N 为包含 g·anchor 的深分支。
    """

    subgroup_generators: Tuple[Word, ...]
    neighborhood_radius: int = 0
    label: str = ""
    absorb_carrier: bool = False
    anchor: Optional[Word] = None
    max_radius: Optional[int] = None

    def __post_init__(self) -> None:
        if self.neighborhood_radius < 0:
            raise MalformedInputError(f"邻域半径必须非负: {self.neighborhood_radius}", module="wallspace")
        if self.max_radius is not None and self.max_radius < self.neighborhood_radius:
            raise MalformedInputError("max_radius 不能小于 neighborhood_radius", module="wallspace")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "label": self.label,
            "generators": list(self.subgroup_generators),
            "radius": self.neighborhood_radius,
            "absorb_carrier": self.absorb_carrier,
        }
        if self.anchor is not None:
            data["anchor"] = self.anchor
        if self.max_radius is not None:
            data["max_radius"] = self.max_radius
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WallFamily":
        generators = data.get("generators", [])
        if not isinstance(generators, list):
            raise MalformedInputError("family.generators 必须是列表", module="wallspace")
        max_radius = data.get("max_radius")
        return cls(
            subgroup_generators=tuple(str(g) for g in generators),
            neighborhood_radius=int(data.get("radius", 0)),
            label=str(data.get("label", "")),
            absorb_carrier=bool(data.get("absorb_carrier", False)),
            anchor=str(data["anchor"]) if data.get("anchor") is not None else None,
            max_radius=int(max_radius) if max_radius is not None else None,
        )


@dataclass(frozen=True)
class Wallspace:
    """球上的一组墙（构造后不可变）"""

    ball: CayleyBall
    walls: Tuple[Wall, ...]
    families: Tuple[WallFamily, ...] = ()
    margin: int = 0
    depth_threshold: Optional[int] = None

    _cache: Dict[str, Any] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.margin < 0 or self.margin > self.ball.radius:
            raise MalformedInputError(f"margin 必须在 0..{self.ball.radius} 之间: {self.margin}", module="wallspace")
        for i, w in enumerate(self.walls):
            if w.origin is not None and not 0 <= w.origin[0] < len(self.families):
                raise MalformedInputError(f"墙 {i} 的来源族 {w.origin[0]} 不存在", module="wallspace")
            if w.L & w.R:
                raise MalformedInputError(f"墙 {i} 的两侧相交", module="wallspace")
        object.__setattr__(self, "_cache", {})

    def __len__(self) -> int:
        return len(self.walls)

    @property
    def trusted(self) -> int:
        mask = self._cache.get("trusted")
        if mask is None:
            mask = self.ball.trusted_mask(self.margin)
            self._cache["trusted"] = mask
        return mask

    @property
    def trusted_radius(self) -> int:
        return self.ball.radius - self.margin

    def _side_masks(self) -> Tuple[List[int], List[int], List[int]]:
        masks = self._cache.get("side_masks")
        if masks is None:
            n = len(self.ball)
            left, right, carrier = [0] * n, [0] * n, [0] * n
            for i, w in enumerate(self.walls):
                bit = 1 << i
                for v in iter_bits(w.L):
                    left[v] |= bit
                for v in iter_bits(w.R):
                    right[v] |= bit
                for v in iter_bits(w.carrier):
                    carrier[v] |= bit
            masks = (left, right, carrier)
            self._cache["side_masks"] = masks
        return masks

    @property
    def left_masks(self) -> List[int]:
        """left_masks[v] 的第 i 位为 1 表示 v 在墙 i 的 ←N 中"""
        return self._side_masks()[0]

    @property
    def right_masks(self) -> List[int]:
        return self._side_masks()[1]

    @property
    def carrier_masks(self) -> List[int]:
        return self._side_masks()[2]

    def is_trusted(self, wall: Union[int, Wall]) -> bool:
        w = self.walls[wall] if isinstance(wall, int) else wall
        return wall_is_trusted(self.ball, w, self.trusted)

    def subset(self, indices: Iterable[int]) -> "Wallspace":
        return Wallspace(
            ball=self.ball,
            walls=tuple(self.walls[i] for i in indices),
            families=self.families,
            margin=self.margin,
            depth_threshold=self.depth_threshold,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": WALLSPACE_FORMAT,
            "version": WALLSPACE_VERSION,
            "ball": self.ball.to_dict(),
            "margin": self.margin,
            "depth_threshold": self.depth_threshold,
            "families": [f.to_dict() for f in self.families],
            "walls": [w.to_dict() for w in self.walls],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Wallspace":
        ball = CayleyBall.from_dict(data["ball"])
        threshold = data.get("depth_threshold")
        return cls(
            ball=ball,
            walls=tuple(Wall.from_dict(w, ball.ball_id) for w in data.get("walls", [])),
            families=tuple(WallFamily.from_dict(f) for f in data.get("families", [])),
            margin=int(data.get("margin", 0)),
            depth_threshold=int(threshold) if threshold is not None else None,
        )


# ----------------------------------------------------------------------
# 墙的构造
# ----------------------------------------------------------------------
def make_wall(
    ball: CayleyBall,
    left: int,
    right: int,
    *,
    carrier: int = 0,
    label: str = "",
    origin: Optional[Tuple[int, Word]] = None,
    radius_used: int = 0,
    neighborhood: int = 0,
    deep_vertices: int = 0,
    deep_flags: Tuple[bool, bool] = (True, True),
) -> Wall:
    bid = ball.ball_id
    return Wall(
        left=Halfspace(bid, left, Side.LEFT),
        right=Halfspace(bid, right, Side.RIGHT),
        carrier=carrier,
        origin=origin,
        deep_flags=deep_flags,
        label=label,
        radius_used=radius_used,
        neighborhood=neighborhood,
        deep_vertices=deep_vertices,
    )


def wall_frontier(ball: CayleyBall, wall: Wall) -> int:
    """载体；载体为空时取连接两侧的边的端点"""
    if wall.carrier:
        return wall.carrier
    L, R = wall.L, wall.R
    frontier = 0
    for u, _, v in ball.edges:
        if ((L >> u) & 1 and (R >> v) & 1) or ((R >> u) & 1 and (L >> v) & 1):
            frontier |= (1 << u) | (1 << v)
    return frontier


def wall_is_trusted(ball: CayleyBall, wall: Wall, trusted: int) -> bool:
    """可信：边界与可信子球相交，且两侧都与可信子球相交"""
    return bool(wall_frontier(ball, wall) & trusted) and bool(wall.L & trusted) and bool(wall.R & trusted)


def subgroup_elements(
    ball: CayleyBall,
    generators: Sequence[Word],
    length_cap: int,
    budget: int = DEFAULT_SUBGROUP_BUDGET,
) -> List[Word]:
    """H 中正规形式长度 ≤ length_cap 的元素（中间元素允许多走 2·max|生成元|）"""
    p = ball.presentation
    gens: List[Word] = []
    for w in generators:
        x = p.element(w)
        for h in (x, p.invert(x)):
            if h and h not in gens:
                gens.append(h)
    explore = length_cap + 2 * max((len(x) for x in gens), default=0)
    seen = {""}
    frontier = [""]
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                k = p.multiply(h, s)
                if k not in seen and len(k) <= explore:
                    seen.add(k)
                    nxt.append(k)
        if len(seen) > budget:
            raise SizeError(f"子群元素超过预算 {budget}", count=len(seen), module="wallspace")
        frontier = nxt
    return sorted((h for h in seen if len(h) <= length_cap), key=p.shortlex_key)


def coset_neighborhood(ball: CayleyBall, family: WallFamily, g: Word, radius: int) -> int:
    """gN_r(H) ∩ 球 = {g·h·w : h ∈ H, |w| ≤ r}"""
    p = ball.presentation
    if radius > ball.radius:
        raise ScaleError(
            f"邻域半径 {radius} 超过球半径 {ball.radius}", minimal_radius=radius, module="wallspace"
        )
    cap = ball.radius + len(g) + radius
    H = subgroup_elements(ball, family.subgroup_generators, cap)
    short = [w for w, d in zip(ball.words, ball.distance) if d <= radius]
    mask = 0
    for h in H:
        gh = p.multiply(g, h)
        for w in short:
            idx = ball.index_of(p.multiply(gh, w) if w else gh)
            if idx is not None:
                mask |= 1 << idx
    return mask


def _complement_components(ball: CayleyBall, removed: int) -> List[int]:
    n = len(ball)
    keep = [v for v in range(n) if not (removed >> v) & 1]
    comps = [mask_of(c) for c in nx.connected_components(ball.graph.subgraph(keep))]
    comps.sort(key=lowest)
    return comps


def _deep_vertices(ball: CayleyBall, carrier: int, trusted: int, threshold: int) -> int:
    sources = bits(carrier)
    depth = nx.multi_source_dijkstra_path_length(ball.graph, sources) if sources else {}
    deep = 0
    for v in iter_bits(trusted & ~carrier):
        if depth.get(v, math.inf) >= threshold:
            deep |= 1 << v
    return deep


def component_census(
    ball: CayleyBall,
    family: WallFamily,
    g: Word = "",
    *,
    margin: Optional[int] = None,
    depth_threshold: Optional[int] = None,
    radius: Optional[int] = None,
) -> Dict[str, Any]:
    """补集分支的统计：分支数、深分支数、各分支大小"""
    p = ball.presentation
    m = default_margin(ball.radius) if margin is None else margin
    threshold = default_depth_threshold(ball.radius, m) if depth_threshold is None else depth_threshold
    r = family.neighborhood_radius if radius is None else radius
    nbhd = coset_neighborhood(ball, family, p.element(g), r)
    comps = _complement_components(ball, nbhd)
    deep = _deep_vertices(ball, nbhd, ball.trusted_mask(m), threshold)
    return {
        "translate": p.element(g),
        "radius": r,
        "carrier_size": nbhd.bit_count(),
        "components": len(comps),
        "deep": sum(1 for c in comps if c & deep),
        "sizes": [c.bit_count() for c in comps],
    }


def wall_from_subgroup(
    ball: CayleyBall,
    family: WallFamily,
    g: Word = "",
    *,
    margin: Optional[int] = None,
    depth_threshold: Optional[int] = None,
    radius: Optional[int] = None,
    family_index: int = 0,
    base_vertex: Optional[Word] = None,
) -> Wall:
    """删去 gN_r(H)，把一个深分支定为 ←N，其余并为 →N

    ←N 的选取：有 anchor 时取包含 g·anchor 的深分支；否则取包含 g·v0 的深分支，
    v0 是未平移墙的 shortlex 最小深顶点；都不适用时退回当前 shortlex 最小的深顶点。
    """
    p = ball.presentation
    R = ball.radius
    m = default_margin(R) if margin is None else margin
    threshold = default_depth_threshold(R, m) if depth_threshold is None else depth_threshold
    r = family.neighborhood_radius if radius is None else radius
    g = p.element(g)
    trusted = ball.trusted_mask(m)

    nbhd = coset_neighborhood(ball, family, g, r)
    if not nbhd & trusted:
        raise ScaleError(
            f"平移 {g or '1'} 后的邻域与半径 {R - m} 的可信子球不相交",
            minimal_radius=None,
            module="wallspace",
        )
    full = full_mask(len(ball))
    if nbhd == full:
        raise ScaleError(f"邻域吞没了整个半径 {R} 的球", minimal_radius=None, module="wallspace")

    comps = _complement_components(ball, nbhd)
    deep = _deep_vertices(ball, nbhd, trusted, threshold)
    deep_comps = [c for c in comps if c & deep]
    if len(deep_comps) < 2:
        census = {
            "translate": g,
            "radius": r,
            "components": len(comps),
            "deep": len(deep_comps),
            "sizes": [c.bit_count() for c in comps],
        }
        raise NotCodimensionOneError(
            f"{family.label or '墙族'} 在平移 {g or '1'}、半径 r={r} 下只有 {len(deep_comps)} 个深分支",
            census=census,
            module="wallspace",
        )

    if base_vertex is None and family.anchor is None and g:
        try:
            base = wall_from_subgroup(
                ball, family, "", margin=m, depth_threshold=threshold, radius=r, family_index=family_index
            )
            base_vertex = ball.words[lowest(base.deep_vertices & base.L)]
        except CubulateError:
            base_vertex = None

    target: Optional[int] = None
    if family.anchor is not None:
        target = ball.index_of(p.multiply(g, p.element(family.anchor)))
    elif base_vertex is not None:
        target = ball.index_of(p.multiply(g, base_vertex))
    left = 0
    if target is not None:
        left = next((c for c in deep_comps if (c >> target) & 1), 0)
    if not left:
        least = lowest(deep)
        left = next(c for c in deep_comps if (c >> least) & 1)

    if family.absorb_carrier:
        right, carrier = full & ~left, 0
    else:
        right, carrier = full & ~left & ~nbhd, nbhd
    return make_wall(
        ball,
        left,
        right,
        carrier=carrier,
        label=f"{family.label}@{g or '1'}",
        origin=(family_index, g),
        radius_used=r,
        neighborhood=nbhd,
        deep_vertices=deep,
    )


def wall_with_radius_retry(
    ball: CayleyBall,
    family: WallFamily,
    g: Word = "",
    max_radius: Optional[int] = None,
    **kwargs: Any,
) -> Tuple[Wall, int]:
    """r = r_i, r_i + 1, ... 依次重试，直到得到两个深分支或达到上限"""
    cap = max_radius if max_radius is not None else family.max_radius
    if cap is None:
        cap = family.neighborhood_radius
    last: Optional[NotCodimensionOneError] = None
    for r in range(family.neighborhood_radius, cap + 1):
        try:
            return wall_from_subgroup(ball, family, g, radius=r, **kwargs), r
        except NotCodimensionOneError as exc:
            last = exc
            logger.info("墙族 %s 平移 %s 在 r=%d 时失败: %s", family.label, g or "1", r, exc.census)
    assert last is not None
    raise last


def family_translates(
    ball: CayleyBall,
    family: WallFamily,
    translate_radius: Optional[int] = None,
    *,
    translates: Optional[Sequence[Word]] = None,
    margin: Optional[int] = None,
    depth_threshold: Optional[int] = None,
    family_index: int = 0,
    max_radius: Optional[int] = None,
    trusted_only: bool = True,
) -> List[Wall]:
    """一族墙的所有平移 gW（|g| ≤ translate_radius 或显式列表），按划分去重"""
    p = ball.presentation
    m = default_margin(ball.radius) if margin is None else margin
    threshold = default_depth_threshold(ball.radius, m) if depth_threshold is None else depth_threshold
    trusted = ball.trusted_mask(m)
    if translates is None:
        limit = ball.radius if translate_radius is None else translate_radius
        elements = [w for w, d in zip(ball.words, ball.distance) if d <= limit]
    else:
        elements = sorted({p.element(t) for t in translates}, key=p.shortlex_key)

    base_vertex: Optional[Word] = None
    if family.anchor is None:
        try:
            base, _ = wall_with_radius_retry(
                ball, family, "", max_radius, margin=m, depth_threshold=threshold, family_index=family_index
            )
            base_vertex = ball.words[lowest(base.deep_vertices & base.L)]
        except CubulateError as exc:
            logger.info("墙族 %s 的基础墙构造失败，回退到逐个平移选侧: %s", family.label, exc)

    walls: List[Wall] = []
    seen = set()
    skipped = 0
    for g in elements:
        try:
            wall, _ = wall_with_radius_retry(
                ball,
                family,
                g,
                max_radius,
                margin=m,
                depth_threshold=threshold,
                family_index=family_index,
                base_vertex=base_vertex,
            )
        except (NotCodimensionOneError, ScaleError) as exc:
            skipped += 1
            logger.debug("跳过平移 %s: %s", g or "1", exc)
            continue
        if trusted_only and not wall_is_trusted(ball, wall, trusted):
            skipped += 1
            continue
        key = (wall.L, wall.R, wall.carrier)
        if key in seen:
            continue
        seen.add(key)
        walls.append(wall)
    logger.info("墙族 %s: %d 个平移，得到 %d 面墙，跳过 %d 个", family.label, len(elements), len(walls), skipped)
    return walls


def edge_wall(ball: CayleyBall, u: VertexRef, v: VertexRef, label: str = "") -> Wall:
    """切断 u-v 边得到的抽象墙；←N 为包含更靠近单位元端点的一侧"""
    ui, vi = ball.resolve(u), ball.resolve(v)
    if not ball.graph.has_edge(ui, vi):
        raise InputError(f"{ball.words[ui] or '1'} 与 {ball.words[vi] or '1'} 之间没有边", module="wallspace")
    g = ball.graph.copy()
    g.remove_edge(ui, vi)
    near, far = sorted((ui, vi))
    side = nx.node_connected_component(g, near)
    if far in side:
        raise InputError(
            f"边 {ball.words[ui] or '1'}-{ball.words[vi] or '1'} 不分离球", module="wallspace"
        )
    left = mask_of(side)
    right = full_mask(len(ball)) & ~left
    name = label or f"edge({ball.words[near] or '1'},{ball.words[far] or '1'})"
    return make_wall(ball, left, right, label=name)


def edge_walls(ball: CayleyBall, margin: int = 0, trusted_only: bool = True) -> List[Wall]:
    """每条割边一面墙，按端点下标排序"""
    trusted = ball.trusted_mask(margin)
    bridges = sorted(tuple(sorted(e)) for e in nx.bridges(ball.graph))
    walls = []
    for u, v in bridges:
        wall = edge_wall(ball, u, v)
        if trusted_only and not wall_is_trusted(ball, wall, trusted):
            continue
        walls.append(wall)
    return walls


def abstract_wall(ball: CayleyBall, left_words: Iterable[Word], label: str = "") -> Wall:
    """显式给出 ←N，→N 为其补集"""
    left = 0
    for w in left_words:
        left |= 1 << ball.resolve(w)
    right = full_mask(len(ball)) & ~left
    if not left or not right:
        raise InputError(f"抽象墙 {label} 的某一侧为空", module="wallspace")
    return make_wall(ball, left, right, label=label)


# ----------------------------------------------------------------------
# 谓词
# ----------------------------------------------------------------------
def _resolve_pair(ws: Wallspace, u: VertexRef, v: VertexRef) -> Tuple[int, int]:
    ui, vi = ws.ball.resolve(u), ws.ball.resolve(v)
    for x in (ui, vi):
        if not (ws.trusted >> x) & 1:
            raise BoundaryUncertaintyError(
                f"顶点 {ws.ball.words[x] or '1'} 不在半径 {ws.trusted_radius} 的可信子球内"
            )
    return ui, vi


def separating_walls(ws: Wallspace, u: VertexRef, v: VertexRef) -> int:
    """把 u, v 分在两侧的墙（bitset）；u 或 v 落在载体里的墙不计"""
    ui, vi = _resolve_pair(ws, u, v)
    L, R = ws.left_masks, ws.right_masks
    return (L[ui] & R[vi]) | (R[ui] & L[vi])


def separation_count(ws: Wallspace, u: VertexRef, v: VertexRef) -> int:
    """#(u, v)"""
    ambiguous = carrier_ambiguous(ws, u, v)
    if ambiguous:
        logger.debug("#(%s, %s): %d 面墙的载体含端点，已跳过", u, v, len(ambiguous))
    return separating_walls(ws, u, v).bit_count()


def carrier_ambiguous(ws: Wallspace, u: VertexRef, v: VertexRef) -> List[int]:
    """载体包含 u 或 v、因此在 separation_count 中被跳过的墙"""
    ui, vi = _resolve_pair(ws, u, v)
    C = ws.carrier_masks
    return bits(C[ui] | C[vi])


def relation_on(l1: int, r1: int, l2: int, r2: int, region: int) -> Optional[Nesting]:
    """region 上两面墙的关系：返回第一个为空的交 (LL, LR, RL, RR)，全部非空（穿越）时返回 None"""
    for verdict, a, b in (
        (Nesting.LL, l1, l2),
        (Nesting.LR, l1, r2),
        (Nesting.RL, r1, l2),
        (Nesting.RR, r1, r2),
    ):
        if not a & b & region:
            return verdict
    return None


def _trusted_pair(ws: Wallspace, w1: Union[int, Wall], w2: Union[int, Wall]) -> Tuple[Wall, Wall]:
    a = ws.walls[w1] if isinstance(w1, int) else w1
    b = ws.walls[w2] if isinstance(w2, int) else w2
    for w in (a, b):
        if not ws.is_trusted(w):
            raise BoundaryUncertaintyError(f"墙 {w.label} 不可信（边界或某一侧不在可信子球内）")
    return a, b


def crosses(ws: Wallspace, w1: Union[int, Wall], w2: Union[int, Wall]) -> bool:
    a, b = _trusted_pair(ws, w1, w2)
    return relation_on(a.L, a.R, b.L, b.R, ws.trusted) is None


def nests(ws: Wallspace, w1: Union[int, Wall], w2: Union[int, Wall]) -> Optional[Nesting]:
    """XY 表示 W1.X ∩ W2.Y = ∅（等价地 W1.X ⊆ W2 的另一侧）；穿越时返回 None"""
    a, b = _trusted_pair(ws, w1, w2)
    return relation_on(a.L, a.R, b.L, b.R, ws.trusted)


def crossing_masks(ws: Wallspace) -> List[int]:
    """crossing_masks[i] 的第 j 位为 1 表示墙 i、j 在可信子球上穿越"""
    T = ws.trusted
    out = [0] * len(ws.walls)
    for i, a in enumerate(ws.walls):
        for j in range(i + 1, len(ws.walls)):
            b = ws.walls[j]
            if relation_on(a.L, a.R, b.L, b.R, T) is None:
                out[i] |= 1 << j
                out[j] |= 1 << i
    return out


# ----------------------------------------------------------------------
# 墙描述文件
# ----------------------------------------------------------------------
def load_walls_spec(path: Path) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise MalformedInputError(f"墙描述文件不存在: {path}", module="wallspace")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return toml.load(f)
    except toml.TomlDecodeError as e:
        raise MalformedInputError(f"墙描述文件格式错误: {e}", module="wallspace") from None


def build_wallspace(ball: CayleyBall, spec: Dict[str, Any], margin: Optional[int] = None) -> Wallspace:
    """按墙描述文件构造墙空间；语法见 docs/formats.md"""
    section = spec.get("walls", {}) or {}
    m = margin if margin is not None else section.get("margin")
    m = default_margin(ball.radius) if m is None else int(m)
    threshold = section.get("depth_threshold")
    threshold = default_depth_threshold(ball.radius, m) if threshold is None else int(threshold)

    families: List[WallFamily] = []
    walls: List[Wall] = []
    seen = set()

    def _add(wall: Wall) -> None:
        key = (wall.L, wall.R, wall.carrier)
        if key not in seen:
            seen.add(key)
            walls.append(wall)

    for index, fam_cfg in enumerate(spec.get("families", []) or []):
        family = WallFamily.from_dict(fam_cfg)
        families.append(family)
        explicit = fam_cfg.get("translates")
        for wall in family_translates(
            ball,
            family,
            fam_cfg.get("translate_radius", 0) if explicit is None else None,
            translates=explicit,
            margin=m,
            depth_threshold=threshold,
            family_index=index,
            trusted_only=bool(fam_cfg.get("trusted_only", True)),
        ):
            _add(wall)

    for i, item in enumerate(spec.get("abstract", []) or []):
        label = str(item.get("label", f"abstract{i}"))
        if "edge" in item:
            u, v = item["edge"]
            _add(edge_wall(ball, str(u), str(v), label=label))
        elif "left" in item:
            _add(abstract_wall(ball, [str(w) for w in item["left"]], label=label))
        else:
            raise MalformedInputError(f"抽象墙 {label} 需要 left 或 edge", module="wallspace")

    if section.get("edge_walls"):
        for wall in edge_walls(ball, m):
            _add(wall)

    ws = Wallspace(ball=ball, walls=tuple(walls), families=tuple(families), margin=m, depth_threshold=threshold)
    logger.info("墙空间: %d 面墙, %d 个族, margin=%d", len(walls), len(families), m)
    return ws


__all__ = [
    "Side",
    "Nesting",
    "Halfspace",
    "Wall",
    "WallFamily",
    "Wallspace",
    "default_margin",
    "default_depth_threshold",
    "make_wall",
    "wall_frontier",
    "wall_is_trusted",
    "subgroup_elements",
    "coset_neighborhood",
    "component_census",
    "wall_from_subgroup",
    "wall_with_radius_retry",
    "family_translates",
    "edge_wall",
    "edge_walls",
    "abstract_wall",
    "separating_walls",
    "separation_count",
    "carrier_ambiguous",
    "relation_on",
    "crosses",
    "nests",
    "crossing_masks",
    "load_walls_spec",
    "build_wallspace",
    "WALLSPACE_FORMAT",
    "WALLSPACE_VERSION",
]
