"""
有限墙空间的对偶立方复形

0-立方体是一致定向（每面墙选一侧，任意两面墙选中的半空间在可信子球上相交），
从主定向出发、只经由单墙翻转可达的那些。定向用 int 表示：第 i 位为 1 表示墙 i 朝向 ←N。
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from cubulate.core.ball import VertexRef, build_ball
from cubulate.core.bitset import bits, full_mask, iter_bits
from cubulate.core.errors import (
    InputError,
    OracleRefusedError,
    SizeError,
    UnreachableError,
)
from cubulate.core.presentation import GroupPresentation
from cubulate.utils.system import ensure_memory_headroom
from cubulate.walls.wallspace import (
    WallFamily,
    Wallspace,
    crossing_masks,
    default_depth_threshold,
    default_margin,
    family_translates,
)

logger = logging.getLogger(__name__)

DUAL_FORMAT = "cubulate.dual"
DUAL_VERSION = 1
DEFAULT_MAX_DIM = 8
DEFAULT_WALL_BUDGET = 64
DEFAULT_ZERO_CUBE_BUDGET = 1_000_000
ORACLE_WALL_LIMIT = 20
MEDIAN_VERTEX_LIMIT = 2000

DOT_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def orientation_string(sigma: int, k: int) -> str:
    """按墙的顺序写出 L/R"""
    return "".join("L" if (sigma >> i) & 1 else "R" for i in range(k))


def hamming(sigma: int, tau: int) -> int:
    return (sigma ^ tau).bit_count()


class OrientationChecker:
    """一致性判定表

    forbid_left[i][s]：墙 i 取侧 s（1=L, 0=R）时不能取 L 的墙；forbid_right 同理。
    """

    def __init__(self, ws: Wallspace):
        T = ws.trusted
        k = len(ws.walls)
        sides = [(w.R & T, w.L & T) for w in ws.walls]
        self.k = k
        self.full = full_mask(k)
        self.forbid_left: List[List[int]] = [[0, 0] for _ in range(k)]
        self.forbid_right: List[List[int]] = [[0, 0] for _ in range(k)]
        for i in range(k):
            for s in (0, 1):
                a = sides[i][s]
                for j in range(k):
                    if j == i:
                        continue
                    if not a & sides[j][1]:
                        self.forbid_left[i][s] |= 1 << j
                    if not a & sides[j][0]:
                        self.forbid_right[i][s] |= 1 << j

    def consistent_at(self, sigma: int, i: int) -> bool:
        """只检查包含墙 i 的墙对"""
        s = (sigma >> i) & 1
        return not (self.forbid_left[i][s] & sigma) and not (self.forbid_right[i][s] & ~sigma & self.full)

    def is_consistent(self, sigma: int) -> bool:
        return all(self.consistent_at(sigma, i) for i in range(self.k))

    def can_flip(self, sigma: int, i: int) -> bool:
        return self.consistent_at(sigma ^ (1 << i), i)


def _deep_distances(ws: Wallspace, i: int, cache: Dict[int, Tuple[Dict[int, int], Dict[int, int]]]):
    hit = cache.get(i)
    if hit is None:
        wall = ws.walls[i]
        G = ws.ball.graph
        out = []
        for members in (wall.L, wall.R):
            sources = bits((wall.deep_vertices & members) or members)
            out.append(nx.multi_source_dijkstra_path_length(G, sources))
        hit = (out[0], out[1])
        cache[i] = hit
    return hit


def principal_orientation(
    ws: Wallspace,
    v: VertexRef,
    _cache: Optional[Dict[int, Tuple[Dict[int, int], Dict[int, int]]]] = None,
) -> int:
    """每面墙朝向包含 v 的一侧；v 在载体里时朝向深顶点更近的一侧（相等取 L）"""
    vi = ws.ball.resolve(v)
    sigma = ws.left_masks[vi]
    ambiguous = ws.carrier_masks[vi]
    if ambiguous:
        cache = {} if _cache is None else _cache
        for i in iter_bits(ambiguous):
            dl, dr = _deep_distances(ws, i, cache)
            if dl.get(vi, math.inf) <= dr.get(vi, math.inf):
                sigma |= 1 << i
        logger.debug("顶点 %s 落在 %d 面墙的载体里", ws.ball.words[vi] or "1", ambiguous.bit_count())
    return sigma


@dataclass(frozen=True)
class Cube:
    """n-立方体：walls 两两穿越；corners 的第 c 个角在 walls[t] 上取 L 当且仅当 c 的第 t 位为 1"""

    walls: Tuple[int, ...]
    base: int
    corners: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.walls)

    @property
    def wall_mask(self) -> int:
        mask = 0
        for w in self.walls:
            mask |= 1 << w
        return mask

    def to_dict(self) -> Dict[str, Any]:
        return {"walls": list(self.walls), "base": self.base, "corners": list(self.corners)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Cube":
        return cls(
            walls=tuple(int(w) for w in data["walls"]),
            base=int(data["base"]),
            corners=tuple(int(c) for c in data["corners"]),
        )


@dataclass(frozen=True)
class DualComplex:
    wallspace: Wallspace
    orientations: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (u, 墙, v)，u < v
    cubes: Tuple[Cube, ...]  # 维数 ≥ 2
    principal: Tuple[int, ...]  # 球顶点 -> 0-立方体下标，不可信顶点为 -1
    max_dim: int = DEFAULT_MAX_DIM

    _cache: Dict[str, Any] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_cache", {"index": {s: i for i, s in enumerate(self.orientations)}})

    def __len__(self) -> int:
        return len(self.orientations)

    @property
    def wall_count(self) -> int:
        return len(self.wallspace.walls)

    def index_of(self, sigma: int) -> Optional[int]:
        return self._cache["index"].get(sigma)

    def principal_vertex(self, v: VertexRef) -> int:
        vi = self.wallspace.ball.resolve(v)
        idx = self.principal[vi]
        if idx < 0:
            raise InputError(f"顶点 {self.wallspace.ball.words[vi] or '1'} 没有主定向（不在可信子球内）", module="sageev-dual")
        return idx

    def sides(self, i: int) -> str:
        return orientation_string(self.orientations[i], self.wall_count)

    def skeleton(self) -> nx.Graph:
        """1-骨架，边属性 wall 为翻转的墙"""
        g = self._cache.get("skeleton")
        if g is None:
            g = nx.Graph()
            g.add_nodes_from(range(len(self.orientations)))
            for u, w, v in self.edges:
                g.add_edge(u, v, wall=w)
            self._cache["skeleton"] = g
        return g

    def cubes_of_dim(self, n: int) -> List[Cube]:
        return [c for c in self.cubes if c.dim == n]

    @property
    def dimension(self) -> int:
        if self.cubes:
            return max(c.dim for c in self.cubes)
        return 1 if self.edges else 0

    def census(self) -> Dict[str, Any]:
        counts: Dict[int, int] = {0: len(self.orientations), 1: len(self.edges)}
        for c in self.cubes:
            counts[c.dim] = counts.get(c.dim, 0) + 1
        return {
            "walls": self.wall_count,
            "zero_cubes": len(self.orientations),
            "one_cubes": len(self.edges),
            "cubes_by_dim": {str(d): counts[d] for d in sorted(counts)},
            "dimension": self.dimension,
            "max_dim": self.max_dim,
        }

    def without_edge(self, k: int) -> "DualComplex":
        """删掉第 k 条 1-立方体以及包含它的高维立方体（用于中位性检查的反例）"""
        u, w, v = self.edges[k]
        cubes = tuple(
            c for c in self.cubes if not (w in c.walls and u in c.corners and v in c.corners)
        )
        return DualComplex(
            wallspace=self.wallspace,
            orientations=self.orientations,
            edges=self.edges[:k] + self.edges[k + 1:],
            cubes=cubes,
            principal=self.principal,
            max_dim=self.max_dim,
        )

    def to_dot(self) -> str:
        """1-骨架的 DOT，边按超平面（墙）着色"""
        lines = ["graph dual {", "  node [shape=point];"]
        k = self.wall_count
        for i, sigma in enumerate(self.orientations):
            lines.append(f'  v{i} [xlabel="{orientation_string(sigma, k)}"];')
        for u, w, v in self.edges:
            color = DOT_PALETTE[w % len(DOT_PALETTE)]
            label = self.wallspace.walls[w].label or str(w)
            lines.append(f'  v{u} -- v{v} [color="{color}", tooltip="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": DUAL_FORMAT,
            "version": DUAL_VERSION,
            "wallspace": self.wallspace.to_dict(),
            "orientations": list(self.orientations),
            "edges": [list(e) for e in self.edges],
            "cubes": [c.to_dict() for c in self.cubes],
            "principal": list(self.principal),
            "max_dim": self.max_dim,
            "census": self.census(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DualComplex":
        return cls(
            wallspace=Wallspace.from_dict(data["wallspace"]),
            orientations=tuple(int(s) for s in data["orientations"]),
            edges=tuple((int(u), int(w), int(v)) for u, w, v in data["edges"]),
            cubes=tuple(Cube.from_dict(c) for c in data.get("cubes", [])),
            principal=tuple(int(x) for x in data["principal"]),
            max_dim=int(data.get("max_dim", DEFAULT_MAX_DIM)),
        )


# ----------------------------------------------------------------------
# 构造
# ----------------------------------------------------------------------
def _check_sides(ws: Wallspace) -> None:
    T = ws.trusted
    for i, w in enumerate(ws.walls):
        if not w.L & T or not w.R & T:
            raise InputError(f"墙 {i} ({w.label}) 的某一侧在可信子球上为空", module="sageev-dual")


def build_dual(
    ws: Wallspace,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
    wall_budget: int = DEFAULT_WALL_BUDGET,
    zero_cube_budget: int = DEFAULT_ZERO_CUBE_BUDGET,
) -> DualComplex:
    """主定向出发的翻转 BFS，再按角点局部判定填充立方体

    编号顺序：单位元的主定向为 0 号，BFS 按墙下标翻转；其余可信顶点按下标依次作为种子。
    """
    k = len(ws.walls)
    if k > wall_budget:
        raise SizeError(f"墙数 {k} 超过预算 {wall_budget}", count=k, module="sageev-dual")
    _check_sides(ws)
    checker = OrientationChecker(ws)
    index: Dict[int, int] = {}
    orientations: List[int] = []
    principal = [-1] * len(ws.ball)
    cache: Dict[int, Tuple[Dict[int, int], Dict[int, int]]] = {}
    inconsistent = 0
    components = 0

    def _explore(seed: int) -> None:
        index[seed] = len(orientations)
        orientations.append(seed)
        queue = deque([seed])
        while queue:
            sigma = queue.popleft()
            for i in range(k):
                tau = sigma ^ (1 << i)
                if tau in index or not checker.can_flip(sigma, i):
                    continue
                index[tau] = len(orientations)
                orientations.append(tau)
                if len(orientations) > zero_cube_budget:
                    raise SizeError(
                        f"0-立方体数超过预算 {zero_cube_budget}",
                        count=len(orientations),
                        census={"walls": k, "zero_cubes": len(orientations)},
                        module="sageev-dual",
                    )
                queue.append(tau)

    for v in iter_bits(ws.trusted):
        sigma = principal_orientation(ws, v, cache)
        if not checker.is_consistent(sigma):
            inconsistent += 1
            continue
        if sigma not in index:
            components += 1
            _explore(sigma)
        principal[v] = index[sigma]
    if inconsistent:
        logger.warning("%d 个可信顶点的主定向不一致（载体顶点），未作为种子", inconsistent)
    if components > 1:
        logger.warning("对偶 1-骨架有 %d 个连通分支", components)

    edges: List[Tuple[int, int, int]] = []
    for u, sigma in enumerate(orientations):
        for i in range(k):
            v = index.get(sigma ^ (1 << i))
            if v is not None and v > u:
                edges.append((u, i, v))

    cubes = _fill_cubes(ws, orientations, index, max_dim) if max_dim >= 2 else []
    dc = DualComplex(
        wallspace=ws,
        orientations=tuple(orientations),
        edges=tuple(edges),
        cubes=tuple(cubes),
        principal=tuple(principal),
        max_dim=max_dim,
    )
    logger.info("对偶复形: %s", dc.census())
    return dc


def _fill_cubes(ws: Wallspace, orientations: Sequence[int], index: Dict[int, int], max_dim: int) -> List[Cube]:
    k = len(ws.walls)
    cross = crossing_masks(ws)
    found: Dict[Tuple[int, int], Cube] = {}
    for sigma in orientations:
        flippable = [i for i in range(k) if (sigma ^ (1 << i)) in index]
        if len(flippable) < 2:
            continue
        g = nx.Graph()
        g.add_nodes_from(flippable)
        g.add_edges_from((i, j) for i in flippable for j in flippable if i < j and (cross[i] >> j) & 1)
        for clique in nx.enumerate_all_cliques(g):
            if len(clique) < 2:
                continue
            if len(clique) > max_dim:
                break
            walls = tuple(sorted(clique))
            smask = sum(1 << w for w in walls)
            base = sigma & ~smask
            if (base, smask) in found:
                continue
            corners = []
            for c in range(1 << len(walls)):
                tau = base
                for t, w in enumerate(walls):
                    if (c >> t) & 1:
                        tau |= 1 << w
                j = index.get(tau)
                if j is None:
                    break
                corners.append(j)
            else:
                found[(base, smask)] = Cube(walls=walls, base=base, corners=tuple(corners))
    return sorted(found.values(), key=lambda c: (c.dim, c.corners[0], c.walls))


# ----------------------------------------------------------------------
# 穷举 oracle
# ----------------------------------------------------------------------
def enumerate_orientations_oracle(ws: Wallspace) -> Set[int]:
    """枚举全部 2^k 个定向，过滤一致性，再取与主定向翻转连通的部分"""
    k = len(ws.walls)
    if k > ORACLE_WALL_LIMIT:
        raise OracleRefusedError(f"oracle 只接受不超过 {ORACLE_WALL_LIMIT} 面墙，当前 {k} 面")
    T = ws.trusted
    masks = np.arange(1 << k, dtype=np.int64)
    ok = np.ones(1 << k, dtype=bool)
    sides = [(w.R & T, w.L & T) for w in ws.walls]
    for i in range(k):
        bi = (masks >> i) & 1
        for j in range(i + 1, k):
            bj = (masks >> j) & 1
            for si in (0, 1):
                for sj in (0, 1):
                    if not sides[i][si] & sides[j][sj]:
                        ok &= ~((bi == si) & (bj == sj))
    consistent = {int(x) for x in masks[ok]}
    reached: Set[int] = set()
    stack = [s for s in (principal_orientation(ws, v) for v in iter_bits(T)) if s in consistent]
    while stack:
        sigma = stack.pop()
        if sigma in reached:
            continue
        reached.add(sigma)
        for i in range(k):
            tau = sigma ^ (1 << i)
            if tau in consistent and tau not in reached:
                stack.append(tau)
    return reached


# ----------------------------------------------------------------------
# 度量与中位性
# ----------------------------------------------------------------------
def dual_distance(dc: DualComplex, i: int, j: int) -> int:
    n = len(dc)
    if not (0 <= i < n and 0 <= j < n):
        raise InputError(f"0-立方体下标越界: {i}, {j}（共 {n} 个）", module="sageev-dual")
    try:
        return nx.shortest_path_length(dc.skeleton(), i, j)
    except nx.NetworkXNoPath:
        raise UnreachableError(f"0-立方体 {i} 与 {j} 不连通（对偶 1-骨架应当连通）") from None


@dataclass
class MedianReport:
    ok: bool
    vertices: int
    failure: Optional[Tuple[int, int, int]] = None
    median_count: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "vertices": self.vertices,
            "failure": list(self.failure) if self.failure else None,
            "median_count": self.median_count,
        }


def distance_matrix(dc: DualComplex) -> np.ndarray:
    n = len(dc)
    ensure_memory_headroom(n * n * 8 * 4, "中位性检查的距离矩阵")
    D = np.full((n, n), -1, dtype=np.int64)
    for u, lengths in nx.all_pairs_shortest_path_length(dc.skeleton()):
        for v, d in lengths.items():
            D[u, v] = d
    return D


def check_median(dc: DualComplex, vertex_limit: int = MEDIAN_VERTEX_LIMIT) -> MedianReport:
    """对每个三元组检查三条测地区间的交恰好是一个顶点；报告第一个失败的三元组"""
    n = len(dc)
    if n > vertex_limit:
        raise SizeError(f"中位性检查最多支持 {vertex_limit} 个顶点，当前 {n}", count=n, module="sageev-dual")
    D = distance_matrix(dc)
    if (D < 0).any():
        u, v = (int(x) for x in np.argwhere(D < 0)[0])
        raise UnreachableError(f"0-立方体 {u} 与 {v} 不连通（对偶 1-骨架应当连通）")
    for a in range(n):
        for b in range(a + 1, n - 1):
            # 中位点只能落在 I(a, b) 里
            cand = np.flatnonzero((D[a] + D[b]) == D[a, b])
            rows = D[b + 1:, cand]
            in_bc = (D[b, cand][None, :] + rows) == D[b, b + 1:][:, None]
            in_ac = (D[a, cand][None, :] + rows) == D[a, b + 1:][:, None]
            counts = (in_bc & in_ac).sum(axis=1)
            bad = np.nonzero(counts != 1)[0]
            if bad.size:
                c = b + 1 + int(bad[0])
                logger.info("中位性失败: (%d, %d, %d) 有 %d 个中位点", a, b, c, int(counts[bad[0]]))
                return MedianReport(ok=False, vertices=n, failure=(a, b, c), median_count=int(counts[bad[0]]))
    return MedianReport(ok=True, vertices=n)


# ----------------------------------------------------------------------
# 诊断
# ----------------------------------------------------------------------
@dataclass
class OrbitCensus:
    """每个维数的立方体数与平移轨道数（0-立方体不计轨道）"""

    rows: List[Dict[str, Any]]

    def orbits(self, dim: int) -> Optional[int]:
        for row in self.rows:
            if row["dim"] == dim:
                return row["orbits"]
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["dim", "cubes", "orbits"])

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": list(self.rows)}


def _orbit_key(ws: Wallspace, walls: Iterable[int]) -> Tuple[Any, ...]:
    """以第一面墙的平移元 g 把整组墙左乘 g⁻¹，作为平移轨道的代表"""
    p = ws.ball.presentation
    walls = list(walls)
    origins = [ws.walls[w].origin for w in walls]
    if any(o is None for o in origins):
        return tuple(("abstract", w) for w in walls)
    g_inv = p.invert(origins[0][1])
    return tuple(sorted((f, p.multiply(g_inv, g)) for f, g in origins))


def orbit_census(dc: DualComplex, ws: Optional[Wallspace] = None) -> OrbitCensus:
    ws = dc.wallspace if ws is None else ws
    rows: List[Dict[str, Any]] = [{"dim": 0, "cubes": len(dc), "orbits": None}]
    edge_orbits = {_orbit_key(ws, [w]) for _, w, _ in dc.edges}
    rows.append({"dim": 1, "cubes": len(dc.edges), "orbits": len(edge_orbits)})
    by_dim: Dict[int, Set[Tuple[Any, ...]]] = {}
    counts: Dict[int, int] = {}
    for c in dc.cubes:
        by_dim.setdefault(c.dim, set()).add(_orbit_key(ws, c.walls))
        counts[c.dim] = counts.get(c.dim, 0) + 1
    for d in sorted(by_dim):
        rows.append({"dim": d, "cubes": counts[d], "orbits": len(by_dim[d])})
    return OrbitCensus(rows)


def dual_growth(
    p: GroupPresentation,
    families: Sequence[WallFamily],
    radii: Sequence[int],
    margin: Optional[int] = None,
    translate_radius: Optional[int] = None,
    **build_kwargs: Any,
) -> pd.DataFrame:
    """在一串半径上重建墙空间与对偶复形，记录规模随 R 的增长"""
    rows = []
    for R in radii:
        ball = build_ball(p, R)
        m = default_margin(R) if margin is None else margin
        threshold = default_depth_threshold(R, m)
        walls = []
        seen = set()
        for index, family in enumerate(families):
            for wall in family_translates(
                ball,
                family,
                (R - m) if translate_radius is None else translate_radius,
                margin=m,
                depth_threshold=threshold,
                family_index=index,
            ):
                key = (wall.L, wall.R, wall.carrier)
                if key not in seen:
                    seen.add(key)
                    walls.append(wall)
        ws = Wallspace(ball=ball, walls=tuple(walls), families=tuple(families), margin=m, depth_threshold=threshold)
        dc = build_dual(ws, **build_kwargs)
        census = dc.census()
        rows.append(
            {
                "radius": R,
                "walls": len(walls),
                "zero_cubes": census["zero_cubes"],
                "one_cubes": census["one_cubes"],
                "squares": census["cubes_by_dim"].get("2", 0),
                "dimension": census["dimension"],
            }
        )
        logger.info("R=%d: %s", R, rows[-1])
    return pd.DataFrame(rows, columns=["radius", "walls", "zero_cubes", "one_cubes", "squares", "dimension"])


__all__ = [
    "Cube",
    "DualComplex",
    "MedianReport",
    "OrbitCensus",
    "OrientationChecker",
    "orientation_string",
    "hamming",
    "principal_orientation",
    "build_dual",
    "enumerate_orientations_oracle",
    "dual_distance",
    "distance_matrix",
    "check_median",
    "orbit_census",
    "dual_growth",
    "DUAL_FORMAT",
    "DUAL_VERSION",
    "DEFAULT_MAX_DIM",
    "DEFAULT_WALL_BUDGET",
    "DEFAULT_ZERO_CUBE_BUDGET",
    "ORACLE_WALL_LIMIT",
]
