"""
Cayley 图的有限球

顶点是正规形式的词，按 (到单位元的距离, shortlex) 排序，0 号顶点是单位元。
边是带标签的三元组 (u, s, v)，表示 v = u·s；生成集对取逆封闭，所以边关系也对称。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from cubulate.core.errors import MalformedInputError, SizeError
from cubulate.core.presentation import BuiltinKind, GroupPresentation, Word

logger = logging.getLogger(__name__)

DEFAULT_VERTEX_BUDGET = 200_000
BALL_FORMAT = "cubulate.ball"
BALL_VERSION = 1

VertexRef = Union[int, str]


def _has_infinite_growth(p: GroupPresentation) -> bool:
    tag = p.builtin
    if tag is None:
        return False
    if tag.kind in (BuiltinKind.FREE_GROUP, BuiltinKind.FREE_ABELIAN):
        return tag.rank >= 1
    if tag.kind is BuiltinKind.SURFACE_GENUS2:
        return True
    if tag.kind is BuiltinKind.RIGHT_ANGLED_ARTIN:
        return len(tag.vertices) >= 1
    # 直角 Coxeter 群有限当且仅当图是完全图
    n = len(tag.vertices)
    return len({frozenset(e) for e in tag.edges}) < n * (n - 1) // 2


@dataclass(frozen=True)
class CayleyBall:
    """半径 R 的 Cayley 球（构造后不可变）"""

    presentation: GroupPresentation
    radius: int
    generators: Tuple[Word, ...]
    words: Tuple[Word, ...]
    distance: Tuple[int, ...]
    edges: Tuple[Tuple[int, Word, int], ...]

    _index: Dict[Word, int] = field(init=False, repr=False, compare=False)
    _cache: Dict[str, Any] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})
        object.__setattr__(self, "_cache", {})

    # ------------------------------------------------------------------
    # 基本查询
    # ------------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.words)

    @property
    def ball_id(self) -> str:
        gens = ",".join(self.generators)
        return f"{self.presentation.display_name}/R{self.radius}/{gens}"

    def index_of(self, word: Word) -> Optional[int]:
        return self._index.get(word)

    def resolve(self, ref: VertexRef) -> int:
        """顶点下标或词（会先取正规形式）转成下标"""
        if isinstance(ref, int):
            if not 0 <= ref < len(self.words):
                raise MalformedInputError(f"顶点下标越界: {ref}", module="group-core")
            return ref
        word = self.presentation.element(ref)
        idx = self._index.get(word)
        if idx is None:
            raise MalformedInputError(f"元素 {word or '1'} 不在半径 {self.radius} 的球内", module="group-core")
        return idx

    def sphere(self, n: int) -> List[int]:
        return [i for i, d in enumerate(self.distance) if d == n]

    def sphere_sizes(self) -> List[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.distance:
            sizes[d] += 1
        return sizes

    def within(self, radius: int) -> int:
        """距离 ≤ radius 的顶点集合（bitset）"""
        mask = 0
        for i, d in enumerate(self.distance):
            if d <= radius:
                mask |= 1 << i
        return mask

    def trusted_mask(self, margin: int) -> int:
        return self.within(self.radius - margin)

    @property
    def graph(self) -> nx.Graph:
        g = self._cache.get("graph")
        if g is None:
            g = nx.Graph()
            g.add_nodes_from(range(len(self.words)))
            g.add_edges_from((u, v) for u, _, v in self.edges if u != v)
            self._cache["graph"] = g
        return g

    def to_dot(self) -> str:
        lines = ["graph ball {"]
        for i, w in enumerate(self.words):
            lines.append(f'  v{i} [label="{w or "1"}"];')
        for u, s, v in self.edges:
            if u < v:
                lines.append(f'  v{u} -- v{v} [label="{s}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def translation_map(self, g: Word) -> Tuple[int, ...]:
        """左乘 g 的下标映射，离开球的顶点映射为 -1"""
        cache: Dict[Word, Tuple[int, ...]] = self._cache.setdefault("translations", {})
        g = self.presentation.normal_form(g)
        mapping = cache.get(g)
        if mapping is None:
            p = self.presentation
            mapping = tuple(self._index.get(p.multiply(g, w), -1) for w in self.words)
            cache[g] = mapping
        return mapping

    def restrict(self, radius: int) -> "CayleyBall":
        """截到更小的半径；顶点顺序保持不变"""
        if radius > self.radius or radius < 0:
            raise MalformedInputError(f"无法把半径 {self.radius} 的球截到 {radius}", module="group-core")
        keep = [i for i, d in enumerate(self.distance) if d <= radius]
        return CayleyBall(
            presentation=self.presentation,
            radius=radius,
            generators=self.generators,
            words=tuple(self.words[i] for i in keep),
            distance=tuple(self.distance[i] for i in keep),
            edges=tuple((u, s, v) for u, s, v in self.edges if u < len(keep) and v < len(keep)),
        )

    # ------------------------------------------------------------------
    # 序列化
    # ------------------------------------------------------------------
    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": BALL_FORMAT,
            "version": BALL_VERSION,
            "presentation": self.presentation.to_dict(),
            "radius": self.radius,
            "generators": list(self.generators),
            "words": list(self.words),
            "distance": list(self.distance),
            "edges": [[u, s, v] for u, s, v in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CayleyBall":
        return cls(
            presentation=GroupPresentation.from_dict(data["presentation"]),
            radius=int(data["radius"]),
            generators=tuple(data["generators"]),
            words=tuple(data["words"]),
            distance=tuple(int(d) for d in data["distance"]),
            edges=tuple((int(u), str(s), int(v)) for u, s, v in data["edges"]),
        )


def build_ball(
    p: GroupPresentation,
    R: int,
    generators: Optional[Sequence[Word]] = None,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> CayleyBall:
    """BFS 构造半径 R 的球

    generators 默认为字母表中的全部符号；也可以给任意一组词（例如子群的生成元），
    会自动补上逆元。单线程 BFS，顶点编号与调度无关。
    """
    if R < 0:
        raise MalformedInputError(f"半径必须非负: {R}", module="group-core")
    if generators is None:
        gens = list(p.symbols)
    else:
        gens = []
        for g in generators:
            w = p.element(g) if isinstance(g, str) else g
            for h in (w, p.invert(w)):
                if h and h not in gens:
                    gens.append(h)
    gens.sort(key=p.shortlex_key)

    dist: Dict[Word, int] = {"": 0}
    products: Dict[Word, List[Word]] = {}
    frontier: List[Word] = [""]
    for d in range(1, R + 1):
        nxt: List[Word] = []
        for v in frontier:
            row = [p.multiply(v, s) for s in gens]
            products[v] = row
            for w in row:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
                    if len(dist) > vertex_budget:
                        raise SizeError(
                            f"球的顶点数超过预算 {vertex_budget}（在半径 {d} 处）",
                            count=len(dist),
                            census={"radius": d, "vertices": len(dist)},
                            module="group-core",
                        )
        frontier = nxt

    words = sorted(dist, key=lambda w: (dist[w], p.shortlex_key(w)))
    index = {w: i for i, w in enumerate(words)}
    edges: List[Tuple[int, Word, int]] = []
    for i, v in enumerate(words):
        row = products.get(v)
        if row is None:
            row = [p.multiply(v, s) for s in gens]
        for s, w in zip(gens, row):
            j = index.get(w)
            if j is not None:
                edges.append((i, s, j))

    ball = CayleyBall(
        presentation=p,
        radius=R,
        generators=tuple(gens),
        words=tuple(words),
        distance=tuple(dist[w] for w in words),
        edges=tuple(edges),
    )
    sizes = ball.sphere_sizes()
    if generators is None and _has_infinite_growth(p):
        shrink = [n for n in range(1, len(sizes)) if sizes[n] < sizes[n - 1]]
        if shrink:
            logger.warning("%s 的球面大小在 n=%s 处变小: %s", p.display_name, shrink, sizes)
    logger.info("构造 %s 半径 %d 的球: %d 个顶点, 球面 %s", p.display_name, R, len(ball), sizes)
    return ball


__all__ = ["CayleyBall", "build_ball", "DEFAULT_VERTEX_BUDGET", "BALL_FORMAT", "BALL_VERSION", "VertexRef"]
