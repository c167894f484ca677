"""
超平面与特殊性病态检查

边按 "正方形的对边" 关系做传递闭包（带方向奇偶的并查集）得到超平面。
四种病态：自交、单侧、直接自密切、互相密切。间接自密切只作为信息报告。
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Set, Tuple

from cubulate.cubes.complex import CubeComplex

logger = logging.getLogger(__name__)


class _ParityUnionFind:
    """parity[x] 是 x 相对父节点的方向"""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 0 for x in items}

    def find(self, x: int) -> Tuple[int, int]:
        p = 0
        root = x
        while self.parent[root] != root:
            p ^= self.parity[root]
            root = self.parent[root]
        # 路径压缩
        q = p
        while self.parent[x] != root:
            nxt, px = self.parent[x], self.parity[x]
            self.parent[x], self.parity[x] = root, q
            q ^= px
            x = nxt
        return root, p

    def union(self, a: int, b: int, rel: int) -> bool:
        """要求 parity(a) ^ parity(b) == rel；矛盾时返回 False"""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        if ra > rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        return True


@dataclass
class Hyperplane:
    index: int
    edges: Tuple[int, ...]
    orientation: Dict[int, int]  # 边 -> 相对超平面横向定向的方向
    midcubes: Tuple[Tuple[int, int], ...]  # (胞腔, 轴)
    embedded: bool = True
    two_sided: bool = True
    self_osculating: bool = False
    indirect_osculating: bool = False
    inter_osculates: List[int] = field(default_factory=list)

    @property
    def carrier(self) -> Tuple[int, ...]:
        return tuple(sorted({c for c, _ in self.midcubes} | set(self.edges)))

    @property
    def clean(self) -> bool:
        return self.embedded and self.two_sided and not self.self_osculating and not self.inter_osculates

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "edges": list(self.edges),
            "midcubes": [list(m) for m in self.midcubes],
            "embedded": self.embedded,
            "two_sided": self.two_sided,
            "self_osculating": self.self_osculating,
            "indirect_osculating": self.indirect_osculating,
            "inter_osculates": list(self.inter_osculates),
        }


@dataclass
class PathologyReport:
    hyperplanes: List[Hyperplane]
    self_intersections: List[Dict[str, Any]] = field(default_factory=list)
    one_sided: List[Dict[str, Any]] = field(default_factory=list)
    direct_osculations: List[Dict[str, Any]] = field(default_factory=list)
    inter_osculations: List[Dict[str, Any]] = field(default_factory=list)
    indirect_osculations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def special(self) -> bool:
        return all(h.clean for h in self.hyperplanes)

    def edge_classes(self) -> Dict[int, int]:
        return {e: h.index for h in self.hyperplanes for e in h.edges}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "special": self.special,
            "hyperplanes": [h.to_dict() for h in self.hyperplanes],
            "self_intersections": self.self_intersections,
            "one_sided": self.one_sided,
            "direct_osculations": self.direct_osculations,
            "inter_osculations": self.inter_osculations,
            "indirect_osculations": self.indirect_osculations,
        }


def _trace(C: CubeComplex):
    uf = _ParityUnionFind(C.edges)
    axis_edge: Dict[Tuple[int, int], int] = {}
    conflicts: List[Tuple[int, int]] = []
    for idx, cell in enumerate(C.cells):
        if cell.dim < 2:
            continue
        for axis in range(cell.dim):
            ref = None
            for c in range(1 << cell.dim):
                if (c >> axis) & 1:
                    continue
                e, flip = C.edge_at(idx, c, axis)
                if ref is None:
                    ref = (e, flip)
                    axis_edge[(idx, axis)] = e
                elif not uf.union(ref[0], e, ref[1] ^ flip):
                    conflicts.append((idx, axis))
    return uf, axis_edge, conflicts


def hyperplanes(C: CubeComplex) -> List[Hyperplane]:
    return _analyse(C).hyperplanes


def _analyse(C: CubeComplex) -> PathologyReport:
    uf, axis_edge, conflicts = _trace(C)

    roots: Dict[int, List[int]] = {}
    orientation: Dict[int, int] = {}
    for e in C.edges:
        r, p = uf.find(e)
        roots.setdefault(r, []).append(e)
        orientation[e] = p
    ordered = sorted(roots.values(), key=min)
    class_of = {e: i for i, group in enumerate(ordered) for e in group}
    midcubes: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(len(ordered))}
    for (idx, axis), e in sorted(axis_edge.items()):
        midcubes[class_of[e]].append((idx, axis))
    hs = [
        Hyperplane(
            index=i,
            edges=tuple(sorted(group)),
            orientation={e: orientation[e] for e in group},
            midcubes=tuple(midcubes[i]),
        )
        for i, group in enumerate(ordered)
    ]
    report = PathologyReport(hs)

    for idx, axis in conflicts:
        h = hs[class_of[axis_edge[(idx, axis)]]]
        if h.two_sided:
            h.two_sided = False
            report.one_sided.append({"hyperplane": h.index, "cell": idx, "axis": axis})

    crossing: Set[Tuple[int, int]] = set()
    for idx, cell in enumerate(C.cells):
        if cell.dim < 2:
            continue
        classes = [class_of[axis_edge[(idx, a)]] for a in range(cell.dim)]
        for a, b in itertools.combinations(range(cell.dim), 2):
            ha, hb = classes[a], classes[b]
            if ha == hb:
                if hs[ha].embedded:
                    report.self_intersections.append({"hyperplane": ha, "cell": idx, "axes": [a, b]})
                hs[ha].embedded = False
            else:
                crossing.add((min(ha, hb), max(ha, hb)))

    osculating: Dict[Tuple[int, int], Dict[str, Any]] = {}
    for v, link in C.links().items():
        adjacent = link.graph()
        for p, q in itertools.combinations(link.points, 2):
            if adjacent.has_edge(p, q):
                continue
            hp, hq = class_of[p[0]], class_of[q[0]]
            if not hs[hp].two_sided or not hs[hq].two_sided:
                continue
            if hp == hq:
                same_side = (p[1] ^ orientation[p[0]]) == (q[1] ^ orientation[q[0]])
                witness = {"hyperplane": hp, "vertex": v, "edges": [p[0], q[0]]}
                if p[0] != q[0] and same_side:
                    if not hs[hp].self_osculating:
                        report.direct_osculations.append(witness)
                    hs[hp].self_osculating = True
                else:
                    if not hs[hp].indirect_osculating:
                        report.indirect_osculations.append(witness)
                    hs[hp].indirect_osculating = True
            else:
                key = (min(hp, hq), max(hp, hq))
                osculating.setdefault(key, {"vertex": v, "edges": [p[0], q[0]]})

    for (a, b), witness in sorted(osculating.items()):
        if (a, b) in crossing:
            hs[a].inter_osculates.append(b)
            hs[b].inter_osculates.append(a)
            report.inter_osculations.append({"hyperplanes": [a, b], **witness})
    return report


def check_special(C: CubeComplex) -> PathologyReport:
    report = _analyse(C)
    logger.info(
        "特殊性检查: %d 个超平面, 自交 %d, 单侧 %d, 直接自密切 %d, 互相密切 %d",
        len(report.hyperplanes),
        len(report.self_intersections),
        len(report.one_sided),
        len(report.direct_osculations),
        len(report.inter_osculations),
    )
    return report


__all__ = ["Hyperplane", "PathologyReport", "hyperplanes", "check_special"]
