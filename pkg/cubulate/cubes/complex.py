"""
有限立方复形

- 顶点编号 0..n-1；维数 ≥ 1 的胞腔统一放在 cells 里。
- n 维胞腔的 corners 长度为 2^n，角标 c 的第 j 位是第 j 个坐标轴上的取值。
- faces[2j + ε] 描述固定第 j 轴为 ε 得到的面：它被粘到 cells[face.cell] 上，
  面的第 t 个剩余轴（剩余轴按升序排列）对应目标胞腔的 perm[t] 轴，flips[t] 为 1 表示方向相反。
- 1 维胞腔（边）的 corners 为 (起点, 终点)，没有 faces。
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import toml

from cubulate.core.errors import MalformedInputError, StructuralError
from cubulate.dual.sageev import DOT_PALETTE

logger = logging.getLogger(__name__)

CUBE_COMPLEX_FORMAT = "cubulate.cube-complex"
CUBE_COMPLEX_VERSION = 1
DEFAULT_MAX_DIM = 8

LinkPoint = Tuple[int, int]  # (边, 端点 0/1)


@dataclass(frozen=True)
class FaceMap:
    cell: int
    perm: Tuple[int, ...] = ()
    flips: Tuple[int, ...] = ()

    def to_list(self) -> List[Any]:
        return [self.cell, list(self.perm), list(self.flips)]

    @classmethod
    def from_list(cls, data: Sequence[Any]) -> "FaceMap":
        if len(data) != 3:
            raise MalformedInputError(f"面数据必须是 [cell, perm, flips]: {data}", module="cube-complex")
        return cls(int(data[0]), tuple(int(x) for x in data[1]), tuple(int(x) for x in data[2]))


@dataclass(frozen=True)
class Cell:
    dim: int
    corners: Tuple[int, ...]
    faces: Tuple[FaceMap, ...] = ()
    label: str = ""

    def face(self, axis: int, eps: int) -> FaceMap:
        return self.faces[2 * axis + eps]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "corners": list(self.corners),
            "faces": [f.to_list() for f in self.faces],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Cell":
        return cls(
            dim=int(data["dim"]),
            corners=tuple(int(c) for c in data["corners"]),
            faces=tuple(FaceMap.from_list(f) for f in data.get("faces", [])),
            label=str(data.get("label", "")),
        )


def face_corner_in_parent(dim: int, axis: int, eps: int, c_face: int) -> int:
    """面上的角标（剩余轴升序）换算到父胞腔的角标"""
    parent = eps << axis
    rest = [a for a in range(dim) if a != axis]
    for t, a in enumerate(rest):
        if (c_face >> t) & 1:
            parent |= 1 << a
    return parent


def face_corner_in_target(face: FaceMap, c_face: int) -> int:
    target = 0
    for t, (p, f) in enumerate(zip(face.perm, face.flips)):
        if ((c_face >> t) & 1) ^ f:
            target |= 1 << p
    return target


@dataclass
class VertexLink:
    """顶点的 link：点是 (边, 端点)，k-单形来自 (k+1)-立方体在该顶点处的角"""

    vertex: int
    points: List[LinkPoint] = field(default_factory=list)
    simplices: Dict[FrozenSet[LinkPoint], List[Tuple[int, int]]] = field(default_factory=dict)
    degenerate: List[Tuple[int, int]] = field(default_factory=list)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.points)
        for simplex in self.simplices:
            if len(simplex) == 2:
                g.add_edge(*sorted(simplex))
        return g


@dataclass
class LinkViolation:
    vertex: int
    kind: str  # degenerate | repeated | non-flag
    simplex: Tuple[LinkPoint, ...]
    cells: List[Tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertex": self.vertex,
            "kind": self.kind,
            "simplex": [list(p) for p in self.simplex],
            "cells": [list(c) for c in self.cells],
        }


@dataclass
class NPCReport:
    ok: bool
    vertices: int
    violations: List[LinkViolation] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "vertices": self.vertices, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class CubeComplex:
    vertices: int
    cells: Tuple[Cell, ...]
    max_dim: int = DEFAULT_MAX_DIM
    name: str = ""

    def __post_init__(self) -> None:
        self.validate()

    # ------------------------------------------------------------------
    # 结构校验
    # ------------------------------------------------------------------
    def validate(self) -> None:
        n_cells = len(self.cells)
        for idx, cell in enumerate(self.cells):
            where = f"胞腔 {idx}"
            if not 1 <= cell.dim <= self.max_dim:
                raise StructuralError(f"{where} 的维数 {cell.dim} 不在 1..{self.max_dim} 之间")
            if len(cell.corners) != 1 << cell.dim:
                raise StructuralError(f"{where} 应有 {1 << cell.dim} 个角，实际 {len(cell.corners)}")
            for v in cell.corners:
                if not 0 <= v < self.vertices:
                    raise StructuralError(f"{where} 的角 {v} 不是合法顶点")
            if cell.dim == 1:
                if cell.faces:
                    raise StructuralError(f"{where} 是边，不应有面数据")
                continue
            if len(cell.faces) != 2 * cell.dim:
                raise StructuralError(f"{where} 应有 {2 * cell.dim} 个面，实际 {len(cell.faces)}")
            for axis in range(cell.dim):
                for eps in (0, 1):
                    fm = cell.face(axis, eps)
                    if not 0 <= fm.cell < n_cells:
                        raise StructuralError(f"{where} 的面 ({axis},{eps}) 指向不存在的胞腔 {fm.cell}")
                    target = self.cells[fm.cell]
                    if target.dim != cell.dim - 1:
                        raise StructuralError(f"{where} 的面 ({axis},{eps}) 维数应为 {cell.dim - 1}")
                    if sorted(fm.perm) != list(range(cell.dim - 1)) or len(fm.flips) != cell.dim - 1:
                        raise StructuralError(f"{where} 的面 ({axis},{eps}) 的 perm/flips 不合法")
                    if any(f not in (0, 1) for f in fm.flips):
                        raise StructuralError(f"{where} 的面 ({axis},{eps}) 的 flips 只能是 0/1")
                    for c in range(1 << (cell.dim - 1)):
                        mine = cell.corners[face_corner_in_parent(cell.dim, axis, eps, c)]
                        theirs = target.corners[face_corner_in_target(fm, c)]
                        if mine != theirs:
                            raise StructuralError(
                                f"{where} 的面 ({axis},{eps}) 角点不一致: 顶点 {mine} ≠ {theirs}"
                            )
            if cell.dim >= 3:
                self._check_commuting_faces(idx)

    def _descend_seq(self, idx: int, seq: Sequence[Tuple[int, int]]) -> Tuple[int, Dict[int, Tuple[int, int]]]:
        cur = idx
        amap = {a: (a, 0) for a in range(self.cells[idx].dim)}
        for axis, eps in seq:
            a, f = amap.pop(axis)
            cell = self.cells[cur]
            if cell.dim <= 1:
                raise StructuralError(f"胞腔 {idx} 无法再降到边以下")
            fm = cell.face(a, eps ^ f)
            rest = [x for x in range(cell.dim) if x != a]
            pos = {x: t for t, x in enumerate(rest)}
            amap = {u: (fm.perm[pos[cu]], fu ^ fm.flips[pos[cu]]) for u, (cu, fu) in amap.items()}
            cur = fm.cell
        return cur, amap

    def descend(self, idx: int, fixed: Dict[int, int]) -> Tuple[int, Dict[int, Tuple[int, int]]]:
        """固定顶层胞腔的若干轴之后落到的胞腔，以及剩余轴到该胞腔 (轴, 翻转) 的对应"""
        return self._descend_seq(idx, sorted(fixed.items()))

    def _check_commuting_faces(self, idx: int) -> None:
        dim = self.cells[idx].dim
        for j, k in itertools.combinations(range(dim), 2):
            for eps, delta in itertools.product((0, 1), repeat=2):
                one = self._descend_seq(idx, [(j, eps), (k, delta)])
                two = self._descend_seq(idx, [(k, delta), (j, eps)])
                if one != two:
                    raise StructuralError(
                        f"胞腔 {idx} 的面的面不交换: 轴 ({j},{eps}) 与 ({k},{delta}) 得到 {one[0]} / {two[0]}"
                    )

    # ------------------------------------------------------------------
    # 查询
    # ------------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=0)

    def cells_of_dim(self, dim: int) -> List[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == dim]

    @property
    def edges(self) -> List[int]:
        return self.cells_of_dim(1)

    def edge_at(self, idx: int, corner: int, axis: int) -> Tuple[int, int]:
        """胞腔 idx 在角 corner 处沿 axis 方向的边，以及方向是否相反"""
        cell = self.cells[idx]
        if cell.dim == 1:
            return idx, 0
        fixed = {a: (corner >> a) & 1 for a in range(cell.dim) if a != axis}
        edge, amap = self.descend(idx, fixed)
        return edge, amap[axis][1]

    def link_point(self, idx: int, corner: int, axis: int) -> LinkPoint:
        edge, flip = self.edge_at(idx, corner, axis)
        return edge, ((corner >> axis) & 1) ^ flip

    def links(self) -> Dict[int, VertexLink]:
        out = {v: VertexLink(v) for v in range(self.vertices)}
        for e in self.edges:
            v0, v1 = self.cells[e].corners
            out[v0].points.append((e, 0))
            out[v1].points.append((e, 1))
        for idx, cell in enumerate(self.cells):
            if cell.dim < 2:
                continue
            for corner, v in enumerate(cell.corners):
                pts = [self.link_point(idx, corner, axis) for axis in range(cell.dim)]
                if len(set(pts)) < len(pts):
                    out[v].degenerate.append((idx, corner))
                    continue
                out[v].simplices.setdefault(frozenset(pts), []).append((idx, corner))
        return out

    def to_dot(self, edge_classes: Optional[Dict[int, int]] = None) -> str:
        """1-骨架的 DOT；edge_classes 给出边所属超平面时按超平面着色"""
        lines = ["graph complex {"]
        for v in range(self.vertices):
            lines.append(f"  v{v};")
        for e in self.edges:
            u, v = self.cells[e].corners
            attrs = [f'label="{self.cells[e].label or e}"']
            if edge_classes is not None and e in edge_classes:
                attrs.append(f'color="{DOT_PALETTE[edge_classes[e] % len(DOT_PALETTE)]}"')
            lines.append(f"  v{u} -- v{v} [{', '.join(attrs)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def without_cell(self, idx: int) -> "CubeComplex":
        """删掉一个不作为其他胞腔之面的胞腔，其余编号前移"""
        for j, cell in enumerate(self.cells):
            if any(f.cell == idx for f in cell.faces):
                raise StructuralError(f"胞腔 {idx} 是胞腔 {j} 的面，不能单独删除")

        def _shift(fm: FaceMap) -> FaceMap:
            return FaceMap(fm.cell - 1 if fm.cell > idx else fm.cell, fm.perm, fm.flips)

        cells = tuple(
            Cell(c.dim, c.corners, tuple(_shift(f) for f in c.faces), c.label)
            for j, c in enumerate(self.cells)
            if j != idx
        )
        return CubeComplex(self.vertices, cells, self.max_dim, self.name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": CUBE_COMPLEX_FORMAT,
            "version": CUBE_COMPLEX_VERSION,
            "name": self.name,
            "vertices": self.vertices,
            "max_dim": self.max_dim,
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CubeComplex":
        if "vertices" not in data or "cells" not in data:
            raise MalformedInputError("立方复形文件需要 vertices 与 cells", module="cube-complex")
        return cls(
            vertices=int(data["vertices"]),
            cells=tuple(Cell.from_dict(c) for c in data["cells"]),
            max_dim=int(data.get("max_dim", DEFAULT_MAX_DIM)),
            name=str(data.get("name", "")),
        )


# ----------------------------------------------------------------------
# 构造
# ----------------------------------------------------------------------
class CubeComplexBuilder:
    """逐个添加边和立方体；没有给出面数据时按角点自动匹配已有胞腔"""

    def __init__(self, vertices: int, max_dim: int = DEFAULT_MAX_DIM, name: str = ""):
        self.vertices = vertices
        self.max_dim = max_dim
        self.name = name
        self.cells: List[Cell] = []

    def add_edge(self, u: int, v: int, label: str = "") -> int:
        self.cells.append(Cell(1, (u, v), (), label))
        return len(self.cells) - 1

    def add_cube(self, corners: Sequence[int], faces: Optional[Sequence[FaceMap]] = None, label: str = "") -> int:
        dim = (len(corners) - 1).bit_length()
        if len(corners) != 1 << dim or dim < 2:
            raise StructuralError(f"角点数 {len(corners)} 不是 2^n (n ≥ 2)")
        if faces is None:
            faces = [self._match_face(dim, corners, axis, eps) for axis in range(dim) for eps in (0, 1)]
        self.cells.append(Cell(dim, tuple(corners), tuple(faces), label))
        return len(self.cells) - 1

    def _match_face(self, dim: int, corners: Sequence[int], axis: int, eps: int) -> FaceMap:
        face_corners = [corners[face_corner_in_parent(dim, axis, eps, c)] for c in range(1 << (dim - 1))]
        found = []
        for idx, cell in enumerate(self.cells):
            if cell.dim != dim - 1 or sorted(cell.corners) != sorted(face_corners):
                continue
            for perm in itertools.permutations(range(dim - 1)):
                for flips in itertools.product((0, 1), repeat=dim - 1):
                    fm = FaceMap(idx, tuple(perm), tuple(flips))
                    if all(cell.corners[face_corner_in_target(fm, c)] == fc for c, fc in enumerate(face_corners)):
                        found.append(fm)
        if len({f.cell for f in found}) != 1:
            raise StructuralError(f"无法唯一确定面 ({axis},{eps})，角点 {face_corners}，候选 {len(found)} 个")
        return found[0]

    def build(self) -> CubeComplex:
        return CubeComplex(self.vertices, tuple(self.cells), self.max_dim, self.name)


def from_dual(dc: Any) -> CubeComplex:
    """对偶复形转成立方复形：边从墙取 R 的端点指向取 L 的端点，边标签为墙下标"""
    cells: List[Cell] = []
    edge_index: Dict[Tuple[int, int], int] = {}
    for u, w, v in dc.edges:
        a, b = (u, v) if not (dc.orientations[u] >> w) & 1 else (v, u)
        edge_index[(min(u, v), w)] = len(cells)
        cells.append(Cell(1, (a, b), (), str(w)))
    cube_index: Dict[Tuple[int, int], int] = {}
    max_dim = max([2] + [c.dim for c in dc.cubes])
    for cube in dc.cubes:
        faces = []
        for t, w in enumerate(cube.walls):
            rest = [x for x in cube.walls if x != w]
            for eps in (0, 1):
                base = cube.base | (eps << w)
                if len(rest) == 1:
                    u = dc.index_of(base)
                    v = dc.index_of(base | (1 << rest[0]))
                    faces.append(FaceMap(edge_index[(min(u, v), rest[0])], (0,), (0,)))
                else:
                    smask = sum(1 << x for x in rest)
                    faces.append(FaceMap(cube_index[(base, smask)], tuple(range(len(rest))), (0,) * len(rest)))
        cube_index[(cube.base, cube.wall_mask)] = len(cells)
        cells.append(Cell(cube.dim, cube.corners, tuple(faces), ",".join(str(w) for w in cube.walls)))
    return CubeComplex(len(dc.orientations), tuple(cells), max(max_dim, dc.max_dim), "dual")


def salvetti_complex(
    vertices: Sequence[str],
    edges: Sequence[Tuple[str, str]],
    max_dim: int = DEFAULT_MAX_DIM,
) -> CubeComplex:
    """直角 Artin 群的 Salvetti 复形：一个顶点，每个生成元一个环，每个团一个环面"""
    order = list(vertices)
    g = nx.Graph()
    g.add_nodes_from(order)
    g.add_edges_from(edges)
    cells: List[Cell] = [Cell(1, (0, 0), (), x) for x in order]
    index: Dict[Tuple[str, ...], int] = {(x,): i for i, x in enumerate(order)}
    cliques = sorted(
        (tuple(sorted(c, key=order.index)) for c in nx.enumerate_all_cliques(g) if 2 <= len(c) <= max_dim),
        key=lambda c: (len(c), [order.index(x) for x in c]),
    )
    for clique in cliques:
        dim = len(clique)
        faces = []
        for t in range(dim):
            rest = clique[:t] + clique[t + 1:]
            fm = FaceMap(index[rest], tuple(range(dim - 1)), (0,) * (dim - 1))
            faces.extend([fm, fm])
        index[clique] = len(cells)
        cells.append(Cell(dim, (0,) * (1 << dim), tuple(faces), "".join(clique)))
    return CubeComplex(1, tuple(cells), max_dim, "salvetti(" + "".join(order) + ")")


# ----------------------------------------------------------------------
# 非正曲率
# ----------------------------------------------------------------------
def check_npc(C: CubeComplex) -> NPCReport:
    """Gromov link 条件：每个顶点的 link 是单纯复形且是 flag 的"""
    violations: List[LinkViolation] = []
    for v, link in C.links().items():
        for idx, corner in link.degenerate:
            cell = C.cells[idx]
            pts = tuple(C.link_point(idx, corner, a) for a in range(cell.dim))
            violations.append(LinkViolation(v, "degenerate", pts, [(idx, corner)]))
        for simplex, sources in link.simplices.items():
            if len(sources) > 1:
                violations.append(LinkViolation(v, "repeated", tuple(sorted(simplex)), list(sources)))
        for clique in nx.find_cliques(link.graph()):
            if len(clique) >= 3 and frozenset(clique) not in link.simplices:
                violations.append(LinkViolation(v, "non-flag", tuple(sorted(clique))))
    report = NPCReport(ok=not violations, vertices=C.vertices, violations=violations)
    logger.info("NPC 检查: %d 个顶点, %d 处违例", C.vertices, len(violations))
    return report


def load_cube_complex(path: Path) -> CubeComplex:
    """按后缀读取 JSON 或 TOML"""
    path = Path(path)
    if not path.exists():
        raise MalformedInputError(f"立方复形文件不存在: {path}", module="cube-complex")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = toml.load(f) if path.suffix == ".toml" else json.load(f)
    except (toml.TomlDecodeError, json.JSONDecodeError) as e:
        raise MalformedInputError(f"立方复形文件格式错误: {e}", module="cube-complex") from None
    fmt = data.get("format")
    if fmt is not None and fmt != CUBE_COMPLEX_FORMAT:
        raise MalformedInputError(f"{path} 的格式是 {fmt!r}，需要 {CUBE_COMPLEX_FORMAT!r}", module="cube-complex")
    return CubeComplex.from_dict(data)


__all__ = [
    "FaceMap",
    "Cell",
    "CubeComplex",
    "CubeComplexBuilder",
    "VertexLink",
    "LinkViolation",
    "NPCReport",
    "face_corner_in_parent",
    "face_corner_in_target",
    "from_dual",
    "salvetti_complex",
    "check_npc",
    "load_cube_complex",
    "CUBE_COMPLEX_FORMAT",
    "CUBE_COMPLEX_VERSION",
]
