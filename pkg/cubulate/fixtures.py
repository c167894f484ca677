"""
随包发布的夹具

- 墙空间：ℤ 直线、ℤ² 坐标网格、F₂ 树、随机墙空间
- 候选墙族：ℤ² 的竖直/水平族、F₂ 的边族
- 立方复形：环面、三个正方形、单环正方形、两个环的楔
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import toml

from cubulate.core.ball import CayleyBall, build_ball
from cubulate.core.bitset import full_mask, mask_of
from cubulate.core.presentation import Word, free_abelian, free_group, presentation_to_config
from cubulate.cubes.complex import CubeComplex, CubeComplexBuilder, Cell, FaceMap, salvetti_complex
from cubulate.utils.artifacts import write_json
from cubulate.walls.wallspace import (
    WallFamily,
    Wallspace,
    abstract_wall,
    edge_walls,
    make_wall,
)

logger = logging.getLogger(__name__)

GRID_CUTS = (-2, -1, 0, 1)


# ----------------------------------------------------------------------
# 墙空间
# ----------------------------------------------------------------------
def z2_coordinates(word: Word) -> Tuple[int, int]:
    return word.count("a") - word.count("A"), word.count("b") - word.count("B")


def z_line(R: int = 8, margin: int = 2) -> Wallspace:
    """ℤ 上所有可信的点割墙（每条边一面）"""
    ball = build_ball(free_abelian(1), R)
    return Wallspace(ball=ball, walls=tuple(edge_walls(ball, margin)), margin=margin)


def _grid_walls(ball: CayleyBall, axis: int) -> List:
    name = "x" if axis == 0 else "y"
    walls = []
    for k in GRID_CUTS:
        left = [w for w in ball.words if z2_coordinates(w)[axis] <= k]
        walls.append(abstract_wall(ball, left, label=f"{name}={k}|{k + 1}"))
    return walls


def z2_grid(R: int = 4, vertical: bool = True, horizontal: bool = True) -> Wallspace:
    """ℤ² 上 x、y 各 4 面坐标墙（x ≤ k 为 ←N），margin 0"""
    ball = build_ball(free_abelian(2), R)
    walls = []
    if vertical:
        walls.extend(_grid_walls(ball, 0))
    if horizontal:
        walls.extend(_grid_walls(ball, 1))
    return Wallspace(ball=ball, walls=tuple(walls), margin=0)


def f2_tree(R: int = 3, margin: int = 0) -> Wallspace:
    """F₂ 的边墙空间：每条边一面墙"""
    ball = build_ball(free_group(2), R)
    return Wallspace(ball=ball, walls=tuple(edge_walls(ball, margin)), margin=margin)


def random_wallspace(
    rng: np.random.Generator,
    max_walls: int = 12,
    max_vertices: int = 30,
) -> Wallspace:
    """随机的抽象墙空间

    球从 ℤ、ℤ²、F₂ 中随机挑一个不超过 max_vertices 个顶点的；
    每面墙的 ←N 一半概率是某个度量球，一半概率是随机子集，两侧都非空且互不重复。
    """
    choices = [(free_abelian(1), (max_vertices - 1) // 2), (free_abelian(2), 3), (free_group(2), 2)]
    balls = []
    for p, R in choices:
        while R > 0:
            ball = build_ball(p, R)
            if len(ball) <= max_vertices:
                balls.append(ball)
                break
            R -= 1
    ball = balls[int(rng.integers(len(balls)))]
    n = len(ball)
    full = full_mask(n)
    k = int(rng.integers(1, max_walls + 1))
    walls = []
    seen = set()
    attempts = 0
    while len(walls) < k and attempts < 50 * max_walls:
        attempts += 1
        if rng.random() < 0.5:
            center = int(rng.integers(n))
            radius = int(rng.integers(0, ball.radius + 1))
            near = nx.single_source_shortest_path_length(ball.graph, center, cutoff=radius)
            left = mask_of(near)
        else:
            left = mask_of(np.flatnonzero(rng.random(n) < 0.5).tolist())
        right = full & ~left
        if not left or not right or left in seen or right in seen:
            continue
        seen.add(left)
        walls.append(make_wall(ball, left, right, label=f"w{len(walls)}"))
    return Wallspace(ball=ball, walls=tuple(walls), margin=0)


# ----------------------------------------------------------------------
# 候选墙族
# ----------------------------------------------------------------------
def z2_families() -> List[WallFamily]:
    """竖直族 ⟨b⟩ 与水平族 ⟨a⟩，r=0，载体并入 →N"""
    return [
        WallFamily(("b",), 0, label="vertical", absorb_carrier=True),
        WallFamily(("a",), 0, label="horizontal", absorb_carrier=True),
    ]


def f2_families() -> List[WallFamily]:
    """平凡子群的点割，锚点分别为 a、b，吸收载体后就是 a 边与 b 边的墙"""
    return [
        WallFamily((), 0, label="a-edges", absorb_carrier=True, anchor="a"),
        WallFamily((), 0, label="b-edges", absorb_carrier=True, anchor="b"),
    ]


# ----------------------------------------------------------------------
# 立方复形
# ----------------------------------------------------------------------
def torus() -> CubeComplex:
    """ℤ² 的 Salvetti 复形：一个顶点、两个环、一个正方形"""
    return salvetti_complex(("a", "b"), (("a", "b"),))


def wedge_of_loops() -> CubeComplex:
    return salvetti_complex(("a", "b"), ())


def three_squares() -> CubeComplex:
    """顶点 0 处两两共边的三个正方形，没有 3-立方体"""
    b = CubeComplexBuilder(7, name="three-squares")
    b.add_edge(0, 1, "x")
    b.add_edge(0, 2, "y")
    b.add_edge(0, 3, "z")
    b.add_edge(1, 4, "y")
    b.add_edge(2, 4, "x")
    b.add_edge(1, 5, "z")
    b.add_edge(3, 5, "x")
    b.add_edge(2, 6, "z")
    b.add_edge(3, 6, "y")
    b.add_cube((0, 1, 2, 4), label="xy")
    b.add_cube((0, 1, 3, 5), label="xz")
    b.add_cube((0, 2, 3, 6), label="yz")
    return b.build()


def one_loop_square() -> CubeComplex:
    """四条边都粘到同一个环 a 上的正方形"""
    loop = FaceMap(0, (0,), (0,))
    cells = (Cell(1, (0, 0), (), "a"), Cell(2, (0, 0, 0, 0), (loop,) * 4, "aa"))
    return CubeComplex(1, cells, name="one-loop-square")


CUBE_FIXTURES = {
    "torus": torus,
    "wedge_of_loops": wedge_of_loops,
    "three_squares": three_squares,
    "one_loop_square": one_loop_square,
}


# ----------------------------------------------------------------------
# 导出
# ----------------------------------------------------------------------
def _dump_toml(path: Path, data: Dict) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        toml.dump(data, f)
    return path


def _grid_walls_spec(vertical: bool = True, horizontal: bool = True) -> Dict:
    ws = z2_grid(vertical=vertical, horizontal=horizontal)
    return {
        "walls": {"margin": 0},
        "abstract": [
            {"label": w.label, "left": [ws.ball.words[v] for v in range(len(ws.ball)) if (w.L >> v) & 1]}
            for w in ws.walls
        ],
    }


def write_fixtures(out_dir: Path, only: Optional[Sequence[str]] = None, seed: int = 0) -> List[Path]:
    """把全部夹具写到 out_dir：群描述与墙描述（TOML）、墙空间与立方复形（JSON）"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    def _want(name: str) -> bool:
        return only is None or name in only

    groups = {"z": free_abelian(1), "z2": free_abelian(2), "f2": free_group(2)}
    for name, p in groups.items():
        if _want(name):
            written.append(_dump_toml(out_dir / f"{name}.group.toml", presentation_to_config(p)))

    wallspaces = {
        "z_line": z_line,
        "z2_grid": z2_grid,
        "z2_vertical": lambda: z2_grid(horizontal=False),
        "f2_tree": f2_tree,
    }
    for name, factory in wallspaces.items():
        if _want(name):
            written.append(write_json(out_dir / f"{name}.wallspace.json", factory().to_dict()))
    if _want("random"):
        ws = random_wallspace(np.random.default_rng(seed))
        written.append(write_json(out_dir / "random.wallspace.json", ws.to_dict()))

    if _want("z2_grid"):
        written.append(_dump_toml(out_dir / "z2_grid.walls.toml", _grid_walls_spec()))
    if _want("z_line"):
        written.append(_dump_toml(out_dir / "z_line.walls.toml", {"walls": {"margin": 2, "edge_walls": True}}))
    families = {
        "z2_families": ({"margin": 1}, {"translate_radius": 3}, z2_families()),
        "z2_vertical_family": ({"margin": 1}, {"translate_radius": 3}, z2_families()[:1]),
        "f2_families": ({"margin": 1}, {"translate_radius": 3}, f2_families()),
    }
    for name, (walls, select, fams) in families.items():
        if _want(name):
            data = {"walls": walls, "select": select, "families": [f.to_dict() for f in fams]}
            written.append(_dump_toml(out_dir / f"{name}.toml", data))

    for name, factory in CUBE_FIXTURES.items():
        if _want(name):
            written.append(write_json(out_dir / f"{name}.cubes.json", factory().to_dict()))

    logger.info("写出 %d 个夹具文件到 %s", len(written), out_dir)
    return written


__all__ = [
    "GRID_CUTS",
    "z2_coordinates",
    "z_line",
    "z2_grid",
    "f2_tree",
    "random_wallspace",
    "z2_families",
    "f2_families",
    "torus",
    "wedge_of_loops",
    "three_squares",
    "one_loop_square",
    "CUBE_FIXTURES",
    "write_fixtures",
]
