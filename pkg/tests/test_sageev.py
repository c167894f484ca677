"""Dual cube complex construction tests."""
from __future__ import annotations

import networkx as nx
import numpy as np
import pytest

from cubulate.core.ball import build_ball
from cubulate.core.bitset import bits
from cubulate.core.errors import OracleRefusedError
from cubulate.core.presentation import free_abelian
from cubulate.criteria.selection import candidate_pool, select_walls
from cubulate.dual.sageev import (
    DualComplex,
    OrientationChecker,
    build_dual,
    check_median,
    distance_matrix,
    dual_growth,
    dual_distance,
    enumerate_orientations_oracle,
    hamming,
    orbit_census,
)
from cubulate.fixtures import f2_tree, random_wallspace, z2_families, z2_grid, z_line
from cubulate.walls.wallspace import Wallspace, crossing_masks, separation_count


def test_grid_dual_is_five_by_five_square_grid() -> None:
    dc = build_dual(z2_grid())
    census = dc.census()
    assert census["zero_cubes"] == 25
    assert census["one_cubes"] == 40
    assert census["cubes_by_dim"]["2"] == 16
    assert dc.dimension == 2


def test_identity_orientation_is_numbered_first() -> None:
    dc = build_dual(z2_grid())
    assert dc.sides(0) == "RRLLRRLL"
    assert dc.principal_vertex("") == 0


def test_grid_dual_distance_counts_separating_walls() -> None:
    dc = build_dual(z2_grid())
    far = dc.principal_vertex("aabb")
    assert dual_distance(dc, 0, far) == 4


def test_grid_dual_is_median() -> None:
    report = check_median(build_dual(z2_grid()))
    assert report.ok
    assert report.vertices == 25
    assert report.failure is None


def test_removing_interior_edge_breaks_median_property() -> None:
    dc = build_dual(z2_grid())
    skeleton = dc.skeleton()
    k = next(
        i for i, (u, _, v) in enumerate(dc.edges) if skeleton.degree(u) == 4 and skeleton.degree(v) == 4
    )
    report = check_median(dc.without_edge(k))
    assert not report.ok
    assert report.failure is not None
    assert report.median_count != 1


def _first_bad_triple(dc: DualComplex):
    D = distance_matrix(dc)
    n = len(dc)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                count = sum(
                    1
                    for m in range(n)
                    if D[a, m] + D[m, b] == D[a, b] and D[b, m] + D[m, c] == D[b, c] and D[a, m] + D[m, c] == D[a, c]
                )
                if count != 1:
                    return (a, b, c), count
    return None, None


def test_median_check_agrees_with_full_triple_scan() -> None:
    dc = build_dual(z2_grid())
    skeleton = dc.skeleton()
    k = next(
        i for i, (u, _, v) in enumerate(dc.edges) if skeleton.degree(u) == 4 and skeleton.degree(v) == 4
    )
    for complex_ in (build_dual(z2_grid(R=2)), dc.without_edge(k)):
        report = check_median(complex_)
        triple, count = _first_bad_triple(complex_)
        assert report.failure == triple
        assert report.median_count == count


def test_orbit_census_on_grid() -> None:
    census = orbit_census(build_dual(z2_grid()))
    assert census.orbits(0) is None
    assert census.orbits(1) == 8
    assert census.orbits(2) == 16
    assert list(census.to_frame()["dim"]) == [0, 1, 2]


def test_dual_growth_reports_one_row_per_radius() -> None:
    frame = dual_growth(free_abelian(2), z2_families(), [4, 6], margin=1)
    assert list(frame["radius"]) == [4, 6]
    assert list(frame.columns) == ["radius", "walls", "zero_cubes", "one_cubes", "squares", "dimension"]
    assert (frame["walls"] > 0).all()
    assert (frame["zero_cubes"] >= 2).all()


def test_line_dual_is_a_path() -> None:
    dc = build_dual(z_line())
    assert len(dc) == 13
    assert len(dc.edges) == 12
    assert dc.cubes == ()


def test_tree_dual_recovers_the_tree() -> None:
    ws = f2_tree()
    assert len(ws.walls) == 52
    dc = build_dual(ws)
    assert nx.is_isomorphic(dc.skeleton(), ws.ball.graph)
    with pytest.raises(OracleRefusedError):
        enumerate_orientations_oracle(ws)


@pytest.mark.parametrize("seed", range(100))
def test_flip_search_matches_exhaustive_oracle(seed: int) -> None:
    ws = random_wallspace(np.random.default_rng(seed))
    dc = build_dual(ws, max_dim=1)
    assert set(dc.orientations) == enumerate_orientations_oracle(ws)


def _z2_pool() -> Wallspace:
    return candidate_pool(build_ball(free_abelian(2), 7), z2_families(), translate_radius=3, margin=1)


def _z2_selection() -> Wallspace:
    result = select_walls(build_ball(free_abelian(2), 7), z2_families(), 1, translate_radius=3, margin=1)
    return result.pool.subset(result.selected)


WALLSPACES = {
    "z_line": z_line,
    "z2_grid": z2_grid,
    "f2_tree": f2_tree,
    "z2_pool": _z2_pool,
    "z2_selection": _z2_selection,
}


@pytest.mark.parametrize("name", sorted(WALLSPACES))
def test_principal_distance_counts_separating_walls(name: str) -> None:
    """For every trusted pair, the dual distance of principal vertices equals #(u, v)."""
    ws = WALLSPACES[name]()
    dc = build_dual(ws)
    D = distance_matrix(dc)
    trusted = bits(ws.trusted)
    for u in trusted:
        for v in trusted:
            assert D[dc.principal[u], dc.principal[v]] == separation_count(ws, u, v)


@pytest.mark.parametrize("seed", range(20))
def test_dual_distance_is_hamming_distance(seed: int) -> None:
    ws = random_wallspace(np.random.default_rng(seed))
    dc = build_dual(ws, max_dim=1)
    skeleton = dc.skeleton()
    for s in range(0, len(dc), max(1, len(dc) // 8)):
        lengths = nx.single_source_shortest_path_length(skeleton, s)
        assert len(lengths) == len(dc)
        for t, d in lengths.items():
            assert d == hamming(dc.orientations[s], dc.orientations[t])


@pytest.mark.parametrize("seed", range(10))
def test_every_dual_edge_is_a_reversible_flip(seed: int) -> None:
    ws = random_wallspace(np.random.default_rng(seed))
    dc = build_dual(ws, max_dim=1)
    checker = OrientationChecker(ws)
    for u, i, v in dc.edges:
        su, sv = dc.orientations[u], dc.orientations[v]
        assert su ^ (1 << i) == sv
        assert checker.is_consistent(su) and checker.is_consistent(sv)
        assert checker.can_flip(su, i) and checker.can_flip(sv, i)


@pytest.mark.parametrize("name", ["z2_grid", "z2_pool"])
def test_cube_walls_pairwise_cross(name: str) -> None:
    ws = WALLSPACES[name]()
    dc = build_dual(ws)
    masks = crossing_masks(ws)
    assert dc.cubes
    for cube in dc.cubes:
        for a in cube.walls:
            for b in cube.walls:
                if a != b:
                    assert (masks[a] >> b) & 1
        for c, corner in enumerate(cube.corners):
            sigma = dc.orientations[corner]
            for t, w in enumerate(cube.walls):
                assert (sigma >> w) & 1 == (c >> t) & 1


def test_dual_dict_round_trip() -> None:
    dc = build_dual(z2_grid())
    again = DualComplex.from_dict(dc.to_dict())
    assert again.orientations == dc.orientations
    assert again.edges == dc.edges
    assert again.cubes == dc.cubes
    assert again.census() == dc.census()


def test_dual_dot_colors_edges_by_wall() -> None:
    dot = build_dual(z_line()).to_dot()
    assert dot.startswith("graph dual {")
    assert dot.count(" -- ") == 12
