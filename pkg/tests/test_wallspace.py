"""Wall and wallspace tests."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import toml

from cubulate.core.ball import build_ball
from cubulate.core.bitset import bits
from cubulate.core.errors import (
    BoundaryUncertaintyError,
    InputError,
    NotCodimensionOneError,
    ScaleError,
)
from cubulate.core.presentation import free_abelian, free_group
from cubulate.fixtures import f2_tree, random_wallspace, z2_grid, z_line
from cubulate.walls.wallspace import (
    Nesting,
    WallFamily,
    Wallspace,
    abstract_wall,
    build_wallspace,
    component_census,
    crosses,
    crossing_masks,
    default_depth_threshold,
    default_margin,
    edge_wall,
    edge_walls,
    family_translates,
    load_walls_spec,
    nests,
    separation_count,
    wall_from_subgroup,
    wall_with_radius_retry,
)


def test_default_margin_and_depth() -> None:
    assert default_margin(8) == 2
    assert default_margin(7) == 2
    assert default_margin(1) == 1
    assert default_depth_threshold(8, 2) == 3
    assert default_depth_threshold(7, 1) == 3


def test_z_line_has_twelve_trusted_edge_walls() -> None:
    ws = z_line()
    assert len(ws.walls) == 12
    assert ws.trusted_radius == 6
    assert all(ws.is_trusted(i) for i in range(len(ws.walls)))


def test_separation_count_on_z() -> None:
    ws = z_line()
    assert separation_count(ws, "", "aaaaa") == 5
    assert separation_count(ws, "AA", "aaa") == 5
    assert separation_count(ws, "a", "a") == 0


def test_separation_outside_trusted_ball_is_uncertain() -> None:
    ws = z_line()
    with pytest.raises(BoundaryUncertaintyError):
        separation_count(ws, "", "aaaaaaa")


def test_edge_wall_left_side_contains_identity() -> None:
    ball = build_ball(free_group(2), 2)
    wall = edge_wall(ball, "", "a")
    assert wall.side_of(0).value == "L"
    a = ball.index_of("a")
    assert wall.side_of(a).value == "R"
    assert wall.R.bit_count() == 4
    assert wall.L.bit_count() == 13
    assert wall.label == "edge(1,a)"


def test_edge_wall_rejects_non_separating_edges() -> None:
    ball = build_ball(free_abelian(2), 2)
    with pytest.raises(InputError):
        edge_wall(ball, "", "a")
    with pytest.raises(InputError):
        edge_wall(ball, "", "ab")


def test_abstract_wall_needs_two_nonempty_sides() -> None:
    ball = build_ball(free_group(1), 2)
    with pytest.raises(InputError):
        abstract_wall(ball, [], label="empty")
    wall = abstract_wall(ball, ["", "a", "aa"], label="x>=0")
    assert wall.R.bit_count() == 2


def test_grid_walls_cross_and_nest() -> None:
    ws = z2_grid()
    assert len(ws.walls) == 8
    assert crosses(ws, 0, 4)
    assert not crosses(ws, 0, 1)
    assert nests(ws, 0, 1) is Nesting.LR
    assert nests(ws, 1, 0) is Nesting.RL
    assert crossing_masks(ws)[0] == 0b11110000
    assert crossing_masks(ws)[5] == 0b00001111


def test_f2_edge_walls_never_cross() -> None:
    ws = f2_tree(R=2)
    assert len(ws.walls) == 16
    assert all(mask == 0 for mask in crossing_masks(ws))


def test_subgroup_wall_has_two_deep_components() -> None:
    ball = build_ball(free_abelian(2), 4)
    family = WallFamily(("b",), 0, label="vertical")
    wall = wall_from_subgroup(ball, family, margin=1)
    assert (wall.carrier >> 0) & 1
    assert (wall.carrier >> ball.index_of("b")) & 1
    a, A = ball.index_of("a"), ball.index_of("A")
    assert wall.side_of(A) is not None
    assert wall.side_of(a) is wall.side_of(A).other
    assert wall.origin == (0, "")
    assert wall.label == "vertical@1"


def test_absorbed_carrier_joins_right_side() -> None:
    ball = build_ball(free_abelian(2), 4)
    family = WallFamily(("b",), 0, label="vertical", absorb_carrier=True)
    wall = wall_from_subgroup(ball, family, margin=1)
    assert wall.carrier == 0
    assert wall.side_of(0).value == "R"
    assert (wall.L | wall.R).bit_count() == len(ball)


def test_trivial_subgroup_in_z2_is_not_codimension_one() -> None:
    ball = build_ball(free_abelian(2), 4)
    family = WallFamily((), 0, label="point")
    with pytest.raises(NotCodimensionOneError) as excinfo:
        wall_from_subgroup(ball, family, margin=1)
    assert excinfo.value.census["deep"] == 1
    census = component_census(ball, family, margin=1)
    assert census["components"] == 1


def test_radius_retry_reports_radius_used() -> None:
    ball = build_ball(free_abelian(2), 4)
    wall, r = wall_with_radius_retry(ball, WallFamily(("b",), 0, label="vertical"), margin=1)
    assert r == 0
    assert wall.radius_used == 0

    with pytest.raises(NotCodimensionOneError):
        wall_with_radius_retry(ball, WallFamily((), 0, label="point"), max_radius=1, margin=1)


def test_family_translates_deduplicates_cosets() -> None:
    ball = build_ball(free_abelian(2), 7)
    family = WallFamily(("b",), 0, label="vertical", absorb_carrier=True)
    walls = family_translates(ball, family, 3, margin=1)
    assert len(walls) == 7
    assert len({w.L for w in walls}) == 7


def test_neighborhood_swallowing_ball_is_scale_error() -> None:
    ball = build_ball(free_abelian(1), 3)
    family = WallFamily(("a",), 0, label="everything")
    with pytest.raises(ScaleError):
        wall_from_subgroup(ball, family, margin=1)


def test_build_wallspace_from_spec(tmp_path: Path) -> None:
    spec_path = tmp_path / "walls.toml"
    spec = {
        "walls": {"margin": 1},
        "families": [{"label": "vertical", "generators": ["b"], "radius": 0, "absorb_carrier": True, "translate_radius": 1}],
        "abstract": [{"label": "half", "left": ["", "b", "B"]}],
    }
    with open(spec_path, "w", encoding="utf-8") as fh:
        toml.dump(spec, fh)

    ball = build_ball(free_abelian(2), 4)
    ws = build_wallspace(ball, load_walls_spec(spec_path))
    assert ws.margin == 1
    assert len(ws.families) == 1
    assert {w.origin[0] for w in ws.walls if w.origin is not None} == {0}
    assert any(w.label == "half" for w in ws.walls)


def test_edge_walls_spec_matches_helper() -> None:
    ball = build_ball(free_abelian(1), 8)
    ws = build_wallspace(ball, {"walls": {"margin": 2, "edge_walls": True}})
    assert [w.L for w in ws.walls] == [w.L for w in edge_walls(ball, 2)]


def test_wallspace_dict_round_trip() -> None:
    ws = z2_grid()
    again = Wallspace.from_dict(ws.to_dict())
    assert again.walls == ws.walls
    assert again.margin == ws.margin
    assert again.ball == ws.ball


@pytest.mark.parametrize("seed", range(10))
def test_separation_count_satisfies_triangle_inequality(seed: int) -> None:
    rng = np.random.default_rng(seed)
    ws = random_wallspace(rng)
    n = len(ws.ball)
    for _ in range(200):
        u, v, w = (int(x) for x in rng.integers(0, n, size=3))
        assert separation_count(ws, u, w) <= separation_count(ws, u, v) + separation_count(ws, v, w)
        assert separation_count(ws, u, v) == separation_count(ws, v, u)


@pytest.mark.parametrize("ws", [z_line(), f2_tree(R=4, margin=1)], ids=["z_line", "f2_tree"])
def test_separation_count_is_translation_invariant(ws: Wallspace) -> None:
    ball = ws.ball
    trusted = ws.trusted
    inside = bits(trusted)
    for g in ball.generators:
        image = ball.translation_map(g)
        for u in inside:
            gu = image[u]
            if gu < 0 or not (trusted >> gu) & 1:
                continue
            for v in inside:
                gv = image[v]
                if gv < 0 or not (trusted >> gv) & 1:
                    continue
                assert separation_count(ws, gu, gv) == separation_count(ws, u, v)
