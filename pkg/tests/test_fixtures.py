"""Shipped fixture tests."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from cubulate.core.ball import build_ball
from cubulate.core.presentation import free_abelian, load_presentation
from cubulate.cubes.complex import load_cube_complex
from cubulate.fixtures import (
    random_wallspace,
    torus,
    write_fixtures,
    z2_coordinates,
    z2_grid,
)
from cubulate.utils.artifacts import read_json
from cubulate.walls.wallspace import Wallspace, build_wallspace, load_walls_spec


def test_write_fixtures_writes_every_file(tmp_path: Path) -> None:
    written = write_fixtures(tmp_path)
    names = {p.name for p in written}
    assert len(written) == 17
    for name in (
        "z2.group.toml",
        "z2_grid.wallspace.json",
        "z2_vertical.wallspace.json",
        "random.wallspace.json",
        "z2_grid.walls.toml",
        "z2_families.toml",
        "torus.cubes.json",
        "one_loop_square.cubes.json",
    ):
        assert name in names
    assert all(p.exists() for p in written)


def test_write_fixtures_subset(tmp_path: Path) -> None:
    written = write_fixtures(tmp_path, only=["torus"])
    assert [p.name for p in written] == ["torus.cubes.json"]


def test_fixture_files_load_back(tmp_path: Path) -> None:
    write_fixtures(tmp_path)

    assert load_presentation(tmp_path / "z2.group.toml") == free_abelian(2)
    ws = Wallspace.from_dict(read_json(tmp_path / "z2_grid.wallspace.json", "cubulate.wallspace"))
    assert ws.walls == z2_grid().walls
    assert load_cube_complex(tmp_path / "torus.cubes.json") == torus()


def test_grid_walls_spec_rebuilds_grid(tmp_path: Path) -> None:
    write_fixtures(tmp_path, only=["z2_grid"])

    ball = build_ball(free_abelian(2), 4)
    ws = build_wallspace(ball, load_walls_spec(tmp_path / "z2_grid.walls.toml"))
    assert [w.L for w in ws.walls] == [w.L for w in z2_grid().walls]
    assert ws.margin == 0


def test_random_wallspace_is_seeded(tmp_path: Path) -> None:
    a = random_wallspace(np.random.default_rng(7))
    b = random_wallspace(np.random.default_rng(7))
    assert a.walls == b.walls
    assert 1 <= len(a.walls) <= 12
    assert len(a.ball) <= 30

    write_fixtures(tmp_path / "one", only=["random"], seed=3)
    write_fixtures(tmp_path / "two", only=["random"], seed=3)
    one = (tmp_path / "one" / "random.wallspace.json").read_bytes()
    two = (tmp_path / "two" / "random.wallspace.json").read_bytes()
    assert one == two


def test_z2_coordinates() -> None:
    assert z2_coordinates("aabB") == (2, 0)
    assert z2_coordinates("AAb") == (-2, 1)
