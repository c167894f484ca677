"""Cube complex, link condition and hyperplane pathology tests."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from cubulate.core.errors import MalformedInputError, StructuralError
from cubulate.cubes.complex import (
    Cell,
    CubeComplex,
    FaceMap,
    check_npc,
    from_dual,
    load_cube_complex,
    salvetti_complex,
)
from cubulate.cubes.hyperplanes import check_special, hyperplanes
from cubulate.dual.sageev import build_dual
from cubulate.fixtures import one_loop_square, three_squares, torus, wedge_of_loops, z2_grid


def test_torus_is_npc_and_special() -> None:
    C = torus()
    assert C.vertices == 1
    assert C.dimension == 2
    assert check_npc(C).ok
    report = check_special(C)
    assert report.special
    assert len(report.hyperplanes) == 2


def test_salvetti_complex_of_path_graph() -> None:
    C = salvetti_complex(("a", "b", "c"), (("a", "b"), ("b", "c")))
    assert C.vertices == 1
    assert len(C.cells_of_dim(1)) == 3
    assert len(C.cells_of_dim(2)) == 2
    assert check_npc(C).ok
    assert len(check_special(C).hyperplanes) == 3


def test_salvetti_complex_needs_cube_for_triangle() -> None:
    triangle = (("a", "b"), ("b", "c"), ("a", "c"))
    flat = salvetti_complex(("a", "b", "c"), triangle, max_dim=2)
    assert any(v.kind == "non-flag" for v in check_npc(flat).violations)

    full = salvetti_complex(("a", "b", "c"), triangle, max_dim=3)
    assert full.dimension == 3
    assert check_npc(full).ok


def test_wedge_of_loops_is_npc_and_special() -> None:
    C = wedge_of_loops()
    assert check_npc(C).ok
    report = check_special(C)
    assert report.special
    assert len(report.hyperplanes) == 2


def test_three_squares_fail_flag_condition_at_shared_vertex() -> None:
    report = check_npc(three_squares())
    assert not report.ok
    kinds = {(v.vertex, v.kind) for v in report.violations}
    assert (0, "non-flag") in kinds


def test_dropping_one_square_restores_link_condition() -> None:
    C = three_squares()
    squares = C.cells_of_dim(2)
    assert len(squares) == 3
    assert check_npc(C.without_cell(squares[-1])).ok


def test_one_loop_square_is_degenerate_and_self_intersecting() -> None:
    C = one_loop_square()
    npc = check_npc(C)
    assert not npc.ok
    assert any(v.kind == "degenerate" for v in npc.violations)
    report = check_special(C)
    assert not report.special
    assert report.self_intersections


def test_dual_of_grid_is_special_cube_complex() -> None:
    C = from_dual(build_dual(z2_grid()))
    assert C.vertices == 25
    assert len(C.edges) == 40
    assert check_npc(C).ok
    report = check_special(C)
    assert report.special
    assert len(report.hyperplanes) == 8


def test_edge_classes_color_dot_output() -> None:
    C = torus()
    classes = check_special(C).edge_classes()
    dot = C.to_dot(classes)
    assert dot.startswith("graph complex {")
    assert dot.count("color=") == 2


COMPLEXES = {
    "torus": torus,
    "wedge": wedge_of_loops,
    "three_squares": three_squares,
    "one_loop_square": one_loop_square,
    "path_salvetti": lambda: salvetti_complex(("a", "b", "c"), (("a", "b"), ("b", "c"))),
    "grid_dual": lambda: from_dual(build_dual(z2_grid())),
}


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_hyperplanes_partition_the_edges(name: str) -> None:
    C = COMPLEXES[name]()
    planes = hyperplanes(C)
    assert sum(len(h.edges) for h in planes) == len(C.edges)
    assert sorted(e for h in planes for e in h.edges) == sorted(C.edges)


@pytest.mark.parametrize("name", ["torus", "three_squares", "one_loop_square", "path_salvetti", "grid_dual"])
def test_square_deletion_only_refines_hyperplane_classes(name: str) -> None:
    """Putting a square back merges or preserves classes; it never splits one."""
    C = COMPLEXES[name]()
    report = check_special(C)
    before = report.edge_classes()
    for sq in C.cells_of_dim(2):
        assert sq > max(C.edges)
        mutant = check_special(C.without_cell(sq))
        after = mutant.edge_classes()
        for e1 in C.edges:
            for e2 in C.edges:
                if after[e1] == after[e2]:
                    assert before[e1] == before[e2]
        assert len(mutant.hyperplanes) >= len(report.hyperplanes)
        if not report.self_intersections:
            assert not mutant.self_intersections


def test_wrong_corner_count_is_structural_error() -> None:
    with pytest.raises(StructuralError):
        CubeComplex(2, (Cell(1, (0,)),))


def test_edge_with_faces_is_structural_error() -> None:
    with pytest.raises(StructuralError):
        CubeComplex(2, (Cell(1, (0, 1), (FaceMap(0),)),))


def test_cube_complex_dict_round_trip() -> None:
    C = three_squares()
    assert CubeComplex.from_dict(C.to_dict()) == C


def test_load_cube_complex_checks_format(tmp_path: Path) -> None:
    good = tmp_path / "torus.cubes.json"
    good.write_text(json.dumps(torus().to_dict()), encoding="utf-8")
    assert load_cube_complex(good) == torus()

    bad = tmp_path / "other.json"
    bad.write_text(json.dumps({"format": "something-else", "vertices": 1, "cells": []}), encoding="utf-8")
    with pytest.raises(MalformedInputError):
        load_cube_complex(bad)

    with pytest.raises(MalformedInputError):
        load_cube_complex(tmp_path / "missing.json")
