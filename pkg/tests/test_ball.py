"""Cayley ball construction tests."""
from __future__ import annotations

import pytest

from cubulate.core.ball import CayleyBall, build_ball
from cubulate.core.errors import MalformedInputError, SizeError
from cubulate.core.presentation import free_abelian, free_group, right_angled_coxeter, surface_genus2


def test_free_group_ball_sizes() -> None:
    ball = build_ball(free_group(2), 3)
    assert ball.sphere_sizes() == [1, 4, 12, 36]
    assert len(ball) == 53
    assert ball.words[0] == ""
    assert ball.distance[0] == 0


def test_free_abelian_ball_sizes() -> None:
    ball = build_ball(free_abelian(2), 3)
    assert ball.sphere_sizes() == [1, 4, 8, 12]


def test_vertices_are_ordered_by_distance_then_shortlex() -> None:
    ball = build_ball(free_abelian(1), 2)
    assert ball.words == ("", "A", "a", "AA", "aa")


def test_edges_are_labelled_by_generator() -> None:
    ball = build_ball(free_group(2), 1)
    assert len(ball.edges) == 8
    assert (0, "a", ball.index_of("a")) in ball.edges
    assert (ball.index_of("a"), "A", 0) in ball.edges
    assert ball.graph.number_of_edges() == 4


def test_finite_group_ball_stops_growing() -> None:
    ball = build_ball(right_angled_coxeter(("a", "b"), (("a", "b"),)), 4)
    assert len(ball) == 4
    assert ball.sphere_sizes() == [1, 2, 1, 0, 0]


def test_subgroup_generators_ball() -> None:
    ball = build_ball(free_abelian(1), 2, generators=["aa"])
    assert ball.generators == ("AA", "aa")
    assert ball.words == ("", "AA", "aa", "AAAA", "aaaa")


def test_vertex_budget_raises_size_error() -> None:
    with pytest.raises(SizeError) as excinfo:
        build_ball(free_group(2), 3, vertex_budget=10)
    assert excinfo.value.count > 10
    assert excinfo.value.module == "group-core"


def test_negative_radius_is_malformed() -> None:
    with pytest.raises(MalformedInputError):
        build_ball(free_group(1), -1)


def test_resolve_and_translation_map() -> None:
    ball = build_ball(free_abelian(1), 2)
    assert ball.resolve("a") == 2
    assert ball.resolve(3) == 3
    assert ball.translation_map("a") == (2, 0, 4, 1, -1)
    with pytest.raises(MalformedInputError):
        ball.resolve("aaa")


def test_trusted_mask_and_restrict() -> None:
    ball = build_ball(free_group(2), 3)
    assert ball.trusted_mask(1).bit_count() == 17
    smaller = ball.restrict(2)
    assert len(smaller) == 17
    assert smaller.words == ball.words[:17]
    assert smaller == build_ball(free_group(2), 2)


def test_ball_dict_round_trip() -> None:
    ball = build_ball(free_abelian(2), 2)
    again = CayleyBall.from_dict(ball.to_dict())
    assert again == ball
    assert again.ball_id == ball.ball_id


def test_ball_dot_labels_identity() -> None:
    dot = build_ball(free_group(1), 1).to_dot()
    assert dot.startswith("graph ball {")
    assert 'v0 [label="1"]' in dot
    assert dot.count("--") == 2


def test_genus2_ball_matches_irreducible_words() -> None:
    p = surface_genus2()
    ball = build_ball(p, 3)
    words = layer = [""]
    for _ in range(3):
        layer = [w + s for w in layer for s in p.symbols]
        words = words + layer
    irreducible = {w for w in words if p.normal_form(w) == w}
    assert ball.sphere_sizes() == [1, 8, 56, 392]
    assert len(ball) == len(irreducible) == 457
    assert set(ball.words) == irreducible
    assert {p.normal_form(w) for w in words} == irreducible


@pytest.mark.parametrize(
    "p, R",
    [
        (free_group(2), 4),
        (free_abelian(2), 5),
        (surface_genus2(), 3),
        (right_angled_coxeter(("a", "b", "c"), (("a", "b"),)), 5),
    ],
)
def test_ball_restriction_is_the_smaller_ball(p, R: int) -> None:
    ball = build_ball(p, R)
    for r in range(R):
        smaller = build_ball(p, r)
        assert ball.restrict(r) == smaller
        assert ball.words[: len(smaller)] == smaller.words


@pytest.mark.parametrize("p", [free_group(2), free_abelian(2), surface_genus2()])
def test_left_translation_embeds_smaller_ball(p) -> None:
    R = 3
    ball = build_ball(p, R)
    edges = set(ball.edges)
    for g in ball.words:
        small = build_ball(p, R - len(g))
        image = [ball.index_of(p.multiply(g, v)) for v in small.words]
        assert None not in image
        assert len(set(image)) == len(image)
        for u, s, v in small.edges:
            assert (image[u], s, image[v]) in edges
