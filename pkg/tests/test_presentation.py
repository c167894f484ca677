"""Group presentation and normal form tests."""
from __future__ import annotations

import dataclasses
from pathlib import Path

import pytest
import toml

from cubulate.core.errors import DivergenceError, MalformedInputError
from cubulate.core.presentation import (
    GENUS2_RELATOR,
    BuiltinKind,
    GroupPresentation,
    check_local_confluence,
    free_abelian,
    free_group,
    load_presentation,
    presentation_from_config,
    presentation_to_config,
    right_angled_artin,
    right_angled_coxeter,
    surface_genus2,
)


def test_builtin_alphabet_puts_inverse_first() -> None:
    p = free_group(2)
    assert p.symbols == ("A", "a", "B", "b")
    assert p.inverse_symbol("a") == "A"
    assert p.generators == ("A", "B")
    assert p.shortlex_key("A") < p.shortlex_key("a") < p.shortlex_key("B")


def test_free_group_cancels_adjacent_inverses() -> None:
    p = free_group(2)
    assert p.normal_form("aAbBba") == "ba"
    assert p.multiply("ab", "BA") == ""
    assert p.invert("abA") == "aBA"
    assert p.power("ab", 2) == "abab"
    assert p.power("ab", -1) == "BA"


def test_free_abelian_sorts_letters() -> None:
    p = free_abelian(2)
    assert p.normal_form("ba") == "ab"
    assert p.normal_form("bAbaB") == "b"
    assert p.multiply("b", "a") == p.multiply("a", "b")


def test_parse_word_accepts_inverse_notations() -> None:
    p = free_group(2)
    assert p.parse_word("a b⁻¹") == "aB"
    assert p.parse_word("ab^-1a") == "aBa"
    assert p.parse_word("1") == ""
    assert p.element("aA") == ""


def test_unknown_symbol_is_malformed() -> None:
    p = free_group(1)
    with pytest.raises(MalformedInputError):
        p.normal_form("ax")


def test_rewrite_budget_raises_divergence() -> None:
    p = dataclasses.replace(free_group(1), rewrite_budget=1)
    assert p.normal_form("aA") == ""
    with pytest.raises(DivergenceError) as excinfo:
        p.normal_form("aAaA")
    assert excinfo.value.budget == 1


def test_rules_must_decrease_shortlex() -> None:
    with pytest.raises(MalformedInputError):
        GroupPresentation(symbols=("a", "b"), inverses=("a", "b"), rules=(("a", "ab"),))


def test_builtin_presentations_are_confluent() -> None:
    for p in (free_group(2), free_abelian(3), right_angled_artin(("a", "b", "c"), (("a", "b"),))):
        assert check_local_confluence(p) == []
        assert p.confluence_verified is True


def test_trace_engine_rule_table_on_a_path_is_not_confluent() -> None:
    """The declared commutation rules leave pairs unjoined; the trace normal form still decides."""
    p = right_angled_artin(("a", "b", "c"), (("a", "b"), ("b", "c")))
    failures = check_local_confluence(p)
    assert ("CBA", "BCA", "CAB") in [(f.word, f.left, f.right) for f in failures]
    assert p.confluence_verified is False
    assert p.normal_form("BCA") == p.normal_form("CAB") == p.normal_form("CBA")


def test_right_angled_coxeter_on_a_path_is_flagged_unverified() -> None:
    p = right_angled_coxeter(("a", "b", "c"), (("a", "b"), ("b", "c")))
    assert p.confluence_verified is False
    assert p.normal_form("cab") == p.normal_form("cba") == "bca"
    assert right_angled_coxeter(("a", "b"), (("a", "b"),)).confluence_verified is True


def test_local_confluence_reports_failing_pair() -> None:
    p = GroupPresentation(
        symbols=("a", "b", "c"),
        inverses=("a", "b", "c"),
        rules=(("ab", "a"), ("bc", "b")),
    )
    failures = check_local_confluence(p)
    assert len(failures) == 1
    assert failures[0].word == "abc"
    assert {failures[0].left, failures[0].right} == {"ac", "a"}


def test_genus2_relator_is_trivial() -> None:
    p = surface_genus2()
    assert p.builtin is not None and p.builtin.kind is BuiltinKind.SURFACE_GENUS2
    assert p.normal_form(GENUS2_RELATOR) == ""
    assert p.normal_form(p.invert(GENUS2_RELATOR)) == ""


BUILTINS = {
    "free_group": lambda: free_group(2),
    "free_abelian": lambda: free_abelian(3),
    "surface_genus2": surface_genus2,
    "raag_path": lambda: right_angled_artin(("a", "b", "c"), (("a", "b"), ("b", "c"))),
    "racg_square": lambda: right_angled_coxeter(("a", "b", "c", "d"), (("a", "b"), ("b", "c"), ("c", "d"), ("a", "d"))),
}


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_normal_form_is_idempotent(name: str, random_words) -> None:
    p = BUILTINS[name]()
    for w in random_words(p.symbols, 1000, 12):
        nf = p.normal_form(w)
        assert p.normal_form(nf) == nf


def test_genus2_element_times_inverse_is_identity(random_words) -> None:
    p = surface_genus2()
    for w in random_words(p.symbols, 50, 8):
        g = p.normal_form(w)
        assert p.multiply(g, p.invert(g)) == ""
        assert p.multiply(p.invert(g), g) == ""


def test_right_angled_artin_trace_normal_form() -> None:
    p = right_angled_artin(("a", "b", "c"), (("a", "b"),))
    assert p.normal_form("ba") == "ab"
    assert p.normal_form("ca") == "ca"
    assert p.normal_form("abA") == "b"
    assert p.normal_form("acA") == "acA"


def test_right_angled_coxeter_generators_are_involutions() -> None:
    p = right_angled_coxeter(("a", "b"))
    assert p.normal_form("aa") == ""
    assert p.invert("ab") == "ba"
    assert p.normal_form("abba") == ""


def test_group_file_round_trip(tmp_path: Path) -> None:
    path = tmp_path / "z2.group.toml"
    with open(path, "w", encoding="utf-8") as fh:
        toml.dump(presentation_to_config(free_abelian(2)), fh)

    p = load_presentation(path)
    assert p == free_abelian(2)


def test_user_presentation_from_config() -> None:
    p = presentation_from_config(
        {
            "generators": {"order": ["a"]},
            "rules": {"pairs": [["aa", ""]]},
            "options": {"name": "Z/2", "confluence_declared": True},
        }
    )
    assert p.display_name == "Z/2"
    assert p.normal_form("aaa") == "a"
    assert p.invert("a") == "a"


def test_missing_group_file_is_malformed(tmp_path: Path) -> None:
    with pytest.raises(MalformedInputError):
        load_presentation(tmp_path / "missing.toml")
