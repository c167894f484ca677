"""Configuration layer tests: budgets, run configs and the suite config manager."""
from __future__ import annotations

from pathlib import Path

import pytest
import toml

from cubulate.core.errors import MalformedInputError
from cubulate.utils.config import (
    Budgets,
    ConfigManager,
    RunConfig,
    create_default_config,
    load_suite_config,
)


def test_budgets_precedence_default_env_flag() -> None:
    assert Budgets.from_env(environ={}).walls == 64

    env = {"CUBULATE_BUDGET_WALLS": "10", "CUBULATE_BUDGET_VERTICES": " "}
    budgets = Budgets.from_env(environ=env)
    assert budgets.walls == 10
    assert budgets.vertices == 200_000

    assert Budgets.from_env(environ=env, walls=5).walls == 5
    assert Budgets.from_env(environ=env, walls=None).walls == 10


def test_budget_env_must_be_integer() -> None:
    with pytest.raises(MalformedInputError):
        Budgets.from_env(environ={"CUBULATE_BUDGET_ZERO_CUBES": "many"})


def test_non_positive_budget_is_invalid() -> None:
    assert Budgets(walls=0).validate()
    assert Budgets().validate() == []


def test_run_config_validate(tmp_path: Path) -> None:
    existing = tmp_path / "ws.json"
    existing.write_text("{}", encoding="utf-8")

    ok = RunConfig(command="dual", inputs={"walls": existing})
    assert ok.validate() == []

    bad = RunConfig(command="walls", inputs={"ball": tmp_path / "missing.json"}, radius=4, margin=4, L=0)
    errors = bad.validate()
    assert len(errors) == 3
    assert any("missing.json" in e for e in errors)


def test_config_manager_dotted_keys(tmp_path: Path) -> None:
    path = tmp_path / "c.toml"
    manager = ConfigManager(path)
    manager.set("walls.margin", 2)
    manager.set("select.translate_radius", 3)
    manager.save_config()

    again = ConfigManager(path)
    assert again.get("walls.margin") == 2
    assert again.get("select.translate_radius") == 3
    assert again.get("select.parabolic", []) == []


def test_validate_config_reports_problems(tmp_path: Path) -> None:
    path = tmp_path / "suite.toml"
    with open(path, "w", encoding="utf-8") as fh:
        toml.dump(
            {
                "runs": [
                    {"name": "a", "command": "fixtures"},
                    {"name": "a", "command": "dual", "args": "--walls x"},
                    {"command": "nope"},
                ]
            },
            fh,
        )

    errors = ConfigManager(path).validate_config()
    assert any("运行名重复" in e for e in errors)
    assert any("args 必须是列表" in e for e in errors)
    assert any("缺少必需字段: name" in e for e in errors)
    assert any("nope" in e for e in errors)


def test_missing_runs_section_is_an_error(tmp_path: Path) -> None:
    path = tmp_path / "suite.toml"
    path.write_text("[suite]\nout_dir = \"x\"\n", encoding="utf-8")

    assert ConfigManager(path).validate_config() == ["缺少必需的配置项: runs"]
    with pytest.raises(MalformedInputError):
        load_suite_config(path)


def test_load_suite_config_creates_default(tmp_path: Path) -> None:
    path = tmp_path / "nested" / "suite.toml"
    manager = load_suite_config(path)

    assert path.exists()
    assert [run["name"] for run in manager.get_runs()] == ["fixtures", "grid_dual", "torus_special", "z_profile"]
    assert manager.get("suite.out_dir") == "suite_out"


def test_default_config_round_trips(tmp_path: Path) -> None:
    path = tmp_path / "suite.toml"
    create_default_config(path)
    assert ConfigManager(path).validate_config() == []


def test_shipped_example_suite_is_valid() -> None:
    path = Path(__file__).resolve().parents[1] / "docs" / "example_suite.toml"
    manager = ConfigManager(path)
    assert manager.validate_config() == []
    assert manager.get("runs")[0]["name"] == "fixtures"
