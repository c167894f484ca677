"""
Suite scheduler tests.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Dict, Iterable, Optional

import pytest
import toml

from cubulate.core.errors import MalformedInputError
from cubulate.scheduler.suite import SuiteScheduler
from cubulate.utils.config import create_default_config

SuiteBuilder = Callable[[Iterable[Dict[str, object]], Optional[Dict[str, object]]], Path]


@pytest.fixture
def suite_config_builder(tmp_path: Path) -> SuiteBuilder:
    """Create a temporary suite config file and return its path."""

    def _builder(
        runs: Iterable[Dict[str, object]],
        suite_overrides: Optional[Dict[str, object]] = None,
    ) -> Path:
        suite_cfg: Dict[str, object] = {"out_dir": "out", "seed": 0, "stop_on_error": False}
        if suite_overrides:
            suite_cfg.update(suite_overrides)

        config_path = tmp_path / "suite.toml"
        with open(config_path, "w", encoding="utf-8") as fh:
            toml.dump({"suite": suite_cfg, "runs": list(runs)}, fh)
        return config_path

    return _builder


def _state(scheduler: SuiteScheduler) -> Dict[str, object]:
    path = scheduler.out_dir / ".cubulate_state" / "suite_state.json"
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_runs_are_ordered_by_priority_then_position(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder(
        [
            {"name": "low", "command": "fixtures", "priority": 0},
            {"name": "high", "command": "fixtures", "priority": 5},
            {"name": "mid_a", "command": "fixtures", "priority": 3},
            {"name": "mid_b", "command": "fixtures", "priority": 3},
        ]
    )

    scheduler = SuiteScheduler(config_path)
    assert [run.name for run in scheduler.runs] == ["high", "mid_a", "mid_b", "low"]


def test_out_dir_placeholder_is_expanded_relative_to_config(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder(
        [{"name": "fx", "command": "fixtures", "args": ["--out", "{out_dir}/fixtures"]}]
    )

    scheduler = SuiteScheduler(config_path)
    expected = (config_path.parent / "out").resolve()
    assert scheduler.out_dir == expected
    assert scheduler.runs[0].argv() == ["fixtures", "--out", f"{expected}/fixtures"]


def test_dry_run_prints_plan_without_running(
    suite_config_builder: SuiteBuilder, capsys: pytest.CaptureFixture[str]
) -> None:
    config_path = suite_config_builder([{"name": "fx", "command": "fixtures", "args": ["--out", "{out_dir}/fx"]}])

    scheduler = SuiteScheduler(config_path, dry_run=True)
    assert scheduler.run_all() == 0

    out = capsys.readouterr().out
    assert "dry-run" in out
    assert "[01] name=fx, priority=0" in out
    assert not scheduler.out_dir.exists()


def test_default_suite_runs_to_completion(tmp_path: Path) -> None:
    config_path = tmp_path / "suite.toml"
    create_default_config(config_path)

    scheduler = SuiteScheduler(config_path)
    assert [run.name for run in scheduler.runs][0] == "fixtures"
    assert scheduler.run_all() == 0

    out_dir = scheduler.out_dir
    for name in ("grid_dual.json", "torus_special.json", "z_profile.json"):
        assert (out_dir / name).exists()
    assert (out_dir / "run_logs" / "fixtures.log").exists()

    state = _state(scheduler)
    assert state["summary"]["finished"] == 4
    assert state["summary"]["errors"] == 0
    assert state["summary"]["status_indicator"] == "stopped"
    assert state["summary"]["system"]["cpu_count"] >= 1
    assert all(item["return_code"] == 0 for item in state["finished"])


def test_findings_are_finished_with_code_one(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder(
        [
            {"name": "fx", "command": "fixtures", "priority": 1, "args": ["--out", "{out_dir}/fx"]},
            {
                "name": "flat",
                "command": "criteria",
                "args": ["--walls", "{out_dir}/fx/z2_vertical.wallspace.json", "--L", "4"],
            },
        ]
    )

    scheduler = SuiteScheduler(config_path)
    assert scheduler.run_all() == 1

    state = _state(scheduler)
    assert state["summary"]["finished"] == 2
    assert state["summary"]["findings"] == 1


def test_stop_on_error_skips_remaining_runs(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder(
        [
            {"name": "bad", "command": "dual", "priority": 1, "args": ["--walls", "{out_dir}/missing.json"]},
            {"name": "later", "command": "fixtures", "args": ["--out", "{out_dir}/fx"]},
        ],
        suite_overrides={"stop_on_error": True},
    )

    scheduler = SuiteScheduler(config_path)
    assert scheduler.run_all() == 2

    state = _state(scheduler)
    assert [item["name"] for item in state["errors"]] == ["bad"]
    assert state["summary"]["pending"] == 1
    assert not (scheduler.out_dir / "fx").exists()
    log_text = scheduler.log_path(scheduler.runs[0]).read_text(encoding="utf-8")
    assert "missing.json" in log_text


def test_argument_errors_are_reported_as_errors(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder([{"name": "no_element", "command": "axis", "args": ["--walls", "x.json"]}])

    scheduler = SuiteScheduler(config_path)
    assert scheduler.run_all() == 2
    assert _state(scheduler)["summary"]["errors"] == 1


def test_unknown_command_is_rejected(suite_config_builder: SuiteBuilder) -> None:
    config_path = suite_config_builder([{"name": "x", "command": "train"}])

    with pytest.raises(MalformedInputError):
        SuiteScheduler(config_path)
