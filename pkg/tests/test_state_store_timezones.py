"""Timezone-related tests for suite state persistence."""
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from cubulate.scheduler.state_store import SuiteStateStore, format_iso


def test_state_store_uses_shanghai_timezone(tmp_path: Path) -> None:
    store = SuiteStateStore(tmp_path)
    state = store.load_state()

    ts = state["updated_at"]
    parsed = datetime.fromisoformat(ts)
    assert parsed.tzinfo is not None
    offset = parsed.utcoffset()
    assert offset is not None
    assert offset.total_seconds() == 8 * 3600


def test_format_iso_converts_utc_times() -> None:
    ts = format_iso(datetime(2024, 1, 1, 0, 0, tzinfo=timezone.utc))
    assert ts == "2024-01-01T08:00:00+08:00"


def test_corrupt_state_file_falls_back_to_initial_state(tmp_path: Path) -> None:
    store = SuiteStateStore(tmp_path)
    store.state_path.write_text("{not json", encoding="utf-8")

    state = store.load_state()
    assert state["pending"] == []
    assert state["summary"]["status_indicator"] == "stopped"


def test_write_state_replaces_file_atomically(tmp_path: Path) -> None:
    store = SuiteStateStore(tmp_path)
    store.write_state(pending=[{"name": "a"}], finished=[], errors=[], summary={"total": 1})

    with open(store.state_path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    assert data["pending"] == [{"name": "a"}]
    assert data["summary"] == {"total": 1}
    assert not store.state_path.with_suffix(".tmp").exists()
