"""持久化 suite 运行状态。

状态文件放在 ``<out_dir>/.cubulate_state/suite_state.json``，记录 Pending/Finished/Error 列表，
写入采用原子替换。报告本身不带时间戳，时间只出现在这个状态文件里。
"""
from __future__ import annotations

import json
import os
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, MutableMapping, Optional
from zoneinfo import ZoneInfo

LOCAL_TZ = ZoneInfo("Asia/Shanghai")


def format_iso(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=LOCAL_TZ)
    return dt.astimezone(LOCAL_TZ).isoformat()


def now_iso() -> str:
    return format_iso(datetime.now(tz=LOCAL_TZ))


class SuiteStateStore:
    """suite 的状态持久层"""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.state_dir = self.out_dir / ".cubulate_state"
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.state_path = self.state_dir / "suite_state.json"
        self._lock = threading.Lock()

        if not self.state_path.exists():
            self._write_json(self.state_path, self._initial_state())

    def load_state(self) -> Dict[str, Any]:
        if not self.state_path.exists():
            return self._initial_state()
        try:
            with open(self.state_path, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError:
            # 文件损坏时返回初始状态
            return self._initial_state()

    def write_state(
        self,
        *,
        pending: Iterable[MutableMapping[str, Any]],
        finished: Iterable[MutableMapping[str, Any]],
        errors: Iterable[MutableMapping[str, Any]],
        summary: Optional[Dict[str, Any]] = None,
    ) -> None:
        data = {
            "updated_at": now_iso(),
            "pending": list(pending),
            "finished": list(finished),
            "errors": list(errors),
            "summary": summary or {},
        }
        with self._lock:
            self._write_json(self.state_path, data)

    def _initial_state(self) -> Dict[str, Any]:
        return {
            "updated_at": now_iso(),
            "pending": [],
            "finished": [],
            "errors": [],
            "summary": {"total": 0, "pending": 0, "finished": 0, "findings": 0, "errors": 0, "status_indicator": "stopped"},
        }

    def _write_json(self, path: Path, data: Any) -> None:
        tmp_path = path.with_suffix(".tmp")
        with open(tmp_path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, ensure_ascii=False, indent=2)
        os.replace(tmp_path, path)


__all__ = ["SuiteStateStore", "LOCAL_TZ", "format_iso", "now_iso"]
