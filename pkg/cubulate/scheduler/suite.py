"""suite 调度器

读取 TOML 配置，按优先级依次在进程内执行多个子命令，每个 run 的输出写到独立日志。
"""
from __future__ import annotations

import contextlib
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from cubulate.utils.config import load_suite_config
from cubulate.utils.system import get_system_info
from cubulate.scheduler.state_store import SuiteStateStore, LOCAL_TZ, format_iso

logger = logging.getLogger(__name__)

OUT_DIR_PLACEHOLDER = "{out_dir}"


@dataclass(order=True)
class ScheduledRun:
    """内部调度用的 run 定义"""

    # 优先级越大越靠前，同优先级保持配置中的顺序
    sort_index: tuple = field(init=False, repr=False)

    name: str = field(compare=False)
    command: str = field(compare=False)
    args: List[str] = field(default_factory=list, compare=False)
    priority: int = field(default=0, compare=False)
    position: int = field(default=0, compare=False)
    description: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        self.sort_index = (-self.priority, self.position)

    def argv(self) -> List[str]:
        return [self.command, *self.args]

    def to_payload(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "command": self.command,
            "args": list(self.args),
            "priority": self.priority,
            "description": self.description,
        }


class SuiteScheduler:
    """按配置顺序执行一组 cubulate 子命令"""

    def __init__(self, config_path: Path, dry_run: bool = False, log_level: str = "WARNING"):
        self.config_path = Path(config_path)
        self.config_dir = self.config_path.parent.resolve()
        self.config_manager = load_suite_config(self.config_path)
        suite_cfg = self.config_manager.get_suite_config()

        out_dir = Path(str(suite_cfg.get("out_dir", "suite_out"))).expanduser()
        self.out_dir = out_dir if out_dir.is_absolute() else (self.config_dir / out_dir).resolve()
        self.seed = int(suite_cfg.get("seed", 0))
        self.stop_on_error = bool(suite_cfg.get("stop_on_error", False))
        self.log_level = log_level
        self.dry_run = dry_run

        self._scheduled = self._load_runs_from_config()
        self._pending: List[Dict[str, Any]] = []
        self._finished: List[Dict[str, Any]] = []
        self._errors: List[Dict[str, Any]] = []
        self.state_store: Optional[SuiteStateStore] = None

    # ------------------------------------------------------------------
    # 配置加载
    # ------------------------------------------------------------------
    def _load_runs_from_config(self) -> List[ScheduledRun]:
        scheduled = []
        for position, cfg in enumerate(self.config_manager.get_runs()):
            args = [self._expand(str(a)) for a in cfg.get("args", [])]
            scheduled.append(
                ScheduledRun(
                    name=cfg["name"],
                    command=cfg["command"],
                    args=args,
                    priority=int(cfg.get("priority", 0)),
                    position=position,
                    description=cfg.get("description"),
                )
            )
        scheduled.sort()
        return scheduled

    def _expand(self, arg: str) -> str:
        return arg.replace(OUT_DIR_PLACEHOLDER, str(self.out_dir))

    @property
    def runs(self) -> List[ScheduledRun]:
        return list(self._scheduled)

    # ------------------------------------------------------------------
    # 调度生命周期
    # ------------------------------------------------------------------
    def run_all(self) -> int:
        """执行配置中的全部 run，返回最差的退出码"""
        if self.dry_run:
            self._print_plan_only()
            return 0

        self.state_store = SuiteStateStore(self.out_dir)
        self._pending = [
            {"config": run, "order": order, "created_at": datetime.now(tz=LOCAL_TZ)}
            for order, run in enumerate(self._scheduled)
        ]
        self._sync_state("running")
        print(f"🔧 suite 启动，共 {len(self._pending)} 个 run，输出目录 {self.out_dir}")

        worst = 0
        while self._pending:
            item = self._pending.pop(0)
            run = item["config"]
            item["started_at"] = datetime.now(tz=LOCAL_TZ)
            code = self._execute(run)
            item["finished_at"] = datetime.now(tz=LOCAL_TZ)
            item["return_code"] = code
            worst = max(worst, code)
            if code >= 2:
                self._errors.append(item)
                print(f"❌ {run.name} 失败 (code={code})，日志 {self.log_path(run)}")
            else:
                self._finished.append(item)
                marker = "✅" if code == 0 else "⚠️"
                print(f"{marker} {run.name} 完成 (code={code})")
            self._sync_state("running")
            if code >= 2 and self.stop_on_error:
                print("🛑 stop_on_error 已开启，跳过剩余 run")
                break

        self._sync_state("stopped")
        self._print_summary()
        return worst

    def log_path(self, run: ScheduledRun) -> Path:
        return self.out_dir / "run_logs" / f"{run.name}.log"

    def _execute(self, run: ScheduledRun) -> int:
        from cubulate.ui import cli

        argv = run.argv() + ["--log-level", self.log_level, "--seed", str(self.seed)]
        log_path = self.log_path(run)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        root = logging.getLogger()
        saved_level = root.level
        logger.info("执行 run %s: %s", run.name, " ".join(argv))

        with open(log_path, "w", encoding="utf-8") as log_file:
            handler = logging.StreamHandler(log_file)
            handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
            root.addHandler(handler)
            try:
                with contextlib.redirect_stdout(log_file), contextlib.redirect_stderr(log_file):
                    try:
                        code = cli.main(argv)
                    except SystemExit as exc:
                        # argparse 参数错误
                        code = exc.code if isinstance(exc.code, int) else 2
                    except Exception:
                        logger.exception("run %s 抛出未处理的异常", run.name)
                        code = 2
            finally:
                root.removeHandler(handler)
                root.setLevel(saved_level)
        return int(code)

    # ------------------------------------------------------------------
    # 状态与输出
    # ------------------------------------------------------------------
    def _sync_state(self, indicator: str) -> None:
        if self.state_store is None:
            return

        def _record(item: Dict[str, Any]) -> Dict[str, Any]:
            payload = item["config"].to_payload()
            payload["order"] = item["order"]
            for key in ("created_at", "started_at", "finished_at"):
                if item.get(key) is not None:
                    payload[key] = format_iso(item[key])
            if "return_code" in item:
                payload["return_code"] = item["return_code"]
            return payload

        summary = {
            "total": len(self._scheduled),
            "pending": len(self._pending),
            "finished": len(self._finished),
            "findings": sum(1 for item in self._finished if item.get("return_code") == 1),
            "errors": len(self._errors),
            "status_indicator": indicator,
            "system": get_system_info(),
        }
        self.state_store.write_state(
            pending=[_record(i) for i in self._pending],
            finished=[_record(i) for i in self._finished],
            errors=[_record(i) for i in self._errors],
            summary=summary,
        )

    def _print_plan_only(self) -> None:
        print("📝 suite 计划 (dry-run mode)")
        for idx, run in enumerate(self._scheduled, start=1):
            print(f"[{idx:02d}] name={run.name}, priority={run.priority}, argv={' '.join(run.argv())}")

    def _print_summary(self) -> None:
        ok = sum(1 for item in self._finished if item.get("return_code") == 0)
        findings = len(self._finished) - ok
        skipped = len(self._scheduled) - len(self._finished) - len(self._errors)
        print(f"📊 suite 完成: 通过 {ok} 个, 有发现 {findings} 个, 失败 {len(self._errors)} 个, 跳过 {skipped} 个")
        for item in self._errors:
            print(f"   - 🔴 {item['config'].name} (return_code={item.get('return_code')})")


__all__ = ["ScheduledRun", "SuiteScheduler", "OUT_DIR_PLACEHOLDER"]
