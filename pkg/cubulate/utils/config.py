"""
配置文件处理工具
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import toml

from cubulate.core.errors import MalformedInputError

BUDGET_ENV = {
    "walls": "CUBULATE_BUDGET_WALLS",
    "zero_cubes": "CUBULATE_BUDGET_ZERO_CUBES",
    "rewrite_steps": "CUBULATE_BUDGET_REWRITE",
    "vertices": "CUBULATE_BUDGET_VERTICES",
}

SUITE_COMMANDS = (
    "ball",
    "walls",
    "dual",
    "check-npc",
    "check-special",
    "criteria",
    "axis",
    "select",
    "induce",
    "fixtures",
)


@dataclass
class Budgets:
    walls: int = 64
    zero_cubes: int = 1_000_000
    rewrite_steps: int = 10_000
    vertices: int = 200_000

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, **overrides: Optional[int]) -> "Budgets":
        """默认值 < 环境变量 CUBULATE_BUDGET_* < 显式参数（命令行）"""
        environ = os.environ if environ is None else environ
        budgets = cls()
        for name, var in BUDGET_ENV.items():
            raw = environ.get(var)
            if raw is not None and raw.strip():
                try:
                    setattr(budgets, name, int(raw))
                except ValueError:
                    raise MalformedInputError(f"环境变量 {var} 必须是整数: {raw!r}", module="cli") from None
        for name, value in overrides.items():
            if value is not None:
                setattr(budgets, name, int(value))
        return budgets

    def validate(self) -> List[str]:
        return [f"预算 {name} 必须为正整数: {value}" for name, value in self.to_dict().items() if value <= 0]

    def to_dict(self) -> Dict[str, int]:
        return {
            "walls": self.walls,
            "zero_cubes": self.zero_cubes,
            "rewrite_steps": self.rewrite_steps,
            "vertices": self.vertices,
        }


@dataclass
class RunConfig:
    """一次子命令调用的全部参数"""

    command: str
    inputs: Dict[str, Path] = field(default_factory=dict)
    outputs: Dict[str, Path] = field(default_factory=dict)
    radius: Optional[int] = None
    margin: Optional[int] = None
    L: Optional[int] = None
    budgets: Budgets = field(default_factory=Budgets)
    max_dim: int = 8
    seed: int = 0
    threads: Optional[int] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def validate(self) -> List[str]:
        """返回错误信息列表，空列表表示合法"""
        errors = self.budgets.validate()
        if self.radius is not None and self.radius < 0:
            errors.append(f"半径必须非负: {self.radius}")
        if self.margin is not None and self.margin < 0:
            errors.append(f"margin 必须非负: {self.margin}")
        if self.radius is not None and self.margin is not None and self.margin >= self.radius > 0:
            errors.append(f"margin ({self.margin}) 必须小于半径 ({self.radius})")
        if self.L is not None and self.L < 1:
            errors.append(f"L 必须为正: {self.L}")
        if self.max_dim < 1:
            errors.append(f"max_dim 必须为正: {self.max_dim}")
        if self.threads is not None and self.threads < 1:
            errors.append(f"threads 必须为正: {self.threads}")
        for key, path in self.inputs.items():
            if path is not None and not Path(path).exists():
                errors.append(f"输入文件不存在 ({key}): {path}")
        return errors


class ConfigManager:
    """TOML 配置文件管理器"""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = config_path
        self.config: Dict[str, Any] = {}
        if config_path and config_path.exists():
            self.load_config()

    def load_config(self, config_path: Optional[Path] = None) -> Dict[str, Any]:
        if config_path:
            self.config_path = config_path

        if not self.config_path or not self.config_path.exists():
            raise MalformedInputError(f"配置文件不存在: {self.config_path}", module="cli")

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                self.config = toml.load(f)
            return self.config
        except toml.TomlDecodeError as e:
            raise MalformedInputError(f"配置文件格式错误: {e}", module="cli") from None

    def save_config(self, config_path: Optional[Path] = None) -> None:
        if config_path:
            self.config_path = config_path

        if not self.config_path:
            raise MalformedInputError("未指定配置文件路径", module="cli")

        with open(self.config_path, "w", encoding="utf-8") as f:
            toml.dump(self.config, f)

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值，支持 'section.key' 形式的嵌套键"""
        value: Any = self.config
        for k in key.split("."):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> None:
        keys = key.split(".")
        config = self.config
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]
        config[keys[-1]] = value

    def get_runs(self) -> List[Dict[str, Any]]:
        return self.get("runs", [])

    def get_suite_config(self) -> Dict[str, Any]:
        return self.get("suite", {})

    def validate_config(self) -> List[str]:
        """验证 suite 配置文件格式，返回错误信息列表"""
        errors = []
        if "runs" not in self.config:
            errors.append("缺少必需的配置项: runs")

        runs = self.get_runs()
        if not isinstance(runs, list):
            errors.append("runs 必须是一个列表")
        else:
            names = set()
            for i, run in enumerate(runs):
                if not isinstance(run, dict):
                    errors.append(f"运行配置 {i} 必须是一个字典")
                    continue
                for key in ("name", "command"):
                    if key not in run:
                        errors.append(f"运行 {i} 缺少必需字段: {key}")
                if run.get("command") is not None and run["command"] not in SUITE_COMMANDS:
                    errors.append(f"运行 {i} 的 command 不是已知子命令: {run['command']}")
                if "args" in run and not isinstance(run["args"], list):
                    errors.append(f"运行 {i} 的 args 必须是列表")
                if "priority" in run and not isinstance(run["priority"], int):
                    errors.append(f"运行 {i} 的 priority 必须是整数")
                if run.get("name") in names:
                    errors.append(f"运行名重复: {run['name']}")
                names.add(run.get("name"))

        suite = self.get_suite_config()
        if not isinstance(suite, dict):
            errors.append("suite 配置必须是一个字典")
        return errors


def create_default_config(config_path: Path) -> None:
    """写一个示例 suite：在 ℤ² 夹具上跑对偶与判据"""
    default_config = {
        "suite": {
            "out_dir": "suite_out",
            "seed": 0,
            "stop_on_error": False,
        },
        "runs": [
            {
                "name": "fixtures",
                "command": "fixtures",
                "priority": 2,
                "args": ["--out", "{out_dir}/fixtures"],
            },
            {
                "name": "grid_dual",
                "command": "dual",
                "priority": 1,
                "args": ["--walls", "{out_dir}/fixtures/z2_grid.wallspace.json", "--out", "{out_dir}/grid_dual.json"],
            },
            {
                "name": "torus_special",
                "command": "check-special",
                "priority": 1,
                "args": ["{out_dir}/fixtures/torus.cubes.json", "--report", "{out_dir}/torus_special.json"],
            },
            {
                "name": "z_profile",
                "command": "criteria",
                "priority": 0,
                "args": ["--walls", "{out_dir}/fixtures/z_line.wallspace.json", "--L", "5", "--report", "{out_dir}/z_profile.json"],
            },
        ],
    }
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with open(config_path, "w", encoding="utf-8") as f:
        toml.dump(default_config, f)


def load_suite_config(config_path: Path) -> ConfigManager:
    if not config_path.exists():
        create_default_config(config_path)
        print(f"已创建默认 suite 配置文件: {config_path}")

    config_manager = ConfigManager(config_path)
    errors = config_manager.validate_config()
    if errors:
        raise MalformedInputError(
            "suite 配置文件有错误:\n" + "\n".join(f"- {error}" for error in errors), module="cli"
        )
    return config_manager


__all__ = [
    "BUDGET_ENV",
    "SUITE_COMMANDS",
    "Budgets",
    "RunConfig",
    "ConfigManager",
    "create_default_config",
    "load_suite_config",
]
