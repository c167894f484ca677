"""
工具函数模块
"""

from cubulate.utils.system import get_system_info, parallel_map
from cubulate.utils.artifacts import write_json, read_json
from cubulate.utils.config import Budgets, ConfigManager, RunConfig, create_default_config, load_suite_config

__all__ = [
    "get_system_info",
    "parallel_map",
    "write_json",
    "read_json",
    "Budgets",
    "ConfigManager",
    "RunConfig",
    "create_default_config",
    "load_suite_config",
]
