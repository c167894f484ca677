"""命令行入口与报告输出。"""
from cubulate.ui.cli import main

__all__ = ["main"]
