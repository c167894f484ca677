"""
suite 调度器模块
"""

from cubulate.scheduler.suite import SuiteScheduler

__all__ = ["SuiteScheduler"]
