"""报告与 DOT 输出。

报告统一带 format / version / kind，不写时间戳；同样的输入和种子得到逐字节相同的文件。
"""
from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from cubulate.criteria.axis import AxisReport
from cubulate.criteria.induced import InducedWallspace
from cubulate.criteria.profile import SeparationProfile
from cubulate.criteria.selection import SelectionResult
from cubulate.cubes.complex import CubeComplex, NPCReport
from cubulate.cubes.hyperplanes import PathologyReport
from cubulate.dual.sageev import DualComplex, MedianReport, OrbitCensus
from cubulate.utils.artifacts import report_envelope, write_json, write_text


def emit(path: Optional[Path], kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    """包一层信封；给了路径就原子写入"""
    report = report_envelope(kind, body)
    if path is not None:
        write_json(path, report)
    return report


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def format_census(census: Dict[str, Any]) -> str:
    by_dim = census.get("cubes_by_dim", {})
    parts = [f"{dim}-cubes={count}" for dim, count in sorted(by_dim.items(), key=lambda kv: int(kv[0]))]
    return ", ".join(parts) or "empty"


def dual_body(dc: DualComplex, median: Optional[MedianReport] = None, orbits: Optional[OrbitCensus] = None) -> Dict[str, Any]:
    body: Dict[str, Any] = {"census": dc.census()}
    if median is not None:
        body["median"] = median.to_dict()
    if orbits is not None:
        body["orbits"] = orbits.to_dict()
    return body


def npc_body(report: NPCReport, C: CubeComplex) -> Dict[str, Any]:
    return {"complex": C.name, "cells": len(C.cells), **report.to_dict()}


def special_body(report: PathologyReport, C: CubeComplex, npc: Optional[NPCReport] = None) -> Dict[str, Any]:
    body = {"complex": C.name, "verdict": "special" if report.special else "not-special", **report.to_dict()}
    if npc is not None:
        body["npc"] = npc.ok
    return body


def special_dot(report: PathologyReport, C: CubeComplex) -> str:
    return C.to_dot(report.edge_classes())


def profile_body(profile: SeparationProfile) -> Dict[str, Any]:
    return {
        "profile": profile.to_dict(),
        "verdict": "plausible" if profile.plausible else "flat",
        "carrier_ambiguous": any(profile.carrier_skipped),
    }


def axis_body(report: AxisReport) -> Dict[str, Any]:
    return report.to_dict()


def selection_body(result: SelectionResult, failures: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    body = result.to_dict()
    if failures is not None:
        body["verification"] = {"failures": failures, "ok": not failures}
    return body


def induced_body(induced: InducedWallspace, profile: Optional[SeparationProfile] = None) -> Dict[str, Any]:
    ws = induced.wallspace
    body: Dict[str, Any] = {
        "subgroup_generators": list(induced.subgroup_generators),
        "vertices": len(ws.ball),
        "walls": [{"label": w.label, "sources": src} for w, src in zip(ws.walls, induced.provenance)],
        "discarded": induced.discarded,
    }
    if profile is not None:
        body.update(profile_body(profile))
    return body


def write_dot(path: Path, text: str) -> Path:
    return write_text(path, text)


__all__ = [
    "emit",
    "write_csv",
    "write_dot",
    "format_census",
    "dual_body",
    "npc_body",
    "special_body",
    "special_dot",
    "profile_body",
    "axis_body",
    "selection_body",
    "induced_body",
]
