"""
JSON 产物的读写

所有产物带 format / version 字段，原子写入（先写 .tmp 再 os.replace）。
"""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from cubulate.core.errors import MalformedInputError

FORMAT_VERSIONS: Dict[str, int] = {
    "cubulate.ball": 1,
    "cubulate.wallspace": 1,
    "cubulate.dual": 1,
    "cubulate.cube-complex": 1,
    "cubulate.report": 1,
}


def write_json(path: Path, data: Dict[str, Any]) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    with open(tmp_path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    os.replace(tmp_path, path)
    return path


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    with open(tmp_path, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp_path, path)
    return path


def read_json(path: Path, expected_format: Optional[str] = None) -> Dict[str, Any]:
    """读取产物并检查 format / version"""
    path = Path(path)
    if not path.exists():
        raise MalformedInputError(f"文件不存在: {path}", module="cli")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{path} 不是合法的 JSON: {e}", module="cli") from None
    if not isinstance(data, dict):
        raise MalformedInputError(f"{path} 的顶层必须是对象", module="cli")
    fmt = data.get("format")
    if expected_format is not None and fmt != expected_format:
        raise MalformedInputError(f"{path} 的格式是 {fmt!r}，需要 {expected_format!r}", module="cli")
    if fmt in FORMAT_VERSIONS and data.get("version") != FORMAT_VERSIONS[fmt]:
        raise MalformedInputError(
            f"{path} 的 {fmt} 版本 {data.get('version')} 不受支持（当前 {FORMAT_VERSIONS[fmt]}）", module="cli"
        )
    return data


def report_envelope(kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    """报告统一包一层 format / version / kind"""
    return {"format": "cubulate.report", "version": FORMAT_VERSIONS["cubulate.report"], "kind": kind, **body}


__all__ = ["FORMAT_VERSIONS", "write_json", "write_text", "read_json", "report_envelope"]
