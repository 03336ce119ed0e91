"""`# dim=n` ヘッダ付き CSV の共通読み書き"""
from __future__ import annotations

import csv
import math
from pathlib import Path
import re
from typing import Iterable, List, Tuple, Union

import numpy as np

from src.domain.exceptions import InputFileError

HEADER_PATTERN = re.compile(r"^#\s*dim\s*=\s*(\d+)\s*$")


def format_value(value: float) -> str:
    """17 有効桁（float を完全に復元できる表現）"""
    return repr(float(value))


def read_rows(path: Union[str, Path], extra_columns: int) -> Tuple[int, np.ndarray, List[int]]:
    """ヘッダの次元 n と (行数, n + extra_columns) の配列、各行の行番号を返す

    空行と、ヘッダ以降の `#` 始まりの行は読み飛ばす。
    """
    path = Path(path)
    label = str(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"cannot read file: {e}", path=label) from e

    lines = text.splitlines()
    dimension = None
    rows: List[List[float]] = []
    line_numbers: List[int] = []
    for line_number, fields in enumerate(csv.reader(lines), start=1):
        raw = ",".join(fields).strip()
        if not raw:
            continue
        if dimension is None:
            match = HEADER_PATTERN.match(raw)
            if match is None:
                raise InputFileError("first line must be a '# dim=n' header", path=label, line=line_number)
            dimension = int(match.group(1))
            if dimension < 2:
                raise InputFileError(f"dimension must be >= 2, got {dimension}", path=label, line=line_number)
            continue
        if raw.startswith("#"):
            continue
        expected = dimension + extra_columns
        if len(fields) != expected:
            raise InputFileError(f"expected {expected} columns, got {len(fields)}", path=label, line=line_number)
        try:
            values = [float(field) for field in fields]
        except ValueError as e:
            raise InputFileError(f"non-numeric value: {e}", path=label, line=line_number) from e
        if not all(math.isfinite(value) for value in values):
            raise InputFileError("values must be finite", path=label, line=line_number)
        rows.append(values)
        line_numbers.append(line_number)

    if dimension is None:
        raise InputFileError("file is empty (missing '# dim=n' header)", path=label)
    if not rows:
        raise InputFileError("file has no data rows", path=label)
    return dimension, np.array(rows, dtype=float), line_numbers


def check_unit_rows(path: Union[str, Path], directions: np.ndarray, line_numbers: List[int], tolerance: float) -> None:
    norms = np.linalg.norm(directions, axis=1)
    for norm, line_number in zip(norms, line_numbers):
        if abs(norm - 1.0) > tolerance:
            raise InputFileError(f"direction is not a unit vector (|u| = {norm!r})", path=str(path), line=line_number)


def check_positive(path: Union[str, Path], values: np.ndarray, line_numbers: List[int], label: str) -> None:
    for value, line_number in zip(values, line_numbers):
        if value <= 0.0:
            raise InputFileError(f"{label} must be positive, got {value!r}", path=str(path), line=line_number)


def write_rows(path: Union[str, Path], dimension: int, rows: Iterable[Iterable[float]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# dim={dimension}"]
    lines.extend(",".join(format_value(value) for value in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
