"""Deterministic JSON and CSV emission for reports.

Floats are printed with 17 significant digits so identical runs produce
byte-identical output; the standard json module's shortest-roundtrip repr
would not pin the byte stream width.
"""

from __future__ import annotations

import math
from typing import IO, Iterable, Sequence


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{pad}"{k}": {_emit(v, indent, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{close_pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{pad}{_emit(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{close_pad}]"
    # numpy scalars and arrays
    if hasattr(obj, "tolist"):
        return _emit(obj.tolist(), indent, level)
    if hasattr(obj, "item"):
        return _emit(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def json_dumps(obj, indent: int = 2) -> str:
    """Serialize to JSON with every float at 17 significant digits."""
    return _emit(obj, indent, 0) + "\n"


def csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    if hasattr(value, "item"):
        return csv_cell(value.item())
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def write_csv(fp: IO[str], header: Sequence[str], rows: Iterable[Sequence]) -> None:
    fp.write(",".join(header) + "\n")
    for row in rows:
        fp.write(",".join(csv_cell(v) for v in row) + "\n")


def witness_table(witnesses: Sequence[dict]) -> tuple[list[str], list[list]]:
    """Flatten witness dicts to a rectangular table (missing cells empty)."""
    columns: list[str] = []
    for w in witnesses:
        for key in w:
            if key not in columns:
                columns.append(key)
    rows = [[w.get(col, "") for col in columns] for w in witnesses]
    return columns, rows
