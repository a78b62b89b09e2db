"""CSV and JSON writers of the command-line front end.

Floats are written with 15 significant digits; non-finite floats become
null in JSON. Output goes to a file when a path is given, else to stdout.
"""

import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Optional

import pandas as pd

FLOAT_FORMAT = "%.15g"


def format_float(value: float) -> str:
    return FLOAT_FORMAT % value


def _round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        return float(format_float(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {key: _round_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(value) for value in obj]
    return obj


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def json_text(payload: Any) -> str:
    return json.dumps(_round_floats(payload), indent=2) + "\n"


def write_json(payload: Any, out: Optional[Path] = None) -> None:
    _emit(json_text(payload), out)


def csv_text(frame: pd.DataFrame, header_lines: Iterable[str] = ()) -> str:
    """CSV with a header row, preceded by optional '# ' comment lines."""
    buffer = io.StringIO()
    for line in header_lines:
        buffer.write(f"# {line}\n")
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_csv(frame: pd.DataFrame, out: Optional[Path] = None, header_lines: Iterable[str] = ()) -> None:
    _emit(csv_text(frame, header_lines), out)
