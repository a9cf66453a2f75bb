"""Canonical JSON: sorted keys, two-space indent, floats at 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import InvalidArgument
from .report import _jsonable


def _encode(x: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidArgument(f"cannot serialize non-finite float {x}")
        if x == 0:
            x = 0.0  # fold -0.0
        return format(x, ".17g")
    if isinstance(x, complex):
        return _encode({"re": x.real, "im": x.imag}, indent, level)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = sorted((str(k), v) for k, v in x.items())
        body = (",\n").join(f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        body = (",\n").join(pad + _encode(v, indent, level + 1) for v in x)
        return "[\n" + body + "\n" + end + "]"
    return _encode(_jsonable(x), indent, level)


def dumps(x: Any, indent: int = 2) -> str:
    return _encode(x, indent, 0) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"malformed JSON: {exc}") from exc


def load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc}") from exc
    return loads(text)
