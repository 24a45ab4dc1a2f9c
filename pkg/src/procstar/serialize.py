"""Deterministic JSON emission for CLI output.

Identical inputs and configuration must produce byte-identical output, so
floats are always printed with 17 significant digits, complex numbers as
[re, im] pairs, and mapping keys in insertion order (all report builders
construct their dicts in a fixed order).
"""

from __future__ import annotations

import math
from typing import Any


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x!r} in JSON output")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append(r"\"")
        elif ch == "\\":
            out.append(r"\\")
        elif ch == "\n":
            out.append(r"\n")
        elif ch == "\t":
            out.append(r"\t")
        elif ch == "\r":
            out.append(r"\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def canonical_json(value: Any, indent: int | None = None) -> str:
    """Render a report structure as deterministic JSON text."""

    def render(v: Any, depth: int) -> str:
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, float):
            return _format_float(v)
        if isinstance(v, complex):
            return render([v.real, v.imag], depth)
        if isinstance(v, str):
            return _escape(v)
        if isinstance(v, dict):
            items = [
                f"{_escape(str(k))}:{_pad(depth)}{render(val, depth + 1)}"
                for k, val in v.items()
            ]
            return _wrap("{", items, "}", depth)
        if isinstance(v, (list, tuple)):
            items = [render(x, depth + 1) for x in v]
            return _wrap("[", items, "]", depth)
        # numpy scalars and similar
        if hasattr(v, "item"):
            return render(v.item(), depth)
        raise TypeError(f"cannot serialize {type(v).__name__}")

    def _pad(depth: int) -> str:
        return " " if indent is not None else ""

    def _wrap(opener: str, items: list[str], closer: str, depth: int) -> str:
        if indent is None:
            return opener + ",".join(items) + closer
        if not items:
            return opener + closer
        inner = ",\n".join(" " * indent * (depth + 1) + it for it in items)
        return opener + "\n" + inner + "\n" + " " * indent * depth + closer

    return render(value, 0)
