"""Plain-text ``key = value`` files: CLI configs and ruled-surface spec files.

Spec file example::

    # intro surface X
    gamma   = "(log(s), 1/(2*s), -1/(2*s))"
    w       = "(1, s, s)"
    s_range = 0.5, 2
    t_range = 1, 3
    v       = 1, 0, 0      # optional
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParseError


@dataclass(frozen=True)
class Entry:
    value: str
    line: int
    column: int  # 1-based column where the (unquoted) value starts


def _strip_comment(raw: str) -> str:
    out, quote = [], None
    for ch in raw:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        out.append(ch)
    if quote:
        raise ValueError("unterminated string")
    return "".join(out)


def read_key_values(text: str) -> dict[str, Entry]:
    entries: dict[str, Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            line = _strip_comment(raw)
        except ValueError:
            raise ParseError("unterminated string", lineno, raw.find('"') + 1 or raw.find("'") + 1) from None
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        if not key.replace("_", "").replace("-", "").isalnum():
            raise ParseError(f"invalid key {key!r}", lineno, len(key_part) - len(key_part.lstrip()) + 1)
        start = len(key_part) + 1 + (len(value_part) - len(value_part.lstrip()))
        value = value_part.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
            start += 1
        if not value:
            raise ParseError(f"missing value for {key!r}", lineno, start + 1)
        entries[key.replace("-", "_")] = Entry(value, lineno, start + 1)
    return entries


def parse_floats(entry: Entry | str, count: int | None = None, name: str = "value") -> tuple[float, ...]:
    text, line, col = (entry.value, entry.line, entry.column) if isinstance(entry, Entry) else (entry, None, 1)
    parts = [p.strip() for p in text.split(",")]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise ParseError(f"{name}: expected comma-separated numbers, got {text!r}", line, col) from None
    if count is not None and len(values) != count:
        raise ParseError(f"{name}: expected {count} numbers, got {len(values)}", line, col)
    if not all(np.isfinite(values)):
        raise ParseError(f"{name}: values must be finite", line, col)
    return values


def _curve(entry: Entry, name: str):
    from .exprparse import parse_curve

    try:
        return parse_curve(entry.value, line=entry.line)
    except ParseError as exc:
        col = (exc.column or 1) + entry.column - 1
        raise ParseError(f"{name}: {exc.message}", entry.line, col) from None


def load_spec(text: str, label: str = "spec"):
    """Build ``(RuledSurfaceSpec, v or None)`` from spec-file text."""
    from .classifier import RuledSurfaceSpec

    entries = read_key_values(text)
    for required in ("gamma", "w", "s_range", "t_range"):
        if required not in entries:
            raise ParseError(f"missing required key {required!r}", None, None)
    unknown = set(entries) - {"gamma", "w", "s_range", "t_range", "v", "label"}
    if unknown:
        k = sorted(unknown, key=lambda k: entries[k].line)[0]
        raise ParseError(f"unknown key {k!r}", entries[k].line, 1)
    s_range = parse_floats(entries["s_range"], 2, "s_range")
    t_range = parse_floats(entries["t_range"], 2, "t_range")
    for name, rng in (("s_range", s_range), ("t_range", t_range)):
        if not rng[1] > rng[0]:
            raise ParseError(f"{name} must be increasing", entries[name].line, entries[name].column)
    v = parse_floats(entries["v"], 3, "v") if "v" in entries else None
    spec = RuledSurfaceSpec(
        _curve(entries["gamma"], "gamma"), _curve(entries["w"], "w"), s_range, t_range,
        entries["label"].value if "label" in entries else label,
    )
    return spec, (np.array(v) if v is not None else None)
