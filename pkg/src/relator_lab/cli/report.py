"""Analysis reports: a key-value tree emitted as JSON or as indented text.

Reports carry no timestamps, and timing only appears when asked for, so two
runs on the same document with the same flags produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json

SCHEMA = "relator-lab/1"


def new_report(command: str, canonical_text: str, flags: dict) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "input": {
            "digest": "sha256:" + hashlib.sha256(canonical_text.encode("utf-8")).hexdigest(),
            "document": canonical_text.splitlines(),
        },
        "flags": dict(flags),
    }


def render(report: dict, fmt: str = "text") -> str:
    if fmt == "machine":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines: list[str] = []
    _text(report, 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _text(node, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    if isinstance(node, dict):
        for k, v in node.items():
            if isinstance(v, dict) and v:
                out.append(f"{pad}{k}:")
                _text(v, depth + 1, out)
            elif isinstance(v, list) and v and any(isinstance(x, (dict, list)) for x in v):
                out.append(f"{pad}{k}:")
                for item in v:
                    out.append(f"{pad}  -")
                    _text(item, depth + 2, out)
            elif isinstance(v, list) and sum(len(_scalar(x)) for x in v) > 60:
                out.append(f"{pad}{k}:")
                out.extend(f"{pad}  - {_scalar(x)}" for x in v)
            elif isinstance(v, list):
                out.append(f"{pad}{k}: " + (", ".join(_scalar(x) for x in v) if v else "(none)"))
            elif isinstance(v, dict):
                out.append(f"{pad}{k}: (none)")
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(node, list):
        for item in node:
            _text(item, depth, out)
    else:
        out.append(pad + _scalar(node))


def sparkline(values) -> str:
    """ASCII profile graph: one character per position, scaled to five rows."""
    marks = "_.-=#"
    lo, hi = min(values), max(values)
    if hi == lo:
        return "-" * len(values)
    return "".join(marks[round((v - lo) * (len(marks) - 1) / (hi - lo))] for v in values)
