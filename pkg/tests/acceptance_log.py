"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

from typing import Dict, Tuple

TOTAL = 11
RESULTS: Dict[int, Tuple[bool, str]] = {}


def record(n: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str = "") -> str:
    timing = f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit is not None else "")
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} — {timing}" + (f"; {detail}" if detail else "")
    RESULTS[n] = (ok, line)
    print(line)
    return line


def summary_lines():
    for n in range(1, TOTAL + 1):
        if n in RESULTS:
            yield RESULTS[n][1]
        else:
            yield f"criterion {n:2d} FAIL  (not run or raised before reporting)"
