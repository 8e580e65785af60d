"""Deterministic serialization: exact numbers become strings, keys are sorted."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .exactalg.cyclo import CycloRat
from .exactalg.groups import FinAbGroup, QmodZ


def _default(x: Any) -> Any:
    if isinstance(x, CycloRat):
        return str(x.to_fraction()) if x.is_rational() else x.to_json()
    if isinstance(x, (Fraction, QmodZ, FinAbGroup)):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "to_json_obj"):
        return x.to_json_obj()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_json(obj: Any) -> str:
    """Byte-stable JSON: sorted keys, fixed indentation, exact strings for every number that is not an int."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=_default) + "\n"


def _cell(x: Any) -> str:
    if isinstance(x, (dict, list)):
        return json.dumps(x, sort_keys=True, ensure_ascii=False, default=_default)
    if isinstance(x, (CycloRat, Fraction, QmodZ, FinAbGroup)):
        return str(_default(x))
    return str(x)


def to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k, "")) for k in keys})
    return buf.getvalue()


def to_human(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if not rows:
        return "(no rows)\n"
    keys = list(columns) if columns else sorted({k for r in rows for k in r})
    cells = [[_cell(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def matrix_human(rows: Sequence[Sequence[Any]], row_labels: Sequence[str], col_labels: Sequence[str]) -> str:
    """A matrix with its basis legends, entries as exact strings."""
    body = [[_cell(x) for x in r] for r in rows]
    lw = max([len(s) for s in row_labels] + [0])
    widths = [max(len(c), *(len(r[j]) for r in body)) if body else len(c) for j, c in enumerate(col_labels)]
    out = [" " * lw + "  " + "  ".join(c.rjust(w) for c, w in zip(col_labels, widths))]
    for lab, r in zip(row_labels, body):
        out.append(lab.ljust(lw) + "  " + "  ".join(x.rjust(w) for x, w in zip(r, widths)))
    return "\n".join(out) + "\n"
