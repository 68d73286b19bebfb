"""Rows produced by the verification suites and their CSV rendering."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import mpmath

CSV_COLUMNS = ("suite", "identity_anchor", "index_n", "index_m", "method", "residual", "tolerance", "pass")


@dataclass(frozen=True)
class CheckRow:
    suite: str
    identity: str
    n: int | None
    m: int | None
    method: str
    residual: object
    tolerance: object
    informational: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_csv(self):
        status = "info" if self.informational else ("true" if self.passed else "false")
        return (
            self.suite,
            self.identity,
            "" if self.n is None else self.n,
            "" if self.m is None else self.m,
            self.method,
            mpmath.nstr(self.residual, 6),
            mpmath.nstr(self.tolerance, 3),
            status,
        )


def failures(rows):
    """Asserted rows that did not pass; informational rows are never failures."""
    return [r for r in rows if not r.informational and not r.passed]


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def worst(rows, identity_prefix: str = ""):
    """Largest residual among asserted rows whose identity starts with the prefix."""
    sel = [r.residual for r in rows if not r.informational and r.identity.startswith(identity_prefix)]
    return max(sel) if sel else mpmath.mpf(0)
