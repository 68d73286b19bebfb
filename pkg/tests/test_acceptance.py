"""Acceptance gate: ten end-to-end criteria, each reported as one PASS/FAIL line.

Every criterion runs on the canonical parameter set and four seeded random
admissible sets.  A criterion fails when any asserted row fails on any set.
Rows tagged "(printed)" evaluate a published formula literally.  Where such
a formula is wrong, the matching "(derived)" row carries the corrected value,
and the diagnosis line says so.
"""

import re
import time
from dataclasses import replace

import mpmath
import pytest
from mpmath import mpf

from qlaurent.asymptotics import asymptotics_suite
from qlaurent.bases import connection_suite
from qlaurent.cli import racah_configs
from qlaurent.forms import aw_cross_suite, glued_suite, mu_by_quadrature, orthogonality_suite
from qlaurent.operators import operator_suite
from qlaurent.qcore import DEFAULT_BUDGET, aw_mu, canonical_params, random_params
from qlaurent.qhyper import identity_battery
from qlaurent.racah import racah_orthogonality_suite
from qlaurent.recurrence import recurrence_suite
from qlaurent.report import CheckRow, failures

SETS = [("canonical", canonical_params)] + [(f"seed{s}", lambda s=s: random_params(s)) for s in (1, 2, 3, 4)]
TOL = mpf("1e-25")
CLOSED_TOL = mpf("1e-20")


def tagged(rows, name):
    return [replace(r, identity=f"{r.identity} [{name}]") for r in rows]


class Gate:
    """Lazily computed rows per (criterion, parameter set), plus timings."""

    def __init__(self):
        self.cache = {}
        self.seconds = {}
        with DEFAULT_BUDGET.context():
            self.params = {name: make() for name, make in SETS}

    def rows(self, key, name, compute):
        if (key, name) not in self.cache:
            start = time.perf_counter()
            with DEFAULT_BUDGET.context():
                self.cache[key, name] = tagged(compute(self.params[name]), name)
            self.seconds[key, name] = time.perf_counter() - start
        return self.cache[key, name]

    def all_sets(self, key, compute):
        out = []
        for name, _ in SETS:
            out += self.rows(key, name, compute)
        return out

    def time(self, key):
        return sum(v for (k, _), v in self.seconds.items() if k == key)


@pytest.fixture(scope="module")
def gate():
    return Gate()


def margin(r):
    return r.residual / r.tolerance if r.tolerance else r.residual


def printed(identity):
    return re.search(r"\bprinted\b", identity) is not None


def diagnose(rows):
    bad = failures(rows)
    if not bad:
        asserted = [r for r in rows if not r.informational]
        top = max(asserted, key=margin)
        return True, f"{len(asserted)} rows, worst {mpmath.nstr(top.residual, 3)} ({top.identity})"
    names = sorted({r.identity.split(" [")[0] for r in bad})
    top = max(bad, key=lambda r: r.residual)
    msg = f"{len(bad)} of {sum(not r.informational for r in rows)} rows fail; worst {top.identity}"
    msg += f" n={top.n} residual {mpmath.nstr(top.residual, 3)} > {mpmath.nstr(top.tolerance, 3)}"
    if all(printed(n) for n in names):
        partners = [r for r in rows if re.search(r"\bderived\b", r.identity) and not r.informational]
        worst_derived = max((r.residual for r in partners), default=mpf(0))
        msg += ("; every failure is a literal printed formula, the derived readings pass"
                f" (worst {mpmath.nstr(worst_derived, 3)})")
    msg += "; failing: " + ", ".join(names)
    return False, msg


def report(request, number, title, rows, extra_ok=True, extra_msg=""):
    ok, msg = diagnose(rows)
    ok = ok and extra_ok
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}: {msg}{extra_msg}"
    capman = request.config.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\n" + line)
    assert ok, line


# -- criterion computations ---------------------------------------------------


def c1_rows(P):
    return identity_battery(0, 50, 8, budget=DEFAULT_BUDGET, tol=TOL)


def c2_rows(P):
    return connection_suite(P, 8, tol=TOL, budget=DEFAULT_BUDGET)


def c3_rows(P):
    rows = orthogonality_suite(P, 6, DEFAULT_BUDGET, tol=TOL)
    # off-diagonals stay at 1e-25; diagonals against closed forms use 1e-20
    return [replace(r, tolerance=CLOSED_TOL) if r.n == r.m and r.n is not None else r for r in rows]


def c4_rows(P):
    return glued_suite(P, 3, DEFAULT_BUDGET, tol=CLOSED_TOL)


def c5_rows(P):
    rows = operator_suite(P, 6, tol=mpf("1e-22"), budget=DEFAULT_BUDGET, selfadjoint_pairs=20)
    return [replace(r, tolerance=CLOSED_TOL) if r.identity.startswith("<A") and " f,g>" in r.identity else r
            for r in rows]


def c6_rows(P):
    return recurrence_suite(P, 6, tol=mpf("1e-22"), budget=DEFAULT_BUDGET, regen_tol=CLOSED_TOL)


def c7_rows(P):
    return aw_cross_suite(P, 6, 4, DEFAULT_BUDGET, tol=CLOSED_TOL)


def c8_rows(P):
    return asymptotics_suite(P, budget=DEFAULT_BUDGET)


def c9_rows(P):
    rows = []
    for cfg in racah_configs(P):
        rows += racah_orthogonality_suite(cfg, DEFAULT_BUDGET, tol=mpf("1e-30"))
    return rows


def c10_extra(P):
    """Comparisons not already produced by the other suites."""
    mu = mu_by_quadrature(P, DEFAULT_BUDGET)
    exact = aw_mu(P)
    return [CheckRow("cross-method", "mu: quadrature vs closed product", None, None, "closed_form",
                     abs(mu - exact) / abs(exact), CLOSED_TOL)]


def is_cross_method(r):
    if r.suite == "cher-orthogonality":
        return r.n == r.m and r.n is not None
    if r.suite == "operators":
        return r.method == "quadrature" and "alpha_m" in r.identity
    if r.suite == "recurrences":
        return r.identity.startswith("R_n regenerated")
    if r.suite == "aw-cross":
        return r.n == r.m
    if r.suite == "racah":
        return "6phi5" in r.identity
    return r.suite == "glued-moments"


# -- the ten criteria -----------------------------------------------------------


def test_criterion_01_identity_battery(gate, request):
    rows = gate.rows("c1", "canonical", c1_rows)
    secs = gate.time("c1")
    report(request, 1, "basic hypergeometric identity battery", rows, secs < 10, f"; {secs:.1f} s")


def test_criterion_02_connections(gate, request):
    report(request, 2, "connection relations coefficientwise", gate.all_sets("c2", c2_rows))


def test_criterion_03_orthogonality(gate, request):
    rows = gate.all_sets("c3", c3_rows)
    secs = gate.time("c3")
    report(request, 3, "orthogonality suites with closed-form norms", rows, secs < 300, f"; {secs:.0f} s")


def test_criterion_04_glued_moments(gate, request):
    report(request, 4, "glued moments vs closed products", gate.all_sets("c4", c4_rows))


def test_criterion_05_operators(gate, request):
    report(request, 5, "operator actions, eigenvalues, commutators, chains", gate.all_sets("c5", c5_rows))


def test_criterion_06_recurrences(gate, request):
    report(request, 6, "recurrences and regeneration", gate.all_sets("c6", c6_rows))


def test_criterion_07_aw_cross(gate, request):
    report(request, 7, "R/T cross-orthogonality under the Askey-Wilson weight", gate.all_sets("c7", c7_rows))


def test_criterion_08_asymptotics(gate, request):
    rows = gate.all_sets("c8", c8_rows)
    secs = gate.time("c8")
    report(request, 8, "unit-circle asymptotics decay", rows, secs < 60, f"; {secs:.1f} s")


def test_criterion_09_racah(gate, request):
    report(request, 9, "discrete q-Racah orthogonality", gate.all_sets("c9", c9_rows))


def test_criterion_10_cross_method(gate, request):
    rows = []
    for key, fn in (("c3", c3_rows), ("c4", c4_rows), ("c5", c5_rows), ("c6", c6_rows), ("c7", c7_rows),
                    ("c9", c9_rows)):
        rows += [r for r in gate.all_sets(key, fn) if is_cross_method(r)]
    # the printed 6phi5 product is informational in the racah suite only to avoid counting it twice there
    rows = [replace(r, informational=False, tolerance=CLOSED_TOL) if "product printed" in r.identity else r
            for r in rows]
    rows += gate.all_sets("c10", c10_extra)
    report(request, 10, "agreement between quadrature, closed forms, glued moments and recurrences", rows)
