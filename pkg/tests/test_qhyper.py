import random

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mpf

from qlaurent.errors import BalanceViolation, PoleInSeries
from qlaurent.qcore import ParameterSet
from qlaurent.qhyper import (
    PhiSpec,
    contiguous_residuals,
    identity_battery,
    pfaff_saalschutz_closed,
    phi_terminating,
    random_phi32,
    random_phi43,
    random_vwp_params,
    sears_transform,
    termination_order,
    vwp65_check,
    vwp65_split,
)
from qlaurent.report import failures

seeds = st.integers(0, 10_000)


def test_termination_order():
    q = mpf("0.3")
    assert termination_order(q**-4, q) == 4
    assert termination_order(mpf("0.7"), q) is None


def test_terminating_sum_against_mpmath_qhyper():
    """Independent oracle: mpmath's own basic hypergeometric summation."""
    q = mpf("0.4")
    a, b, c = q**-5, mpf("0.3"), mpf("-0.6")
    d = mpf("0.45")
    e = a * b * c * q / d
    spec = PhiSpec((a, b, c), (d, e), q, 5)
    assert abs(phi_terminating(spec) - mpmath.qhyper([a, b, c], [d, e], q, q)) < mpf("1e-45")


def test_balance_is_checked():
    q = mpf("0.4")
    with pytest.raises(BalanceViolation):
        PhiSpec((q**-2, 2, 3), (4, 5), q, 2, balanced=True)
    with pytest.raises(ValueError):
        PhiSpec((mpf("0.3"), 2), (4,), q, 2)


def test_pole_detected():
    q = mpf("0.5")
    spec = PhiSpec((q**-3, mpf("0.2")), (q**-1,), q, 3)
    with pytest.raises(PoleInSeries):
        phi_terminating(spec)


@given(seeds, st.integers(0, 8))
def test_pfaff_saalschutz(seed, n):
    spec = random_phi32(random.Random(seed), n)
    closed = pfaff_saalschutz_closed(spec)
    assert abs(phi_terminating(spec) - closed) <= mpf("1e-40") * max(1, abs(closed))


@given(seeds, st.integers(0, 8), st.integers(0, 3))
def test_sears_transformation(seed, n, pos):
    vals, q = random_phi43(random.Random(seed), n, position=pos)
    spec = PhiSpec.phi43(*vals, q, n=n)
    new, pre = sears_transform(spec)
    lhs, rhs = phi_terminating(spec), pre * phi_terminating(new)
    assert abs(lhs - rhs) <= mpf("1e-35") * max(abs(lhs), abs(rhs))


@given(seeds, st.integers(0, 6))
def test_sears_is_involutive_on_parameters(seed, n):
    """Applying the transformation twice returns a series with the same value."""
    vals, q = random_phi43(random.Random(seed), n)
    spec = PhiSpec.phi43(*vals, q, n=n)
    new, pre = sears_transform(spec)
    newer, pre2 = sears_transform(new)
    assert abs(phi_terminating(spec) - pre * pre2 * phi_terminating(newer)) < mpf("1e-30") * max(
        1, abs(phi_terminating(spec)))


@given(seeds, st.integers(1, 8), st.integers(1, 3))
def test_contiguous_relations(seed, n, pos):
    vals, q = random_phi43(random.Random(seed), n, position=pos)
    r1, r2 = contiguous_residuals(*vals, q)
    assert r1 < mpf("1e-35") and r2 < mpf("1e-35")


@given(seeds, st.integers(1, 8), st.sampled_from((2, 3, 4)))
def test_vwp65_product(seed, N, pair):
    P = random_vwp_params(random.Random(seed), N, pair)
    lhs, rhs = vwp65_check(P, N)
    assert abs(lhs - rhs) / abs(rhs) < mpf("1e-35")
    assert abs(vwp65_split(P, N) - lhs) / abs(lhs) < mpf("1e-40")


def test_vwp65_printed_product_differs():
    """The printed product carries t1^2 in three arguments and does not equal the sum."""
    P = random_vwp_params(random.Random(3), 3, 3)
    lhs, rhs = vwp65_check(P, 3, reading="printed")
    assert abs(lhs - rhs) / abs(lhs) > mpf("1e-3")


def test_vwp65_requires_truncation():
    P = ParameterSet("0.3", ("0.2", "0.3", "0.4", "0.5"))
    with pytest.raises(ValueError):
        vwp65_check(P, 2)


def test_battery_rows():
    rows = identity_battery(seed=5, count=8)
    labels = {r.identity for r in rows}
    assert "Sears transformation" in labels and "6phi5 evaluation (derived)" in labels
    assert [r.identity for r in failures(rows)] == ["6phi5 evaluation (printed)"] * 8
