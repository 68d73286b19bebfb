import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mpf

from qlaurent.errors import DegenerateParameters, InadmissibleParameters
from qlaurent.qcore import (
    PrecisionBudget,
    ParameterSet,
    aw_mu,
    canonical_params,
    pochhammer_selftest,
    qpoch_finite,
    qpoch_infinite,
    random_params,
    truncation_index,
    with_budget,
)
from qlaurent.report import failures

bases = st.floats(0.05, 0.9)
args = st.floats(-0.95, 0.95)


def test_finite_pochhammer_small_cases():
    q, a = mpf("0.5"), mpf("0.25")
    assert qpoch_finite(a, q, 0) == 1
    assert qpoch_finite(a, q, 2) == (1 - a) * (1 - a * q)


@given(args, bases, st.integers(0, 15))
def test_finite_matches_mpmath(a, q, n):
    ref = mpmath.qp(a, q, n)
    assert abs(qpoch_finite(mpf(a), mpf(q), n) - ref) <= mpf("1e-50") * max(1, abs(ref))


@given(args, bases, st.integers(0, 8), st.integers(0, 8))
def test_finite_splits(a, q, m, n):
    a, q = mpf(a), mpf(q)
    whole = qpoch_finite(a, q, m + n)
    assert abs(whole - qpoch_finite(a, q, m) * qpoch_finite(a * q**m, q, n)) <= mpf("1e-50")


@given(args, bases)
def test_infinite_matches_mpmath(a, q):
    ref = mpmath.qp(a, q)
    assert abs(qpoch_infinite(mpf(a), mpf(q)) - ref) / abs(ref) < mpf("1e-38")


def test_truncation_index_bounds_tail():
    q, a, eps = mpf("0.35"), mpf("0.9"), mpf("1e-40")
    n = truncation_index(a, q, eps)
    assert a * q**n / (1 - q) < eps
    assert a * q ** (n - 1) / (1 - q) >= eps


def test_parameter_validation():
    with pytest.raises(InadmissibleParameters):
        ParameterSet("1.2", ("0.1", "0.2", "0.3", "0.4"))
    with pytest.raises(InadmissibleParameters):
        ParameterSet("0.3", ("1.1", "0.2", "0.3", "0.4"))
    with pytest.raises(InadmissibleParameters):
        ParameterSet("0.3", ("0.1", "0.2", "0.3"))
    loose = ParameterSet("0.3", ("1.1", "0.2", "0.3", "0.4"), strict=False)
    with pytest.raises(InadmissibleParameters):
        loose.require_disk()


def test_decimal_input_is_exact():
    P = canonical_params()
    assert P.q == mpf("0.35")
    assert ParameterSet(0.35, (0.4, -0.3, 0.25, -0.15)).q == P.q


def test_random_params_reproducible():
    assert random_params(7) == random_params(7)
    assert random_params(7) != random_params(8)


def test_budget_validation_and_refinement():
    with pytest.raises(ValueError):
        PrecisionBudget(working_digits=10)
    with pytest.raises(ValueError):
        PrecisionBudget(verify_tol=1e-50, product_eps=1e-40)
    b = PrecisionBudget().refined()
    assert b.working_digits == 120 and b.product_eps == 5e-41


def test_with_budget_raises_precision():
    @with_budget
    def digits(budget=None):
        return mpmath.mp.dps

    assert digits(budget=PrecisionBudget(working_digits=90)) == 90
    assert mpmath.mp.dps == 60


def test_aw_mu_symmetric_and_degenerate():
    P = canonical_params()
    assert abs(aw_mu(P) - aw_mu(P.permuted((3, 1, 0, 2)))) < mpf("1e-50")
    # mu for t = (a, -a, 0, 0): (a^2 ...)-free case reduces to 1/(-a^2; q)_inf
    a, q = mpf("0.3"), mpf("0.4")
    Q = ParameterSet(q, (a, -a, 0, 0))
    assert abs(aw_mu(Q) - 1 / mpmath.qp(-a * a, q)) < mpf("1e-38")
    with pytest.raises(DegenerateParameters):
        aw_mu(ParameterSet(q, (a, 1 / a, 0, 0), strict=False))


def test_selftest_battery_passes(canon):
    rows = pochhammer_selftest(canon)
    assert rows and not failures(rows)
