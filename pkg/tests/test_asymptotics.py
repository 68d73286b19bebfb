import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mpf

from qlaurent.asymptotics import (
    ASYMPTOTIC_FAMILIES,
    DEFAULT_N_LIST,
    asymptotics_suite,
    convergence_table,
    extra_digits,
    iw_asymptotic,
    rate_fit,
    thm91_convergence,
    thm_relative_error,
    unit_point,
)
from qlaurent.errors import BalanceViolation, DegenerateParameters, InadmissibleParameters, InsufficientDecay
from qlaurent.qhyper import PhiSpec, phi_terminating
from qlaurent.report import failures


def exact(A, B, C, D, E, F, q, n):
    return phi_terminating(PhiSpec((q**-n, A * q ** (n - 1), B, C), (D, E, F), q, n))


def test_b_zero_reduces_to_single_product():
    q = mpf("0.4")
    C, D, E = mpf("0.5"), mpf("0.3"), mpf("-0.2")
    F = mpf(0)
    # balanced with B = 0 forces DEF = 0; take F = 0 so (F; q) factors are 1
    n = 6
    got = iw_asymptotic(mpf(1), 0, C, D, E, F, q, n)
    ref = C**n * mpmath.qp(D / C, q) * mpmath.qp(E / C, q) / (mpmath.qp(D, q) * mpmath.qp(E, q))
    assert abs(got - ref) / abs(ref) < mpf("1e-38")


@pytest.mark.parametrize("n", [10, 20, 30])
def test_distinct_moduli_ratio_tends_to_one(n):
    with mpmath.workdps(60 + n * n // 3):
        q = mpf("0.3")
        A, B, C, D, E = mpf("0.2"), mpf("0.15"), mpf("0.7"), mpf("0.5"), mpf("-0.4")
        F = A * B * C / (D * E)
        ratio = exact(A, B, C, D, E, F, q, n) / iw_asymptotic(A, B, C, D, E, F, q, n)
    assert abs(ratio - 1) < 4 * (B / C) ** n + q ** (n / 2)


def test_equal_moduli_two_term_case():
    errs = []
    for n in (8, 16):
        with mpmath.workdps(60 + n * n // 3):
            q, t = mpf("0.35"), mpf("0.6")
            z = unit_point("1.1")
            B, C = t * z, t / z
            D, E, F = mpf("0.3"), mpf("-0.25"), mpf("0.2")
            A = D * E * F / (B * C)
            errs.append(abs(exact(A, B, C, D, E, F, q, n) / iw_asymptotic(A, B, C, D, E, F, q, n) - 1))
    assert errs[1] < errs[0] * q**2


def test_swap_and_validation():
    q = mpf("0.3")
    args = (mpf("0.2"), mpf("0.7"), mpf("0.15"), mpf("0.5"), mpf("-0.4"))
    F = args[0] * args[1] * args[2] / (args[3] * args[4])
    swapped = (args[0], args[2], args[1], args[3], args[4])
    assert iw_asymptotic(*args, F, q, 5) == iw_asymptotic(*swapped, F, q, 5)
    with pytest.raises(BalanceViolation):
        iw_asymptotic(*args, F * 2, q, 5)
    with pytest.raises(InadmissibleParameters):
        iw_asymptotic(*args, F, mpf("1.5"), 5)


def test_rate_fit_geometric_sequence():
    q = mpf("0.35")
    ns = [8, 12, 16, 20]
    slope = rate_fit([q ** (n / 2) for n in ns], ns, q)
    assert abs(slope - float(mpmath.log(q)) / 2) < 1e-12


def test_rate_fit_rejects_slow_decay():
    q = mpf("0.35")
    ns = [8, 12, 16, 20]
    with pytest.raises(InsufficientDecay):
        rate_fit([q ** (n / 4) for n in ns], ns, q)
    with pytest.raises(ValueError):
        rate_fit([0, 1], [1, 2], q)


@given(st.floats(0.1, 0.8), st.floats(0.0, 3.0))
def test_rate_fit_exact_slope_on_synthetic(qf, c):
    q = mpf(qf)
    ns = [4, 8, 12]
    slope = rate_fit([mpf(c + 1) * q**n for n in ns], ns, q)
    assert abs(slope - float(mpmath.log(q))) < 1e-9


@pytest.mark.parametrize("family", ASYMPTOTIC_FAMILIES)
def test_errors_decay(canon, family):
    for theta in (0.7, 2.1):
        errs = thm91_convergence(family, unit_point(theta), canon)
        assert errs[-1] < errs[0] * canon.q**3
        rate_fit(errs, DEFAULT_N_LIST, canon.q)


def test_result_independent_of_extra_precision(canon):
    """The automatic precision increase is enough: doubling the base digits changes nothing visible."""
    from qlaurent.qcore import PrecisionBudget

    z = unit_point(1.3)
    a = thm_relative_error("R", 20, z, canon)
    b = thm_relative_error("R", 20, z, canon, PrecisionBudget(working_digits=120, product_eps=1e-80, verify_tol=1e-60))
    assert abs(a - b) < mpf("1e-30")


def test_extra_digits_grow(canon):
    assert extra_digits(20, canon) > extra_digits(8, canon) > 10


def test_point_validation(canon):
    with pytest.raises(InadmissibleParameters):
        thm_relative_error("T", 8, mpf("0.5"), canon)
    with pytest.raises(DegenerateParameters):
        thm_relative_error("T", 8, mpf(-1), canon)
    with pytest.raises(ValueError):
        thm_relative_error("Q", 8, unit_point(1), canon)


def test_suite_and_table(rand_params):
    rows = asymptotics_suite(rand_params, families=("S", "T"), thetas=(1.3,))
    assert rows and not failures(rows)
    table = convergence_table(rand_params, families=("U",), thetas=(0.7,), n_list=(8, 12))
    assert [r[2] for r in table] == [8, 12]
