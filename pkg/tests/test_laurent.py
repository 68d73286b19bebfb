import pytest
from hypothesis import given, strategies as st
from mpmath import mpf, mpc

from qlaurent.errors import InexactDivision
from qlaurent.laurent import LaurentPoly, coefficient_residual, divide_exact, divide_with_remainder, rank

coef = st.floats(-5, 5, allow_nan=False).map(lambda x: mpf(repr(x)))


@st.composite
def polys(draw, max_len=6):
    lo = draw(st.integers(-4, 4))
    cs = draw(st.lists(coef, min_size=0, max_size=max_len))
    return LaurentPoly(lo, cs)


def close(a, b, tol="1e-45"):
    return (a - b).norm() <= mpf(tol) * max(1, a.norm(), b.norm())


def test_construction_trims_and_indexes():
    p = LaurentPoly(-2, (0, 1, 0, 3, 0))
    assert (p.min_exp, p.max_exp) == (-1, 1)
    assert p[-1] == 1 and p[1] == 3 and p[5] == 0
    assert p.degree() == 1 and p.in_V(1) and not p.in_V(0)
    assert LaurentPoly(3, ()).is_zero()


def test_evaluation_and_substitutions():
    p = LaurentPoly.from_dict({-1: 2, 0: 1, 2: -1})
    z = mpc("0.3", "0.8")
    assert abs(p(z) - (2 / z + 1 - z * z)) < mpf("1e-50")
    assert abs(p.sub_inv()(z) - p(1 / z)) < mpf("1e-50")
    assert abs(p.sub_scale(mpf("0.5"))(z) - p(z * mpf("0.5"))) < mpf("1e-50")


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert close((a + b) * c, a * c + b * c)
    assert close(a * b, b * a)
    assert close((a * b) * c, a * (b * c))
    assert (a - a).is_zero()


@given(polys(), polys())
def test_exact_division_recovers_factor(a, b):
    if b.is_zero() or a.is_zero():
        return
    q = divide_exact(a * b, b)
    assert close(q, a, "1e-30")


@given(polys(), polys())
def test_division_identity(a, b):
    if b.is_zero():
        return
    quot, rem = divide_with_remainder(a, b)
    assert close(quot * b + rem, a, "1e-30")


def test_inexact_division_raises():
    with pytest.raises(InexactDivision):
        divide_exact(LaurentPoly(0, (1, 0, 1)), LaurentPoly(0, (1, 1)))
    with pytest.raises(ZeroDivisionError):
        divide_with_remainder(LaurentPoly.const(1), LaurentPoly.zero())


def test_json_round_trip():
    p = LaurentPoly(-2, (mpf(1) / 3, mpc(0, 2), 5))
    back = LaurentPoly.from_json(p.to_json())
    assert back.min_exp == p.min_exp and back.distance(p) < mpf("1e-58")


def test_residual_and_rank():
    p = LaurentPoly(0, (1, 2))
    assert coefficient_residual(p, p) == 0
    assert coefficient_residual(p, p * 2) == mpf(1) / 2
    assert rank([p, p * 3, LaurentPoly.monomial(-1)], 1) == 2
