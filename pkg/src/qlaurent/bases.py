"""Explicit Laurent polynomial bases R, S, T, U, X, Y, P and P'.

Every family is expanded term by term from its defining terminating 4phi3;
nothing here uses a recurrence, so these builders serve as the reference that
the recurrence and operator checks are compared against.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from mpmath import mp, mpf

from .errors import PoleInSeries
from .laurent import ONE, LaurentPoly, coefficient_residual
from .qcore import ZERO_FACTOR_TOL, ParameterSet, qpoch_finite

FAMILIES = ("R", "S", "T", "U", "X", "Y", "P", "Pprime")


@dataclass(frozen=True)
class BasisId:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in "RSTU" and self.index < 0:
            raise ValueError(f"{self.family}_n needs n >= 0")

    def build(self, params: ParameterSet) -> LaurentPoly:
        return BUILDERS[self.family](self.index, params)

    def __str__(self):
        return f"{self.family}{self.index}"


def phi43_laurent(m: int, A, alpha, beta, dens, q) -> LaurentPoly:
    """4phi3(q^-m, A, alpha z, beta/z; D, E, F | q, q) expanded in z.

    Term j carries (alpha z, beta/z; q)_j, accumulated as a running product
    of Laurent factors, while the scalar part is updated by its term ratio.
    """
    total = ONE
    scalar = mpf(1)
    running = ONE
    top = q ** (-m)
    for j in range(m):
        qj = q**j
        den = 1 - q ** (j + 1)
        for d in dens:
            factor = 1 - d * qj
            if abs(factor) < ZERO_FACTOR_TOL:
                raise PoleInSeries(f"denominator parameter {d} vanishes at j={j}")
            den *= factor
        scalar = scalar * (1 - top * qj) * (1 - A * qj) * q / den
        running = running * LaurentPoly(-1, (-beta * qj, 1 + alpha * beta * q ** (2 * j), -alpha * qj))
        total = total + running * scalar
    return total


def _key(params):
    return (params.q, params.t, mp.dps)


@functools.lru_cache(maxsize=4096)
def _build_R(n, key):
    q, (t1, t2, t3, t4), _ = key
    tt = t1 * t2 * t3 * t4
    return phi43_laurent(n, tt * q ** (n - 1), t1, t1, (t1 * t2, t1 * t3, t1 * t4), q)


@functools.lru_cache(maxsize=4096)
def _build_S(n, key):
    if n == 0:
        return LaurentPoly.zero()
    q, (t1, t2, t3, t4), _ = key
    tt = t1 * t2 * t3 * t4
    pre = LaurentPoly(-1, (t3 * t4, -(t3 + t4), 1))
    body = phi43_laurent(n - 1, tt * q**n, t1, q * t1, (q * t1 * t2, q * t1 * t3, q * t1 * t4), q)
    return pre * body


@functools.lru_cache(maxsize=4096)
def _build_T(n, key):
    q, (t1, t2, t3, t4), _ = key
    tt = t1 * t2 * t3 * t4
    return phi43_laurent(n, tt * q ** (n - 1), t1, q * t1, (q * t1 * t2, t1 * t3, t1 * t4), q)


@functools.lru_cache(maxsize=4096)
def _build_U(n, key):
    if n == 0:
        return LaurentPoly.zero()
    q, (t1, t2, t3, t4), dps = key
    pre = LaurentPoly(-1, (1, -(t1 + t2), t1 * t2))
    return pre * _build_R(n - 1, (q, (q * t1, q * t2, t3, t4), dps))


def build_R(n: int, params: ParameterSet) -> LaurentPoly:
    """R_n(z; t | q), the Askey-Wilson polynomial without normalization."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _build_R(n, _key(params))


def build_S(n: int, params: ParameterSet) -> LaurentPoly:
    """S_n = z(1 - t3/z)(1 - t4/z) 4phi3(q^{1-n}, t1t2t3t4 q^n, t1 z, q t1/z; q t1t2, q t1t3, q t1t4)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _build_S(n, _key(params))


def build_T(n: int, params: ParameterSet) -> LaurentPoly:
    if n < 0:
        raise ValueError("n must be non-negative")
    return _build_T(n, _key(params))


def build_U(n: int, params: ParameterSet) -> LaurentPoly:
    """U_n = z^-1 (1 - t1 z)(1 - t2 z) R_{n-1}(z; q t1, q t2, t3, t4)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _build_U(n, _key(params))


def x0_constant(params: ParameterSet):
    """(1 - t1t2)(1 - t1t3)(1 - t1t4), the common value of X_0 and Y_0."""
    t1, t2, t3, t4 = params.t
    return (1 - t1 * t2) * (1 - t1 * t3) * (1 - t1 * t4)


def build_X(m: int, params: ParameterSet) -> LaurentPoly:
    q, t1, t2 = params.q, params.t1, params.t2
    n = abs(m)
    c0 = x0_constant(params)
    R, S = build_R(n, params), build_S(n, params)
    if m < 0:
        return R * c0 - S * (t1 * (1 - params.tprod * q ** (n - 1)))
    return R * c0 + S * (t1 * t1 * t2 * (1 - q**n))


def build_Y(m: int, params: ParameterSet) -> LaurentPoly:
    q, t1, t3, t4 = params.q, params.t1, params.t3, params.t4
    n = abs(m)
    c0 = x0_constant(params)
    R, S = build_R(n, params), build_S(n, params)
    if m < 0:
        return R * (q ** (n - 1) * t3 * t4 * c0) - S * (t1 * (1 - params.tprod * q ** (n - 1)))
    return R * (q**n * c0) + S * (t1 * (1 - q**n))


def build_P(m: int, params: ParameterSet) -> LaurentPoly:
    """Non-symmetric polynomial: Y_m for m >= 0, X_m for m < 0."""
    return build_Y(m, params) if m >= 0 else build_X(m, params)


def xy_inversion_scalars(n: int, params: ParameterSet):
    """Scalars s_-, s_+ with X_{-n}(1/z; 1/t | 1/q) = s_- Y_{-n}(z) and X_n(1/z; 1/t | 1/q) = s_+ Y_n(z)."""
    q = params.q
    t1, t2, t3, t4 = params.t
    s_minus = -1 / (t1**3 * t2 * t3**2 * t4**2 * q ** (n - 1))
    s_plus = -1 / (t1**3 * t2 * t3 * t4 * q**n)
    return s_minus, s_plus


def build_Pprime(m: int, params: ParameterSet) -> LaurentPoly:
    """P'_m(z) = P_m(z; 1/t | 1/q), obtained from the X/Y inversion scalings.

    For m = -n < 0:  P'_m(z) = s_- Y_{-n}(1/z).
    For m = n >= 0:  P'_m(z) = Y_n(z; 1/t | 1/q) = X_n(1/z) / s_+', where the
    inversion applied to the inverted parameters gives the reciprocal scalar
    -1/(t1^3 t2 t3 t4 q^n).
    """
    q = params.q
    t1, t2, t3, t4 = params.t
    if m < 0:
        s_minus, _ = xy_inversion_scalars(-m, params)
        return build_Y(m, params).sub_inv() * s_minus
    return build_X(m, params).sub_inv() * (-1 / (t1**3 * t2 * t3 * t4 * q**m))


BUILDERS = {
    "R": build_R,
    "S": build_S,
    "T": build_T,
    "U": build_U,
    "X": build_X,
    "Y": build_Y,
    "P": build_P,
    "Pprime": build_Pprime,
}


def build(family: str, index: int, params: ParameterSet) -> LaurentPoly:
    return BasisId(family, index).build(params)


# -- connection identities ---------------------------------------------------


def connection_constant(n: int, params: ParameterSet):
    """c_n with c_n U_n = T_n - R_n."""
    q = params.q
    t1, t2, t3, t4 = params.t
    tt = params.tprod
    return (
        q * t1 * (1 - q ** (-n)) * (1 - tt * q ** (n - 1))
        / ((1 - t1 * t2) * (1 - q * t1 * t2) * (1 - t1 * t3) * (1 - t1 * t4))
    )


def connection_residuals(n: int, params: ParameterSet):
    """Relative residuals of the three linear relations among R_n, S_n, T_n, U_n."""
    if n < 1:
        raise ValueError("connection relations need n >= 1")
    q = params.q
    t1, t2, t3, t4 = params.t
    tt = params.tprod
    R, S, T, U = (f(n, params) for f in (build_R, build_S, build_T, build_U))
    r1 = coefficient_residual(T - R, U * connection_constant(n, params))

    lhs2 = R * ((1 - t1 * t3) * (1 - t1 * t4)) - S * t1
    rhs2 = U * (t1 * (1 - t1 * t2 * q**n) * (1 - t3 * t4 * q ** (n - 1)) / (q ** (n - 1) * (1 - t1 * t2) * (1 - q * t1 * t2)))
    r2 = coefficient_residual(lhs2, rhs2)

    denom = (1 - q**n) * (1 - tt * q ** (n - 1))
    parts = (
        S * (t1 / ((1 - t1 * t3) * (1 - t1 * t4))),
        T * ((1 - q**n * t1 * t2) * (1 - q ** (n - 1) * t3 * t4) / denom),
        R * (q**n * (1 - t1 * t2) * (1 - t3 * t4 / q) / denom),
    )
    scale = max(p.norm() for p in parts)
    r3 = (parts[0] - parts[1] + parts[2]).norm() / scale
    return r1, r2, r3


def scaled_identity_residuals(n: int, params: ParameterSet) -> dict:
    """Residuals of the parameter-swap, half-step-scaling and inversion identities.

    Keys: ``R_swap13`` (R with t1 <-> t3), ``T_swap12`` (T with t1 <-> t2),
    ``S_via_T``, ``T_via_R``, ``S_via_R``, ``R_invert``, ``S_invert``.
    """
    q = params.q
    t1, t2, t3, t4 = params.t
    out = {}
    R, S, T = build_R(n, params), build_S(n, params), build_T(n, params)

    swap13 = params.permuted((2, 1, 0, 3))
    scal = t1**n * qpoch_finite(t2 * t3, q, n) * qpoch_finite(t3 * t4, q, n) / (
        t3**n * qpoch_finite(t1 * t2, q, n) * qpoch_finite(t1 * t4, q, n)
    )
    out["R_swap13"] = coefficient_residual(R, build_R(n, swap13) * scal)

    swap12 = params.permuted((1, 0, 2, 3))
    scal = t1**n * qpoch_finite(t2 * t3, q, n) * qpoch_finite(t2 * t4, q, n) / (
        t2**n * qpoch_finite(t1 * t3, q, n) * qpoch_finite(t1 * t4, q, n)
    )
    out["T_swap12"] = coefficient_residual(T, build_T(n, swap12) * scal)

    rq = mp.sqrt(q)
    pre = LaurentPoly(-1, (t3 * t4, -(t3 + t4), 1))
    half = params.with_t(rq * t1, rq * t2, t3 / rq, t4 / rq)
    out["T_via_R"] = coefficient_residual(T, build_R(n, half).sub_scale(1 / rq))
    if n >= 1:
        out["S_via_T"] = coefficient_residual(S, pre * build_T(n - 1, params.with_t(t1, t2, q * t3, q * t4)))
        allhalf = params.with_t(rq * t1, rq * t2, rq * t3, rq * t4)
        out["S_via_R"] = coefficient_residual(S, pre * build_R(n - 1, allhalf).sub_scale(1 / rq))
    else:
        out["S_via_T"] = out["S_via_R"] = S.norm()

    inv = params.inverted()
    out["R_invert"] = coefficient_residual(build_R(n, inv).sub_inv(), R)
    out["S_invert"] = coefficient_residual(build_S(n, inv).sub_inv(), S / (t3 * t4)) if n else build_S(n, inv).norm()
    return out


CONNECTION_LABELS = ("T - R = c_n U", "(1-t1t3)(1-t1t4) R - t1 S = U multiple", "S, T, R linear relation")
SCALED_LABELS = {
    "R_swap13": "R under t1 <-> t3",
    "T_swap12": "T under t1 <-> t2",
    "T_via_R": "T as R with half-step shifted parameters",
    "S_via_T": "S as z(1-t3/z)(1-t4/z) T_(n-1)",
    "S_via_R": "S as z(1-t3/z)(1-t4/z) R_(n-1) with half-step shifts",
    "R_invert": "R under (z, t, q) -> (1/z, 1/t, 1/q)",
    "S_invert": "S under (z, t, q) -> (1/z, 1/t, 1/q)",
}


def connection_suite(params: ParameterSet, max_n: int = 8, tol=None, budget=None) -> list:
    """Coefficientwise residuals of the connection and parameter-change identities."""
    from .qcore import DEFAULT_BUDGET
    from .report import CheckRow

    budget = budget or DEFAULT_BUDGET
    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    with budget.context():
        for n in range(max_n + 1):
            if n >= 1:
                for label, res in zip(CONNECTION_LABELS, connection_residuals(n, params)):
                    rows.append(CheckRow("connections", label, n, None, "series", res, tol))
            for key, res in scaled_identity_residuals(n, params).items():
                rows.append(CheckRow("connections", SCALED_LABELS[key], n, None, "series", res, tol))
    return rows
