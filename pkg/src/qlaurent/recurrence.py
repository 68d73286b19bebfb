"""Three- and four-term relations for the X/Y families and the R, S, T, U recurrences."""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from .bases import build_R, build_S, build_T, build_U, build_X, build_Y, x0_constant, xy_inversion_scalars
from .errors import DegenerateParameters
from .laurent import LaurentPoly, coefficient_residual
from .qcore import ZERO_FACTOR_TOL, DEFAULT_BUDGET, ParameterSet, PrecisionBudget
from .report import CheckRow

Z = LaurentPoly.monomial(1)
ZINV = LaurentPoly.monomial(-1)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Named constants of one relation at one index."""

    relation: str
    n: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]


def _den(*factors):
    out = mpf(1)
    for f in factors:
        if abs(f) < ZERO_FACTOR_TOL:
            raise DegenerateParameters("a recurrence denominator vanishes")
        out *= f
    return out


def _common(P, n):
    q, t1, t2, t3, t4 = P.q, *P.t
    tt = P.tprod
    # -1 - t1t2 + t1t2t3t4 q^(n-1) + t1t2 q^n recurs in most constants
    e = -1 - t1 * t2 + tt * q ** (n - 1) + t1 * t2 * q**n
    return q, t1, t2, t3, t4, tt, e


# -- relations among X_n, Y_n ------------------------------------------------


def three_term_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    """z X_-n = a X_-n + b X_n + c X_(n-1)."""
    q, t1, t2, t3, t4, tt, e = _common(P, n)
    g = -t1 - t2 + t1 * t2 * (t3 + t4) * q ** (n - 1)
    d = _den(e, 1 - tt * q ** (2 * n - 2))
    return RecurrenceCoeffs("zX_-n", n, {
        "a": g * (1 - tt * q ** (2 * n - 1)) / d,
        "b": -g * (1 - tt * q ** (n - 1)) * (1 - t3 * t4 * q ** (n - 1)) / d,
        "c": t1 * (1 - t3 * t4 * q ** (n - 1)) * (1 - t2 * t4 * q ** (n - 1)) * (1 - t2 * t3 * q ** (n - 1))
        / _den(1 - t1 * t2 * q ** (n - 1), 1 - tt * q ** (2 * n - 2)),
    })


def inv_three_term_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    """z^-1 X_n = a X_-n-1 + b X_n + c X_-n."""
    q, t1, t2, t3, t4, tt, e = _common(P, n)
    g = -t1 - t2 + t1 * t2 * (t3 + t4) * q**n
    d = _den(e, 1 - tt * q ** (2 * n))
    return RecurrenceCoeffs("z^-1 X_n", n, {
        "a": (1 - t1 * t2 * q**n) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n)
        / (t1 * _den(1 - t3 * t4 * q**n, 1 - tt * q ** (2 * n))),
        "b": g * (1 - tt * q ** (2 * n - 1)) / d,
        "c": -(1 - q**n) * (1 - t1 * t2 * q**n) * g / d,
    })


def four_term_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    """z X_n = a Y_-n-1 + b X_n + c Y_-n + d X_(n-1)."""
    q, t1, t2, t3, t4, tt, e = _common(P, n)
    d12 = _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n))
    d01 = _den(1 - tt * q ** (2 * n - 2), 1 - tt * q ** (2 * n - 1))
    return RecurrenceCoeffs("zX_n", n, {
        "a": (1 - t1 * t2 * q**n) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) * e
        / (t1 * _den(1 - t3 * t4 * q**n) * d12),
        "b": q**n * e * (-t3 - t4 + t2 * t3 * t4 * q**n + t1 * t3 * t4 * q**n) / d12,
        "c": -(1 - q**n) * (1 - t1 * t2 * q**n) * (-t1 - t2 + t1 * t2 * (t3 + t4) * q ** (n - 1)) / d01,
        "d": t1 * (1 - q**n) * (1 - t1 * t2 * q**n) * (1 - t2 * t3 * q ** (n - 1)) * (1 - t2 * t4 * q ** (n - 1))
        * (1 - t3 * t4 * q ** (n - 1)) / (_den(1 - t1 * t2 * q ** (n - 1)) * d01),
    })


def inv_four_term_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    """z^-1 X_-n = a X_-n-1 + b X_-n + c Y_n + d Y_(n-1)."""
    q, t1, t2, t3, t4, tt, e = _common(P, n)
    d12 = _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n))
    d01 = _den(1 - tt * q ** (2 * n - 2), 1 - tt * q ** (2 * n - 1))
    low = (1 - t3 * t4 * q ** (n - 1)) * (1 - tt * q ** (n - 1))
    return RecurrenceCoeffs("z^-1 X_-n", n, {
        "a": (1 - t1 * t2 * q**n) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) * low
        / (t1 * _den(1 - t3 * t4 * q**n) * d12),
        "b": q ** (n - 1) * (-t3 - t4 + (t1 + t2) * t3 * t4 * q ** (n - 1)) * e / d01,
        "c": -low * (-t1 - t2 + t1 * t2 * (t3 + t4) * q**n) / d12,
        "d": t1 * (1 - t2 * t3 * q ** (n - 1)) * (1 - t2 * t4 * q ** (n - 1)) * (1 - t3 * t4 * q ** (n - 1)) * e
        / (_den(1 - t1 * t2 * q ** (n - 1)) * d01),
    })


def _need(n, lo=1):
    if n < lo:
        raise ValueError(f"relation stated for n >= {lo}")


def xy_three_term_residual(n: int, params: ParameterSet):
    _need(n)
    k = three_term_coeffs(n, params)
    Xm = build_X(-n, params)
    rhs = Xm * k["a"] + build_X(n, params) * k["b"] + build_X(n - 1, params) * k["c"]
    return coefficient_residual(Xm * Z, rhs)


def xy_inv_three_term_residual(n: int, params: ParameterSet):
    _need(n)
    k = inv_three_term_coeffs(n, params)
    Xn = build_X(n, params)
    rhs = build_X(-n - 1, params) * k["a"] + Xn * k["b"] + build_X(-n, params) * k["c"]
    return coefficient_residual(Xn * ZINV, rhs)


def four_term_residuals(n: int, params: ParameterSet):
    """Residuals of the z X_n and z^-1 X_-n four-term relations."""
    _need(n)
    k = four_term_coeffs(n, params)
    Xn = build_X(n, params)
    rhs = build_Y(-n - 1, params) * k["a"] + Xn * k["b"] + build_Y(-n, params) * k["c"] + build_X(n - 1, params) * k["d"]
    r1 = coefficient_residual(Xn * Z, rhs)
    k = inv_four_term_coeffs(n, params)
    Xm = build_X(-n, params)
    rhs = build_X(-n - 1, params) * k["a"] + Xm * k["b"] + build_Y(n, params) * k["c"] + build_Y(n - 1, params) * k["d"]
    r2 = coefficient_residual(Xm * ZINV, rhs)
    return r1, r2


def inverted_xy(n: int, params: ParameterSet):
    """X_-n(1/z; 1/t | 1/q) and X_n(1/z; 1/t | 1/q) without any 1/q series.

    Uses R_n(1/z; 1/t | 1/q) = R_n(z; t | q) and S_n(1/z; 1/t | 1/q) = S_n(z; t | q)/(t3 t4)
    inside the X_{+-n} combinations evaluated at the inverted parameters.
    """
    q, t1, t2, t3, t4 = params.q, *params.t
    tt = params.tprod
    inv = params.inverted()
    c0 = x0_constant(inv)
    R = build_R(n, params)
    S = build_S(n, params) / (t3 * t4)
    xm = R * c0 - S * ((1 / t1) * (1 - q ** (1 - n) / tt))
    xp = R * c0 + S * ((1 / (t1 * t1 * t2)) * (1 - q ** (-n)))
    return xm, xp


def xy_inversion_residual(n: int, params: ParameterSet, route: str = "identities"):
    """Max residual of the two X -> Y inversion identities.

    ``route="identities"`` expands the inverted X through the R/S inversion
    identities; ``route="literal"`` builds X with parameters (1/q, 1/t)
    term by term and substitutes z -> 1/z.
    """
    _need(n)
    s_minus, s_plus = xy_inversion_scalars(n, params)
    if route == "identities":
        xm, xp = inverted_xy(n, params)
    elif route == "literal":
        inv = params.inverted()
        xm, xp = build_X(-n, inv).sub_inv(), build_X(n, inv).sub_inv()
    else:
        raise ValueError(f"unknown route {route!r}")
    return max(
        coefficient_residual(xm, build_Y(-n, params) * s_minus),
        coefficient_residual(xp, build_Y(n, params) * s_plus),
    )


# -- recurrences for R, S, T, U ------------------------------------------------


def r_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    q, t1, t2, t3, t4, tt, _ = _common(P, n)
    A = (1 - tt * q ** (n - 1)) * (1 - t1 * t2 * q**n) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) / (
        t1 * _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n)))
    C = t1 * (1 - q**n) * (1 - t2 * t3 * q ** (n - 1)) * (1 - t2 * t4 * q ** (n - 1)) * (1 - t3 * t4 * q ** (n - 1)) / (
        _den(1 - tt * q ** (2 * n - 2), 1 - tt * q ** (2 * n - 1)))
    return RecurrenceCoeffs("R", n, {"A": A, "C": C, "shift": t1 + 1 / t1})


def t_coeffs(n: int, P: ParameterSet) -> RecurrenceCoeffs:
    q, t1, t2, t3, t4, tt, _ = _common(P, n)
    A = (1 - tt * q ** (n - 1)) * (1 - t1 * t2 * q ** (n + 1)) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) / (
        t1 * _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n)))
    C = q * t1 * (1 - q**n) * (1 - t3 * t4 * q ** (n - 2)) * (1 - t2 * t3 * q ** (n - 1)) * (1 - t2 * t4 * q ** (n - 1)) / (
        _den(1 - tt * q ** (2 * n - 2), 1 - tt * q ** (2 * n - 1)))
    return RecurrenceCoeffs("T", n, {"A": A, "C": C, "shift": q * t1 + 1 / t1})


def u_coeffs(n: int, P: ParameterSet, reading: str = "printed") -> RecurrenceCoeffs:
    """Constants of the U_n recurrence.

    The printed relation uses the bracket z + q/z.  The ``derived`` constants
    come from U_n = z^-1 (1 - t1 z)(1 - t2 z) R_(n-1)(z; q t1, q t2, t3, t4) and
    go with the bracket z + 1/z; their C lacks the factor
    (1 - t1t2 q^n)(1 - t1t3 q^(n-1))(1 - t1t4 q^(n-1)) of the printed one.
    """
    q, t1, t2, t3, t4, tt, _ = _common(P, n)
    if reading == "derived":
        k = r_coeffs(n - 1, P.with_t(q * t1, q * t2, t3, t4))
        return RecurrenceCoeffs("U", n, dict(k.values))
    if reading != "printed":
        raise ValueError(f"unknown reading {reading!r}")
    A = (1 - tt * q**n) * (1 - t1 * t2 * q ** (n + 1)) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) / (
        q * t1 * _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n)))
    prod = mpf(1)
    for tj in (t3, t4):
        prod *= (1 - t1 * tj * q ** (n - 1)) * (1 - t2 * tj * q ** (n - 1))
    C = q * t1 * (1 - q ** (n - 1)) * (1 - t1 * t2 * q**n) * (1 - t3 * t4 * q ** (n - 2)) * prod / (
        _den(1 - tt * q ** (2 * n - 2), 1 - tt * q ** (2 * n - 1)))
    return RecurrenceCoeffs("U", n, {"A": A, "C": C, "shift": q * t1 + 1 / (q * t1)})


def s_coeffs(n: int, P: ParameterSet, reading: str = "printed") -> RecurrenceCoeffs:
    """Constants of the recurrence labeled for S_n.

    ``printed`` gives the published A, C and t1 + 1/t1.  ``derived`` gives the
    constants obtained from S_n = z(1 - t3/z)(1 - t4/z) R_(n-1)(q^-1/2 z; q^1/2 t),
    i.e. the R constants at index n - 1 with every t_j scaled by q^1/2.
    """
    q, t1, t2, t3, t4, tt, _ = _common(P, n)
    if reading == "derived":
        rq = mp.sqrt(q)
        k = r_coeffs(n - 1, P.with_t(*(rq * t for t in P.t)))
        return RecurrenceCoeffs("S", n, dict(k.values))
    if reading != "printed":
        raise ValueError(f"unknown reading {reading!r}")
    A = (1 - tt * q**n) * (1 - t1 * t2 * q**n) * (1 - t1 * t3 * q**n) * (1 - t1 * t4 * q**n) / (
        t1 * _den(1 - tt * q ** (2 * n - 1), 1 - tt * q ** (2 * n)))
    C = r_coeffs(n, P)["C"]
    return RecurrenceCoeffs("S", n, {"A": A, "C": C, "shift": t1 + 1 / t1})


def _three_term(bracket: LaurentPoly, k: RecurrenceCoeffs, prev, cur, nxt):
    A, C = k["A"], k["C"]
    lhs = bracket * cur
    rhs = nxt * A + prev * C + cur * (k["shift"] - A - C)
    return coefficient_residual(lhs, rhs)


def rstu_recurrence_residuals(n: int, params: ParameterSet) -> dict:
    """Residuals of the R, T, U recurrences and of the S-labeled display.

    Keys: ``R``, ``T``; ``U printed`` and ``U derived`` (n >= 2 only);
    ``S printed on R`` (the display verbatim), ``S printed on S`` (same
    constants with S_n substituted) and ``S derived``.
    """
    _need(n)
    P = params
    q = P.q
    rq = mp.sqrt(q)
    zz = LaurentPoly(-1, (1, 0, 1))
    zq = LaurentPoly(-1, (q, 0, 1))
    zs = LaurentPoly(-1, (rq, 0, 1 / rq))
    R = [build_R(m, P) for m in (n - 1, n, n + 1)]
    S = [build_S(m, P) for m in (n - 1, n, n + 1)]
    out = {
        "R": _three_term(zz, r_coeffs(n, P), *R),
        "T": _three_term(zq, t_coeffs(n, P), *(build_T(m, P) for m in (n - 1, n, n + 1))),
    }
    if n >= 2:
        U = [build_U(m, P) for m in (n - 1, n, n + 1)]
        out["U printed"] = _three_term(zq, u_coeffs(n, P), *U)
        out["U derived"] = _three_term(zz, u_coeffs(n, P, "derived"), *U)
    printed = s_coeffs(n, P)
    out["S printed on R"] = _three_term(zs, printed, *R)
    out["S printed on S"] = _three_term(zs, printed, *S)
    out["S derived"] = _three_term(zs, s_coeffs(n, P, "derived"), *S)
    return out


RECURRENCE_LABELS = {
    "R": "R recurrence",
    "T": "T recurrence",
    "U printed": "U recurrence (printed)",
    "U derived": "U recurrence (derived)",
    "S printed on R": "S-labeled recurrence as printed, on R",
    "S printed on S": "S-labeled recurrence, S substituted",
    "S derived": "S recurrence (derived)",
}
# reported but not asserted: the display's intended reading is ambiguous
REPORT_ONLY = ("S printed on R", "S printed on S")


def r_by_recurrence(n_max: int, params: ParameterSet) -> list:
    """R_0..R_n_max generated forward from R_0 = 1 (the C term vanishes at n = 0)."""
    zz = LaurentPoly(-1, (1, 0, 1))
    polys = [LaurentPoly.const(1)]
    prev = LaurentPoly.zero()
    for n in range(n_max):
        k = r_coeffs(n, params)
        cur = polys[-1]
        nxt = (zz * cur - prev * k["C"] - cur * (k["shift"] - k["A"] - k["C"])) / k["A"]
        polys.append(nxt)
        prev = cur
    return polys


# -- suite -------------------------------------------------------------------


def nonsymmetric_rows(params: ParameterSet, max_n: int = 6, budget: PrecisionBudget = DEFAULT_BUDGET,
                  tol=None) -> list:
    """Three- and four-term relations of X_n and the X -> Y inversion, both routes."""
    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    add = rows.append
    for n in range(1, max_n + 1):
        add(CheckRow("recurrences", "z X_-n three-term", n, None, "series", xy_three_term_residual(n, params), tol))
        add(CheckRow("recurrences", "z^-1 X_n three-term", n, None, "series", xy_inv_three_term_residual(n, params), tol))
        r1, r2 = four_term_residuals(n, params)
        add(CheckRow("recurrences", "z X_n four-term", n, None, "series", r1, tol))
        add(CheckRow("recurrences", "z^-1 X_-n four-term", n, None, "series", r2, tol))
        add(CheckRow("recurrences", "X -> Y inversion (R/S identities)", n, None, "series",
                     xy_inversion_residual(n, params, "identities"), tol))
        add(CheckRow("recurrences", "X -> Y inversion (1/q series)", n, None, "series",
                     xy_inversion_residual(n, params, "literal"), tol))
    return rows


def recurrence_suite(params: ParameterSet, max_n: int = 6, tol=None,
                     budget: PrecisionBudget = DEFAULT_BUDGET, regen_tol=None) -> list:
    tol = mpf(budget.verify_tol if tol is None else tol)
    regen_tol = tol if regen_tol is None else mpf(regen_tol)
    rows = []
    add = rows.append
    rows += nonsymmetric_rows(params, max_n, budget, tol)
    for n in range(1, max_n + 1):
        for key, res in rstu_recurrence_residuals(n, params).items():
            add(CheckRow("recurrences", RECURRENCE_LABELS[key], n, None, "series", res, tol, key in REPORT_ONLY))
    regen = r_by_recurrence(max_n + 1, params)
    for n, poly in enumerate(regen):
        add(CheckRow("recurrences", "R_n regenerated by recurrence", n, None, "recurrence",
                     coefficient_residual(poly, build_R(n, params)), regen_tol))
    return rows
