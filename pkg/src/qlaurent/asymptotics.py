"""Large-degree asymptotics of balanced terminating 4phi3 series and of R, S, T, U on |z| = 1."""

from __future__ import annotations

import math
import statistics

import mpmath
from mpmath import mp, mpf

from .bases import build_R, build_S, build_T, build_U
from .errors import BalanceViolation, DegenerateParameters, InadmissibleParameters, InsufficientDecay
from .qcore import DEFAULT_BUDGET, ParameterSet, PrecisionBudget, check_nonzero, qpoch_infinite, with_budget
from .report import CheckRow

ASYMPTOTIC_FAMILIES = ("R", "S", "T", "U")
DEFAULT_N_LIST = (8, 12, 16, 20)
DEFAULT_THETAS = (0.7, 1.3, 2.1)
# |B| and |C| closer than this (relative) count as equal moduli
EQUAL_MODULUS_TOL = mpf("1e-20")


def _poch(values, q, budget):
    out = mpf(1)
    for a in values:
        out *= qpoch_infinite(a, q, budget)
    return out


def _leading(B, C, D, E, F, q, n, budget):
    den = check_nonzero(_poch((B / C, D, E, F), q, budget), "(B/C, D, E, F; q)_inf")
    return C**n * _poch((B, D / C, E / C, F / C), q, budget) / den


@with_budget
def iw_asymptotic(A, B, C, D, E, F, q, n: int, budget: PrecisionBudget = DEFAULT_BUDGET):
    """Leading term of 4phi3(q^-n, A q^(n-1), B, C; D, E, F | q, q) as n grows.

    With |B| < |C| this is C^n (B, D/C, E/C, F/C)_inf / (B/C, D, E, F)_inf.
    When |B| = |C| the same expression with B and C exchanged is added.
    The series is symmetric in B and C, so the two are swapped if |B| > |C|.
    """
    A, B, C, D, E, F, q = (mpmath.mpmathify(x) for x in (A, B, C, D, E, F, q))
    if not (0 < abs(q) < 1):
        raise InadmissibleParameters("need 0 < |q| < 1")
    scale = max(abs(A * B * C), abs(D * E * F), mpf(1))
    if abs(A * B * C - D * E * F) > mpf(10) ** (-mp.dps // 2) * scale:
        raise BalanceViolation("need A B C = D E F")
    if abs(C) == 0:
        raise DegenerateParameters("B = C = 0 leaves no leading term")
    if abs(B) > abs(C):
        B, C = C, B
    main = _leading(B, C, D, E, F, q, n, budget)
    if abs(abs(B) - abs(C)) <= EQUAL_MODULUS_TOL * abs(C):
        main += _leading(C, B, D, E, F, q, n, budget)
    return main


def _check_point(z):
    z = mpmath.mpmathify(z)
    if abs(abs(z) - 1) > mpf("1e-15"):
        raise InadmissibleParameters("the formulas hold on |z| = 1 only")
    if abs(z * z - 1) < mpf("1e-8"):
        raise DegenerateParameters("z = +-1 is excluded")
    return z


def unit_point(theta):
    return mpmath.expj(mpmath.mpmathify(theta))


def _sides(family, n, z, P, budget):
    """(scaled exact value, asymptotic main term) for one family at degree n."""
    q, (t1, t2, t3, t4) = P.q, P.t
    t = P.t

    def poch(*vals):
        return _poch(vals, q, budget)

    def nz(x, what):
        return check_nonzero(x, what)

    if family == "R":
        lhs = poch(t1 * t2, t1 * t3, t1 * t4) * build_R(n, P)(z)
        rhs = (t1 / z) ** n * poch(*(tj * z for tj in t)) / nz(poch(z * z), "(z^2; q)_inf") + (
            (t1 * z) ** n * poch(*(tj / z for tj in t)) / nz(poch(1 / (z * z)), "(z^-2; q)_inf"))
    elif family == "S":
        pre = poch(q / (z * z), q * t1 * t2, q * t1 * t3, q * t1 * t4) / nz(
            poch(q * t1 / z, q * t2 / z, t3 / z, t4 / z), "S prefactor denominator")
        lhs = pre * build_S(n, P)(z)
        rhs = t1 ** (n - 1) * z**n
    elif family == "T":
        pre = poch(q / (z * z), q * t1 * t2, t1 * t3, t1 * t4) / nz(
            poch(q * t1 / z, q * t2 / z, t3 / z, t4 / z), "T prefactor denominator")
        lhs = pre * build_T(n, P)(z)
        rhs = (t1 * z) ** n
    elif family == "U":
        lhs = poch(q * t1 * t2, q * t1 * t3, q * t1 * t4) / (1 - q * t1 * t2) * build_U(n, P)(z)
        a = (q * t1) ** (n - 1)
        rhs = a / z**n * poch(*(tj * z for tj in t)) / nz(poch(z * z), "(z^2; q)_inf") + (
            a * z ** (n - 2) * (1 - t1 * z) * (1 - t2 * z) * poch(*(tj / z for tj in t))
            / nz(poch(1 / (z * z)) * (1 - t1 / z) * (1 - t2 / z), "U second-term denominator"))
    else:
        raise ValueError(f"unknown family {family!r}")
    return lhs, rhs


def extra_digits(n: int, params: ParameterSet) -> int:
    """Digits lost when a degree-n basis element is summed and evaluated on |z| = 1.

    The largest 4phi3 terms grow like q^(-n(n-1)/2), and the coefficients of
    the expansion in z like |t1|^-n.
    """
    q, t1 = params.q, params.t1
    loss = n * (n + 1) / 2 * float(mpmath.log10(1 / abs(q))) + n * abs(float(mpmath.log10(abs(t1))))
    return int(math.ceil(loss)) + 10


def thm_relative_error(family: str, n: int, z, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """|LHS/RHS - 1| for one family, degree and unit-circle point."""
    if family in ("S", "U") and n < 1:
        raise ValueError(f"{family}_n needs n >= 1")
    with mpmath.workdps(max(budget.working_digits, mp.dps) + extra_digits(n, params)):
        z = _check_point(z)
        lhs, rhs = _sides(family, n, z, params, budget)
        check_nonzero(abs(rhs) / (abs(rhs) + abs(lhs)), "asymptotic main term")
        return +abs(lhs / rhs - 1)


def thm91_convergence(family: str, z, params: ParameterSet, n_list=DEFAULT_N_LIST,
                      budget: PrecisionBudget = DEFAULT_BUDGET):
    """Relative errors of the unit-circle asymptotic formula for each n in ``n_list``."""
    return [thm_relative_error(family, n, z, params, budget) for n in n_list]


def rate_fit(errs, n_list, q, slack=0.1, check: bool = True) -> float:
    """Least-squares slope of log(err) against n.

    A decay of at least q^(n/2) means slope <= log(q)/2; ``slack * |log q|`` is
    added to that bound.  Raises InsufficientDecay when ``check`` is set and
    the slope exceeds it.
    """
    if len(errs) != len(n_list) or len(errs) < 2:
        raise ValueError("need matching errs and n_list with at least two points")
    if any(e <= 0 for e in errs):
        raise ValueError("errors must be positive")
    logq = float(mpmath.log(q))
    slope = statistics.linear_regression([float(n) for n in n_list], [float(mpmath.log(e)) for e in errs]).slope
    bound = logq / 2 + slack * abs(logq)
    if check and slope > bound:
        raise InsufficientDecay(f"slope {slope:.4g} exceeds bound {bound:.4g}")
    return slope


def convergence_table(params: ParameterSet, families=ASYMPTOTIC_FAMILIES, thetas=DEFAULT_THETAS,
                      n_list=DEFAULT_N_LIST, budget: PrecisionBudget = DEFAULT_BUDGET):
    """Rows (family, theta, n, err) for plotting."""
    out = []
    for fam in families:
        for th in thetas:
            errs = thm91_convergence(fam, unit_point(th), params, n_list, budget)
            out.extend((fam, th, n, e) for n, e in zip(n_list, errs))
    return out


def asymptotics_suite(params: ParameterSet, families=ASYMPTOTIC_FAMILIES, thetas=DEFAULT_THETAS,
                      n_list=DEFAULT_N_LIST, budget: PrecisionBudget = DEFAULT_BUDGET, rate_power=2.5):
    """Decay checks: err(last)/err(first) <= q^rate_power, plus the slope bound.

    Fully converged errors (exactly zero at working precision) pass trivially.
    """
    q = params.q
    rows = []
    for fam in families:
        for th in thetas:
            errs = thm91_convergence(fam, unit_point(th), params, n_list, budget)
            ratio = errs[-1] / errs[0] if errs[0] else mpf(0)
            label = f"{fam} asymptotic decay at theta={th}"
            rows.append(CheckRow("asymptotics", label, n_list[-1], n_list[0], "ratio", ratio, q**rate_power))
            if all(e > 0 for e in errs):
                slope = rate_fit(errs, n_list, q, check=False)
                bound = float(mpmath.log(q)) / 2 + 0.1 * abs(float(mpmath.log(q)))
                # a negative residual passes; shift so the bound maps to tolerance 0
                rows.append(CheckRow("asymptotics", f"{fam} log-error slope at theta={th}", None, None,
                                     "fit", mpf(slope - bound), mpf(0)))
    return rows
