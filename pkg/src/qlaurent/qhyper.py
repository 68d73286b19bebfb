"""Terminating basic hypergeometric series and the classical identities used on them.

Covers direct summation of terminating r+1 phi r series, the q-Pfaff-Saalschütz
sum, the Sears transformation of a balanced 4phi3, Wilson's contiguous
relations, and the very-well-poised 6phi5 evaluation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .errors import BalanceViolation, DegenerateParameters, PoleInSeries
from .qcore import (
    DEFAULT_BUDGET,
    ParameterSet,
    PrecisionBudget,
    ZERO_FACTOR_TOL,
    qpoch_finite,
    qpoch_infinite_multi,
    qpoch_multi,
    with_budget,
)

BALANCE_TOL = mpf("1e-30")


def _close(a, b, tol=BALANCE_TOL) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), mpf(1))


def termination_order(value, q, max_order: int = 10_000):
    """Return m if ``value`` equals q^{-m} for an integer m >= 0, else None."""
    if value == 0:
        return None
    m = mpmath.log(abs(value)) / -mpmath.log(q)
    k = int(mpmath.nint(mpmath.re(m)))
    if 0 <= k <= max_order and _close(value, q ** (-k)):
        return k
    return None


@dataclass(frozen=True)
class PhiSpec:
    """Parameter block of a terminating series with argument ``argument``.

    ``n`` is the termination order: one numerator parameter equals q^{-n}.
    When ``balanced`` is set, q * prod(numerators) = prod(denominators) and
    the argument equals q, checked to a relative 1e-30.
    """

    numerators: tuple
    denominators: tuple
    q: mpf
    n: int
    argument: object = None
    balanced: bool = False
    term_index: int = field(default=-1, compare=False)

    def __post_init__(self):
        nums = tuple(mpmath.mpmathify(a) for a in self.numerators)
        dens = tuple(mpmath.mpmathify(b) for b in self.denominators)
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominators", dens)
        object.__setattr__(self, "q", mpmath.mpmathify(self.q))
        arg = self.q if self.argument is None else mpmath.mpmathify(self.argument)
        object.__setattr__(self, "argument", arg)
        if self.n < 0:
            raise ValueError("termination order must be non-negative")
        for i, a in enumerate(nums):
            if _close(a, self.q ** (-self.n)):
                object.__setattr__(self, "term_index", i)
                break
        else:
            raise ValueError(f"no numerator parameter equals q^-{self.n}")
        if self.balanced:
            lhs = self.q * mpmath.fprod(nums)
            rhs = mpmath.fprod(dens)
            if not _close(lhs, rhs) or not _close(arg, self.q):
                raise BalanceViolation("series is not balanced")

    @classmethod
    def phi43(cls, a, b, c, d, e, f, g, q, n=None, balanced=True):
        """Balanced 4phi3 with top row (a, b, c, d) and bottom row (e, f, g).

        The termination order is detected from whichever of a..d is q^{-n}.
        """
        if n is None:
            for x in (a, b, c, d):
                n = termination_order(mpmath.mpmathify(x), q)
                if n is not None:
                    break
            else:
                raise ValueError("4phi3 does not terminate")
        return cls((a, b, c, d), (e, f, g), q, n, balanced=balanced)

    def others(self):
        """Numerator parameters other than the terminating one, in order."""
        return tuple(a for i, a in enumerate(self.numerators) if i != self.term_index)


def phi_terminating(spec: PhiSpec):
    """Sum of the n+1 terms of a terminating series, via term ratios."""
    q, n = spec.q, spec.n
    term = mpf(1)
    total = mpf(1)
    for j in range(n):
        qj = q**j
        num = mpf(1)
        for a in spec.numerators:
            num *= 1 - a * qj
        den = 1 - q ** (j + 1)
        for b in spec.denominators:
            factor = 1 - b * qj
            if abs(factor) < ZERO_FACTOR_TOL:
                raise PoleInSeries(f"denominator parameter {b} hits a pole at j={j}")
            den *= factor
        term = term * num / den * spec.argument
        total += term
    return total


def pfaff_saalschutz_closed(spec: PhiSpec):
    """Closed form of a balanced terminating 3phi2:

    3phi2(q^-n, a, b; c, abq^{1-n}/c; q, q) = (c/a, c/b; q)_n / (c, c/(ab); q)_n.
    """
    if len(spec.numerators) != 3 or len(spec.denominators) != 2:
        raise ValueError("q-Pfaff-Saalschütz needs a 3phi2")
    q, n = spec.q, spec.n
    a, b = spec.others()
    c, d = spec.denominators
    if not _close(c * d, a * b * q ** (1 - n)) or not _close(spec.argument, q):
        raise BalanceViolation("3phi2 is not balanced")
    den = qpoch_finite(c, q, n) * qpoch_finite(c / (a * b), q, n)
    if abs(den) < ZERO_FACTOR_TOL:
        raise PoleInSeries("closed form has a vanishing denominator")
    return qpoch_finite(c / a, q, n) * qpoch_finite(c / b, q, n) / den


def sears_transform(spec: PhiSpec):
    """Sears transformation of a balanced terminating 4phi3.

    With top row (q^-n, A, B, C) and bottom row (D, E, F), where A, B, C are
    the non-terminating numerators in stored order and DEF = ABC q^{1-n},
    returns ``(transformed, prefactor)`` such that

        phi(spec) = prefactor * phi(transformed),
        transformed = (q^-n, A, D/B, D/C; D, A q^{1-n}/E, A q^{1-n}/F),
        prefactor = (E/A, F/A; q)_n A^n / (E, F; q)_n.
    """
    if len(spec.numerators) != 4 or len(spec.denominators) != 3:
        raise ValueError("Sears transformation needs a 4phi3")
    q, n = spec.q, spec.n
    A, B, C = spec.others()
    D, E, F = spec.denominators
    if not _close(D * E * F, A * B * C * q ** (1 - n)):
        raise BalanceViolation("DEF != ABC q^{1-n}")
    top = spec.numerators[spec.term_index]
    shift = A * q ** (1 - n)
    transformed = PhiSpec((top, A, D / B, D / C), (D, shift / E, shift / F), q, n, balanced=True)
    den = qpoch_finite(E, q, n) * qpoch_finite(F, q, n)
    if abs(den) < ZERO_FACTOR_TOL:
        raise PoleInSeries("Sears prefactor has a vanishing denominator")
    prefactor = qpoch_finite(E / A, q, n) * qpoch_finite(F / A, q, n) * A**n / den
    return transformed, prefactor


def _phi43_value(a, b, c, d, e, f, g, q):
    return phi_terminating(PhiSpec.phi43(a, b, c, d, e, f, g, q, balanced=False))


def contiguous_residuals(a, b, c, d, e, f, g, q):
    """Residuals of Wilson's two contiguous relations for a balanced 4phi3.

    The terminating parameter q^{-n} must sit among b, c, d so that every
    shifted series in the relations also terminates.  Returns
    ``(r1, r2)`` where

        r1 = phi(a+, e+) - phi - q(a-e)(1-b)(1-c)(1-d)/((1-e)(1-eq)(1-f)(1-g)) phi_+(e+)
        r2 = a(1-f/a)(1-g/a)/((1-f)(1-g)) phi_+(a-)
             + (b-e)(1-c/e)/((1-b)(1-c)) phi(d+, e+) - (1-e)(1-bc/e)/((1-b)(1-c)) phi.

    When (1-b)(1-c) vanishes (n = 0) the second relation is evaluated with
    that factor cleared from all three terms.  Each residual is divided by
    the sum of the moduli of its terms.
    """
    a, b, c, d, e, f, g = (mpmath.mpmathify(x) for x in (a, b, c, d, e, f, g))
    if all(termination_order(x, q) is None for x in (b, c, d)):
        raise ValueError("one of b, c, d must equal q^-n")
    phi = _phi43_value(a, b, c, d, e, f, g, q)

    coef1 = q * (a - e) * (1 - b) * (1 - c) * (1 - d)
    den1 = (1 - e) * (1 - e * q) * (1 - f) * (1 - g)
    if abs(den1) < ZERO_FACTOR_TOL:
        raise PoleInSeries("vanishing denominator in first contiguous relation")
    rhs1 = 0
    if coef1 != 0:
        rhs1 = coef1 / den1 * _phi43_value(a * q, b * q, c * q, d * q, e * q * q, f * q, g * q, q)
    lead1 = _phi43_value(a * q, b, c, d, e * q, f, g, q)
    r1 = abs(lead1 - phi - rhs1) / (abs(lead1) + abs(phi) + abs(rhs1))

    bc = (1 - b) * (1 - c)
    cleared = abs(bc) < ZERO_FACTOR_TOL
    coef_a = a * (1 - f / a) * (1 - g / a) / ((1 - f) * (1 - g))
    coef_d = (b - e) * (1 - c / e)
    coef_0 = (1 - e) * (1 - b * c / e)
    if cleared:
        coef_a *= bc
    else:
        coef_d /= bc
        coef_0 /= bc
    term_a = 0
    if coef_a != 0:
        term_a = coef_a * _phi43_value(a, b * q, c * q, d * q, e * q, f * q, g * q, q)
    term_d = coef_d * _phi43_value(a, b, c, d * q, e * q, f, g, q)
    r2 = abs(term_a + term_d - coef_0 * phi) / (abs(term_a) + abs(term_d) + abs(coef_0 * phi))
    return r1, r2


def _require_truncation(params: ParameterSet, N: int, pairs=(1, 2, 3)):
    q, t1 = params.q, params.t1
    target = q ** (-N)
    for j in pairs:
        if _close(t1 * params.t[j], target):
            return j
    raise ValueError(f"need t1 t_j = q^-{N} for some j")


VWP_READINGS = ("printed", "derived")


@with_budget
def vwp65_check(params: ParameterSet, N: int, budget: PrecisionBudget = DEFAULT_BUDGET, reading: str = "derived"):
    """Both sides of the terminating very-well-poised 6phi5 evaluation.

    The caller arranges t1 t_j = q^{-N}; the sum then stops at k = N.
    Returns ``(lhs, rhs)`` with lhs the finite sum.  The ``derived`` right
    side is the standard product with a = t1^2, b = t1 t2, c = t1 t3, d = t1 t4,

        (q t1^2, q/t2t3, q/t2t4, q/t3t4; q)_inf / (qt1/t2, qt1/t3, qt1/t4, q/t1t2t3t4; q)_inf;

    the ``printed`` one carries an extra t1^2 in the three middle numerator
    arguments (q t1^2/t2t3 and so on) and does not match the sum.
    """
    if reading not in VWP_READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    _require_truncation(params, N)
    q = params.q
    t1, t2, t3, t4 = params.t
    tt = params.tprod
    lhs = mpf(0)
    for k in range(N + 1):
        den = qpoch_multi((q, q * t1 / t2, q * t1 / t3, q * t1 / t4), q, k)
        if abs(den) < ZERO_FACTOR_TOL:
            raise DegenerateParameters(f"(q t1/t_j; q)_{k} vanishes")
        num = qpoch_multi((t1 * t1, t1 * t2, t1 * t3, t1 * t4), q, k)
        lhs += num / den * (1 - t1 * t1 * q ** (2 * k)) / (1 - t1 * t1) * (q / tt) ** k
    s = t1 * t1 if reading == "printed" else 1
    top = qpoch_infinite_multi(
        (q * t1 * t1, q * s / (t2 * t3), q * s / (t2 * t4), q * s / (t3 * t4)),
        q,
        budget,
    )
    bottom = qpoch_infinite_multi((q * t1 / t2, q * t1 / t3, q * t1 / t4, q / tt), q, budget)
    if abs(bottom) < ZERO_FACTOR_TOL:
        raise DegenerateParameters("6phi5 product denominator vanishes")
    return lhs, top / bottom


def vwp65_split(params: ParameterSet, N: int):
    """The 6phi5 left side rewritten as the two sums carrying the discrete weight."""
    _require_truncation(params, N)
    q = params.q
    t1, t2, t3, t4 = params.t
    ratio = q / params.tprod
    first = mpf(0)
    for k in range(1, N + 1):
        num = qpoch_multi((q * t1 * t1, q * t1 * t2), q, k - 1) * qpoch_multi((t1 * t3, t1 * t4), q, k)
        den = qpoch_multi((q * t1 / t2, q), q, k - 1) * qpoch_multi((q * t1 / t3, q * t1 / t4), q, k)
        first += num / den * ratio**k * (-t1 * t2)
    second = mpf(0)
    for k in range(N + 1):
        num = qpoch_multi((q * t1 * t1, q * t1 * t2, t1 * t3, t1 * t4), q, k)
        den = qpoch_multi((q * t1 / t2, q * t1 / t3, q * t1 / t4, q), q, k)
        second += num / den * ratio**k
    return first + second


# -- random instances for the identity battery -------------------------------


def _draw(rng: random.Random, lo=0.15, hi=0.9, complex_=False):
    x = mpf(f"{rng.choice((-1, 1)) * rng.uniform(lo, hi):.8f}")
    if complex_:
        x = mpmath.mpc(x, mpf(f"{rng.uniform(-0.5, 0.5):.8f}"))
    return x


def _safe_denominators(dens, q, n, margin=mpf("1e-3")):
    return all(abs(1 - b * q**j) > margin for b in dens for j in range(n + 1))


def random_phi43(rng: random.Random, n: int, q=None, position: int = 0):
    """Random balanced 4phi3 with numerators q^-n, A q^(n-1), B, C and DEF = ABC.

    The terminating parameter is placed at numerator slot ``position``.
    Returns the 7-tuple (a, b, c, d, e, f, g) and q.
    """
    if q is None:
        q = mpf(f"{rng.uniform(0.2, 0.7):.6f}")
    while True:
        A, B, C, D, E = (_draw(rng) for _ in range(5))
        F = A * B * C / (D * E)
        dens = (D, E, F, D * q, D * q * q, E * q, F * q)
        if _safe_denominators(dens, q, n + 1) and 0.05 < abs(F) < 20:
            others = [A * q ** (n - 1), B, C]
            others.insert(position, q ** (-n))
            return (*others, D, E, F), q


def random_phi32(rng: random.Random, n: int, q=None):
    """Random balanced terminating 3phi2 spec."""
    if q is None:
        q = mpf(f"{rng.uniform(0.2, 0.7):.6f}")
    while True:
        a, b, c = _draw(rng), _draw(rng), _draw(rng)
        d = a * b * q ** (1 - n) / c
        if _safe_denominators((c, d, c / (a * b)), q, n):
            return PhiSpec((q ** (-n), a, b), (c, d), q, n, balanced=True)


def random_vwp_params(rng: random.Random, N: int, pair: int = 3) -> ParameterSet:
    """Parameters with t1 t_pair = q^-N and otherwise generic values."""
    while True:
        q = mpf(f"{rng.uniform(0.25, 0.6):.6f}")
        t = [_draw(rng, 0.15, 0.7) for _ in range(4)]
        t[pair - 1] = q ** (-N) / t[0]
        params = ParameterSet(q, t, strict=False)
        t1, t2, t3, t4 = params.t
        dens = (q * t1 / t2, q * t1 / t3, q * t1 / t4, t1 * t1) + ((t1 * t2,) if pair != 2 else ())
        if _safe_denominators(dens, q, N + 1) and abs(1 - t1 * t1) > 1e-3:
            return params


# -- the identity battery ---------------------------------------------------


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else mpf(0)


@with_budget
def identity_battery(seed: int = 0, count: int = 50, max_n: int = 8,
                     budget: PrecisionBudget = DEFAULT_BUDGET, tol=None) -> list:
    """Sears, q-Pfaff-Saalschütz, both contiguous relations and the 6phi5 sum on random instances.

    Every instance terminates at some order n <= ``max_n``.  The 6phi5 rows
    come in both readings of the product side; only the derived one is
    expected to hold.
    """
    from .report import CheckRow

    tol = mpf(budget.verify_tol if tol is None else tol)
    rng = random.Random(seed)
    rows = []

    def add(identity, n, residual):
        rows.append(CheckRow("sears", identity, n, None, "series", residual, tol))

    for i in range(count):
        n = rng.randint(0, max_n)
        vals, q = random_phi43(rng, n, position=i % 4)
        spec = PhiSpec.phi43(*vals, q, n=n)
        transformed, pre = sears_transform(spec)
        add("Sears transformation", n, _rel(phi_terminating(spec), pre * phi_terminating(transformed)))
    for _ in range(count):
        n = rng.randint(0, max_n)
        spec = random_phi32(rng, n)
        add("q-Pfaff-Saalschutz sum", n, _rel(phi_terminating(spec), pfaff_saalschutz_closed(spec)))
    for i in range(count):
        # at n = 0 the d q shift of a terminating d = 1 no longer terminates
        n = rng.randint(1, max_n)
        vals, q = random_phi43(rng, n, position=1 + i % 3)
        r1, r2 = contiguous_residuals(*vals, q)
        add("contiguous relation (a+, e+)", n, r1)
        add("contiguous relation (a-, d+, e+)", n, r2)
    for i in range(count):
        N = rng.randint(1, max_n)
        params = random_vwp_params(rng, N, pair=2 + i % 3)
        for reading in VWP_READINGS:
            lhs, rhs = vwp65_check(params, N, budget=budget, reading=reading)
            add(f"6phi5 evaluation ({reading})", N, _rel(lhs, rhs))
    return rows
