"""Scalar layer: parameter sets, precision budgets and q-Pochhammer symbols.

All arithmetic is done with :mod:`mpmath` at the ambient working precision.
Operations that receive a :class:`PrecisionBudget` raise the precision to the
budget's ``working_digits`` for their own duration.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field, replace

import mpmath
from mpmath import mp, mpf

from .errors import DegenerateParameters, InadmissibleParameters

# |1 - x| below this counts as a vanishing factor.
ZERO_FACTOR_TOL = mpf("1e-20")


@dataclass(frozen=True)
class PrecisionBudget:
    working_digits: int = 60
    product_eps: float = 1e-40
    quad_nodes_initial: int = 256
    quad_max_doublings: int = 6
    verify_tol: float = 1e-25

    def __post_init__(self):
        if self.working_digits < 30:
            raise ValueError("working_digits must be at least 30")
        if not (self.verify_tol > self.product_eps > 0):
            raise ValueError("need verify_tol > product_eps > 0")
        if self.quad_nodes_initial < 4 or self.quad_max_doublings < 1:
            raise ValueError("quadrature schedule too small")

    def context(self):
        """Context manager raising mpmath precision to ``working_digits``."""
        return mpmath.workdps(max(self.working_digits, mp.dps))

    def refined(self) -> "PrecisionBudget":
        """Budget with doubled digits and halved truncation threshold."""
        return replace(
            self,
            working_digits=2 * self.working_digits,
            product_eps=self.product_eps / 2,
        )


DEFAULT_BUDGET = PrecisionBudget()


def with_budget(func):
    """Run ``func`` at the precision of its ``budget`` argument (or the default)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        budget = kwargs.get("budget")
        if budget is None:
            for a in args:
                if isinstance(a, PrecisionBudget):
                    budget = a
                    break
            else:
                budget = DEFAULT_BUDGET
        with budget.context():
            return func(*args, **kwargs)

    return wrapper


def _num(x):
    if isinstance(x, str):
        return mpmath.mpmathify(x)
    if isinstance(x, float):
        # go through repr so 0.35 means the decimal 0.35, not its binary neighbour
        return mpf(repr(x))
    return mpmath.mpmathify(x)


@dataclass(frozen=True)
class ParameterSet:
    """The base ``q`` and the four real parameters ``t1..t4``.

    With ``strict=True`` (the default) the constructor enforces 0 < q < 1,
    |t_i| < 1 and that no product t_i t_j q^k equals one.  Derived parameter
    sets (inverted base, half-step shifts, discrete truncations) are built with
    ``strict=False``; operations that integrate against a weight on the unit
    circle call :meth:`require_disk` first.
    """

    q: mpf
    t: tuple
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", _num(self.q))
        t = tuple(_num(x) for x in self.t)
        if len(t) != 4:
            raise InadmissibleParameters("exactly four t parameters are required")
        object.__setattr__(self, "t", t)
        if self.strict:
            self.require_disk()

    def require_disk(self, horizon: int = 8):
        q, t = self.q, self.t
        if not (0 < q < 1):
            raise InadmissibleParameters(f"need 0 < q < 1, got q={q}")
        for x in t:
            if mpmath.im(x) != 0 or abs(x) >= 1:
                raise InadmissibleParameters(f"need real |t_i| < 1, got {x}")
        for a, b in itertools.combinations(t, 2):
            for k in range(horizon + 1):
                if abs(1 - a * b * q**k) < ZERO_FACTOR_TOL:
                    raise DegenerateParameters(f"t_i t_j q^{k} = 1 for t_i={a}, t_j={b}")
        return self

    @property
    def t1(self):
        return self.t[0]

    @property
    def t2(self):
        return self.t[1]

    @property
    def t3(self):
        return self.t[2]

    @property
    def t4(self):
        return self.t[3]

    @property
    def tprod(self):
        t1, t2, t3, t4 = self.t
        return t1 * t2 * t3 * t4

    def with_t(self, *t, q=None) -> "ParameterSet":
        return ParameterSet(self.q if q is None else q, t, strict=False)

    def inverted(self) -> "ParameterSet":
        """The set (1/q, 1/t1, ..., 1/t4)."""
        return ParameterSet(1 / self.q, tuple(1 / x for x in self.t), strict=False)

    def permuted(self, order) -> "ParameterSet":
        return ParameterSet(self.q, tuple(self.t[i] for i in order), strict=False)

    def as_dict(self) -> dict:
        return {"q": mpmath.nstr(self.q, mp.dps), "t": [mpmath.nstr(x, mp.dps) for x in self.t]}


def canonical_params() -> ParameterSet:
    return ParameterSet("0.35", ("0.4", "-0.3", "0.25", "-0.15"))


def random_params(seed: int) -> ParameterSet:
    """A reproducible admissible parameter set with moderate magnitudes."""
    rng = random.Random(seed)
    while True:
        q = f"{rng.uniform(0.2, 0.6):.6f}"
        t = [f"{rng.choice((-1, 1)) * rng.uniform(0.12, 0.65):.6f}" for _ in range(4)]
        try:
            return ParameterSet(q, t)
        except (InadmissibleParameters, DegenerateParameters):
            continue


def qpoch_finite(a, q, n: int):
    """(a; q)_n = prod_{k<n} (1 - a q^k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = mpf(1)
    x = a
    for _ in range(n):
        result *= 1 - x
        x *= q
    return result


def qpoch_multi(values, q, n: int):
    """Product of (a; q)_n over ``values``."""
    result = mpf(1)
    for a in values:
        result *= qpoch_finite(a, q, n)
    return result


def truncation_index(a, q, eps) -> int:
    """Smallest N with |a| q^N / (1 - q) < eps.

    The discarded tail prod_{k>=N}(1 - a q^k) then has |log| below about
    eps, so the truncated product carries relative error at most ~eps.
    """
    absa = abs(a)
    if absa == 0:
        return 0
    bound = mpf(eps) * (1 - q) / absa
    if bound >= 1:
        return 0
    n = int(mpmath.ceil(mpmath.log(bound) / mpmath.log(q)))
    n = max(n, 0)
    while absa * q**n / (1 - q) >= eps:
        n += 1
    return n


def qpoch_infinite(a, q, budget: PrecisionBudget = DEFAULT_BUDGET):
    """Truncated (a; q)_infinity with relative error below ``budget.product_eps``."""
    if a == 0:
        return mpf(1)
    if not (0 < abs(q) < 1):
        raise InadmissibleParameters("(a;q)_inf needs |q| < 1")
    return qpoch_finite(a, q, truncation_index(a, q, budget.product_eps))


def qpoch_infinite_multi(values, q, budget: PrecisionBudget = DEFAULT_BUDGET):
    result = mpf(1)
    for a in values:
        result *= qpoch_infinite(a, q, budget)
    return result


def check_nonzero(value, what: str):
    if abs(value) < ZERO_FACTOR_TOL:
        raise DegenerateParameters(f"{what} vanishes")
    return value


@with_budget
def aw_mu(params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """Total mass mu(t|q) = (t1t2t3t4; q)_inf / prod_{j<k} (t_j t_k; q)_inf."""
    q = params.q
    den = mpf(1)
    for a, b in itertools.combinations(params.t, 2):
        den *= check_nonzero(qpoch_infinite(a * b, q, budget), "(t_j t_k; q)_inf")
    return qpoch_infinite(params.tprod, q, budget) / den


def pochhammer_selftest(params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET, tol=None) -> list:
    """Finite and infinite q-Pochhammer symbols against mpmath.qp and the splitting rule."""
    from .report import CheckRow

    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    with budget.context():
        q = params.q
        values = list(params.t) + [a * b for a, b in itertools.combinations(params.t, 2)] + [params.tprod]
        for i, a in enumerate(values):
            for n in (0, 1, 5, 12):
                ref = mpmath.qp(a, q, n)
                rows.append(CheckRow("selftest", "(a;q)_n vs mpmath.qp", n, i, "closed_form",
                                     abs(qpoch_finite(a, q, n) - ref) / abs(ref), tol))
            inf = qpoch_infinite(a, q, budget)
            ref = mpmath.qp(a, q)
            rows.append(CheckRow("selftest", "(a;q)_inf vs mpmath.qp", None, i, "closed_form", abs(inf - ref) / abs(ref), tol))
            split = qpoch_finite(a, q, 7) * qpoch_infinite(a * q**7, q, budget)
            rows.append(CheckRow("selftest", "(a;q)_inf = (a;q)_n (aq^n;q)_inf", 7, i, "closed_form",
                                 abs(split - inf) / abs(inf), tol))
    return rows
