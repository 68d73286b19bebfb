"""The discrete q-Racah bilinear form on V_N and the bases orthogonal for it.

When t1 t_j = q^-N (j = 3 or 4) the contour form collapses to a finite sum
over the nodes t1 q^k (k = 1..N) and q^-k / t1 (k = 0..N).  Every weight is a
ratio of finite q-Pochhammer symbols, so the form is exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .bases import build_R, build_S, build_T, build_U, build_X, build_Y
from .errors import DegenerateWeight, InadmissibleParameters, UnsupportedTruncation
from .laurent import LaurentPoly
from .qhyper import VWP_READINGS, vwp65_check, vwp65_split
from .qcore import DEFAULT_BUDGET, ZERO_FACTOR_TOL, ParameterSet, PrecisionBudget, qpoch_multi, with_budget
from .report import CheckRow

RACAH_BASES = ("RU", "TS", "X", "Y")


@dataclass(frozen=True)
class RacahConfig:
    """A truncated parameter set t1 t_pair = q^-N.

    The truncating parameter necessarily has modulus above one, so ``params``
    is a non-strict ParameterSet; only |t1| < 1 and 0 < q < 1 are enforced.
    """

    N: int
    pair: int
    params: ParameterSet

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.pair not in (3, 4):
            raise ValueError("the truncating pair must be t1 t3 or t1 t4")
        P = self.params
        q, t1, t2 = P.q, P.t1, P.t2
        if not (0 < q < 1) or not abs(t1) < 1:
            raise InadmissibleParameters("need 0 < q < 1 and |t1| < 1")
        target = q ** (-self.N)
        if abs(t1 * P.t[self.pair - 1] - target) > mpf(10) ** (10 - mp.dps) * target:
            raise InadmissibleParameters(f"t1 t{self.pair} must equal q^-{self.N}")
        for k in range(self.N + 1):
            if abs(1 - t1 * t2 * q**k) < ZERO_FACTOR_TOL:
                raise UnsupportedTruncation(f"t1 t2 = q^-{k} is not supported")

    @classmethod
    def make(cls, N: int, pair: int, q, t1, t2, t_other) -> "RacahConfig":
        """Impose t_pair = q^-N / t1 exactly; ``t_other`` is the remaining parameter."""
        base = ParameterSet(q, (t1, t2, t_other, t_other), strict=False)
        tj = base.q ** (-N) / base.t1
        t = (base.t1, base.t2, tj, base.t3) if pair == 3 else (base.t1, base.t2, base.t3, tj)
        return cls(N, pair, ParameterSet(base.q, t, strict=False))


def racah_nodes(config: RacahConfig):
    """List of (node, weight) pairs of the discrete form."""
    P = config.params
    q, (t1, t2, t3, t4) = P.q, P.t
    ratio = q / P.tprod
    out = []
    for k in range(1, config.N + 1):
        num = qpoch_multi((q * t1 * t1, q * t1 * t2), q, k - 1) * qpoch_multi((t1 * t3, t1 * t4), q, k)
        den = qpoch_multi((q * t1 / t2, q), q, k - 1) * qpoch_multi((q * t1 / t3, q * t1 / t4), q, k)
        if abs(den) < ZERO_FACTOR_TOL:
            raise DegenerateWeight(f"weight denominator vanishes at k={k}")
        out.append((t1 * q**k, num / den * ratio**k * (-t1 * t2)))
    for k in range(config.N + 1):
        num = qpoch_multi((q * t1 * t1, q * t1 * t2, t1 * t3, t1 * t4), q, k)
        den = qpoch_multi((q * t1 / t2, q * t1 / t3, q * t1 / t4, q), q, k)
        if abs(den) < ZERO_FACTOR_TOL:
            raise DegenerateWeight(f"weight denominator vanishes at k={k}")
        out.append((q ** (-k) / t1, num / den * ratio**k))
    return out


def _check_space(f: LaurentPoly, N: int):
    if not f.is_zero() and not f.in_V(N):
        raise ValueError(f"argument is not in V_{N}")


def racah_inner(f: LaurentPoly, g: LaurentPoly, config: RacahConfig):
    _check_space(f, config.N)
    _check_space(g, config.N)
    return mpmath.fsum(w * f(x) * g(x) for x, w in racah_nodes(config))


def racah_abs_inner(f: LaurentPoly, g: LaurentPoly, config: RacahConfig):
    """Sum of |w f g| over the nodes, the natural size for cancellation in the form."""
    return mpmath.fsum(abs(w * f(x) * g(x)) for x, w in racah_nodes(config))


def racah_basis(which: str, config: RacahConfig):
    """Labelled elements of one of the four orthogonal bases of V_N."""
    N, P = config.N, config.params
    if which == "RU":
        return [(f"R{n}", build_R(n, P)) for n in range(N + 1)] + [(f"U{n}", build_U(n, P)) for n in range(1, N + 1)]
    if which == "TS":
        return [(f"T{n}", build_T(n, P)) for n in range(N + 1)] + [(f"S{n}", build_S(n, P)) for n in range(1, N + 1)]
    if which == "X":
        return [(f"X{m}", build_X(m, P)) for m in range(-N, N + 1)]
    if which == "Y":
        return [(f"Y{m}", build_Y(m, P)) for m in range(-N, N + 1)]
    raise ValueError(f"unknown basis {which!r}")


@with_budget
def racah_gram(which: str, config: RacahConfig, budget: PrecisionBudget = DEFAULT_BUDGET):
    """(labels, values, scales): Gram matrix of a basis and the matching |w f g| sums."""
    basis = racah_basis(which, config)
    nodes = racah_nodes(config)
    vals = [[f(x) for x, _ in nodes] for _, f in basis]
    ws = [w for _, w in nodes]
    size = len(basis)
    G = [[None] * size for _ in range(size)]
    S = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            terms = [w * a * b for w, a, b in zip(ws, vals[i], vals[j])]
            G[i][j] = G[j][i] = mpmath.fsum(terms)
            S[i][j] = S[j][i] = mpmath.fsum(abs(x) for x in terms)
    return [lab for lab, _ in basis], G, S


@with_budget
def racah_orthogonality_suite(config: RacahConfig, budget: PrecisionBudget = DEFAULT_BUDGET,
                              tol=None, bases=RACAH_BASES) -> list:
    """Relative off-diagonal entries (must vanish) and diagonals (must not) for each basis.

    Residuals are |<f, g>| / sum |w f g|.  A diagonal row stores the reciprocal
    of that ratio, so it passes when the entry is clearly nonzero.
    """
    if config.N > 6:
        raise ValueError("the suite is meant for N <= 6")
    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    tag = f"N={config.N} pair={config.pair}"
    for which in bases:
        labels, G, S = racah_gram(which, config, budget=budget)
        for i in range(len(labels)):
            for j in range(i, len(labels)):
                rel = abs(G[i][j]) / S[i][j] if S[i][j] else mpf(0)
                if i == j:
                    rows.append(CheckRow("racah", f"{labels[i]} diagonal nonzero ({tag})", i, j, "discrete",
                                         1 / rel if rel else mpf("inf"), 1 / tol))
                else:
                    rows.append(CheckRow("racah", f"<{labels[i]},{labels[j]}> ({tag})", i, j, "discrete", rel, tol))
    for key, res in racah_mass_residuals(config, budget).items():
        # the printed product is asserted by the identity battery, not here
        rows.append(CheckRow("racah", f"<1,1> vs 6phi5 {key} ({tag})", None, None, "closed_form", res, tol,
                             informational=key == "product printed"))
    return rows


def racah_mass_residuals(config: RacahConfig, budget: PrecisionBudget = DEFAULT_BUDGET) -> dict:
    """Relative gaps between <1,1> and the 6phi5 data.

    Keys: ``split`` (the two-sum rewrite of the 6phi5 left side), ``sum``
    (the 6phi5 sum itself) and ``product printed`` / ``product derived``
    (its two product readings, see :func:`qhyper.vwp65_check`).
    """
    one = LaurentPoly.const(1)
    with budget.context():
        mass = racah_inner(one, one, config)
        out = {"split": abs(mass - vwp65_split(config.params, config.N)) / abs(mass)}
        for reading in VWP_READINGS:
            lhs, rhs = vwp65_check(config.params, config.N, budget=budget, reading=reading)
            out.setdefault("sum", abs(mass - lhs) / abs(mass))
            out[f"product {reading}"] = abs(mass - rhs) / abs(mass)
        return out


DEFAULT_TRUNCATIONS = ((2, 3), (2, 4), (4, 3), (4, 4))


def default_configs(budget: PrecisionBudget = DEFAULT_BUDGET):
    """The configurations exercised by the acceptance run.

    Built at the budget's precision: t_pair = q^-N / t1 must hold to working
    accuracy, so configs made at a lower precision are not reusable.
    """
    with budget.context():
        return [RacahConfig.make(N, pair, mpf("0.35"), "0.5", "-0.3", "0.2") for N, pair in DEFAULT_TRUNCATIONS]
