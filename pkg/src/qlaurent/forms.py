"""Weights on the unit circle, the bilinear forms built from them, and closed-form norms.

Quadrature is the periodic trapezoid rule on M half-offset nodes
theta_i = (i + 1/2) 2 pi / M, which never lands on z = +-1.  For real
parameters the weights satisfy w(conj z) = conj w(z) and the node set is
closed under conjugation, so only half the nodes are evaluated.  Inner
products of Laurent polynomials reduce to the weight moments
m_k = mean_i z_i^k w(z_i), which are cached per parameter set.
"""

from __future__ import annotations

import functools
import itertools
import threading
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .bases import (
    build_P,
    build_Pprime,
    build_R,
    build_S,
    build_T,
    build_U,
    build_X,
    build_Y,
    connection_constant,
    x0_constant,
)
from .errors import NearSingularPoint, NoConvergence
from .laurent import LaurentPoly
from .qcore import (
    DEFAULT_BUDGET,
    ParameterSet,
    PrecisionBudget,
    aw_mu,
    check_nonzero,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_multi,
    qpoch_multi,
    with_budget,
)
from .report import CheckRow

METHODS = ("quadrature", "closed_form", "glued_moment")


@dataclass(frozen=True)
class InnerProductResult:
    value: object
    method: str
    error_estimate: object = mpf(0)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.error_estimate < 0:
            raise ValueError("error estimate must be non-negative")


# -- weights -----------------------------------------------------------------


def weight_aw(z, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """(q, z^2, z^-2; q)_inf / prod_j (t_j z, t_j/z; q)_inf."""
    q = params.q
    num = qpoch_infinite_multi((q, z * z, 1 / (z * z)), q, budget)
    den = qpoch_infinite_multi([t * z for t in params.t] + [t / z for t in params.t], q, budget)
    return num / den


def weight_cher(z, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET, form: str = "product"):
    """The Askey-Wilson weight times (1 - t1/z)(1 - t2/z)/(1 - z^-2).

    ``form="product"`` evaluates the singularity-free product
    (q, z^2, q z^-2; q)_inf / [prod_j (t_j z; q)_inf * (t3/z, t4/z, q t1/z, q t2/z; q)_inf];
    ``form="ratio"`` multiplies the Askey-Wilson weight by the rational factor.
    """
    t1, t2, t3, t4 = params.t
    q = params.q
    if form == "ratio":
        d = 1 - 1 / (z * z)
        if abs(d) < mpf("1e-15"):
            raise NearSingularPoint(f"z={z} is too close to +-1")
        return weight_aw(z, params, budget) * (1 - t1 / z) * (1 - t2 / z) / d
    if form != "product":
        raise ValueError(f"unknown form {form!r}")
    num = qpoch_infinite_multi((q, z * z, q / (z * z)), q, budget)
    den = qpoch_infinite_multi(
        [t * z for t in params.t] + [t3 / z, t4 / z, q * t1 / z, q * t2 / z], q, budget
    )
    return num / den


WEIGHTS = {"cher": weight_cher, "aw": weight_aw}


# -- quadrature tables -------------------------------------------------------


class QuadratureTable:
    """Half-offset trapezoid nodes and weight values for one (params, M, kind)."""

    def __init__(self, params: ParameterSet, M: int, kind: str, budget: PrecisionBudget):
        if M % 2:
            raise ValueError("node count must be even")
        self.M = M
        self.kind = kind
        weight = WEIGHTS[kind]
        half = M // 2
        self.nodes = [mpmath.expjpi(mpf(2 * i + 1) / M) for i in range(half)]
        self.values = [weight(z, params, budget) for z in self.nodes]
        self._moments = {}
        self._lock = threading.Lock()

    def moment(self, k: int):
        """(1/M) sum over all nodes of z^k w(z), using conjugate symmetry."""
        m = self._moments.get(k)
        if m is None:
            s = mpmath.fsum(z**k * w for z, w in zip(self.nodes, self.values))
            m = 2 * mpmath.re(s) / self.M
            with self._lock:
                self._moments[k] = m
        return m

    def integrate(self, h: LaurentPoly):
        """(1/2 pi i) contour integral of h(z) w(z) dz/z by the trapezoid rule."""
        return mpmath.fsum(c * self.moment(e) for e, c in h.terms().items())


_table_lock = threading.Lock()


@functools.lru_cache(maxsize=64)
def _table(params_key, M, kind, budget, dps):
    q, t = params_key
    with mpmath.workdps(dps):
        return QuadratureTable(ParameterSet(q, t, strict=False), M, kind, budget)


def quadrature_table(params: ParameterSet, M: int, kind: str, budget: PrecisionBudget) -> QuadratureTable:
    with _table_lock:
        return _table((params.q, params.t), M, kind, budget, mp.dps)


@with_budget
def integrate(h: LaurentPoly, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET,
              kind: str = "cher") -> InnerProductResult:
    """Contour integral of h against the chosen weight, with node doubling."""
    params.require_disk()
    M = budget.quad_nodes_initial
    prev = quadrature_table(params, M, kind, budget).integrate(h)
    threshold = mpf(budget.verify_tol) / 10 * max(mpf(1), h.norm1())
    for _ in range(budget.quad_max_doublings):
        M *= 2
        cur = quadrature_table(params, M, kind, budget).integrate(h)
        diff = abs(cur - prev)
        if diff < threshold:
            return InnerProductResult(cur, "quadrature", diff)
        prev = cur
    raise NoConvergence(f"trapezoid rule not converged after {budget.quad_max_doublings} doublings")


def inner_cher(f: LaurentPoly, g: LaurentPoly, params: ParameterSet,
               budget: PrecisionBudget = DEFAULT_BUDGET) -> InnerProductResult:
    """<f, g>_cher = (1/2 pi i) contour integral of f g w_cher dz/z over |z| = 1."""
    return integrate(f * g, params, budget, kind="cher")


def inner_cher_prime(f: LaurentPoly, g: LaurentPoly, params: ParameterSet,
                     budget: PrecisionBudget = DEFAULT_BUDGET) -> InnerProductResult:
    """<f, g>_cher' : as <f, g>_cher with g(z) replaced by g(1/z)."""
    return integrate(f * g.sub_inv(), params, budget, kind="cher")


def inner_aw(f: LaurentPoly, g: LaurentPoly, params: ParameterSet,
             budget: PrecisionBudget = DEFAULT_BUDGET) -> InnerProductResult:
    """(1/2 pi i) contour integral of f g w_aw dz/z over the full circle."""
    return integrate(f * g, params, budget, kind="aw")


@with_budget
def mu_by_quadrature(params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """(1/2 pi) int_0^pi w_aw d theta, i.e. half the full-circle mean of w_aw."""
    return integrate(LaurentPoly.const(1), params, budget, kind="aw").value / 2


# -- gluing lemma ------------------------------------------------------------


def glue_poly(j: int, k: int, params: ParameterSet):
    """The pair (t1 z, q t1/z; q)_j and (t3 z, t3/z; q)_k as Laurent polynomials."""
    q, t1, t3 = params.q, params.t1, params.t3
    f = LaurentPoly.const(1)
    for i in range(j):
        qi = q**i
        f = f * LaurentPoly(-1, (-q * t1 * qi, 1 + q * t1 * t1 * qi * qi, -t1 * qi))
    g = LaurentPoly.const(1)
    for i in range(k):
        qi = q**i
        g = g * LaurentPoly(-1, (-t3 * qi, 1 + t3 * t3 * qi * qi, -t3 * qi))
    return f, g


@with_budget
def glued_closed(j: int, k: int, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    q = params.q
    t1, t2, t3, t4 = params.t
    den = qpoch_infinite_multi(
        (t1 * t2 * q ** (j + 1), t1 * t3 * q ** (j + k), t1 * t4 * q**j, t2 * t3 * q**k, t2 * t4, t3 * t4 * q**k),
        q,
        budget,
    )
    check_nonzero(den, "gluing denominator")
    return qpoch_infinite(params.tprod * q ** (j + k), q, budget) / den


@with_budget
def glued_moment(j: int, k: int, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """(quadrature value, closed product) of the gluing integral I_{j,k}."""
    if j < 0 or k < 0:
        raise ValueError("j, k must be non-negative")
    f, g = glue_poly(j, k, params)
    return inner_cher(f, g, params, budget).value, glued_closed(j, k, params, budget)


# -- closed-form norms -------------------------------------------------------

NORM_FAMILIES = ("R", "S", "T", "U", "X", "Y", "Y_prime", "Xneg_prime")


def _r_norm(n, params, budget):
    q = params.q
    t1, t2, t3, t4 = params.t
    tt = params.tprod
    num = (1 - t1 * t2) * t1 ** (2 * n) * qpoch_multi((q, t2 * t3, t2 * t4, t3 * t4, tt * q ** (n - 1)), q, n)
    den = qpoch_multi((t1 * t2, t1 * t3, t1 * t4), q, n) * qpoch_finite(tt, q, 2 * n)
    check_nonzero(den, "R-norm denominator")
    return num / den * aw_mu(params, budget)


def _require_n(n, lo):
    if n < lo:
        raise ValueError(f"closed form needs n >= {lo}")


READINGS = ("printed", "derived")


@with_budget
def norm_closed(family: str, n: int, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET,
                reading: str = "printed"):
    """Closed-form diagonal value of the relevant bilinear form.

    R, S, T, U, X, Y give <F_n, F_n>_cher (for X and Y the index is signed);
    ``Y_prime`` gives <Y_n, Y'_n>_cher' and ``Xneg_prime`` gives
    <X_-n, X'_-n>_cher' for n > 0.

    ``reading="printed"`` evaluates the published displays verbatim.  For U,
    Y_prime and Xneg_prime those displays disagree with direct integration;
    ``reading="derived"`` returns the values obtained from the R/T norms, the
    X/Y expansions and the inversion scalars instead.  The other families
    have a single reading.
    """
    if family not in NORM_FAMILIES:
        raise ValueError(f"no closed norm for {family!r}")
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    q = params.q
    t1, t2, t3, t4 = params.t
    tt = params.tprod
    m = n
    n = abs(n)
    rho = _r_norm(n, params, budget)
    if family == "R":
        return rho
    if family == "T":
        return _t_ratio(n, params) * rho
    if family == "U":
        _require_n(n, 1)
        c = check_nonzero(connection_constant(n, params), "c_n")
        if reading == "derived":
            # <T-R, T-R> = <T,T> - <R,R> since <T_n, R_n> = <R_n, R_n>
            return (_t_ratio(n, params) - 1) * rho / c**2
        return (1 - q**n) * (1 - tt * q ** (n - 1)) / ((1 - t1 * t2 * q**n) * (1 - t3 * t4 * q ** (n - 1))) * rho / c**2
    if family == "S":
        _require_n(n, 1)
        return _s_norm(n, params, rho)
    if family in ("X", "Y"):
        return _xy_norm(family, m, params, rho)
    _require_n(n, 1)
    a13, a14 = (1 - t1 * t3) ** 2, (1 - t1 * t4) ** 2
    if family == "Y_prime":
        yx = rho * (1 - t1 * t2) * (1 - t1 * t2 * q**n) * a13 * a14 * (1 - tt * q ** (2 * n - 1)) / (1 - tt * q ** (n - 1))
        if reading == "derived":
            return -yx / (t1**3 * t2 * t3 * t4 * q**n)
        return -(q**n) * yx / (t1**3 * t2 * t3 * t4)
    g = rho * (1 - t1 * t2) * (1 - t3 * t4 * q ** (n - 1)) * a13 * a14 * (1 - tt * q ** (2 * n - 1)) / (1 - q**n)
    scal = t1**3 * t2 * t3**2 * t4**2
    if reading == "derived":
        # <X_-n, Y_-n>_cher = -g, times the inversion scalar -1/(scal q^(n-1))
        return g / (scal * q ** (n - 1))
    return -scal * q ** (1 - n) * g


def _t_ratio(n, params):
    q = params.q
    t1, t2, t3, t4 = params.t
    return q**n * (1 - t1 * t2) * (1 - t3 * t4 / q) / ((1 - t1 * t2 * q**n) * (1 - t3 * t4 * q ** (n - 1)))


def _s_norm(n, params, rho):
    q = params.q
    t1, t2, t3, t4 = params.t
    return (q**n * (1 - t1 * t3) ** 2 * (1 - t1 * t4) ** 2 * (1 - t1 * t2) * (1 - t3 * t4 / q)
            / ((q**n - 1) * (1 - params.tprod * q ** (n - 1)) * t1**2) * rho)


def _xy_norm(family, m, params, rho):
    # expand F = alpha R_n + beta S_n and use <S_n, R_n> = (1-t1t3)(1-t1t4)/t1 <R_n, R_n>
    q = params.q
    t1, t2, t3, t4 = params.t
    n = abs(m)
    c0 = x0_constant(params)
    tt = params.tprod
    if family == "X":
        alpha, beta = (c0, -t1 * (1 - tt * q ** (n - 1))) if m < 0 else (c0, t1 * t1 * t2 * (1 - q**n))
    else:
        alpha, beta = ((q ** (n - 1) * t3 * t4 * c0, -t1 * (1 - tt * q ** (n - 1))) if m < 0
                       else (q**n * c0, t1 * (1 - q**n)))
    if n == 0:
        return alpha**2 * rho
    rs = (1 - t1 * t3) * (1 - t1 * t4) / t1 * rho
    return alpha**2 * rho + 2 * alpha * beta * rs + beta**2 * _s_norm(n, params, rho)


@with_budget
def aw_cross_closed(n: int, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """The displayed diagonal value of (1/2 pi i) contour integral of R_n T_n w_aw dz/z.

    (-t1^2)^n q^binom(n,2) (1 + q^n) (t1t2t3t4 q^{2n}; q)_inf
        / (2 prod_{j<k} (t_j t_k; q)_inf) * prod_{2<=j<k<=4} (t_j t_k; q)_n
    """
    q = params.q
    t1, t2, t3, t4 = params.t
    den = mpf(2)
    for a, b in itertools.combinations(params.t, 2):
        den *= qpoch_infinite(a * b, q, budget)
    check_nonzero(den, "product of (t_j t_k; q)_inf")
    num = ((-t1 * t1) ** n * q ** (n * (n - 1) // 2) * (1 + q**n)
           * qpoch_infinite(params.tprod * q ** (2 * n), q, budget)
           * qpoch_multi((t2 * t3, t2 * t4, t3 * t4), q, n))
    return num / den


@with_budget
def aw_cross_derived(n: int, params: ParameterSet, budget: PrecisionBudget = DEFAULT_BUDGET):
    """(1 + q^n) <R_n, R_n>_cher / (1 - t1t2 q^n), the value found by integration.

    T_n and R_n share all but their top terms in the (t1 z, q t1/z; q)_k and
    (t1 z, t1/z; q)_k expansions; symmetrizing the top term of T_n gives the
    (1 + q^n)/2 factor and the full circle doubles the half-circle integral.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    q, t1, t2 = params.q, params.t1, params.t2
    return (1 + q**n) * _r_norm(n, params, budget) / (1 - t1 * t2 * q**n)


# -- orthogonality suites ----------------------------------------------------

_SUITE = "cher-orthogonality"


def _scale(f, g):
    return max(f.norm() * g.norm(), mpf(10) ** (-mp.dps))


def _rel(value, expected):
    return abs(value - expected) / abs(expected)


class _Collector:
    def __init__(self, params, budget, tol):
        self.params, self.budget, self.tol = params, budget, mpf(tol)
        self.rows = []

    def zero(self, identity, n, m, f, g, prime=False):
        inner = inner_cher_prime if prime else inner_cher
        v = inner(f, g, self.params, self.budget).value
        self.rows.append(CheckRow(_SUITE, identity, n, m, "quadrature", abs(v) / _scale(f, g), self.tol))

    def diag(self, identity, n, value, expected, method="quadrature", informational=False):
        self.rows.append(CheckRow(_SUITE, identity, n, n, method, _rel(value, expected), self.tol, informational))


@with_budget
def orthogonality_suite(params: ParameterSet, max_n: int = 6, budget: PrecisionBudget = DEFAULT_BUDGET,
                        tol=None, groups: str = "abcdefghi") -> list:
    """Every orthogonality statement for the R, S, T, U, X, Y and P/P' families.

    Off-diagonal entries are measured against the product of the input
    coefficient norms; diagonal entries relative to the closed-form norms.
    Rows for displays whose printed form disagrees with integration are
    emitted for both readings.
    """
    P = params
    c = _Collector(P, budget, budget.verify_tol if tol is None else tol)
    idx = range(max_n + 1)
    R = {n: build_R(n, P) for n in idx}
    T = {n: build_T(n, P) for n in idx}
    S = {n: build_S(n, P) for n in idx if n}
    U = {n: build_U(n, P) for n in idx if n}
    ip = lambda f, g: inner_cher(f, g, P, budget).value  # noqa: E731
    t1, t3, t4 = P.t1, P.t3, P.t4

    if "a" in groups:
        for m in idx:
            for n in idx:
                if m == n:
                    c.diag("<R,R> norm", n, ip(R[n], R[n]), norm_closed("R", n, P, budget))
                elif m < n:
                    c.zero("<R_m,R_n>=0", n, m, R[m], R[n])
    if "b" in groups:
        for m in idx:
            for n in idx:
                if m == n:
                    c.diag("<R_n,T_n> = <R_n,R_n>", n, ip(R[n], T[n]), norm_closed("R", n, P, budget))
                else:
                    c.zero("<R_m,T_n>=0", n, m, R[m], T[n])
    if "c" in groups:
        for m in idx:
            for n in idx:
                if m == n:
                    c.diag("<T,T> norm", n, ip(T[n], T[n]), norm_closed("T", n, P, budget))
                elif m < n:
                    c.zero("<T_m,T_n>=0", n, m, T[m], T[n])
    if "d" in groups:
        k = (1 - t1 * t3) * (1 - t1 * t4)
        for n in S:
            for m in idx:
                c.zero("<S_n,T_m>=0", n, m, S[n], T[m])
                lhs = t1 * ip(S[n], R[m])
                rhs = k * ip(R[n], R[m])
                c.rows.append(CheckRow(_SUITE, "t1<S_n,R_m> = (1-t1t3)(1-t1t4)<R_n,R_m>", n, m, "quadrature",
                                       abs(lhs - rhs) / (_scale(S[n], R[m]) + abs(rhs)), c.tol))
            c.diag("<S,S> norm", n, ip(S[n], S[n]), norm_closed("S", n, P, budget))
    if "e" in groups:
        for m in idx:
            for n in U:
                c.zero("<R_m,U_n>=0", n, m, R[m], U[n])
        for n in U:
            for m in U:
                if m < n:
                    c.zero("<U_m,U_n>=0", n, m, U[m], U[n])
            v = ip(U[n], U[n])
            c.diag("<U,U> norm (printed)", n, v, norm_closed("U", n, P, budget))
            c.diag("<U,U> norm (derived)", n, v, norm_closed("U", n, P, budget, reading="derived"))
    if "f" in groups:
        for m in idx:
            for n in S:
                c.zero("<T_m,S_n>=0", n, m, T[m], S[n])
        for n in S:
            for m in S:
                if m < n:
                    c.zero("<S_m,S_n>=0", n, m, S[m], S[n])
    if "g" in groups:
        signed = range(-max_n, max_n + 1)
        for fam, builder in (("X", build_X), ("Y", build_Y)):
            polys = {m: builder(m, P) for m in signed}
            for m, n in itertools.combinations(signed, 2):
                c.zero(f"<{fam}_m,{fam}_n>=0", n, m, polys[m], polys[n])
            for n in signed:
                c.diag(f"<{fam},{fam}> norm", n, ip(polys[n], polys[n]), norm_closed(fam, n, P, budget))
    if "h" in groups:
        for fam, basis in (("R", R), ("S", S), ("T", T), ("U", U)):
            for n, f in basis.items():
                for k in range(-(n - 1), n):
                    c.zero(f"<{fam}_n, z^k>=0 for z^k in V_(n-1)", n, k, f, LaurentPoly.monomial(k))
    if "i" in groups:
        signed = range(-max_n, max_n + 1)
        Pm = {m: build_P(m, P) for m in signed}
        Pp = {m: build_Pprime(m, P) for m in signed}
        for m in signed:
            for n in signed:
                if m != n:
                    c.zero("<P_m,P'_n>_cher'=0", n, m, Pm[m], Pp[n], prime=True)
        for n in range(1, max_n + 1):
            v = inner_cher_prime(Pm[n], Pp[n], P, budget).value
            for reading in READINGS:
                c.diag(f"<Y_n,Y'_n>_cher' norm ({reading})", n, v, norm_closed("Y_prime", n, P, budget, reading=reading))
            v = inner_cher_prime(Pm[-n], Pp[-n], P, budget).value
            for reading in READINGS:
                c.diag(f"<X_-n,X'_-n>_cher' norm ({reading})", n, v,
                       norm_closed("Xneg_prime", n, P, budget, reading=reading))
    return c.rows


@with_budget
def aw_cross_suite(params: ParameterSet, max_m: int = 6, max_diag: int = 4,
                   budget: PrecisionBudget = DEFAULT_BUDGET, tol=None) -> list:
    """<R_m, T_n>_aw = 0 for n < m and the diagonal against both readings."""
    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    for m in range(max_m + 1):
        R = build_R(m, params)
        for n in range(m):
            T = build_T(n, params)
            v = inner_aw(R, T, params, budget).value
            rows.append(CheckRow("aw-cross", "<R_m,T_n>_aw=0 (n<m)", n, m, "quadrature", abs(v) / _scale(R, T), tol))
    for n in range(max_diag + 1):
        v = inner_aw(build_R(n, params), build_T(n, params), params, budget).value
        rows.append(CheckRow("aw-cross", "<R_n,T_n>_aw (printed)", n, n, "quadrature",
                             _rel(v, aw_cross_closed(n, params, budget)), tol))
        rows.append(CheckRow("aw-cross", "<R_n,T_n>_aw (derived)", n, n, "quadrature",
                             _rel(v, aw_cross_derived(n, params, budget)), tol))
    return rows


@with_budget
def glued_suite(params: ParameterSet, max_j: int = 3, budget: PrecisionBudget = DEFAULT_BUDGET, tol=None) -> list:
    tol = mpf(budget.verify_tol if tol is None else tol)
    rows = []
    for j in range(max_j + 1):
        for k in range(max_j + 1):
            quad, closed = glued_moment(j, k, params, budget)
            rows.append(CheckRow("glued-moments", "gluing integral I_jk", j, k, "glued_moment", _rel(quad, closed), tol))
    return rows
