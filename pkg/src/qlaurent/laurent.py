"""Dense Laurent polynomials in z with mpmath coefficients."""

from __future__ import annotations

import json

import mpmath
from mpmath import mp, mpc, mpf

from .errors import InexactDivision


def _trim_threshold():
    return mpf(10) ** (-(mp.dps - 10))


class LaurentPoly:
    """sum_i coeffs[i] z^(min_exp + i), stored densely and treated as immutable.

    Leading and trailing coefficients smaller than 10^-(dps-10) times the
    largest coefficient are dropped on construction; the zero polynomial is
    ``LaurentPoly(0, ())``.
    """

    __slots__ = ("min_exp", "coeffs")

    def __init__(self, min_exp: int, coeffs=(), trim: bool = True):
        coeffs = [mpmath.mpmathify(c) for c in coeffs]
        if trim and coeffs:
            big = max(abs(c) for c in coeffs)
            cut = big * _trim_threshold()
            lo, hi = 0, len(coeffs)
            while lo < hi and abs(coeffs[lo]) <= cut:
                lo += 1
            while hi > lo and abs(coeffs[hi - 1]) <= cut:
                hi -= 1
            min_exp += lo
            coeffs = coeffs[lo:hi]
        if not coeffs:
            min_exp = 0
        self.min_exp = min_exp
        self.coeffs = tuple(coeffs)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(0, ())

    @classmethod
    def const(cls, c):
        return cls(0, (c,))

    @classmethod
    def monomial(cls, k: int, c=1):
        return cls(k, (c,))

    @classmethod
    def from_dict(cls, terms: dict):
        """Build from {exponent: coefficient}."""
        if not terms:
            return cls.zero()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)])

    # -- structure -----------------------------------------------------------

    @property
    def max_exp(self) -> int:
        return self.min_exp + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        i = k - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return mpf(0)

    def terms(self):
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs)}

    def in_V(self, n: int) -> bool:
        return self.is_zero() or (self.min_exp >= -n and self.max_exp <= n)

    def degree(self) -> int:
        """Smallest n with self in V_n."""
        if self.is_zero():
            return 0
        return max(-self.min_exp, self.max_exp, 0)

    def vector(self, n: int):
        """Coefficients on z^-n..z^n."""
        return [self[k] for k in range(-n, n + 1)]

    def norm(self):
        """Max-norm of the coefficient vector."""
        return max((abs(c) for c in self.coeffs), default=mpf(0))

    def norm1(self):
        return mpmath.fsum(abs(c) for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        return LaurentPoly(lo, [self[k] + other[k] for k in range(lo, hi + 1)])

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.min_exp, [-c for c in self.coeffs], trim=False)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.min_exp, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero()
        out = [mpf(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(self.min_exp + other.min_exp, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, c):
        if isinstance(c, LaurentPoly):
            return divide_exact(self, c)
        return LaurentPoly(self.min_exp, [x / c for x in self.coeffs])

    def shift(self, k: int):
        """Multiply by z^k."""
        if self.is_zero():
            return self
        return LaurentPoly(self.min_exp + k, self.coeffs, trim=False)

    def __call__(self, z):
        return evaluate(self, z)

    # -- substitutions -------------------------------------------------------

    def sub_inv(self):
        """p(1/z)."""
        if self.is_zero():
            return self
        return LaurentPoly(-self.max_exp, self.coeffs[::-1], trim=False)

    def sub_qinv(self, q):
        """p(q/z)."""
        return LaurentPoly.from_dict({-e: c * q**e for e, c in self.terms().items()})

    def sub_scale(self, s):
        """p(s z): the coefficient of z^e picks up s^e."""
        return LaurentPoly.from_dict({e: c * s**e for e, c in self.terms().items()})

    def conj_coeffs(self):
        return LaurentPoly(self.min_exp, [mpmath.conj(c) for c in self.coeffs], trim=False)

    # -- comparison ----------------------------------------------------------

    def distance(self, other) -> mpf:
        return (self - other).norm()

    def __repr__(self):
        body = " + ".join(f"({mpmath.nstr(c, 8)})*z^{self.min_exp + i}" for i, c in enumerate(self.coeffs))
        return f"LaurentPoly({body or '0'})"

    # -- serialization -------------------------------------------------------

    def to_json(self, digits: int | None = None) -> dict:
        digits = digits or mp.dps
        pairs = []
        for c in self.coeffs:
            c = mpc(c)
            pairs.append([mpmath.nstr(c.real, digits), mpmath.nstr(c.imag, digits)])
        return {"min_exp": self.min_exp, "coeffs": pairs, "digits": digits}

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        with mpmath.workdps(max(mp.dps, int(data.get("digits", mp.dps)))):
            coeffs = [mpc(mpf(re), mpf(im)) for re, im in data["coeffs"]]
            return cls(data["min_exp"], coeffs, trim=False)


def lp(terms: dict) -> LaurentPoly:
    return LaurentPoly.from_dict(terms)


Z = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)


def lp_add(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p + r


def lp_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


def lp_scale(p: LaurentPoly, c) -> LaurentPoly:
    return p * c


def evaluate(p: LaurentPoly, z):
    """Horner evaluation of z^min_exp * (c0 + c1 z + ...)."""
    if p.is_zero():
        return mpf(0)
    acc = mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc * z**p.min_exp


lp_eval = evaluate


def lp_sub_inv(p: LaurentPoly) -> LaurentPoly:
    return p.sub_inv()


def lp_sub_qinv(p: LaurentPoly, q) -> LaurentPoly:
    return p.sub_qinv(q)


def divide_with_remainder(numer: LaurentPoly, denom: LaurentPoly):
    """Long division after clearing negative exponents.

    Both operands are shifted to ordinary polynomials, divided from the top,
    and the quotient shifted back.  Returns ``(quotient, remainder)`` with
    numer = quotient * denom + remainder.
    """
    if denom.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if numer.is_zero():
        return LaurentPoly.zero(), LaurentPoly.zero()
    num = list(numer.coeffs)
    den = list(denom.coeffs)
    dn = len(den) - 1
    lead = den[-1]
    nq = len(num) - dn
    if nq <= 0:
        return LaurentPoly.zero(), numer
    quot = [mpf(0)] * nq
    for k in range(nq - 1, -1, -1):
        c = num[k + dn] / lead
        quot[k] = c
        if c:
            for i in range(dn + 1):
                num[k + i] -= c * den[i]
    shift = numer.min_exp - denom.min_exp
    quotient = LaurentPoly(shift, quot)
    remainder = LaurentPoly(numer.min_exp, num[:dn], trim=False)
    return quotient, remainder


def default_division_tol():
    return mpf(10) ** (-(mp.dps - 20))


def divide_exact(numer: LaurentPoly, denom: LaurentPoly, tol=None, scale=None) -> LaurentPoly:
    """Quotient of an exact division; raises InexactDivision otherwise.

    The remainder is measured relative to ``scale``, by default the
    numerator's norm.  Callers whose numerator is itself a difference of
    nearly equal terms should pass the norm of those terms instead.
    """
    quotient, _ = divide_exact_report(numer, denom, tol, scale)
    return quotient


def divide_exact_report(numer: LaurentPoly, denom: LaurentPoly, tol=None, scale=None):
    """Like :func:`divide_exact` but also returns the relative remainder norm."""
    tol = default_division_tol() if tol is None else mpf(tol)
    quotient, remainder = divide_with_remainder(numer, denom)
    scale = numer.norm() if scale is None else scale
    rel = remainder.norm() / scale if scale else mpf(0)
    if rel > tol:
        raise InexactDivision(f"remainder {mpmath.nstr(rel, 5)} exceeds tolerance {mpmath.nstr(tol, 5)}")
    return quotient, rel


lp_divide_exact = divide_exact


def coefficient_residual(lhs: LaurentPoly, rhs: LaurentPoly, scale=None):
    """Max-norm of lhs - rhs relative to ``scale`` (default: the larger side's norm)."""
    diff = (lhs - rhs).norm()
    if scale is None:
        scale = max(lhs.norm(), rhs.norm())
    if not scale:
        return diff
    return diff / scale


def rank(polys, n: int, tol=None) -> int:
    """Numerical rank of the coefficient matrix of ``polys`` in V_n."""
    rows = [p.vector(n) for p in polys]
    if not rows:
        return 0
    m = mpmath.matrix(rows)
    s = mpmath.svd_c(m, compute_uv=False) if any(isinstance(x, mpc) for r in rows for x in r) else mpmath.svd_r(m, compute_uv=False)
    svals = [abs(s[i]) for i in range(len(s))]
    top = max(svals)
    if tol is None:
        tol = mpf(10) ** (-(mp.dps // 2))
    return sum(1 for x in svals if x > tol * top)
