"""Exact arithmetic substrate: rationals, univariate polynomials, rational
functions and truncated Laurent series.

Rationals are :class:`fractions.Fraction`; everything here is an immutable
value type.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational

from .errors import CoefficientModeError, ZeroSeries

Rat = Fraction

#: relative threshold under which a float leading coefficient counts as zero
FLOAT_ZERO_TOL = 1e-12


def to_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected to keep exact paths exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial over Q; ``coeffs[i]`` multiplies ``s**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [to_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> UniPoly:
        return cls((c,))

    @classmethod
    def x(cls) -> UniPoly:
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots, lead=1) -> UniPoly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-to_rat(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return self.format("s")

    def format(self, var="s") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{rat_str(mag)}*{mono}"
            else:
                body = rat_str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        lead = other.lc
        for k in range(len(rem) - 1 - dq, -1, -1):
            q = rem[k + dq] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (float(c) if isinstance(x, float) else c)
        return acc

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        lead = self.lc
        return UniPoly([c / lead for c in self.coeffs])

    def deriv(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def taylor_shift(self, a) -> UniPoly:
        """Return p(s + a)."""
        a = to_rat(a)
        cs = list(self.coeffs)
        n = len(cs)
        # repeated synthetic division
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return UniPoly(cs)

    def compose_linear(self, a, b) -> UniPoly:
        """Return p(a*s + b)."""
        a, b = to_rat(a), to_rat(b)
        scaled = UniPoly([c * a**i for i, c in enumerate(self.coeffs)])
        return scaled.taylor_shift(b / a) if a != 0 else UniPoly.const(self(b))

    def root_multiplicity(self, a) -> int:
        """Multiplicity of ``a`` as a root; 0 if not a root. Zero poly -> -1."""
        if self.is_zero():
            return -1
        shifted = self.taylor_shift(a).coeffs
        k = 0
        while shifted[k] == 0:
            k += 1
        return k

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive with integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs))
        den = reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def primitive(self) -> UniPoly:
        if self.is_zero():
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return UniPoly([x / c for x in self.coeffs])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_gcd_many(polys) -> UniPoly:
    g = UniPoly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


# --------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced quotient num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UniPoly) else UniPoly.const(num)
        den = UniPoly.const(1) if den is None else (den if isinstance(den, UniPoly) else UniPoly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.lc
        self.num = UniPoly([c / lead for c in num.coeffs])
        self.den = UniPoly([c / lead for c in den.coeffs])

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of rational function at {x}")
        return self.num(x) / d


# --------------------------------------------------------------------------
# truncated Laurent series


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


class LaurentSeries:
    """Truncated Laurent series ``sum_{k=min_exp}^{trunc_order} c_k eps^k + O(eps^(trunc_order+1))``.

    Coefficients are all exact (Fraction) or all float; ``exact`` records the
    mode.  A zero series keeps its window but every coefficient is zero.
    """

    __slots__ = ("min_exp", "coeffs", "trunc_order", "exact", "zero_tol")

    def __init__(self, min_exp, coeffs, trunc_order=None, exact=None, zero_tol=FLOAT_ZERO_TOL):
        coeffs = list(coeffs)
        if exact is None:
            exact = all(_is_exact(c) for c in coeffs)
        if exact:
            coeffs = [to_rat(c) for c in coeffs]
        else:
            coeffs = [float(c) for c in coeffs]
        if trunc_order is None:
            trunc_order = min_exp + len(coeffs) - 1
        if trunc_order < min_exp - 1:
            raise ValueError("trunc_order below min_exp")
        width = trunc_order - min_exp + 1
        zero = Fraction(0) if exact else 0.0
        coeffs = (coeffs + [zero] * width)[:width]
        self.exact = exact
        self.zero_tol = zero_tol
        # renormalise leading cancellation
        if exact:
            lead = 0
            while lead < len(coeffs) and coeffs[lead] == 0:
                lead += 1
        else:
            scale = max((abs(c) for c in coeffs), default=0.0)
            lead = 0
            while lead < len(coeffs) and abs(coeffs[lead]) <= zero_tol * scale:
                lead += 1
        if lead == len(coeffs):
            # zero series: keep the window
            self.min_exp = min_exp
            self.coeffs = tuple(zero for _ in coeffs)
        else:
            self.min_exp = min_exp + lead
            self.coeffs = tuple(coeffs[lead:])
        self.trunc_order = trunc_order

    # -- constructors
    @classmethod
    def one(cls, order=0, exact=True) -> LaurentSeries:
        return cls(0, [1 if exact else 1.0], order, exact=exact)

    @classmethod
    def monomial(cls, coeff, exp, order, exact=None) -> LaurentSeries:
        return cls(exp, [coeff], order, exact=exact)

    # -- queries
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def valuation(self):
        """min_exp for nonzero series, ``None`` for the zero series."""
        return None if self.is_zero() else self.min_exp

    def coeff(self, k):
        if k > self.trunc_order:
            raise IndexError(f"exponent {k} beyond truncation order {self.trunc_order}")
        if k < self.min_exp:
            return Fraction(0) if self.exact else 0.0
        return self.coeffs[k - self.min_exp]

    def __getitem__(self, k):
        return self.coeff(k)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.min_exp, self.coeffs, self.trunc_order, self.exact) == (
            other.min_exp, other.coeffs, other.trunc_order, other.exact)

    def __hash__(self):
        return hash((self.min_exp, self.coeffs, self.trunc_order, self.exact))

    def __repr__(self):
        cs = ", ".join(rat_str(c) if self.exact else repr(c) for c in self.coeffs)
        return f"LaurentSeries(min_exp={self.min_exp}, coeffs=[{cs}], trunc_order={self.trunc_order})"

    def evaluate_at_zero(self):
        """Constant term; raises if the series has a pole."""
        if not self.is_zero() and self.min_exp < 0:
            raise ZeroDivisionError("series has a pole at eps = 0")
        return self.coeff(0)

    def to_float(self) -> LaurentSeries:
        if not self.exact:
            return self
        return LaurentSeries(self.min_exp, [float(c) for c in self.coeffs], self.trunc_order,
                             exact=False, zero_tol=self.zero_tol)

    def truncate(self, order) -> LaurentSeries:
        order = min(order, self.trunc_order)
        return LaurentSeries(self.min_exp, self.coeffs[: max(0, order - self.min_exp + 1)],
                             order, exact=self.exact, zero_tol=self.zero_tol)

    def scale(self, c) -> LaurentSeries:
        return LaurentSeries(self.min_exp, [c * x for x in self.coeffs], self.trunc_order,
                             exact=self.exact and _is_exact(c), zero_tol=self.zero_tol)

    def _check_mode(self, other):
        if self.exact != other.exact:
            raise CoefficientModeError("cannot mix exact and float Laurent series")

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check_mode(other)
        lo = min(self.min_exp, other.min_exp)
        hi = min(self.trunc_order, other.trunc_order)
        return LaurentSeries(lo, [self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1)],
                             hi, exact=self.exact, zero_tol=self.zero_tol)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return laurent_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def laurent_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product with the truncation order propagated from both factors."""
    a._check_mode(b)
    lo = a.min_exp + b.min_exp
    if a.is_zero() and b.is_zero():
        hi = min(a.trunc_order + b.min_exp, b.trunc_order + a.min_exp)
    elif a.is_zero():
        hi = a.trunc_order + b.min_exp
    elif b.is_zero():
        hi = b.trunc_order + a.min_exp
    else:
        hi = min(a.trunc_order + b.min_exp, b.trunc_order + a.min_exp)
    zero = Fraction(0) if a.exact else 0.0
    out = []
    for k in range(lo, hi + 1):
        acc = zero
        for i in range(a.min_exp, min(a.trunc_order, k - b.min_exp) + 1):
            acc += a.coeffs[i - a.min_exp] * b.coeffs[k - i - b.min_exp]
        out.append(acc)
    return LaurentSeries(lo, out, hi, exact=a.exact, zero_tol=min(a.zero_tol, b.zero_tol))


def laurent_inv(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse, keeping the relative precision of ``a``."""
    if a.is_zero():
        raise ZeroSeries("cannot invert the zero series")
    c = a.coeffs
    lead = c[0]
    if not a.exact:
        scale = max(abs(x) for x in c)
        if abs(lead) <= a.zero_tol * scale:
            raise ZeroSeries("leading coefficient numerically zero")
    n = a.trunc_order - a.min_exp + 1
    inv = [1 / lead if not a.exact else Fraction(1) / lead]
    for k in range(1, n):
        acc = sum(c[j] * inv[k - j] for j in range(1, min(k, len(c) - 1) + 1))
        inv.append(-acc / lead)
    return LaurentSeries(-a.min_exp, inv, -a.min_exp + n - 1, exact=a.exact, zero_tol=a.zero_tol)


def _power_series_div(num, den, n):
    """First n coefficients of num/den as power series (den[0] != 0)."""
    out = []
    d0 = den[0]
    for k in range(n):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / d0)
    return out


def ratfunc_expand(r: RatFunc, s0, order: int) -> LaurentSeries:
    """Exact Laurent expansion of ``r(s0 + eps)`` valid through ``eps**order``."""
    s0 = to_rat(s0)
    num = r.num.taylor_shift(s0).coeffs
    den = r.den.taylor_shift(s0).coeffs
    if not num:
        return LaurentSeries(min(order, 0), [], order, exact=True)
    vn = next(i for i, c in enumerate(num) if c != 0)
    vd = next(i for i, c in enumerate(den) if c != 0)
    min_exp = vn - vd
    order = max(order, min_exp)
    n = order - min_exp + 1
    coeffs = _power_series_div(list(num[vn:]), list(den[vd:]), n)
    return LaurentSeries(min_exp, coeffs, order, exact=True)
