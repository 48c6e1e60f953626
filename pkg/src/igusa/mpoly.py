"""Sparse multivariate polynomials over Q.

Grammar accepted by :func:`parse_poly` (whitespace ignored)::

    poly     := ["+"|"-"] term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := atom ["^" int]
    atom     := int ["/" int] | var | "(" poly ")"

Parenthesised groups are an extension over the plain sum-of-monomials form;
every sum-of-monomials string parses the same way with or without it.
"""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .errors import ParseError, UnknownVariable
from .exact import rat_str, to_rat


def default_vars(n: int, homogeneous: bool = False) -> list[str]:
    start = 0 if homogeneous else 1
    return [f"x{i}" for i in range(start, start + n + (1 if homogeneous else 0))]


class MPoly:
    """Polynomial in ``nvars`` variables; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for {nvars} variables")
            c = to_rat(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if clean[exp] == 0:
                    del clean[exp]
        self.terms = clean

    # -- constructors
    @classmethod
    def const(cls, nvars, c) -> MPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i) -> MPoly:
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def linear(cls, const, coeffs) -> MPoly:
        """``const + sum coeffs[j] * x_j``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for j, c in enumerate(coeffs):
            exp = [0] * n
            exp[j] = 1
            terms[tuple(exp)] = c
        return cls(n, terms)

    # -- basic protocol
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in canonical order: descending total degree, then descending lex."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.format()!r})"

    def __str__(self):
        return self.format()

    def format(self, var_names=None) -> str:
        names = var_names or default_vars(self.nvars)
        if not self.terms:
            return "0"
        out = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exp) if e)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{rat_str(mag)}*{mono}"
            else:
                body = rat_str(mag)
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return MPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

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
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        return poly_pow(self, k)

    # -- evaluation
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("wrong number of coordinates")
        total = 0
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def float_evaluator(self):
        """Vectorised float evaluator: ``ev(X)`` with X of shape (..., nvars)."""
        if not self.terms:
            return lambda X: np.zeros(np.shape(X)[:-1])
        exps = np.array([e for e, _ in self.sorted_terms()], dtype=np.int64)
        coef = np.array([float(c) for _, c in self.sorted_terms()])
        maxdeg = exps.max(axis=0)

        def ev(X):
            X = np.asarray(X, dtype=float)
            out = np.zeros(X.shape[:-1])
            # power tables per variable
            pows = []
            for i in range(self.nvars):
                tab = [np.ones(X.shape[:-1])]
                for _ in range(maxdeg[i]):
                    tab.append(tab[-1] * X[..., i])
                pows.append(tab)
            for row, c in zip(exps, coef):
                term = np.full(X.shape[:-1], c)
                for i, e in enumerate(row):
                    if e:
                        term = term * pows[i][e]
                out = out + term
            return out

        return ev

    # -- substitutions
    def substitute(self, polys) -> MPoly:
        """Compose: replace variable i by ``polys[i]`` (all sharing one nvars)."""
        if len(polys) != self.nvars:
            raise ValueError("need one polynomial per variable")
        m = polys[0].nvars
        cache: dict = {}

        def pw(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = poly_pow(polys[i], e)
            return cache[key]

        result = MPoly(m)
        for exp, c in self.terms.items():
            term = MPoly.const(m, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * pw(i, e)
            result = result + term
        return result


def poly_pow(f: MPoly, k: int) -> MPoly:
    """Exact k-th power by binary exponentiation."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    result = MPoly.const(f.nvars, 1)
    base = f
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def restrict_chart(f: MPoly) -> MPoly:
    """Substitute x0 = 1 - x1 - ... - xn, dropping to the affine chart."""
    n = f.nvars - 1
    if n < 1:
        raise ValueError("homogeneous input needs at least two variables")
    x0 = MPoly.linear(1, [-1] * n)
    subs = [x0] + [MPoly.var(n, i) for i in range(n)]
    return f.substitute(subs)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, text, var_names):
        self.text = text
        self.names = list(var_names)
        self.index = {v: i for i, v in enumerate(self.names)}
        self.n = len(self.names)
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1) is not None:
                self.toks.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("id", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} at position {pos}", position=pos)

    def parse(self):
        if not self.toks:
            raise ParseError("empty polynomial", position=0)
        p = self.poly()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r} at position {pos}", position=pos)
        return p

    def poly(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, e, pos = self.take()
            if k != "int":
                raise ParseError(f"expected integer exponent at position {pos}", position=pos)
            return poly_pow(base, e)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, den, p3 = self.take()
                if k3 != "int":
                    raise ParseError(f"expected denominator at position {p3}", position=p3)
                if den == 0:
                    raise ParseError(f"zero denominator at position {p3}", position=p3)
                return MPoly.const(self.n, Fraction(val, den))
            return MPoly.const(self.n, val)
        if kind == "id":
            if val not in self.index:
                raise UnknownVariable(f"unknown variable {val!r} at position {pos}", position=pos)
            return MPoly.var(self.n, self.index[val])
        if kind == "op" and val == "(":
            inner = self.poly()
            self.expect_op(")")
            return inner
        if kind == "eof":
            raise ParseError("unexpected end of input", position=pos)
        raise ParseError(f"unexpected {val!r} at position {pos}", position=pos)


def parse_poly(text: str, var_names) -> MPoly:
    """Parse ``text`` into an MPoly over the ordered ``var_names``."""
    if not var_names:
        raise ValueError("need at least one variable")
    return _Parser(text, var_names).parse()
