"""Meromorphic continuation of I(s) = integral of f^s over C.

Taylor data at positive integers comes from quadrature of f^s log^l f; the
recurrence, solved for I(s), carries it down to non-positive integers and to
arbitrary real points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OrderExhausted, PoleAt
from .exact import LaurentSeries, RatFunc, ratfunc_expand
from .moments import Domain
from .mpoly import MPoly
from .quadrature import QuadConfig, integrate_power_log
from .recurrence import Recurrence, normalize_recurrence

S_SAFE = 1.0
MARGIN = 2
MAX_WORK_ORDER = 40
#: |c_0(s)| below this fraction of max_i |c_i(s)| counts as a zero at non-integer s
C0_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class LaurentExpansion:
    s0: int
    min_exp: int
    coeffs: tuple
    trunc_order: int
    err_estimate: float

    def coeff(self, k):
        if k > self.trunc_order:
            raise IndexError(f"exponent {k} beyond truncation order {self.trunc_order}")
        if k < self.min_exp:
            return 0.0
        return self.coeffs[k - self.min_exp]

    def __getitem__(self, k):
        return self.coeff(k)

    @property
    def pole_order(self) -> int:
        return max(0, -self.min_exp)

    def to_json(self):
        return {"s0": self.s0, "min_exp": self.min_exp, "coeffs": list(self.coeffs),
                "err": self.err_estimate}

    @classmethod
    def from_json(cls, obj):
        coeffs = tuple(float(c) for c in obj["coeffs"])
        return cls(int(obj["s0"]), int(obj["min_exp"]), coeffs,
                   int(obj["min_exp"]) + len(coeffs) - 1, float(obj["err"]))

    def series(self) -> LaurentSeries:
        return LaurentSeries(self.min_exp, self.coeffs, self.trunc_order, exact=False)


@dataclass(frozen=True)
class PoleRecord:
    location: int
    order: int
    leading_coeff: float

    def to_json(self):
        return {"location": self.location, "order": self.order, "leading_coeff": self.leading_coeff}


@dataclass
class _Node:
    series: LaurentSeries
    err: float


def _as_normalized(rec: Recurrence) -> Recurrence:
    if rec.coeffs[0].is_zero() or rec.coeffs[-1].is_zero():
        rec = normalize_recurrence(rec)
    if rec.order < 1:
        raise ValueError("continuation needs a recurrence of order >= 1")
    return rec


def _significant(series: LaurentSeries, err: float) -> LaurentSeries:
    """Drop leading negative-exponent coefficients not above the error estimate."""
    cs = list(series.coeffs)
    lo = series.min_exp
    while lo < 0 and cs and abs(cs[0]) <= err:
        cs.pop(0)
        lo += 1
    if not cs:
        return LaurentSeries(lo, [0.0], max(lo, series.trunc_order), exact=False)
    return LaurentSeries(lo, cs, series.trunc_order, exact=False, zero_tol=0.0)


class Continuation:
    """Caches base expansions for one (f, domain, recurrence, quadrature config)."""

    def __init__(self, f: MPoly, d: Domain, rec: Recurrence, cfg: QuadConfig = QuadConfig(),
                 max_work_order: int = MAX_WORK_ORDER):
        self.f = f
        self.d = d
        self.rec = _as_normalized(rec)
        self.cfg = cfg
        self.max_work_order = max_work_order
        c0 = self.rec.coeffs[0]
        self.l = [RatFunc(-c, c0) for c in self.rec.coeffs[1:]]
        self._base: dict = {}

    @property
    def m(self) -> int:
        return self.rec.order

    def mu(self, sigma: int) -> int:
        """Multiplicity of sigma as a root of c_0 (exact)."""
        return self.rec.coeffs[0].root_multiplicity(Fraction(sigma))

    def base(self, s0: int, K: int) -> LaurentExpansion:
        cached = self._base.get(s0)
        if cached is None or cached.trunc_order < K:
            cached = base_expansion(self.f, self.d, s0, K, self.cfg)
            self._base[s0] = cached
        coeffs = cached.coeffs[:K + 1]
        return LaurentExpansion(s0, 0, coeffs, K, cached.err_estimate)

    def laurent_at(self, s0: int, K: int, base_from: int = 1) -> LaurentExpansion:
        """Laurent expansion at integer s0 through exponent K.

        Integers >= ``base_from`` (which must be positive) use quadrature; the
        others are reached by descent through I(s) = sum_i l_i(s) I(s+i).
        """
        if base_from < 1:
            raise ValueError("base data must sit at positive integers")
        if s0 >= base_from:
            return self.base(s0, K)
        m = self.m
        # pass 1: the descent path and the zeros of c_0 along it
        path = list(range(s0, base_from))
        mus = {sigma: self.mu(sigma) for sigma in path}
        # pass 2: working orders, propagated upward from the target
        need = {s0: K}
        for sigma in path:
            req = need.get(sigma, K) + mus[sigma]
            for i in range(1, m + 1):
                need[sigma + i] = max(need.get(sigma + i, -10**9), req)
        work = {s: need[s] + MARGIN for s in need}
        top = max(work.values())
        if top > self.max_work_order:
            raise OrderExhausted(f"working order {top} exceeds cap {self.max_work_order}")
        # pass 3: base data, then combine downward
        nodes = {}
        for s in range(base_from, base_from + m):
            b = self.base(s, work[s])
            nodes[s] = _Node(b.series(), b.err_estimate)
        for sigma in reversed(path):
            acc = None
            err = 0.0
            for i, li in enumerate(self.l, start=1):
                if li.num.is_zero():
                    continue
                node = nodes[sigma + i]
                order = work[sigma] - (node.series.min_exp if not node.series.is_zero() else 0) + 1
                lexp = ratfunc_expand(li, sigma, order)
                term = lexp.to_float() * node.series
                acc = term if acc is None else acc + term
                err += sum(abs(float(c)) for c in lexp.coeffs) * node.err
            if acc is None:
                acc = LaurentSeries(0, [0.0], work[sigma], exact=False)
            nodes[sigma] = _Node(acc, err)
        out = nodes[s0]
        series = _significant(out.series.truncate(K), out.err)
        if series.trunc_order < K:
            raise OrderExhausted(f"only {series.trunc_order} orders available at s0={s0}, wanted {K}")
        if series.is_zero():
            coeffs = (0.0,) * (K - series.min_exp + 1)
        else:
            coeffs = tuple(series.coeffs)
        return LaurentExpansion(s0, series.min_exp, coeffs, K, out.err)

    def evaluate(self, s: float):
        """(value, err_estimate) of the continued I at real s."""
        s = float(s)
        if s > S_SAFE:
            res = integrate_power_log(self.f, s, 0, self.d, self.cfg, strict=True)
            return res.value, res.err_estimate
        if s == math.floor(s):
            exp = self.laurent_at(int(s), 0)
            if exp.min_exp < 0:
                raise PoleAt(f"I(s) has a pole of order {-exp.min_exp} at s = {int(s)}", location=int(s))
            return exp.coeff(0), exp.err_estimate
        M = math.floor(S_SAFE - s) + 1
        m = self.m
        vals = {}
        errs = {}
        for i in range(m):
            res = integrate_power_log(self.f, s + M + i, 0, self.d, self.cfg, strict=True)
            vals[M + i] = res.value
            errs[M + i] = res.err_estimate
        cs = self.rec.coeffs
        for k in range(M - 1, -1, -1):
            sigma = s + k
            c_vals = [c(sigma) for c in cs]
            scale = max(abs(c) for c in c_vals)
            if abs(c_vals[0]) <= C0_ZERO_TOL * scale:
                raise PoleAt(f"c_0 vanishes at non-integer s = {sigma!r}", location=sigma)
            v = 0.0
            e = 0.0
            for i in range(1, m + 1):
                li = -c_vals[i] / c_vals[0]
                v += li * vals[k + i]
                e += abs(li) * errs[k + i]
            vals[k] = v
            errs[k] = e
        return vals[0], errs[0]

    def poles(self, s_min: int):
        out = []
        for s0 in range(s_min, 0):
            exp = self.laurent_at(s0, 0)
            if exp.min_exp < 0:
                out.append(PoleRecord(s0, -exp.min_exp, exp.coeff(exp.min_exp)))
        return out


def base_expansion(f: MPoly, d: Domain, s0: int, K: int, cfg: QuadConfig = QuadConfig()) -> LaurentExpansion:
    """Taylor coefficients of I at a positive integer: a_l = (integral of f^s0 log^l f) / l!."""
    if s0 < 1:
        raise ValueError("s0 must be a positive integer")
    if K < 0:
        raise ValueError("K must be >= 0")
    coeffs, err = [], 0.0
    for l in range(K + 1):
        res = integrate_power_log(f, s0, l, d, cfg, strict=True)
        fact = math.factorial(l)
        coeffs.append(res.value / fact)
        err = max(err, res.err_estimate / fact)
    return LaurentExpansion(s0, 0, tuple(coeffs), K, err)


def laurent_at(f, d, rec, s0: int, K: int, cfg: QuadConfig = QuadConfig(), base_from: int = 1,
               max_work_order: int = MAX_WORK_ORDER) -> LaurentExpansion:
    return Continuation(f, d, rec, cfg, max_work_order).laurent_at(s0, K, base_from)


def evaluate_continued(f, d, rec, s: float, cfg: QuadConfig = QuadConfig()) -> float:
    return Continuation(f, d, rec, cfg).evaluate(s)[0]


def evaluate_continued_err(f, d, rec, s: float, cfg: QuadConfig = QuadConfig()):
    return Continuation(f, d, rec, cfg).evaluate(s)


def pole_report(f, d, rec, s_min: int, cfg: QuadConfig = QuadConfig()):
    if s_min > -1:
        raise ValueError("s_min must be a negative integer")
    return Continuation(f, d, rec, cfg).poles(s_min)
