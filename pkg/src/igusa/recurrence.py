"""Guessing and manipulating linear recurrences sum_i c_i(s) I(s+i) = 0.

Recurrences are found as nullspace vectors of exact linear systems built from
the moment sequence; ODEs for the generating series J(t) = sum I(l) t^l are
found the same way and converted to recurrences.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import AmbiguousRelation, InsufficientMoments, NotFound
from .exact import UniPoly, poly_gcd_many, rat_str, to_rat
from .linalg import nullspace

SLACK = 5


@dataclass(frozen=True)
class Recurrence:
    """Coefficients c_0..c_m (UniPoly in s) of sum_i c_i(s) I(s+i) = 0."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(c if isinstance(c, UniPoly) else UniPoly(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if not cs:
            raise ValueError("a recurrence needs at least one coefficient")
        if all(c.is_zero() for c in cs):
            raise ValueError("trivial recurrence")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    def residual(self, values, k):
        """sum_i c_i(k) * values[k+i]."""
        return sum((c(k) * values[k + i] for i, c in enumerate(self.coeffs)), Fraction(0))

    def to_json(self):
        return {"coeffs": [[rat_str(x) for x in c.coeffs] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(UniPoly([to_rat(x) for x in c]) for c in obj["coeffs"]))

    def __str__(self):
        return " + ".join(f"({c})*I(s+{i})" for i, c in enumerate(self.coeffs))

    def same_up_to_scalar(self, other) -> bool:
        if self.order != other.order:
            return False
        ratio = None
        for a, b in zip(self.coeffs, other.coeffs):
            if a.is_zero() != b.is_zero() or a.degree != b.degree:
                return False
            if a.is_zero():
                continue
            r = a.lc / b.lc
            if ratio is None:
                ratio = r
            if a != b * ratio:
                return False
        return True


@dataclass(frozen=True)
class OdeRelation:
    """Coefficients q_0..q_r (UniPoly in t) of sum_i q_i(t) J^(i)(t) = 0."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(c if isinstance(c, UniPoly) else UniPoly(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2 or cs[-1].is_zero():
            raise ValueError("ODE needs order >= 1 and nonzero leading coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    def to_json(self):
        return {"coeffs": [[rat_str(x) for x in c.coeffs] for c in self.coeffs]}

    def __str__(self):
        return " + ".join(f"({c.format('t')})*J^({i})" for i, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class VerificationReport:
    checked: int
    failures: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures

    def to_json(self):
        return {"checked": self.checked, "failures": list(self.failures), "verified": self.ok}


def _strip_content(polys):
    """Divide out the common polynomial factor and rational content; the last nonzero gets positive lc."""
    g = poly_gcd_many([p for p in polys if not p.is_zero()])
    # a lone coefficient keeps its roots: they are where the relation says anything
    if g.degree > 0 and sum(not p.is_zero() for p in polys) > 1:
        polys = [p // g for p in polys]
    nonzero = [p for p in polys if not p.is_zero()]
    num = 0
    den = 1
    for p in nonzero:
        for c in p.coeffs:
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
    scale = Fraction(den, num)
    if nonzero[-1].lc < 0:
        scale = -scale
    return [p * scale for p in polys]


def normalize_recurrence(rec: Recurrence) -> Recurrence:
    """Shift so c_0 is nonzero, drop vanishing top coefficients, remove content.

    A relation may collapse to a single term c_0(s) I(s) = 0 (order 0).
    """
    cs = list(rec.coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    i0 = next(i for i, c in enumerate(cs) if not c.is_zero())
    if i0:
        cs = [c.taylor_shift(-i0) for c in cs[i0:]]
    return Recurrence(tuple(_strip_content(cs)))


def verify_recurrence(rec: Recurrence, mom, start: int = 0) -> VerificationReport:
    """Exact check of the recurrence at every index k >= start the moment data covers."""
    values = getattr(mom, "values", mom)
    last = len(values) - 1 - rec.order
    failures = tuple(k for k in range(start, last + 1) if rec.residual(values, k) != 0)
    return VerificationReport(max(0, last + 1 - start), failures)


def _diagonal(max_order, max_degree, min_order=1):
    """(order, degree) pairs by increasing order+degree, then order."""
    for total in range(min_order, max_order + max_degree + 1):
        for m in range(min_order, max_order + 1):
            d = total - m
            if 0 <= d <= max_degree:
                yield m, d


def _vector_to_polys(vec, m, d):
    return [UniPoly(vec[i * (d + 1):(i + 1) * (d + 1)]) for i in range(m + 1)]


def _pick(basis, m, d, build):
    """Reduce a nullspace basis to one relation, preferring smallest degree."""
    cands = [build(_vector_to_polys(v, m, d)) for v in basis]
    cands.sort(key=lambda r: (r.order, r.degree, sum(len(c.coeffs) for c in r.coeffs)))
    distinct = []
    for c in cands:
        if not any(c.same_up_to_scalar(x) for x in distinct):
            distinct.append(c)
    return distinct


def guess_recurrence(mom, max_order: int = 4, max_degree: int = 6, verify_count: int = 20,
                     strict: bool = True) -> Recurrence:
    """Find the minimal recurrence annihilating the moments.

    Candidates (m, deg) are tried along diagonals of increasing m + deg.  For
    each, (m+1)(deg+1) + 5 equations are solved exactly; a nullspace vector is
    accepted once it also annihilates ``verify_count`` held-out moments.
    """
    values = list(getattr(mom, "values", mom))
    need = (max_order + 1) * (max_degree + 1) + max_order + verify_count + SLACK
    smallest = 2 * 1 + SLACK + 1 + verify_count
    if len(values) < smallest:
        raise InsufficientMoments(f"need at least {smallest} moments, got {len(values)}")
    tried_any = False
    for m, d in _diagonal(max_order, max_degree):
        neq = (m + 1) * (d + 1) + SLACK
        if neq + m + verify_count > len(values):
            continue
        tried_any = True
        rows = []
        for k in range(neq):
            row = []
            for i in range(m + 1):
                kp = Fraction(1)
                for _ in range(d + 1):
                    row.append(kp * values[k + i])
                    kp *= k
            rows.append(row)
        basis = nullspace(rows)
        if not basis:
            continue
        good = []
        for rec in _pick(basis, m, d, lambda ps: Recurrence(tuple(ps))):
            try:
                rec = normalize_recurrence(rec)
            except NotFound:
                continue
            held = range(neq, len(values) - rec.order)
            if all(rec.residual(values, k) == 0 for k in held):
                good.append(rec)
        if not good:
            continue
        distinct = []
        for r in good:
            if not any(r.same_up_to_scalar(x) for x in distinct):
                distinct.append(r)
        if len(distinct) > 1 and strict:
            raise AmbiguousRelation(
                f"{len(distinct)} independent relations at order {m}, degree {d}",
                recurrence=distinct[0])
        return distinct[0]
    if not tried_any and len(values) < need:
        raise InsufficientMoments(f"need {need} moments for the full search box, got {len(values)}")
    raise NotFound(f"no recurrence with order <= {max_order}, degree <= {max_degree}")


def _falling(s_shift, i):
    """prod_{k=1..i} (s + s_shift + k) as a polynomial in s."""
    p = UniPoly.const(1)
    for k in range(1, i + 1):
        p = p * UniPoly((s_shift + k, 1))
    return p


def _normalize_ode(polys) -> OdeRelation:
    polys = list(polys)
    while polys and polys[-1].is_zero():
        polys.pop()
    if len(polys) < 2:
        raise NotFound("relation has no derivative term")
    return OdeRelation(tuple(_strip_content(polys)))


def guess_ode(series, max_order: int = 3, max_degree: int = 4) -> OdeRelation:
    """Minimal ODE sum q_i(t) J^(i) = 0 satisfied by the truncated series J.

    Every coefficient of t^s that the series determines is imposed exactly.
    """
    values = [to_rat(v) for v in getattr(series, "values", series)]
    need = (max_order + 1) * (max_degree + 1) + max_order + SLACK
    if len(values) < need:
        raise InsufficientMoments(f"need {need} series terms, got {len(values)}")
    for r, d in _diagonal(max_order, max_degree):
        neq = len(values) - r
        if neq < (r + 1) * (d + 1) + SLACK:
            continue
        rows = []
        for s in range(neq):
            row = []
            for i in range(r + 1):
                for j in range(d + 1):
                    idx = s - j + i
                    if s < j:
                        row.append(Fraction(0))
                        continue
                    ff = 1
                    for k in range(i):
                        ff *= idx - k
                    row.append(ff * values[idx])
            rows.append(row)
        basis = nullspace(rows)
        if not basis:
            continue
        cands = []
        for v in basis:
            try:
                cands.append(_normalize_ode(_vector_to_polys(v, r, d)))
            except NotFound:
                continue
        cands = [c for c in cands if c.order == r]
        if cands:
            cands.sort(key=lambda o: (o.degree, sum(len(c.coeffs) for c in o.coeffs)))
            return cands[0]
    raise NotFound(f"no ODE with order <= {max_order}, degree <= {max_degree}")


def ode_to_recurrence(ode: OdeRelation) -> Recurrence:
    """Equate powers of t in sum_i q_i(t) J^(i)(t) = 0 with J = sum I(l) t^l.

    The (i, j) term a_ij t^j J^(i) contributes a_ij (s-j+1)...(s-j+i) I(s+i-j)
    to the coefficient of t^s; shifting s by the largest j gives standard form.
    """
    d = ode.degree
    r = ode.order
    out = [UniPoly() for _ in range(r + d + 1)]
    for i, q in enumerate(ode.coeffs):
        for j, a in enumerate(q.coeffs):
            if a == 0:
                continue
            # P_ij(s + d) = prod_{k=1..i} (s + d - j + k)
            out[i - j + d] = out[i - j + d] + _falling(d - j, i) * a
    return normalize_recurrence(Recurrence(tuple(out)))


def scale_recurrence(rec: Recurrence, lam) -> Recurrence:
    """Recurrence for the moments of lam * f given one for f."""
    lam = to_rat(lam)
    m = rec.order
    return normalize_recurrence(Recurrence(tuple(c * lam ** (m - i) for i, c in enumerate(rec.coeffs))))
