"""Simplicial domains and exact moments I(k) = integral of f^k over C."""
from __future__ import annotations

import hashlib
import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .errors import DegenerateSimplex, DomainFormatError
from .exact import rat_str, to_rat
from .mpoly import MPoly


def exact_det(rows) -> Fraction:
    """Determinant of a square Fraction matrix by Gaussian elimination."""
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            fac = a[r][col] * inv
            if fac:
                for c in range(col, n):
                    a[r][c] -= fac * a[col][c]
    return det


@dataclass(frozen=True)
class SimplexDomain:
    vertices: tuple
    sign: int = 1

    def __post_init__(self):
        verts = tuple(tuple(to_rat(c) for c in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.sign not in (1, -1):
            raise DomainFormatError(f"sign must be +1 or -1, got {self.sign}")
        n = len(verts) - 1
        if n < 1 or any(len(v) != n for v in verts):
            raise DomainFormatError(f"an affine {n}-simplex needs {n + 1} points in Q^{n}")

    @property
    def nvars(self) -> int:
        return len(self.vertices) - 1

    def edge_matrix(self):
        """Rows i, columns j: A[i][j] = v_{j+1}[i] - v_0[i]."""
        v0 = self.vertices[0]
        n = self.nvars
        return [[self.vertices[j + 1][i] - v0[i] for j in range(n)] for i in range(n)]

    @property
    def det(self) -> Fraction:
        return exact_det(self.edge_matrix())

    @property
    def volume(self) -> Fraction:
        return abs(self.det) / math.factorial(self.nvars)

    def pullback(self, f: MPoly) -> MPoly:
        """f(v0 + A y) as a polynomial in the standard-simplex coordinates y."""
        A = self.edge_matrix()
        v0 = self.vertices[0]
        lin = [MPoly.linear(v0[i], A[i]) for i in range(self.nvars)]
        return f.substitute(lin)

    def weight(self) -> Fraction:
        """sign * |det A|; raises for a degenerate piece."""
        d = self.det
        if d == 0:
            raise DegenerateSimplex(f"affinely dependent vertices {self.vertices}")
        return self.sign * abs(d)

    def barycenter(self):
        n1 = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / n1 for i in range(self.nvars))

    def to_json(self):
        return {"sign": self.sign, "vertices": [[rat_str(c) for c in v] for v in self.vertices]}


@dataclass(frozen=True)
class Domain:
    nvars: int
    pieces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise DomainFormatError("domain needs at least one piece")
        if any(p.nvars != self.nvars for p in pieces):
            raise DomainFormatError("all pieces must share nvars")

    @classmethod
    def standard(cls, n: int) -> Domain:
        verts = [tuple([0] * n)]
        for i in range(n):
            v = [0] * n
            v[i] = 1
            verts.append(tuple(v))
        return cls(n, (SimplexDomain(tuple(verts)),))

    @classmethod
    def from_json(cls, obj, nvars=None) -> Domain:
        """Accept the JSON domain object, a JSON string, or the token ``"standard"``."""
        if isinstance(obj, str):
            if obj.strip() == "standard":
                if nvars is None:
                    raise DomainFormatError("'standard' domain needs nvars")
                return cls.standard(nvars)
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise DomainFormatError(f"invalid domain JSON: {exc}") from exc
        if obj == "standard":
            return cls.from_json("standard", nvars)
        try:
            n = int(obj["nvars"])
            pieces = []
            for p in obj["pieces"]:
                if p == "standard" or p.get("vertices") == "standard":
                    sign = 1 if p == "standard" else int(p.get("sign", 1))
                    base = cls.standard(n).pieces[0]
                    pieces.append(SimplexDomain(base.vertices, sign))
                else:
                    pieces.append(SimplexDomain(tuple(tuple(v) for v in p["vertices"]),
                                                int(p.get("sign", 1))))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise DomainFormatError(f"malformed domain: {exc}") from exc
        if nvars is not None and nvars != n:
            raise DomainFormatError(f"domain has nvars={n}, expected {nvars}")
        return cls(n, tuple(pieces))

    def to_json(self):
        return {"nvars": self.nvars, "pieces": [p.to_json() for p in self.pieces]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def signed_volume(self) -> Fraction:
        return sum((p.weight() / math.factorial(self.nvars) for p in self.pieces), Fraction(0))

    def sample_points(self, count: int, seed: int = 0) -> np.ndarray:
        """Quasi-random points spread over all pieces, shape (pieces*count, n)."""
        n = self.nvars
        pts = []
        sampler = qmc.Halton(d=n, scramble=True, seed=seed)
        u = sampler.random(count)
        y = duffy_map(u)
        for p in self.pieces:
            v0 = np.array([float(c) for c in p.vertices[0]])
            A = np.array([[float(c) for c in row] for row in p.edge_matrix()])
            pts.append(v0 + y @ A.T)
        return np.vstack(pts)

    def check_disjoint(self, samples: int = 200, seed: int = 0) -> bool:
        """Sampled test that no piece's interior points fall strictly inside another piece."""
        if len(self.pieces) < 2:
            return True
        for i, p in enumerate(self.pieces):
            pts = Domain(self.nvars, (p,)).sample_points(samples, seed)
            for j, q in enumerate(self.pieces):
                if i != j and np.any(_strictly_inside(q, pts, 1e-9)):
                    return False
        return True


def _strictly_inside(piece: SimplexDomain, pts, margin):
    v0 = np.array([float(c) for c in piece.vertices[0]])
    A = np.array([[float(c) for c in row] for row in piece.edge_matrix()])
    y = np.linalg.solve(A, (pts - v0).T).T
    return np.all(y > margin, axis=1) & (y.sum(axis=1) < 1 - margin)


def duffy_map(u):
    """Map points of the unit cube onto the standard simplex: x_k = u_k * prod_{j<k}(1-u_j)."""
    u = np.asarray(u, dtype=float)
    x = np.empty_like(u)
    rest = np.ones(u.shape[:-1])
    for k in range(u.shape[-1]):
        x[..., k] = u[..., k] * rest
        rest = rest * (1.0 - u[..., k])
    return x


def duffy_jacobian(u):
    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    jac = np.ones(u.shape[:-1])
    for j in range(n - 1):
        jac = jac * (1.0 - u[..., j]) ** (n - 1 - j)
    return jac


def integrate_monomial(exponents) -> Fraction:
    """Integral of prod x_i^a_i over {x >= 0, sum x <= 1}: prod(a_i!) / (n + sum a)!."""
    n = len(exponents)
    if n < 1:
        raise ValueError("need at least one variable")
    num = 1
    for a in exponents:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(n + sum(exponents)))


def _integrate_standard(g: MPoly) -> Fraction:
    return sum((c * integrate_monomial(e) for e, c in g.terms.items()), Fraction(0))


def integrate_poly(f: MPoly, d: Domain) -> Fraction:
    """Exact signed integral of f over the pieces of d."""
    if f.nvars != d.nvars:
        raise ValueError(f"polynomial has {f.nvars} variables, domain {d.nvars}")
    total = Fraction(0)
    for piece in d.pieces:
        w = piece.weight()
        total += w * _integrate_standard(piece.pullback(f))
    return total


@dataclass(frozen=True)
class MomentSequence:
    values: tuple
    f_digest: str = ""
    domain_digest: str = ""

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def to_json(self):
        return {"values": [rat_str(v) for v in self.values],
                "f_digest": self.f_digest, "domain_digest": self.domain_digest}


def poly_digest(f: MPoly) -> str:
    return hashlib.sha256(f"{f.nvars}:{f.format()}".encode()).hexdigest()


def check_nonnegative(f: MPoly, d: Domain, samples: int = 256) -> bool:
    """Sampled nonnegativity test; warns (does not raise) on failure."""
    ev = f.float_evaluator()
    vals = ev(d.sample_points(samples))
    verts = np.array([[float(c) for c in v] for p in d.pieces for v in p.vertices])
    vals = np.concatenate([vals, ev(verts)])
    ok = bool(np.all(vals >= -1e-12))
    if not ok:
        warnings.warn(f"f appears negative on the domain (min sampled value {vals.min():.3e})",
                      RuntimeWarning, stacklevel=3)
    return ok


def moments(f: MPoly, d: Domain, N: int) -> MomentSequence:
    """Exact I(k) for k = 0..N, computed from powers of the pulled-back integrand."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if f.nvars != d.nvars:
        raise ValueError(f"polynomial has {f.nvars} variables, domain {d.nvars}")
    check_nonnegative(f, d)
    values = [Fraction(0)] * (N + 1)
    for piece in d.pieces:
        w = piece.weight()
        g = piece.pullback(f)
        power = MPoly.const(d.nvars, 1)
        for k in range(N + 1):
            if k:
                power = power * g
            values[k] += w * _integrate_standard(power)
    return MomentSequence(tuple(values), poly_digest(f), d.digest())


def decompose_union(n_count: int, m_count: int):
    """Sign strings (a_1..a_n, b_1..b_m) with all a's = +1 or all b's = +1.

    The cells {a_i f_i > 0, b_j g_j > 0} partition U1 u U2 up to measure zero.
    Order is lexicographic with +1 before -1.
    """
    if n_count < 1 or m_count < 1:
        raise ValueError("both counts must be >= 1")
    out = []
    for e in itertools.product((1, -1), repeat=n_count + m_count):
        a, b = e[:n_count], e[n_count:]
        if all(x == 1 for x in a) or all(x == 1 for x in b):
            out.append(e)
    return out


def sup_estimate(f: MPoly, d: Domain, samples: int = 256) -> float:
    """Heuristic bound R with |f| <= R on d: sampled max of |f|, inflated by 1.1."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ev = f.float_evaluator()
    pts = [np.array([[float(c) for c in v] for v in p.vertices]) for p in d.pieces]
    pts.append(np.array([[float(c) for c in p.barycenter()] for p in d.pieces]))
    pts.append(d.sample_points(samples))
    vals = np.abs(ev(np.vstack(pts)))
    return 1.1 * float(vals.max())


def barycentric_split(piece: SimplexDomain, point=None) -> list[SimplexDomain]:
    """Cone an interior point to every facet, giving n+1 simplices that tile the piece."""
    if point is None:
        point = piece.barycenter()
    point = tuple(to_rat(c) for c in point)
    out = []
    for i in range(len(piece.vertices)):
        verts = list(piece.vertices)
        verts[i] = point
        out.append(SimplexDomain(tuple(verts), piece.sign))
    return out
