"""Adaptive tensor Gauss-Legendre quadrature over simplicial domains.

Each simplex is pulled back to the unit cube by the Duffy map; cells of the
cube are bisected one axis at a time, always along the axis whose bisection
changes the cell estimate most.  This keeps refinement towards a zero set of
``f`` lying on a cube face linear in depth instead of exponential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NegativeIntegrand, NotConverged, RadiusExceeded
from .moments import Domain, duffy_jacobian, duffy_map, sup_estimate
from .mpoly import MPoly

EPS = np.finfo(float).eps
ROUNDOFF = 64 * EPS
# below this relative width the node coordinates themselves are rounding noise
RESOLUTION = 4096 * EPS


@dataclass(frozen=True)
class QuadConfig:
    tol: float = 1e-12
    max_depth: int = 48
    base_rule: int = 10

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.base_rule < 2:
            raise ValueError("base_rule must be >= 2")


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    cells_used: int
    converged: bool

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be >= 0")


@lru_cache(maxsize=None)
def gauss_legendre01(p: int):
    """Nodes and weights of the p-point Gauss-Legendre rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(p)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def _tensor_rule(p: int, dim: int):
    x, w = gauss_legendre01(p)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return nodes, weights


def _rule_on_cells(func, lo, hi, p):
    """Tensor rule applied to a batch of boxes; returns (estimates, estimates of |integrand|)."""
    dim = lo.shape[1]
    nodes, weights = _tensor_rule(p, dim)
    width = hi - lo
    pts = lo[:, None, :] + width[:, None, :] * nodes[None, :, :]
    vals = func(pts.reshape(-1, dim)).reshape(len(lo), -1)
    vol = np.prod(width, axis=1)
    return vol * (vals @ weights), vol * (np.abs(vals) @ weights)


def adaptive_cube(func, dim, cfg: QuadConfig, tol=None):
    """Integrate ``func`` over [0,1]^dim.

    ``func(U)`` maps points of shape (M, dim) to integrand values.  A cell is
    accepted once bisecting it changes its estimate by at most its share
    ``tol * volume`` (or by rounding noise); cells reaching ``cfg.max_depth``
    are accepted as they are and their error counted.

    Returns (value, err, cells, converged).
    """
    tol = cfg.tol if tol is None else tol
    p = cfg.base_rule
    lo = np.zeros((1, dim))
    hi = np.ones((1, dim))
    depth = np.zeros((1, dim), dtype=np.int64)
    est, _ = _rule_on_cells(func, lo, hi, p)
    accepted_vals = []
    accepted_errs = []
    accepted_mags = []
    cells = 0
    while len(lo):
        # bisect every active cell along every axis
        halves = []
        mag = np.zeros(len(lo))
        for k in range(dim):
            mid = 0.5 * (lo[:, k] + hi[:, k])
            hi_l = hi.copy()
            hi_l[:, k] = mid
            lo_r = lo.copy()
            lo_r[:, k] = mid
            left, mag_l = _rule_on_cells(func, lo, hi_l, p)
            right, mag_r = _rule_on_cells(func, lo_r, hi, p)
            mag = np.maximum(mag, mag_l + mag_r)
            halves.append((left, right))
        refined = np.stack([l + r for l, r in halves], axis=1)
        diffs = np.abs(refined - est[:, None])
        worst = np.argmax(diffs, axis=1)
        err = diffs[np.arange(len(lo)), worst]
        vol = np.prod(hi - lo, axis=1)
        # differences at rounding level cannot be reduced by refinement
        need = err > np.maximum(tol * vol, ROUNDOFF * mag)
        rows = np.arange(len(lo))
        width = hi[rows, worst] - lo[rows, worst]
        scale = np.maximum(np.abs(lo[rows, worst]), np.abs(hi[rows, worst]))
        at_cap = (depth[rows, worst] >= cfg.max_depth) | (width <= RESOLUTION * scale)
        done = ~need | at_cap
        best = refined[np.arange(len(lo)), worst]
        accepted_vals.extend(best[done].tolist())
        accepted_errs.extend(err[done].tolist())
        accepted_mags.extend(mag[done].tolist())
        cells += int(done.sum())
        split = ~done
        if not np.any(split):
            break
        idx = np.nonzero(split)[0]
        ax = worst[idx]
        lo_s, hi_s, dep_s = lo[idx], hi[idx], depth[idx]
        mid = 0.5 * (lo_s[np.arange(len(idx)), ax] + hi_s[np.arange(len(idx)), ax])
        lo_left, hi_left = lo_s.copy(), hi_s.copy()
        hi_left[np.arange(len(idx)), ax] = mid
        lo_right, hi_right = lo_s.copy(), hi_s.copy()
        lo_right[np.arange(len(idx)), ax] = mid
        dep_new = dep_s.copy()
        dep_new[np.arange(len(idx)), ax] += 1
        left_est = np.array([halves[a][0][i] for a, i in zip(ax, idx)])
        right_est = np.array([halves[a][1][i] for a, i in zip(ax, idx)])
        lo = np.vstack([lo_left, lo_right])
        hi = np.vstack([hi_left, hi_right])
        depth = np.vstack([dep_new, dep_new])
        est = np.concatenate([left_est, right_est])
    value = math.fsum(accepted_vals)
    err = math.fsum(accepted_errs)
    converged = bool(err <= tol)
    # accumulated rounding is part of the reported error but not of the test
    err += ROUNDOFF * math.fsum(accepted_mags)
    err = float(err)
    return value, err, cells, converged


def _piece_arrays(piece):
    v0 = np.array([float(c) for c in piece.vertices[0]])
    A = np.array([[float(c) for c in row] for row in piece.edge_matrix()])
    w = float(piece.weight())
    return v0, A, w


def _integrate_domain(make_func, f: MPoly, d: Domain, cfg: QuadConfig, extra_dims=0):
    """Sum adaptive integrals over the pieces; ``make_func(fvals, T)`` builds the integrand."""
    if f.nvars != d.nvars:
        raise ValueError(f"polynomial has {f.nvars} variables, domain {d.nvars}")
    ev = f.float_evaluator()
    n = d.nvars
    total, err, cells, ok = [], 0.0, 0, True
    piece_tol = cfg.tol / len(d.pieces)
    for piece in d.pieces:
        v0, A, w = _piece_arrays(piece)
        scale = abs(w)

        def func(U, v0=v0, A=A, w=w):
            u = U[:, :n]
            x = v0 + duffy_map(u) @ A.T
            fx = ev(x)
            if np.any(fx < -cfg.tol):
                raise NegativeIntegrand(f"f = {fx.min():.3e} < 0 at a quadrature node")
            fx = np.where(fx < 0, 0.0, fx)
            vals = make_func(fx, U[:, n:]) * duffy_jacobian(u) * w
            return vals

        v, e, c, conv = adaptive_cube(func, n + extra_dims, cfg, tol=piece_tol / scale)
        total.append(v)
        err += e
        cells += c
        ok &= conv
    return QuadResult(math.fsum(total), float(err), cells, bool(ok and err <= cfg.tol))


def _finish(res: QuadResult, what: str, strict: bool) -> QuadResult:
    if strict and not res.converged:
        raise NotConverged(f"{what}: err {res.err_estimate:.3e} after {res.cells_used} cells", result=res)
    return res


def _power_log(fx, sigma, l):
    out = np.zeros_like(fx)
    pos = fx > 0
    fp = fx[pos]
    term = fp ** sigma
    if l:
        term = term * np.log(fp) ** l
    out[pos] = term
    return out


def integrate_power_log(f: MPoly, sigma: float, l: int, d: Domain, cfg: QuadConfig = QuadConfig(),
                        strict: bool = False) -> QuadResult:
    """Approximate the integral of f^sigma * log(f)^l over d.

    With ``strict`` a non-converged result raises NotConverged (the result is
    attached to the exception); otherwise it is returned with converged=False.
    """
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    if l < 0:
        raise ValueError("l must be >= 0")
    res = _integrate_domain(lambda fx, T: _power_log(fx, sigma, l), f, d, cfg)
    return _finish(res, "integrate_power_log", strict)


def log_t_integrand(fx, tau):
    """(f - 1) / ((f - 1) t + 1) with t = 1 - tau; its integral over tau in [0,1] is log f.

    Written as (f - 1) / (f + tau (1 - f)) so the singular corner f = 0, t = 1
    sits at tau = 0, where the coordinates carry full relative precision.
    """
    return (fx - 1.0) / (fx + tau * (1.0 - fx))


def integrate_box_rep(f: MPoly, s0: int, l: int, d: Domain, cfg: QuadConfig = QuadConfig(),
                      strict: bool = False) -> QuadResult:
    """Integral of f^s0 * prod_j (f-1)/((f-1) t_j + 1) over d x [0,1]^l.

    Equals the log-power integral with sigma = s0, but with every factor bounded.
    """
    if s0 < 1:
        raise ValueError("s0 must be a positive integer")
    if l < 0:
        raise ValueError("l must be >= 0")

    def make(fx, T):
        out = fx ** s0
        for j in range(l):
            out = out * log_t_integrand(fx, T[:, j])
        return out

    res = _integrate_domain(make, f, d, cfg, extra_dims=l)
    return _finish(res, "integrate_box_rep", strict)


def gauss_log(fx, points: int = 64):
    """log f via Gauss quadrature of the t-integral (vectorised over fx)."""
    x, w = gauss_legendre01(points)
    fx = np.asarray(fx, dtype=float)
    return log_t_integrand(fx[..., None], x) @ w


def j_value(f: MPoly, t: float, d: Domain, cfg: QuadConfig = QuadConfig(), R=None,
            strict: bool = False) -> QuadResult:
    """J(t) = integral of 1/(1 - t f) over d, for |t| below 1/sup|f|."""
    if R is None:
        R = sup_estimate(f, d, 256)
    if abs(t) * R >= 1:
        raise RadiusExceeded(f"|t| * R = {abs(t) * R:.6g} >= 1")
    ev = f.float_evaluator()
    n = d.nvars
    total, err, cells, ok = [], 0.0, 0, True
    for piece in d.pieces:
        v0, A, w = _piece_arrays(piece)

        def func(U, v0=v0, A=A, w=w):
            x = v0 + duffy_map(U) @ A.T
            return w * duffy_jacobian(U) / (1.0 - t * ev(x))

        v, e, c, conv = adaptive_cube(func, n, cfg, tol=cfg.tol / len(d.pieces) / abs(w))
        total.append(v)
        err += e
        cells += c
        ok &= conv
    return _finish(QuadResult(math.fsum(total), float(err), cells, bool(ok)), "j_value", strict)
