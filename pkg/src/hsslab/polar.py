"""Log-space quadrature in polar coordinates ``t_j = arctanh(lambda_j)``.

In these coordinates the distance from the origin is ``|t|`` and the
hyperbolic volume of an invariant region is, up to one global constant,

    prod sinh(t_j)^(2b+1) cosh(t_j)^(2 genus - 2b - 3) prod_{i<j} (tanh^2 t_i - tanh^2 t_j)^a

on the chamber ``t_1 > ... > t_r > 0``.  Every accumulation goes through
``logsumexp``; plain sums underflow or overflow beyond radius ~10.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .jordan import DomainInvariants

LOG2 = np.log(2.0)
GAUSS_ORDER = 16


def log_cosh(t):
    t = np.abs(t)
    return t + np.log1p(np.exp(-2 * t)) - LOG2


def log_sinh(t):
    """log sinh t for t > 0 (-inf at 0)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return t + np.log(-np.expm1(-2 * t)) - LOG2


def log_tanh_sq_diff(a, b):
    """``log(tanh^2 a - tanh^2 b)`` for a > b >= 0, stable for large arguments."""
    return log_sinh(a - b) + log_sinh(a + b) - 2 * log_cosh(a) - 2 * log_cosh(b)


def log_density_t(inv: DomainInvariants, t) -> np.ndarray:
    """Log volume density in t-coordinates; ``t`` has shape ``(..., r)``."""
    t = np.asarray(t, dtype=float)
    ls, lc = log_sinh(t), log_cosh(t)
    out = np.sum((2 * inv.b + 1) * ls + (2 * inv.genus - 2 * inv.b - 3) * lc, axis=-1)
    if inv.a:
        r = t.shape[-1]
        for i in range(r):
            for j in range(i + 1, r):
                out = out + inv.a * log_tanh_sq_diff(t[..., i], t[..., j])
    return out


def diastasis_t(t) -> np.ndarray:
    """``D_0 = -sum log(1 - tanh^2 t_j) = 2 sum log cosh t_j``."""
    return 2 * np.sum(log_cosh(np.asarray(t, dtype=float)), axis=-1)


def gauss_panels(a: float, b: float, panels: int, order: int = GAUSS_ORDER):
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _panels_for(length: float, width: float = 0.5) -> int:
    return max(1, int(np.ceil(length / width)))


def shell_nodes(inv: DomainInvariants, lo: float, hi: float, angular_panels: int = 8):
    """Nodes covering ``{t in chamber : lo <= t_1 < hi}`` (rank <= 2).

    Returns ``t`` of shape ``(N, r)`` and log quadrature weights.
    """
    t1, w1 = gauss_panels(lo, hi, _panels_for(hi - lo))
    if inv.r == 1:
        return t1[:, None], np.log(w1)
    if inv.r != 2:
        raise ValueError("shell quadrature is implemented for rank <= 2")
    u, wu = gauss_panels(0.0, 1.0, angular_panels)
    T1 = np.repeat(t1, u.size)
    T2 = T1 * np.tile(u, t1.size)
    logw = np.log(np.repeat(w1, u.size) * np.tile(wu, t1.size) * T1)
    return np.stack([T1, T2], axis=-1), logw


def radial_nodes(R: float, breaks=()):
    """Gauss nodes on [0, R] with panel edges at ``breaks``."""
    edges = sorted({0.0, float(R), *[float(b) for b in breaks if 0 < b < R]})
    parts = [gauss_panels(a, b, _panels_for(b - a)) for a, b in zip(edges[:-1], edges[1:])]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def ball_nodes(inv: DomainInvariants, R: float, angular_panels: int = 8, directions=None, breaks=()):
    """Nodes covering the geodesic ball ``|t| < R`` inside the chamber.

    Rank 1 and 2 use tensor Gauss quadrature in (rho, theta); higher rank
    needs ``directions`` (unit vectors in the chamber, equal weights).
    Returns ``t``, log weights (chamber-surface measure included) and ``rho``.
    """
    rho, wr = radial_nodes(R, breaks)
    if inv.r == 1:
        return rho[:, None], np.log(wr), rho
    if inv.r == 2:
        th, wt = gauss_panels(0.0, np.pi / 4, angular_panels)
        P = np.repeat(rho, th.size)
        TH = np.tile(th, rho.size)
        t = np.stack([P * np.cos(TH), P * np.sin(TH)], axis=-1)
        logw = np.log(np.repeat(wr, th.size) * np.tile(wt, rho.size) * P)
        return t, logw, P
    if directions is None:
        raise ValueError("rank >= 3 needs sampled chamber directions")
    k = len(directions)
    P = np.repeat(rho, k)
    t = P[:, None] * np.tile(directions, (rho.size, 1))
    logw = np.log(np.repeat(wr, k) / k) + (inv.r - 1) * np.log(P)
    return t, logw, P


def chamber_directions(r: int, count: int, rng) -> np.ndarray:
    """Uniform unit vectors in ``t_1 > ... > t_r > 0`` (sorted |Gaussian|)."""
    g = np.abs(rng.normal(size=(count, r)))
    g = -np.sort(-g, axis=1)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def log_integral(logw, logf) -> float:
    return float(logsumexp(logw + logf))
