r"""Diastasis, hyperbolic metric and finite-difference differential operators.

Real coordinates interleave real and imaginary parts,
``[Re z_1, Im z_1, Re z_2, ...]``.  The flat metric ``g_0 = (1/genus) Re(.|.)``
is the identity in these coordinates and the hyperbolic metric is

.. math:: g_{hyp}(u, v) = g_0(B(z, z)^{-1} u, v).

Sign convention: the Laplacian is the geometers' one, :math:`\Delta = -\mathrm{tr}\,\nabla d`,
with nonnegative spectrum.  Most numerical libraries use the opposite sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domains import Domain, DomainError
from .jordan import (
    DomainInvariants,
    bergman_operator,
    domain_invariants,
    point_lambdas,
    random_frame_point,
    spectral_norm,
)

DEFAULT_H = 1e-3


@lru_cache(maxsize=None)
def invariants(d: Domain) -> DomainInvariants:
    return domain_invariants(d)


def to_real(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def to_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def realify(m) -> np.ndarray:
    """Real ``2n x 2n`` matrix of a complex-linear map in interleaved coordinates."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[-1]
    out = np.empty(m.shape[:-2] + (2 * n, 2 * n))
    out[..., 0::2, 0::2] = m.real
    out[..., 0::2, 1::2] = -m.imag
    out[..., 1::2, 0::2] = m.imag
    out[..., 1::2, 1::2] = m.real
    return out


def complex_structure(n: int) -> np.ndarray:
    """J, multiplication by i."""
    return realify(1j * np.eye(n))


@dataclass(frozen=True)
class MetricAtPoint:
    G: np.ndarray
    sqrt_det: float


def _boundary_gap(d: Domain, z) -> float:
    return 1.0 - spectral_norm(d, z)


def _guard(d: Domain, z, h):
    gap = _boundary_gap(d, z)
    if gap <= 0:
        raise DomainError(f"point is outside {d} (spectral norm {1 - gap:.6g})")
    if h is not None and gap < 10 * h:
        raise DomainError(f"point too close to the boundary of {d}: 1 - lambda_max = {gap:.3g} < 10h = {10 * h:.3g}")


def diastasis_origin(d: Domain, z) -> float:
    """Fast path ``D_0(z) = -sum log(1 - lambda_j^2)``."""
    lam = point_lambdas(d, z)
    if lam.size and lam[0] >= 1:
        raise DomainError(f"point is outside {d}")
    return float(-np.sum(np.log1p(-(lam**2))))


def _logdet_b(d: Domain, x, y):
    sign, logabs = np.linalg.slogdet(bergman_operator(d, x, y))
    return sign, logabs


def diastasis(d: Domain, p, q) -> float:
    r"""Calabi's diastasis of the hyperbolic metric,

    ``D_p(q) = -(1/genus) log[ det B(p,p) det B(q,q) / |det B(q,p)|^2 ]``.
    """
    gamma = invariants(d).genus
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    for pt in (p, q):
        if spectral_norm(d, pt) >= 1:
            raise DomainError(f"point is outside {d}")
    s_pp, l_pp = _logdet_b(d, p, p)
    s_qq, l_qq = _logdet_b(d, q, q)
    s_qp, l_qp = _logdet_b(d, q, p)
    if s_qp == 0 or not np.isfinite(l_qp):
        raise DomainError("polarized Bergman kernel is singular (det B(q, p) = 0)")
    return float(-(l_pp + l_qq - 2 * l_qp) / gamma)


def diastasis_origin_general(d: Domain, z) -> float:
    """``-(1/genus) log det B(z, z)`` without the spectral shortcut."""
    s, l = _logdet_b(d, z, z)
    if s.real <= 0:
        raise DomainError(f"B(z, z) is not positive at this point of {d}")
    return float(-l / invariants(d).genus)


def euclidean_diastasis(z) -> float:
    z = np.asarray(z, dtype=complex)
    return float(np.vdot(z, z).real)


def metric_at(d: Domain, z) -> MetricAtPoint:
    z = np.asarray(z, dtype=complex)
    _guard(d, z, None)
    bzz = bergman_operator(d, z, z)
    cond = np.linalg.cond(bzz)
    if cond > 1e12:
        raise DomainError(f"B(z, z) numerically singular (cond {cond:.2e}); distance to boundary {_boundary_gap(d, z):.2e}")
    G = realify(np.linalg.inv(bzz))
    G = 0.5 * (G + G.T)
    sign, logdet = np.linalg.slogdet(G)
    return MetricAtPoint(G, float(np.exp(0.5 * logdet)))


def volume_density(d: Domain, z) -> float:
    """Riemannian volume relative to Lebesgue measure in real coordinates."""
    return metric_at(d, z).sqrt_det


def grad_norm_diastasis(d: Domain, z) -> float:
    """``||d D_0||^2_{g_hyp} = 4 sum lambda_j^2``."""
    z = np.asarray(z, dtype=complex)
    _guard(d, z, None)
    lam = point_lambdas(d, z)
    return float(4 * np.sum(lam**2))


def grad_fd(f, x, h):
    m = x.size
    g = np.empty(m)
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def grad_norm_diastasis_fd(d: Domain, z, h: float = 1e-6, metric=None) -> float:
    """Central-difference gradient of the general diastasis contracted with G^{-1}."""
    z = np.asarray(z, dtype=complex)
    x = to_real(z)
    g = grad_fd(lambda y: diastasis_origin_general(d, to_complex(y)), x, h)
    G = metric_at(d, z).G if metric is None else metric(z)
    return float(g @ np.linalg.solve(G, g))


def chi(d: Domain | int, t: float = np.inf) -> float:
    """``4 r tanh^2(t / sqrt r)``; ``4 r`` on the whole domain."""
    r = d if isinstance(d, (int, np.integer)) else invariants(d).r
    if t is None or np.isinf(t):
        return 4.0 * r
    if t <= 0:
        raise ValueError("radius must be positive")
    return float(4 * r * np.tanh(t / np.sqrt(r)) ** 2)


def distance_from_origin(d: Domain, z) -> float:
    lam = point_lambdas(d, z)
    if lam.size and lam[0] >= 1:
        raise DomainError(f"point is outside {d}")
    return float(np.sqrt(np.sum(np.arctanh(lam) ** 2)))


def _metric_inverse_real(d, x):
    return realify(bergman_operator(d, to_complex(x), to_complex(x)))


def _log_sqrt_det(d, x):
    s, l = np.linalg.slogdet(bergman_operator(d, to_complex(x), to_complex(x)))
    return -float(l.real)


def _laplacian_once(d, f, x, h, flat):
    m = x.size
    F = lambda y: f(to_complex(y))
    f0 = F(x)
    eye = np.eye(m) * h
    fp = np.array([F(x + eye[i]) for i in range(m)])
    fm = np.array([F(x - eye[i]) for i in range(m)])
    grad = (fp - fm) / (2 * h)
    hess = np.empty((m, m))
    hess[np.diag_indices(m)] = (fp - 2 * f0 + fm) / h**2
    for i in range(m):
        for j in range(i + 1, m):
            v = (F(x + eye[i] + eye[j]) - F(x + eye[i] - eye[j]) - F(x - eye[i] + eye[j]) + F(x - eye[i] - eye[j])) / (4 * h**2)
            hess[i, j] = hess[j, i] = v
    if flat:
        return -float(np.trace(hess))
    ginv = _metric_inverse_real(d, x)
    # div(sqrt g G^{-1} grad f) / sqrt g, expanded
    dginv = np.array([(_metric_inverse_real(d, x + eye[i]) - _metric_inverse_real(d, x - eye[i]))[i] for i in range(m)]) / (2 * h)
    dlog = np.array([_log_sqrt_det(d, x + eye[i]) - _log_sqrt_det(d, x - eye[i]) for i in range(m)]) / (2 * h)
    lap = np.sum(ginv * hess) + np.sum(dginv, axis=0) @ grad + dlog @ ginv @ grad
    return -float(lap)


def laplacian_fd(d: Domain | None, f, z, h: float = DEFAULT_H, flat: bool = False, richardson: bool = False) -> float:
    r"""Second-order finite-difference Laplace-Beltrami operator,
    ``-(1/sqrt g) d_i(sqrt g G^{ij} d_j f)``.

    ``flat=True`` uses the flat metric ``g_0`` on ``C^n`` (``d`` may be None).
    ``f`` maps complex coordinate vectors to reals.
    """
    z = np.asarray(z, dtype=complex)
    if not flat:
        _guard(d, z, 2 * h)
    x = to_real(z)
    val = _laplacian_once(d, f, x, h, flat)
    if richardson:
        val = (4 * _laplacian_once(d, f, x, h / 2, flat) - val) / 3
    return val


def _hessian_identity_once(d, z, v, h):
    x = to_real(z)
    v = np.asarray(v, dtype=float)
    m = x.size
    J = complex_structure(m // 2)
    D = lambda y: diastasis_origin_general(d, to_complex(y))
    G = lambda y: realify(np.linalg.inv(bergman_operator(d, to_complex(y), to_complex(y))))
    G0 = G(x)
    Ginv = np.linalg.inv(G0)
    dD = grad_fd(D, x, h)
    eye = np.eye(m) * h

    def hess(w):
        second = (D(x + h * w) - 2 * D(x) + D(x - h * w)) / h**2
        dG_w = (G(x + h * w) - G(x - h * w)) / (2 * h)
        d_l = np.array([w @ (G(x + eye[l]) - G(x - eye[l])) @ w for l in range(m)]) / (2 * h)
        christoffel = Ginv @ (dG_w @ w - 0.5 * d_l)
        return second - christoffel @ dD

    return hess(v) + hess(J @ v) - 4 * v @ G0 @ v


def hessian_identity_check(d: Domain, z, v, h: float = DEFAULT_H, richardson: bool = False) -> float:
    """``|Hess D_0(v, v) + Hess D_0(Jv, Jv) - 4 g(v, v)|`` by finite differences.

    ``v`` is a real tangent vector (interleaved coordinates).
    """
    z = np.asarray(z, dtype=complex)
    _guard(d, z, 2 * h)
    val = _hessian_identity_once(d, z, v, h)
    if richardson:
        val = (4 * _hessian_identity_once(d, z, v, h / 2) - val) / 3
    return float(abs(val))


def sectional_curvature_at_critical(metric, x, X, Y, h: float = DEFAULT_H) -> float:
    """Sectional curvature of span(X, Y) at a point where the metric is critical.

    Valid only where the first derivatives of the metric vanish (so the
    Christoffel symbols do); ``metric`` maps real coordinates to G.
    """
    gXX = lambda y: X @ metric(y) @ X
    gYY = lambda y: Y @ metric(y) @ Y
    gXY = lambda y: X @ metric(y) @ Y
    d2 = lambda f, w: (f(x + h * w) - 2 * f(x) + f(x - h * w)) / h**2
    mixed = (gXY(x + h * (X + Y)) - gXY(x + h * (X - Y)) - gXY(x - h * (X - Y)) + gXY(x - h * (X + Y))) / (4 * h**2)
    num = -0.5 * (d2(gXX, Y) + d2(gYY, X) - 2 * mixed)
    G = metric(x)
    return float(num / ((X @ G @ X) * (Y @ G @ Y) - (X @ G @ Y) ** 2))


def holomorphic_sectional_curvature_origin(d: Domain, v, h: float = DEFAULT_H) -> float:
    v = np.asarray(v, dtype=complex)
    X = to_real(v)
    Y = complex_structure(d.n) @ X
    metric = lambda y: metric_at(d, to_complex(y)).G
    return sectional_curvature_at_critical(metric, np.zeros(2 * d.n), X, Y, h)


def log_polar_density(inv: DomainInvariants, lambdas) -> np.ndarray:
    """Log of ``prod (1-l^2)^-genus prod l^(2b+1) prod_{i<j} (l_i^2 - l_j^2)^a``."""
    lam = np.asarray(lambdas, dtype=float)
    out = np.sum(-inv.genus * np.log1p(-(lam**2)) + (2 * inv.b + 1) * np.log(lam), axis=-1)
    if inv.a:
        for i in range(lam.shape[-1]):
            for j in range(i + 1, lam.shape[-1]):
                out = out + inv.a * np.log(lam[..., i] ** 2 - lam[..., j] ** 2)
    return out


def polar_density(d: Domain, lambdas) -> float:
    """Hyperbolic volume pushed to the ordered eigenvalue chamber (up to a constant)."""
    lam = np.asarray(lambdas, dtype=float)
    inv = invariants(d)
    if lam.shape[-1] != inv.r or np.any(lam <= 0) or np.any(lam >= 1) or np.any(np.diff(lam, axis=-1) >= 0):
        raise DomainError(f"eigenvalues must satisfy 1 > l_1 > ... > l_{inv.r} > 0, got {lam}")
    return np.exp(log_polar_density(inv, lam))


def sample_ball(d: Domain, t: float, rng_seed: int, count: int) -> np.ndarray:
    """Points with ``distance_from_origin < t``, shape ``(count, n)``.

    Proposal: eigenvalues i.i.d. uniform on ``(0, tanh t)``, sorted, on a
    Haar-random frame; rejected unless ``sqrt(sum arctanh^2) < t``.  The
    resulting law is uniform in the eigenvalue chamber, not in volume.
    """
    if t <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(rng_seed)
    r = d.max_rank
    top = np.tanh(t) if np.isfinite(t) else 1.0
    out = []
    while len(out) < count:
        lam = np.sort(rng.uniform(0, top, size=r))[::-1]
        if lam[0] >= 1 or np.sqrt(np.sum(np.arctanh(lam) ** 2)) >= t:
            continue
        out.append(random_frame_point(d, lam, rng))
    return np.array(out).reshape(count, d.n)


def two_point_distance_rank1(d: Domain, p, q) -> float:
    """Geodesic distance on a rank-one domain via the Moebius-invariant ratio.

    ``1 - |phi_p(q)|^2 = (1-|p|^2)(1-|q|^2) / |1 - <q, p>|^2`` and
    ``rho = arctanh |phi_p(q)|``.
    """
    if invariants(d).r != 1:
        raise ValueError("two-point distance is only implemented for rank one")
    # coordinates are g_0-orthonormal, so on rank one the coordinate norm is the spectral norm
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    ratio = (1 - np.vdot(p, p).real) * (1 - np.vdot(q, q).real) / abs(1 - np.vdot(p, q)) ** 2
    return float(np.arctanh(np.sqrt(max(0.0, 1 - ratio))))


def distance_from_diastasis_rank1(d: Domain, p, q) -> float:
    """Invert ``D = -log(1 - tanh^2 rho)`` on rank one."""
    D = diastasis(d, p, q)
    return float(np.arctanh(np.sqrt(-np.expm1(-D))))
