"""First-eigenvalue bounds and the two numerical certificates.

The closed forms:

* lower, whole domain:  ``4 n^2 / chi``  (``chi = 4r`` gives ``n^2 / r``)
* lower, geodesic ball: ``n^2 / (r tanh^2(t / sqrt r))``
* upper via volume entropy:    ``Ent_v^2 / 4``
* upper via diastatic entropy: ``Ent_d^2 chi / 4``

The certificates are sampled falsification harnesses, not proofs: the
Barta check evaluates ``Delta phi / phi`` for ``phi = exp(-c D_0)`` by finite
differences on interior samples; the Rayleigh check integrates a tapered test
function in polar coordinates.  For rank >= 2 the bottom of the spectrum is
only bracketed by ``[n^2/r, Ent_v^2/4]``; reports carry that interval and no
point value.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from .domains import Domain, DomainError
from .entropy import diastatic_entropy_formula, volume_entropy_formula, volume_entropy_squared
from .geometry import chi as chi_of, diastasis_origin_general, invariants, laplacian_fd, sample_ball
from .jordan import DomainInvariants
from .polar import ball_nodes, chamber_directions, diastasis_t, log_density_t

# interior radius used by the whole-domain Barta certificate
BARTA_SAMPLE_RADIUS = 2.0
TAPER_FRACTION = 0.1


def lambda1_lower(n: int, chi: float) -> float:
    """``4 n^2 / chi``; zero when chi is infinite."""
    if np.isinf(chi):
        return 0.0
    if chi <= 0:
        raise ValueError("chi must be positive")
    return 4 * n**2 / chi


def lambda1_lower_ball(inv: DomainInvariants, t: float) -> float:
    if t <= 0:
        raise ValueError("radius must be positive")
    if np.isinf(t):
        return inv.n**2 / inv.r
    return inv.n**2 / (inv.r * math.tanh(t / math.sqrt(inv.r)) ** 2)


def euclidean_ball_bound(n: int, t: float):
    """``(n^2 / t^2, h^2 / 4)`` with the Cheeger constant ``h = 2n / t`` of the ball."""
    if t <= 0:
        raise ValueError("radius must be positive")
    h = 2 * n / t
    return n**2 / t**2, h**2 / 4


def lambda1_upper_entd(inv: DomainInvariants, chi: float) -> float:
    if not np.isfinite(chi):
        raise ValueError("chi must be finite")
    return diastatic_entropy_formula(inv) ** 2 * chi / 4


def lambda1_upper_entv(entv: float) -> float:
    if entv < 0:
        raise ValueError("entropy must be nonnegative")
    return entv**2 / 4


def barta_bound(c: float, n: int, chi: float) -> float:
    """``c (4n - c chi)``, maximised at ``c = 2n / chi`` with value ``4 n^2 / chi``."""
    return c * (4 * n - c * chi)


def optimal_barta_c(n: int, chi: float) -> float:
    return 2 * n / chi


def entv_bound_chain(inv: DomainInvariants) -> dict:
    """``4n / sqrt(chi) <= Ent_v <= Ent_d sqrt(chi)`` with ``chi = 4r``.

    Comparisons are done on squares in exact rational arithmetic.
    """
    lower2 = Fraction(4 * inv.n**2, inv.r)
    mid2 = Fraction(volume_entropy_squared(inv))
    upper2 = Fraction(diastatic_entropy_formula(inv) ** 2 * 4 * inv.r)
    if not (lower2 <= mid2 <= upper2):
        raise AssertionError(f"volume entropy bound chain violated for {inv}")
    return {
        "lower": math.sqrt(lower2),
        "entv": volume_entropy_formula(inv),
        "upper": math.sqrt(upper2),
        "lower_tight": lower2 == mid2,
        "upper_tight": mid2 == upper2,
    }


@dataclass
class BartaResult:
    c: float
    margin: float
    implied_bound: float
    passed: bool
    samples: int
    h: float
    tol_fd: float


def barta_verify(d: Domain, c: float, samples=200, h: float = 1e-3, t: float = np.inf, seed: int = 0, tol_fd: float = 1e-2, sample_radius: float | None = None) -> BartaResult:
    """Minimum over samples of ``Delta phi / phi - c (4n - c chi)`` for ``phi = exp(-c D_0)``.

    ``samples`` is a count (drawn by :func:`sample_ball`) or an array of points.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    inv = invariants(d)
    chi = chi_of(d, t)
    target = barta_bound(c, inv.n, chi)
    if isinstance(samples, (int, np.integer)):
        radius = sample_radius or (t if np.isfinite(t) else BARTA_SAMPLE_RADIUS)
        points = sample_ball(d, radius, seed, int(samples))
    else:
        points = np.atleast_2d(samples)
    phi = lambda w: math.exp(-c * diastasis_origin_general(d, w))
    margins = []
    for z in points:
        lap = laplacian_fd(d, phi, z, h)
        margins.append(lap / phi(z) - target)
    margin = float(np.min(margins))
    return BartaResult(c, margin, target, margin >= -tol_fd, len(points), h, tol_fd)


def _taper(rho, R, fraction=TAPER_FRACTION):
    """Raised-cosine cutoff on the last ``fraction`` of [0, R] and its derivative."""
    w = fraction * R
    s = np.clip((rho - (R - w)) / w, 0.0, 1.0)
    chi = 0.5 * (1 + np.cos(np.pi * s))
    dchi = np.where((s > 0) & (s < 1), -0.5 * np.pi / w * np.sin(np.pi * s), 0.0)
    return chi, dchi


@dataclass
class RayleighResult:
    kind: str
    c: float
    R_support: float
    quotient: float
    error_bar: float
    analytic_limit: float
    method: str
    params: dict = field(default_factory=dict)


def _rayleigh_logs(inv, kind, c, t, logw, rho, R):
    chi, dchi = _taper(rho, R)
    logJ = log_density_t(inv, t)
    with np.errstate(divide="ignore"):
        if kind == "exp_distance":
            logf2 = -2 * c * rho + 2 * np.log(chi)
            # ||d f||^2 = f^2 (c - chi'/chi)^2 since ||d rho|| = 1
            lognum = -2 * c * rho + 2 * np.log(np.abs(c * chi - dchi))
        else:
            D = diastasis_t(t)
            gradD = 2 * np.tanh(t)
            unit = t / rho[:, None]
            vec = c * chi[:, None] * gradD - dchi[:, None] * unit
            logf2 = -2 * c * D + 2 * np.log(chi)
            lognum = -2 * c * D + np.log(np.sum(vec**2, axis=1))
    base = logw + logJ
    return base + lognum, base + logf2


def rayleigh_quotient(d: Domain, kind: str = "exp_distance", c: float | None = None, R_support: float = 15.0, method: str | None = None, seed: int = 0, directions: int = 4096, batches: int = 8) -> RayleighResult:
    """Rayleigh quotient of ``exp(-c rho)`` or ``exp(-c D_0)`` cut off at ``R_support``.

    Integrals run in log space over polar coordinates: tensor Gauss quadrature
    for rank <= 2, Monte-Carlo chamber directions (with a batch error bar)
    otherwise.  For ``exp_distance`` the untapered quotient is exactly
    ``c^2``; the result reports that limit next to the quadrature value.
    """
    inv = invariants(d)
    if kind == "exp_distance":
        threshold = volume_entropy_formula(inv) / 2
        c = threshold + 0.05 if c is None else c
        limit = c**2
    elif kind == "exp_diastasis":
        threshold = diastatic_entropy_formula(inv) / 2
        c = threshold + 0.05 if c is None else c
        limit = c**2 * chi_of(d)
    else:
        raise ValueError(f"unknown test function {kind!r}")
    if c <= threshold:
        raise DomainError(f"c = {c} is at or below the integrability threshold {threshold} for {kind}")
    if method is None:
        method = "quadrature" if inv.r <= 2 else "mc"
    breaks = [(1 - TAPER_FRACTION) * R_support]
    if method == "quadrature":
        t, logw, rho = ball_nodes(inv, R_support, breaks=breaks)
        num, den = _rayleigh_logs(inv, kind, c, t, logw, rho, R_support)
        q = float(np.exp(logsumexp(num) - logsumexp(den)))
        err = 0.0
    elif method == "mc":
        rng = np.random.default_rng(seed)
        dirs = chamber_directions(inv.r, directions, rng)
        t, logw, rho = ball_nodes(inv, R_support, directions=dirs, breaks=breaks)
        num, den = _rayleigh_logs(inv, kind, c, t, logw, rho, R_support)
        q = float(np.exp(logsumexp(num) - logsumexp(den)))
        # batch estimates over disjoint direction subsets
        k = dirs.shape[0]
        which = np.tile(np.arange(k), t.shape[0] // k) % batches
        qs = [np.exp(logsumexp(num[which == b]) - logsumexp(den[which == b])) for b in range(batches)]
        err = float(np.std(qs, ddof=1) / np.sqrt(batches))
    else:
        raise ValueError(f"unknown method {method!r}")
    return RayleighResult(kind, float(c), float(R_support), q, err, float(limit), method, {"taper_fraction": TAPER_FRACTION, "gap": q - limit})


@dataclass
class BoundsReport:
    domain: str
    radius: float | None
    lambda1_lower: float
    lambda1_upper_entd: float
    lambda1_upper_entv: float
    entv_lower: float
    lambda1_interval: list
    upper_scope: str
    equality: bool
    consistent: bool
    barta_margin: float | None = None
    rayleigh_estimate: float | None = None
    certificates: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


SOURCES = {
    "lambda1_lower": "lower bound 4n^2/chi from Barta's lemma with phi = exp(-c D)",
    "lambda1_lower_ball": "geodesic-ball lower bound n^2 / (r tanh^2(t/sqrt r))",
    "lambda1_upper_entd": "upper bound Ent_d^2 chi / 4",
    "lambda1_upper_entv": "upper bound Ent_v^2 / 4",
    "entv_lower": "volume entropy lower bound 4n / sqrt(chi)",
}


def bounds_report(d: Domain, t: float = np.inf, with_certificates: bool = False, seed: int = 0, tol: float = 1e-9, barta_samples: int = 200, h: float = 1e-3, tol_fd: float = 1e-2) -> BoundsReport:
    inv = invariants(d)
    chi_inf = chi_of(d)
    entv = volume_entropy_formula(inv)
    whole_lower = lambda1_lower(inv.n, chi_inf)
    upper_entv = lambda1_upper_entv(entv)
    upper_entd = lambda1_upper_entd(inv, chi_inf)
    whole = t is None or np.isinf(t)
    if whole:
        lower = whole_lower
        consistent = lower <= min(upper_entv, upper_entd) + tol
        if inv.r == 1:
            consistent = consistent and abs(lower - upper_entv) <= tol
        interval = [lower, upper_entv]
        scope = "whole-domain"
    else:
        lower = lambda1_lower_ball(inv, t)
        # a ball has larger first eigenvalue than the whole domain
        consistent = lower >= whole_lower - tol
        interval = [lower, None]
        scope = "whole-domain only; no finite-ball upper bound"
    report = BoundsReport(
        domain=str(d),
        radius=None if whole else float(t),
        lambda1_lower=lower,
        lambda1_upper_entd=upper_entd,
        lambda1_upper_entv=upper_entv,
        entv_lower=4 * inv.n / math.sqrt(chi_inf),
        lambda1_interval=interval,
        upper_scope=scope,
        equality=whole and abs(lower - upper_entv) <= tol,
        consistent=bool(consistent),
        sources=dict(SOURCES, lambda1_lower=SOURCES["lambda1_lower" if whole else "lambda1_lower_ball"]),
    )
    if with_certificates:
        chi_t = chi_of(d, t)
        c_opt = optimal_barta_c(inv.n, chi_t)
        barta = barta_verify(d, c_opt, samples=barta_samples, h=h, t=t, seed=seed, tol_fd=tol_fd)
        ray = rayleigh_quotient(d, "exp_distance", R_support=15.0 if whole else float(t), seed=seed)
        # any Rayleigh quotient dominates the bottom of the spectrum, hence the lower bound
        ray_ok = ray.quotient + 3 * ray.error_bar >= lower - tol
        report.barta_margin = barta.margin
        report.rayleigh_estimate = ray.quotient
        report.certificates = {
            "barta": asdict(barta),
            "rayleigh": asdict(ray) | {"passed": bool(ray_ok)},
            "note": "sampled falsification checks, not proofs",
        }
    return report


def certificates_pass(report: BoundsReport) -> bool:
    if not report.certificates:
        return True
    return bool(report.certificates["barta"]["passed"] and report.certificates["rayleigh"]["passed"])
