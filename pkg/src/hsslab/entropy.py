"""Diastatic and volume entropy: closed forms and numerical estimators."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import logsumexp

from .domains import Domain
from .geometry import invariants
from .jordan import DomainInvariants
from .polar import ball_nodes, diastasis_t, log_density_t, shell_nodes

METHODS = ("formula", "threshold_scan", "growth_fit")


class FormulaOnly(ValueError):
    """Numerical estimator refused (rank >= 3)."""


@dataclass
class EntropyEstimate:
    value: float
    method: str
    quantity: str
    params: dict = field(default_factory=dict)
    error_bar: float = 0.0
    domain: str = ""
    source: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.error_bar < 0:
            raise ValueError("error bar must be nonnegative")
        if self.method == "formula" and self.error_bar != 0:
            raise ValueError("formula estimates carry no error bar")

    def as_dict(self):
        return asdict(self)


def diastatic_entropy_formula(inv: DomainInvariants) -> int:
    return inv.genus - 1


def volume_entropy_squared(inv: DomainInvariants) -> int:
    """``Ent_v^2 = 4 sum_j (b + 1 + a(r - j))^2``, an integer."""
    return 4 * sum((inv.b + 1 + inv.a * (inv.r - j)) ** 2 for j in range(1, inv.r + 1))


def volume_entropy_formula(inv: DomainInvariants) -> float:
    value = math.sqrt(volume_entropy_squared(inv))
    n, r, a = inv.n, inv.r, inv.a
    alt = 2 * n / math.sqrt(r) * math.sqrt(1 + a**2 * r**2 * (r**2 - 1) / (12 * n**2))
    if abs(value - alt) > 1e-12 * value:
        raise AssertionError(f"volume entropy closed forms disagree: {value} vs {alt}")
    return value


def entropy_comparison(inv: DomainInvariants):
    """``(2 Ent_d, Ent_v, 2 sqrt(r) Ent_d, equality)``; equality iff r = 1 or a = 0."""
    entd = diastatic_entropy_formula(inv)
    lhs, mid, rhs = 2.0 * entd, volume_entropy_formula(inv), 2 * math.sqrt(inv.r) * entd
    # squared comparisons are exact integer arithmetic
    ev2 = volume_entropy_squared(inv)
    if not (4 * entd**2 <= ev2 <= 4 * inv.r * entd**2):
        raise AssertionError(f"entropy comparison violated for {inv}")
    equality = inv.r == 1 or inv.a == 0
    if equality != (4 * entd**2 == ev2 == 4 * inv.r * entd**2):
        raise AssertionError(f"equality case mismatch for {inv}")
    return lhs, mid, rhs, equality


def entv_lower_from_chi(n: int, chi_inf: float) -> float:
    if chi_inf <= 0:
        raise ValueError("chi must be positive")
    return 4 * n / math.sqrt(chi_inf)


def _require_low_rank(inv: DomainInvariants, d: Domain):
    if inv.r > 2:
        raise FormulaOnly(f"formula-only for rank >= 3 ({d} has rank {inv.r})")


def log_truncated_integrals(inv: DomainInvariants, cs, cutoff_exps):
    """``log I_eps(c)`` for ``eps = 2^-k``: integral of exp(-c D_0) over lambda_max <= 1 - eps.

    Returns an array of shape ``(len(cs), len(cutoff_exps))``.
    """
    cs = np.asarray(cs, dtype=float)
    edges = [0.0] + [float(np.arctanh(1 - 2.0**-k)) for k in cutoff_exps]
    shells = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        t, logw = shell_nodes(inv, lo, hi)
        base = logw + log_density_t(inv, t)
        D = diastasis_t(t)
        shells.append(logsumexp(base[None, :] - cs[:, None] * D[None, :], axis=1))
    return np.logaddexp.accumulate(np.stack(shells, axis=1), axis=1), np.stack(shells, axis=1)


def diastatic_entropy_numeric(d: Domain, c_grid=None, cutoff_exps=range(8, 17), step: float = 0.05) -> EntropyEstimate:
    """Threshold scan for ``inf{c : int exp(-c D_0) dv < inf}`` (rank <= 2).

    For each c the truncated integrals ``I_eps`` are computed on shells
    ``1 - 2^-k <= lambda_max < 1 - 2^-(k+1)``.  A shell increment of an
    integrand with power-law edge behaviour scales geometrically in k, so c is
    classified convergent iff the last two increments shrink (ratio < 1).
    The estimate is the midpoint between the largest divergent and smallest
    convergent grid value; the error bar is the grid step.
    """
    inv = invariants(d)
    _require_low_rank(inv, d)
    if c_grid is None:
        c_grid = np.round(np.arange(inv.genus - 2, inv.genus + step / 2, step), 10)[1:]
    c_grid = np.sort(np.asarray(c_grid, dtype=float))
    spacing = float(np.max(np.diff(c_grid))) if c_grid.size > 1 else np.inf
    if spacing > 0.05 + 1e-12:
        raise ValueError(f"c grid too coarse (step {spacing:.3g} > 0.05)")
    cutoff_exps = list(cutoff_exps)
    logI, logshell = log_truncated_integrals(inv, c_grid, cutoff_exps)
    ratio = np.exp(logshell[:, -1] - logshell[:, -2])
    cauchy = np.exp(logshell[:, -1] - logI[:, -1])
    convergent = ratio < 1.0
    flagged = bool(np.any(convergent[:-1] & ~convergent[1:]))
    if convergent.all() or not convergent.any():
        raise ValueError("no divergent/convergent transition on the c grid")
    lo = float(c_grid[~convergent].max())
    hi = float(c_grid[convergent].min())
    params = {
        "c_grid": [float(c) for c in c_grid],
        "cutoffs": [f"2^-{k}" for k in cutoff_exps],
        "increment_ratio": [float(x) for x in ratio],
        "relative_increment": [float(x) for x in cauchy],
        "bracket": [lo, hi],
        "flagged": flagged,
    }
    return EntropyEstimate(0.5 * (lo + hi), "threshold_scan", "diastatic", params, spacing, str(d), "Ent_d = inf{c : int e^{-c D} dv < inf}")


def log_ball_volume(inv: DomainInvariants, R: float) -> float:
    """log Vol B(R) up to a global constant (rank <= 2)."""
    t, logw, _ = ball_nodes(inv, R)
    return float(logsumexp(logw + log_density_t(inv, t)))


def volume_growth_numeric(d: Domain, radii=(6, 7, 8, 9, 10, 11, 12)) -> EntropyEstimate:
    """Least-squares slope of log Vol B(R) over the top half of the radii."""
    inv = invariants(d)
    _require_low_rank(inv, d)
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be increasing")
    if radii.max() > 20:
        raise ValueError("radii above 20 are out of range")
    logv = np.array([log_ball_volume(inv, R) for R in radii])
    if not np.all(np.isfinite(logv)):
        raise FloatingPointError("ball volume quadrature underflowed")
    top = radii.size // 2
    xs, ys = radii[top:], logv[top:]
    if xs.size > 2:
        coef, cov = np.polyfit(xs, ys, 1, cov=True)
        err = float(np.sqrt(cov[0, 0]))
    else:
        coef, err = np.polyfit(xs, ys, 1), 0.0
    slope = coef[0]
    params = {"radii": [float(r) for r in radii], "fit_radii": [float(r) for r in xs], "log_volume": [float(v) for v in logv]}
    return EntropyEstimate(float(slope), "growth_fit", "volume", params, err, str(d), "Ent_v = lim (1/R) log Vol B(R)")


def formula_estimates(d: Domain) -> list[EntropyEstimate]:
    inv = invariants(d)
    return [
        EntropyEstimate(float(diastatic_entropy_formula(inv)), "formula", "diastatic", {}, 0.0, str(d), "Ent_d = genus - 1"),
        EntropyEstimate(volume_entropy_formula(inv), "formula", "volume", {}, 0.0, str(d), "Ent_v = 2 sqrt(sum_j (b+1+a(r-j))^2)"),
    ]
