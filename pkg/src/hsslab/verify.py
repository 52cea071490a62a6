"""Property batteries behind ``hsslab verify``.

Each battery returns a list of :class:`Check` records; a suite passes when
every record passes.  Batteries are deterministic given the seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds, entropy, geometry, jordan
from .config import Tolerances
from .domains import Domain, all_domains, parse_domain

SUITES = ("algebra", "geometry", "entropy", "bounds", "all")

FAMILY_REPRESENTATIVES = ("disc", "ball 2", "I 2 3", "II 4", "II 5", "III 3")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _check(suite, name, value, threshold, detail="", upper=True) -> Check:
    value = float(value)
    ok = value <= threshold if upper else value >= threshold
    return Check(suite, name, bool(ok and math.isfinite(value)), value, float(threshold), detail)


def random_point(d: Domain, rng, high: float = 0.95):
    lam = np.sort(rng.uniform(0.0, high, size=d.max_rank))[::-1]
    return jordan.random_frame_point(d, lam, rng)


def random_ambient(d: Domain, rng, count=None):
    shape = (d.n,) if count is None else (count, d.n)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def jordan_residual(d: Domain, x, y, u, v, w) -> float:
    """Relative residual of the Jordan identity for one quintuple."""
    tp = lambda a, b, c: jordan.triple_product(d, a, b, c)
    res = tp(x, y, tp(u, v, w)) - tp(u, v, tp(x, y, w)) - tp(tp(x, y, u), v, w) + tp(u, tp(v, x, y), w)
    scale = np.prod([np.linalg.norm(t, axis=-1) for t in (x, y, u, v, w)], axis=0)
    return np.max(np.linalg.norm(res, axis=-1) / scale)


def spectral_residuals(d: Domain, z):
    """(reconstruction, tripotency, orthogonality) residuals."""
    dec = jordan.spectral_decompose(d, z)
    recon = np.linalg.norm(sum(l * c for l, c in zip(dec.lambdas, dec.tripotents)) - z) if dec.s else np.linalg.norm(z)
    trip = max((np.linalg.norm(jordan.triple_product(d, c, c, c) - 2 * c) for c in dec.tripotents), default=0.0)
    orth = 0.0
    for i in range(dec.s):
        for j in range(dec.s):
            if i != j:
                orth = max(orth, np.linalg.norm(jordan.t_operator(d, dec.tripotents[i], dec.tripotents[j]), 2))
    return recon, trip, orth


def algebra_suite(seed: int, tol: Tolerances, quintuples: int = 100, points: int = 100, membership: int = 1000) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    t0 = time.perf_counter()
    worst_j, worst_s = 0.0, 0.0
    for d in all_domains():
        xs = [random_ambient(d, rng, quintuples) for _ in range(5)]
        worst_j = max(worst_j, jordan_residual(d, *xs))
        for _ in range(10):
            worst_s = max(worst_s, *spectral_residuals(d, random_ambient(d, rng)))
    out.append(_check("algebra", "jordan_identity", worst_j, tol.algebra, "18 domains x quintuples"))
    out.append(_check("algebra", "spectral_round_trip", worst_s, tol.algebra, "reconstruction, tripotency, orthogonality"))
    out.append(_check("algebra", "algebra_runtime_s", time.perf_counter() - t0, 10.0))

    worst_det, worst_int, worst_bzz, worst_gram = 0.0, 0.0, 0.0, 0.0
    for d in all_domains():
        inv = geometry.invariants(d)
        z = np.array([random_point(d, rng) for _ in range(points)])
        _, logdet = np.linalg.slogdet(jordan.bergman_zz_batch(d, z))
        lam = jordan.singular_values_batch(d, z)
        expected = inv.genus * np.sum(np.log1p(-(lam**2)), axis=-1)
        worst_det = max(worst_det, np.max(np.abs(np.expm1(logdet.real - expected))))
        worst_int = max(worst_int, abs(np.sum(logdet.real) / np.sum(expected / inv.genus) - inv.genus))
        dec = jordan.spectral_decompose(d, z[0])
        bzz = jordan.bergman_operator(d, z[0], z[0])
        for l, c in zip(dec.lambdas, dec.tripotents):
            worst_bzz = max(worst_bzz, np.linalg.norm(bzz @ c - (1 - l**2) ** 2 * c))
        basis = np.eye(d.n)
        gram = np.array([[jordan.trace_form(d, u, v) for v in basis] for u in basis])
        worst_gram = max(worst_gram, np.max(np.abs(gram - inv.genus * np.eye(d.n))) if np.linalg.eigvalsh(gram)[0] > 0 else np.inf)
    out.append(_check("algebra", "det_bergman_product", worst_det, tol.spectral, "det B(z,z) = prod (1-l^2)^genus"))
    out.append(_check("algebra", "genus_integrality", worst_int, tol.integrality))
    out.append(_check("algebra", "bergman_on_tripotents", worst_bzz, 1e-9, "B c_j = (1-l_j^2)^2 c_j"))
    out.append(_check("algebra", "trace_form_gram", worst_gram, tol.algebra, "Gram matrix = genus * identity"))

    inv = geometry.invariants(parse_domain("I 2 2"))
    ids = inv.genus == inv.b + 2 + inv.a * (inv.r - 1) and inv.n == inv.r * (inv.b + 1) + inv.a * inv.r * (inv.r - 1) // 2
    out.append(Check("algebra", "invariants_I22", (inv.r, inv.a, inv.b, inv.genus, inv.n) == (2, 2, 0, 4, 4) and ids, 0.0, 0.0, str(inv.as_dict())))

    disagreements = 0
    for name in ("disc", "I 2 3", "II 4", "III 3"):
        d = parse_domain(name)
        for _ in range(membership):
            z = random_ambient(d, rng)
            z *= rng.uniform(0.0, 2.0) / jordan.spectral_norm(d, z)
            try:
                jordan.contains(d, z)
            except RuntimeError:
                disagreements += 1
    out.append(_check("algebra", "membership_agreement", disagreements, 0, "spectral norm vs Bergman positivity, norms in (0, 2)"))
    return out


def geometry_suite(seed: int, tol: Tolerances, points: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    worst_grad, worst_sym, worst_zero, worst_J = 0.0, 0.0, 0.0, 0.0
    for name in FAMILY_REPRESENTATIVES:
        d = parse_domain(name)
        for _ in range(points):
            z = random_point(d, rng, 0.9)
            exact = geometry.grad_norm_diastasis(d, z)
            fd = geometry.grad_norm_diastasis_fd(d, z)
            worst_grad = max(worst_grad, abs(exact - fd) / max(exact, 1e-12))
        for _ in range(20):
            p, q = random_point(d, rng, 0.9), random_point(d, rng, 0.9)
            worst_sym = max(worst_sym, abs(geometry.diastasis(d, p, q) - geometry.diastasis(d, q, p)))
            worst_zero = max(worst_zero, abs(geometry.diastasis(d, p, p)))
            G = geometry.metric_at(d, p).G
            J = geometry.complex_structure(d.n)
            worst_J = max(worst_J, np.max(np.abs(J.T @ G @ J - G)))
    out.append(_check("geometry", "grad_norm_closed_form_vs_fd", worst_grad, tol.grad_rel))
    out.append(_check("geometry", "diastasis_symmetry", worst_sym, tol.symmetry))
    out.append(_check("geometry", "diastasis_vanishes_at_basepoint", worst_zero, tol.symmetry))
    out.append(_check("geometry", "metric_J_invariance", worst_J, tol.symmetry))

    ratio = 0.0
    for name in ("disc", "I 2 2", "III 2"):
        d = parse_domain(name)
        for _ in range(50):
            z = random_point(d, rng)
            z = z * rng.uniform(0.01, 0.1) / geometry.distance_from_origin(d, z)
            rho = geometry.distance_from_origin(d, z)
            ratio = max(ratio, abs(geometry.diastasis(d, np.zeros(d.n), z) - rho**2) / rho**4)
    out.append(_check("geometry", "diastasis_minus_rho_sq_over_rho4", ratio, 1.0, "rho in (0.01, 0.1)"))

    worst_lip = -np.inf
    for name in ("disc", "ball 2"):
        d = parse_domain(name)
        for _ in range(50):
            p, q, x = (random_point(d, rng, 0.8) for _ in range(3))
            rho = geometry.two_point_distance_rank1(d, p, q)
            gap = abs(geometry.diastasis(d, p, x) - geometry.diastasis(d, q, x)) - 2 * rho
            worst_lip = max(worst_lip, gap)
    out.append(_check("geometry", "diastasis_lipschitz_excess", worst_lip, 1e-12))

    d = parse_domain("disc")
    curv = geometry.holomorphic_sectional_curvature_origin(d, d.frame()[0])
    out.append(_check("geometry", "holomorphic_curvature_disc", abs(curv + 4), 1e-4, f"K = {curv:.6f}"))
    h = tol.fd_step
    res = geometry.hessian_identity_check(d, np.array([0.4]), np.array([1.0, 0.0]), h)
    out.append(_check("geometry", "hessian_identity_disc", res, 1e-4))
    d = parse_domain("I 2 2")
    unit = lambda v: v / np.linalg.norm(v)
    worst_h = max(geometry.hessian_identity_check(d, random_point(d, rng, 0.7), unit(rng.normal(size=2 * d.n)), h) for _ in range(5))
    out.append(_check("geometry", "hessian_identity_I22", worst_h, tol.hessian))
    flat = geometry.laplacian_fd(None, lambda w: float(np.vdot(w, w).real), rng.normal(size=3) * 0.3, h, flat=True)
    out.append(_check("geometry", "flat_laplacian_norm_sq", abs(flat + 12), 1e-5))
    lap0 = geometry.laplacian_fd(d, lambda w: geometry.diastasis_origin_general(d, w), np.zeros(d.n), h)
    out.append(_check("geometry", "laplacian_diastasis_origin", abs(lap0 + 4 * d.n), 1e-4))

    d = parse_domain("disc")
    pts = geometry.sample_ball(d, 1.0, seed, 10_000)
    gmax = max(geometry.grad_norm_diastasis(d, z) for z in pts)
    out.append(_check("geometry", "chi_bounds_sampled_grad_norm", gmax - geometry.chi(d, 1.0), 0.0))
    edge = np.array([np.tanh(1.0 - 1e-9)])
    out.append(_check("geometry", "chi_attained_near_boundary", 1 - geometry.grad_norm_diastasis(d, edge) / geometry.chi(d, 1.0), 0.01))
    ts = np.array([0.5, 1, 2, 4, 8, 16])
    ok = all(np.all(np.diff([geometry.chi(r, t) for t in ts]) > 0) and geometry.chi(r) == 4 * r for r in (1, 2, 3))
    out.append(Check("geometry", "chi_monotone_limit", ok, 0.0, 0.0))
    return out


def entropy_suite(seed: int, tol: Tolerances) -> list[Check]:
    out = []
    for d in all_domains():
        inv = geometry.invariants(d)
        entropy.volume_entropy_formula(inv)
        entropy.entropy_comparison(inv)
        ok = entropy.entv_lower_from_chi(inv.n, 4 * inv.r) <= entropy.volume_entropy_formula(inv) + 1e-12
        out.append(Check("entropy", f"formula_chain[{d}]", ok, 0.0, 0.0))
    for name in ("disc", "ball 2", "I 2 2", "III 2", "II 4"):
        d = parse_domain(name)
        inv = geometry.invariants(d)
        est = entropy.diastatic_entropy_numeric(d)
        out.append(_check("entropy", f"threshold_scan[{d}]", abs(est.value - entropy.diastatic_entropy_formula(inv)), tol.threshold))
        grow = entropy.volume_growth_numeric(d)
        target = entropy.volume_entropy_formula(inv)
        out.append(_check("entropy", f"growth_fit[{d}]", abs(grow.value - target) / target, tol.growth_rel))
    return out


def bounds_suite(seed: int, tol: Tolerances, barta_samples: int = 200) -> list[Check]:
    out = []
    for d in all_domains():
        inv = geometry.invariants(d)
        lo = bounds.lambda1_lower(inv.n, 4 * inv.r)
        ev = bounds.lambda1_upper_entv(entropy.volume_entropy_formula(inv))
        ed = bounds.lambda1_upper_entd(inv, 4 * inv.r)
        ok = lo <= ev + tol.consistency and ev <= ed + tol.consistency
        ok &= (abs(lo - ev) <= tol.consistency) == (inv.r == 1 or inv.a == 0)
        bounds.entv_bound_chain(inv)
        out.append(Check("bounds", f"ordering[{d}]", bool(ok), 0.0, 0.0))
        ts = np.linspace(0.2, 10, 25)
        vals = [bounds.lambda1_lower_ball(inv, t) for t in ts]
        spot = bounds.lambda1_lower_ball(inv, math.sqrt(inv.r) * math.atanh(0.5))
        ok = bool(np.all(np.diff(vals) < 0) and vals[-1] >= lo and abs(spot - 4 * inv.n**2 / inv.r) <= 1e-9 * spot)
        out.append(Check("bounds", f"ball_bound_monotone[{d}]", ok, 0.0, 0.0))
    for name in ("disc", "ball 2", "I 2 2"):
        d = parse_domain(name)
        inv = geometry.invariants(d)
        c = bounds.optimal_barta_c(inv.n, 4 * inv.r)
        grid = np.linspace(0, 2 * c, 2001)
        peak = grid[np.argmax(bounds.barta_bound(grid, inv.n, 4 * inv.r))]
        out.append(_check("bounds", f"barta_optimum[{d}]", abs(peak - c), 2 * c / 2000))
        res = bounds.barta_verify(d, c, samples=barta_samples, h=tol.fd_step, seed=seed, tol_fd=tol.barta_fd)
        out.append(_check("bounds", f"barta_margin[{d}]", res.margin, -tol.barta_fd, f"implied bound {res.implied_bound:g}", upper=False))
        gaps = [bounds.rayleigh_quotient(d, "exp_distance", R_support=R).params["gap"] for R in (10, 15, 20)]
        out.append(Check("bounds", f"rayleigh_gap_shrinks[{d}]", bool(gaps[0] > gaps[1] > gaps[2] > 0), gaps[-1], 0.0, str(gaps)))
    return out


BATTERIES = {"algebra": algebra_suite, "geometry": geometry_suite, "entropy": entropy_suite, "bounds": bounds_suite}


def run_suite(suite: str, seed: int, tol: Tolerances | None = None) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; valid suites: {', '.join(SUITES)}")
    tol = tol or Tolerances()
    names = list(BATTERIES) if suite == "all" else [suite]
    return [c for name in names for c in BATTERIES[name](seed, tol)]
