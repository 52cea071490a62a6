"""Acceptance criteria 1-8; each test records one PASS/FAIL line for the summary."""

import dataclasses
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from hsslab import bounds, entropy, geometry, jordan
from hsslab.domains import Domain, Family, all_domains, parse_domain
from hsslab.verify import jordan_residual, random_ambient, random_point, spectral_residuals

from .conftest import ACCEPTANCE_LINES

SEED = 20240601


def record(k: int, ok: bool, detail: str):
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def acceptance_domains():
    doms = [Domain(Family.I, p, q) for p in range(1, 5) for q in range(1, 5)]
    doms += [Domain(Family.II, p) for p in range(2, 6)]
    doms += [Domain(Family.III, p) for p in range(1, 5)]
    return doms


def test_criterion_1_algebra():
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    jordan_worst, spectral_worst = 0.0, 0.0
    for d in acceptance_domains():
        jordan_worst = max(jordan_worst, jordan_residual(d, *(random_ambient(d, rng, 100) for _ in range(5))))
        for _ in range(10):
            spectral_worst = max(spectral_worst, *spectral_residuals(d, random_ambient(d, rng)))
    elapsed = time.perf_counter() - t0
    ok = jordan_worst <= 1e-10 and spectral_worst <= 1e-10 and elapsed < 10
    record(1, ok, f"Jordan residual {jordan_worst:.2e}, spectral residual {spectral_worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_det_bergman():
    rng = np.random.default_rng(SEED + 1)
    worst_rel, worst_fit = 0.0, 0.0
    for d in acceptance_domains():
        gamma, _, _ = jordan.infer_structure_constants(d)
        for _ in range(100):
            z = random_point(d, rng)
            lam = jordan.point_lambdas(d, z)
            det = np.linalg.det(jordan.bergman_operator(d, z, z)).real
            expected = np.prod(1 - lam**2) ** gamma
            worst_rel = max(worst_rel, abs(det / expected - 1))
            fit = math.log(det) / np.sum(np.log1p(-(lam**2)))
            worst_fit = max(worst_fit, abs(fit - round(fit)))
    inv = jordan.domain_invariants(parse_domain("I 2 2"))
    consts = (inv.r, inv.a, inv.b, inv.genus, inv.n)
    ids = inv.genus == inv.b + 2 + inv.a * (inv.r - 1) and Fraction(inv.n) == inv.r * (inv.b + 1 + Fraction(inv.a, 2) * (inv.r - 1))
    ok = worst_rel <= 1e-8 and worst_fit < 1e-6 and consts == (2, 2, 0, 4, 4) and ids
    record(2, ok, f"det rel err {worst_rel:.2e}, integrality {worst_fit:.2e}, I(2,2) -> {consts}")


def test_criterion_3_geometry():
    rng = np.random.default_rng(SEED + 2)
    worst_grad, worst_sym, worst_zero, ratio = 0.0, 0.0, 0.0, 0.0
    for name in ("I 2 3", "II 5", "III 3", "disc"):
        d = parse_domain(name)
        for _ in range(100):
            z = random_point(d, rng, 0.9)
            exact = geometry.grad_norm_diastasis(d, z)
            worst_grad = max(worst_grad, abs(geometry.grad_norm_diastasis_fd(d, z) - exact) / exact)
        for _ in range(20):
            p, q = random_point(d, rng, 0.9), random_point(d, rng, 0.9)
            worst_sym = max(worst_sym, abs(geometry.diastasis(d, p, q) - geometry.diastasis(d, q, p)))
            worst_zero = max(worst_zero, abs(geometry.diastasis(d, p, p)))
            z = random_point(d, rng)
            z = z * rng.uniform(0.01, 0.1) / geometry.distance_from_origin(d, z)
            rho = geometry.distance_from_origin(d, z)
            ratio = max(ratio, abs(geometry.diastasis(d, np.zeros(d.n), z) - rho**2) / rho**4)
    ok = worst_grad <= 1e-5 and worst_sym <= 1e-9 and worst_zero <= 1e-9 and ratio <= 1.0
    record(3, ok, f"grad-norm rel err {worst_grad:.2e}, symmetry {worst_sym:.1e}, D_p(p) {worst_zero:.1e}, |D-rho^2|/rho^4 <= {ratio:.3f}")


def test_criterion_4_barta():
    margins, implied = [], []
    for name in ("disc", "ball 2", "I 2 2"):
        d = parse_domain(name)
        inv = geometry.invariants(d)
        c = 2 * inv.n / (4 * inv.r)
        res = bounds.barta_verify(d, c, samples=200, h=1e-3, seed=SEED)
        margins.append(res.margin)
        implied.append(res.implied_bound)
    ok = min(margins) >= -1e-2 and np.allclose(implied, [1, 4, 8], rtol=0, atol=1e-12)
    record(4, ok, f"min margins {[round(m, 4) for m in margins]}, implied bounds {implied}")


def test_criterion_5_entropy():
    details, ok = [], True
    for name, entd, entv in (("disc", 1, 2.0), ("ball 2", 2, 4.0), ("I 2 2", 3, 2 * math.sqrt(10))):
        d = parse_domain(name)
        t0 = time.perf_counter()
        scan = entropy.diastatic_entropy_numeric(d)
        t_scan = time.perf_counter() - t0
        t0 = time.perf_counter()
        grow = entropy.volume_growth_numeric(d, radii=(6, 7, 8, 9, 10, 11, 12))
        t_grow = time.perf_counter() - t0
        ok &= abs(scan.value - entd) <= 0.1 and abs(grow.value - entv) <= 0.05 * entv and max(t_scan, t_grow) < 60
        details.append(f"{name}: c*={scan.value:.3f}, slope={grow.value:.4f}")
    record(5, ok, "; ".join(details))


def test_criterion_6_bound_chain():
    ok, checked = True, 0
    for d in acceptance_domains():
        inv = geometry.invariants(d)
        entd = inv.genus - 1
        ev2 = entropy.volume_entropy_squared(inv)
        # all comparisons on squared quantities, so exact
        chi_lower2 = Fraction(16 * inv.n**2, 4 * inv.r)
        chi_upper2 = Fraction(4 * inv.r * entd**2)
        cmp_lower2 = Fraction(4 * entd**2)
        equality = inv.r == 1 or inv.a == 0
        ok &= chi_lower2 <= ev2 <= chi_upper2 and cmp_lower2 <= ev2 <= chi_upper2
        ok &= (chi_lower2 == ev2) == equality and (cmp_lower2 == ev2) == equality and (ev2 == chi_upper2) == equality
        ok &= abs(entropy.volume_entropy_formula(inv) ** 2 - ev2) <= 1e-12 * ev2
        checked += 1
    record(6, bool(ok), f"{checked} domains, exact rational comparison of squares")


def test_criterion_7_rayleigh():
    d = parse_domain("ball 2")
    c = 2.05
    q = {R: bounds.rayleigh_quotient(d, "exp_distance", c=c, R_support=R).quotient for R in (10, 15, 20)}
    gaps = [q[R] - c**2 for R in (10, 15, 20)]
    window = 4.2025 <= q[15] <= 4.26
    monotone = gaps[0] > gaps[1] > gaps[2] > 0
    record(7, window and monotone, f"quotient(R=15) = {q[15]:.4f} (window [4.2025, 4.26]: {'ok' if window else 'outside'}), gaps {[round(g, 4) for g in gaps]} monotone: {monotone}")


def test_criterion_8_interval_schema():
    names = {f.name for f in dataclasses.fields(bounds.BoundsReport)}
    point_fields = {n for n in names if n in ("lambda1", "lambda1_value", "lambda1_estimate", "lambda1_exact")}
    r = bounds.bounds_report(parse_domain("I 2 2"))
    ok = not point_fields and "lambda1_interval" in names and np.allclose(r.lambda1_interval, [8, 10])
    ok &= r.lambda1_interval[0] < r.lambda1_interval[1] and r.upper_scope == "whole-domain"
    for d in all_domains():
        rep = bounds.bounds_report(d)
        inv = geometry.invariants(d)
        lo, hi = rep.lambda1_interval
        ok &= lo == pytest.approx(inv.n**2 / inv.r) and hi == pytest.approx(entropy.volume_entropy_squared(inv) / 4)
        ok &= (lo == pytest.approx(hi)) == (inv.r == 1 or inv.a == 0)
    record(8, bool(ok), f"I(2,2) interval {[round(v, 12) for v in r.lambda1_interval]}, no point-valued field")
