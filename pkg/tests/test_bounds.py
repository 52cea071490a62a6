import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hsslab import bounds
from hsslab.domains import DomainError, all_domains, parse_domain
from hsslab.entropy import volume_entropy_formula
from hsslab.geometry import invariants

from .oracles import (
    RAYLEIGH_BALL2_C205,
    RAYLEIGH_DISC_C105,
    RAYLEIGH_DISC_DIASTASIS_C055_R15,
    RAYLEIGH_I22_R15,
)

DOMAIN_NAMES = [str(d) for d in all_domains()]


def test_lambda1_lower_examples():
    assert bounds.lambda1_lower(1, 4) == 1
    assert bounds.lambda1_lower(3, math.inf) == 0
    assert bounds.lambda1_lower(4, 8) == 8


def test_lambda1_lower_ball_examples():
    disc, ball2, i22 = (invariants(parse_domain(t)) for t in ("disc", "ball 2", "I 2 2"))
    assert bounds.lambda1_lower_ball(disc, math.inf) == 1
    assert bounds.lambda1_lower_ball(ball2, 1.0) == pytest.approx(6.8962466439, rel=1e-10)
    assert bounds.lambda1_lower_ball(i22, 2.0) == pytest.approx(10.1364761717, rel=1e-10)


@pytest.mark.parametrize("text", DOMAIN_NAMES)
def test_lambda1_lower_ball_monotone(text):
    inv = invariants(parse_domain(text))
    # tanh^2 rounds to 1 beyond t ~ 19, so strict decrease is checked below that
    ts = np.geomspace(0.05, 10, 60)
    vals = np.array([bounds.lambda1_lower_ball(inv, t) for t in ts])
    assert np.all(np.diff(vals) < 0)
    assert bounds.lambda1_lower_ball(inv, 40.0) == pytest.approx(inv.n**2 / inv.r)
    spot = bounds.lambda1_lower_ball(inv, math.sqrt(inv.r) * math.atanh(0.5))
    assert spot == pytest.approx(4 * inv.n**2 / inv.r)


def test_euclidean_ball_bound():
    assert bounds.euclidean_ball_bound(1, 1) == (1, 1)
    assert bounds.euclidean_ball_bound(2, 2) == (1, 1)


@given(st.integers(1, 50), st.floats(0.01, 100))
def test_euclidean_cheeger_identity(n, t):
    a, b = bounds.euclidean_ball_bound(n, t)
    assert a == pytest.approx(b)


def test_upper_bound_examples():
    disc, i22 = invariants(parse_domain("disc")), invariants(parse_domain("I 2 2"))
    assert bounds.lambda1_upper_entd(disc, 4) == 1
    assert bounds.lambda1_upper_entd(i22, 8) == 18
    assert bounds.lambda1_upper_entv(2) == 1
    assert bounds.lambda1_upper_entv(2 * math.sqrt(10)) == pytest.approx(10)
    for n in (1, 2, 5):
        inv = invariants(parse_domain(f"ball {n}"))
        assert bounds.lambda1_upper_entd(inv, 4) == n**2
        assert bounds.lambda1_upper_entv(volume_entropy_formula(inv)) == pytest.approx(n**2)


def test_entv_bound_chain_examples():
    c = bounds.entv_bound_chain(invariants(parse_domain("disc")))
    assert (c["lower"], c["entv"], c["upper"]) == (2, 2, 2)
    c = bounds.entv_bound_chain(invariants(parse_domain("ball 3")))
    assert (c["lower"], c["entv"], c["upper"]) == (6, 6, 6)
    c = bounds.entv_bound_chain(invariants(parse_domain("I 2 2")))
    assert (c["lower"], c["entv"], c["upper"]) == pytest.approx((4 * math.sqrt(2), 2 * math.sqrt(10), 6 * math.sqrt(2)))
    assert not c["lower_tight"] and not c["upper_tight"]


@pytest.mark.parametrize("text", DOMAIN_NAMES)
def test_bound_ordering(text):
    inv = invariants(parse_domain(text))
    lo = bounds.lambda1_lower(inv.n, 4 * inv.r)
    ev = bounds.lambda1_upper_entv(volume_entropy_formula(inv))
    ed = bounds.lambda1_upper_entd(inv, 4 * inv.r)
    assert lo <= ev + 1e-12 <= ed + 2e-12
    assert math.isclose(lo, ev, rel_tol=1e-12) == (inv.r == 1 or inv.a == 0)


@given(st.integers(1, 20), st.integers(1, 8))
def test_barta_optimum(n, r):
    chi = 4 * r
    c_star = bounds.optimal_barta_c(n, chi)
    grid = np.linspace(0, 2 * c_star, 4001)
    vals = bounds.barta_bound(grid, n, chi)
    assert grid[np.argmax(vals)] == pytest.approx(c_star)
    assert bounds.barta_bound(c_star, n, chi) == pytest.approx(4 * n**2 / chi)


@pytest.mark.parametrize("text, implied, tol_fd", [("disc", 1, 1e-3), ("ball 2", 4, 1e-2), ("I 2 2", 8, 1e-2)])
def test_barta_certificate(text, implied, tol_fd):
    d = parse_domain(text)
    inv = invariants(d)
    res = bounds.barta_verify(d, bounds.optimal_barta_c(inv.n, 4 * inv.r), samples=200, h=1e-3, seed=0, tol_fd=tol_fd)
    assert res.implied_bound == pytest.approx(implied)
    assert res.passed and res.margin >= -tol_fd


def test_barta_useless_large_c():
    res = bounds.barta_verify(parse_domain("disc"), 2.0, samples=20)
    assert res.implied_bound == 2 * (4 - 8) and res.passed


def test_barta_on_geodesic_ball():
    d = parse_domain("disc")
    t = 1.0
    chi = 4 * math.tanh(t) ** 2
    res = bounds.barta_verify(d, bounds.optimal_barta_c(1, chi), samples=100, t=t)
    assert res.implied_bound == pytest.approx(1 / math.tanh(t) ** 2)
    assert res.passed


def test_barta_explicit_samples_and_errors():
    d = parse_domain("disc")
    res = bounds.barta_verify(d, 0.5, samples=np.array([[0.0], [0.3j]]))
    # closed form on the disc: margin 4 c^2 (1 - |z|^2)
    assert res.margin == pytest.approx(4 * 0.25 * (1 - 0.09), rel=1e-5)
    with pytest.raises(ValueError):
        bounds.barta_verify(d, 0.0)
    with pytest.raises(DomainError):
        bounds.barta_verify(d, 0.5, samples=np.array([[0.999]]))


@pytest.mark.parametrize("R", [10, 15, 20])
def test_rayleigh_matches_independent_quadrature(R):
    q = bounds.rayleigh_quotient(parse_domain("disc"), "exp_distance", c=1.05, R_support=R)
    assert q.quotient == pytest.approx(RAYLEIGH_DISC_C105[R], rel=1e-8)
    q = bounds.rayleigh_quotient(parse_domain("ball 2"), "exp_distance", c=2.05, R_support=R)
    assert q.quotient == pytest.approx(RAYLEIGH_BALL2_C205[R], rel=1e-8)
    assert q.analytic_limit == pytest.approx(2.05**2)


def test_rayleigh_rank2_and_diastasis_match_oracle():
    q = bounds.rayleigh_quotient(parse_domain("I 2 2"), "exp_distance")
    assert q.c == pytest.approx(math.sqrt(10) + 0.05)
    assert q.quotient == pytest.approx(RAYLEIGH_I22_R15, rel=1e-7)
    q = bounds.rayleigh_quotient(parse_domain("disc"), "exp_diastasis", c=0.55)
    assert q.quotient == pytest.approx(RAYLEIGH_DISC_DIASTASIS_C055_R15, rel=1e-8)


def test_rayleigh_disc_window():
    # stated window [c^2, c^2 + 0.05] at R = 15
    q = bounds.rayleigh_quotient(parse_domain("disc"), "exp_distance", c=1.05, R_support=15).quotient
    assert 1.05**2 <= q <= 1.05**2 + 0.05


def test_rayleigh_diastasis_disc_range():
    # stated range [1, (genus - 1)^2 chi / 4 + tol] at c = 0.55, R = 15
    q = bounds.rayleigh_quotient(parse_domain("disc"), "exp_diastasis", c=0.55).quotient
    assert 1.0 <= q <= 1.0 + 1e-2


@pytest.mark.parametrize("text", ["disc", "ball 2", "I 2 2"])
def test_rayleigh_gap_shrinks(text):
    d = parse_domain(text)
    gaps = [bounds.rayleigh_quotient(d, R_support=R).params["gap"] for R in (10, 15, 20)]
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_rayleigh_dominates_lower_bound_rank3():
    d = parse_domain("III 3")
    q = bounds.rayleigh_quotient(d, seed=3)
    inv = invariants(d)
    assert q.method == "mc" and q.error_bar > 0
    assert q.quotient >= bounds.lambda1_lower(inv.n, 4 * inv.r)
    assert abs(q.quotient - q.analytic_limit) < 0.1 * q.analytic_limit


def test_rayleigh_rejects_nonintegrable_c():
    with pytest.raises(DomainError, match="threshold"):
        bounds.rayleigh_quotient(parse_domain("disc"), "exp_distance", c=1.0)
    with pytest.raises(DomainError, match="threshold"):
        bounds.rayleigh_quotient(parse_domain("disc"), "exp_diastasis", c=0.5)
    with pytest.raises(ValueError):
        bounds.rayleigh_quotient(parse_domain("disc"), "exp_cosine", c=3.0)


def test_report_examples():
    r = bounds.bounds_report(parse_domain("disc"))
    assert (r.lambda1_lower, r.lambda1_upper_entv, r.lambda1_upper_entd) == pytest.approx((1, 1, 1))
    assert r.consistent and r.equality
    r = bounds.bounds_report(parse_domain("I 2 2"))
    assert (r.lambda1_lower, r.lambda1_upper_entv, r.lambda1_upper_entd) == pytest.approx((8, 10, 18))
    assert r.consistent and not r.equality
    assert r.lambda1_interval == pytest.approx([8, 10])
    r = bounds.bounds_report(parse_domain("ball 2"), t=1.0)
    assert r.lambda1_lower == pytest.approx(6.8962466439, rel=1e-10)
    assert r.lambda1_interval[1] is None and "whole-domain only" in r.upper_scope
    assert r.consistent


def test_report_certificates():
    r = bounds.bounds_report(parse_domain("I 2 2"), with_certificates=True, seed=7, barta_samples=50)
    assert r.barta_margin is not None and r.rayleigh_estimate is not None
    assert bounds.certificates_pass(r)
    assert "not proofs" in r.certificates["note"]


@pytest.mark.parametrize("text", DOMAIN_NAMES)
def test_report_never_has_point_value(text):
    fields = {f.name for f in dataclasses.fields(bounds.BoundsReport)}
    assert not {"lambda1", "lambda1_value", "lambda1_estimate"} & fields
    r = bounds.bounds_report(parse_domain(text))
    lo, hi = r.lambda1_interval
    assert lo <= hi + 1e-12
