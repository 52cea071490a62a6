"""Independent reference values frozen into the test suite.

Uses only scipy adaptive quadrature and closed forms; nothing from hsslab's
polar quadrature.  Rerun after changing a convention and update the
constants in tests/oracles.py by hand.
"""

import math

import numpy as np
from scipy import integrate


def taper(rho, R, frac=0.1):
    w = frac * R
    s = min(max((rho - (R - w)) / w, 0.0), 1.0)
    chi = 0.5 * (1 + math.cos(math.pi * s))
    dchi = -0.5 * math.pi / w * math.sin(math.pi * s) if 0 < s < 1 else 0.0
    return chi, dchi


def rank1_density(b, genus):
    return lambda t: (2 * b + 1) * math.log(math.sinh(t)) + (2 * genus - 2 * b - 3) * math.log(math.cosh(t))


def rayleigh_rank1(b, genus, c, R, kind="exp_distance"):
    logdens = rank1_density(b, genus)

    def parts(t):
        chi, dchi = taper(t, R)
        if kind == "exp_distance":
            logf2 = -2 * c * t
            grad2 = (c * chi - dchi) ** 2
        else:
            D = 2 * math.log(math.cosh(t))
            logf2 = -2 * c * D
            grad2 = (c * chi * 2 * math.tanh(t) - dchi) ** 2
        # constant rescale keeps the integrand O(1); cancels in the ratio
        base = math.exp(logdens(t) + logf2 - (2 * genus - 2 - 2 * c) * R)
        return base * grad2, base * chi**2

    pts = [0.9 * R]
    num = integrate.quad(lambda t: parts(t)[0], 1e-12, R, points=pts, limit=400, epsabs=0, epsrel=1e-12)[0]
    den = integrate.quad(lambda t: parts(t)[1], 1e-12, R, points=pts, limit=400, epsabs=0, epsrel=1e-12)[0]
    return num / den


def rayleigh_rank2_I22(c, R):
    """I(2,2): (a, b, genus) = (2, 0, 4), density sinh t cosh^5 t per coordinate times (tanh^2 - tanh^2)^2."""

    def dens(t1, t2):
        return (
            math.sinh(t1) * math.cosh(t1) ** 5 * math.sinh(t2) * math.cosh(t2) ** 5 * (math.tanh(t1) ** 2 - math.tanh(t2) ** 2) ** 2
        )

    def integrand(th, rho, which):
        t1, t2 = rho * math.cos(th), rho * math.sin(th)
        chi, dchi = taper(rho, R)
        w = dens(t1, t2) * math.exp(-2 * c * rho - (12 - 2 * c) * R) * rho
        return w * ((c * chi - dchi) ** 2 if which == 0 else chi**2)

    out = []
    for which in (0, 1):
        inner = lambda rho: integrate.quad(integrand, 0, math.pi / 4, args=(rho, which), epsrel=1e-11)[0]
        out.append(sum(integrate.quad(inner, a, b, epsrel=1e-11, limit=200)[0] for a, b in [(0, 0.9 * R), (0.9 * R, R)]))
    return out[0] / out[1]


def disc_barta_quotient(c, s):
    """Delta phi / phi for phi = (1 - |z|^2)^c on the disc, at |z|^2 = s (geometers' sign)."""
    return 4 * c - 4 * c**2 * s


def main():
    np.set_printoptions(precision=12)
    for R in (10, 15, 20):
        print(f"disc exp_distance c=1.05 R={R}: {rayleigh_rank1(0, 2, 1.05, R):.10f}")
        print(f"ball2 exp_distance c=2.05 R={R}: {rayleigh_rank1(1, 3, 2.05, R):.10f}")
    print(f"disc exp_diastasis c=0.55 R=15: {rayleigh_rank1(0, 2, 0.55, 15, 'exp_diastasis'):.10f}")
    c = math.sqrt(10) + 0.05
    print(f"I22 exp_distance c={c:.6f} R=15: {rayleigh_rank2_I22(c, 15):.10f}")
    print(f"disc Barta quotient c=0.5 s=0.25: {disc_barta_quotient(0.5, 0.25):.10f}")


if __name__ == "__main__":
    main()
