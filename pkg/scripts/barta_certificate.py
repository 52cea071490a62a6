"""Sampled Barta margins at the optimal exponent for a few domains."""

from hsslab.bounds import barta_verify, optimal_barta_c
from hsslab.domains import parse_domain
from hsslab.geometry import invariants


def main():
    for text in ("disc", "ball 2", "ball 3", "I 2 2", "III 2", "II 4"):
        d = parse_domain(text)
        inv = invariants(d)
        res = barta_verify(d, optimal_barta_c(inv.n, 4 * inv.r), samples=200, seed=0)
        print(f"{text:<8} implied bound {res.implied_bound:>8.4f}  min margin {res.margin:>9.4f}  passed {res.passed}")


if __name__ == "__main__":
    main()
