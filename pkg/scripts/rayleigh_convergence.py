"""Rayleigh quotient of the tapered exponential test function against its support radius."""

import argparse

from hsslab.bounds import rayleigh_quotient
from hsslab.domains import parse_domain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("domain", nargs="+", help='e.g. "ball 2"')
    ap.add_argument("--c", type=float, default=None)
    ap.add_argument("--kind", default="exp_distance", choices=["exp_distance", "exp_diastasis"])
    ap.add_argument("--radii", type=float, nargs="+", default=[10, 15, 20, 25, 30])
    args = ap.parse_args()
    d = parse_domain(" ".join(args.domain))
    print(f"{'R':>6}{'quotient':>12}{'limit':>10}{'gap':>10}{'method':>12}")
    for R in args.radii:
        q = rayleigh_quotient(d, args.kind, c=args.c, R_support=R)
        print(f"{R:>6g}{q.quotient:>12.6f}{q.analytic_limit:>10.4f}{q.params['gap']:>10.5f}{q.method:>12}")


if __name__ == "__main__":
    main()
