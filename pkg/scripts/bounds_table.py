"""Print lower and upper first-eigenvalue bounds for every enumerated domain."""

import argparse

from hsslab.bounds import bounds_report
from hsslab.domains import all_domains


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=float, default=float("inf"))
    args = ap.parse_args()
    print(f"{'domain':<10}{'lower':>12}{'upper_entv':>12}{'upper_entd':>12}  equality")
    for d in all_domains():
        r = bounds_report(d, t=args.radius)
        print(f"{str(d):<10}{r.lambda1_lower:>12.6f}{r.lambda1_upper_entv:>12.6f}{r.lambda1_upper_entd:>12.6f}  {r.equality}")


if __name__ == "__main__":
    main()
