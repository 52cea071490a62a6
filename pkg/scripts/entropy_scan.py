"""Compare numeric entropy estimates with the closed forms on rank <= 2 domains."""

import time

from hsslab import entropy
from hsslab.domains import parse_domain
from hsslab.geometry import invariants

DOMAINS = ["disc", "ball 2", "ball 3", "I 2 2", "I 3 2", "II 4", "III 2"]


def main():
    print(f"{'domain':<8}{'scan':>8}{'formula':>9}{'growth':>10}{'formula':>10}{'seconds':>9}")
    for text in DOMAINS:
        d = parse_domain(text)
        inv = invariants(d)
        t0 = time.perf_counter()
        scan = entropy.diastatic_entropy_numeric(d)
        grow = entropy.volume_growth_numeric(d)
        elapsed = time.perf_counter() - t0
        print(
            f"{text:<8}{scan.value:>8.3f}{entropy.diastatic_entropy_formula(inv):>9d}"
            f"{grow.value:>10.4f}{entropy.volume_entropy_formula(inv):>10.4f}{elapsed:>9.2f}"
        )


if __name__ == "__main__":
    main()
