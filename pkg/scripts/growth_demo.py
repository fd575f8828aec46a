"""Print cumulative Sha-growth tables for a few invariant profiles.

    python3 scripts/growth_demo.py --n-to 6
"""

import argparse

from iwarank.growth_model import InvariantSet, sha_growth

PROFILES = [
    ("trivial invariants", InvariantSet(3, 0, 0, 0, 0, 0)),
    ("lambda_minus = 1, r_inf = 2", InvariantSet(3, 0, 1, 0, 0, 2)),
    ("mu_plus = 1", InvariantSet(3, 0, 0, 1, 0, 0)),
    ("p = 5, lambda_plus = 3", InvariantSet(5, 3, 0, 0, 0, 1)),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-to", type=int, default=5, help="last level (default 5)")
    ap.add_argument("--base-e", type=int, default=0, help="e_0 baseline (default 0)")
    args = ap.parse_args()

    for label, inv in PROFILES:
        table = sha_growth(inv, range(1, args.n_to + 1), (0, args.base_e))
        print(f"# {label}  (p={inv.p})")
        print(table.to_csv(), end="")
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
