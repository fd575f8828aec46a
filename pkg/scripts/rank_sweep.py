"""Sweep random special matrices and tabulate brute-force step ranks
against the determinant-valuation closed form.

    python3 scripts/rank_sweep.py -p 3 -n 2 --count 10 --seed 1
"""

import argparse
import random

from iwarank.cyclo_eval import ord_eps
from iwarank.kobayashi_rank import nabla_matrix_tower
from iwarank.lambda_ring import PrimeContext
from iwarank.verify import rand_special_matrix


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-p", type=int, default=3, help="odd prime (default 3)")
    ap.add_argument("-n", type=int, default=2, help="tower step (default 2)")
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ctx = PrimeContext(args.p)
    rng = random.Random(args.seed)

    print(f"p={args.p} n={args.n} count={args.count} seed={args.seed}")
    print(f"{'#':>3}  {'ker':>4}  {'lower':>5}  {'nabla':>5}  {'ord det':>7}  agree")
    disagreements = 0
    for i in range(args.count):
        a, _ = rand_special_matrix(ctx, rng, args.n)
        res = nabla_matrix_tower(ctx, a, args.n)
        closed = ord_eps(ctx, args.n, a.det)
        mark = "yes" if res.nabla == closed else "NO"
        if res.nabla != closed:
            disagreements += 1
            print(f"    offending matrix: {a!r}")
        print(
            f"{i:>3}  {res.ker_length:>4}  {res.lower_rank:>5}"
            f"  {res.nabla:>5}  {closed:>7}  {mark}"
        )
    print(f"disagreements: {disagreements}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
