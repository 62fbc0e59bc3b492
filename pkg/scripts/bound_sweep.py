"""Robustness of the triple bound: how the candidate sets change as the bound grows.

For each phase k and each bound in the sweep, prints the candidate c values
(optionally unfiltered) so that new values past 3992 would be visible.

    python scripts/bound_sweep.py --bounds 1000 2000 3992 7984 15968 --workers 4
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from phisigma.search import C_CLASS, TRIPLE_BOUND, enumerate_candidates


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bounds", type=int, nargs="+", default=[500, 1000, 2000, TRIPLE_BOUND, 2 * TRIPLE_BOUND])
    ap.add_argument("--ks", type=int, nargs="+", default=list(range(6)))
    ap.add_argument("--formula", choices=("closed", "lemma"), default="closed")
    ap.add_argument("--unfiltered", action="store_true", help="keep every positive integer c, not just 17 mod 30")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    writer = csv.writer(sys.stdout)
    writer.writerow(["k", "bound", "count", "seconds", "c_values"])
    baseline: dict[int, set[int]] = {}
    for k in args.ks:
        for bound in sorted(args.bounds):
            start = time.perf_counter()
            cands = enumerate_candidates(
                k, bound, residue_filter=None if args.unfiltered else C_CLASS,
                formula=args.formula, workers=args.workers,
            )
            cs = [c.c for c in cands]
            writer.writerow([k, bound, len(cs), f"{time.perf_counter() - start:.2f}", " ".join(map(str, cs))])
            if bound == TRIPLE_BOUND:
                baseline[k] = set(cs)
            elif bound > TRIPLE_BOUND and k in baseline and set(cs) - baseline[k]:
                print(f"# k={k}: bound {bound} adds {sorted(set(cs) - baseline[k])}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
