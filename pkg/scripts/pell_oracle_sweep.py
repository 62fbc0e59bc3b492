"""Compare the Pell decision procedure against bounded brute force on random instances.

    python scripts/pell_oracle_sweep.py --count 1000 --max-coef 60 --max-n 2000 --bound 3000 --seed 1
"""

from __future__ import annotations

import argparse
import random
import sys
from collections import Counter

from phisigma.arith import is_square
from phisigma.pell import PellInstance, brute_force_search, decide, verify_decision


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--max-coef", type=int, default=50)
    ap.add_argument("--max-n", type=int, default=1000)
    ap.add_argument("--bound", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally: Counter[str] = Counter()
    done = 0
    while done < args.count:
        A, B = rng.randint(1, args.max_coef), rng.randint(1, args.max_coef)
        N = rng.randint(-args.max_n, args.max_n)
        if N == 0 or is_square(A * B):
            continue
        inst = PellInstance(A, B, N)
        dec = decide(inst)
        verify_decision(dec)
        found = brute_force_search(inst, args.bound)
        if found and not dec.sat:
            tally["missed solution"] += 1
            print(f"MISSED {inst}: brute force found {found[0]}", file=sys.stderr)
        elif dec.sat and not found:
            tally["SAT beyond bound"] += 1
        elif dec.sat:
            tally["SAT, both agree"] += 1
        else:
            tally["UNSAT, both agree"] += 1
        done += 1
    for key, n in sorted(tally.items()):
        print(f"{key:>20}: {n}")
    return 1 if tally["missed solution"] else 0


if __name__ == "__main__":
    sys.exit(main())
