"""Random fiber probes in type A: stratification witnesses plus t_max cross-check counters.

    python scripts/fiber_probe_corpus.py --count 300 --n 4 --max-len 7 --seed 1 --out probes.jsonl
"""
import argparse
import json
import random
import sys
import time
from fractions import Fraction

from tnnfibers.fiber import STATS, FiberContext, enumerate_strata


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--n", type=int, default=4, help="matrix size")
    ap.add_argument("--min-len", type=int, default=2)
    ap.add_argument("--max-len", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="JSON lines file for the per-instance reports")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    STATS.reset()
    bad = 0
    strata = 0
    start = time.perf_counter()
    out = open(args.out, "w") if args.out else None
    try:
        for _ in range(args.count):
            q = tuple(rng.randint(1, args.n - 1) for _ in range(rng.randint(args.min_len, args.max_len)))
            params = [Fraction(rng.randint(1, 12), rng.randint(1, 12)) for _ in q]
            ctx = FiberContext.build(q, params=params, n=args.n)
            _, report = enumerate_strata(ctx)
            strata += len(report.strata)
            bad += not report.isomorphic
            if out:
                out.write(json.dumps(report.to_json()) + "\n")
    finally:
        if out:
            out.close()
    summary = {
        "instances": args.count,
        "strata": strata,
        "nonIsomorphic": bad,
        "tMaxCalls": STATS.calls,
        "twoPathChecks": STATS.fallback_checks,
        "disagreements": STATS.disagreements,
        "seconds": round(time.perf_counter() - start, 1),
    }
    print(json.dumps(summary, indent=2))
    return 0 if bad == 0 and STATS.disagreements == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
