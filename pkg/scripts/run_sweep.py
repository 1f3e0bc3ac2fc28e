"""Exhaustive sweep over words of bounded length: contractibility, ball/sphere, purity.

    python scripts/run_sweep.py --type A3 --max-len 7 --jobs 8
    python scripts/run_sweep.py --max-len 6 --list-nonpure nonpure.jsonl
"""
import argparse
import json
import sys
import time
from itertools import product

from tnnfibers.cli import sweep, system
from tnnfibers.complexes import demazure_table, purity_report, strata_poset
from tnnfibers.coxeter import format_word, parse_coxeter_type


def nonpure_pairs(matrix, max_len):
    """Yield one record per non-pure strata poset, with the weak-vs-Bruhat comparison below w."""
    sys_ = system(matrix)
    for L in range(max_len + 1):
        for word in product(range(1, matrix.rank + 1), repeat=L):
            table = demazure_table(sys_, word)
            for w in sorted({int(x) for x in table}):
                rep = purity_report(strata_poset(sys_, word, w, table=table))
                if rep.pure:
                    continue
                weak = all(sys_.bruhat_leq(u, w) == sys_.weak_leq(u, w) for u in sys_.elements)
                yield {
                    "Q": format_word(word),
                    "w": sys_.format_element(w),
                    "maximalDims": sorted(set(rep.dims)),
                    "weakEqualsBruhat": weak,
                }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--type", default="A3")
    ap.add_argument("--max-len", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--list-nonpure", metavar="PATH", help="write every non-pure pair as JSON lines")
    args = ap.parse_args(argv)

    matrix = parse_coxeter_type(args.type)
    start = time.perf_counter()
    tally = sweep(matrix, args.max_len, args.jobs)
    elapsed = time.perf_counter() - start
    print(json.dumps({"type": args.type, "maxLen": args.max_len, "seconds": round(elapsed, 1), **tally.to_json()}, indent=2))

    if args.list_nonpure:
        n = 0
        with open(args.list_nonpure, "w") as fh:
            for rec in nonpure_pairs(matrix, args.max_len):
                fh.write(json.dumps(rec) + "\n")
                n += 1
        print(f"wrote {n} non-pure pairs to {args.list_nonpure}")
    return 0 if not tally.contractible_failures and not tally.dichotomy_failures else 1


if __name__ == "__main__":
    sys.exit(main())
