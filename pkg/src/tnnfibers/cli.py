"""Command-line interface: ``tnnfibers <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys as _sys
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from multiprocessing import Pool

import numpy as np

from .complexes import (
    EmptyComplexNotice,
    demazure_table,
    order_complex,
    purity_report,
    strata_poset,
    subword_complex,
)
from .coxeter import (
    CoxeterMatrix,
    GroupTooLarge,
    NotReduced,
    NotSameElement,
    braid_path,
    build_system,
    format_word,
    named_matrix,
    parse_coxeter_type,
    parse_word,
)
from .demazure import NotContained, contains, demazure_product
from .fiber import FiberContext, WitnessFailed, enumerate_strata
from .homology import TooLarge, reduced_homology, verdict
from .tnn import DimensionMismatch, parse_params


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


@lru_cache(maxsize=None)
def system(matrix: CoxeterMatrix):
    return build_system(matrix)


def _system(args):
    try:
        matrix = parse_coxeter_type(args.type)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"--type: {exc}") from exc
    return matrix, system(matrix)


def _word(sys, text, flag="--word"):
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return sys.check_word(parse_word(text))
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc} (expected comma-separated generator indices like 1,3,2)") from exc


def _target(sys, args):
    # --w is read as an ordinary product, not a Demazure product
    return sys.product(_word(sys, args.w, "--w"))


def _emit(args, data, text):
    if (args.format or args.default_format) == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_group(args):
    matrix, sys = _system(args)
    data = {
        "rank": sys.rank,
        "order": len(sys),
        "longest": sys.format_element(sys.longest),
        "longestLength": sys.length[sys.longest],
        "matrix": [list(r) for r in matrix.m],
    }
    _emit(args, data, f"rank {sys.rank}, order {len(sys)}, longest {data['longest']} (length {data['longestLength']})")


def cmd_demazure(args):
    _, sys = _system(args)
    word = _word(sys, args.word)
    w = demazure_product(sys, word)
    data = {"word": list(word), "element": sys.format_element(w), "length": sys.length[w], "reduced": sys.is_reduced(word)}
    _emit(args, data, f"{data['element']} (length {data['length']})")


def _word_and_target(args):
    _, sys = _system(args)
    word = _word(sys, args.word)
    w = _target(sys, args)
    if not contains(sys, word, w):
        raise UsageError(f"{format_word(word)} does not contain {sys.format_element(w)}")
    return sys, word, w


def cmd_subword_complex(args):
    sys, word, w = _word_and_target(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyComplexNotice)
        cx = subword_complex(sys, word, w)
    sphere = demazure_product(sys, word) == w
    d = len(word) - sys.length[w] - 1
    ok = verdict(cx, d, "sphere" if sphere else "ball")
    data = cx.to_json() | {
        "homology": reduced_homology(cx).to_json(),
        "expected": "sphere" if sphere else "ball",
        "dim": d,
        "verdict": ok,
    }
    _emit(args, data, f"{len(cx.facets)} facets, dim {cx.dim}, expected {data['expected']}: {'ok' if ok else 'FAIL'}")
    if not ok:
        raise VerificationFailed("subword complex verdict failed")


def cmd_strata_poset(args):
    sys, word, w = _word_and_target(args)
    poset = strata_poset(sys, word, w)
    pur = purity_report(poset)
    data = poset.to_json() | {"pure": pur.pure, "maximalDims": sorted(set(pur.dims))}
    counts = {d: poset.dims.count(d) for d in sorted(set(poset.dims))}
    _emit(args, data, f"{len(poset)} elements, cells by dim {counts}, pure: {pur.pure}")


def cmd_homology(args):
    sys, word, w = _word_and_target(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyComplexNotice)
        sub = reduced_homology(subword_complex(sys, word, w))
    dual = reduced_homology(order_complex(strata_poset(sys, word, w)))
    data = {"subwordComplex": sub.to_json(), "strataOrderComplex": dual.to_json(), "strataAcyclic": dual.is_acyclic()}
    _emit(args, data, f"subword complex {sub.to_json()}\nstrata order complex {dual.to_json()}")
    if not dual.is_acyclic():
        raise VerificationFailed("strata order complex is not acyclic")


def cmd_fiber_probe(args):
    matrix, sys = _system(args)
    if matrix != named_matrix(f"A{sys.rank}"):
        raise UsageError("fiber-probe needs a type A system")
    word = _word(sys, args.word)
    if args.params is None:
        raise UsageError("--params is required")
    try:
        params = parse_params(args.params)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--params: {exc}") from exc
    if len(params) != len(word) or any(t <= 0 for t in params):
        raise UsageError("--params needs one positive rational per letter")
    try:
        ctx = FiberContext.build(word, params=params, n=sys.rank + 1)
        _, report = enumerate_strata(ctx)
    except DimensionMismatch as exc:
        raise UsageError(str(exc)) from exc
    except WitnessFailed as exc:
        raise VerificationFailed(str(exc)) from exc
    data = report.to_json()
    _emit(
        args,
        data,
        f"w = {report.w}: {len(report.strata)} strata witnessed, {len(report.empty_certificates)} empty, "
        f"isomorphic: {report.isomorphic}",
    )
    if not report.isomorphic:
        raise VerificationFailed("witnessed poset is not isomorphic to the strata poset")


def cmd_braid_path(args):
    _, sys = _system(args)
    src = _word(sys, args.word)
    dst = _word(sys, args.to, "--to")
    try:
        moves = braid_path(sys, src, dst)
    except (NotReduced, NotSameElement) as exc:
        raise UsageError(str(exc)) from exc
    data = {"from": list(src), "to": list(dst), "moves": [{"pos": m.position, "kind": m.kind} for m in moves]}
    _emit(args, data, f"{len(moves)} moves: " + " ".join(f"{m.kind}@{m.position}" for m in moves))


@dataclass
class SweepTally:
    pairs: int = 0
    contractible_failures: list = field(default_factory=list)
    dichotomy_failures: list = field(default_factory=list)
    nonpure: int = 0
    nonpure_weak_equals_bruhat: int = 0
    spheres: int = 0

    def add(self, other: "SweepTally"):
        self.pairs += other.pairs
        self.contractible_failures += other.contractible_failures
        self.dichotomy_failures += other.dichotomy_failures
        self.nonpure += other.nonpure
        self.nonpure_weak_equals_bruhat += other.nonpure_weak_equals_bruhat
        self.spheres += other.spheres

    def to_json(self) -> dict:
        return {
            "pairs": self.pairs,
            "spheres": self.spheres,
            "contractibleFailures": self.contractible_failures,
            "dichotomyFailures": self.dichotomy_failures,
            "nonPure": self.nonpure,
            "nonPureWithWeakEqualsBruhat": self.nonpure_weak_equals_bruhat,
        }


@lru_cache(maxsize=None)
def _weak_equals_bruhat(matrix: CoxeterMatrix, w: int) -> bool:
    sys = system(matrix)
    return all(sys.bruhat_leq(u, w) == sys.weak_leq(u, w) for u in sys.elements)


def sweep_word(matrix: CoxeterMatrix, word: tuple[int, ...]) -> SweepTally:
    """Check contractibility of ∇(Q,w) and the ball/sphere dichotomy for every w in Q."""
    sys = system(matrix)
    tally = SweepTally()
    table = demazure_table(sys, word)
    top = int(table[-1])
    for w in np.unique(table):
        w = int(w)
        tally.pairs += 1
        label = [format_word(word), sys.format_element(w)]
        poset = strata_poset(sys, word, w, table)
        if not reduced_homology(order_complex(poset)).is_acyclic():
            tally.contractible_failures.append(label)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyComplexNotice)
            cx = subword_complex(sys, word, w, table)
        d = len(word) - sys.length[w] - 1
        if w == top:
            tally.spheres += 1
        if not verdict(cx, d, "sphere" if w == top else "ball"):
            tally.dichotomy_failures.append(label)
        if not purity_report(poset).pure:
            tally.nonpure += 1
            if _weak_equals_bruhat(matrix, w):
                tally.nonpure_weak_equals_bruhat += 1
    return tally


def _sweep_star(task):
    return sweep_word(*task)


def sweep(matrix: CoxeterMatrix, max_len: int, jobs: int = 1) -> SweepTally:
    r = matrix.rank
    tasks = [(matrix, w) for L in range(max_len + 1) for w in iproduct(range(1, r + 1), repeat=L)]
    total = SweepTally()
    if jobs > 1:
        with Pool(jobs) as pool:
            for t in pool.imap(_sweep_star, tasks, chunksize=16):
                total.add(t)
    else:
        for t in map(_sweep_star, tasks):
            total.add(t)
    return total


def cmd_sweep(args):
    matrix, _ = _system(args)
    if args.max_len is None or args.max_len < 0:
        raise UsageError("--max-len must be a nonnegative integer")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    tally = sweep(matrix, args.max_len, args.jobs)
    data = tally.to_json()
    ok = not tally.contractible_failures and not tally.dichotomy_failures
    text = (
        f"{tally.pairs} pairs (Q, w) up to length {args.max_len}, {tally.spheres} sphere cases\n"
        f"contractibility failures: {len(tally.contractible_failures)}\n"
        f"ball/sphere failures: {len(tally.dichotomy_failures)}\n"
        f"non-pure strata posets: {tally.nonpure} "
        f"({tally.nonpure_weak_equals_bruhat} with weak order = Bruhat order below w)"
    )
    _emit(args, data, text)
    if not ok:
        raise VerificationFailed("sweep found failures")


COMMANDS = {
    "group": (cmd_group, "text", "enumerate the group and summarize it"),
    "demazure": (cmd_demazure, "text", "Demazure product of a word"),
    "subword-complex": (cmd_subword_complex, "json", "facets and ball/sphere verdict of Δ(Q, w)"),
    "strata-poset": (cmd_strata_poset, "json", "the poset {P ⊆ Q : δ(P) = w} with dims and purity"),
    "homology": (cmd_homology, "json", "reduced homology of Δ(Q, w) and of the strata order complex"),
    "fiber-probe": (cmd_fiber_probe, "json", "witness every stratum of a type A fiber"),
    "braid-path": (cmd_braid_path, "text", "shortest braid-move path between two reduced words"),
    "sweep": (cmd_sweep, "text", "contractibility and ball/sphere sweep over all short words"),
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tnnfibers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, fmt, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--type", default="A3", help="series token (A3, B3, I2:5) or JSON rows / JSON file")
        p.add_argument("--format", choices=("json", "text"))
        p.set_defaults(func=func, default_format=fmt)
        if name not in ("group", "sweep"):
            p.add_argument("--word", help="comma-separated letters, e.g. 1,3,2,1,3,2")
        if name in ("subword-complex", "strata-poset", "homology"):
            p.add_argument("--w", help="word for w, read as an ordinary product")
        if name == "fiber-probe":
            p.add_argument("--params", help="positive rationals, e.g. 1/6,1/6,1/3")
        if name == "braid-path":
            p.add_argument("--to", help="target reduced word")
        if name == "sweep":
            p.add_argument("--max-len", type=int, default=7)
            p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except (GroupTooLarge, TooLarge, NotContained) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=_sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
