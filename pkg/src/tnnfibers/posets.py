"""Finite posets: gradedness, thinness, isomorphism, CW-poset checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

BOTTOM = "0^"


class Poset:
    """A finite poset on ``elements``; relations are stored as strict up-sets of indices."""

    def __init__(self, elements: Sequence[Hashable], up: Sequence[Iterable[int]]):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("poset elements must be distinct")
        self.up = [frozenset(u) for u in up]
        n = len(self.elements)
        down: list[set[int]] = [set() for _ in range(n)]
        for i, u in enumerate(self.up):
            if i in u:
                raise ValueError("relation must be irreflexive")
            for j in u:
                down[j].add(i)
        self.down = [frozenset(d) for d in down]
        for i in range(n):
            for j in self.up[i]:
                if not self.up[j] <= self.up[i]:
                    raise ValueError("relation is not transitive")
                if i in self.up[j]:
                    raise ValueError("relation is not antisymmetric")
        self.upper_covers = [
            frozenset(j for j in self.up[i] if not any(j in self.up[k] for k in self.up[i])) for i in range(n)
        ]

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], less: Callable[[Hashable, Hashable], bool]) -> "Poset":
        els = tuple(elements)
        return cls(els, [[j for j, b in enumerate(els) if a != b and less(a, b)] for a in els])

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], covers: Iterable[tuple[int, int]]) -> "Poset":
        n = len(elements)
        succ: list[set[int]] = [set() for _ in range(n)]
        for i, j in covers:
            succ[i].add(j)
        up: list[set[int] | None] = [None] * n

        def close(i, stack=()):
            if up[i] is None:
                if i in stack:
                    raise ValueError("cover relation has a cycle")
                acc = set()
                for j in succ[i]:
                    acc.add(j)
                    acc |= close(j, stack + (i,))
                up[i] = acc
            return up[i]

        for i in range(n):
            close(i)
        return cls(elements, up)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} elements)"

    def less(self, i: int, j: int) -> bool:
        return j in self.up[i]

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.up[i]

    @property
    def covers(self) -> list[tuple[int, int]]:
        return sorted((i, j) for i in range(len(self)) for j in self.upper_covers[i])

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.down[i]]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.up[i]]

    def subposet(self, indices: Iterable[int]) -> "Poset":
        idx = sorted(indices)
        pos = {i: k for k, i in enumerate(idx)}
        return Poset([self.elements[i] for i in idx], [[pos[j] for j in self.up[i] if j in pos] for i in idx])

    def open_interval(self, i: int, j: int) -> "Poset":
        return self.subposet(self.up[i] & self.down[j])

    def with_bottom(self, label: Hashable = BOTTOM) -> "Poset":
        """Adjoin a new minimum element at index 0."""
        n = len(self)
        return Poset((label,) + self.elements, [range(1, n + 1)] + [[j + 1 for j in u] for u in self.up])

    def bottom(self) -> int | None:
        mins = self.minimal()
        return mins[0] if len(mins) == 1 else None

    def chain_lengths(self, i: int, j: int) -> tuple[int, int]:
        """(shortest, longest) number of covers along saturated chains from i up to j."""
        if i == j:
            return 0, 0
        if j not in self.up[i]:
            raise ValueError("elements are not comparable")
        memo: dict[int, tuple[int, int]] = {j: (0, 0)}

        def go(x):
            if x not in memo:
                spans = [go(y) for y in self.upper_covers[x] if y == j or j in self.up[y]]
                memo[x] = (1 + min(a for a, _ in spans), 1 + max(b for _, b in spans))
            return memo[x]

        return go(i)

    def to_json(self) -> dict:
        return {"elements": [_jsonable(e) for e in self.elements], "covers": [list(c) for c in self.covers]}


def _jsonable(e):
    if isinstance(e, (tuple, frozenset, set)):
        return sorted(e) if not isinstance(e, tuple) else list(e)
    return e


def boolean_lattice(n: int) -> Poset:
    subsets = sorted((tuple(k for k in range(1, n + 1) if m >> (k - 1) & 1) for m in range(1 << n)), key=lambda s: (len(s), s))
    return Poset.from_relation(subsets, lambda a, b: set(a) < set(b))


def chain(n: int) -> Poset:
    return Poset(range(n), [range(i + 1, n) for i in range(n)])


def antichain(n: int) -> Poset:
    return Poset(range(n), [[] for _ in range(n)])


def is_graded(poset: Poset) -> bool:
    """Every pair u < v has all saturated chains between them of equal length."""
    for i in range(len(poset)):
        for j in poset.up[i]:
            lo, hi = poset.chain_lengths(i, j)
            if lo != hi:
                return False
    return True


def is_thin(poset: Poset) -> bool:
    """Graded, and each length-2 interval has exactly two interior elements."""
    if not is_graded(poset):
        return False
    for i in range(len(poset)):
        for j in poset.up[i]:
            if poset.chain_lengths(i, j)[0] == 2 and len(poset.up[i] & poset.down[j]) != 2:
                return False
    return True


def _signature(poset: Poset, i: int) -> tuple:
    return (
        len(poset.down[i]),
        len(poset.up[i]),
        len(poset.upper_covers[i]),
        sum(1 for k in poset.down[i] if i in poset.upper_covers[k]),
    )


def poset_isomorphic(a: Poset, b: Poset) -> tuple[bool, dict | None]:
    """Backtracking isomorphism search; returns (found, witness map on elements)."""
    if len(a) != len(b) or len(a.covers) != len(b.covers):
        return False, None
    sig_a = [_signature(a, i) for i in range(len(a))]
    sig_b = [_signature(b, i) for i in range(len(b))]
    if sorted(sig_a) != sorted(sig_b):
        return False, None
    # refine once more with neighbour signatures
    refine_a = [(sig_a[i], tuple(sorted(sig_a[j] for j in a.upper_covers[i]))) for i in range(len(a))]
    refine_b = [(sig_b[i], tuple(sorted(sig_b[j] for j in b.upper_covers[i]))) for i in range(len(b))]
    if sorted(refine_a) != sorted(refine_b):
        return False, None
    order = sorted(range(len(a)), key=lambda i: (len(a.down[i]), refine_a[i]))
    candidates = {i: [j for j in range(len(b)) if refine_b[j] == refine_a[i]] for i in order}
    assign: dict[int, int] = {}
    used: set[int] = set()

    def consistent(i, j):
        for x, y in assign.items():
            if a.less(x, i) != b.less(y, j) or a.less(i, x) != b.less(j, y):
                return False
        return True

    def search(k):
        if k == len(order):
            return True
        i = order[k]
        for j in candidates[i]:
            if j not in used and consistent(i, j):
                assign[i] = j
                used.add(j)
                if search(k + 1):
                    return True
                del assign[i]
                used.discard(j)
        return False

    if not search(0):
        return False, None
    return True, {a.elements[i]: b.elements[j] for i, j in assign.items()}


@dataclass
class CWReport:
    is_cw: bool
    graded: bool
    has_bottom: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"isCW": self.is_cw, "graded": self.graded, "hasBottom": self.has_bottom,
                "failures": [_jsonable(f) for f in self.failures]}


def check_cw_poset(poset: Poset, homology_oracle: Callable | None = None) -> CWReport:
    """Check Björner's criterion: every open interval (0^, v) is a homology sphere S^{rank(v)-2}.

    ``homology_oracle(poset) -> HomologyReport`` defaults to the reduced homology
    of the order complex; spheres are certified by homology only.
    """
    if homology_oracle is None:
        from .complexes import order_complex
        from .homology import reduced_homology

        def homology_oracle(p):
            return reduced_homology(order_complex(p))

    bottom = poset.bottom()
    graded = is_graded(poset)
    if bottom is None or len(poset) < 2 or not graded:
        return CWReport(False, graded, bottom is not None)
    failures = []
    for v in range(len(poset)):
        if v == bottom:
            continue
        rank = poset.chain_lengths(bottom, v)[0]
        report = homology_oracle(poset.open_interval(bottom, v))
        if not report.is_sphere(rank - 2):
            failures.append(poset.elements[v])
    return CWReport(not failures, graded, True, failures)
