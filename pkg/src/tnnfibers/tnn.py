"""Type-A totally nonnegative numerics over exact rationals.

Matrices are tuples of row tuples of ``Fraction``; letters are 1-based, so
``x_i(t)`` puts ``t`` at 0-based slot ``[i-1][i]``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .coxeter import CoxeterSystem, type_a
from .homology import TooLarge

Matrix = tuple[tuple[Fraction, ...], ...]
MAX_N = 7


class DimensionMismatch(ValueError):
    pass


class NotInCell(ValueError):
    pass


class NotTNN(ValueError):
    pass


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def format_fraction(x: Fraction) -> str:
    return str(x)


def parse_params(text: str) -> tuple[Fraction, ...]:
    text = text.strip()
    return tuple(parse_fraction(p) for p in text.split(",")) if text else ()


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if r == c else zero for c in range(n)) for r in range(n))


def as_matrix(rows) -> Matrix:
    """Validate and convert to an exact upper unitriangular matrix."""
    m = tuple(tuple(frac(x) for x in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("matrix must be square")
    for r in range(n):
        if m[r][r] != 1 or any(m[r][c] for c in range(r)):
            raise ValueError("matrix must be upper unitriangular")
    return m


def matrix_to_json(p: Matrix) -> list[list[str]]:
    return [[format_fraction(x) for x in row] for row in p]


def matrix_from_json(data) -> Matrix:
    return as_matrix([[parse_fraction(str(x)) for x in row] for row in data])


def chevalley(n: int, i: int, t) -> Matrix:
    if not 1 <= i < n:
        raise DimensionMismatch(f"letter {i} out of range for n={n}")
    m = [list(row) for row in identity(n)]
    m[i - 1][i] = frac(t)
    return tuple(map(tuple, m))


def left_apply(p: Matrix, i: int, s) -> Matrix:
    """x_i(s) · p, i.e. row i += s * row i+1."""
    s = frac(s)
    if not s:
        return p
    rows = list(p)
    rows[i - 1] = tuple(a + s * b for a, b in zip(p[i - 1], p[i]))
    return tuple(rows)


def right_apply(p: Matrix, i: int, s) -> Matrix:
    """p · x_i(s), i.e. column i+1 += s * column i."""
    s = frac(s)
    if not s:
        return p
    return tuple(row[:i] + (row[i] + s * row[i - 1],) + row[i + 1 :] for row in p)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def evaluate(n: int, word: Sequence[int], t: Sequence) -> Matrix:
    if len(word) != len(t):
        raise DimensionMismatch(f"{len(word)} letters but {len(t)} parameters")
    p = identity(n)
    for a, x in zip(word, t):
        if not 1 <= a < n:
            raise DimensionMismatch(f"letter {a} out of range for n={n}")
        p = right_apply(p, a, x)
    return p


def antitranspose(p: Matrix) -> Matrix:
    """J pᵀ J; sends x_i(t) to x_{n-i}(t) and reverses products."""
    n = len(p)
    return tuple(tuple(p[n - 1 - c][n - 1 - r] for c in range(n)) for r in range(n))


@lru_cache(maxsize=1 << 14)
def all_minors(p: Matrix) -> dict[tuple[int, int], Fraction]:
    """Every square minor keyed by (row bitmask, column bitmask), by first-row Laplace expansion."""
    n = len(p)
    if n > MAX_N:
        raise TooLarge(f"n={n} exceeds the minor-enumeration cap {MAX_N}")
    minors: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            rmask = sum(1 << r for r in rows)
            r0 = rows[0]
            rest = rmask & ~(1 << r0)
            prow = p[r0]
            for cols in combinations(range(n), k):
                total = Fraction(0)
                sign = 1
                cmask = sum(1 << c for c in cols)
                for c in cols:
                    x = prow[c]
                    if x:
                        total += sign * x * minors[rest, cmask & ~(1 << c)]
                    sign = -sign
                minors[rmask, cmask] = total
    return minors


def is_tnn(p: Matrix) -> bool:
    return all(v >= 0 for v in all_minors(p).values())


@lru_cache(maxsize=1 << 15)
def extraction_bound(p: Matrix, i: int) -> Fraction:
    """Largest s >= 0 such that x_i(-s) · p is still totally nonnegative.

    Left multiplication by x_i(-s) changes only the minors using row i but not
    row i+1, each by -s times the minor with row i swapped for row i+1.
    """
    minors = all_minors(p)
    bi, bj = 1 << (i - 1), 1 << i
    best = None
    for (rmask, cmask), val in minors.items():
        if rmask & bi and not rmask & bj:
            slope = minors[(rmask ^ bi) | bj, cmask]
            if slope > 0:
                q = val / slope
                if best is None or q < best:
                    best = q
    assert best is not None  # the 1x1 minor (i, i+1) always qualifies
    return max(best, Fraction(0))


def right_extraction_bound(p: Matrix, i: int) -> Fraction:
    """Largest s >= 0 such that p · x_i(-s) is totally nonnegative."""
    return extraction_bound(antitranspose(p), len(p) - i)


def factorize(p: Matrix, word: Sequence[int]) -> tuple[Fraction, ...]:
    """Parameters of p along a reduced word for its cell, by left extraction."""
    residue = p
    params = []
    for a in word:
        t = extraction_bound(residue, a)
        if t <= 0:
            raise NotInCell(f"extraction hit 0 at letter {a}")
        params.append(t)
        residue = left_apply(residue, a, -t)
    if residue != identity(len(p)) or evaluate(len(p), word, params) != p:
        raise NotInCell("factorization does not reproduce the matrix")
    return tuple(params)


def system_for(n: int) -> CoxeterSystem:
    return type_a(n - 1)


def cell_of(p: Matrix) -> tuple[int, tuple[int, ...], tuple[Fraction, ...]]:
    """(w, extraction word, parameters): greedy left extraction, smallest letter first."""
    n = len(p)
    if not is_tnn(p):
        raise NotTNN("matrix is not totally nonnegative")
    sys = system_for(n)
    ident = identity(n)
    word: list[int] = []
    params: list[Fraction] = []
    residue = p
    while residue != ident:
        if len(word) > sys.length[sys.longest]:
            raise NotInCell("extraction did not terminate within the longest length")
        for i in range(1, n):
            t = extraction_bound(residue, i)
            if t > 0:
                break
        else:
            raise NotInCell("no extractable letter but the residue is not the identity")
        word.append(i)
        params.append(t)
        residue = left_apply(residue, i, -t)
    if not sys.is_reduced(word):
        raise NotInCell(f"extraction word {word} is not reduced")
    return sys.product(word), tuple(word), tuple(params)
