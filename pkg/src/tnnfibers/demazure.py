"""Demazure (0-Hecke) products and the redundancy / deletion-pair combinatorics.

Positions are 1-based throughout, matching how words are written by hand.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, Word, format_word


class NotContained(ValueError):
    pass


def demazure_product(sys: CoxeterSystem, word: Sequence[int], start: int = 0) -> int:
    w = start
    dem = sys.dem
    for a in sys.check_word(word):
        w = dem[w][a - 1]
    return w


def delete_positions(word: Sequence[int], positions: Iterable[int]) -> Word:
    drop = set(positions)
    return tuple(a for j, a in enumerate(word, 1) if j not in drop)


def subword(word: Sequence[int], positions: Iterable[int]) -> Word:
    return tuple(word[j - 1] for j in sorted(positions))


def _segment(word: Sequence[int], a: int, b: int) -> Word:
    """Letters at positions a..b inclusive (empty when b < a)."""
    return tuple(word[a - 1 : b])


def _check_position(word: Sequence[int], j: int) -> None:
    if not 1 <= j <= len(word):
        raise ValueError(f"position {j} outside 1..{len(word)}")


def is_redundant(sys: CoxeterSystem, word: Sequence[int], j: int) -> bool:
    _check_position(word, j)
    return demazure_product(sys, delete_positions(word, [j])) == demazure_product(sys, word)


def is_deletion_pair(sys: CoxeterSystem, word: Sequence[int], j: int, k: int) -> bool:
    _check_position(word, j)
    _check_position(word, k)
    if not j < k:
        raise ValueError("deletion pair needs j < k")
    left, right, whole = _segment(word, j, k - 1), _segment(word, j + 1, k), _segment(word, j, k)
    return (
        sys.is_reduced(left)
        and sys.is_reduced(right)
        and sys.product(left) == sys.product(right)
        and not sys.is_reduced(whole)
    )


def _partner_ks(sys: CoxeterSystem, word: Sequence[int], j: int):
    dem = sys.dem
    s = word[j - 1] - 1
    inner = 0  # delta(word[j+1..k-1])
    outer = dem[0][s]  # delta(word[j..k-1])
    for k in range(j + 1, len(word) + 1):
        b = word[k - 1] - 1
        full = dem[outer][b]
        tail = dem[inner][b]
        if full == outer == tail != inner:
            yield k
        inner, outer = tail, full


def find_deletion_partner(sys: CoxeterSystem, word: Sequence[int], j: int) -> int | None:
    """Smallest k > j such that positions j and k are deletion partners."""
    _check_position(word, j)
    return next(_partner_ks(sys, sys.check_word(word), j), None)


def deletion_partners(sys: CoxeterSystem, word: Sequence[int], j: int) -> list[int]:
    """Every k > j forming a deletion-partner couple with j."""
    _check_position(word, j)
    return list(_partner_ks(sys, sys.check_word(word), j))


def reachable(sys: CoxeterSystem, word: Sequence[int]) -> set[int]:
    """Elements represented by some reduced subword of ``word``."""
    right, length = sys.right, sys.length
    reach = {0}
    for a in sys.check_word(word):
        reach |= {right[x][a - 1] for x in reach if length[right[x][a - 1]] > length[x]}
    return reach


def contains(sys: CoxeterSystem, word: Sequence[int], w: int) -> bool:
    return w in reachable(sys, word)


def rightmost_reduced_subword(sys: CoxeterSystem, word: Sequence[int], w: int) -> tuple[int, ...]:
    """Positions of the rightmost subword of ``word`` that is a reduced word for ``w``.

    Greedy from the right: take position j whenever its letter is a right
    descent of what remains to be built and the remainder is still reachable
    from the prefix to the left of j.
    """
    word = sys.check_word(word)
    right, length = sys.right, sys.length
    prefix = [{0}]
    for a in word:
        cur = prefix[-1]
        prefix.append(cur | {right[x][a - 1] for x in cur if length[right[x][a - 1]] > length[x]})
    if w not in prefix[-1]:
        raise NotContained(f"{format_word(word)} does not contain {sys.format_element(w)}")
    taken = []
    x = w
    for j in range(len(word), 0, -1):
        if x == 0:
            break
        xs = right[x][word[j - 1] - 1]
        if length[xs] < length[x] and xs in prefix[j - 1]:
            taken.append(j)
            x = xs
    assert x == 0
    return tuple(reversed(taken))
