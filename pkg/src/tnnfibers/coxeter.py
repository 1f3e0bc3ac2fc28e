"""Finite Coxeter systems with fully enumerated Cayley tables.

Elements are plain integer ids.  Id 0 is the identity and the remaining ids
follow shortlex order of the normal forms (length first, then lexicographic
order of the shortlex-minimal reduced word).  Words are tuples of 1-based
generator indices.

Enumeration proceeds level by level in length.  The only nontrivial step is
deciding, for a new element ``v = w*s``, which other generators ``t`` are right
descents of ``v``.  That happens exactly when ``v`` has a reduced expression
ending in the longest element of the rank-2 parabolic ``<s, t>``, which can be
read off from the descent data of shorter elements by stripping the alternating
suffix ``...s t`` from ``w``.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

Word = tuple[int, ...]

DEFAULT_SIZE_CAP = 50_000


class GroupTooLarge(RuntimeError):
    """Enumeration exceeded the size cap (or the group is infinite)."""


class NotADescent(ValueError):
    pass


class NotReduced(ValueError):
    pass


class NotSameElement(ValueError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        r = len(self.m)
        if r == 0:
            raise ValueError("Coxeter matrix must have positive rank")
        for i, row in enumerate(self.m):
            if len(row) != r:
                raise ValueError("Coxeter matrix must be square")
            for j, x in enumerate(row):
                if not isinstance(x, int):
                    raise ValueError(f"entry m({i + 1},{j + 1}) = {x!r} is not an integer")
                if i == j and x != 1:
                    raise ValueError(f"diagonal entry m({i + 1},{i + 1}) must be 1")
                if i != j and x < 2:
                    raise ValueError(f"off-diagonal entry m({i + 1},{j + 1}) must be >= 2")
                if x != self.m[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CoxeterMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.m)

    def __call__(self, i: int, j: int) -> int:
        """Order of s_i s_j, with 1-based indices."""
        return self.m[i - 1][j - 1]


def _from_edges(rank: int, edges: dict[tuple[int, int], int]) -> CoxeterMatrix:
    m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
    for (i, j), v in edges.items():
        m[i - 1][j - 1] = m[j - 1][i - 1] = v
    return CoxeterMatrix.from_rows(m)


def named_matrix(token: str) -> CoxeterMatrix:
    """Coxeter matrix for a series token such as ``A3``, ``B4``, ``D4``, ``I2:5``."""
    tok = token.strip().upper()
    if tok.startswith("I2:"):
        return _from_edges(2, {(1, 2): int(tok[3:])})
    series, digits = tok[:1], tok[1:]
    if not digits.isdigit():
        raise ValueError(f"unrecognized Coxeter type {token!r}")
    n = int(digits)
    if n < 1:
        raise ValueError(f"rank must be positive in {token!r}")
    chain = {(i, i + 1): 3 for i in range(1, n)}
    if series == "A":
        return _from_edges(n, chain)
    if series in ("B", "C") and n >= 2:
        chain[(n - 1, n)] = 4
        return _from_edges(n, chain)
    if series == "D" and n >= 4:
        edges = {(i, i + 1): 3 for i in range(1, n - 1)}
        edges[(n - 2, n)] = 3
        return _from_edges(n, edges)
    if series == "E" and n in (6, 7, 8):
        edges = {(1, 3): 3, (2, 4): 3, (3, 4): 3}
        edges.update({(i, i + 1): 3 for i in range(4, n)})
        return _from_edges(n, edges)
    if series == "F" and n == 4:
        return _from_edges(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3})
    if series == "G" and n == 2:
        return _from_edges(2, {(1, 2): 6})
    if series == "H" and n in (3, 4):
        edges = {(1, 2): 5, (2, 3): 3}
        if n == 4:
            edges[(3, 4)] = 3
        return _from_edges(n, edges)
    raise ValueError(f"unrecognized Coxeter type {token!r}")


def parse_coxeter_type(text: str) -> CoxeterMatrix:
    """Accept a series token, a path to a JSON file of rows, or literal JSON rows."""
    text = text.strip()
    if text.startswith("["):
        return CoxeterMatrix.from_rows(json.loads(text))
    if os.path.exists(text):
        with open(text) as fh:
            return CoxeterMatrix.from_rows(json.load(fh))
    return named_matrix(text)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(a) for a in word)


class BraidMove(NamedTuple):
    position: int  # 1-based start of the alternating run
    kind: str  # "long" or "short"


class CoxeterSystem:
    """A finite Coxeter group with right/left Cayley tables.

    Generators are 1-based in every public method; ``right[w][s-1]`` is the
    table entry for ``w * s_s``.
    """

    def __init__(self, matrix: CoxeterMatrix, right, left, length, normal_form, inverse, size_cap):
        self.matrix = matrix
        self.rank = matrix.rank
        self.right: list[tuple[int, ...]] = right
        self.left: list[tuple[int, ...]] = left
        self.length: list[int] = length
        self.normal_form: list[Word] = normal_form
        self.inverse: list[int] = inverse
        self.size_cap = size_cap
        self.identity = 0
        self.longest = max(range(len(length)), key=length.__getitem__)
        # dem[w][s-1] = Demazure product of w with s_s
        self.dem: list[tuple[int, ...]] = [
            tuple(x if length[x] > length[w] else w for x in row) for w, row in enumerate(right)
        ]

    def __len__(self) -> int:
        return len(self.length)

    def __repr__(self) -> str:
        return f"CoxeterSystem(rank={self.rank}, order={len(self)})"

    @property
    def elements(self) -> range:
        return range(len(self.length))

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        for a in word:
            if not 1 <= a <= self.rank:
                raise ValueError(f"letter {a} outside generator range 1..{self.rank}")
        return word

    def product(self, word: Sequence[int]) -> int:
        w = 0
        right = self.right
        for a in self.check_word(word):
            w = right[w][a - 1]
        return w

    def mul(self, u: int, v: int) -> int:
        for a in self.normal_form[v]:
            u = self.right[u][a - 1]
        return u

    def is_reduced(self, word: Sequence[int]) -> bool:
        word = self.check_word(word)
        return self.length[self.product(word)] == len(word)

    def right_descents(self, w: int) -> tuple[int, ...]:
        lw = self.length[w]
        return tuple(s + 1 for s, ws in enumerate(self.right[w]) if self.length[ws] < lw)

    def left_descents(self, w: int) -> tuple[int, ...]:
        lw = self.length[w]
        return tuple(s + 1 for s, sw in enumerate(self.left[w]) if self.length[sw] < lw)

    def element(self, word_or_id) -> int:
        if isinstance(word_or_id, int):
            if not 0 <= word_or_id < len(self):
                raise ValueError(f"invalid element id {word_or_id}")
            return word_or_id
        return self.product(word_or_id)

    def format_element(self, w: int) -> str:
        nf = self.normal_form[w]
        return "".join(f"s{a}" for a in nf) if nf else "e"

    def bruhat_leq(self, u: int, w: int) -> bool:
        """Bruhat order test by descent recursion (lifting property)."""
        length, right = self.length, self.right
        while True:
            if u == w:
                return True
            if length[u] >= length[w]:
                return False
            if u == 0:
                return True
            row = right[w]
            lw = length[w]
            s = next(i for i, x in enumerate(row) if length[x] < lw)
            us = right[u][s]
            if length[us] < length[u]:
                u = us
            w = row[s]

    def weak_leq(self, u: int, w: int) -> bool:
        """Right weak order: some reduced word of w starts with one of u."""
        return self.length[u] + self.length[self.mul(self.inverse[u], w)] == self.length[w]


def build_system(matrix: CoxeterMatrix, size_cap: int = DEFAULT_SIZE_CAP) -> CoxeterSystem:
    r = matrix.rank
    m = matrix.m
    right: list[list[int | None]] = [[None] * r]
    length = [0]
    parent: list[tuple[int, int] | None] = [None]
    level = [0]
    while level:
        nxt = []
        for w in level:
            for s in range(r):
                if right[w][s] is not None:
                    continue
                v = len(right)
                if v >= size_cap:
                    raise GroupTooLarge(
                        f"group enumeration exceeded size cap {size_cap}; instance is out of desk scale"
                    )
                right.append([None] * r)
                length.append(length[w] + 1)
                parent.append((w, s))
                right[w][s] = v
                right[v][s] = w
                nxt.append(v)
                for t in range(r):
                    if t == s:
                        continue
                    mst = m[s][t]
                    # strip t, s, t, ... from the right of w while each is a descent
                    y, k, g = w, 0, t
                    while k < mst - 1:
                        z = right[y][g]
                        if z is None or length[z] > length[y]:
                            break
                        y, k = z, k + 1
                        g = s if g == t else t
                    if k < mst - 1:
                        continue
                    # v = y * (alternating word of length m ending in t); drop that t
                    for j in range(mst, 1, -1):
                        y = right[y][t if j % 2 else s]
                    right[y][t] = v
                    right[v][t] = y
        level = nxt

    n = len(right)
    inverse = [0] * n
    words: list[Word] = [()] * n
    for v in range(1, n):
        w, s = parent[v]
        words[v] = words[w] + (s,)
    for v in range(n):
        x = 0
        for s in reversed(words[v]):
            x = right[x][s]
        inverse[v] = x
    left = [[inverse[right[inverse[w]][s]] for s in range(r)] for w in range(n)]

    order = sorted(range(n), key=length.__getitem__)
    nf: list[Word] = [()] * n
    for v in order[1:]:
        lv = length[v]
        s = next(i for i in range(r) if length[left[v][i]] < lv)
        nf[v] = (s + 1,) + nf[left[v][s]]
    order.sort(key=lambda v: (length[v], nf[v]))
    new_id = [0] * n
    for i, v in enumerate(order):
        new_id[v] = i
    return CoxeterSystem(
        matrix,
        right=[tuple(new_id[x] for x in right[v]) for v in order],
        left=[tuple(new_id[x] for x in left[v]) for v in order],
        length=[length[v] for v in order],
        normal_form=[nf[v] for v in order],
        inverse=[new_id[inverse[v]] for v in order],
        size_cap=size_cap,
    )


_TYPE_A_CACHE: dict[int, CoxeterSystem] = {}


def type_a(rank: int) -> CoxeterSystem:
    """Cached symmetric group S_{rank+1} as the Coxeter system A_rank."""
    if rank not in _TYPE_A_CACHE:
        _TYPE_A_CACHE[rank] = build_system(named_matrix(f"A{rank}"))
    return _TYPE_A_CACHE[rank]


def exchange_index(sys: CoxeterSystem, word: Sequence[int], s: int) -> int:
    """Smallest 1-based position j with word-minus-j equal to w*s."""
    word = sys.check_word(word)
    if not sys.is_reduced(word):
        raise NotReduced(f"{format_word(word)} is not reduced")
    w = sys.product(word)
    ws = sys.right[w][s - 1]
    if sys.length[ws] > sys.length[w]:
        raise NotADescent(f"s{s} is not a right descent of {sys.format_element(w)}")
    prefix = [0]
    for a in word:
        prefix.append(sys.right[prefix[-1]][a - 1])
    for j in range(1, len(word) + 1):
        x = prefix[j - 1]
        for a in word[j:]:
            x = sys.right[x][a - 1]
        if x == ws:
            return j
    raise AssertionError("exchange condition violated")  # unreachable for valid tables


def apply_braid_move(sys: CoxeterSystem, word: Sequence[int], move: BraidMove) -> Word:
    word = tuple(word)
    p = move.position - 1
    if p + 1 >= len(word) or p < 0:
        raise ValueError(f"braid move position {move.position} out of range")
    i, j = word[p], word[p + 1]
    if i == j:
        raise ValueError("braid move needs two distinct letters")
    mij = sys.matrix(i, j)
    kind = "short" if mij == 2 else "long"
    if kind != move.kind:
        raise ValueError(f"expected a {kind} move at position {move.position}")
    run = word[p : p + mij]
    if len(run) < mij or any(run[k] != (i if k % 2 == 0 else j) for k in range(mij)):
        raise ValueError(f"no alternating run of length {mij} at position {move.position}")
    swapped = tuple(j if k % 2 == 0 else i for k in range(mij))
    return word[:p] + swapped + word[p + mij :]


def _braid_neighbors(sys: CoxeterSystem, word: Word):
    for p in range(len(word) - 1):
        i, j = word[p], word[p + 1]
        if i == j:
            continue
        mij = sys.matrix(i, j)
        if p + mij > len(word):
            continue
        if all(word[p + k] == (i if k % 2 == 0 else j) for k in range(mij)):
            move = BraidMove(p + 1, "short" if mij == 2 else "long")
            yield move, word[:p] + tuple(j if k % 2 == 0 else i for k in range(mij)) + word[p + mij :]


def braid_path(sys: CoxeterSystem, source: Sequence[int], target: Sequence[int]) -> list[BraidMove]:
    """Shortest sequence of braid moves turning ``source`` into ``target``."""
    source, target = sys.check_word(source), sys.check_word(target)
    for wd in (source, target):
        if not sys.is_reduced(wd):
            raise NotReduced(f"{format_word(wd)} is not reduced")
    if sys.product(source) != sys.product(target):
        raise NotSameElement("words represent different elements")
    back: dict[Word, tuple[Word, BraidMove] | None] = {source: None}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        if cur == target:
            break
        for move, nb in _braid_neighbors(sys, cur):
            if nb not in back:
                back[nb] = (cur, move)
                queue.append(nb)
    path = []
    cur = target
    while back[cur] is not None:
        prev, move = back[cur]
        path.append(move)
        cur = prev
    return path[::-1]


def reduced_words(sys: CoxeterSystem, w: int) -> list[Word]:
    """All reduced words of ``w`` (braid-connected component of its normal form)."""
    start = sys.normal_form[w]
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for _, nb in _braid_neighbors(sys, cur):
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return sorted(seen)
