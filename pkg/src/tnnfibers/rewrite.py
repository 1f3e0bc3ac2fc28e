"""Parametrized type-A words and the moves that transport their parameters.

Every move preserves the matrix product exactly.  Positions are 1-based and
name the leftmost letter the move touches.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .coxeter import BraidMove
from .tnn import evaluate, frac, parse_fraction

KINDS = ("comm", "braid3", "nilMerge", "nilSplit")


class PatternMismatch(ValueError):
    pass


class BraidDegenerate(ValueError):
    pass


@dataclass(frozen=True)
class ParamWord:
    word: tuple[int, ...]
    params: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "params", tuple(frac(t) for t in self.params))
        if len(self.word) != len(self.params):
            raise ValueError("word and parameters differ in length")
        if any(t < 0 for t in self.params):
            raise ValueError("parameters must be nonnegative")

    def __len__(self) -> int:
        return len(self.word)

    def evaluate(self, n: int):
        return evaluate(n, self.word, self.params)


class Move(NamedTuple):
    pos: int
    kind: str
    a: Fraction | None = None

    def to_json(self) -> dict:
        out = {"pos": self.pos, "kind": self.kind}
        if self.a is not None:
            out["a"] = str(self.a)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        if data.get("kind") not in KINDS:
            raise ValueError(f"unknown move kind {data.get('kind')!r}")
        a = data.get("a")
        return cls(int(data["pos"]), data["kind"], None if a is None else parse_fraction(str(a)))


def from_braid_move(move: BraidMove) -> Move:
    return Move(move.position, "braid3" if move.kind == "long" else "comm")


def _m(i: int, j: int) -> int:
    # type A braid orders
    if i == j:
        return 1
    return 3 if abs(i - j) == 1 else 2


def braid3(t1, t2, t3) -> tuple[Fraction, Fraction, Fraction]:
    """Transport x_i(t1) x_j(t2) x_i(t3) = x_j(.) x_i(.) x_j(.) for |i-j| = 1."""
    s = t1 + t3
    if s == 0:
        raise BraidDegenerate("t1 + t3 = 0")
    return t2 * t3 / s, s, t1 * t2 / s


def apply_move(pw: ParamWord, move: Move) -> ParamWord:
    k = move.pos - 1
    w, t = list(pw.word), list(pw.params)

    def need(span):
        if not (0 <= k and k + span <= len(w)):
            raise PatternMismatch(f"{move.kind} at {move.pos} runs off the word")

    if move.kind == "comm":
        need(2)
        if _m(w[k], w[k + 1]) != 2:
            raise PatternMismatch(f"letters {w[k]},{w[k + 1]} do not commute")
        w[k], w[k + 1] = w[k + 1], w[k]
        t[k], t[k + 1] = t[k + 1], t[k]
    elif move.kind == "braid3":
        need(3)
        i, j, i2 = w[k : k + 3]
        if i != i2 or _m(i, j) != 3:
            raise PatternMismatch(f"no (i, i±1, i) pattern at {move.pos}")
        w[k : k + 3] = [j, i, j]
        t[k : k + 3] = braid3(*t[k : k + 3])
    elif move.kind == "nilMerge":
        need(2)
        if w[k] != w[k + 1]:
            raise PatternMismatch(f"letters {w[k]},{w[k + 1]} differ")
        w[k : k + 2] = [w[k]]
        t[k : k + 2] = [t[k] + t[k + 1]]
    elif move.kind == "nilSplit":
        need(1)
        if move.a is None or not 0 <= move.a <= t[k]:
            raise PatternMismatch(f"split amount must lie in [0, {t[k]}]")
        w[k : k + 1] = [w[k], w[k]]
        t[k : k + 1] = [move.a, t[k] - move.a]
    else:
        raise PatternMismatch(f"unknown move kind {move.kind!r}")
    return ParamWord(tuple(w), tuple(t))


def transport(pw: ParamWord, moves: Iterable[Move]) -> ParamWord:
    for mv in moves:
        pw = apply_move(pw, mv)
    return pw


def moves_to_json(moves: Sequence[Move]) -> list[dict]:
    return [m.to_json() for m in moves]


def moves_from_json(data) -> list[Move]:
    return [Move.from_json(d) for d in data]
