"""Subword complexes, interior faces, strata posets and order complexes.

Subsets of word positions are bitmasks: bit ``j-1`` stands for position ``j``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Sequence

import numpy as np

from .coxeter import CoxeterSystem, Word, format_word
from .demazure import NotContained, contains
from .posets import Poset

MAX_WORD_LENGTH = 22


class EmptyComplexNotice(UserWarning):
    """The subword complex is {∅}: the word is itself a reduced word for w."""


def positions_of(mask: int) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def mask_of(positions) -> int:
    m = 0
    for j in positions:
        m |= 1 << (j - 1)
    return m


def demazure_table(sys: CoxeterSystem, word: Sequence[int]) -> np.ndarray:
    """Demazure product of the subword on every position subset, indexed by mask.

    Adding the highest set bit appends that letter on the right, so each
    doubling step is one vectorised lookup into the Demazure table.
    """
    word = sys.check_word(word)
    if len(word) > MAX_WORD_LENGTH:
        raise ValueError(f"word length {len(word)} exceeds cap {MAX_WORD_LENGTH}")
    dem = np.asarray(sys.dem, dtype=np.int64)
    table = np.zeros(1 << len(word), dtype=np.int64)
    for b, a in enumerate(word):
        lo = 1 << b
        table[lo : 2 * lo] = dem[table[:lo], a - 1]
    return table


class SimplicialComplex:
    """Finite simplicial complex on labelled vertices.

    Faces are tuples of vertex indices (into ``vertices``) in increasing order;
    that fixed order orients boundary matrices.  ``facets=[()]`` is the complex
    {∅}; no facets at all is the void complex.
    """

    def __init__(self, vertices: Sequence[Hashable], facets=None, faces=None):
        self.vertices = tuple(vertices)
        if facets is None and faces is None:
            raise ValueError("need facets or faces")
        self._facets = None if facets is None else _maximal(tuple(sorted(f)) for f in facets)
        self._faces = None
        if faces is not None:
            by_dim: dict[int, list] = {}
            for f in faces:
                by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
            self._faces = {k: sorted(v) for k, v in sorted(by_dim.items())}

    @classmethod
    def from_labelled_facets(cls, facets, vertices=None) -> "SimplicialComplex":
        facets = [tuple(f) for f in facets]
        if vertices is None:
            vertices = sorted({v for f in facets for v in f})
        index = {v: i for i, v in enumerate(vertices)}
        return cls(vertices, facets=[tuple(index[v] for v in f) for f in facets])

    @property
    def facets(self) -> list[tuple[int, ...]]:
        if self._facets is None:
            # faces are closed downward: a face is a facet iff no codim-1 coface
            faces = self._faces
            covered = set()
            for k, fs in faces.items():
                if k >= 0:
                    for f in fs:
                        covered.update(f[:i] + f[i + 1 :] for i in range(len(f)))
            self._facets = sorted(f for fs in faces.values() for f in fs if f not in covered)
        return self._facets

    def labelled_facets(self) -> list[tuple]:
        return sorted(tuple(self.vertices[i] for i in f) for f in self.facets)

    def faces_by_dim(self) -> dict[int, list[tuple[int, ...]]]:
        if self._faces is None:
            seen = set()
            for f in self.facets:
                for k in range(len(f) + 1):
                    seen.update(combinations(f, k))
            by_dim: dict[int, list] = {}
            for f in seen:
                by_dim.setdefault(len(f) - 1, []).append(f)
            self._faces = {k: sorted(v) for k, v in sorted(by_dim.items())}
        return self._faces

    @property
    def dim(self) -> int:
        if self._faces is not None:
            return max(self._faces, default=-2)  # -2: void complex
        if not self.facets:
            return -2
        return max(len(f) for f in self.facets) - 1

    def f_vector(self) -> list[int]:
        faces = self.faces_by_dim()
        return [len(faces.get(k, [])) for k in range(-1, self.dim + 1)]

    def reduced_euler_characteristic(self) -> int:
        return sum((-1 if k % 2 else 1) * len(v) for k, v in self.faces_by_dim().items())

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def to_json(self) -> dict:
        return {"vertices": list(map(_plain, self.vertices)), "facets": [list(map(_plain, f)) for f in self.labelled_facets()]}

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, facets={len(self.facets)})"


def _plain(v):
    return list(v) if isinstance(v, tuple) else v


def _maximal(faces) -> list[tuple[int, ...]]:
    faces = sorted(set(faces), key=lambda f: (-len(f), f))
    kept: list[tuple[int, ...]] = []
    kept_sets: list[frozenset] = []
    for f in faces:
        fs = frozenset(f)
        if not any(fs <= k for k in kept_sets):
            kept.append(f)
            kept_sets.append(fs)
    return sorted(kept)


def _require_contained(sys, Q, w):
    if not contains(sys, Q, w):
        raise NotContained(f"{format_word(Q)} does not contain {sys.format_element(w)}")


def subword_complex(sys: CoxeterSystem, Q: Sequence[int], w: int, table: np.ndarray | None = None) -> SimplicialComplex:
    """Δ(Q, w): facets are complements of reduced subwords of Q for w."""
    Q = sys.check_word(Q)
    _require_contained(sys, Q, w)
    if table is None:
        table = demazure_table(sys, Q)
    full = (1 << len(Q)) - 1
    lw = sys.length[w]
    reduced = [int(m) for m in np.flatnonzero(table == w) if bin(int(m)).count("1") == lw]
    facets = [positions_of(full ^ m) for m in reduced]
    if facets == [()]:
        warnings.warn(EmptyComplexNotice(f"{format_word(Q)} is a reduced word for {sys.format_element(w)}"))
    return SimplicialComplex.from_labelled_facets(facets, vertices=sorted({j for f in facets for j in f}))


def is_face(sys: CoxeterSystem, Q: Sequence[int], w: int, R) -> bool:
    """R is a face of Δ(Q, w) iff Q minus R still contains w."""
    drop = set(R)
    return contains(sys, [a for j, a in enumerate(Q, 1) if j not in drop], w)


def interior_faces(sys: CoxeterSystem, Q: Sequence[int], w: int, table: np.ndarray | None = None) -> list[tuple[int, ...]]:
    """Faces R of Δ(Q, w) with δ(Q minus R) = w, sorted by (size, positions)."""
    Q = sys.check_word(Q)
    _require_contained(sys, Q, w)
    if table is None:
        table = demazure_table(sys, Q)
    full = (1 << len(Q)) - 1
    faces = [positions_of(full ^ int(m)) for m in np.flatnonzero(table == w)]
    return sorted(faces, key=lambda f: (len(f), f))


class StrataPoset(Poset):
    """{P ⊆ Q : δ(P) = w} ordered by inclusion, with dims |P| - ℓ(w)."""

    def __init__(self, sys: CoxeterSystem, ambient: Word, target: int, masks: Sequence[int]):
        self.sys = sys
        self.ambient = tuple(ambient)
        self.target = target
        self.masks = sorted(masks, key=lambda m: (bin(m).count("1"), positions_of(m)))
        elements = [positions_of(m) for m in self.masks]
        up = [[j for j, mj in enumerate(self.masks) if mj != mi and mi & mj == mi] for mi in self.masks]
        super().__init__(elements, up)
        lw = sys.length[target]
        self.dims = [len(e) - lw for e in elements]

    def to_json(self) -> dict:
        data = super().to_json()
        data["dims"] = list(self.dims)
        data["ambient"] = list(self.ambient)
        data["w"] = self.sys.format_element(self.target)
        return data


def strata_poset(sys: CoxeterSystem, Q: Sequence[int], w: int, table: np.ndarray | None = None) -> StrataPoset:
    Q = sys.check_word(Q)
    if table is None:
        table = demazure_table(sys, Q)
    return StrataPoset(sys, Q, w, [int(m) for m in np.flatnonzero(table == w)])


def order_complex(poset: Poset) -> SimplicialComplex:
    """Vertices are the poset elements, faces are its chains (including ∅)."""
    n = len(poset)
    above = [sorted(poset.up[i]) for i in range(n)]
    faces: list[tuple[int, ...]] = [()]
    stack = [(i,) for i in range(n)]
    while stack:
        ch = stack.pop()
        faces.append(ch)
        stack.extend(ch + (j,) for j in above[ch[-1]])
    return SimplicialComplex(poset.elements, faces=faces)


@dataclass(frozen=True)
class PurityReport:
    maximal: tuple[tuple[int, ...], ...]
    dims: tuple[int, ...]
    pure: bool

    def to_json(self) -> dict:
        return {"maximal": [list(m) for m in self.maximal], "dims": list(self.dims), "pure": self.pure}


def purity_report(poset: StrataPoset) -> PurityReport:
    idx = poset.maximal()
    dims = tuple(poset.dims[i] for i in idx)
    return PurityReport(tuple(poset.elements[i] for i in idx), dims, len(set(dims)) <= 1)
