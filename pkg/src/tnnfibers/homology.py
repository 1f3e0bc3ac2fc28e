"""Exact integral simplicial homology via Smith normal form."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .complexes import SimplicialComplex

MAX_FACES = 1_000_000
MAX_DIM = 8


class TooLarge(RuntimeError):
    pass


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonzero invariant factors, in divisibility order).

    Dense and straightforward; used directly on small matrices and on whatever
    survives the sparse unit-pivot elimination.
    """
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
                        break
            if not done:
                continue
            # pivot row/column are clear; enforce divisibility of the rest
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def sparse_invariant_factors(columns: Sequence[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given column-wise.

    Unit pivots are eliminated first (each is a unimodular Schur complement
    step contributing a factor 1), choosing short columns and short rows to
    keep fill-in low.  Any non-unit remainder goes through the dense SNF.
    """
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, dict[int, int]] = {}
    for c, col in enumerate(columns):
        entries = {r: v for r, v in col.items() if v}
        if entries:
            cols[c] = entries
            for r, v in entries.items():
                rows.setdefault(r, {})[c] = v
    ones = 0
    heap = [(len(col), c) for c, col in cols.items()]
    heapq.heapify(heap)
    deferred: set[int] = set()
    while True:
        while heap:
            size, c = heapq.heappop(heap)
            col = cols.get(c)
            if col is None or len(col) != size:
                continue
            units = [r for r, v in col.items() if v in (1, -1)]
            if not units:
                deferred.add(c)
                continue
            r = min(units, key=lambda x: (len(rows[x]), x))
            a = col[r]
            prow = rows.pop(r)
            del cols[c]
            del prow[c]
            for i, b in col.items():
                if i == r:
                    continue
                f = b * a
                ri = rows[i]
                del ri[c]
                for j, x in prow.items():
                    v = ri.get(j, 0) - f * x
                    cj = cols[j]
                    if v:
                        ri[j] = v
                        cj[i] = v
                    else:
                        ri.pop(j, None)
                        cj.pop(i, None)
                if not ri:
                    del rows[i]
            for j in prow:
                cj = cols[j]
                del cj[r]
                if cj:
                    heapq.heappush(heap, (len(cj), j))
                    deferred.discard(j)
                else:
                    del cols[j]
            ones += 1
        retry = [c for c in deferred if c in cols and any(v in (1, -1) for v in cols[c].values())]
        deferred = {c for c in deferred if c in cols}
        if not retry:
            break
        for c in retry:
            deferred.discard(c)
            heapq.heappush(heap, (len(cols[c]), c))
    if not cols:
        return [1] * ones
    rlist = sorted(rows)
    clist = sorted(cols)
    ridx = {r: k for k, r in enumerate(rlist)}
    dense = [[0] * len(clist) for _ in rlist]
    for k, c in enumerate(clist):
        for r, v in cols[c].items():
            dense[ridx[r]][k] = v
    return [1] * ones + smith_normal_form(dense)


@dataclass(frozen=True)
class HomologyReport:
    """Reduced homology: ``groups[k] = (betti, torsion coefficients)`` for k = -1..dim."""

    groups: dict[int, tuple[int, tuple[int, ...]]]

    def betti(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups.get(k, (0, ()))[1]

    def is_acyclic(self) -> bool:
        return all(b == 0 and not t for b, t in self.groups.values())

    def is_sphere(self, d: int) -> bool:
        return all((b, t) == ((1, ()) if k == d else (0, ())) for k, (b, t) in self.groups.items()) and (
            self.betti(d) == 1
        )

    def euler_characteristic(self) -> int:
        """Reduced Euler characteristic from Betti numbers."""
        return sum((-1 if k % 2 else 1) * b for k, (b, _) in self.groups.items())

    def to_json(self) -> dict:
        return {str(k): [b, *t] for k, (b, t) in sorted(self.groups.items())}


def boundary_columns(faces_by_dim: dict[int, list[tuple[int, ...]]], k: int) -> list[dict[int, int]]:
    """Columns of the boundary map C_k -> C_{k-1} (k = 0 is the augmentation)."""
    lower = {f: i for i, f in enumerate(faces_by_dim.get(k - 1, []))}
    out = []
    for face in faces_by_dim.get(k, []):
        col = {}
        for i in range(len(face)):
            col[lower[face[:i] + face[i + 1 :]]] = -1 if i % 2 else 1
        out.append(col)
    return out


def reduced_homology(complex: "SimplicialComplex", max_faces: int = MAX_FACES) -> HomologyReport:
    faces = complex.faces_by_dim()
    total = sum(len(v) for v in faces.values())
    if total > max_faces or complex.dim > MAX_DIM:
        raise TooLarge(f"complex has {total} faces and dimension {complex.dim}")
    if not faces:
        return HomologyReport({})
    top = max(faces)
    ranks = {}
    torsion = {}
    for k in range(0, top + 1):
        inv = sparse_invariant_factors(boundary_columns(faces, k))
        ranks[k] = len(inv)
        torsion[k - 1] = tuple(x for x in inv if x > 1)
    groups = {}
    for k in range(-1, top + 1):
        n_k = len(faces.get(k, []))
        b = n_k - ranks.get(k, 0) - ranks.get(k + 1, 0)
        groups[k] = (b, torsion.get(k, ()))
    return HomologyReport(groups)


def verdict(complex: "SimplicialComplex", d: int, mode: str) -> bool:
    """Ball / sphere / acyclic verdict certified by reduced integral homology.

    ``ball`` and ``sphere`` also require the complex to have dimension ``d``.
    """
    report = reduced_homology(complex)
    if mode == "sphere":
        return complex.dim == d and report.is_sphere(d)
    if mode == "ball":
        return complex.dim == d and report.is_acyclic()
    if mode == "acyclic":
        return report.is_acyclic()
    raise ValueError(f"unknown verdict mode {mode!r}")
