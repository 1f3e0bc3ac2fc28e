"""Constructive fiber algorithms for f_Q over type-A totally nonnegative matrices.

A FiberContext fixes the ambient word, the point p, its cell w, and a support
Q (a set of ambient positions with δ = w).  Q splits into S, the free
positions, and S^C, the rightmost reduced subword for w, whose values are
forced.  Every value produced here is exact and is checked before it is
returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from math import gcd
from typing import Sequence

from .complexes import demazure_table, positions_of, strata_poset
from .coxeter import braid_path, format_word
from .demazure import (
    deletion_partners,
    demazure_product,
    find_deletion_partner,
    is_redundant,
    rightmost_reduced_subword,
)
from .posets import Poset, poset_isomorphic
from .rewrite import ParamWord, from_braid_move, transport
from .tnn import (
    Matrix,
    NotInCell,
    cell_of,
    evaluate,
    extraction_bound,
    factorize,
    frac,
    identity,
    left_apply,
    matrix_to_json,
    right_extraction_bound,
    system_for,
)


class ValidationFailed(RuntimeError):
    pass


class CellMismatch(ValueError):
    pass


class NotInFiber(ValueError):
    pass


class MaximalValueEncountered(ValueError):
    pass


class MaximalOrExcessive(ValueError):
    pass


class NoPartner(ValueError):
    pass


class WitnessFailed(RuntimeError):
    pass


@dataclass
class TMaxStats:
    """Counters for the two t_max computations; tests read these."""

    calls: int = 0
    fallback_checks: int = 0
    disagreements: int = 0
    tune_braid: int = 0
    tune_resolve: int = 0

    def reset(self):
        self.calls = self.fallback_checks = self.disagreements = 0
        self.tune_braid = self.tune_resolve = 0


STATS = TMaxStats()


def change_fiber(p: Matrix, letters: Sequence[int], ks: Sequence) -> Matrix:
    """x_{i_r}(-k_r) ... x_{i_1}(-k_1) · p."""
    if len(letters) != len(ks):
        raise ValueError("letters and values differ in length")
    for a, k in zip(letters, ks):
        p = left_apply(p, a, -frac(k))
    return p


def redraw_values():
    """1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...: reduced fractions in (0,1) by denominator."""
    for q in count(2):
        for a in range(1, q):
            if gcd(a, q) == 1:
                yield Fraction(a, q)


@dataclass(frozen=True)
class FiberContext:
    n: int
    ambient: tuple[int, ...]
    p: Matrix
    w: int
    support: tuple[int, ...]
    s_positions: tuple[int, ...]
    sc_positions: tuple[int, ...]
    check_fallback: bool = field(default=True, compare=False)

    @classmethod
    def build(cls, ambient, p=None, *, params=None, support=None, n=None, check_fallback=True) -> "FiberContext":
        ambient = tuple(ambient)
        if p is None:
            if params is None:
                raise ValueError("need a point p or parameters")
            n = n or (max(ambient, default=0) + 1)
            p = evaluate(n, ambient, params)
        n = len(p)
        sys = system_for(n)
        sys.check_word(ambient)
        w = cell_of(p)[0]
        if support is None:
            support = _default_support(sys, ambient, w)
        support = tuple(sorted(support))
        letters = [ambient[j - 1] for j in support]
        if demazure_product(sys, letters) != w:
            raise CellMismatch(
                f"support letters {format_word(letters)} have Demazure product "
                f"{sys.format_element(demazure_product(sys, letters))}, cell is {sys.format_element(w)}"
            )
        local = rightmost_reduced_subword(sys, letters, w)
        sc = tuple(support[k - 1] for k in local)
        s = tuple(j for j in support if j not in set(sc))
        return cls(n, ambient, p, w, support, s, sc, check_fallback)

    @property
    def sys(self):
        return system_for(self.n)

    @property
    def dim(self) -> int:
        return len(self.s_positions)

    @property
    def vertex(self) -> tuple[int, ...]:
        return self.sc_positions

    def restrict(self, support) -> "FiberContext":
        return FiberContext.build(self.ambient, self.p, support=support, check_fallback=self.check_fallback)

    def suffix_letters(self, j: int) -> tuple[int, ...]:
        return tuple(self.ambient[k - 1] for k in self.support if k >= j)


def _default_support(sys, ambient, w) -> tuple[int, ...]:
    """All positions when δ(ambient) = w, else the largest stratum (first in position order)."""
    table = demazure_table(sys, ambient)
    masks = [int(m) for m in (table == w).nonzero()[0]]
    if not masks:
        raise CellMismatch(f"{format_word(ambient)} has no subword with Demazure product {sys.format_element(w)}")
    return min((positions_of(m) for m in masks), key=lambda P: (-len(P), P))


def _t_max_at(ctx: FiberContext, cur: Matrix, j: int) -> Fraction:
    """t_max at S-position j given the changed-fiber point ``cur``; validated."""
    sys = ctx.sys
    a = ctx.ambient[j - 1]
    suffix = ctx.suffix_letters(j)
    w_suffix = demazure_product(sys, suffix)
    STATS.calls += 1
    if cell_of(cur)[0] != w_suffix:
        raise ValidationFailed(f"changed-fiber point left the cell of the suffix at position {j}")
    t = extraction_bound(cur, a)
    lower = sys.left[w_suffix][a - 1]
    if t <= 0 or sys.length[lower] >= sys.length[w_suffix]:
        raise ValidationFailed(f"letter {a} at position {j} is not a left descent of the suffix cell")
    if cell_of(left_apply(cur, a, -t))[0] != lower:
        raise ValidationFailed(f"full extraction at position {j} missed the cell below")
    if ctx.check_fallback:
        STATS.fallback_checks += 1
        reduced = tuple(k for k in range(1, len(suffix) + 1) if k not in set(deletion_partners(sys, suffix, 1)))
        w_q = demazure_product(sys, [suffix[k - 1] for k in reduced])
        if w_q != w_suffix:
            STATS.disagreements += 1
            raise ValidationFailed(f"removing deletion partners changed the Demazure product at position {j}")
        q2 = (a,) + sys.normal_form[sys.left[w_q][a - 1]]
        try:
            t2 = factorize(cur, q2)[0]
        except NotInCell as exc:
            STATS.disagreements += 1
            raise ValidationFailed(f"fallback factorization failed at position {j}: {exc}") from exc
        if t2 != t:
            STATS.disagreements += 1
            raise ValidationFailed(f"t_max paths disagree at position {j}: {t} vs {t2}")
    return t


def t_max(ctx: FiberContext, j: int, prefix: Sequence) -> Fraction:
    """t_max at S-position j with the values of all ambient positions before j fixed."""
    if j not in ctx.s_positions:
        raise ValueError(f"position {j} is not free (S = {list(ctx.s_positions)})")
    if len(prefix) != j - 1:
        raise ValueError(f"need {j - 1} prefix values")
    cur = change_fiber(ctx.p, ctx.ambient[: j - 1], prefix)
    return _t_max_at(ctx, cur, j)


def _walk(ctx: FiberContext, choose):
    """Left-to-right scan; ``choose(r, j, tmax)`` supplies the r-th free value."""
    values = [Fraction(0)] * len(ctx.ambient)
    cur = ctx.p
    free = set(ctx.s_positions)
    r = 0
    for j in ctx.support:
        a = ctx.ambient[j - 1]
        if j in free:
            v = choose(r, j, _t_max_at(ctx, cur, j))
            r += 1
        else:
            v = extraction_bound(cur, a)
            if v <= 0:
                raise ValidationFailed(f"forced value at position {j} is 0")
        values[j - 1] = v
        cur = left_apply(cur, a, -v)
    if cur != identity(ctx.n):
        raise ValidationFailed("scan did not exhaust the point")
    return tuple(values)


def _check_fiber(ctx: FiberContext, t) -> None:
    if evaluate(ctx.n, ctx.ambient, t) != ctx.p:
        raise ValidationFailed("produced parameters do not evaluate to p")


def f_F(ctx: FiberContext, u: Sequence) -> tuple[Fraction, ...]:
    """Cell map [0,1)^{d'} -> fiber: free values are u_r times their running t_max."""
    u = tuple(frac(x) for x in u)
    if len(u) != ctx.dim:
        raise ValueError(f"need {ctx.dim} coordinates, got {len(u)}")
    if any(not 0 <= x < 1 for x in u):
        raise ValueError("u must lie in [0,1)")
    t = _walk(ctx, lambda r, j, tm: u[r] * tm)
    _check_fiber(ctx, t)
    return t


def f_F_inverse(ctx: FiberContext, t: Sequence) -> tuple[Fraction, ...]:
    t = tuple(frac(x) for x in t)
    if len(t) != len(ctx.ambient) or evaluate(ctx.n, ctx.ambient, t) != ctx.p:
        raise NotInFiber("parameters do not evaluate to p")
    supp = set(ctx.support)
    if any(x and j not in supp for j, x in enumerate(t, 1)):
        raise NotInFiber("parameters use positions outside the support")
    u = []

    def choose(r, j, tm):
        x = t[j - 1]
        if x >= tm:
            raise MaximalValueEncountered(f"value at position {j} reaches its maximum {tm}")
        u.append(x / tm)
        return x

    walked = _walk(ctx, choose)
    if walked != t:
        raise NotInFiber("forced values do not match")
    return tuple(u)


def rtn(ctx: FiberContext, ks: Sequence) -> tuple[Fraction, ...]:
    """Free values on S determine the forced values on S^C."""
    ks = tuple(frac(x) for x in ks)
    if len(ks) != ctx.dim:
        raise ValueError(f"need {ctx.dim} values, got {len(ks)}")

    def choose(r, j, tm):
        if not 0 <= ks[r] < tm:
            raise MaximalOrExcessive(f"value {ks[r]} at position {j} is not below t_max = {tm}")
        return ks[r]

    t = _walk(ctx, choose)
    _check_fiber(ctx, t)
    return tuple(t[j - 1] for j in ctx.sc_positions)


def unique_end_value(p: Matrix, word: Sequence[int]) -> Fraction | None:
    """Forced last coordinate, or None when the last letter is redundant."""
    sys = system_for(len(p))
    if demazure_product(sys, word) != cell_of(p)[0]:
        raise CellMismatch("Demazure product of the word differs from the cell of p")
    if is_redundant(sys, word, len(word)):
        return None
    return right_extraction_bound(p, word[-1])


def unique_start_value(p: Matrix, word: Sequence[int]) -> Fraction | None:
    """Mirror of unique_end_value for the first coordinate."""
    sys = system_for(len(p))
    if demazure_product(sys, word) != cell_of(p)[0]:
        raise CellMismatch("Demazure product of the word differs from the cell of p")
    if is_redundant(sys, word, 1):
        return None
    return extraction_bound(p, word[0])


def tune_down(ctx: FiberContext, t: Sequence, l: int, new_value) -> tuple[Fraction, ...]:
    """Lower the value at free position l, keeping everything to its left.

    The excess x_a(t_l - t'_l) is pushed right through the positions between l
    and its deletion partner k by braid transport and merged into position k.
    When the positive letters in between do not form a clean deletion pair
    with l and k, the segment l..k is re-solved exactly instead.
    """
    t = tuple(frac(x) for x in t)
    new_value = frac(new_value)
    if evaluate(ctx.n, ctx.ambient, t) != ctx.p:
        raise NotInFiber("parameters do not evaluate to p")
    if not 0 <= new_value <= t[l - 1]:
        raise ValueError(f"new value must lie in [0, {t[l - 1]}]")
    if new_value == t[l - 1]:
        return t
    sys = ctx.sys
    suffix_pos = [j for j in ctx.support if j >= l]
    if l not in ctx.support or any(x and j not in set(ctx.support) for j, x in enumerate(t, 1)):
        raise NotInFiber("parameters must be supported on the context support, including l")
    suffix = ctx.suffix_letters(l)
    k_local = find_deletion_partner(sys, suffix, 1)
    if k_local is None:
        raise NoPartner(f"letter at position {l} is not redundant in its suffix")
    cur = change_fiber(ctx.p, ctx.ambient[: l - 1], t[: l - 1])
    if cell_of(cur)[0] != demazure_product(sys, suffix):
        raise ValidationFailed("changed-fiber point is not in the cell of the suffix")
    k = suffix_pos[k_local - 1]
    a, b = ctx.ambient[l - 1], ctx.ambient[k - 1]
    excess = t[l - 1] - new_value
    between = [j for j in suffix_pos if l < j < k]
    middle = [j for j in between if t[j - 1]]
    out = list(t)
    out[l - 1] = new_value
    left_word = (a,) + tuple(ctx.ambient[j - 1] for j in middle)
    right_word = tuple(ctx.ambient[j - 1] for j in middle) + (b,)
    if sys.is_reduced(left_word) and sys.is_reduced(right_word) and sys.product(left_word) == sys.product(right_word):
        moves = [from_braid_move(m) for m in braid_path(sys, left_word, right_word)]
        moved = transport(ParamWord(left_word, (excess,) + tuple(t[j - 1] for j in middle)), moves)
        for j, x in zip(middle, moved.params):
            out[j - 1] = x
        out[k - 1] = t[k - 1] + moved.params[-1]
        STATS.tune_braid += 1
    else:
        seg = [l] + between + [k]
        m = evaluate(ctx.n, [ctx.ambient[j - 1] for j in seg], [t[j - 1] for j in seg])
        target = left_apply(m, a, -new_value)
        sub_word = tuple(ctx.ambient[j - 1] for j in seg[1:])
        w_target = cell_of(target)[0]
        local = rightmost_reduced_subword(sys, sub_word, w_target)
        sub = FiberContext.build(sub_word, target, support=local, check_fallback=ctx.check_fallback)
        vals = f_F(sub, ())
        for j, x in zip(seg[1:], vals):
            out[j - 1] = x
        STATS.tune_resolve += 1
    out = tuple(out)
    if evaluate(ctx.n, ctx.ambient, out) != ctx.p or out[: l - 1] != t[: l - 1]:
        raise ValidationFailed("tuned parameters left the fiber")
    return out


@dataclass
class ProbeReport:
    ambient: tuple[int, ...]
    w: str
    p: Matrix
    strata: list[dict]
    empty_certificates: list[dict]
    isomorphic: bool

    def to_json(self) -> dict:
        return {
            "ambient": list(self.ambient),
            "w": self.w,
            "p": matrix_to_json(self.p),
            "strata": [
                {"P": list(s["P"]), "dim": s["dim"], "witness": [str(x) for x in s["witness"]]} for s in self.strata
            ],
            "emptyCertificates": [{"P": list(c["P"]), "cell": c["cell"]} for c in self.empty_certificates],
            "posetIsomorphicToCombinatorial": self.isomorphic,
        }


def stratum_witness(ctx: FiberContext, support, max_draws: int = 50) -> tuple[Fraction, ...]:
    """A fiber point with support exactly ``support``, from generic u."""
    sub = ctx.restrict(support)
    draws = redraw_values()
    pool = [next(draws) for _ in range(sub.dim + max_draws)]
    tries = [[Fraction(1, 2)] * sub.dim] + [pool[a : a + sub.dim] for a in range(1, max_draws)]
    for u in tries:
        t = f_F(sub, u)
        if {j for j, x in enumerate(t, 1) if x} == set(sub.support):
            return t
    raise WitnessFailed(f"no witness with support {list(support)} after {max_draws} draws")


def enumerate_strata(ctx: FiberContext) -> tuple[Poset, ProbeReport]:
    """Witness every stratum of the fiber over the full ambient word and certify the rest empty."""
    sys = ctx.sys
    table = demazure_table(sys, ctx.ambient)
    strata = []
    empty = []
    for mask in sorted(range(len(table)), key=lambda m: (bin(m).count("1"), positions_of(m))):
        P = positions_of(mask)
        if int(table[mask]) == ctx.w:
            try:
                witness = stratum_witness(ctx, P)
            except (ValidationFailed, CellMismatch) as exc:
                raise WitnessFailed(f"stratum {list(P)}: {exc}") from exc
            strata.append({"P": P, "dim": len(P) - sys.length[ctx.w], "witness": witness})
        else:
            sample = evaluate(ctx.n, [ctx.ambient[j - 1] for j in P], [1] * len(P))
            cell = cell_of(sample)[0]
            if cell == ctx.w:
                raise WitnessFailed(f"subword {list(P)} reaches the cell of p but its Demazure product differs")
            empty.append({"P": P, "cell": sys.format_element(cell)})
    witnessed = Poset.from_relation([s["P"] for s in strata], lambda x, y: set(x) < set(y))
    iso, _ = poset_isomorphic(witnessed, strata_poset(sys, ctx.ambient, ctx.w, table))
    report = ProbeReport(ctx.ambient, sys.format_element(ctx.w), ctx.p, strata, empty, iso)
    return witnessed, report
