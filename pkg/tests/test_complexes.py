import random
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import all_subsets
from tnnfibers.complexes import (
    EmptyComplexNotice,
    SimplicialComplex,
    demazure_table,
    interior_faces,
    is_face,
    mask_of,
    order_complex,
    positions_of,
    purity_report,
    strata_poset,
    subword_complex,
)
from tnnfibers.coxeter import type_a
from tnnfibers.demazure import NotContained, contains, demazure_product, subword
from tnnfibers.posets import chain

A1, A2, A3 = type_a(1), type_a(2), type_a(3)
words3 = st.lists(st.integers(1, 3), max_size=7).map(tuple)


def el(sys, *word):
    return sys.product(word)


def test_demazure_table_matches_fold():
    q = (1, 3, 2, 1, 3, 2)
    table = demazure_table(A3, q)
    for pos in all_subsets(len(q)):
        assert table[mask_of(pos)] == demazure_product(A3, subword(q, pos))
    assert positions_of(mask_of((2, 5))) == (2, 5)


def test_subword_complex_examples():
    assert subword_complex(A2, (1, 2, 1), el(A2, 1, 2)).labelled_facets() == [(3,)]
    assert subword_complex(A2, (1, 2, 1, 2), el(A2, 1, 2, 1)).labelled_facets() == [(1,), (4,)]
    with pytest.warns(EmptyComplexNotice):
        cx = subword_complex(A2, (1, 2, 1), el(A2, 1, 2, 1))
    assert cx.facets == [()] and cx.dim == -1
    with pytest.raises(NotContained):
        subword_complex(A2, (1, 1), el(A2, 2))


def test_interior_faces_examples():
    assert interior_faces(A2, (1, 2, 1, 2), el(A2, 1, 2, 1)) == [(), (1,), (4,)]
    assert interior_faces(A1, (1, 1), el(A1, 1)) == [(), (1,), (2,)]
    assert interior_faces(A2, (1, 2, 1), el(A2, 1, 2)) == [(3,)]


def test_strata_poset_nonpure_example():
    P = strata_poset(A3, (1, 3, 2, 1, 3, 2), el(A3, 1, 3, 2))
    by_dim = {d: [e for e, x in zip(P.elements, P.dims) if x == d] for d in set(P.dims)}
    assert by_dim[0] == [(1, 2, 3), (1, 2, 6), (1, 5, 6), (2, 4, 6), (4, 5, 6)]
    assert by_dim[1] == [(1, 2, 3, 6), (1, 2, 4, 6), (1, 2, 5, 6), (1, 4, 5, 6), (2, 4, 5, 6)]
    assert by_dim[2] == [(1, 2, 4, 5, 6)]
    rep = purity_report(P)
    assert not rep.pure and sorted(rep.dims) == [1, 2]
    data = P.to_json()
    assert data["dims"] == P.dims and len(data["elements"]) == 11


def test_small_strata_posets():
    P = strata_poset(A1, (1, 1), el(A1, 1))
    assert P.elements == ((1,), (2,), (1, 2)) and P.dims == [0, 0, 1]
    P = strata_poset(A2, (1, 2, 1, 2), el(A2, 1, 2, 1))
    assert P.elements == ((1, 2, 3), (2, 3, 4), (1, 2, 3, 4))
    assert purity_report(P).pure and purity_report(P).dims == (1,)
    assert purity_report(strata_poset(A1, (1, 1), el(A1, 1))).dims == (1,)


def test_order_complex_examples():
    cx = order_complex(chain(3))
    assert cx.facets == [(0, 1, 2)]
    path = order_complex(strata_poset(A1, (1, 1), el(A1, 1)))
    assert path.facets == [(0, 2), (1, 2)]
    big = order_complex(strata_poset(A3, (1, 3, 2, 1, 3, 2), el(A3, 1, 3, 2)))
    assert len(big.vertices) == 11
    # by hand: 14 covers + 4 vertices under the 2-cell = 18 edges;
    # 4 edges under the 2-cell with 2 vertices each = 8 triangles
    assert big.f_vector() == [1, 11, 18, 8]
    assert 1 + big.reduced_euler_characteristic() == 1


def test_simplicial_complex_basics():
    cx = SimplicialComplex.from_labelled_facets([("a", "b"), ("b", "c"), ("a",)])
    assert cx.labelled_facets() == [("a", "b"), ("b", "c")]
    assert cx.f_vector() == [1, 3, 2]
    assert SimplicialComplex([], facets=[]).dim == -2


@given(words3)
def test_complement_duality_and_faces(q):
    table = demazure_table(A3, q)
    full = (1 << len(q)) - 1
    top = int(table[-1])
    for w in np.unique(table):
        w = int(w)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyComplexNotice)
            cx = subword_complex(A3, q, w, table)
        interior = interior_faces(A3, q, w, table)
        P = strata_poset(A3, q, w, table)
        assert sorted(tuple(sorted(set(range(1, len(q) + 1)) - set(R))) for R in interior) == sorted(P.elements)
        assert (() in interior) == (top == w)
        # facets are complements of reduced subwords
        reduced = {pos for pos in all_subsets(len(q)) if len(pos) == A3.length[w] and table[mask_of(pos)] == w}
        assert set(cx.labelled_facets()) == {positions_of(full ^ mask_of(r)) for r in reduced}
        # face test agrees with the facet description
        faces = {tuple(cx.vertices[i] for i in f) for fs in cx.faces_by_dim().values() for f in fs}
        for R in all_subsets(len(q)):
            assert is_face(A3, q, w, R) == (R in faces)
        # every stratum lies over some vertex, and containment reverses
        vertices = [set(e) for e, d in zip(P.elements, P.dims) if d == 0]
        for e in P.elements:
            assert any(v <= set(e) for v in vertices)
            assert demazure_product(A3, subword(q, e)) == w
        for i, j in P.covers:
            if P.elements[i] and P.elements[j]:
                assert set(P.elements[i]) < set(P.elements[j])


@given(words3)
def test_intersections_of_strata(q):
    table = demazure_table(A3, q)
    w = int(table[-1])
    P = strata_poset(A3, q, w, table)
    present = set(P.elements)
    for a in P.elements:
        for b in P.elements:
            meet = tuple(sorted(set(a) & set(b)))
            below = [e for e in P.elements if set(e) <= set(a) & set(b)]
            if meet in present:
                assert all(set(e) <= set(meet) for e in below)
    assert (tuple(range(1, len(q) + 1)) in present) == (w == demazure_product(A3, q))


def test_contains_agrees_with_bruhat():
    rng = random.Random(11)
    for _ in range(100):
        q = tuple(rng.randint(1, 3) for _ in range(rng.randint(0, 7)))
        d = demazure_product(A3, q)
        for w in A3.elements:
            assert contains(A3, q, w) == A3.bruhat_leq(w, d)
