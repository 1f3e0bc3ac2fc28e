import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import evaluate_naive, extraction_bound_naive, leibniz_det, minors_naive
from tnnfibers.coxeter import reduced_words, type_a
from tnnfibers.demazure import demazure_product
from tnnfibers.homology import TooLarge
from tnnfibers.tnn import (
    DimensionMismatch,
    NotInCell,
    NotTNN,
    all_minors,
    antitranspose,
    as_matrix,
    cell_of,
    chevalley,
    evaluate,
    extraction_bound,
    factorize,
    identity,
    is_tnn,
    left_apply,
    matrix_from_json,
    matrix_to_json,
    parse_params,
    right_apply,
    right_extraction_bound,
)

A3 = type_a(3)
M121 = as_matrix([[1, 2, 1], [0, 1, 1], [0, 0, 1]])

pos_rationals = st.builds(F, st.integers(1, 30), st.integers(1, 30))
words3 = st.lists(st.integers(1, 3), max_size=7).map(tuple)


def test_evaluate_examples():
    assert evaluate(2, (1,), (1,)) == as_matrix([[1, 1], [0, 1]])
    assert evaluate(3, (1, 2, 1), (1, 1, 1)) == M121
    assert evaluate(3, (2, 1, 2), (F(1, 2), 2, F(1, 2))) == M121
    with pytest.raises(DimensionMismatch):
        evaluate(3, (1, 2), (1,))
    with pytest.raises(DimensionMismatch):
        evaluate(3, (3,), (1,))


def test_is_tnn_examples():
    assert is_tnn(identity(4))
    bad = [list(r) for r in as_matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])]
    bad[0][2] = F(-1)
    assert not is_tnn(tuple(map(tuple, bad)))
    with pytest.raises(TooLarge):
        is_tnn(identity(8))


def test_extraction_examples():
    assert extraction_bound(M121, 1) == 1
    assert left_apply(M121, 1, -1) == as_matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert extraction_bound(identity(3), 1) == 0 and extraction_bound(identity(3), 2) == 0
    assert extraction_bound(chevalley(2, 1, 3), 1) == 3


def test_factorize_examples():
    assert factorize(M121, (1, 2, 1)) == (1, 1, 1)
    assert factorize(chevalley(2, 1, F(1, 3)), (1,)) == (F(1, 3),)
    assert factorize(M121, (2, 1, 2)) == (F(1, 2), 2, F(1, 2))
    with pytest.raises(NotInCell):
        factorize(M121, (1, 2))


def test_cell_of_examples():
    assert cell_of(identity(3)) == (0, (), ())
    q = (1, 3, 2, 1, 3, 2)
    w, word, _ = cell_of(evaluate(4, q, [F(1, 6)] * 6))
    assert w == demazure_product(A3, q) and A3.is_reduced(word)
    w, word, params = cell_of(evaluate(2, (1, 1), (F(1, 2), F(1, 2))))
    assert w == 1 and word == (1,) and params == (1,)
    with pytest.raises(NotTNN):
        cell_of(as_matrix([[1, -1], [0, 1]]))


def test_json_roundtrip():
    assert matrix_from_json(matrix_to_json(M121)) == M121
    assert matrix_to_json(evaluate(2, (1,), (F(2, 3),))) == [["1", "2/3"], ["0", "1"]]
    assert parse_params("1/6, 2,3/4") == (F(1, 6), F(2), F(3, 4))


@given(words3, st.data())
def test_minors_match_leibniz(q, data):
    t = data.draw(st.lists(pos_rationals, min_size=len(q), max_size=len(q)))
    p = evaluate(4, q, t)
    assert [list(r) for r in p] == evaluate_naive(4, q, t)
    mins = all_minors(p)
    for rows, cols, v in minors_naive(p):
        assert mins[sum(1 << r for r in rows), sum(1 << c for c in cols)] == v
        assert v >= 0


@given(words3, st.data())
def test_extraction_bound_matches_oracle(q, data):
    t = data.draw(st.lists(pos_rationals, min_size=len(q), max_size=len(q)))
    p = evaluate(4, q, t)
    for i in (1, 2, 3):
        b = extraction_bound(p, i)
        assert b == max(extraction_bound_naive(p, i), 0)
        assert b <= p[i - 1][i]
        assert is_tnn(left_apply(p, i, -b))
        # positivity of the bound characterizes left descents of the cell
        w = cell_of(p)[0]
        assert (b > 0) == (i in A3.left_descents(w))
        if b > 0:
            assert cell_of(left_apply(p, i, -b))[0] == A3.left[w][i - 1]


@given(words3, st.data())
def test_superdiagonal_conservation(q, data):
    t = data.draw(st.lists(pos_rationals, min_size=len(q), max_size=len(q)))
    p = evaluate(4, q, t)
    assert sum(p[j][j + 1] for j in range(3)) == sum(t, F(0))


@given(words3, st.data())
def test_right_extraction_via_antitranspose(q, data):
    t = data.draw(st.lists(pos_rationals, min_size=len(q), max_size=len(q)))
    p = evaluate(4, q, t)
    assert antitranspose(p) == evaluate(4, tuple(4 - a for a in reversed(q)), tuple(reversed(t)))
    for i in (1, 2, 3):
        b = right_extraction_bound(p, i)
        assert is_tnn(right_apply(p, i, -b))
        assert (b > 0) == (i in A3.right_descents(cell_of(p)[0]))


def test_cell_braid_invariance():
    rng = random.Random(2)
    for w in A3.elements:
        words = reduced_words(A3, w)
        t = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in words[0]]
        p = evaluate(4, words[0], t)
        for other in words:
            params = factorize(p, other)
            assert evaluate(4, other, params) == p and cell_of(p)[0] == w


def test_leibniz_sanity():
    assert leibniz_det([[F(2), F(1)], [F(1), F(1)]]) == 1
