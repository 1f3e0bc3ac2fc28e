import pytest
from hypothesis import given, strategies as st

from oracles import brute_bruhat, inversions, perm_of_word
from tnnfibers.coxeter import (
    BraidMove,
    CoxeterMatrix,
    GroupTooLarge,
    NotADescent,
    NotReduced,
    NotSameElement,
    apply_braid_move,
    braid_path,
    build_system,
    exchange_index,
    named_matrix,
    parse_coxeter_type,
    reduced_words,
    type_a,
)

A2, A3 = type_a(2), type_a(3)


@pytest.mark.parametrize(
    "token,order",
    [("A1", 2), ("A2", 6), ("A3", 24), ("A4", 120), ("B3", 48), ("D4", 192), ("I2:5", 10), ("G2", 12), ("H3", 120), ("F4", 1152)],
)
def test_group_orders(token, order):
    assert len(build_system(named_matrix(token))) == order


def test_a3_matches_permutation_model():
    perms = {perm_of_word(4, A3.normal_form[w]) for w in A3.elements}
    assert len(perms) == 24
    for w in A3.elements:
        assert A3.length[w] == inversions(perm_of_word(4, A3.normal_form[w]))


def test_matrix_validation():
    with pytest.raises(ValueError):
        CoxeterMatrix.from_rows([[1, 3], [2, 1]])
    with pytest.raises(ValueError):
        CoxeterMatrix.from_rows([[1, 1], [1, 1]])
    assert parse_coxeter_type("[[1,3],[3,1]]") == named_matrix("A2")


def test_size_cap():
    # affine A2 is infinite
    with pytest.raises(GroupTooLarge):
        build_system(CoxeterMatrix.from_rows([[1, 3, 3], [3, 1, 3], [3, 3, 1]]), size_cap=1000)
    with pytest.raises(GroupTooLarge):
        build_system(named_matrix("A4"), size_cap=100)


def test_products():
    assert A2.product((1, 1)) == 0
    w = A2.product((1, 2, 1))
    assert A2.length[w] == 3 and w == A2.longest
    assert A3.product((1, 3)) == A3.product((3, 1))
    assert A3.format_element(A3.product((1, 2, 1, 2))) == "s2s1"


def test_is_reduced():
    assert not A2.is_reduced((1, 2, 1, 2))
    assert not A3.is_reduced((1, 2, 1, 2, 3))
    assert A3.is_reduced((1, 3, 2))


def test_exchange_index():
    assert exchange_index(A2, (1, 2), 2) == 2
    assert exchange_index(A2, (1, 2, 1), 1) == 3
    assert exchange_index(A2, (1, 2, 1), 2) == 1
    with pytest.raises(NotADescent):
        exchange_index(A2, (1, 2), 1)


def test_braid_path_examples():
    assert braid_path(A2, (1, 2, 1), (2, 1, 2)) == [BraidMove(1, "long")]
    assert braid_path(A3, (1, 3), (3, 1)) == [BraidMove(1, "short")]
    assert braid_path(A3, (1, 3, 2), (1, 3, 2)) == []
    path = braid_path(A3, (1, 2, 1, 3, 2, 1), (3, 2, 3, 1, 2, 3))
    assert len(path) == 6  # frozen: BFS over the 16 reduced words of w0
    assert len(reduced_words(A3, A3.longest)) == 16
    with pytest.raises(NotSameElement):
        braid_path(A3, (1, 2), (2, 1))
    with pytest.raises(NotReduced):
        braid_path(A3, (1, 1), (2, 2))


def test_bruhat_examples():
    a, b = A3.product((1, 3, 2)), A3.product((3, 2, 1))
    assert not A3.bruhat_leq(a, b) and not A3.bruhat_leq(b, a)
    assert A2.bruhat_leq(A2.product((1,)), A2.product((2, 1)))
    assert all(A3.bruhat_leq(0, w) for w in A3.elements)


def test_bruhat_matches_subword_search_a3():
    for u in A3.elements:
        up = perm_of_word(4, A3.normal_form[u])
        for w in A3.elements:
            assert A3.bruhat_leq(u, w) == brute_bruhat(4, up, A3.normal_form[w])


def test_bruhat_matches_subword_search_b3():
    B3 = build_system(named_matrix("B3"))
    for u in B3.elements:
        for w in B3.elements:
            nf = B3.normal_form[w]
            lu = B3.length[u]
            from itertools import combinations

            brute = any(B3.product([nf[j] for j in pos]) == u for pos in combinations(range(len(nf)), lu))
            assert B3.bruhat_leq(u, w) == brute


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_longest_element(rank):
    sys = type_a(rank)
    top = max(sys.length)
    assert sys.length.count(top) == 1 and top == rank * (rank + 1) // 2


@pytest.mark.parametrize("token", ["A3", "B3", "I2:5", "H3"])
def test_table_invariants(token):
    sys = build_system(named_matrix(token))
    assert sys.length[0] == 0 and sys.length.count(0) == 1
    for w in sys.elements:
        nf = sys.normal_form[w]
        assert len(nf) == sys.length[w] and sys.product(nf) == w
        for s in range(sys.rank):
            assert abs(sys.length[sys.right[w][s]] - sys.length[w]) == 1
            assert sys.left[w][s] == sys.mul(sys.product((s + 1,)), w)


words3 = st.lists(st.integers(1, 3), max_size=8).map(tuple)


@given(words3, words3)
def test_product_is_homomorphism(u, v):
    assert A3.mul(A3.product(u), A3.product(v)) == A3.product(u + v)
    assert perm_of_word(4, A3.normal_form[A3.product(u)]) == perm_of_word(4, u)


@given(st.sampled_from(range(24)), st.sampled_from(range(24)))
def test_braid_path_replays(a, b):
    words = reduced_words(A3, a)
    src, dst = words[0], words[b % len(words)]
    cur = src
    for mv in braid_path(A3, src, dst):
        cur = apply_braid_move(A3, cur, mv)
    assert cur == dst


def test_weak_order():
    w0 = A3.longest
    assert all(A3.weak_leq(u, w0) for u in A3.elements)
    s1, s2s1 = A3.product((1,)), A3.product((2, 1))
    assert not A3.weak_leq(s1, s2s1) and A3.bruhat_leq(s1, s2s1)
