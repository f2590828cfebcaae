import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclicprod.word_core import (
    EMPTY,
    EquationUnbalanced,
    LeviCase,
    Word,
    WordParseError,
    concat,
    cyc_product,
    cyclic_permutations,
    cyclic_reduction,
    cyclically_reduce,
    equation_bars,
    format_word,
    inverse,
    is_cyclic_permutation,
    is_cyclically_reduced,
    is_reduced,
    is_rotation,
    levi_solve,
    parse_word,
    reduce,
    reduced_product,
    reverse,
    rotation_conjugators,
    rotations,
    split_reduction,
)

from conftest import reduced_words, words

W = parse_word


def fw(w):
    return format_word(w)


# -- grammar ---------------------------------------------------------------------

def test_parse_expands_exponents():
    assert W("x^-2 y") == concat(inverse(W("x")), inverse(W("x")), W("y"))
    assert len(W("a^3")) == 3


def test_one_is_the_empty_word():
    assert W("1") == EMPTY
    assert fw(EMPTY) == "1"


@pytest.mark.parametrize("bad", ["x^0", "", "  ", "x^", "2x", "x^-0", "x^01", "x*y"])
def test_parse_rejects(bad):
    with pytest.raises(WordParseError):
        W(bad)


def test_identifiers_may_carry_digits_and_underscores():
    assert fw(W("x1 x_2^-1 X3")) == "x1 x_2^-1 X3"


@given(words(alphabet="ab", max_size=20))
def test_format_round_trip(w):
    assert W(fw(w)) == w


# -- basic operations --------------------------------------------------------------

def test_concat_example():
    assert fw(concat(W("x y x y"), W("y^-1 x^-1 y^-2"))) == "x y x y y^-1 x^-1 y^-2"


@pytest.mark.parametrize("src,expected", [("x y^-1", "y x^-1"), ("1", "1"),
                                          ("x y x y", "y^-1 x^-1 y^-1 x^-1")])
def test_inverse_examples(src, expected):
    assert fw(inverse(W(src))) == expected


@pytest.mark.parametrize("src,expected", [("x y^-1 z", "z y^-1 x"), ("1", "1")])
def test_reverse_examples(src, expected):
    assert fw(reverse(W(src))) == expected


def test_reverse_involution():
    assert fw(reverse(reverse(W("x y x^-1")))) == "x y x^-1"


@pytest.mark.parametrize("src,expected", [
    ("x y y^-1 x^-1 x z", "x z"),
    ("x x^-1", "1"),
    ("x y x y y^-1 x^-1 y^-1 y^-1", "x y^-1"),
])
def test_reduce_examples(src, expected):
    assert fw(reduce(W(src))) == expected


@pytest.mark.parametrize("src,t,c", [
    ("y^-1 x^-1 y^-2 x y x^-1 y", "y^-1", "x^-1 y^-2 x y x^-1"),
    ("x y", "1", "x y"),
    ("a b c b^-1 a^-1", "a b", "c"),
])
def test_cyclically_reduce_examples(src, t, c):
    tt, cc = cyclically_reduce(W(src))
    assert (fw(tt), fw(cc)) == (t, c)


@pytest.mark.parametrize("u,v,expected", [
    ("x y", "x^-1", "y"),
    ("y", "x", "y x"),
    ("x y x y", "y^-1 x^-1 y^-2", "x y^-1"),
    ("t x", "x^-1 y", "t y"),
])
def test_cyc_product_examples(u, v, expected):
    assert fw(cyc_product(W(u), W(v))) == expected


@pytest.mark.parametrize("u,v,expected", [("x y", "y^-1 z", "x z"), ("x", "x^-1", "1"),
                                          ("x y x y", "y^-1 x^-1 y^-2", "x y^-1")])
def test_reduced_product_examples(u, v, expected):
    assert fw(reduced_product(W(u), W(v))) == expected


def test_rotations_in_split_order():
    assert [fw(r) for r in rotations(W("x y z"))] == ["x y z", "y z x", "z x y"]
    assert rotations(EMPTY) == [EMPTY]


def test_rotation_of_v_star_w_gives_f():
    vw = W("x^-1 y^-2 x y x^-1")
    split, rot = cyclic_permutations(vw)[4]
    assert fw(rot) == "y x^-2 y^-2 x"
    assert fw(cyclic_permutations(vw)[3][1]) == "x y x^-2 y^-2"
    assert is_rotation(vw, W("y^-2 x y x^-2"))


def test_is_cyclic_permutation_examples():
    s = is_cyclic_permutation(W("x y"), W("y x"))
    assert (fw(s.left), fw(s.right)) == ("x", "y")
    s = is_cyclic_permutation(W("x y"), W("x y"))
    assert (fw(s.left), fw(s.right)) == ("1", "x y")
    assert is_cyclic_permutation(W("x y"), W("x x")) is None


@pytest.mark.parametrize("u1,u2,v1,v2,case,p", [
    ("a b", "c", "a", "b c", LeviCase.LEFT, "b"),
    ("a", "b", "a", "b", LeviCase.ALIGNED, "1"),
    ("x y x", "y", "x", "y x y", LeviCase.LEFT, "y x"),
    ("a", "b c", "a b", "c", LeviCase.RIGHT, "b"),
])
def test_levi_examples(u1, u2, v1, v2, case, p):
    sol = levi_solve(u1, u2, v1, v2)
    assert sol.case is case and fw(sol.p) == p
    assert sol.rebuild(W(u1), W(u2), W(v1), W(v2))


def test_levi_unbalanced():
    with pytest.raises(EquationUnbalanced):
        levi_solve("a", "b", "b", "a")


def test_levi_agrees_with_brute_force_cut_enumeration():
    word = W("x y x y x")
    for i, j in itertools.product(range(len(word) + 1), repeat=2):
        u1, u2, v1, v2 = word[:i], word[i:], word[:j], word[j:]
        sol = levi_solve(u1, u2, v1, v2)
        candidates = [word[min(i, j):max(i, j)]]
        assert sol.p in candidates or (i == j and sol.p == EMPTY)
        assert sol.rebuild(u1, u2, v1, v2)


def test_bars_two_blocks():
    bp = equation_bars(["a b", "c d"], ["a", "b c d"])
    assert bp.v_cuts == (1,) and bp.u_cuts == (2,)
    assert bp.u_composition == (1, 0) and bp.v_composition == (0, 1)


def test_bars_four_against_three():
    # v1 = u1 a, u2 = a b, v2 = b u3 c, u4 = c v3
    us = ["p", "q r", "s", "t o"]
    vs = ["p q", "r s t", "o"]
    bp = equation_bars(us, vs)
    assert bp.u_composition == (0, 1, 0, 1)
    assert bp.v_composition == (1, 2, 0)


def test_bars_single_block():
    bp = equation_bars(["x"], ["x"])
    assert bp.u_cuts == () and bp.v_cuts == ()


def test_bars_unbalanced():
    with pytest.raises(EquationUnbalanced):
        equation_bars(["x"], ["y"])


# -- properties ---------------------------------------------------------------------

@given(words())
def test_reduce_idempotent_and_shrinking(w):
    r = reduce(w)
    assert reduce(r) == r and len(r) <= len(w) and is_reduced(r)


@given(words())
def test_reduce_commutes_with_reverse(w):
    assert reduce(reverse(w)) == reverse(reduce(w))


@given(words(), words())
def test_reverse_of_cyclic_product(u, v):
    assert reverse(cyc_product(u, v)) == cyc_product(reverse(v), reverse(u))


@given(words(), words())
def test_cyclic_product_only_sees_reduced_forms(u, v):
    assert cyc_product(u, v) == cyc_product(reduce(u), reduce(v))


@given(words(), words())
def test_cyclic_product_trivial_iff_inverse(u, v):
    assert (cyc_product(u, v) == EMPTY) == (reduce(u) == reduce(inverse(v)))


@given(words())
def test_cyclic_reduction_decomposition(w):
    t, c = cyclically_reduce(w)
    assert reduce(concat(t, c, inverse(t))) == reduce(w)
    assert is_cyclically_reduced(c) and is_reduced(t)
    assert (t == EMPTY) == is_cyclically_reduced(reduce(w))


@given(words(), words())
def test_products_in_both_orders_are_rotations(u, v):
    assert is_cyclic_permutation(cyc_product(u, v), cyc_product(v, u)) is not None


@given(words(max_size=8), words(max_size=8))
def test_conjugation_keeps_cyclic_class(t, w):
    lhs = cyclic_reduction(concat(t, w, inverse(t)))
    assert is_rotation(lhs, cyclic_reduction(w))
    rt, rw = reduce(t), reduce(w)
    if is_reduced(concat(rt, rw, inverse(rt))):
        assert lhs == cyclic_reduction(w)


@given(words(), words())
def test_cyclically_reduced_concatenation_either_order(u, v):
    assert is_cyclically_reduced(concat(u, v)) == is_cyclically_reduced(concat(v, u))


@given(words(), st.data())
def test_split_reduction_matches_prefix(u, data):
    k = data.draw(st.integers(0, len(reduce(u))))
    u1, u2 = split_reduction(u, k)
    assert concat(u1, u2) == u
    assert reduce(u1) == reduce(u)[:k] and reduce(u2) == reduce(u)[k:]


@given(words(max_size=10), st.data())
def test_levi_reconstruction(w, data):
    i = data.draw(st.integers(0, len(w)))
    j = data.draw(st.integers(0, len(w)))
    assert levi_solve(w[:i], w[i:], w[:j], w[j:]).rebuild(w[:i], w[i:], w[:j], w[j:])


@given(words(max_size=10), st.data())
def test_rotation_relation_is_an_equivalence(w, data):
    k = data.draw(st.integers(0, max(len(w) - 1, 0)))
    r = rotations(w)[k]
    assert is_rotation(w, w) and is_rotation(w, r) and is_rotation(r, w)
    for s in rotations(r):
        assert is_rotation(w, s)


@given(reduced_words(max_size=8), st.data())
def test_rotation_conjugators_conjugate(w, data):
    rots = rotations(w)
    dst = rots[data.draw(st.integers(0, len(rots) - 1))]
    conj = rotation_conjugators(w, dst)
    assert conj
    for a in conj:
        assert reduce(concat(a, w, inverse(a))) == reduce(dst)
