import dataclasses
import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cyclicprod.decompose import NotACyclicPermutation
from cyclicprod.identities import Identity, is_basic
from cyclicprod.sweep import check_instance, instances, reduced_words as grid_words
from cyclicprod.twisted_assoc import (
    ExhaustiveOptions,
    MainLemmaCertificate,
    PreconditionViolated,
    Side,
    TheoremCertificate,
    cyc_product_traced,
    exhaustive_solutions,
    main_lemma,
    shares_cyclic_cancelled_word,
    theorem_solve,
    trace_cyclic_reduction,
    verify_main_lemma,
    verify_theorem,
)
from cyclicprod.word_core import (
    EMPTY,
    concat,
    cyc_product,
    format_word,
    inverse,
    is_rotation,
    parse_word,
    reduce,
    rotations,
)

from conftest import reduced_words, words

W = parse_word


def fw(w):
    return format_word(w)


def failed(rep):
    return [i.name for i in rep.failures()]


RUNNING = (W("x y x y"), W("y^-1 x^-1 y^-2"), W("x y x^-1 y"))
NONCANC = (W("t x"), W("x^-1 y"), W("y^-1 x z"))
H_NEEDED = (W("x^2 y^-1 x^3 y^-2 x"), W("y^-3 x^-1 y^-2"), W("x^-2 y^-1 x y^2"))
SECOND = (W("x^2 y^-1 x^3 y^-2 x"), W("y^-3 x^-1 y^2"), W("x^-2 y x^-1 y"),
             W("x^-1 y^2 x^2 y^-1 x^3 y^-2 x y^-3"))


# -- traces ----------------------------------------------------------------------------

def test_trace_simple():
    prod, tr = cyc_product_traced("x y", "y^-1 z")
    assert fw(prod) == "x z"
    assert W("y y^-1") in tr.cancelled_words()
    assert tr.replay() == prod


def test_trace_running_product():
    u, v, _ = RUNNING
    prod, tr = cyc_product_traced(u, v)
    assert fw(prod) == "x y^-1"
    pairs = [fw(concat(tr.word[i: i + 1], tr.word[j: j + 1])) for i, j in tr.pairs]
    assert pairs == ["y y^-1", "x x^-1", "y y^-1"]
    assert W("x y y^-1 x^-1") in tr.cancelled_words()


def test_trace_empty_when_nothing_cancels():
    prod, tr = cyc_product_traced("a", "b")
    assert fw(prod) == "a b" and not tr and tr.cancelled_words() == []


def test_trace_includes_peeled_ends():
    tr = trace_cyclic_reduction(W("x y x^-1"))
    assert tr.replay() == W("y")
    assert W("x^-1 x") in tr.cancelled_words()


@given(words(alphabet="xy", max_size=10), words(alphabet="xy", max_size=10))
def test_trace_replays_to_product(u, v):
    prod, tr = cyc_product_traced(u, v)
    assert prod == cyc_product(u, v)
    for x in tr.cancelled_words():
        assert reduce(x) == EMPTY and len(x) % 2 == 0


# -- theorem: goldens ---------------------------------------------------------------------

def test_running_example_certificate():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = theorem_solve(u, v, w, d)
    assert (cert.p, fw(cert.f), cert.h) == (u, "y^-2 x y x^-2", EMPTY)
    assert fw(cyc_product(u, cert.f)) == "y x y^-1 x y x^-1"
    rep = verify_theorem(u, v, w, d, cert)
    assert rep.passed, failed(rep)


def test_non_associativity_certificate():
    u, v, w = W("x y"), W("x^-1"), W("x")
    assert fw(cyc_product(cyc_product(u, v), w)) == "y x"
    assert fw(cyc_product(u, cyc_product(v, w))) == "x y"
    d = cyc_product(u, v)
    assert verify_theorem(u, v, w, d, theorem_solve(u, v, w, d)).passed


def test_cancellation_in_both_products_need_not_transfer_to_both():
    u, v, w = NONCANC
    d = cyc_product(u, v)
    assert fw(d) == "t y" and fw(cyc_product(v, w)) == "z"
    cert = theorem_solve(u, v, w, d)
    assert verify_theorem(u, v, w, d, cert).passed
    assert trace_cyclic_reduction(concat(u, v)) and trace_cyclic_reduction(concat(d, w))
    assert trace_cyclic_reduction(concat(cert.q, cert.w_prime))
    assert not trace_cyclic_reduction(concat(cert.p, cert.f))


@pytest.mark.parametrize("u,v,w,d,expect", [
    ("x y", "x^-1", "1", "y", {"p": "x y", "q": "x^-1", "w_prime": "1", "f": "x^-1", "h": "1"}),
    ("1", "x y", "z", "x y", {"p": "1", "q": "x y", "w_prime": "z", "f": "x y z", "h": "1"}),
    ("x y", "y^-1 x^-1", "z x", "1",
     {"p": "x y", "q": "y^-1 x^-1", "w_prime": "z x", "f": "y^-1 x^-1 z x", "h": "1"}),
])
def test_degenerate_branches(u, v, w, d, expect):
    cert = theorem_solve(u, v, w, d)
    got = {k: fw(getattr(cert, k)) for k in expect}
    assert got == expect
    assert verify_theorem(u, v, w, d, cert).passed


def test_unreduced_inputs():
    u, v, w = W("x y y^-1 x"), W("x^-1 z z^-1"), W("y x x^-1")
    d = cyc_product(u, v)
    rep = verify_theorem(u, v, w, d, theorem_solve(u, v, w, d))
    assert rep.passed, failed(rep)


def test_theorem_rejects_non_rotation():
    with pytest.raises(NotACyclicPermutation):
        theorem_solve("x", "y", "z", "x x")


def test_h_must_be_nontrivial():
    u, v, w = H_NEEDED
    d = cyc_product(u, v)
    raw = exhaustive_solutions(u, v, w, d, ExhaustiveOptions(
        require_identity=False, enforce_clauses=False, include_nontrivial_h=False))
    assert raw == []
    sols = exhaustive_solutions(u, v, w, d)
    assert sols and all(c.h for c in sols)
    literal = concat(u, W("y^-2"), cyc_product(v, w), W("y^2"))
    assert cyc_product(d, w) == literal
    assert any(c.p == u and c.h == W("y^-2") and concat(c.p, c.h, c.f, inverse(c.h)) == literal
               for c in sols)
    cert = theorem_solve(u, v, w, d)
    assert cert.h and verify_theorem(u, v, w, d, cert).passed


def test_second_instance_outcome():
    # frozen outcome of running the solver on the second quoted instance
    u, v, w, d = SECOND
    sols = exhaustive_solutions(u, v, w, d)
    assert len(sols) == 3
    for c in sols:
        assert c.h == W("y^-2") and c.p == u
        assert c.q != v and is_rotation(v, c.q)
        assert cyc_product(d, w) != cyc_product(c.p, concat(c.h, c.f, inverse(c.h)))
        nontrivial_f = c.f != cyc_product(c.q, c.w_prime)
        nontrivial_w = c.w_prime != w
        assert nontrivial_f != nontrivial_w
    raw = exhaustive_solutions(u, v, w, d, ExhaustiveOptions(
        require_identity=False, enforce_clauses=False, include_nontrivial_h=False))
    assert raw == []


def test_second_instance_swapped():
    u, v, w, d = SECOND
    sols = exhaustive_solutions(v, u, w, d)
    assert sols and all(c.q != v and is_rotation(v, c.q) for c in sols)


def test_exhaustive_small_instance_contains_pipeline_answer():
    u, v, w, d = W("x y"), W("x^-1"), W("x"), W("y")
    sols = exhaustive_solutions(u, v, w, d)
    assert sols
    cert = theorem_solve(u, v, w, d)
    assert cert.key in [c.key for c in sols]
    for c in sols:
        assert verify_theorem(u, v, w, d, c).passed


def test_exhaustive_rejects_non_rotation():
    with pytest.raises(NotACyclicPermutation):
        exhaustive_solutions("x", "y", "z", "y y")


def test_exhaustive_is_deterministic():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    assert ([c.key for c in exhaustive_solutions(u, v, w, d)]
            == [c.key for c in exhaustive_solutions(u, v, w, d)])


def test_exhaustive_prefers_trivial_h_first():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    hs = [bool(c.h) for c in exhaustive_solutions(u, v, w, d)]
    assert hs == sorted(hs)


# -- verifier ------------------------------------------------------------------------------

def test_tampered_f_fails():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = dataclasses.replace(theorem_solve(u, v, w, d), f=W("x y"))
    assert "f ~ q*w'" in failed(verify_theorem(u, v, w, d, cert))


def test_missing_identity_fails():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = dataclasses.replace(theorem_solve(u, v, w, d), identity=None)
    assert "identity present" in failed(verify_theorem(u, v, w, d, cert))


def test_nonbasic_identity_fails():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = theorem_solve(u, v, w, d)
    # u . (u u^-1 u^-1) is trivial but its two terms do not cancel as pairs
    bad = Identity(cert.identity.lhs, list(cert.identity.rhs) + [(EMPTY, u), (u, inverse(u))])
    assert bad.holds() and not is_basic(bad)
    rep = verify_theorem(u, v, w, d, dataclasses.replace(cert, identity=bad))
    assert "identity basic" in failed(rep)


def test_h_length_item():
    u, v, w = H_NEEDED
    d = cyc_product(u, v)
    cert = theorem_solve(u, v, w, d)
    item = next(i for i in verify_theorem(u, v, w, d, cert).items if i.name.startswith("h != 1"))
    assert item.ok and "|d*w|=" in item.detail
    assert len(cyc_product(d, w)) == len(cert.p) + 2 * len(cert.h) + len(cert.f)


def test_cancellation_clause_item_catches_missing_shared_word():
    u, v, w = NONCANC
    d = cyc_product(u, v)
    cert = theorem_solve(u, v, w, d)
    assert shares_cyclic_cancelled_word(cert.q, cert.w_prime, d, w)
    assert not shares_cyclic_cancelled_word(W("x"), W("y"), d, w)


def test_report_is_complete_and_ordered():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = dataclasses.replace(theorem_solve(u, v, w, d), p=W("z"), f=W("z"))
    rep = verify_theorem(u, v, w, d, cert)
    # every item is reported even after early failures
    assert len(rep.items) == len(verify_theorem(u, v, w, d, theorem_solve(u, v, w, d)).items)


def test_theorem_json_round_trip():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = theorem_solve(u, v, w, d)
    back = TheoremCertificate.from_json(cert.to_json())
    assert back.key == cert.key and back.identity == cert.identity
    assert verify_theorem(u, v, w, d, back).outcome() == verify_theorem(u, v, w, d, cert).outcome()
    for key in ("p", "q", "w_prime", "f", "h"):
        assert W(cert.to_json()[key]) == getattr(cert, key)


# -- main lemma ----------------------------------------------------------------------------

def test_lemma_no_cancellation_case():
    u, v, w, d = W("x y"), W("z"), W("t"), W("x y z")
    cert = main_lemma(u, v, w, d)
    assert cert.case_label == "1:A"
    assert (cert.p, cert.q, cert.w_prime) == (u, v, w)
    assert cert.alpha == cert.beta == cert.gamma == EMPTY
    assert cert.identity == Identity([(EMPTY, v), (EMPTY, w)],
                                     [(EMPTY, inverse(u)), (EMPTY, u), (EMPTY, v), (EMPTY, w)])
    assert is_basic(cert.identity)
    assert verify_main_lemma(u, v, w, d, cert).passed


def test_lemma_running_example():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = main_lemma(u, v, w, d)
    rep = verify_main_lemma(u, v, w, d, cert)
    assert rep.passed, failed(rep)
    assert not trace_cyclic_reduction(concat(d, w))


def test_lemma_cancellation_in_both():
    u, v, w = NONCANC
    d = cyc_product(u, v)
    cert = main_lemma(u, v, w, d)
    assert cert.zeta or cert.eta
    assert verify_main_lemma(u, v, w, d, cert).passed


def test_lemma_tampered_gamma():
    u, v, w = RUNNING
    d = cyc_product(u, v)
    cert = dataclasses.replace(main_lemma(u, v, w, d), gamma=W("x"))
    assert "side equation" in failed(verify_main_lemma(u, v, w, d, cert))


def test_lemma_swapped_roles_still_pair():
    # symmetric input: u and v interchangeable
    u, v, w = W("x y"), W("x y"), W("z")
    d = cyc_product(u, v)
    cert = main_lemma(u, v, w, d)
    swapped = main_lemma(v, u, w, d)
    for c in (cert, swapped):
        rep = verify_main_lemma(u, v, w, d, c)
        assert dict(rep.outcome())["p, q rotations of u, v in some order"]


@pytest.mark.parametrize("u,v,w,d", [
    ("1", "x", "y", "x"), ("x", "y", "1", "x y"), ("x x^-1", "y", "z", "y"), ("x", "x^-1", "y", "1"),
    ("x", "y", "z", "x x"),
])
def test_lemma_preconditions(u, v, w, d):
    with pytest.raises(PreconditionViolated):
        main_lemma(u, v, w, d)


def test_lemma_json_round_trip():
    u, v, w = NONCANC
    d = cyc_product(u, v)
    cert = main_lemma(u, v, w, d)
    back = MainLemmaCertificate.from_json(cert.to_json())
    assert back == cert and back.side in (Side.MIAR, Side.MIAR_PRIME)


def test_lemma_specialisation_for_literal_product():
    u, v, w = W("x y"), W("z"), W("y^-1 t")
    for d in (concat(u, v), concat(v, u)):
        cert = main_lemma(u, v, w, d)
        assert cert.w_prime == w and cert.q in (u, v)


# -- soundness properties ------------------------------------------------------------------

@st.composite
def instance(draw, max_size=4, reduced=True, nonempty=True):
    gen = reduced_words if reduced else (lambda **k: words(alphabet="xy", **k))
    lo = 1 if nonempty else 0
    u = draw(gen(max_size=max_size, min_size=lo))
    v = draw(gen(max_size=max_size, min_size=lo))
    w = draw(gen(max_size=max_size, min_size=lo))
    rots = rotations(cyc_product(u, v))
    d = rots[draw(st.integers(0, len(rots) - 1))]
    return u, v, w, d


@settings(max_examples=60)
@given(instance())
def test_theorem_sound(inst):
    rep = verify_theorem(*inst, theorem_solve(*inst))
    assert rep.passed, failed(rep)


@settings(max_examples=40)
@given(instance(reduced=False, nonempty=False))
def test_theorem_sound_on_arbitrary_words(inst):
    rep = verify_theorem(*inst, theorem_solve(*inst))
    assert rep.passed, failed(rep)


@settings(max_examples=60)
@given(instance())
def test_lemma_sound(inst):
    assume(inst[3])
    rep = verify_main_lemma(*inst, main_lemma(*inst))
    assert rep.passed, failed(rep)


@settings(max_examples=25)
@given(instance(max_size=3))
def test_pipeline_answer_is_in_exhaustive_pool(inst):
    res = check_instance(*inst, cross_check=True)
    assert res.ok, res.errors


@settings(max_examples=25)
@given(instance(max_size=3))
def test_every_exhaustive_certificate_verifies(inst):
    for c in exhaustive_solutions(*inst):
        assert verify_theorem(*inst, c).passed


@settings(max_examples=40)
@given(instance())
def test_same_conjugators_term_by_term(inst):
    ident = theorem_solve(*inst).identity
    assert len(ident.lhs) == len(ident.rhs)
    for a, b in zip(ident.lhs, ident.rhs):
        assert a.conjugator == b.conjugator


def test_grid_with_empty_words_and_single_letters():
    ws = [EMPTY] + grid_words("xy", 1)
    bad = [check_instance(*x, cross_check=True) for x in
           instances(itertools.product(ws, repeat=3))]
    assert all(r.ok for r in bad), [r.errors for r in bad if not r.ok][:3]
