import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_bsl, unambiguous
from parikh_kit.apa import (
    AffineFn,
    DetAPA,
    affine_compose,
    apa_accepts,
    apa_value,
    epsca_to_detapa,
    matmul,
    monoid_closure,
)
from parikh_kit.automata import Automaton, accepts_word, is_deterministic, words_up_to
from parikh_kit.bsl import BslLanguage, Socle, canonical_epsca
from parikh_kit.errors import ConstraintDeterminismUnverified, DimensionError, MonoidCapExceeded
from parikh_kit.models import CA, EpsCA, ca_accepts
from parikh_kit.semilinear import LinearSet, SemilinearSet

DIAG = SemilinearSet(2, (LinearSet((0, 0), ((1, 1),)),))
ANBN_BSL = BslLanguage(Socle(["a", "b"]), DIAG)


def square(d):
    return st.lists(st.lists(st.integers(0, 2), min_size=d, max_size=d), min_size=d, max_size=d)


def affine(d):
    return st.builds(AffineFn, square(d), st.lists(st.integers(0, 3), min_size=d, max_size=d))


@settings(max_examples=50, deadline=None)
@given(affine(2), affine(2), affine(2), st.lists(st.integers(0, 4), min_size=2, max_size=2))
def test_compose_applies_left_first_and_is_associative(f, g, h, x):
    assert affine_compose(f, g)(x) == g(f(x))
    assert affine_compose(affine_compose(f, g), h) == affine_compose(f, affine_compose(g, h))


def test_affine_validation():
    with pytest.raises(DimensionError):
        AffineFn(((1, 0),), (0, 0))
    with pytest.raises(ValueError):
        AffineFn(((-1,),), (0,))


def test_detapa_requires_determinism():
    A = Automaton.build(2, "a", [(0, "a", 0), (0, "a", 1)], 0, [1])
    with pytest.raises(ValueError):
        DetAPA(A, (AffineFn.identity(1),) * 2, SemilinearSet.full(1))


def test_counter_doubling():
    # x -> 2x + 1 on every a: values 0, 1, 3, 7, ...
    A = Automaton.build(1, "a", [(0, "a", 0)], 0, [0])
    M = DetAPA(A, (AffineFn(((2,),), (1,)),), SemilinearSet.points(1, [(7,)]))
    assert apa_value(M, "aaa") == (7,)
    assert apa_accepts(M, "aaa")
    assert not apa_accepts(M, "aa")
    with pytest.raises(MonoidCapExceeded):
        monoid_closure(M, cap=50)


def test_monoid_of_permutation():
    A = Automaton.build(1, "a", [(0, "a", 0)], 0, [0])
    rot = ((0, 1, 0), (0, 0, 1), (1, 0, 0))
    M = DetAPA(A, (AffineFn(rot, (0, 0, 0)),), SemilinearSet.full(3))
    closure = monoid_closure(M)
    assert len(closure) == 3
    assert matmul(rot, matmul(rot, rot)) in closure


def test_anbn_dimension_and_language():
    K = canonical_epsca(ANBN_BSL)
    D = epsca_to_detapa(K)
    # two states, three transitions
    assert D.dimension == 2 * 3 + 1
    assert is_deterministic(D.automaton)
    for w in words_up_to("ab", 8):
        assert apa_accepts(D, w) == ca_accepts(K, w)
    for X in monoid_closure(D):
        assert all(v in (0, 1) for row in X for v in row)
        assert all(sum(row) <= 1 for row in X)


def test_random_canonical_detapa():
    rng = random.Random(17)
    done = 0
    while done < 6:
        B = random_bsl(rng, max_n=2, max_len=2)
        if not unambiguous(B.socle, 4):
            continue
        done += 1
        K = canonical_epsca(B)
        D = epsca_to_detapa(K)
        for w in words_up_to("ab", 7):
            assert accepts_word(D.automaton, w) == accepts_word(K.automaton, w)
            assert apa_accepts(D, w) == ca_accepts(K, w)


def test_empty_word_in_constraint():
    # only the zero count vector is allowed: exactly the empty word
    K = canonical_epsca(BslLanguage(Socle(["a"]), SemilinearSet.points(1, [(0,)])))
    D = epsca_to_detapa(K)
    assert apa_accepts(D, "")
    assert not apa_accepts(D, "a")


def test_constraint_determinism_is_checked():
    A = Automaton.build(3, "a", [(0, "a", 1), (0, "a", 2)], 0, [1, 2])
    M = CA(A, SemilinearSet.points(2, [(1, 0)]))
    with pytest.raises(ConstraintDeterminismUnverified):
        epsca_to_detapa(M)
    # trusted skips the check
    epsca_to_detapa(M, trusted=True)


def test_ambiguous_socle_needs_closed_iteration_set():
    # "a" decomposes as a^1 a^0 and a^0 a^1; only the first is allowed
    K = canonical_epsca(BslLanguage(Socle(["a", "a"]), SemilinearSet.points(2, [(1, 0)])))
    with pytest.raises(ConstraintDeterminismUnverified):
        epsca_to_detapa(K)
    closed = canonical_epsca(BslLanguage(Socle(["a", "a"]), SemilinearSet.points(2, [(1, 0), (0, 1)])))
    D = epsca_to_detapa(closed)
    assert [apa_accepts(D, w) for w in ["", "a", "aa"]] == [False, True, False]


def test_nfa_with_epsilon_detapa():
    # a, or a then b through an epsilon detour
    A = Automaton.build(4, "ab", [(0, "a", 1), (1, "", 2), (2, "b", 3), (1, "b", 3)], 0, [1, 3])
    K = EpsCA(A, SemilinearSet.full(4))
    D = epsca_to_detapa(K)
    for w in words_up_to("ab", 5):
        assert apa_accepts(D, w) == ca_accepts(K, w)
