import random

import pytest

from oracles import random_bsl, random_dfa, random_semilinear, runs_by_length
from parikh_kit.automata import Automaton, words_up_to
from parikh_kit.bsl import bsl_member, canonical_epsca
from parikh_kit.errors import DimensionError
from parikh_kit.models import (
    CA,
    PA,
    EpsCA,
    ca_accepts,
    ca_to_pa,
    check_constraint_determinism,
    epsca_to_ca,
    pa_accepts,
    pa_empty,
    pa_is_deterministic,
    pa_to_ca,
)
from parikh_kit.semilinear import LinearSet, SemilinearSet, sl_member

AB = Automaton.build(2, "ab", [(0, "a", 0), (0, "b", 1), (1, "b", 1)], 0, [0, 1])
ANBN = PA(AB, ((1, 0), (0, 1), (0, 1)), SemilinearSet(2, (LinearSet((0, 0), ((1, 1),)),)))


def brute_pa_accepts(M, w):
    A = M.automaton
    for path in runs_by_length(A, len(w)):
        if len(path) == len(w) and A.label(path) == tuple(w):
            total = tuple(sum(M.vectors[t][k] for t in path) for k in range(M.dimension))
            if sl_member(M.constraint, total):
                return True
    return False


def test_anbn_membership():
    accepted = ["", "ab", "aabb", "aaabbb"]
    rejected = ["a", "b", "aab", "abb", "ba", "abab"]
    assert all(pa_accepts(ANBN, w) for w in accepted)
    assert not any(pa_accepts(ANBN, w) for w in rejected)


def test_pa_validation():
    with pytest.raises(DimensionError):
        PA(AB, ((1, 0),), ANBN.constraint)
    with pytest.raises(DimensionError):
        CA(AB, ANBN.constraint)
    eps = Automaton.build(1, "a", [(0, "", 0)], 0, [0])
    with pytest.raises(ValueError):
        CA(eps, SemilinearSet.full(1))


def test_determinism_of_pa():
    assert pa_is_deterministic(ANBN)
    A = Automaton.build(1, "a", [(0, "a", 0), (0, "a", 0)], 0, [0])
    assert not pa_is_deterministic(PA(A, ((1,), (2,)), SemilinearSet.full(1)))
    assert pa_is_deterministic(PA(A, ((1,), (1,)), SemilinearSet.full(1)))


def test_pa_against_run_enumeration():
    rng = random.Random(5)
    for _ in range(20):
        A = random_dfa(rng, rng.randint(1, 3), density=0.8)
        d = rng.randint(1, 2)
        vectors = tuple(tuple(rng.randint(0, 2) for _ in range(d)) for _ in A.transitions)
        M = PA(A, vectors, random_semilinear(rng, d))
        C = pa_to_ca(M)
        for w in words_up_to("ab", 5):
            expected = brute_pa_accepts(M, w)
            assert pa_accepts(M, w) == expected
            assert ca_accepts(C, w) == expected
            assert ca_accepts(C, w, method="product") == expected


def test_ca_to_pa_round_trip():
    C = pa_to_ca(ANBN)
    P = ca_to_pa(C)
    for w in words_up_to("ab", 6):
        assert pa_accepts(P, w) == pa_accepts(ANBN, w)


def test_epsilon_ca_membership_methods_agree():
    rng = random.Random(9)
    for _ in range(10):
        B = random_bsl(rng, max_n=2, max_len=2)
        K = canonical_epsca(B)
        K2 = epsca_to_ca(K)
        for w in words_up_to("ab", 6):
            expected = bsl_member(B, w)
            assert ca_accepts(K, w) == expected
            assert ca_accepts(K, w, method="product") == expected
            assert ca_accepts(K2, w) == expected


def test_epsilon_cycle_uses_product():
    # the epsilon loop may run any number of times, so both parities are reachable
    A = Automaton.build(2, "a", [(0, "", 0), (0, "a", 1)], 0, [1])
    C = SemilinearSet(2, (LinearSet((2, 1), ((2, 0),)),))
    M = EpsCA(A, C)
    assert ca_accepts(M, "a")
    M_odd = EpsCA(A, SemilinearSet(2, (LinearSet((1, 1), ((2, 0),)),)))
    assert ca_accepts(M_odd, "a")
    assert not ca_accepts(EpsCA(A, SemilinearSet.points(2, [(0, 0)])), "a")


def test_emptiness():
    assert not pa_empty(ANBN)
    diagonal = ((1, 1),) * 3
    assert pa_empty(PA(AB, diagonal, SemilinearSet(2, (LinearSet((1, 0), ((2, 2),)),))))
    assert pa_empty(PA(AB, ANBN.vectors, SemilinearSet.empty(2)))
    dead = Automaton.build(2, "a", [(0, "a", 0)], 0, [1])
    assert pa_empty(PA(dead, ((1,),), SemilinearSet.full(1)))


def test_constraint_determinism_check():
    A = Automaton.build(3, "a", [(0, "a", 1), (0, "a", 2)], 0, [1, 2])
    # both runs on "a" agree only when the constraint ignores which branch is taken
    assert check_constraint_determinism(CA(A, SemilinearSet.full(2)), 3)
    assert not check_constraint_determinism(CA(A, SemilinearSet.points(2, [(1, 0)])), 3)
