import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import box, expand, matvec, random_semilinear
from parikh_kit.errors import DimensionError
from parikh_kit.semilinear import (
    LinearSet,
    SemilinearSet,
    sl_enumerate,
    sl_equal_up_to,
    sl_intersect,
    sl_linear_image,
    sl_linear_preimage,
    sl_member,
    sl_product,
    sl_sum,
    sl_union,
    sl_without_zero,
)


def lin(base, *periods):
    return LinearSet(tuple(base), tuple(tuple(p) for p in periods))


def sl(d, *comps):
    return SemilinearSet(d, comps)


def test_linear_set_normalizes_periods():
    L = lin((1, 0), (0, 0), (2, 1), (2, 1))
    assert L.periods == ((2, 1),)


def test_dimension_checks():
    with pytest.raises(DimensionError):
        lin((1, 0), (1,))
    with pytest.raises(DimensionError):
        sl(2, lin((1,)))
    with pytest.raises(DimensionError):
        sl_member(sl(2, lin((0, 0))), (1,))


def test_membership_examples():
    S = sl(2, lin((0, 0), (1, 1)))
    assert sl_member(S, (3, 3))
    assert not sl_member(S, (3, 2))
    assert sl_member(sl(1, lin((1,), (2,))), (7,))
    assert not sl_member(sl(1, lin((1,), (2,))), (6,))
    assert not sl_member(SemilinearSet.empty(3), (0, 0, 0))


def test_intersection_examples():
    S = sl_intersect(sl(2, lin((0, 0), (1, 1))), sl(2, lin((0, 0), (2, 2))))
    assert sl_equal_up_to(S, sl(2, lin((0, 0), (2, 2))), 10)
    odd_and_triple = sl_intersect(sl(1, lin((1,), (2,))), sl(1, lin((0,), (3,))))
    assert sl_enumerate(odd_and_triple, 30) == {(3,), (9,), (15,), (21,), (27,)}


def test_image_and_preimage_examples():
    S = sl(2, lin((0, 0), (1, 1)))
    assert sl_enumerate(sl_linear_image(S, ((1, 1),)), 10) == {(0,), (2,), (4,), (6,), (8,), (10,)}
    P = sl_linear_preimage(S, ((1, 0, 0), (0, 0, 1)), 3)
    assert sl_member(P, (2, 5, 2))
    assert not sl_member(P, (2, 0, 1))


def test_zero_dimension():
    S = SemilinearSet.points(0, [()])
    assert sl_member(S, ())
    assert sl_enumerate(sl_linear_image(S, ((),)), 3) == {(0,)}


def test_without_zero():
    S = sl(2, lin((0, 0), (1, 0), (0, 2)))
    T = sl_without_zero(S)
    assert not sl_member(T, (0, 0))
    assert expand(T, 6) == expand(S, 6) - {(0, 0)}


def test_sum_and_product():
    A, B = sl(1, lin((1,), (3,))), sl(1, lin((0,), (2,)))
    sums = {(a + b,) for (a,) in expand(A, 12) for (b,) in expand(B, 12) if a + b <= 12}
    assert expand(sl_sum(A, B), 12) == sums
    assert expand(sl_product(A, B), 6) == {(a, b) for (a,) in expand(A, 6) for (b,) in expand(B, 6)}


def test_json_round_trip():
    S = sl(2, lin((1, 0), (1, 1)), lin((0, 3)))
    assert SemilinearSet.from_dict(S.to_dict()) == S


vectors = st.lists(st.integers(0, 3), min_size=2, max_size=2).map(tuple)
linear_sets = st.builds(
    lambda b, ps: LinearSet(b, tuple(ps)), vectors, st.lists(vectors, max_size=2)
)
semilinear_sets = st.lists(linear_sets, min_size=1, max_size=2).map(lambda cs: SemilinearSet(2, tuple(cs)))


@settings(max_examples=40, deadline=None)
@given(semilinear_sets, semilinear_sets)
def test_intersection_matches_generator_expansion(S1, S2):
    bound = 7
    assert expand(sl_intersect(S1, S2), bound) == expand(S1, bound) & expand(S2, bound)


@settings(max_examples=40, deadline=None)
@given(semilinear_sets, semilinear_sets)
def test_union_matches_generator_expansion(S1, S2):
    assert expand(sl_union(S1, S2), 6) == expand(S1, 6) | expand(S2, 6)


@settings(max_examples=40, deadline=None)
@given(semilinear_sets)
def test_membership_matches_generator_expansion(S):
    pts = expand(S, 7)
    assert {x for x in box(2, 7) if sl_member(S, x)} == pts


@settings(max_examples=30, deadline=None)
@given(semilinear_sets, st.lists(st.lists(st.integers(0, 2), min_size=2, max_size=2), min_size=1, max_size=2))
def test_image_matches_generator_expansion(S, rows):
    M = tuple(map(tuple, rows))
    if any(all(row[j] == 0 for row in M) for j in range(2)):
        M = M + ((1, 1),)
    bound = 7
    # no zero column: M x <= bound forces x <= bound
    expected = {matvec(M, x) for x in expand(S, bound)}
    expected = {y for y in expected if max(y) <= bound}
    assert expand(sl_linear_image(S, M), bound) == expected


def test_random_preimage_against_expansion():
    rng = random.Random(7)
    for _ in range(30):
        S = random_semilinear(rng, 2)
        n = rng.randint(1, 3)
        M = tuple(tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(2))
        P = sl_linear_preimage(S, M, n)
        big = expand(S, 2 * 4 * n)
        for x in box(n, 4):
            assert sl_member(P, x) == (matvec(M, x) in big)
