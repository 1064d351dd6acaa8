from math import gcd

import pytest
from hypothesis import given, strategies as st

from reesemu.herzog import (
    CompleteIntersectionError,
    MonomialTriple,
    PrimeGenerators,
    herzog_generators,
    is_complete_intersection,
    mirror_generators,
    semigroup_representations,
    verify_generators,
)

EXAMPLE_GENS = PrimeGenerators(s2=49, s3=40, t1=2, t3=1, u1=3, u2=4)


def brute_force_minimal(g, p, q):
    k = 1
    while True:
        reps = [(i, j) for i in range(k * g // p + 1) for j in range(k * g // q + 1) if i * p + j * q == k * g]
        if reps:
            return k, reps
        k += 1


def test_worked_example_generators():
    gens = herzog_generators((17, 503, 169))
    assert gens == EXAMPLE_GENS
    assert (gens.s, gens.t, gens.u) == (89, 3, 7)
    assert gens.binomials() == ("x^89 - y^2*z^3", "y^3 - x^49*z^4", "z^7 - x^40*y^1")


def test_three_four_five():
    gens = herzog_generators((3, 4, 5))
    assert gens.as_dict() == {"s": 3, "t": 2, "u": 2, "s2": 1, "s3": 2, "t1": 1, "t3": 1, "u1": 1, "u2": 1}
    k, reps = brute_force_minimal(3, 4, 5)
    assert (k, reps) == (3, [(1, 1)])


def test_complete_intersection():
    with pytest.raises(CompleteIntersectionError):
        herzog_generators((2, 3, 5))
    assert is_complete_intersection((2, 3, 5))
    assert not is_complete_intersection((17, 503, 169))


@pytest.mark.parametrize("triple", [(1, 2, 3), (1, 5, 7), (4, 1, 9)])
def test_unit_entry_is_ci(triple):
    assert is_complete_intersection(triple)


def test_several_representations_is_ci():
    # 11 = 2*4 + 3*1 = 2*1 + 3*3
    assert len(semigroup_representations(11, 2, 3)) == 2
    assert is_complete_intersection((11, 2, 3))


def test_verify_generators():
    assert verify_generators((17, 503, 169), EXAMPLE_GENS)
    bad = PrimeGenerators(s2=49, s3=40, t1=2, t3=1, u1=3, u2=5)
    assert not verify_generators((17, 503, 169), bad)
    assert verify_generators((3, 4, 5), herzog_generators((3, 4, 5)))
    assert not verify_generators((4, 6, 7), EXAMPLE_GENS)


@pytest.mark.parametrize("value", [(0, 1, 2), (2, 4, 5), (3, 3, 4), (1.5, 2, 3)])
def test_invalid_triples(value):
    with pytest.raises(ValueError):
        MonomialTriple(*value)


coprime_triples = st.tuples(
    st.integers(2, 60), st.integers(2, 60), st.integers(2, 60)
).filter(lambda t: gcd(t[0], t[1]) == gcd(t[1], t[2]) == gcd(t[0], t[2]) == 1)


@given(coprime_triples)
def test_generators_verify_and_are_minimal(triple):
    a, b, c = triple
    try:
        gens = herzog_generators(triple)
    except CompleteIntersectionError:
        return
    assert verify_generators(triple, gens)
    for g, p, q, k in ((a, b, c, gens.s), (b, a, c, gens.t), (c, a, b, gens.u)):
        kk, reps = brute_force_minimal(g, p, q)
        assert kk == k and len(reps) == 1 and min(reps[0]) > 0


@given(coprime_triples)
def test_swap_symmetry(triple):
    a, b, c = triple
    assert is_complete_intersection((a, b, c)) == is_complete_intersection((b, a, c))
    if not is_complete_intersection((a, b, c)):
        gens = herzog_generators((a, b, c))
        assert herzog_generators((b, a, c)) == mirror_generators(gens)
        assert herzog_generators((b, a, c)).u == gens.u
