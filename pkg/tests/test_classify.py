from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from reesemu.classify import (
    ClassificationDatum,
    ConstructionExhausted,
    NotApplicable,
    SlopeTriple,
    approach_from_below,
    classify,
    construct_triple,
    fg_sequence,
    lattice_span_check,
    phi,
    psi,
    verify_classification,
)
from reesemu.herzog import CompleteIntersectionError, MonomialTriple
from reesemu.triangle import ConeProfile, column_counts, emu, minimal_degree, triangle_from_triple

EXAMPLE = (17, 503, 169)


def test_fg_examples():
    assert fg_sequence(3, 3).pairs == ((1, 1), (2, 1), (3, 1), (4, 1))
    assert fg_sequence(4, 3).pairs == ((1, 1), (3, 2), (8, 5), (21, 13))
    assert fg_sequence(5, 0).f(-1) == 0
    with pytest.raises(ValueError):
        fg_sequence(2, 3)


@given(st.integers(3, 10))
def test_fg_identities(n):
    fg = fg_sequence(n, 30)
    assert fg.pairs[1] == (n - 1, n - 2)
    assert fg.pairs[2] == (n * n - 2 * n, n * n - 3 * n + 1)
    for i in range(1, 31):
        f, g = fg.pairs[i]
        fp, gp = fg.pairs[i - 1]
        assert f * gp - fp * g == 1
        assert (f, g) == ((n - 2) * fp + gp, (n - 3) * fp + gp)
        assert f == g + fp
        if i >= 2:
            assert f == (n - 1) * fp - fg.f(i - 2)


def test_slope_vectors_are_primitive():
    slopes = SlopeTriple(F(-4, 2), F(-2, 4), F(2, 4))
    assert slopes.vectors() == ((-2, 1), (-1, 2), (1, 2))
    with pytest.raises(ValueError):
        SlopeTriple(F(-1, 2), F(-4, 7), 2)


def test_lattice_span_check():
    assert lattice_span_check(SlopeTriple(-3, F(-4, 7), F(49, 40)))
    assert lattice_span_check(SlopeTriple(-2, F(-1, 2), F(1, 2)))
    # minors of (-3,1), (-1,3), (1,1) are all even
    assert not lattice_span_check(SlopeTriple(-3, F(-1, 3), 1))


def test_phi_psi_examples():
    slopes = SlopeTriple(-3, F(-4, 7), F(49, 40))
    assert phi(slopes) == MonomialTriple(17, 503, 169)
    assert 503 * -3 - 169 * -4 + 17 * 49 == 0 and 503 * 1 - 169 * 7 + 17 * 40 == 0
    assert psi(EXAMPLE) == slopes
    assert psi((3, 4, 5)) == SlopeTriple(-2, F(-1, 2), F(1, 2))
    with pytest.raises(CompleteIntersectionError):
        psi((2, 3, 5))
    with pytest.raises(ValueError):
        phi(SlopeTriple(-3, F(-1, 3), 1))


def test_phi_psi_round_trip(small_corpus):
    for entry in small_corpus:
        slopes = psi(entry.triple)
        assert phi(slopes) == entry.triple
        assert psi(phi(slopes)) == slopes


def test_classify_example():
    datum = classify(EXAMPLE)
    assert datum == ClassificationDatum(3, 1, 2, 1, mirrored=True)
    assert verify_classification(datum, EXAMPLE)
    assert datum.minimal_degree() == minimal_degree(triangle_from_triple(EXAMPLE)).d == 5


def test_classify_not_applicable(small_corpus):
    assert classify((53, 48, 529)).case == "emu-holds"
    seen = set()
    for entry in small_corpus:
        result = classify(entry.triple)
        if isinstance(result, NotApplicable):
            assert result.case in NotApplicable.CASES
            seen.add(result.case)
    assert seen == set(NotApplicable.CASES)


def test_verify_classification_rejections():
    assert verify_classification((3, 1, 2, 1, True), EXAMPLE)
    assert not verify_classification((3, 1, 1, 1, True), EXAMPLE)
    assert not verify_classification((3, 1, 2, 3, True), EXAMPLE)
    assert not verify_classification((3, 1, 2, 1, False), EXAMPLE)
    assert not verify_classification((3, 1, 2, 1, True), (3, 4, 5))


@pytest.mark.parametrize("bad", [(2, 0, 2, 1), (3, -1, 2, 1), (3, 0, 0, 1), (3, 0, 2, 4), (3, 0, 1, 1)])
def test_datum_invariants(bad):
    with pytest.raises(ValueError):
        ClassificationDatum(*bad)


def test_classified_data_verify(small_corpus):
    count = 0
    for entry in small_corpus:
        datum = classify(entry.triple)
        if isinstance(datum, ClassificationDatum):
            count += 1
            assert verify_classification(datum, entry.triple)
            assert minimal_degree(triangle_from_triple(entry.triple)).d == datum.minimal_degree()
    assert count > 0


def test_approach_from_below():
    target = F(7, 3)
    seq = list(approach_from_below(target, 1000))
    assert all(q < target for q in seq)
    assert seq == sorted(seq)
    assert target - seq[-1] < F(1, 1000)


@pytest.mark.parametrize(
    "key, u, u2, d, triple",
    [((3, 0, 2, 1), 4, 3, 3, (19, 26, 29)), ((3, 1, 2, 1), 7, 3, 5, (51, 58, 55))],
)
def test_construct_examples(key, u, u2, d, triple):
    datum = ClassificationDatum(*key)
    assert datum.u_pair() == (u, u2)
    found = construct_triple(datum)
    assert found == MonomialTriple(*triple)
    assert classify(found) == datum
    assert minimal_degree(triangle_from_triple(found)).d == d


def test_construct_mirrored():
    datum = ClassificationDatum(3, 1, 2, 1, mirrored=True)
    found = construct_triple(datum)
    assert classify(found) == datum


def test_construct_exhausted():
    with pytest.raises(ConstructionExhausted):
        construct_triple(ClassificationDatum(4, 2, 3, 1), max_denominator=5)


def test_constructed_profiles():
    profiles = {}
    for gamma, delta in [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]:
        datum = ClassificationDatum(3, 1, gamma, delta)
        tri = triangle_from_triple(construct_triple(datum))
        d = datum.minimal_degree()
        sorted_counts = column_counts(tri, 1).sorted
        assert list(sorted_counts[: d + 1]) == list(range(1, d + 1)) + [d]
        assert not emu(tri)
        prof = ConeProfile(tri)
        fg = fg_sequence(3, 2)
        profiles[(gamma, delta)] = (
            tuple(prof.a(i) for i in range(1, fg.f(1) + 1)),
            tuple(prof.b(-i) for i in range(1, fg.f(2) + 1)),
        )
    assert len(set(profiles.values())) == 1
