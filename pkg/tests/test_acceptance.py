"""Acceptance criteria 1-9, one pass/fail line each in the terminal summary."""

import random
import time
from fractions import Fraction as F
from math import gcd

import pytest

from reesemu.classify import (
    ClassificationDatum,
    classify,
    construct_triple,
    fg_sequence,
    phi,
    psi,
    verify_classification,
)
from reesemu.cli import cmd_decide, parse_triple
from reesemu.herzog import PrimeGenerators, herzog_generators
from reesemu.oracle import curve_search
from reesemu.triangle import (
    ConeProfile,
    column_counts,
    cover_check,
    emu,
    minimal_degree,
    missing_points,
    pick_counts,
    triangle_from_triple,
)
from reesemu.truncring import (
    CHAR0,
    CoefficientField,
    Series,
    TruncatedRing,
    factor_decision,
    iter_points,
    reduction_constants,
    series_oracle,
    series_z,
)

from conftest import criterion

EXAMPLE = (17, 503, 169)
NOETHERIAN = (53, 48, 529)


def profile_key(tri, m=1):
    """Everything the reduction of ``xi^m`` reads: the ring and the cone counts below level ``m*u``."""
    prof = ConeProfile(tri)
    top = m * tri.u
    return (tri.ubar, m, tuple(prof.a(i) for i in range(top)), tuple(prof.b(-i) for i in range(top)))


@pytest.fixture(scope="session")
def corpus_results(full_corpus):
    """emu, factor status and curve existence for every corpus triple.

    Both oracles are memoised on exactly the data they read: the cone counts
    below level u for the factorization, and the lattice points together with
    (u, u2) for the curve search.
    """
    start = time.time()
    factor_cache, curve_cache = {}, {}
    rows = []
    for entry in full_corpus:
        tri = entry.triangle
        fkey = profile_key(tri)
        if fkey not in factor_cache:
            factor_cache[fkey] = factor_decision(entry.triple, 1).status
        ckey = (tuple(tri.lattice_points(1)), tri.u, tri.u2)
        if ckey not in curve_cache:
            curve_cache[ckey] = curve_search(entry.triple, 1) is not None
        rows.append((entry, emu(tri, 1), factor_cache[fkey], curve_cache[ckey]))
    return rows, time.time() - start


def test_criterion_1_worked_example():
    with criterion(1, "worked example (17,503,169)"):
        start = time.time()
        gens = herzog_generators(EXAMPLE)
        assert gens == PrimeGenerators(s2=49, s3=40, t1=2, t3=1, u1=3, u2=4)
        assert (gens.s, gens.t, gens.u) == (89, 3, 7)
        profile = column_counts(triangle_from_triple(EXAMPLE), 1)
        assert profile.counts == (2, 4, 5, 7, 5, 3, 1)
        assert profile.sorted == (1, 2, 3, 4, 5, 5, 7)
        assert not profile.emu()
        verdict, code = cmd_decide(parse_triple("17,503,169"))
        assert code == 0 and verdict.noetherian is False
        elapsed = time.time() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_2_noetherian_example():
    with criterion(2, "(53,48,529) EMU at m=1 only, Noetherian"):
        start = time.time()
        tri = triangle_from_triple(NOETHERIAN)
        assert emu(tri, 1) and not emu(tri, 2) and not emu(tri, 3)
        verdict, code = cmd_decide(parse_triple("53,48,529"))
        assert code == 0 and verdict.noetherian is True
        elapsed = time.time() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_3_three_way_agreement(corpus_results):
    with criterion(3, "three-way agreement on the corpus up to 120") as info:
        rows, elapsed = corpus_results
        disagreements = [
            (e.triple.as_tuple(), holds, status, curve)
            for e, holds, status, curve in rows
            if not (holds == (status == "factors") == curve) or status == "inconclusive"
        ]
        assert not disagreements, disagreements[:5]
        positives = sum(1 for _, holds, _, _ in rows if holds)
        info["info"] = f"{len(rows)} triples, {positives} EMU, {elapsed:.0f}s"


def test_criterion_4_truncated_ring_soundness():
    with criterion(4, "truncated ring vs series oracle, 500 random cases"):
        rng = random.Random(20240611)
        for trial in range(500):
            u = rng.randint(2, 15)
            u2 = rng.choice([k for k in range(1, u) if gcd(k, u) == 1])
            level = rng.randint(1, 12)
            ring = TruncatedRing(F(-u2, u), level)
            pts = list(iter_points(level))
            kind = trial % 3
            if kind == 0:
                (a1, n1), (a2, n2) = rng.choice(pts), rng.choice(pts)
                e1, e2 = ring.basis(a1, n1), ring.basis(a2, n2)
                result = e1 * e2
                assert series_oracle(result) == series_oracle(e1) * series_oracle(e2)
            elif kind == 1:
                coeffs = {p: rng.randint(-4, 4) for p in rng.sample(pts, min(len(pts), 4))}
                coeffs[(0, 0)] = rng.choice([1, -1])
                e = ring.element(coeffs)
                result = ring.inverse(e)
                assert result * e == ring.one()
                assert series_oracle(result) * series_oracle(e) == Series.make(level, CHAR0, {(0, 0): 1})
            else:
                a, n = rng.choice(pts)
                result = ring.z_element(a, n)
                assert series_oracle(result) == series_z(ring.ubar, a, n, level)
            assert all(isinstance(c, int) for c in result.coeffs.values())


@pytest.mark.parametrize("p", [2, 3])
def test_criterion_5_char_p(p):
    with criterion(5, f"char {p} factorization of (17,503,169)") as info:
        tri = triangle_from_triple(EXAMPLE)
        top = max(n for _, n in missing_points(tri, 1))
        m = p
        while m <= top:
            m *= p
        start = time.time()
        decision = factor_decision(EXAMPLE, m, CoefficientField(p))
        elapsed = time.time() - start
        assert decision.status == "factors", decision.status
        assert elapsed <= 60, f"took {elapsed:.1f}s"
        info["info"] = f"m={m}, {elapsed:.2f}s"


def test_criterion_6_descent(corpus_results):
    with criterion(6, "m=2 factors implies m=1 factors on the corpus") as info:
        rows, _ = corpus_results
        cache = {}
        checked = 0
        for entry, _, status, _ in rows:
            if status == "factors":
                continue
            # only triples obstructed at m=1 can violate the implication
            key = profile_key(entry.triangle, 2)
            if key not in cache:
                cache[key] = factor_decision(entry.triple, 2).status
            checked += 1
            assert cache[key] != "factors", entry.triple
        info["info"] = f"{checked} obstructed triples rechecked at m=2"


def test_criterion_7_reduction_constants():
    with criterion(7, "reduction constants for n in 3..5, lambda in 0..2"):
        for n in (3, 4, 5):
            for lam in (0, 1, 2):
                fg = fg_sequence(n, lam + 1)
                f0, f1, g0, g1 = fg.f(lam), fg.f(lam + 1), fg.g(lam), fg.g(lam + 1)
                rc = reduction_constants(n, lam)
                assert rc.q2 != 0, (n, lam)
                assert rc.q1 * (f0 + f1) == rc.q2 * (g0 + g1), (n, lam, rc.q1, rc.q2)
                for gamma in range(1, 6):
                    for delta in range(1, 6):
                        if gcd(gamma, delta) != 1 or (gamma, delta) == (1, 1):
                            continue
                        value = rc.q1 * (gamma * f0 + delta * f1) - rc.q2 * (gamma * g0 + delta * g1)
                        assert value != 0, (n, lam, gamma, delta)


def test_criterion_8_classification_round_trips():
    with criterion(8, "classification round trips") as info:
        assert classify(EXAMPLE) == ClassificationDatum(3, 1, 2, 1, mirrored=True)
        count = 0
        for n in range(3, 6):
            for lam in range(3):
                for gamma in range(1, 5):
                    for delta in range(1, 5):
                        if gcd(gamma, delta) != 1 or (gamma, delta) == (1, 1):
                            continue
                        datum = ClassificationDatum(n, lam, gamma, delta)
                        triple = construct_triple(datum)
                        assert classify(triple) == datum, (datum, triple)
                        assert verify_classification(datum, triple)
                        md = minimal_degree(triangle_from_triple(triple))
                        assert md.d == datum.minimal_degree()
                        count += 1
        info["info"] = f"{count} data"


def test_criterion_9_property_suites(full_corpus):
    with criterion(9, "property suites on the corpus") as info:
        by_triple = {}
        for entry in full_corpus:
            tri = entry.triangle
            by_triple[entry.triple.as_tuple()] = emu(tri, 1)
            assert pick_counts(tri, 1).pick_holds()
            assert cover_check(tri, 1) == by_triple[entry.triple.as_tuple()]
            prof = ConeProfile(tri)
            for i in range(1, 11):
                for j in range(1, 11 - i):
                    assert prof.a(i + j) >= prof.a(i) + prof.a(j) - 1
                    assert prof.b(-(i + j)) >= prof.b(-i) + prof.b(-j) - 1
            slopes = psi(entry.triple)
            assert phi(slopes) == entry.triple and psi(phi(slopes)) == slopes
        for (a, b, c), holds in by_triple.items():
            assert by_triple[(b, a, c)] == holds
        for n in range(3, 11):
            fg = fg_sequence(n, 30)
            for i in range(1, 31):
                assert fg.f(i) * fg.g(i - 1) - fg.f(i - 1) * fg.g(i) == 1
                assert fg.f(i) == fg.g(i) + fg.f(i - 1)
                if i >= 2:
                    assert fg.f(i) == (n - 1) * fg.f(i - 1) - fg.f(i - 2)
        info["info"] = f"{len(by_triple)} triples"
