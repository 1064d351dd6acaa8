"""Enumeration of the triples that satisfy the standing hypotheses."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import gcd
from typing import Iterator

from .herzog import CompleteIntersectionError, MonomialTriple, PrimeGenerators, herzog_generators
from .triangle import RationalTriangle, negative_curve_holds, triangle_from_generators


@dataclass(frozen=True)
class CorpusEntry:
    triple: MonomialTriple
    gens: PrimeGenerators
    triangle: RationalTriangle


def coprime_triples(max_value: int) -> Iterator[tuple[int, int, int]]:
    """Pairwise coprime ``a < b < c <= max_value``."""
    for c in range(3, max_value + 1):
        for b in range(2, c):
            if gcd(b, c) != 1:
                continue
            for a in range(1, b):
                if gcd(a, b) == 1 and gcd(a, c) == 1:
                    yield (a, b, c)


def in_scope(triple) -> CorpusEntry | None:
    """The entry for ``triple`` if it is non-CI with ``z^u - x^s3 y^t3`` negative."""
    try:
        gens = herzog_generators(triple)
    except CompleteIntersectionError:
        return None
    tri = triangle_from_generators(gens)
    if not negative_curve_holds(tri):
        return None
    return CorpusEntry(MonomialTriple.coerce(triple), gens, tri)


def corpus(max_value: int) -> Iterator[CorpusEntry]:
    """Every ordering of every coprime triple up to ``max_value`` that is in scope.

    Orderings of one unordered triple come out together, in lexicographic
    order, so the stream is deterministic.
    """
    for base in coprime_triples(max_value):
        a, b, c = base
        # the negative-curve test u^2 c < ab needs c < ab, which prunes most orderings cheaply
        for perm in sorted(set(permutations(base))):
            if perm[2] >= perm[0] * perm[1]:
                continue
            entry = in_scope(perm)
            if entry is not None:
                yield entry
