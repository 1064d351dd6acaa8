"""Classification of EMU-failing triples and the triple/slope correspondence.

``psi`` sends a non-CI triple to its slope triple and ``phi`` inverts it.
``classify`` reads off ``(n, lam, gamma, delta)`` for a triple whose
triangle fails EMU with first/last column counts ``n >= 3`` and ``2``;
``construct_triple`` goes the other way by approximating the boundary
slopes from below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .herzog import MonomialTriple, herzog_generators
from .triangle import (
    HypothesisError,
    RationalTriangle,
    as_fraction,
    column_counts,
    minimal_degree,
    negative_curve_holds,
    triangle_from_generators,
    triangle_from_slopes,
)


@dataclass(frozen=True)
class FGSequence:
    n: int
    pairs: tuple[tuple[int, int], ...]

    def f(self, i: int) -> int:
        return 0 if i == -1 else self.pairs[i][0]

    def g(self, i: int) -> int:
        return self.pairs[i][1]


def fg_sequence(n: int, limit: int) -> FGSequence:
    if n < 3:
        raise ValueError("n must be at least 3")
    if limit < 0:
        raise ValueError("limit must be non-negative")
    f, g = 1, 1
    pairs = [(f, g)]
    for _ in range(limit):
        f, g = (n - 2) * f + g, (n - 3) * f + g
        pairs.append((f, g))
    return FGSequence(n, tuple(pairs))


# -- slope triples -----------------------------------------------------------


@dataclass(frozen=True)
class SlopeTriple:
    r1: Fraction
    r2: Fraction
    r3: Fraction

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "r3"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (self.r1 < -1 < self.r2 < 0 < self.r3):
            raise ValueError(f"need r1 < -1 < r2 < 0 < r3, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.r1, self.r2, self.r3)

    def vectors(self) -> tuple[tuple[int, int], ...]:
        """Primitive vectors ``(numerator, denominator)`` of the three slopes."""
        return tuple((r.numerator, r.denominator) for r in self.as_tuple())

    def triangle(self) -> RationalTriangle:
        return triangle_from_slopes(*self.as_tuple())

    @classmethod
    def from_triangle(cls, tri: RationalTriangle) -> "SlopeTriple":
        return cls(tri.tbar, tri.ubar, tri.sbar)


def _minors(slopes: SlopeTriple) -> tuple[int, int, int]:
    (r11, r12), (r21, r22), (r31, r32) = slopes.vectors()
    # cross product of the rows (r31, r11, -r21) and (r32, r12, -r22)
    a = r11 * -r22 + r21 * r12
    b = -r21 * r32 + r31 * r22
    c = r31 * r12 - r11 * r32
    return a, b, c


def lattice_span_check(slopes: SlopeTriple) -> bool:
    """Do the three primitive slope vectors generate ``Z^2``?"""
    return math.gcd(*_minors(slopes)) == 1


def phi(slopes: SlopeTriple) -> MonomialTriple:
    """The positive primitive ``(a, b, c)`` with ``b*r1 - c*r2 + a*r3 = 0`` in vector form."""
    if not lattice_span_check(slopes):
        raise ValueError(f"slope vectors of {slopes.as_tuple()} do not span Z^2")
    a, b, c = _minors(slopes)
    if a < 0 and b < 0 and c < 0:
        a, b, c = -a, -b, -c
    if min(a, b, c) <= 0:
        raise ValueError(f"no positive solution for slopes {slopes.as_tuple()}")
    return MonomialTriple(a, b, c)


def psi(triple: MonomialTriple | tuple[int, int, int]) -> SlopeTriple:
    tri = triangle_from_generators(herzog_generators(triple))
    return SlopeTriple.from_triangle(tri)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationDatum:
    n: int
    lam: int
    gamma: int
    delta: int
    mirrored: bool = False

    def __post_init__(self) -> None:
        if self.n < 3 or self.lam < 0:
            raise ValueError("need n >= 3 and lam >= 0")
        if self.gamma < 1 or self.delta < 1:
            raise ValueError("gamma and delta must be positive")
        if math.gcd(self.gamma, self.delta) != 1 or (self.gamma, self.delta) == (1, 1):
            raise ValueError("need gcd(gamma, delta) = 1 and (gamma, delta) != (1, 1)")

    def key(self) -> tuple[int, int, int, int]:
        return (self.n, self.lam, self.gamma, self.delta)

    def u_pair(self) -> tuple[int, int]:
        fg = fg_sequence(self.n, self.lam + 1)
        u = self.gamma * fg.f(self.lam) + self.delta * fg.f(self.lam + 1)
        u2 = self.gamma * fg.g(self.lam) + self.delta * fg.g(self.lam + 1)
        return u, u2

    def minimal_degree(self) -> int:
        fg = fg_sequence(self.n, self.lam + 1)
        return fg.f(self.lam) + fg.f(self.lam + 1)


@dataclass(frozen=True)
class NotApplicable:
    """Why a triple falls outside the ``(n, lam, gamma, delta)`` classification."""

    case: str
    first: int
    last: int
    mirrored: bool

    CASES = ("emu-holds", "end-column-one", "end-columns-two")


def require_hypotheses(triple) -> tuple[MonomialTriple, RationalTriangle]:
    """Non-CI (raises ``CompleteIntersectionError``) and negative curve present."""
    tr = MonomialTriple.coerce(triple)
    tri = triangle_from_generators(herzog_generators(tr))
    if not negative_curve_holds(tri):
        raise HypothesisError(f"{tr}: z^u - x^s3 y^t3 is not a negative curve (u^2 c >= ab)")
    return tr, tri


def mirror_triangle(triple: MonomialTriple) -> RationalTriangle:
    return triangle_from_generators(herzog_generators(triple.mirrored()))


def classify(triple) -> ClassificationDatum | NotApplicable:
    tr, tri = require_hypotheses(triple)
    u = tri.u
    counts = column_counts(tri, 1).counts
    first, last = counts[0], counts[u - 2]
    mirrored = first < last
    if mirrored:
        tri = mirror_triangle(tr)
        counts = column_counts(tri, 1).counts
        first, last = counts[0], counts[u - 2]
    if column_counts(tri, 1).emu():
        return NotApplicable("emu-holds", first, last, mirrored)
    if first == 1 or last == 1:
        return NotApplicable("end-column-one", first, last, mirrored)
    if first == last == 2:
        return NotApplicable("end-columns-two", first, last, mirrored)
    if last != 2:
        raise ArithmeticError(f"{tr}: EMU fails with end columns {first}, {last}")
    n = first
    d = minimal_degree(tri).d
    fg = fg_sequence(n, 1)
    lam = 0
    while fg.f(lam) + fg.f(lam + 1) < d:
        lam += 1
        fg = fg_sequence(n, lam + 1)
    if fg.f(lam) + fg.f(lam + 1) != d:
        raise ArithmeticError(f"{tr}: minimal degree {d} is not of the form f_i + f_(i+1) for n={n}")
    f0, f1, g0, g1 = fg.f(lam), fg.f(lam + 1), fg.g(lam), fg.g(lam + 1)
    # [[f0, f1], [g0, g1]] has determinant -1
    gamma = f1 * tri.u2 - g1 * u
    delta = g0 * u - f0 * tri.u2
    if gamma < 1 or delta < 1:
        raise ArithmeticError(f"{tr}: non-positive coefficients gamma={gamma}, delta={delta}")
    return ClassificationDatum(n, lam, gamma, delta, mirrored)


def verify_classification(datum: ClassificationDatum | tuple, triple) -> bool:
    """Check a datum against a triple.

    ``datum`` may also be a raw ``(n, lam, gamma, delta, mirrored)`` tuple,
    so that data violating the type invariants can be rejected here
    rather than at construction.
    """
    if isinstance(datum, ClassificationDatum):
        n, lam, gamma, delta, mirrored = (*datum.key(), datum.mirrored)
    else:
        n, lam, gamma, delta, mirrored = datum
    try:
        tr = MonomialTriple.coerce(triple)
        tri = mirror_triangle(tr) if mirrored else triangle_from_generators(herzog_generators(tr))
    except ValueError:
        return False
    if n < 3 or lam < 0 or gamma < 1 or delta < 1:
        return False
    if math.gcd(gamma, delta) != 1 or (gamma, delta) == (1, 1):
        return False
    fg = fg_sequence(n, lam + 1)
    f0, f1, g0, g1 = fg.f(lam), fg.f(lam + 1), fg.g(lam), fg.g(lam + 1)
    if tri.u != gamma * f0 + delta * f1 or tri.u2 != gamma * g0 + delta * g1:
        return False
    if not (n - 1 <= tri.sbar < Fraction((n - 1) * f0 + 1, f0)):
        return False
    if not (2 <= -tri.tbar < Fraction(2 * f1 + 1, f1)):
        return False
    return negative_curve_holds(tri)


# -- construction ------------------------------------------------------------


class ConstructionExhausted(RuntimeError):
    """No realizing triple was found within the search bounds."""


def approach_from_below(target: Fraction, max_denominator: int) -> Iterator[Fraction]:
    """Stern-Brocot nodes converging to ``target`` from below.

    Walk the tree down to ``target``, step to its left child, then keep
    going right: the nodes visited are ``(k*p + pl)/(k*q + ql)`` for the
    left neighbour ``pl/ql`` of ``p/q``.
    """
    target = as_fraction(target)
    p, q = target.numerator, target.denominator
    if target <= 0:
        raise ValueError("target must be positive")
    lo, hi = (0, 1), (1, 0)
    while True:
        mp, mq = lo[0] + hi[0], lo[1] + hi[1]
        if mp * q == p * mq:
            break
        if mp * q < p * mq:
            lo = (mp, mq)
        else:
            hi = (mp, mq)
    pl, ql = lo
    k = 1
    while k * q + ql <= max_denominator:
        yield Fraction(k * p + pl, k * q + ql)
        k += 1


def construct_triple(
    datum: ClassificationDatum,
    max_denominator: int = 10**6,
    max_candidates: int = 200_000,
) -> MonomialTriple:
    """Find a triple realizing ``datum`` by approximating the open window ends."""
    n, lam = datum.n, datum.lam
    fg = fg_sequence(n, lam + 1)
    f0, f1 = fg.f(lam), fg.f(lam + 1)
    u, u2 = datum.u_pair()
    ubar = Fraction(-u2, u)
    s_top = Fraction((n - 1) * f0 + 1, f0)
    t_top = Fraction(2 * f1 + 1, f1)
    s_seq: list[Fraction] = []
    t_seq: list[Fraction] = []
    s_gen = approach_from_below(s_top, max_denominator)
    t_gen = approach_from_below(t_top, max_denominator)
    tried = 0
    level = 0
    while tried < max_candidates:
        grew = False
        for seq, gen in ((s_seq, s_gen), (t_seq, t_gen)):
            nxt = next(gen, None)
            if nxt is not None:
                seq.append(nxt)
                grew = True
        if not grew and level >= max(len(s_seq), len(t_seq)):
            break
        # try the pairs on the new diagonal i + j == level
        for i in range(min(level, len(s_seq) - 1) + 1):
            j = level - i
            if j >= len(t_seq):
                continue
            tried += 1
            found = _try_slopes(datum, -t_seq[j], ubar, s_seq[i])
            if found is not None:
                return found.mirrored() if datum.mirrored else found
        level += 1
    raise ConstructionExhausted(
        f"no triple for {datum.key()} with denominators <= {max_denominator} after {tried} candidates"
    )


def _try_slopes(datum: ClassificationDatum, tbar, ubar, sbar) -> MonomialTriple | None:
    try:
        slopes = SlopeTriple(tbar, ubar, sbar)
    except ValueError:
        return None
    if not negative_curve_holds(slopes.triangle()) or not lattice_span_check(slopes):
        return None
    try:
        triple = phi(slopes)
        if psi(triple) != slopes:
            return None
    except ValueError:
        return None
    result = classify(triple)
    if isinstance(result, ClassificationDatum) and result.key() == datum.key() and not result.mirrored:
        return triple
    return None
