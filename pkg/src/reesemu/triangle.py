"""The rational triangle of slopes (tbar, ubar, sbar), its cones and lattice counts.

The triangle has vertices ``(0, 0)`` and ``(u, -u2)`` on its lower edge
(slope ``ubar = -u2/u``), a left edge of slope ``sbar`` through the origin
and a right edge of slope ``tbar`` through ``(u, -u2)``.  Everything here is
exact: slopes are :class:`fractions.Fraction` and all rounding goes through
``math.floor`` / ``math.ceil`` on fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .herzog import MonomialTriple, PrimeGenerators, herzog_generators

Point = tuple[int, int]


class TriangleError(ValueError):
    """Slopes violate ``tbar < -1 < ubar < 0 < sbar``."""


class HypothesisError(ValueError):
    """The triple has no negative curve of the form ``z^u - x^s3 y^t3``."""


class EMUHolds(ValueError):
    """Raised when a quantity only defined for EMU-failing triangles is requested."""


def as_fraction(value: Fraction | int | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class RationalTriangle:
    tbar: Fraction
    ubar: Fraction
    sbar: Fraction

    def __post_init__(self) -> None:
        for name in ("tbar", "ubar", "sbar"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (self.tbar < -1 < self.ubar < 0 < self.sbar):
            raise TriangleError(
                f"need tbar < -1 < ubar < 0 < sbar, got ({self.tbar}, {self.ubar}, {self.sbar})"
            )

    @property
    def u(self) -> int:
        return self.ubar.denominator

    @property
    def u2(self) -> int:
        return -self.ubar.numerator

    @property
    def base(self) -> Point:
        return (self.u, -self.u2)

    @cached_property
    def apex(self) -> tuple[Fraction, Fraction]:
        # sbar*x = -u2 + tbar*(x - u)
        x = (-self.u2 - self.tbar * self.u) / (self.sbar - self.tbar)
        return (x, self.sbar * x)

    def upper(self, i: int, m: int = 1) -> Fraction:
        """Height of the upper boundary of ``m*Delta`` above column ``i``."""
        return min(i * self.sbar, self.tbar * (i - m * self.u) - m * self.u2)

    def column_range(self, i: int, m: int = 1) -> tuple[int, int]:
        """Lowest and highest lattice heights in column ``i`` of ``m*Delta``."""
        return math.ceil(i * self.ubar), math.floor(self.upper(i, m))

    def lattice_points(self, m: int = 1) -> list[Point]:
        pts = []
        for i in range(0, m * self.u + 1):
            lo, hi = self.column_range(i, m)
            pts.extend((i, j) for j in range(lo, hi + 1))
        return pts

    def slopes(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.tbar, self.ubar, self.sbar)


def triangle_from_generators(gens: PrimeGenerators) -> RationalTriangle:
    return RationalTriangle(
        Fraction(-gens.t, gens.t3),
        Fraction(-gens.u2, gens.u),
        Fraction(gens.s2, gens.s3),
    )


def triangle_from_triple(triple: MonomialTriple | tuple[int, int, int]) -> RationalTriangle:
    return triangle_from_generators(herzog_generators(triple))


def triangle_from_slopes(tbar, ubar, sbar) -> RationalTriangle:
    return RationalTriangle(as_fraction(tbar), as_fraction(ubar), as_fraction(sbar))


def negative_curve_holds(tri: RationalTriangle) -> bool:
    """``1/(sbar - ubar) + 1/(ubar - tbar) < 1``, i.e. area exceeds ``u^2/2``."""
    return 1 / (tri.sbar - tri.ubar) + 1 / (tri.ubar - tri.tbar) < 1


def negative_curve_integer_test(triple: MonomialTriple | tuple[int, int, int], u: int) -> bool:
    a, b, c = MonomialTriple.coerce(triple).as_tuple()
    return u * u * c < a * b


# -- column counts and EMU ---------------------------------------------------


@dataclass(frozen=True)
class ColumnProfile:
    m: int
    counts: tuple[int, ...]

    @property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.counts))

    def emu(self) -> bool:
        return all(q >= i for i, q in enumerate(self.sorted, start=1))


def column_counts(tri: RationalTriangle, m: int = 1) -> ColumnProfile:
    if m < 1:
        raise ValueError("m must be positive")
    counts = []
    for i in range(1, m * tri.u + 1):
        lo, hi = tri.column_range(i, m)
        counts.append(max(0, hi - lo + 1))
    return ColumnProfile(m, tuple(counts))


def emu(tri: RationalTriangle, m: int = 1) -> bool:
    """EMU for ``m*Delta``: the ascending column counts satisfy ``q'_i >= i``."""
    return column_counts(tri, m).emu()


# -- cones S and T -------------------------------------------------------------


@dataclass
class ConeProfile:
    """Column counts ``a_i`` of the cone S and ``b_i`` of the cone T.

    ``a(i)`` and ``b(i)`` take the column index directly, so the usual
    ``b_{-3}`` is ``b(-3)``.  Values are memoised per instance.
    """

    tri: RationalTriangle
    _a: dict[int, int] = field(default_factory=dict, repr=False)
    _b: dict[int, int] = field(default_factory=dict, repr=False)

    def a(self, i: int) -> int:
        if i < 0:
            return 0
        if i == 0:
            return 1
        val = self._a.get(i)
        if val is None:
            val = math.floor(i * self.tri.sbar) - math.ceil(i * self.tri.ubar) + 1
            self._a[i] = val
        return val

    def b(self, i: int) -> int:
        if i > 0:
            return 0
        if i == 0:
            return 1
        val = self._b.get(i)
        if val is None:
            val = math.floor(i * self.tri.tbar) - math.ceil(i * self.tri.ubar) + 1
            self._b[i] = val
        return val

    def in_PA(self, alpha: int, n: int) -> bool:
        return alpha >= 0 and n >= 0 and self.a(alpha) >= n + 1

    def in_PB(self, alpha: int, n: int) -> bool:
        return n >= 0 and self.b(alpha - n) >= n + 1

    def covered(self, alpha: int, n: int) -> bool:
        return self.in_PA(alpha, n) or self.in_PB(alpha, n)

    def a_threshold(self, height: int) -> int:
        """Least ``i >= 0`` with ``a_i >= height``."""
        i = 0
        while self.a(i) < height:
            i += 1
        return i

    def b_threshold(self, height: int) -> int:
        """Least ``k >= 0`` with ``b_{-k} >= height``."""
        k = 0
        while self.b(-k) < height:
            k += 1
        return k


def cone_profile(tri: RationalTriangle) -> ConeProfile:
    return ConeProfile(tri)


def in_PA(profile: ConeProfile, alpha: int, n: int) -> bool:
    return profile.in_PA(alpha, n)


def in_PB(profile: ConeProfile, alpha: int, n: int) -> bool:
    return profile.in_PB(alpha, n)


def _window(profile: ConeProfile, height: int) -> range:
    # a and b are monotone, so outside this range every row below `height` is covered
    return range(-profile.b_threshold(height), profile.a_threshold(height) + 1)


def missing_points(tri: RationalTriangle, m: int = 1, profile: ConeProfile | None = None) -> set[Point]:
    """``(Z x [0, m*u)) \\ (P_A | P_B)``."""
    profile = profile or ConeProfile(tri)
    height = m * tri.u
    return {
        (alpha, n)
        for alpha in _window(profile, height)
        for n in range(height)
        if not profile.covered(alpha, n)
    }


def cover_check(tri: RationalTriangle, m: int = 1, profile: ConeProfile | None = None) -> bool:
    profile = profile or ConeProfile(tri)
    height = m * tri.u
    for alpha in _window(profile, height):
        for n in range(height):
            if not profile.covered(alpha, n):
                return False
    return True


@dataclass(frozen=True)
class MinimalDegreeDatum:
    d: int
    f: int
    fprime: int

    @property
    def missing_point(self) -> Point:
        return (self.f, self.d)


def minimal_degree(tri: RationalTriangle, m: int = 1, profile: ConeProfile | None = None) -> MinimalDegreeDatum:
    """Where the merged sequence ``1, a_1, b_-1, a_2, ...`` first repeats.

    Edge cases: ``b_-1 = 1`` gives ``(f, d) = (0, 1)``; ``a_1 = 1`` (with
    ``b_-1 >= 2``) gives ``(f, d) = (1, 1)``.
    """
    profile = profile or ConeProfile(tri)
    height = m * tri.u
    if cover_check(tri, m, profile):
        raise EMUHolds(f"EMU holds for {m}*Delta; no minimal degree")
    if profile.b(-1) == 1:
        return MinimalDegreeDatum(d=1, f=0, fprime=1)
    if profile.a(1) == 1:
        return MinimalDegreeDatum(d=1, f=1, fprime=0)
    # both sequences strictly increase from here on
    i = j = 1
    while True:
        ai, bj = profile.a(i), profile.b(-j)
        if ai == bj:
            if ai >= height:
                break
            return MinimalDegreeDatum(d=ai, f=i, fprime=j)
        if min(ai, bj) >= height:
            break
        if ai < bj:
            i += 1
        else:
            j += 1
    raise ArithmeticError(f"no repeated value below {height} although EMU fails for {tri}")


# -- hull and Pick -----------------------------------------------------------


def convex_hull(points: list[Point]) -> list[Point]:
    """Andrew's monotone chain; counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o: Point, p: Point, q: Point) -> int:
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class PickCounts:
    area: Fraction
    boundary: int
    interior: int

    def pick_holds(self) -> bool:
        return self.area == Fraction(self.boundary, 2) + self.interior - 1


def polygon_pick_counts(points: list[Point]) -> PickCounts:
    hull = convex_hull(points)
    if len(hull) < 3:
        raise ValueError("degenerate hull")
    twice_area = 0
    boundary = 0
    for k, (x0, y0) in enumerate(hull):
        x1, y1 = hull[(k + 1) % len(hull)]
        twice_area += x0 * y1 - x1 * y0
        boundary += math.gcd(x1 - x0, y1 - y0)
    total = len(set(points))
    return PickCounts(Fraction(abs(twice_area), 2), boundary, total - boundary)


def pick_counts(tri: RationalTriangle, m: int = 1) -> PickCounts:
    return polygon_pick_counts(tri.lattice_points(m))


# -- the regions Gamma ------------------------------------------------------


def gamma_column_count(i: int, fprime, p1, p2, f, q1, q2) -> int:
    """Column ``i`` of ``Gamma(-f', p1, p2; f, q1, q2)``."""
    if i <= 0:
        return max(0, math.floor(Fraction(-p1 * i, fprime)) - math.ceil(Fraction(-p2 * i, fprime)) + 1)
    return max(0, math.floor(Fraction(q1 * i, f)) - math.floor(Fraction(q2 * i, f)))


def gamma_counts(n: int, lam: int, i: int) -> int:
    """Column ``i`` of the region attached to the class ``(n, lam)``."""
    from .classify import fg_sequence

    fg = fg_sequence(n, lam + 1)
    f0, g0 = fg.pairs[lam]
    f1, g1 = fg.pairs[lam + 1]
    return gamma_column_count(i, f1, 2 * f1, g1, f0, (n - 1) * f0, -g0)
