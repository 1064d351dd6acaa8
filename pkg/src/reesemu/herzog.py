"""Herzog presentation of space monomial primes.

For pairwise coprime ``a, b, c`` the kernel of ``x -> T^a, y -> T^b,
z -> T^c`` is generated (when it is not a complete intersection) by

    x^s - y^t1 z^u1,   y^t - x^s2 z^u2,   z^u - x^s3 y^t3

with all six exponents positive and ``s = s2 + s3``, ``t = t1 + t3``,
``u = u1 + u2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class CompleteIntersectionError(ValueError):
    """The monomial prime is a complete intersection."""


@dataclass(frozen=True)
class MonomialTriple:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if gcd(self.a, self.b) != 1 or gcd(self.b, self.c) != 1 or gcd(self.a, self.c) != 1:
            raise ValueError(f"{self.as_tuple()} is not pairwise coprime")

    @classmethod
    def coerce(cls, value: "MonomialTriple | tuple[int, int, int]") -> "MonomialTriple":
        if isinstance(value, cls):
            return value
        a, b, c = value
        return cls(int(a), int(b), int(c))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def mirrored(self) -> "MonomialTriple":
        """Exchange the roles of x and y."""
        return MonomialTriple(self.b, self.a, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class PrimeGenerators:
    s2: int
    s3: int
    t1: int
    t3: int
    u1: int
    u2: int

    @property
    def s(self) -> int:
        return self.s2 + self.s3

    @property
    def t(self) -> int:
        return self.t1 + self.t3

    @property
    def u(self) -> int:
        return self.u1 + self.u2

    def as_dict(self) -> dict[str, int]:
        return {
            "s": self.s, "t": self.t, "u": self.u,
            "s2": self.s2, "s3": self.s3,
            "t1": self.t1, "t3": self.t3,
            "u1": self.u1, "u2": self.u2,
        }

    def binomials(self) -> tuple[str, str, str]:
        return (
            f"x^{self.s} - y^{self.t1}*z^{self.u1}",
            f"y^{self.t} - x^{self.s2}*z^{self.u2}",
            f"z^{self.u} - x^{self.s3}*y^{self.t3}",
        )


def semigroup_representations(n: int, p: int, q: int) -> list[tuple[int, int]]:
    """All ``(i, j)`` with ``i, j >= 0`` and ``n = i*p + j*q``."""
    reps = []
    for i in range(n // p + 1):
        rest = n - i * p
        if rest % q == 0:
            reps.append((i, rest // q))
    return reps


def minimal_multiple(g: int, p: int, q: int) -> tuple[int, list[tuple[int, int]]]:
    """Least ``k >= 1`` with ``k*g`` in the semigroup generated by ``p, q``.

    Returns ``k`` together with every representation of ``k*g``.
    """
    k = 1
    while True:
        reps = semigroup_representations(k * g, p, q)
        if reps:
            return k, reps
        k += 1


def _positive_representation(g: int, p: int, q: int, label: str) -> tuple[int, int, int]:
    k, reps = minimal_multiple(g, p, q)
    if any(i == 0 or j == 0 for i, j in reps):
        raise CompleteIntersectionError(
            f"{k}*{g} = {reps[0][0]}*{p} + {reps[0][1]}*{q} has a zero coefficient ({label})"
        )
    if len(reps) != 1:
        # two representations of the same multiple give a binomial in the other two variables
        raise CompleteIntersectionError(f"{k}*{g} has several representations {reps} ({label})")
    i, j = reps[0]
    return k, i, j


def herzog_generators(triple: MonomialTriple | tuple[int, int, int]) -> PrimeGenerators:
    """Exponents of the Herzog presentation of ``p(a, b, c)``.

    Raises :class:`CompleteIntersectionError` when a minimal multiple
    admits a representation with a zero coefficient or more than one
    representation.
    """
    tr = MonomialTriple.coerce(triple)
    a, b, c = tr.as_tuple()
    s, t1, u1 = _positive_representation(a, b, c, "x-role")
    t, s2, u2 = _positive_representation(b, a, c, "y-role")
    u, s3, t3 = _positive_representation(c, a, b, "z-role")
    gens = PrimeGenerators(s2=s2, s3=s3, t1=t1, t3=t3, u1=u1, u2=u2)
    if (gens.s, gens.t, gens.u) != (s, t, u):
        raise ArithmeticError(f"exponent sums do not split for {tr}: {(s, t, u)} vs {gens.as_dict()}")
    return gens


def verify_generators(triple: MonomialTriple | tuple[int, int, int], gens: PrimeGenerators) -> bool:
    """Independent re-check of all presentation invariants."""
    try:
        a, b, c = MonomialTriple.coerce(triple).as_tuple()
    except ValueError:
        return False
    parts = (gens.s2, gens.s3, gens.t1, gens.t3, gens.u1, gens.u2)
    if any(p < 1 for p in parts):
        return False
    s, t, u = gens.s, gens.t, gens.u
    if a * s != b * gens.t1 + c * gens.u1:
        return False
    if b * t != a * gens.s2 + c * gens.u2:
        return False
    if c * u != a * gens.s3 + b * gens.t3:
        return False
    return gcd(gens.s2, gens.s3) == 1 and gcd(gens.t1, gens.t3) == 1 and gcd(gens.u1, gens.u2) == 1


def mirror_generators(gens: PrimeGenerators) -> PrimeGenerators:
    """Generators of ``p(b, a, c)`` read off from those of ``p(a, b, c)``."""
    return PrimeGenerators(s2=gens.t1, s3=gens.t3, t1=gens.s2, t3=gens.s3, u1=gens.u2, u2=gens.u1)


def is_complete_intersection(triple: MonomialTriple | tuple[int, int, int]) -> bool:
    try:
        herzog_generators(triple)
    except CompleteIntersectionError:
        return True
    return False
