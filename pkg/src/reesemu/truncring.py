"""Arithmetic in the truncated ring F'_l and the reduction procedure.

F'_l has basis ``x[a, n] = v^a w^ceil(a*ubar) x^n`` for ``0 <= a <= n < l``
where ``w = 1 + (v - 1) x``.  Internally products are formed on raw
monomials ``v^a w^b x^n`` (any ``b >= ceil(a*ubar)``) and brought back to
the basis by a single row sweep that applies

    v^a w^b x^n = v^a w^(b-1) x^n + v^(a+1) w^(b-1) x^(n+1) - v^a w^(b-1) x^(n+1)

until every exponent ``b`` is minimal.  Pushed terms always land one row
higher, so the sweep terminates after ``l`` rows.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Point = tuple[int, int]
Scalar = int | Fraction
# raw monomial v^a w^b x^n with coefficient c
Term = tuple[int, int, int, Scalar]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class CoefficientField:
    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic must be 0 or prime, got {p}")

    def norm(self, c: Scalar) -> Scalar:
        p = self.characteristic
        if p:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, p) % p
            return c % p
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c

    def inv(self, c: Scalar) -> Scalar:
        c = self.norm(c)
        if c == 0:
            raise ZeroDivisionError("zero is not invertible")
        if self.characteristic:
            return pow(c, -1, self.characteristic)
        return self.norm(Fraction(1) / c)

    def __str__(self) -> str:
        return f"char {self.characteristic}"


CHAR0 = CoefficientField(0)


class NotAUnit(ValueError):
    pass


class RingMismatch(ValueError):
    pass


def generalized_binomial(top: int, k: int) -> int:
    """``C(top, k)`` for any integer ``top`` and ``k >= 0``."""
    if k < 0:
        return 0
    if top >= 0:
        return math.comb(top, k)
    return (-1) ** k * math.comb(-top + k - 1, k)


class TruncatedRing:
    """The ring F'_l for a fixed slope ``ubar = -u2/u``, level and field."""

    def __init__(self, ubar: Fraction, level: int, field: CoefficientField = CHAR0):
        ubar = Fraction(ubar)
        if not -1 < ubar < 0:
            raise ValueError(f"ubar must lie in (-1, 0), got {ubar}")
        if level < 1:
            raise ValueError("level must be positive")
        self.ubar = ubar
        self.u = ubar.denominator
        self.u2 = -ubar.numerator
        self.level = level
        self.field = field
        self._nf_cache: dict[tuple[int, int, int], "TruncatedElement"] = {}

    # identity of a ring is its parameters
    def key(self) -> tuple[Fraction, int, int]:
        return (self.ubar, self.level, self.field.characteristic)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruncatedRing) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"TruncatedRing(ubar={self.ubar}, level={self.level}, {self.field})"

    def ce(self, alpha: int) -> int:
        """``ceil(alpha * ubar)``."""
        return -((alpha * self.u2) // self.u)

    def with_level(self, level: int) -> "TruncatedRing":
        return TruncatedRing(self.ubar, level, self.field)

    # -- constructors --------------------------------------------------------

    def element(self, coeffs: Mapping[Point, Scalar]) -> "TruncatedElement":
        clean = {}
        for (a, n), c in coeffs.items():
            if not 0 <= a <= n:
                raise ValueError(f"({a},{n}) is outside the cone 0 <= alpha <= n")
            if n >= self.level:
                continue
            c = self.field.norm(c)
            if c:
                clean[(a, n)] = c
        return TruncatedElement(self, clean)

    def one(self) -> "TruncatedElement":
        return self.element({(0, 0): 1})

    def zero(self) -> "TruncatedElement":
        return TruncatedElement(self, {})

    def basis(self, alpha: int, n: int) -> "TruncatedElement":
        return self.element({(alpha, n): 1})

    def w(self) -> "TruncatedElement":
        return self.normal_form(0, 1, 0)

    # -- normal forms ----------------------------------------------------------

    def from_terms(self, terms: Iterable[Term]) -> "TruncatedElement":
        return TruncatedElement(self, self._sweep(terms))

    def _sweep(self, terms: Iterable[Term], level: int | None = None, inside: bool = True) -> dict[Point, Scalar]:
        ell = self.level if level is None else level
        p = self.field.characteristic
        rows: dict[int, dict[tuple[int, int], Scalar]] = defaultdict(dict)
        for a, b, n, c in terms:
            if n < ell and c:
                row = rows[n]
                row[(a, b)] = row.get((a, b), 0) + c
        out: dict[Point, Scalar] = {}
        if not rows:
            return out
        norm = self.field.norm
        for n in range(min(rows), ell):
            row = rows.pop(n, None)
            if not row:
                continue
            nxt = rows[n + 1] if n + 1 < ell else None
            by_alpha: dict[int, dict[int, Scalar]] = defaultdict(dict)
            for (a, b), c in row.items():
                by_alpha[a][b] = c
            for a, betas in by_alpha.items():
                base = self.ce(a)
                if min(betas) < base:
                    raise ValueError(f"monomial v^{a} w^{min(betas)} x^{n} lies below the cone")
                carry: Scalar = 0
                for b in range(max(betas), base, -1):
                    c = betas.get(b, 0) + carry
                    if p:
                        c %= p
                    carry = c
                    if c and nxt is not None:
                        k1, k2 = (a + 1, b - 1), (a, b - 1)
                        nxt[k1] = nxt.get(k1, 0) + c
                        nxt[k2] = nxt.get(k2, 0) - c
                c = norm(betas.get(base, 0) + carry)
                if c:
                    if inside and not 0 <= a <= n:
                        raise ValueError(f"term at ({a},{n}) escaped the cone")
                    out[(a, n)] = c
        return out

    def normal_form(self, alpha: int, beta: int, n: int) -> "TruncatedElement":
        """``v^alpha w^beta x^n`` in the basis; memoised on the gap over ``ceil(alpha*ubar)``."""
        gap = beta - self.ce(alpha)
        if gap < 0 or n < 0:
            raise ValueError(f"need beta >= ceil(alpha*ubar) and n >= 0, got ({alpha},{beta},{n})")
        key = (alpha, gap, n)
        hit = self._nf_cache.get(key)
        if hit is None:
            hit = self.from_terms([(alpha, beta, n, 1)])
            self._nf_cache[key] = hit
        return hit

    # -- products --------------------------------------------------------------

    def _product_terms(self, left: Iterable[Term], right: Iterable[Term]) -> dict[tuple[int, int, int], Scalar]:
        ell = self.level
        by_row: dict[int, list[tuple[int, int, Scalar]]] = defaultdict(list)
        for a, b, n, c in right:
            if c:
                by_row[n].append((a, b, c))
        rows = sorted(by_row.items())
        acc: dict[tuple[int, int, int], Scalar] = {}
        get = acc.get
        for a1, b1, n1, c1 in left:
            if not c1:
                continue
            room = ell - n1
            for n2, items in rows:
                if n2 >= room:
                    break
                n = n1 + n2
                for a2, b2, c2 in items:
                    key = (a1 + a2, b1 + b2, n)
                    acc[key] = get(key, 0) + c1 * c2
        return acc

    def _terms(self, e: "TruncatedElement") -> list[Term]:
        ce = self.ce
        return [(a, ce(a), n, c) for (a, n), c in e.coeffs.items()]

    def mul(self, e1: "TruncatedElement", e2: "TruncatedElement") -> "TruncatedElement":
        self._check(e1, e2)
        prod = self._product_terms(self._terms(e1), self._terms(e2))
        return self.from_terms((a, b, n, c) for (a, b, n), c in prod.items())

    def mul_raw(self, e: "TruncatedElement", raw: Iterable[Term]) -> "TruncatedElement":
        """Multiply a basis element by a raw monomial expression."""
        self._check(e)
        prod = self._product_terms(self._terms(e), raw)
        return self.from_terms((a, b, n, c) for (a, b, n), c in prod.items())

    def pow(self, e: "TruncatedElement", k: int) -> "TruncatedElement":
        self._check(e)
        if k < 0:
            return self.pow(self.inverse(e), -k)
        result = self.one()
        base = e
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def inverse(self, e: "TruncatedElement") -> "TruncatedElement":
        self._check(e)
        c0 = e.constant
        if not c0:
            raise NotAUnit("constant term is zero")
        inv0 = self.field.inv(c0)
        # e = c0 (1 - r) with r nilpotent; 1/(1-r) = prod (1 + r^(2^i))
        r = self.one() - e.scale(inv0)
        acc = self.one()
        power = r
        span = 1
        while span < self.level and power:
            acc = self.mul(acc, self.one() + power)
            power = self.mul(power, power)
            span *= 2
        return acc.scale(inv0)

    def nth_root(self, e: "TruncatedElement", k: int) -> "TruncatedElement":
        """The unique ``k``-th root with constant term 1, by Newton iteration."""
        self._check(e)
        if k < 1:
            raise ValueError("k must be positive")
        p = self.field.characteristic
        if p and k % p == 0:
            raise ValueError(f"no unique {k}-th roots in characteristic {p}")
        if e.constant != 1:
            raise NotAUnit("nth_root needs constant term 1")
        kinv = self.field.inv(k)
        y = self.one()
        for _ in range(self.level.bit_length() + 2):
            # y <- ((k-1) y + e y^(1-k)) / k
            nxt = (y.scale(k - 1) + self.mul(e, self.pow(self.inverse(y), k - 1))).scale(kinv)
            if nxt == y:
                break
            y = nxt
        if self.pow(y, k) != e:
            raise ArithmeticError("root iteration did not converge")
        return y

    # -- distinguished elements ------------------------------------------------

    def z_terms(self, alpha: int, n: int) -> list[Term]:
        """Raw form of ``v^alpha w^ceil((alpha-n)ubar) (x + x^2 + ...)^n``."""
        b = self.ce(alpha - n)
        if n == 0:
            return [(alpha, b, 0, 1)]
        return [(alpha, b, k, math.comb(k - 1, n - 1)) for k in range(n, self.level)]

    def z_element(self, alpha: int, n: int) -> "TruncatedElement":
        if not 0 <= alpha <= n:
            raise ValueError("z elements are only formed inside the cone")
        return self.from_terms(self.z_terms(alpha, n))

    def xi(self, power: int = 1) -> "TruncatedElement":
        """``xi^power = (1-x)^(power*u) w^(-power*u2)`` from its closed expansion.

        In the variables ``v, x`` this is ``(1-x)^U (1-(1-v)x)^(-U2)``; every
        monomial ``v^j x^k`` has ``j <= k`` and is fed to the sweep with
        ``w``-exponent 0.
        """
        if power < 0:
            return self.inverse(self.xi(-power))
        U, U2 = power * self.u, power * self.u2
        terms: list[Term] = []
        for k in range(self.level):
            for j in range(k + 1):
                total = 0
                for i in range(0, k - j + 1):
                    r = k - i
                    total += (-1) ** i * math.comb(U, i) * generalized_binomial(-U2, r) * (-1) ** r \
                        * math.comb(r, j) * (-1) ** j
                if total:
                    terms.append((j, 0, k, total))
        return self.from_terms(terms)

    def xi_by_products(self, power: int = 1) -> "TruncatedElement":
        """Same element as :meth:`xi`, assembled from ``pow`` and ``inverse``."""
        one_minus_x = self.one() - self.basis(0, 1) if self.level > 1 else self.one()
        return self.mul(
            self.pow(one_minus_x, power * self.u),
            self.pow(self.inverse(self.w()), power * self.u2),
        )

    def _check(self, *elements: "TruncatedElement") -> None:
        for e in elements:
            if e.ring != self:
                raise RingMismatch(f"element of {e.ring} used in {self}")


@dataclass(frozen=True, eq=False)
class TruncatedElement:
    ring: TruncatedRing
    coeffs: dict[Point, Scalar]

    @property
    def constant(self) -> Scalar:
        return self.coeffs.get((0, 0), 0)

    def __getitem__(self, point: Point) -> Scalar:
        return self.coeffs.get(point, 0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.coeffs.items())))

    def _combine(self, other: "TruncatedElement", sign: int) -> "TruncatedElement":
        self.ring._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + sign * c
        return self.ring.element(out)

    def __add__(self, other: "TruncatedElement") -> "TruncatedElement":
        return self._combine(other, 1)

    def __sub__(self, other: "TruncatedElement") -> "TruncatedElement":
        return self._combine(other, -1)

    def __neg__(self) -> "TruncatedElement":
        return self.scale(-1)

    def __mul__(self, other: "TruncatedElement") -> "TruncatedElement":
        return self.ring.mul(self, other)

    def __pow__(self, k: int) -> "TruncatedElement":
        return self.ring.pow(self, k)

    def scale(self, c: Scalar) -> "TruncatedElement":
        return self.ring.element({k: c * v for k, v in self.coeffs.items()})

    def truncate(self, level: int) -> "TruncatedElement":
        """Image in the ring of smaller level."""
        if level > self.ring.level:
            raise ValueError("can only truncate to a lower level")
        ring = self.ring.with_level(level)
        return ring.element({k: c for k, c in self.coeffs.items() if k[1] < level})

    def support(self) -> list[Point]:
        return sorted(self.coeffs, key=lambda p: (p[1], p[0]))

    def dump(self) -> list[tuple[int, int, Scalar]]:
        return [(a, n, self.coeffs[(a, n)]) for a, n in sorted(self.coeffs)]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for a, n in self.support():
            c = self.coeffs[(a, n)]
            parts.append(("1" if c == 1 else str(c)) if (a, n) == (0, 0) else f"{c}*x[{a},{n}]")
        return " + ".join(parts)


# -- the series model ---------------------------------------------------------


@dataclass(frozen=True)
class Series:
    """Element of ``K[v, 1/v][x]/(x^level)`` as ``{(j, k): c}`` for ``c v^j x^k``."""

    level: int
    field: CoefficientField
    coeffs: dict[tuple[int, int], Scalar]

    @classmethod
    def make(cls, level: int, field: CoefficientField, coeffs: Mapping[tuple[int, int], Scalar]) -> "Series":
        clean = {}
        for (j, k), c in coeffs.items():
            if k < level:
                c = field.norm(c)
                if c:
                    clean[(j, k)] = c
        return cls(level, field, clean)

    def __mul__(self, other: "Series") -> "Series":
        acc: dict[tuple[int, int], Scalar] = defaultdict(int)
        for (j1, k1), c1 in self.coeffs.items():
            for (j2, k2), c2 in other.coeffs.items():
                if k1 + k2 < self.level:
                    acc[(j1 + j2, k1 + k2)] += c1 * c2
        return Series.make(self.level, self.field, acc)

    def __add__(self, other: "Series") -> "Series":
        acc = defaultdict(int, self.coeffs)
        for key, c in other.coeffs.items():
            acc[key] += c
        return Series.make(self.level, self.field, acc)

    def __sub__(self, other: "Series") -> "Series":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "Series":
        return Series.make(self.level, self.field, {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Series) and (self.level, self.field, self.coeffs) == (
            other.level, other.field, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.level, frozenset(self.coeffs.items())))

    def power(self, k: int) -> "Series":
        out = Series.make(self.level, self.field, {(0, 0): 1})
        for _ in range(k):
            out = out * self
        return out


def w_power_series(beta: int, level: int, field: CoefficientField, shift: int = 0) -> Series:
    """``(1 + (v-1)x)^beta`` by the binomial series, times ``x^shift``."""
    acc: dict[tuple[int, int], Scalar] = defaultdict(int)
    for r in range(level - shift):
        cb = generalized_binomial(beta, r)
        if not cb:
            continue
        for j in range(r + 1):
            # (v - 1)^r
            acc[(j, r + shift)] += cb * math.comb(r, j) * (-1) ** (r - j)
    return Series.make(level, field, acc)


def to_series(e: TruncatedElement) -> Series:
    ring = e.ring
    acc: dict[tuple[int, int], Scalar] = defaultdict(int)
    for (a, n), c in e.coeffs.items():
        for (j, k), s in _basis_series(ring.ubar, ring.level, ring.field.characteristic, a, n).coeffs.items():
            acc[(j, k)] += c * s
    return Series.make(ring.level, ring.field, acc)


@lru_cache(maxsize=65536)
def _basis_series(ubar: Fraction, level: int, p: int, a: int, n: int) -> Series:
    field = CoefficientField(p)
    beta = math.ceil(a * ubar)
    base = w_power_series(beta, level, field, shift=n)
    return Series.make(level, field, {(j + a, k): c for (j, k), c in base.coeffs.items()})


def from_series(ring: TruncatedRing, s: Series) -> TruncatedElement:
    """Inverse of :func:`to_series`; raises if ``s`` is not in the image."""
    rest = dict(s.coeffs)
    out: dict[Point, Scalar] = {}
    p = ring.field.characteristic
    for k in range(ring.level):
        row = sorted((j, c) for (j, kk), c in rest.items() if kk == k and c)
        for j, c in row:
            if not 0 <= j <= k:
                raise ValueError(f"v^{j} x^{k} is outside the image of F'")
            out[(j, k)] = c
            for key, bc in _basis_series(ring.ubar, ring.level, p, j, k).coeffs.items():
                rest[key] = ring.field.norm(rest.get(key, 0) - c * bc)
    return ring.element(out)


def series_oracle(e: TruncatedElement) -> Series:
    return to_series(e)


def series_xi(u: int, u2: int, level: int, field: CoefficientField = CHAR0) -> Series:
    one_minus_x = Series.make(level, field, {(0, 0): 1, (0, 1): -1})
    return one_minus_x.power(u) * w_power_series(-u2, level, field)


def series_z(ubar: Fraction, alpha: int, n: int, level: int, field: CoefficientField = CHAR0) -> Series:
    beta = math.ceil((alpha - n) * ubar)
    geometric = Series.make(level, field, {(0, k): 1 for k in range(1, level)})
    body = w_power_series(beta, level, field) * geometric.power(n)
    return Series.make(level, field, {(j + alpha, k): c for (j, k), c in body.coeffs.items()})


# -- reduction ---------------------------------------------------------------


@dataclass(frozen=True)
class LogEntry:
    side: str  # "A" or "B"
    point: Point
    coefficient: Scalar


@dataclass
class ReductionResult:
    residual: TruncatedElement
    obstructions: dict[Point, Scalar]
    log: list[LogEntry] = field(default_factory=list)

    @property
    def factored(self) -> bool:
        return all(c == 0 for c in self.obstructions.values()) and self.residual == self.residual.ring.one()

    def nonzero_obstructions(self) -> dict[Point, Scalar]:
        return {p: c for p, c in self.obstructions.items() if c}

    def units(self) -> tuple[TruncatedElement, TruncatedElement]:
        """The accumulated A-side and B-side multipliers."""
        ring = self.residual.ring
        eta_a, eta_b = ring.one(), ring.one()
        for entry in self.log:
            a, n = entry.point
            if entry.side == "A":
                eta_a = eta_a * (ring.one() - ring.basis(a, n).scale(entry.coefficient))
            else:
                eta_b = eta_b * (ring.one() - ring.z_element(a, n).scale(entry.coefficient))
        return eta_a, eta_b


def reduce(zeta: TruncatedElement, profile, *, batch_rows: bool = True) -> ReductionResult:
    """Clear coefficients point by point with A- and B-side unit multipliers.

    Points ``(a, n)``, ``1 <= n < level``, ``0 <= a <= n`` are visited by row
    then column.  At a point of ``P_A`` multiply by ``1 - c x[a,n]``, at a
    point of ``P_B`` only multiply by ``1 - c z[a,n]``, and at an uncovered
    point record ``c`` as an obstruction.  A multiplier attached to row
    ``n`` changes nothing else in rows ``<= n``, so with ``batch_rows`` the
    whole row is read first and its multipliers are applied together.
    """
    ring = zeta.ring
    if zeta.constant != 1:
        raise ValueError("reduce needs constant term 1")
    current = zeta
    obstructions: dict[Point, Scalar] = {}
    log: list[LogEntry] = []
    for n in range(1, ring.level):
        a_side: list[tuple[int, Scalar]] = []
        b_side: list[tuple[int, Scalar]] = []
        for a in range(n + 1):
            c = current[(a, n)]
            if profile.in_PA(a, n):
                side = "A"
            elif profile.in_PB(a, n):
                side = "B"
            else:
                obstructions[(a, n)] = c
                continue
            if not c:
                continue
            log.append(LogEntry(side, (a, n), c))
            if batch_rows:
                (a_side if side == "A" else b_side).append((a, c))
                continue
            raw = [(a, ring.ce(a), n, 1)] if side == "A" else ring.z_terms(a, n)
            current = ring.mul_raw(current, [(0, 0, 0, 1)] + [(ta, tb, tn, -c * tc) for ta, tb, tn, tc in raw])
        if a_side or b_side:
            current = _apply_row(ring, current, n, a_side, b_side)
    return ReductionResult(current, obstructions, log)


def _elementary(factors: list[tuple[int, int, Scalar]], top: int, p: int) -> list[dict[tuple[int, int], Scalar]]:
    """Coefficients ``E_k`` of ``prod (1 + c v^a w^b T)`` as a polynomial in ``T``, up to ``T^top``."""
    layers: list[dict[tuple[int, int], Scalar]] = [{(0, 0): 1}] + [dict() for _ in range(top)]
    for a, b, c in factors:
        for k in range(top - 1, -1, -1):
            src, dst = layers[k], layers[k + 1]
            for (sa, sb), sc in src.items():
                key = (sa + a, sb + b)
                val = dst.get(key, 0) + sc * c
                dst[key] = val % p if p else val
    return layers


def _apply_row(ring: TruncatedRing, current: TruncatedElement, n: int,
               a_side: list[tuple[int, Scalar]], b_side: list[tuple[int, Scalar]]) -> TruncatedElement:
    """Multiply by ``prod (1 - c x[a,n]) * prod (1 - c z[a,n])`` over one row.

    Every ``z[a,n]`` is ``v^a w^b`` times the common factor ``Y = x^n/(1-x)^n``,
    and multiplication by powers of ``x`` and ``1/(1-x)`` acts on basis
    coefficients by shifting and prefix sums.  So the B-side product is
    ``sum_k E_k Y^k`` with ``E_k`` the elementary symmetric sums of the
    monomials ``-c v^a w^b``.
    """
    ell = ring.level
    p = ring.field.characteristic
    top = (ell - 1) // n
    if a_side:
        a_layers = _elementary([(a, ring.ce(a), -c) for a, c in a_side], top, p)
        raw = [(a, b, k * n, c) for k, layer in enumerate(a_layers) for (a, b), c in layer.items() if c]
        current = ring.mul_raw(current, raw)
    if not b_side:
        return current
    b_layers = _elementary([(a, ring.ce(a - n), -c) for a, c in b_side], top, p)
    base_terms = ring._terms(current)
    total: dict[Point, Scalar] = dict(current.coeffs)
    for k in range(1, top + 1):
        layer = [(a, b, 0, c) for (a, b), c in b_layers[k].items() if c]
        if not layer:
            continue
        shift = k * n
        room = ell - shift
        prod = ring._product_terms(
            [t for t in base_terms if t[2] < room], layer
        )
        body = ring._sweep(((a, b, m, c) for (a, b, m), c in prod.items()), level=room, inside=False)
        # multiply by x^shift / (1 - x)^shift
        for (a, m), c in body.items():
            for r in range(room - m):
                key = (a, m + shift + r)
                total[key] = total.get(key, 0) + c * math.comb(shift + r - 1, r)
    return ring.element(total)


# -- decisions ---------------------------------------------------------------


@dataclass(frozen=True)
class FactorDecision:
    status: str  # "factors", "obstructed" or "inconclusive"
    witness: Point | None
    obstruction: Scalar | None
    level: int
    obstructions: dict[Point, Scalar]

    @property
    def factors(self) -> bool:
        return self.status == "factors"


def factor_decision(triple, m: int = 1, field: CoefficientField = CHAR0, *, shortcut: bool = True) -> FactorDecision:
    """Does ``xi^m`` split as an A-unit times a B-unit in F'_(m*u)?

    With ``shortcut`` the reduction first runs at level ``d + 1`` where
    ``(f, d)`` is the first uncovered point; a nonzero coefficient there
    already rules out a splitting at any higher level.
    """
    from .classify import require_hypotheses
    from .triangle import ConeProfile, minimal_degree, missing_points

    if m < 1:
        raise ValueError("m must be positive")
    _, tri = require_hypotheses(triple)
    profile = ConeProfile(tri)
    level = m * tri.u
    full_ring = TruncatedRing(tri.ubar, level, field)
    missing = missing_points(tri, m, profile)
    if missing and shortcut:
        md = minimal_degree(tri, m, profile)
        if md.d + 1 < level:
            small = full_ring.with_level(md.d + 1)
            early = reduce(small.xi(m), profile)
            c = early.obstructions.get(md.missing_point, 0)
            if c:
                return FactorDecision("obstructed", md.missing_point, c, md.d + 1, early.obstructions)
    result = reduce(full_ring.xi(m), profile)
    if result.factored:
        return FactorDecision("factors", None, None, level, result.obstructions)
    if missing:
        md = minimal_degree(tri, m, profile)
        c = result.obstructions.get(md.missing_point, 0)
        if c:
            return FactorDecision("obstructed", md.missing_point, c, level, result.obstructions)
    bad = min(result.nonzero_obstructions(), key=lambda p: (p[1], p[0]))
    return FactorDecision("inconclusive", bad, result.obstructions[bad], level, result.obstructions)


@dataclass(frozen=True)
class ReductionConstants:
    q1: Scalar
    q2: Scalar
    point: Point
    triple: tuple[int, int, int]


def reduction_constants(n: int, lam: int, *, gamma: int = 2, delta: int = 1, sign: int = -1) -> ReductionConstants:
    """Obstructions of ``1 + sign*x[0,1]`` and of ``w`` at the first uncovered point.

    The cone data come from a triple realizing ``(n, lam, gamma, delta)``;
    the reduction runs at level ``d + 1`` with ``d = f_lam + f_(lam+1)``.
    The default ``sign=-1`` matches the ``(1 - x)`` factor of ``xi``.
    """
    from .classify import ClassificationDatum, construct_triple, fg_sequence
    from .triangle import ConeProfile, minimal_degree, triangle_from_triple

    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    datum = ClassificationDatum(n, lam, gamma, delta)
    fg = fg_sequence(n, lam + 1)
    d = fg.f(lam) + fg.f(lam + 1)
    triple = construct_triple(datum)
    tri = triangle_from_triple(triple)
    profile = ConeProfile(tri)
    md = minimal_degree(tri, 1, profile)
    if (md.f, md.d) != (fg.f(lam), d):
        raise ArithmeticError(f"{triple}: first uncovered point {md.missing_point} != ({fg.f(lam)}, {d})")
    ring = TruncatedRing(tri.ubar, d + 1)
    x01 = ring.basis(0, 1)
    q1 = reduce(ring.one() + x01.scale(sign), profile).obstructions[md.missing_point]
    q2 = reduce(ring.w(), profile).obstructions[md.missing_point]
    return ReductionConstants(q1, q2, md.missing_point, triple.as_tuple())


def iter_points(level: int) -> Iterator[Point]:
    for n in range(level):
        for a in range(n + 1):
            yield (a, n)
