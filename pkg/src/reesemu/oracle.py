"""Curve search by exact linear algebra.

A Laurent polynomial ``g`` supported on ``m*Delta`` that vanishes to order
``m*u`` at ``(v, w) = (1, 1)`` with nonzero constant term and nonzero
coefficient at the corner ``(m*u, -m*u2)`` exists exactly when the symbolic
Rees ring is Noetherian.  The unknowns are the coefficients of ``g``; the
equations are its Taylor coefficients at ``(1, 1)`` of total degree below
``m*u``.  After multiplying by ``w^K`` (a unit near ``(1, 1)``) the Taylor
coefficient of ``s^i t^j`` in ``g(1 + s, 1 + t)`` is

    sum_p  g_p * C(alpha_p, i) * C(beta_p + K, j).

Two routes decide whether a suitable kernel vector exists.  The exact route
takes a fraction-free integer kernel basis.  The fast route reduces the
system modulo a prime: when the reduction keeps full row rank, its pivot
columns are independent over ``Q`` as well, so one exact square solve either
produces a witness ``g`` or a row combination proving a coordinate vanishes
on the whole kernel.  Both outcomes are checked exactly; anything the fast
route cannot settle goes to the exact route.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

import flint
import numpy as np

from .classify import require_hypotheses
from .triangle import Point, RationalTriangle, emu

PRIME = 2147483629  # largest prime below 2^31, so products of residues fit in int64
RETRIES = 8


@dataclass
class LatticeLaurent:
    """A Laurent polynomial in ``v, w`` with rational coefficients."""

    coeffs: dict[Point, Fraction]
    bound: frozenset[Point] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        self.coeffs = {p: Fraction(c) for p, c in self.coeffs.items() if c != 0}
        if self.bound is not None:
            outside = set(self.coeffs) - self.bound
            if outside:
                raise ValueError(f"support leaves the declared bound at {sorted(outside)[:3]}")

    def __getitem__(self, point: Point) -> Fraction:
        return self.coeffs.get(point, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list[Point]:
        return sorted(self.coeffs)

    def __mul__(self, other: "LatticeLaurent") -> "LatticeLaurent":
        out: dict[Point, Fraction] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return LatticeLaurent(out)

    @classmethod
    def from_terms(cls, *terms: tuple[int, int, int | Fraction]) -> "LatticeLaurent":
        out: dict[Point, Fraction] = {}
        for a, b, c in terms:
            out[(a, b)] = out.get((a, b), Fraction(0)) + Fraction(c)
        return cls(out)


def vanishing_order(g: LatticeLaurent) -> int:
    """Order of vanishing of ``g`` at ``(v, w) = (1, 1)``.

    Works column by column: for each ``alpha`` the ``t``-expansion of its
    column is formed once, then the ``s``-expansion mixes the columns.
    """
    if g.is_zero():
        raise ValueError("the zero polynomial has no vanishing order")
    den = 1
    for c in g.coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ashift = -min(a for a, _ in g.coeffs)
    bshift = -min(b for _, b in g.coeffs)
    columns: dict[int, list[tuple[int, int]]] = {}
    for (a, b), c in g.coeffs.items():
        columns.setdefault(a + ashift, []).append((b + bshift, int(c * den)))
    top = max(columns) + max(b for col in columns.values() for b, _ in col)
    expansions: dict[int, list[int]] = {a: [] for a in columns}

    def column_coeff(a: int, j: int) -> int:
        exp = expansions[a]
        while len(exp) <= j:
            k = len(exp)
            exp.append(sum(c * comb(b, k) for b, c in columns[a]))
        return exp[j]

    for k in range(top + 1):
        for i in range(k + 1):
            if sum(comb(a, i) * column_coeff(a, k - i) for a in columns) != 0:
                return k
    raise ArithmeticError("nonzero polynomial with vanishing Taylor expansion")


# -- the linear system -------------------------------------------------------


@dataclass(frozen=True)
class CurveSystem:
    triangle: RationalTriangle
    m: int
    points: tuple[Point, ...]
    equations: tuple[tuple[int, int], ...]
    shift: int

    @property
    def order(self) -> int:
        return self.m * self.triangle.u

    @property
    def corner(self) -> Point:
        return (self.m * self.triangle.u, -self.m * self.triangle.u2)

    @property
    def corner_index(self) -> int:
        return self.points.index(self.corner)

    def integer_rows(self) -> list[list[int]]:
        K = self.shift
        return [[comb(a, i) * comb(b + K, j) for a, b in self.points] for i, j in self.equations]

    def modular_matrix(self, p: int = PRIME) -> np.ndarray:
        alphas = np.array([a for a, _ in self.points], dtype=np.int64)
        betas = np.array([b + self.shift for _, b in self.points], dtype=np.int64)
        top = max(int(alphas.max()), int(betas.max()))
        table = _binomial_table_mod(top, self.order, p)
        rows_i = np.array([i for i, _ in self.equations], dtype=np.int64)
        rows_j = np.array([j for _, j in self.equations], dtype=np.int64)
        left = table[rows_i][:, alphas]
        right = table[rows_j][:, betas]
        return (left * right) % p

    def laurent(self, values) -> LatticeLaurent:
        return LatticeLaurent(dict(zip(self.points, values)), frozenset(self.points))


def curve_system(tri: RationalTriangle, m: int = 1) -> CurveSystem:
    if m < 1:
        raise ValueError("m must be positive")
    points = tuple(tri.lattice_points(m))
    order = m * tri.u
    equations = tuple((i, k - i) for k in range(order) for i in range(k + 1))
    shift = -min(b for _, b in points)
    return CurveSystem(tri, m, points, equations, shift)


@lru_cache(maxsize=8)
def _binomial_table_mod(top: int, rows: int, p: int) -> np.ndarray:
    """``table[i, n] = C(n, i) mod p`` for ``i < rows`` and ``n <= top``."""
    table = np.zeros((max(rows, 1), top + 1), dtype=np.int64)
    table[0, :] = 1
    for i in range(1, rows):
        # C(n, i) = sum of C(k, i-1) over k < n
        table[i, :] = np.cumsum(np.concatenate(([0], table[i - 1, :-1]))) % p
    return table


# -- searching ---------------------------------------------------------------


@dataclass(frozen=True)
class CurveDecision:
    exists: bool
    route: str
    kernel_dim: int


def _kernel_flags(basis_rows: list[list[int]], indices: tuple[int, ...]) -> list[bool]:
    return [any(vec[k] != 0 for vec in basis_rows) for k in indices]


def _exact_kernel(system: CurveSystem) -> list[list[int]]:
    A = flint.fmpz_mat(system.integer_rows())
    X, nullity = A.nullspace()
    return [[int(X[r, c]) for r in range(X.nrows())] for c in range(nullity)]


def _combine(system: CurveSystem, basis: list[list[int]], rng: random.Random) -> LatticeLaurent | None:
    """A kernel vector nonzero at the origin and the corner, if one exists."""
    origin, corner = 0, system.corner_index
    if not basis or not all(_kernel_flags(basis, (origin, corner))):
        return None
    for _ in range(RETRIES):
        weights = [rng.randint(1, 1 << 20) for _ in basis]
        vec = [sum(w * b[k] for w, b in zip(weights, basis)) for k in range(len(system.points))]
        if vec[origin] != 0 and vec[corner] != 0:
            return _normalized(system, vec)
    # deterministic fallback: v1 + t*v2 fails for at most one t per coordinate
    v1 = next(b for b in basis if b[origin] != 0)
    v2 = next(b for b in basis if b[corner] != 0)
    for t in range(3):
        vec = [x + t * y for x, y in zip(v1, v2)]
        if vec[origin] != 0 and vec[corner] != 0:
            return _normalized(system, vec)
    raise ArithmeticError("no combination of kernel vectors avoids both coordinates")


def _normalized(system: CurveSystem, vec) -> LatticeLaurent:
    lead = Fraction(vec[0])
    return system.laurent([Fraction(x) / lead for x in vec])


def _pivots(reduced, rank: int, ncols: int) -> list[int]:
    pivots = []
    col = 0
    for row in range(rank):
        while int(reduced[row, col]) == 0:
            col += 1
        pivots.append(col)
        col += 1
    return pivots


def _fast_route(system: CurveSystem, rng: random.Random) -> tuple[bool, LatticeLaurent | None] | None:
    """Settle the question through a full-rank reduction mod ``PRIME``.

    Returns ``(exists, witness_or_None)`` when settled, ``None`` otherwise.
    """
    mat = system.modular_matrix()
    nrows, ncols = mat.shape
    red, rank = flint.nmod_mat(mat.tolist(), PRIME).rref()
    if rank < nrows:
        return None
    pivots = _pivots(red, rank, ncols)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    rows = system.integer_rows()
    square = flint.fmpz_mat([[row[j] for j in pivots] for row in rows])
    # a free coordinate never vanishes on the kernel
    targets = [idx for idx in (0, system.corner_index) if idx in pivot_set]
    for idx in targets:
        # is e_idx a combination of the rows?  solve y * square = e_idx on the pivots
        k = pivots.index(idx)
        rhs = flint.fmpz_mat(rank, 1, [1 if r == k else 0 for r in range(rank)])
        y = square.transpose().solve(rhs)
        yq = [Fraction(int(y[r, 0].p), int(y[r, 0].q)) for r in range(rank)]
        on_free = [sum(yq[r] * rows[r][j] for r in range(rank) if yq[r]) for j in free]
        if all(v == 0 for v in on_free):
            return (False, None)
    for _ in range(RETRIES):
        xf = [rng.randint(1, 1 << 20) for _ in free]
        rhs = flint.fmpz_mat(nrows, 1, [-sum(row[j] * x for j, x in zip(free, xf)) for row in rows])
        sol = square.solve(rhs)
        vec = [Fraction(0)] * ncols
        for k, j in enumerate(pivots):
            vec[j] = Fraction(int(sol[k, 0].p), int(sol[k, 0].q))
        for j, x in zip(free, xf):
            vec[j] = Fraction(x)
        if vec[0] != 0 and vec[system.corner_index] != 0:
            return (True, _normalized(system, vec))
    return None


def _decide_fast(system: CurveSystem) -> bool | None:
    """Certified positive answer mod ``PRIME`` without building a witness.

    A full-rank reduction means the mod-p kernel is the reduction of the
    rational kernel; a coordinate that is nonzero somewhere on the mod-p
    kernel is therefore nonzero somewhere on the rational kernel.  A
    vanishing coordinate mod p is not a proof of anything, so that case
    returns ``None``.
    """
    mat = system.modular_matrix()
    nrows, ncols = mat.shape
    modmat = flint.nmod_mat(mat.tolist(), PRIME)
    X, nullity = modmat.nullspace()
    if ncols - nullity < nrows:
        return None
    for idx in (0, system.corner_index):
        if not any(int(X[idx, c]) != 0 for c in range(nullity)):
            return None
    return True


def curve_search(triple, m: int = 1, *, seed: int = 0, fast: bool = True) -> LatticeLaurent | None:
    """A curve witness ``g`` for ``m*Delta``, or ``None`` when there is none.

    The returned polynomial has constant term 1, a nonzero corner coefficient
    and vanishes to order at least ``m*u`` at ``(1, 1)``; all of this is
    re-checked before returning.
    """
    _, tri = require_hypotheses(triple)
    system = curve_system(tri, m)
    rng = random.Random(seed)
    settled = _fast_route(system, rng) if fast else None
    if settled is None:
        g = _combine(system, _exact_kernel(system), rng)
    else:
        g = settled[1]
    if g is not None:
        _check_witness(system, g)
    return g


def curve_exists(triple, m: int = 1) -> CurveDecision:
    """Whether ``curve_search`` would succeed, without building a witness."""
    _, tri = require_hypotheses(triple)
    return _curve_exists(tri, m)


def _curve_exists(tri: RationalTriangle, m: int) -> CurveDecision:
    system = curve_system(tri, m)
    npts, nrows = len(system.points), len(system.equations)
    if _decide_fast(system):
        return CurveDecision(True, "modular", npts - nrows)
    basis = _exact_kernel(system)
    flags = _kernel_flags(basis, (0, system.corner_index)) if basis else [False, False]
    return CurveDecision(all(flags), "exact", len(basis))


def _check_witness(system: CurveSystem, g: LatticeLaurent) -> None:
    if g[(0, 0)] == 0 or g[system.corner] == 0:
        raise ArithmeticError("witness lost a required coefficient")
    if not set(g.coeffs) <= set(system.points):
        raise ArithmeticError("witness support leaves m*Delta")
    if vanishing_order(g) < system.order:
        raise ArithmeticError("witness does not vanish to the required order")


def kernel_dimension(triple, m: int = 1, column_order: list[int] | None = None) -> int:
    """Exact kernel dimension, optionally after permuting the unknowns."""
    _, tri = require_hypotheses(triple)
    rows = curve_system(tri, m).integer_rows()
    if column_order is not None:
        rows = [[row[j] for j in column_order] for row in rows]
    return len(rows[0]) - flint.fmpz_mat(rows).rank()


# -- cross validation ----------------------------------------------------------


@dataclass(frozen=True)
class CrossValidation:
    triple: tuple[int, int, int]
    emu: bool
    factors: bool
    factor_status: str
    curve: bool

    @property
    def agree(self) -> bool:
        return self.emu == self.factors == self.curve and self.factor_status != "inconclusive"


def cross_validate(triple) -> CrossValidation:
    from .truncring import factor_decision

    tr, tri = require_hypotheses(triple)
    decision = factor_decision(tr, 1)
    return CrossValidation(
        tr.as_tuple(),
        emu(tri, 1),
        decision.status == "factors",
        decision.status,
        _curve_exists(tri, 1).exists,
    )
