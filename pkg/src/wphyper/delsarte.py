"""Delsarte exponent matrices, loop polynomials and diagonal automorphisms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exactmath as em
from .wps import MonomialBasis, WeightSystem


class DegenerateWeightsError(ValueError):
    pass


@dataclass(frozen=True)
class DelsarteMatrix:
    """Square exponent matrix; row ``i`` is the monomial ``prod_j x_j^B[i][j]``.

    ``coefficients`` are carried along for round-tripping equations and are not
    used by any criterion.
    """

    rows: tuple[tuple[int, ...], ...]
    coefficients: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("a Delsarte matrix must be square")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("exponents must be non-negative")
        object.__setattr__(self, "rows", rows)
        if self.coefficients is not None:
            coeffs = tuple(Fraction(c) for c in self.coefficients)
            if len(coeffs) != n or any(c == 0 for c in coeffs):
                raise ValueError("need one nonzero coefficient per row")
            object.__setattr__(self, "coefficients", coeffs)

    @property
    def size(self) -> int:
        return len(self.rows)

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def det(self) -> int:
        return em.det(self.rows)


@dataclass(frozen=True)
class DelsarteDerivation:
    q: tuple[Fraction, ...]
    degree: int
    weights: tuple[int, ...]

    def weight_system(self) -> WeightSystem:
        return WeightSystem(self.weights, self.degree)


@dataclass(frozen=True)
class DiagonalAutGroup:
    """Diagonal automorphisms modulo the weighted scaling.

    Each generator is ``(t, s)``: ``x_j -> exp(2 pi i t_j) x_j`` multiplies
    every monomial by ``exp(2 pi i s)``.  ``continuous_rank`` is the dimension
    of the group; it is 0 when the group is finite.
    """

    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    continuous_rank: int = 0

    @property
    def order(self) -> int | None:
        if self.continuous_rank:
            return None
        return math.prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return self.continuous_rank == 0 and not self.invariant_factors


def _as_delsarte(b) -> DelsarteMatrix:
    return b if isinstance(b, DelsarteMatrix) else DelsarteMatrix(b)


def derive_weights(b) -> DelsarteDerivation:
    """Weights and degree making every row monomial of ``b`` homogeneous."""
    b = _as_delsarte(b)
    inv = em.inverse_rational(b.rows)
    q = tuple(sum(row, Fraction(0)) for row in inv)
    d = em.lcm_many([x.denominator for x in q])
    weights = tuple(int(x * d) for x in q)
    if any(a <= 0 for a in weights):
        raise DegenerateWeightsError(f"degenerate weight system {weights}")
    return DelsarteDerivation(q, d, weights)


def delsarte_rational(b) -> bool:
    """Rationality test: the derived degree equals ``|det B|``."""
    b = _as_delsarte(b)
    return derive_weights(b).degree == abs(b.det())


def lattice_order_check(b) -> tuple[int, int]:
    """Order of ``B^{-1} Z^N / Z^N`` and of the class of ``B^{-1}(1, ..., 1)``.

    Computed from the Smith form of ``B``: the group is isomorphic to the
    cokernel ``Z^N / B Z^N``, where the vector in question maps to the all-ones
    vector.
    """
    b = _as_delsarte(b)
    d_mat, u, _ = em.smith_normal_form(b.rows)
    diag = [d_mat[i][i] for i in range(b.size)]
    if any(x == 0 for x in diag):
        raise em.SingularMatrixError("matrix is singular")
    ones = em.matvec(u, [1] * b.size)
    order = 1
    for delta, c in zip(diag, ones):
        order = math.lcm(order, delta // math.gcd(delta, c))
    return math.prod(diag), order


def loop_matrix(exponents: Sequence[int]) -> DelsarteMatrix:
    """Exponent matrix of ``x_0^{b_0} x_1 + x_1^{b_1} x_2 + ... + x_N^{b_N} x_0``."""
    bs = [int(x) for x in exponents]
    n = len(bs)
    if n < 3:
        raise ValueError("a loop needs at least 3 variables")
    if any(x < 1 for x in bs):
        raise ValueError("loop exponents must be at least 1")
    rows = [[0] * n for _ in range(n)]
    for i, e in enumerate(bs):
        rows[i][i] = e
        rows[i][(i + 1) % n] += 1
    return DelsarteMatrix(rows)


def loop_det(exponents: Sequence[int]) -> int:
    return math.prod(exponents) + (-1) ** (len(exponents) + 1)


def main_family_type(n: int) -> tuple[int, ...]:
    """Loop type ``[2, ..., 2, 3]`` with ``n + 1`` twos (dimension ``n``)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return (2,) * (n + 1) + (3,)


def main_family(n: int) -> DelsarteDerivation:
    return derive_weights(loop_matrix(main_family_type(n)))


def main_family_closed_form(n: int) -> tuple[tuple[int, ...], int]:
    """Closed-form weights and degree of :func:`main_family`.

    The degree is ``3 * 2**(n+1) + (-1)**(n+1)``, which is what solving the
    homogeneity equations gives (and agrees with the weight formula).
    """
    weights = []
    for i in range(n + 2):
        weights.append(2 ** (n + 1) + sum((-1) ** (n + 2 - j) * 2 ** (j - 1)
                                          for j in range(1, i + 1)))
    return tuple(weights), 3 * 2 ** (n + 1) + (-1) ** (n + 1)


def loop_quasismooth_obstruction(exponents: Sequence[int]) -> int:
    """``prod b_i - (-1)^N``, i.e. the determinant of the loop matrix.

    The loop hypersurface has a nonzero critical point over a field ``k``
    only if this vanishes in ``k``; with every ``b_i >= 2`` it never vanishes
    in characteristic 0.
    """
    bs = list(exponents)
    if any(x < 1 for x in bs):
        raise ValueError("loop exponents must be at least 1")
    return math.prod(bs) - (-1) ** len(bs)


def loop_quasismooth(exponents: Sequence[int], characteristic: int = 0) -> bool:
    obstruction = loop_quasismooth_obstruction(exponents)
    if characteristic == 0:
        return obstruction != 0
    return obstruction % characteristic != 0


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(em.frac(x) for x in v)


def diagonal_aut(monomials, weights=None) -> DiagonalAutGroup:
    """Diagonal scalings multiplying every monomial by one common scalar.

    ``monomials`` is a :class:`MonomialBasis` or a list of exponent vectors;
    ``weights`` (a :class:`WeightSystem` or a weight tuple) is needed only to
    pick canonical representatives modulo the weighted scaling and defaults to
    the basis weights.
    """
    if isinstance(monomials, MonomialBasis):
        weights = monomials.weights if weights is None else weights
        mons = list(monomials.monomials)
    else:
        mons = sorted({tuple(m) for m in monomials})
    if isinstance(weights, WeightSystem):
        weights = weights.weights
    if weights is None:
        raise ValueError("weights are required for a plain monomial list")
    weights = tuple(weights)
    nvars = len(weights)
    g = math.gcd(*weights)
    weights = tuple(a // g for a in weights)
    if not mons:
        raise ValueError("need at least one monomial")

    diffs = [[x - y for x, y in zip(m, mons[0])] for m in mons[1:]]
    if diffs:
        d_mat, _, v = em.smith_normal_form(diffs)
        diag = [d_mat[i][i] for i in range(min(len(diffs), nvars))]
    else:
        v = em.identity(nvars)
        diag = []
    rank = sum(1 for x in diag if x != 0)
    continuous = nvars - rank - 1
    gens = []
    factors = []
    for k, delta in enumerate(diag):
        if delta > 1:
            t = _frac_vec(Fraction(v[i][k], delta) for i in range(nvars))
            factors.append(delta)
            gens.append(t)
    if continuous == 0:
        if len(gens) == 1:
            gens = [_canonical_cyclic_generator(gens[0], factors[0], weights, mons[0])]
        else:
            gens = [_canonical_lift(t, m, weights) for t, m in zip(gens, factors)]
    result = tuple((t, em.frac(sum(e * x for e, x in zip(mons[0], t)))) for t in gens)
    return DiagonalAutGroup(tuple(factors), result, continuous)


def _canonical_lift(t, order, weights):
    # the lifts of order `order` differ by multiples of weights/order
    lifts = [_frac_vec(x + Fraction(j * a, order) for x, a in zip(t, weights))
             for j in range(order)]
    return min(lifts)


def _canonical_cyclic_generator(t, order, weights, mon):
    # prefer the generator acting on the equation by exp(2 pi i / order)
    best_unit = None
    best_any = None
    target = Fraction(1, order)
    for c in range(1, order):
        if math.gcd(c, order) != 1:
            continue
        lift = _canonical_lift([c * x for x in t], order, weights)
        s = em.frac(sum(e * x for e, x in zip(mon, lift)))
        if s == target and (best_unit is None or lift < best_unit):
            best_unit = lift
        if best_any is None or lift < best_any:
            best_any = lift
    return best_unit if best_unit is not None else best_any


def acts_by_common_scalar(t, monomials) -> bool:
    scalars = {em.frac(sum(e * x for e, x in zip(m, t))) for m in monomials}
    return len(scalars) == 1
