"""Weight systems, monomials of fixed weighted degree, numeric criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactmath import gcd_many

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class WeightSystem:
    """Weights ``(a_0, ..., a_{n+1})`` and degree ``d`` of a hypersurface family."""

    weights: tuple[int, ...]
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        object.__setattr__(self, "degree", int(self.degree))
        if len(self.weights) < 3:
            raise ValueError("a weight system needs at least 3 weights")
        if any(a <= 0 for a in self.weights):
            raise ValueError(f"weights must be positive, got {self.weights}")
        if self.degree <= 0:
            raise ValueError(f"degree must be positive, got {self.degree}")

    @property
    def dimension(self) -> int:
        return len(self.weights) - 2

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def sorted_view(self) -> tuple[int, ...]:
        return tuple(sorted(self.weights, reverse=True))

    def weighted_degree(self, exponents: Sequence[int]) -> int:
        return sum(a * e for a, e in zip(self.weights, exponents))

    def __str__(self):
        return f"X_{self.degree} in P({','.join(map(str, self.weights))})"


@dataclass(frozen=True)
class MonomialBasis:
    """A deduplicated, lexicographically sorted set of exponent vectors."""

    weights: tuple[int, ...]
    degree: int
    monomials: tuple[Exponents, ...] = field(default=())

    @classmethod
    def from_monomials(cls, weights, degree, monomials: Iterable[Sequence[int]]):
        weights = tuple(weights)
        mons = sorted({tuple(int(e) for e in m) for m in monomials})
        for m in mons:
            if len(m) != len(weights):
                raise ValueError(f"monomial {m} has wrong number of exponents")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            if sum(a * e for a, e in zip(weights, m)) != degree:
                raise ValueError(f"monomial {m} is not of weighted degree {degree}")
        return cls(weights, int(degree), tuple(mons))

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m):
        return tuple(m) in set(self.monomials)

    def is_symmetric(self) -> bool:
        """True if swapping any two equal-weight variables preserves the set."""
        mons = set(self.monomials)
        for i, j in _equal_weight_pairs(self.weights):
            for m in mons:
                s = list(m)
                s[i], s[j] = s[j], s[i]
                if tuple(s) not in mons:
                    return False
        return True


def _equal_weight_pairs(weights):
    first = {}
    for i, a in enumerate(weights):
        if a in first:
            yield first[a], i
        else:
            first[a] = i


def is_well_formed_set(values: Sequence[int]) -> bool:
    """Every gcd with one entry removed equals 1."""
    values = list(values)
    if len(values) < 2:
        return all(v == 1 for v in values)
    return all(gcd_many(values[:i] + values[i + 1:]) == 1 for i in range(len(values)))


def is_well_formed(w: WeightSystem) -> bool:
    return is_well_formed_set(w.weights)


_REACH_TABLE_LIMIT = 400_000
_COUNT_DP_LIMIT = 2_000_000


def _reachable(weights: Sequence[int], degree: int) -> list[list[bool]]:
    # reach[k][t]: t is a non-negative combination of weights[k:]
    n = len(weights)
    reach = [[False] * (degree + 1) for _ in range(n + 1)]
    reach[n][0] = True
    for k in range(n - 1, -1, -1):
        a, cur, nxt = weights[k], reach[k], reach[k + 1]
        for t in range(degree + 1):
            cur[t] = nxt[t] or (t >= a and cur[t - a])
    return reach


def enumerate_monomials(weights, degree: int | None = None) -> MonomialBasis:
    """All exponent vectors of the given weighted degree.

    Accepts either a :class:`WeightSystem` or a plain weight sequence together
    with ``degree``.  Variables are visited heaviest first and branches are cut
    as soon as the residual degree is not representable by the remaining
    weights.
    """
    if isinstance(weights, WeightSystem):
        degree = weights.degree if degree is None else degree
        weights = weights.weights
    weights = tuple(int(a) for a in weights)
    if degree is None or degree < 0:
        raise ValueError("degree must be a non-negative integer")
    if any(a <= 0 for a in weights):
        raise ValueError("weights must be positive")
    order = sorted(range(len(weights)), key=lambda i: (-weights[i], i))
    ws = [weights[i] for i in order]
    n = len(ws)
    # suffix gcds are a cheap necessary test; the full table is exact but
    # costs O(n * degree) memory, so it is only built for moderate degrees
    suffix_gcd = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix_gcd[k] = math.gcd(ws[k], suffix_gcd[k + 1])
    reach = _reachable(ws, degree) if n * (degree + 1) <= _REACH_TABLE_LIMIT else None

    def representable(k, r):
        if reach is not None:
            return reach[k][r]
        g = suffix_gcd[k]
        return r == 0 if g == 0 else r % g == 0

    out = []
    exps = [0] * n

    def dfs(k, rest):
        if k == n - 1:
            if rest % ws[k] == 0:
                exps[k] = rest // ws[k]
                out.append(tuple(exps))
                exps[k] = 0
            return
        a = ws[k]
        for e in range(rest // a + 1):
            r = rest - e * a
            if representable(k + 1, r):
                exps[k] = e
                dfs(k + 1, r)
        exps[k] = 0

    if n == 0:
        if degree == 0:
            out.append(())
    elif representable(0, degree):
        dfs(0, degree)
    mons = []
    for vec in out:
        m = [0] * len(weights)
        for pos, i in enumerate(order):
            m[i] = vec[pos]
        mons.append(tuple(m))
    mons.sort()
    return MonomialBasis(weights, degree, tuple(mons))


def count_monomials(weights: Sequence[int], target_degree: int) -> int:
    """Number of monomials of weighted degree ``target_degree`` (coin-change DP)."""
    if target_degree < 0:
        raise ValueError("target degree must be non-negative")
    if len(weights) * target_degree > _COUNT_DP_LIMIT and min(weights) * 8 > target_degree:
        # few heavy weights: the monomials are short products, list them
        return len(enumerate_monomials(weights, target_degree))
    ways = [1] + [0] * target_degree
    for a in weights:
        for t in range(a, target_degree + 1):
            ways[t] += ways[t - a]
    return ways[target_degree]


def degree_criterion(w: WeightSystem) -> bool:
    """``d < 2 max`` or ``d == 2 max`` with the maximum attained at least twice."""
    top = max(w.weights)
    if w.degree < 2 * top:
        return True
    return w.degree == 2 * top and w.weights.count(top) >= 2


def is_fano(w: WeightSystem) -> bool:
    return sum(w.weights) > w.degree


def dim_aut(w) -> int:
    """Dimension of the automorphism group of the ambient weighted projective space.

    Counts, for each variable, the monomials of the same weight it may be sent
    to; the total minus one (for the scaling) is the dimension.
    """
    weights = w.weights if isinstance(w, WeightSystem) else tuple(w)
    return sum(count_monomials(weights, a) for a in weights) - 1


def moduli_lower_bound(w: WeightSystem) -> int:
    """Projective dimension of the linear system minus ``dim Aut``.

    Heuristic only; may be negative, in which case it says nothing.
    """
    return count_monomials(w.weights, w.degree) - 1 - dim_aut(w)
