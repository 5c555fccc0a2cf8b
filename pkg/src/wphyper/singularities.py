"""Cyclic quotient singularities of quasismooth weighted hypersurfaces.

The Reid-Tai test, the exponent-only sufficient test for loop polynomials and
the stratum-by-stratum analysis used to classify a whole family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .delsarte import DelsarteDerivation, derive_weights, loop_matrix
from .exactmath import frac, lcm_many
from .wps import MonomialBasis, WeightSystem, enumerate_monomials

CANONICAL = "canonical"
TERMINAL = "terminal"
DEFAULT_R_CAP = 10**6
# int64 stays exact while i * c < r**2 fits comfortably
_VECTOR_MIN_R = 64
_VECTOR_MAX_R = 2**30


class NotQuasismoothError(ValueError):
    """No member of the family can be quasismooth along some stratum."""

    def __init__(self, subset):
        self.subset = tuple(subset)
        super().__init__(f"family cannot be quasismooth along stratum {set(self.subset)}")


class CapExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class CyclicQuotientType:
    """``1/r (c_1, ..., c_s)``, residues stored reduced mod ``r``."""

    r: int
    c: tuple[int, ...]

    def __post_init__(self):
        r = int(self.r)
        if r < 1:
            raise ValueError("r must be at least 1")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", tuple(int(x) % r for x in self.c))

    def without_zeros(self) -> "CyclicQuotientType":
        return CyclicQuotientType(self.r, tuple(x for x in self.c if x))

    def reduced(self) -> "CyclicQuotientType":
        """Drop zero residues and divide out a common factor with ``r``.

        If ``g = gcd(r, c_1, ..., c_s) > 1`` the subgroup of order ``g`` acts
        trivially, so the quotient is really by ``mu_{r/g}``.
        """
        t = self.without_zeros()
        g = math.gcd(t.r, *t.c)
        if g > 1:
            t = CyclicQuotientType(t.r // g, tuple(x // g for x in t.c))
        return t

    def __str__(self):
        return f"1/{self.r}({','.join(map(str, self.c))})"


def _check_mode(mode):
    if mode not in (CANONICAL, TERMINAL):
        raise ValueError(f"mode must be '{CANONICAL}' or '{TERMINAL}', not {mode!r}")


def reid_tai_failure(t: CyclicQuotientType, mode: str = TERMINAL,
                     cap: int | None = DEFAULT_R_CAP) -> int | None:
    """First ``i`` in ``1..r-1`` at which the Reid-Tai inequality fails, else None."""
    _check_mode(mode)
    r = t.r
    if cap is not None and r > cap:
        raise CapExceededError(f"r = {r} exceeds the cap {cap}")
    # sum_j frac(i c_j / r) = (sum_j (i c_j mod r)) / r, compared in integers
    cs = t.c
    if r <= _VECTOR_MIN_R or r > _VECTOR_MAX_R:
        for i in range(1, r):
            total = sum(i * c % r for c in cs)
            if total < r or (mode == TERMINAL and total == r):
                return i
        return None
    i = np.arange(1, r, dtype=np.int64)
    total = np.zeros(r - 1, dtype=np.int64)
    for c in cs:
        total += i * c % r
    bad = total <= r if mode == TERMINAL else total < r
    hit = int(np.argmax(bad))
    return hit + 1 if bad[hit] else None


def reid_tai(t: CyclicQuotientType, mode: str = TERMINAL,
             cap: int | None = DEFAULT_R_CAP) -> bool:
    return reid_tai_failure(t, mode, cap) is None


def reid_tai_sums(t: CyclicQuotientType) -> list[Fraction]:
    return [sum((frac(Fraction(i * c, t.r)) for c in t.c), Fraction(0))
            for i in range(1, t.r)]


# -- loop polynomials --------------------------------------------------------

def rotate(seq: Sequence[int], k: int) -> tuple[int, ...]:
    k %= len(seq)
    return tuple(seq[k:]) + tuple(seq[:k])


def loop_betas(exponents: Sequence[int], rotation: int = 0) -> tuple[int, ...]:
    """``beta_2, ..., beta_{n+1}`` for the coordinate point of ``x_rotation``.

    With ``b`` the rotated exponent list, ``beta_1 = 1`` and
    ``beta_j = 1 - b_{j-1} beta_{j-1}``.
    """
    b = rotate(exponents, rotation)
    betas = []
    beta = 1
    for j in range(2, len(b)):
        beta = 1 - b[j - 1] * beta
        betas.append(beta)
    return tuple(betas)


def loop_coordinate_types(exponents: Sequence[int],
                          derivation: DelsarteDerivation | None = None
                          ) -> list[CyclicQuotientType]:
    """Type ``1/a_k (beta_2, ..., beta_{n+1})`` at each coordinate point ``P_k``."""
    if derivation is None:
        derivation = derive_weights(loop_matrix(exponents))
    return [CyclicQuotientType(derivation.weights[k], loop_betas(exponents, k))
            for k in range(len(exponents))]


@dataclass(frozen=True)
class EqIIMinimum:
    infimum: Fraction
    attained: bool
    argmin: Fraction | None = None


def _sum_frac(betas, x):
    return sum((frac(b * x) for b in betas), Fraction(0))


def breakpoints(betas: Sequence[int]) -> list[Fraction]:
    pts = set()
    for b in betas:
        m = abs(b)
        for k in range(1, m):
            pts.add(Fraction(k, m))
    return sorted(pts)


def _jumps(betas, scale):
    # breakpoint * scale -> [positive betas through it, negative betas through it]
    out: dict[int, list[int]] = {}
    for b in betas:
        m = abs(b)
        step = scale // m
        for k in range(1, m):
            slot = out.setdefault(k * step, [0, 0])
            slot[0 if b > 0 else 1] += 1
    return out


def eqii_min(betas: Sequence[int], prefix: int | None = None) -> EqIIMinimum:
    """Exact infimum of ``f(x) = sum_j frac(beta_j x)`` over ``0 < x < 1``.

    ``f`` is linear with slope ``sum beta_j`` between consecutive breakpoints
    ``k/|beta_j|``.  At a breakpoint each positive beta through it drops by 1
    and each negative one rises by 1 just after, so one sweep from ``0+`` to
    ``1-`` visits every candidate for the infimum.  Positions and values are
    kept as integers scaled by the lcm of the ``|beta_j|``.
    """
    betas = tuple(int(b) for b in betas)
    if prefix is not None:
        betas = betas[:prefix]
    if not betas or all(b == 0 for b in betas):
        raise ValueError("need at least one nonzero beta")
    betas = tuple(b for b in betas if b != 0)
    scale = lcm_many([abs(b) for b in betas])
    slope = sum(betas)
    flat = slope == 0
    jumps = _jumps(betas, scale)
    best = None
    attained = False
    arg = None

    def offer(value, is_attained, at):
        nonlocal best, attained, arg
        if best is None or value < best:
            best, attained, arg = value, is_attained, at
        elif value == best and is_attained and not attained:
            attained, arg = True, at

    prev = 0
    right = scale * sum(1 for b in betas if b < 0)
    for x in sorted(jumps) + [scale]:
        # open piece (prev, x): a flat piece attains its value at the midpoint
        mid = Fraction(prev + x, 2 * scale) if flat else None
        offer(right, flat, mid)
        left = right + slope * (x - prev)
        offer(left, flat, mid)
        if x == scale:
            break
        up, down = jumps[x]
        value = left - up * scale
        offer(value, True, Fraction(x, scale))
        right = value + down * scale
        prev = x
    return EqIIMinimum(Fraction(best, scale), attained, arg)


def eqii_pointwise_holds(betas: Sequence[int], mode: str = TERMINAL,
                         prefix: int | None = None) -> bool:
    _check_mode(mode)
    m = eqii_min(betas, prefix)
    if mode == CANONICAL:
        return m.infimum >= 1
    return m.infimum > 1 or (m.infimum == 1 and not m.attained)


def eqii_sufficient(exponents: Sequence[int], mode: str = TERMINAL,
                    prefix: int | None = None) -> bool:
    """Exponent-only test at every coordinate point (sufficient, not necessary)."""
    if any(b < 2 for b in exponents):
        raise ValueError("loop exponents must be at least 2")
    return all(eqii_pointwise_holds(loop_betas(exponents, k), mode, prefix)
               for k in range(len(exponents)))


def eqii_failing_rotations(exponents, mode=TERMINAL, prefix=None) -> list[int]:
    return [k for k in range(len(exponents))
            if not eqii_pointwise_holds(loop_betas(exponents, k), mode, prefix)]


def figure_rows(betas: Sequence[int]) -> list[tuple[Fraction, Fraction, str]]:
    """Breakpoints and interval midpoints of ``f`` with their exact values."""
    pts = breakpoints(betas)
    nodes = [Fraction(0)] + pts + [Fraction(1)]
    rows = []
    for lo, hi in zip(nodes, nodes[1:]):
        if lo > 0:
            rows.append((lo, _sum_frac(betas, lo), "breakpoint"))
        mid = (lo + hi) / 2
        rows.append((mid, _sum_frac(betas, mid), "midpoint"))
    return rows


# -- strata ------------------------------------------------------------------

@dataclass(frozen=True)
class StratumReport:
    """Generic point of the coordinate stratum where exactly ``subset`` is nonzero.

    ``meets_x`` is False when the only monomial supported on the subset makes
    the hypersurface miss the open part of the stratum.
    """

    subset: tuple[int, ...]
    r: int
    contained_in_x: bool
    transverse: CyclicQuotientType
    eliminated: int | None = None
    meets_x: bool = True
    orbit_size: int = 1


@dataclass
class SingularityVerdict:
    klt: bool
    canonical: bool | None
    terminal: bool | None
    witnesses: list = field(default_factory=list)
    undecided: list = field(default_factory=list)

    @property
    def decided(self) -> bool:
        return not self.undecided


def _monomial_masks(mons):
    # (support bitmask, bitmask of variables appearing to the first power)
    out = []
    for m in mons:
        support = linear = 0
        for i, e in enumerate(m):
            if e:
                support |= 1 << i
                if e == 1:
                    linear |= 1 << i
        out.append((support, linear))
    return out


def _analyse_subset(weights, masks, subset, r) -> StratumReport:
    smask = 0
    for i in subset:
        smask |= 1 << i
    outside = [j for j in range(len(weights)) if not smask >> j & 1]
    inside = sum(1 for support, _ in masks if support & ~smask == 0)
    if inside:
        ctype = CyclicQuotientType(r, tuple(weights[j] for j in outside))
        return StratumReport(tuple(subset), r, False, ctype, None, inside > 1)
    for j in outside:
        bit = 1 << j
        for support, linear in masks:
            if linear & bit and support & ~(smask | bit) == 0:
                ctype = CyclicQuotientType(r, tuple(weights[k] for k in outside if k != j))
                return StratumReport(tuple(subset), r, True, ctype, j)
    raise NotQuasismoothError(subset)


def _weight_classes(weights):
    classes = {}
    for i, a in enumerate(weights):
        classes.setdefault(a, []).append(i)
    return list(classes.values())


def strata_singularities(w: WeightSystem, basis: MonomialBasis | None = None,
                         representatives_only: bool = False) -> list[StratumReport]:
    """Quotient singularity type along every stratum with nontrivial stabiliser.

    For each subset ``S`` of variables with ``r = gcd(a_S) > 1``: if some
    monomial lives only on ``S`` the hypersurface cuts the stratum and the
    transverse type is ``1/r(a_j : j not in S)``; otherwise it contains the
    stratum and one direction ``x_j`` appearing linearly in a monomial times
    ``S``-variables is eliminated (smallest such ``j``).  If neither kind of
    monomial exists no member can be quasismooth there.

    With ``representatives_only`` one subset per orbit under permutations of
    equal-weight variables is reported (with ``orbit_size`` set); this needs
    a basis invariant under those permutations.
    """
    if basis is None:
        basis = enumerate_monomials(w)
    weights = w.weights
    masks = _monomial_masks(basis.monomials)
    if representatives_only and not basis.is_symmetric():
        raise ValueError("basis is not symmetric under equal-weight permutations")
    reports = []
    if representatives_only:
        classes = _weight_classes(weights)
        for counts in product(*(range(len(c) + 1) for c in classes)):
            if not any(counts):
                continue
            subset = tuple(sorted(i for c, k in zip(classes, counts) for i in c[:k]))
            r = math.gcd(*(weights[i] for i in subset))
            if r > 1:
                rep = _analyse_subset(weights, masks, subset, r)
                orbit = math.prod(math.comb(len(c), k) for c, k in zip(classes, counts))
                reports.append(_with_orbit(rep, orbit))
        return reports
    for subset in _subsets_with_common_factor(weights):
        r = math.gcd(*(weights[i] for i in subset))
        reports.append(_analyse_subset(weights, masks, subset, r))
    return reports


def _prime_factors(n: int) -> set[int]:
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def _subsets_with_common_factor(weights):
    # gcd(a_S) > 1 iff some prime divides every weight in S
    found = set()
    for p in sorted(set().union(*(_prime_factors(a) for a in weights))):
        idx = [i for i, a in enumerate(weights) if a % p == 0]
        for size in range(1, len(idx) + 1):
            found.update(combinations(idx, size))
    return sorted(found, key=lambda s: (len(s), s))


def _with_orbit(rep: StratumReport, orbit: int) -> StratumReport:
    return StratumReport(rep.subset, rep.r, rep.contained_in_x, rep.transverse,
                         rep.eliminated, rep.meets_x, orbit)


def classify_hypersurface(w: WeightSystem, basis: MonomialBasis | None = None,
                          cap: int | None = DEFAULT_R_CAP) -> SingularityVerdict:
    """Canonical/terminal verdict for a general quasismooth member of the family.

    Every stratum the hypersurface meets contributes its transverse type; zero
    residues and any common factor with ``r`` are removed before Reid-Tai.
    """
    if basis is None:
        basis = enumerate_monomials(w)
    reports = strata_singularities(w, basis, representatives_only=basis.is_symmetric())
    canonical = terminal = True
    witnesses = []
    undecided = []
    seen = {}
    for rep in reports:
        if not rep.meets_x:
            continue
        t = rep.transverse.reduced()
        if t.r == 1:
            continue
        if t not in seen:
            try:
                seen[t] = (reid_tai_failure(t, CANONICAL, cap), reid_tai_failure(t, TERMINAL, cap))
            except CapExceededError:
                seen[t] = None
        result = seen[t]
        if result is None:
            undecided.append((rep.subset, t))
            continue
        fail_c, fail_t = result
        if fail_c is not None:
            canonical = False
            witnesses.append((rep.subset, t, fail_c, CANONICAL))
        if fail_t is not None:
            terminal = False
            witnesses.append((rep.subset, t, fail_t, TERMINAL))
    if undecided:
        canonical = canonical if not canonical else None
        terminal = terminal if not terminal else None
    return SingularityVerdict(True, canonical, terminal, witnesses, undecided)
