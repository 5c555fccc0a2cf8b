"""Family-level rationality certificates and the aggregated family report.

Every certificate is checked against the full list of monomials allowed in the
family, so it applies to each member whose equation uses only those monomials.
Conditions on individual coefficients (quasismoothness, irreducibility) are
recorded as assumptions and never verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import exactmath as em
from .delsarte import DegenerateWeightsError, DelsarteMatrix, derive_weights
from .singularities import NotQuasismoothError, SingularityVerdict, classify_hypersurface
from .wps import (MonomialBasis, WeightSystem, count_monomials, degree_criterion,
                  dim_aut, enumerate_monomials, is_fano, is_well_formed,
                  is_well_formed_set, moduli_lower_bound)


@dataclass(frozen=True)
class Field:
    """Base field description; only the two properties the criteria care about."""

    characteristic: int = 0
    algebraically_closed: bool = True

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip().lower()
        if text in ("closed", "c", "complex"):
            return cls(0, True)
        if text in ("nonclosed", "any"):
            return cls(0, False)
        if text.startswith("char="):
            p = int(text[5:])
            if p < 0 or (p > 1 and any(p % q == 0 for q in range(2, math.isqrt(p) + 1))) or p == 1:
                raise ValueError(f"characteristic must be 0 or a prime, got {p}")
            return cls(p, True)
        raise ValueError(f"unknown field {text!r}")

    def __str__(self):
        base = "closed" if self.algebraically_closed else "nonclosed"
        return base if self.characteristic == 0 else f"{base},char={self.characteristic}"


@dataclass(frozen=True)
class Certificate:
    """Base class; ``assumptions`` lists what the certificate takes on faith."""

    @property
    def kind(self) -> str:
        return type(self).__name__

    def witness(self) -> dict:
        return {}

    assumptions: tuple[str, ...] = field(default=("quasismooth member", "irreducible"),
                                         kw_only=True)


@dataclass(frozen=True)
class LinearCone(Certificate):
    variable: int

    def witness(self):
        return {"variable": self.variable}


@dataclass(frozen=True)
class LowDegree(Certificate):
    case: int
    witness_indices: tuple[int, ...]
    witness_weights: tuple[int, ...]

    def witness(self):
        return {"case": self.case, "indices": list(self.witness_indices),
                "weights": list(self.witness_weights)}


@dataclass(frozen=True)
class DelsarteDet(Certificate):
    degree: int
    abs_det: int
    rows: tuple[tuple[int, ...], ...]
    scope: str = "family"

    def witness(self):
        return {"d": self.degree, "absDet": self.abs_det,
                "matrix": [list(r) for r in self.rows], "scope": self.scope}


@dataclass(frozen=True)
class QuadricBundle(Certificate):
    subset: tuple[int, ...]

    def witness(self):
        return {"subset": list(self.subset)}


@dataclass(frozen=True)
class TwoWeight(Certificate):
    a: int
    c: int
    k: int
    l: int

    def witness(self):
        return {"a": self.a, "c": self.c, "k": self.k, "l": self.l}


# -- detectors ---------------------------------------------------------------

def low_degree(w: WeightSystem, basis: MonomialBasis | None = None,
               base_field: Field = Field()) -> Certificate | None:
    """Linear cone, or degree small compared to the largest weight."""
    if not is_well_formed(w):
        return None
    if basis is None:
        basis = enumerate_monomials(w)
    n = w.nvars
    for i in range(n):
        unit = tuple(int(j == i) for j in range(n))
        if unit in basis:
            return LinearCone(i)
    top = max(w.weights)
    tops = tuple(i for i, a in enumerate(w.weights) if a == top)
    if w.degree < 2 * top:
        return LowDegree(1, tops[:1], (top,))
    if w.degree == 2 * top and len(tops) >= 2 and base_field.algebraically_closed:
        return LowDegree(2, tops, (top,) * len(tops),
                         assumptions=("quasismooth member", "irreducible",
                                      "rational point on the stratum (closed field)"))
    return None


def _s_degree(m, subset):
    return sum(m[i] for i in subset)


def quadric_bundle_ok(w: WeightSystem, basis: MonomialBasis, subset: Sequence[int]) -> bool:
    subset = tuple(subset)
    if not 2 <= len(subset) <= w.dimension:
        return False
    if math.gcd(*(w.weights[i] for i in subset)) != 1:
        return False
    rest = [a for i, a in enumerate(w.weights) if i not in subset]
    if not is_well_formed_set(rest):
        return False
    degrees = [_s_degree(m, subset) for m in basis]
    return bool(degrees) and all(x in (1, 2) for x in degrees) and 1 in degrees


def quadric_bundle_split(w: WeightSystem, basis: MonomialBasis | None = None
                         ) -> tuple[int, ...] | None:
    """First subset (by size, then lexicographically) giving a quadric bundle."""
    if basis is None:
        basis = enumerate_monomials(w)
    mons = list(basis)
    n = w.nvars
    # the S-degree of a monomial whose exponents are all >= 3 is 0 or >= 3
    if any(all(e == 0 or e >= 3 for e in m) for m in mons):
        return None
    for size in range(2, w.dimension + 1):
        for subset in combinations(range(n), size):
            ok = True
            linear = False
            for m in mons:
                s = _s_degree(m, subset)
                if s == 1:
                    linear = True
                elif s != 2:
                    ok = False
                    break
            if ok and linear and quadric_bundle_ok(w, basis, subset):
                return subset
    return None


def two_weight_detect(w: WeightSystem, basis: MonomialBasis | None = None
                      ) -> TwoWeight | None:
    """``X_{ac}`` in ``P(c^(k), a^(l))`` with ``gcd(a, c) = 1`` and ``a < c``.

    Both blocks must have at least two variables, otherwise the ambient space
    is not well-formed.
    """
    values = sorted(set(w.weights))
    if len(values) != 2:
        return None
    a, c = values
    k = w.weights.count(c)
    l = w.weights.count(a)
    if math.gcd(a, c) != 1 or k < 2 or l < 2 or w.degree != a * c:
        return None
    if basis is None:
        basis = enumerate_monomials(w)
    c_block = [i for i, x in enumerate(w.weights) if x == c]
    a_block = [i for i, x in enumerate(w.weights) if x == a]
    uses_c = any(any(m[i] for i in c_block) for m in basis)
    uses_a = any(any(m[i] for i in a_block) for m in basis)
    if not (uses_c and uses_a):
        return None
    return TwoWeight(a, c, k, l)


def delsarte_certificate(w: WeightSystem, b, basis: MonomialBasis | None = None
                         ) -> DelsarteDet | None:
    """Determinant certificate for the Delsarte member with exponent matrix ``b``."""
    b = b if isinstance(b, DelsarteMatrix) else DelsarteMatrix(b)
    if b.size != w.nvars or not is_well_formed(w):
        return None
    if any(w.weighted_degree(row) != w.degree for row in b.rows):
        return None
    try:
        der = derive_weights(b)
    except (em.SingularMatrixError, DegenerateWeightsError):
        return None
    abs_det = abs(b.det())
    if der.degree != abs_det:
        return None
    scope = "member"
    if basis is not None and set(basis.monomials) == set(b.rows):
        scope = "family"
    return DelsarteDet(der.degree, abs_det, b.rows, scope)


def square_basis_matrix(basis: MonomialBasis) -> DelsarteMatrix | None:
    if len(basis) != len(basis.weights) or not basis.monomials:
        return None
    rows = [list(m) for m in basis]
    if em.det(rows) == 0:
        return None
    return DelsarteMatrix(rows)


def revalidate(cert: Certificate, w: WeightSystem, basis: MonomialBasis,
               base_field: Field = Field()) -> bool:
    """Replay the defining condition of ``cert`` against the family."""
    if isinstance(cert, LinearCone):
        unit = tuple(int(j == cert.variable) for j in range(w.nvars))
        return is_well_formed(w) and unit in basis
    if isinstance(cert, LowDegree):
        top = max(w.weights)
        if not is_well_formed(w) or any(w.weights[i] != top for i in cert.witness_indices):
            return False
        if cert.case == 1:
            return w.degree < 2 * top
        return (w.degree == 2 * top and len(cert.witness_indices) >= 2
                and base_field.algebraically_closed)
    if isinstance(cert, DelsarteDet):
        again = delsarte_certificate(w, cert.rows, basis)
        return again is not None and again.degree == cert.degree == cert.abs_det
    if isinstance(cert, QuadricBundle):
        return quadric_bundle_ok(w, basis, cert.subset)
    if isinstance(cert, TwoWeight):
        return two_weight_detect(w, basis) == cert
    return False


# -- quasismoothness ----------------------------------------------------------

def _loop_and_fermat_obstructions(rows) -> list[int] | None:
    """Obstructions if ``rows`` is a disjoint sum of loops and Fermat terms.

    Each row must read ``x_i^b`` or ``x_i^b x_j`` (``b >= 2``) with distinct
    ``i``; following ``i -> j`` must close up into cycles.  Chains are not
    recognised and give None.
    """
    n = len(rows)
    power = {}
    succ = {}
    for row in rows:
        support = [j for j, e in enumerate(row) if e]
        if len(support) == 1:
            i, j = support[0], None
        elif len(support) == 2:
            x, y = support
            if row[x] == 1 and row[y] >= 2:
                i, j = y, x
            elif row[y] == 1 and row[x] >= 2:
                i, j = x, y
            else:
                return None
        else:
            return None
        if i in power:
            return None
        power[i] = row[i]
        succ[i] = j
    if len(power) != n:
        return None
    out = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        if succ[start] is None:
            seen.add(start)
            out.append(power[start])
            continue
        cycle = [start]
        cur = succ[start]
        while cur is not None and cur != start and cur not in cycle:
            cycle.append(cur)
            cur = succ[cur]
        if cur != start:
            return None
        seen.update(cycle)
        out.append(math.prod(power[i] for i in cycle) - (-1) ** len(cycle))
    return out


def quasismooth_status(w: WeightSystem, basis: MonomialBasis,
                       base_field: Field = Field()) -> str:
    """``certified``, ``assumed`` (passes the stratum test) or ``refuted``."""
    from .singularities import strata_singularities
    try:
        strata_singularities(w, basis, representatives_only=basis.is_symmetric())
    except NotQuasismoothError:
        return "refuted"
    if len(basis) == w.nvars:
        obstructions = _loop_and_fermat_obstructions(list(basis))
        if obstructions is not None:
            p = base_field.characteristic
            if all(x != 0 and (p == 0 or x % p) for x in obstructions):
                return "certified"
            return "refuted"
    return "assumed"


# -- aggregate ----------------------------------------------------------------

@dataclass
class FamilyReport:
    weights: tuple[int, ...]
    degree: int
    base_field: Field
    well_formed: bool
    fano: bool
    degree_criterion: bool
    monomial_count: int
    basis_size: int
    basis_complete: bool
    dim_aut: int | None
    moduli_lower_bound: int | None
    quasismooth: str
    singularities: SingularityVerdict | None
    certificates: list[Certificate]
    answers_question: bool
    notes: list[str] = field(default_factory=list)

    @property
    def rational(self) -> bool:
        return any(getattr(c, "scope", "family") == "family" for c in self.certificates)

    @property
    def dimension(self) -> int:
        return len(self.weights) - 2


def certify(w: WeightSystem, basis: MonomialBasis | None = None, delsarte=None,
            base_field: Field = Field(), with_moduli: bool = True,
            singularities: SingularityVerdict | None = None) -> FamilyReport:
    """Run every criterion on the family and collect the results."""
    full_count = count_monomials(w.weights, w.degree)
    if basis is None:
        basis = enumerate_monomials(w)
    notes = []
    wf = is_well_formed(w)
    certs: list[Certificate] = []

    ld = low_degree(w, basis, base_field)
    if ld is not None:
        certs.append(ld)
    if delsarte is None:
        delsarte = square_basis_matrix(basis)
    if delsarte is not None:
        dc = delsarte_certificate(w, delsarte, basis)
        if dc is not None:
            certs.append(dc)
    qb = quadric_bundle_split(w, basis)
    if qb is not None:
        certs.append(QuadricBundle(qb))
    tw = two_weight_detect(w, basis)
    if tw is not None:
        certs.append(tw)

    qs = quasismooth_status(w, basis, base_field)
    verdict = singularities
    if base_field.characteristic != 0:
        verdict = None
        notes.append("singularity classes are only computed in characteristic 0")
    elif verdict is None and qs != "refuted":
        verdict = classify_hypersurface(w, basis)
    if not wf:
        notes.append("ambient space is not well-formed")
    notes.append("well-formedness of the hypersurface itself is not checked")
    if with_moduli:
        notes.append("moduli bound is heuristic: monomials of degree d minus 1 minus dim Aut, "
                     "with dim Aut from an externally sourced formula")

    dc_flag = degree_criterion(w)
    complete = len(basis) == full_count
    answers = bool(
        wf and complete and qs in ("certified", "assumed")
        and is_fano(w) and not dc_flag
        and verdict is not None and verdict.terminal
        and any(getattr(c, "scope", "family") == "family" for c in certs)
    )
    return FamilyReport(
        weights=w.weights,
        degree=w.degree,
        base_field=base_field,
        well_formed=wf,
        fano=is_fano(w),
        degree_criterion=dc_flag,
        monomial_count=full_count,
        basis_size=len(basis),
        basis_complete=complete,
        dim_aut=dim_aut(w) if with_moduli else None,
        moduli_lower_bound=moduli_lower_bound(w) if with_moduli else None,
        quasismooth=qs,
        singularities=verdict,
        certificates=certs,
        answers_question=answers,
        notes=notes,
    )
