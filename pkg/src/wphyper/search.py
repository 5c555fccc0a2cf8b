"""Parallel enumeration of loop and two-weight families.

Candidates are generated in a fixed lexicographic order and each one is
checked by a pure function, so the hits come out in the same order whatever
the number of worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, product
from typing import Iterable, Iterator

from .delsarte import DegenerateWeightsError, derive_weights, loop_matrix
from .exactmath import SingularMatrixError
from .rationality import FamilyReport, certify, delsarte_certificate, revalidate, two_weight_detect
from .singularities import (TERMINAL, SingularityVerdict,
                            classify_hypersurface, eqii_sufficient, loop_betas, rotate)
from .wps import (MonomialBasis, WeightSystem, degree_criterion, enumerate_monomials,
                  is_fano, is_well_formed)

FILTERS = frozenset({"well_formed", "fano", "fails_degree_criterion", "klt",
                     "canonical", "terminal", "rational"})
KINDS = ("loop", "two-weight")

# accept-fast path is skipped when the piecewise-linear analysis would be large
EQII_BREAKPOINT_BUDGET = 4000


class SearchSpecError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    """Declarative description of a search.

    Loop searches use ``dims`` and ``exponents`` (inclusive ranges, exponents
    at least 2).  Two-weight searches use ``a_range``, ``c_range``,
    ``k_range`` and ``l_range`` and only visit ``a < c``.
    """

    kind: str
    filters: frozenset = frozenset()
    dims: tuple[int, int] = (3, 3)
    exponents: tuple[int, int] = (2, 3)
    a_range: tuple[int, int] = (1, 6)
    c_range: tuple[int, int] = (1, 6)
    k_range: tuple[int, int] = (2, 8)
    l_range: tuple[int, int] = (2, 8)
    workers: int = 1
    limit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "filters", frozenset(self.filters))
        if self.kind not in KINDS:
            raise SearchSpecError(f"kind must be one of {KINDS}, not {self.kind!r}")
        unknown = self.filters - FILTERS
        if unknown:
            raise SearchSpecError(f"unknown filters {sorted(unknown)}")
        ranges = {"dims": self.dims, "exponents": self.exponents, "a_range": self.a_range,
                  "c_range": self.c_range, "k_range": self.k_range, "l_range": self.l_range}
        for name, rng in ranges.items():
            if len(rng) != 2 or any(not isinstance(x, int) or x < 1 for x in rng):
                raise SearchSpecError(f"{name} must be a pair of positive integers, got {rng}")
        if self.workers < 1:
            raise SearchSpecError("workers must be positive")
        if self.limit is not None and self.limit < 0:
            raise SearchSpecError("limit must be non-negative")


@dataclass
class SearchHit:
    params: tuple[int, ...]
    report: FamilyReport
    via: str = "reid-tai"

    @property
    def weight_system(self) -> WeightSystem:
        return WeightSystem(self.report.weights, self.report.degree)


@dataclass
class SearchResult:
    spec: SearchSpec
    rows: list[SearchHit] = field(default_factory=list)
    candidates: int = 0
    truncated: bool = False

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


# -- candidate streams -------------------------------------------------------

def _is_necklace(t) -> bool:
    return all(t <= rotate(t, k) for k in range(1, len(t)))


def loop_candidates(spec: SearchSpec) -> Iterator[tuple[int, ...]]:
    """Loop types up to rotation, by dimension then lexicographically."""
    lo_e, hi_e = max(spec.exponents[0], 2), spec.exponents[1]
    for n in range(spec.dims[0], spec.dims[1] + 1):
        for t in product(range(lo_e, hi_e + 1), repeat=n + 2):
            if _is_necklace(t):
                yield t


def two_weight_candidates(spec: SearchSpec) -> Iterator[tuple[int, int, int, int]]:
    for a in range(spec.a_range[0], spec.a_range[1] + 1):
        for c in range(max(a + 1, spec.c_range[0]), spec.c_range[1] + 1):
            if math.gcd(a, c) != 1:
                continue
            for k in range(max(2, spec.k_range[0]), spec.k_range[1] + 1):
                for l in range(max(2, spec.l_range[0]), spec.l_range[1] + 1):
                    yield a, c, k, l


# -- per-candidate checks ------------------------------------------------------

def _cheap_filters(w: WeightSystem, filters) -> bool:
    if "well_formed" in filters and not is_well_formed(w):
        return False
    if "fails_degree_criterion" in filters and degree_criterion(w):
        return False
    if "fano" in filters and not is_fano(w):
        return False
    return True


def _singularity_filters_pass(verdict: SingularityVerdict, filters) -> bool:
    if "terminal" in filters and verdict.terminal is not True:
        return False
    if "canonical" in filters and verdict.canonical is not True:
        return False
    return True


def _eqii_accepts(t, w) -> bool:
    if not is_well_formed(w):
        return False
    for k in range(len(t)):
        # upper bound on the number of breakpoints
        if sum(abs(b) - 1 for b in loop_betas(t, k)) > EQII_BREAKPOINT_BUDGET:
            return False
    return eqii_sufficient(t, TERMINAL)


def _klt(report: FamilyReport) -> bool:
    # quotient singularities in characteristic 0 are klt
    return report.quasismooth != "refuted" and report.singularities is not None


def check_loop(t: tuple[int, ...], filters) -> SearchHit | None:
    b = loop_matrix(t)
    try:
        der = derive_weights(b)
    except (SingularMatrixError, DegenerateWeightsError):
        return None
    w = der.weight_system()
    if not _cheap_filters(w, filters):
        return None
    basis = MonomialBasis.from_monomials(w.weights, w.degree, b.rows)
    via = "reid-tai"
    verdict = None
    if filters & {"canonical", "terminal"}:
        if _eqii_accepts(t, w):
            # sufficient test passed: accept without the full computation
            verdict = SingularityVerdict(True, True, True)
            via = "eq-ii"
        else:
            verdict = classify_hypersurface(w, basis)
            if not _singularity_filters_pass(verdict, filters):
                return None
    if "rational" in filters and delsarte_certificate(w, b, basis) is None:
        return None
    report = certify(w, basis, delsarte=b, singularities=verdict)
    if "klt" in filters and not _klt(report):
        return None
    return SearchHit(t, report, via)


def check_two_weight(params: tuple[int, int, int, int], filters) -> SearchHit | None:
    a, c, k, l = params
    w = WeightSystem((c,) * k + (a,) * l, a * c)
    if not _cheap_filters(w, filters):
        return None
    basis = enumerate_monomials(w)
    if "rational" in filters and two_weight_detect(w, basis) is None:
        return None
    verdict = None
    if filters & {"canonical", "terminal"}:
        verdict = classify_hypersurface(w, basis)
        if not _singularity_filters_pass(verdict, filters):
            return None
    report = certify(w, basis, singularities=verdict)
    if "klt" in filters and not _klt(report):
        return None
    return SearchHit(params, report)


def _check(job):
    kind, params, filters = job
    if kind == "loop":
        return check_loop(params, filters)
    return check_two_weight(params, filters)


# -- driver ----------------------------------------------------------------

def _run(spec: SearchSpec, candidates: Iterable) -> SearchResult:
    result = SearchResult(spec)
    if spec.limit == 0:
        return result
    jobs = ((spec.kind, p, spec.filters) for p in candidates)
    if spec.workers == 1:
        outcomes = map(_check, jobs)
        _collect(result, outcomes)
        return result
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        # chunks are submitted ahead and consumed in candidate order
        outcomes = _ordered_parallel(pool, jobs, spec.workers * 4)
        _collect(result, outcomes)
        pool.shutdown(cancel_futures=True)
    return result


def _ordered_parallel(pool, jobs, window):
    pending = []
    it = iter(jobs)
    for job in islice(it, window):
        pending.append(pool.submit(_check, job))
    while pending:
        fut = pending.pop(0)
        nxt = next(it, None)
        if nxt is not None:
            pending.append(pool.submit(_check, nxt))
        yield fut.result()


def _collect(result: SearchResult, outcomes):
    for hit in outcomes:
        result.candidates += 1
        if hit is None:
            continue
        result.rows.append(hit)
        if result.spec.limit is not None and len(result.rows) >= result.spec.limit:
            result.truncated = True
            break


def search_loops(spec: SearchSpec) -> SearchResult:
    if spec.kind != "loop":
        raise SearchSpecError("search_loops needs a loop spec")
    return _run(spec, loop_candidates(spec))


def search_two_weight(spec: SearchSpec) -> SearchResult:
    if spec.kind != "two-weight":
        raise SearchSpecError("search_two_weight needs a two-weight spec")
    return _run(spec, two_weight_candidates(spec))


def run_search(spec: SearchSpec) -> SearchResult:
    return search_loops(spec) if spec.kind == "loop" else search_two_weight(spec)


def audit(result: SearchResult) -> list[str]:
    """Re-validate every certificate of every hit; returns the problems found."""
    problems = []
    for hit in result.rows:
        w = hit.weight_system
        if hit.params and result.spec.kind == "loop":
            basis = MonomialBasis.from_monomials(w.weights, w.degree, loop_matrix(hit.params).rows)
        else:
            basis = enumerate_monomials(w)
        for cert in hit.report.certificates:
            if not revalidate(cert, w, basis, hit.report.base_field):
                problems.append(f"{hit.params}: {cert.kind} does not re-validate")
        v = hit.report.singularities
        if v is not None and v.terminal and not v.canonical:
            problems.append(f"{hit.params}: terminal but not canonical")
    return problems
