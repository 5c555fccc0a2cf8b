import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wphyper.delsarte import derive_weights, loop_matrix, main_family_type
from wphyper.singularities import (CANONICAL, TERMINAL, CapExceededError, CyclicQuotientType,
                                   NotQuasismoothError, classify_hypersurface, eqii_failing_rotations,
                                   eqii_min, eqii_pointwise_holds, eqii_sufficient, figure_rows,
                                   loop_betas, loop_coordinate_types, reid_tai, reid_tai_failure,
                                   reid_tai_sums, strata_singularities)
from wphyper.wps import MonomialBasis, WeightSystem, enumerate_monomials

import oracles

X23 = WeightSystem((9, 9, 8, 8, 7, 7, 5, 5), 23)
X12 = WeightSystem((4, 4, 4, 4, 3, 3, 3, 3, 3), 12)


def loop_basis(exps):
    b = loop_matrix(exps)
    der = derive_weights(b)
    return der.weight_system(), MonomialBasis.from_monomials(der.weights, der.degree, b.rows)


def test_type_normalises_residues():
    t = CyclicQuotientType(5, (7, -1, 5))
    assert t.c == (2, 4, 0)
    assert t.without_zeros().c == (2, 4)
    assert CyclicQuotientType(6, (2, 4, 0)).reduced() == CyclicQuotientType(3, (1, 2))
    with pytest.raises(ValueError):
        CyclicQuotientType(0, (1,))


def test_reid_tai_examples():
    half = CyclicQuotientType(2, (1, 1))
    assert reid_tai(half, CANONICAL)
    assert not reid_tai(half, TERMINAL)
    assert reid_tai_failure(half, TERMINAL) == 1
    t9 = CyclicQuotientType(9, (8, 8, 7, 7, 5))
    assert reid_tai(t9, TERMINAL)
    sums = reid_tai_sums(t9)
    assert min(sums) == Fraction(10, 9) and sums.index(min(sums)) + 1 == 8
    t4 = CyclicQuotientType(4, (3, 3, 3, 3, 3))
    assert reid_tai(t4, TERMINAL)
    sums = reid_tai_sums(t4)
    assert min(sums) == Fraction(5, 4) and sums.index(min(sums)) + 1 == 3
    assert reid_tai(CyclicQuotientType(1, ()), TERMINAL)


def test_reid_tai_bad_mode():
    with pytest.raises(ValueError):
        reid_tai(CyclicQuotientType(3, (1, 2)), "klt")


def test_reid_tai_against_oracle_500_random_types():
    rng = random.Random(20261014)
    for _ in range(500):
        r = rng.randint(1, 200)
        c = tuple(rng.randrange(r) for _ in range(rng.randint(1, 6)))
        t = CyclicQuotientType(r, c)
        for mode in (CANONICAL, TERMINAL):
            assert reid_tai(t, mode) == oracles.reid_tai(r, c, mode), (r, c, mode)


def test_reid_tai_vectorised_path_matches_scalar():
    rng = random.Random(5)
    for _ in range(40):
        r = rng.randint(65, 3000)
        c = tuple(rng.randrange(1, r) for _ in range(rng.randint(2, 6)))
        t = CyclicQuotientType(r, c)
        for mode in (CANONICAL, TERMINAL):
            expected = None
            for i in range(1, r):
                total = sum(i * x % r for x in c)
                if total < r or (mode == TERMINAL and total == r):
                    expected = i
                    break
            assert reid_tai_failure(t, mode) == expected


def test_reid_tai_cap():
    with pytest.raises(CapExceededError):
        reid_tai(CyclicQuotientType(10 ** 6 + 1, (1, 1, 1)))
    assert reid_tai(CyclicQuotientType(10 ** 6 + 1, (1, 1, 1)), cap=None) is False


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60).flatmap(
    lambda r: st.tuples(st.just(r), st.lists(st.integers(1, r - 1), min_size=1, max_size=5),
                        st.integers(1, r - 1))))
def test_reid_tai_unit_invariance(args):
    r, c, u = args
    if math.gcd(u, r) != 1 or any(math.gcd(x, r) != 1 for x in c):
        return
    t = CyclicQuotientType(r, tuple(c))
    s = CyclicQuotientType(r, tuple(u * x for x in c))
    for mode in (CANONICAL, TERMINAL):
        assert reid_tai(t, mode) == reid_tai(s, mode)


def test_loop_betas():
    assert loop_betas([2] * 7)[:5] == (-1, 3, -5, 11, -21)
    assert loop_betas([2, 2, 3]) == (-1,)
    rng = random.Random(1)
    for _ in range(20):
        exps = [rng.randint(2, 6) for _ in range(rng.randint(3, 8))]
        k = rng.randrange(len(exps))
        betas = loop_betas(exps, k)
        assert len(betas) == len(exps) - 2
        assert betas[0] == 1 - exps[(k + 1) % len(exps)]


def test_loop_betas_alternating_formula():
    exps = [3, 4, 2, 5, 2, 3]
    b = exps
    for j in range(2, len(b)):
        expected = sum((-1) ** m * math.prod(b[j - m:j]) for m in range(j))
        assert loop_betas(exps)[j - 2] == expected


def test_loop_coordinate_types_cross_check():
    # at the point of x0 on the [2,2,3] loop the transverse coordinate is x2
    types = loop_coordinate_types([2, 2, 3])
    assert types[0] == CyclicQuotientType(4, (-1,))
    # direct computation: 1/4(a_2) with a_2 = 3, times the unit 1 = -(-1)
    assert types[0].c == (3 % 4,)
    w, basis = loop_basis([2, 2, 3])
    assert all(t.r == a for t, a in zip(types, w.weights))


def test_main_family_coordinate_types():
    assert all(reid_tai(t, TERMINAL) for t in loop_coordinate_types(main_family_type(7)))
    assert not all(reid_tai(t, TERMINAL) for t in loop_coordinate_types(main_family_type(6)))


def test_eqii_min_figure_example():
    m = eqii_min((-1, 3, -5, 11, -21))
    assert m.infimum == Fraction(22, 21)
    assert m.infimum > 1
    assert m.attained and m.argmin == Fraction(8, 21)


def test_eqii_min_trivial_examples():
    m = eqii_min((-1,))
    assert m.infimum == 0 and not m.attained
    m = eqii_min((1, -1))
    assert m.infimum == 1 and m.attained
    with pytest.raises(ValueError):
        eqii_min((0, 0))
    with pytest.raises(ValueError):
        eqii_min(())


def _brute_min(betas):
    # direct evaluation at breakpoints, plus linear extrapolation to the ends of
    # each open piece from two interior points
    f = lambda x: sum(b * x - math.floor(b * x) for b in betas)
    pts = sorted({Fraction(k, abs(b)) for b in betas if b for k in range(1, abs(b))})
    nodes = [Fraction(0)] + pts + [Fraction(1)]
    vals = [(f(x), True) for x in pts]
    for lo, hi in zip(nodes, nodes[1:]):
        a, c = lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3
        slope = (f(c) - f(a)) / (c - a)
        vals += [(f(a) - slope * (a - lo), slope == 0), (f(a) + slope * (hi - a), slope == 0)]
    best = min(v for v, _ in vals)
    return best, any(att for v, att in vals if v == best)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-30, 30).filter(bool), min_size=1, max_size=6))
def test_eqii_min_matches_brute_force(betas):
    m = eqii_min(betas)
    assert (m.infimum, m.attained) == _brute_min(betas)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30).filter(bool), min_size=2, max_size=6))
def test_eqii_prefix_is_conservative(betas):
    assert eqii_min(betas, prefix=len(betas) - 1).infimum <= eqii_min(betas).infimum


def test_eqii_sufficiency_implies_reid_tai():
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        exps = [rng.randint(2, 3) for _ in range(rng.randint(6, 9))]
        types = loop_coordinate_types(exps)
        for k, t in enumerate(types):
            betas = loop_betas(exps, k)
            # r * f(i/r) equals the integer Reid-Tai sum at i
            scaled = [sum(b * i % t.r for b in betas) for i in range(1, t.r)]
            assert scaled == [sum(i * c % t.r for c in t.c) for i in range(1, t.r)]
            if eqii_pointwise_holds(betas, TERMINAL):
                assert reid_tai(t, TERMINAL)
                checked += 1
    assert checked > 0


def test_eqii_sufficient_main_family():
    assert not eqii_sufficient(main_family_type(7))
    assert eqii_failing_rotations(main_family_type(7)) == [7]
    assert eqii_sufficient(main_family_type(8), prefix=8)
    assert eqii_sufficient(main_family_type(8))


def test_eqii_five_twos():
    rng = random.Random(2)
    for _ in range(20):
        rest = [rng.randint(2, 9) for _ in range(rng.randint(1, 4))]
        exps = [7] + [2] * 5 + rest
        # the point x0 sees the next five exponents b_1..b_5 = 2
        assert eqii_pointwise_holds(loop_betas(exps, 0), TERMINAL, prefix=5)


def test_eqii_rejects_small_exponents():
    with pytest.raises(ValueError):
        eqii_sufficient([1, 2, 2])


def test_figure_rows():
    rows = figure_rows((-1, 3, -5, 11, -21))
    xs = [x for x, _, _ in rows]
    assert xs == sorted(xs) and 0 < xs[0] and xs[-1] < 1
    assert (Fraction(1, 2), Fraction(5, 2), "midpoint") in rows
    assert all(f > 1 for _, f, _ in rows)
    assert min(f for _, f, _ in rows) == Fraction(22, 21)


def test_strata_x23():
    reports = {r.subset: r for r in strata_singularities(X23, enumerate_monomials(X23))}
    s01 = reports[(0, 1)]
    assert s01.r == 9 and s01.contained_in_x
    assert s01.eliminated == 6
    assert s01.transverse == CyclicQuotientType(9, (8, 8, 7, 7, 5))


def test_strata_x12():
    reports = {r.subset: r for r in strata_singularities(X12, enumerate_monomials(X12))}
    s = reports[(0, 1, 2, 3)]
    assert s.r == 4 and not s.contained_in_x
    assert s.transverse == CyclicQuotientType(4, (3, 3, 3, 3, 3))


def test_strata_smooth_ambient():
    w = WeightSystem((1, 1, 1, 1), 3)
    assert strata_singularities(w, enumerate_monomials(w)) == []


def test_strata_not_quasismooth():
    w = WeightSystem((2, 2, 3), 7)
    with pytest.raises(NotQuasismoothError):
        strata_singularities(w, enumerate_monomials(w))


def test_representatives_match_full_enumeration():
    full = classify_hypersurface(X23, enumerate_monomials(X23))
    reps = strata_singularities(X23, enumerate_monomials(X23), representatives_only=True)
    every = strata_singularities(X23, enumerate_monomials(X23))
    assert sum(r.orbit_size for r in reps) == len(every)
    assert full.terminal


def test_classify_examples():
    assert classify_hypersurface(X23).terminal is True
    assert classify_hypersurface(X12).terminal is True
    w6, b6 = loop_basis(main_family_type(6))
    v6 = classify_hypersurface(w6, b6)
    assert v6.terminal is False and v6.witnesses
    w7, b7 = loop_basis(main_family_type(7))
    assert classify_hypersurface(w7, b7).terminal is True
    for n in (3, 4, 5):
        w, b = loop_basis(main_family_type(n))
        assert classify_hypersurface(w, b).klt is True


def test_classify_terminal_implies_canonical():
    rng = random.Random(9)
    for _ in range(40):
        exps = [rng.randint(2, 4) for _ in range(rng.randint(3, 6))]
        w, b = loop_basis(exps)
        v = classify_hypersurface(w, b)
        assert v.klt
        if v.terminal:
            assert v.canonical


def test_classify_cap_gives_undecided():
    w, b = loop_basis(main_family_type(7))
    v = classify_hypersurface(w, b, cap=100)
    assert v.undecided and v.terminal is None
