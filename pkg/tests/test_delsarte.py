import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wphyper.delsarte import (DegenerateWeightsError, DelsarteMatrix, acts_by_common_scalar,
                              delsarte_rational, derive_weights, diagonal_aut,
                              lattice_order_check, loop_det, loop_matrix,
                              loop_quasismooth, loop_quasismooth_obstruction, main_family,
                              main_family_closed_form, main_family_type)
from wphyper.exactmath import SingularMatrixError
from wphyper.wps import enumerate_monomials

import oracles

FERMAT = [[3, 0, 0], [0, 3, 0], [0, 0, 3]]

# weights and degrees below were produced by the sympy homogeneity solve in
# tests/oracles.py and frozen here
MAIN_FAMILY = {
    1: ((4, 5, 3), 13),
    6: ((128, 127, 129, 125, 133, 117, 149, 85), 383),
    7: ((256, 257, 255, 259, 251, 267, 235, 299, 171), 769),
}

# x0^2 x7 + x7^10 x1 + x1^2 x6 + x6^8 x2 + x2^2 x5 + x5^3 x3 + x3^2 x4 + x4^2 x0
X1097_LOOP = [
    (2, 0, 0, 0, 0, 0, 0, 1),
    (0, 1, 0, 0, 0, 0, 0, 10),
    (0, 2, 0, 0, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 0, 8, 0),
    (0, 0, 2, 0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0, 3, 0, 0),
    (0, 0, 0, 2, 1, 0, 0, 0),
    (1, 0, 0, 0, 2, 0, 0, 0),
]
X1097_WEIGHTS = (519, 507, 433, 404, 289, 231, 83, 59)


def test_derive_weights_examples():
    der = derive_weights(loop_matrix([2, 2, 3]))
    assert der.weights == (4, 5, 3) and der.degree == 13
    assert der.q == (Fraction(4, 13), Fraction(5, 13), Fraction(3, 13))
    assert derive_weights(FERMAT).weights == (1, 1, 1)
    assert derive_weights(FERMAT).degree == 3


@pytest.mark.parametrize("n", sorted(MAIN_FAMILY))
def test_main_family_frozen_values(n):
    der = main_family(n)
    assert (der.weights, der.degree) == MAIN_FAMILY[n]


@pytest.mark.parametrize("n", [1, 2, 5, 7])
def test_main_family_matches_sympy_solve(n):
    rows = loop_matrix(main_family_type(n)).rows
    der = main_family(n)
    assert (der.weights, der.degree) == oracles.homogeneous_solution(rows)


@pytest.mark.parametrize("n", range(1, 16))
def test_main_family_closed_form(n):
    der = main_family(n)
    weights, degree = main_family_closed_form(n)
    assert der.weights == weights
    assert der.degree == degree == 3 * 2 ** (n + 1) + (-1) ** (n + 1)


def test_derive_weights_errors():
    with pytest.raises(SingularMatrixError):
        derive_weights([[1, 1], [1, 1]])
    with pytest.raises(DegenerateWeightsError):
        derive_weights([[1, 3, 0], [0, 1, 0], [0, 0, 1]])


def square_nonneg(max_n=4):
    return st.integers(2, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n),
                           min_size=n, max_size=n))


@settings(max_examples=200, deadline=None)
@given(square_nonneg())
def test_derivation_invariants(rows):
    if oracles.cofactor_det(rows) == 0:
        return
    try:
        der = derive_weights(rows)
    except DegenerateWeightsError:
        return
    assert all(sum(b * q for b, q in zip(row, der.q)) == 1 for row in rows)
    assert all(der.degree * q == a for q, a in zip(der.q, der.weights))
    assert math.gcd(*der.weights) == 1
    det = oracles.cofactor_det(rows)
    assert det % der.degree == 0
    group, vector = lattice_order_check(rows)
    assert group == abs(det)
    assert vector == der.degree
    assert delsarte_rational(rows) == (group == vector)


def test_delsarte_rational_examples():
    assert delsarte_rational(loop_matrix([2] * 8 + [3]))
    assert not delsarte_rational(FERMAT)
    assert delsarte_rational(loop_matrix([2, 2, 3]))


def test_lattice_order_examples():
    assert lattice_order_check(loop_matrix([2, 2, 3])) == (13, 13)
    assert lattice_order_check(FERMAT) == (27, 3)
    assert lattice_order_check([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1)


def test_loop_matrix():
    assert loop_matrix([2, 2, 3]).rows == ((2, 1, 0), (0, 2, 1), (1, 0, 3))
    m = loop_matrix([2] * 8 + [3])
    assert m.size == 9 and m.det() == 769
    with pytest.raises(ValueError):
        loop_matrix([2, 2])


def test_loop_det_formula_against_cofactor():
    rng = random.Random(7)
    for n in range(3, 11):
        for _ in range(4):
            exps = [rng.randint(1, 9) for _ in range(n)]
            expected = math.prod(exps) + (-1) ** (n + 1)
            assert loop_det(exps) == expected
            if n <= 8:
                assert oracles.cofactor_det(loop_matrix(exps).matrix()) == expected
            assert loop_matrix(exps).det() == expected


def test_quasismooth_obstruction_examples():
    assert loop_quasismooth_obstruction([2, 2, 2]) == 9
    assert loop_quasismooth_obstruction([2, 2, 3]) == 13
    assert loop_quasismooth_obstruction([2] * 8 + [3]) == 769
    assert loop_quasismooth([2, 2, 2])
    assert not loop_quasismooth([2, 2, 2], characteristic=3)
    assert loop_quasismooth([2, 2, 2], characteristic=5)
    assert not loop_quasismooth([2, 2, 3], characteristic=13)


@pytest.mark.parametrize("exps,p", [((2, 2, 2), 3), ((2, 2, 2), 5), ((2, 2, 2), 7),
                                    ((2, 2, 3), 13), ((2, 2, 3), 3), ((3, 2, 2, 2), 5),
                                    ((2, 2, 2, 2), 5), ((2, 2, 2, 2), 3)])
def test_quasismooth_matches_gradient_brute_force(exps, p):
    has_critical = bool(oracles.loop_critical_points(exps, p))
    assert loop_quasismooth(exps, characteristic=p) == (not has_critical)


def test_f3_critical_point_for_222():
    assert (1, 1, 1) in oracles.loop_critical_points((2, 2, 2), 3)


def test_main_family_monomials_are_loop_monomials():
    for n in range(3, 10):
        der = main_family(n)
        basis = enumerate_monomials(der.weights, der.degree)
        assert len(basis) == n + 2
        assert set(basis) == set(loop_matrix(main_family_type(n)).rows)


def test_x1097_weights():
    der = derive_weights(X1097_LOOP)
    assert der.weights == X1097_WEIGHTS
    assert der.degree == 1097


def test_diag_aut_x1097():
    g = diagonal_aut(X1097_LOOP, X1097_WEIGHTS)
    assert g.invariant_factors == (7,)
    assert g.continuous_rank == 0 and g.order == 7
    (t, s), = g.generators
    assert t == tuple(Fraction(x, 7) for x in (0, 5, 3, 2, 4, 2, 5, 1))
    assert s == Fraction(1, 7)
    assert acts_by_common_scalar(t, X1097_LOOP)


def test_diag_aut_x1097_with_extra_monomial_is_trivial():
    mons = X1097_LOOP + [(0, 0, 1, 1, 0, 0, 1, 3)]
    assert sum(a * e for a, e in zip(X1097_WEIGHTS, mons[-1])) == 1097
    g = diagonal_aut(mons, X1097_WEIGHTS)
    assert g.is_trivial()
    assert oracles.diagonal_group_order(mons, X1097_WEIGHTS, 7) == 1


def test_diag_aut_x1097_brute_force_order():
    assert oracles.diagonal_group_order(X1097_LOOP, X1097_WEIGHTS, 7) == 7


def test_diag_aut_fermat():
    g = diagonal_aut(FERMAT, (1, 1, 1))
    assert g.invariant_factors == (3, 3)
    assert g.order == 9 == oracles.diagonal_group_order(FERMAT, (1, 1, 1), 3)
    # no further torsion hides at a larger denominator
    assert oracles.diagonal_group_order(FERMAT, (1, 1, 1), 6) == 9
    for t, s in g.generators:
        assert acts_by_common_scalar(t, FERMAT)


def test_diag_aut_continuous_part():
    g = diagonal_aut([(2, 0, 0), (0, 2, 0)], (1, 1, 2))
    assert g.continuous_rank == 1
    assert g.order is None


def test_diag_aut_generators_fix_equation():
    rng = random.Random(3)
    for _ in range(30):
        exps = [rng.randint(2, 5) for _ in range(rng.randint(3, 6))]
        rows = loop_matrix(exps).rows
        w = derive_weights(rows).weights
        g = diagonal_aut(rows, w)
        assert g.order == abs(loop_det(exps)) // derive_weights(rows).degree
        for t, s in g.generators:
            assert acts_by_common_scalar(t, rows)
            assert all(0 <= x < 1 for x in t)


def test_delsarte_matrix_validation():
    with pytest.raises(ValueError):
        DelsarteMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        DelsarteMatrix([[1, -1], [0, 1]])
    with pytest.raises(ValueError):
        DelsarteMatrix([[1, 0], [0, 1]], coefficients=[1, 0])
