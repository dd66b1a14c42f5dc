from fractions import Fraction

import pytest

from ballq import geometry
from ballq.geometry import EXPECTED_GENUS, EXPECTED_O, GRAM, ns_pair, ns_solve, riemann_hurwitz_genus

from conftest import all_pass


def test_mirror_incidences(incidence):
    all_pass(geometry.verify_mirror_incidences(incidence))


def test_intersections(incidence):
    all_pass(geometry.verify_intersections(incidence))


def test_records(incidence):
    recs = incidence.records
    for name, rec in recs.items():
        assert rec.genus == EXPECTED_GENUS[name]
        assert rec.o_counts == EXPECTED_O[name]
    assert recs["E1"].degree == 72 and recs["C3"].degree == 108 and recs["C1"].degree == 36


def test_gram_matrix(incidence):
    gram = geometry.intersection_matrix(incidence.records, ("E1", "E2", "C1"))
    assert gram == [[5, 13, 11], [13, 5, 7], [11, 7, -1]]


@pytest.mark.parametrize("degree, weights, genus", [(72, (2, 3, 12), 4), (36, (2, 4, 12), 4), (108, (2, 4, 12), 10)])
def test_riemann_hurwitz(degree, weights, genus):
    assert riemann_hurwitz_genus(degree, weights) == genus


def test_neron_severi_pairing():
    K = ns_solve((9, 9, 9))
    assert K == (Fraction(1, 2), Fraction(1, 2), 0)
    assert ns_pair(K, K) == 9
    F = ns_solve((60, 12, 24))
    assert F == (-1, 5, 0)
    assert ns_pair(F, F) == 0
    assert geometry.fiber_genus(F, K) == 19


def test_gram_is_unimodular_up_to_index():
    assert geometry._det3([[Fraction(x) for x in r] for r in GRAM]) == 1296


def test_surface_invariants():
    inv = geometry.surface_invariants()
    assert inv["e"] == 3 and inv["c1^2"] == 9 and inv["chi"] == 1 and inv["p_g"] == 1


def test_fibration_constraints():
    all_pass(geometry.fibration_constraints())


def test_euler_jump_of_a_double_fiber():
    cfg = geometry.FiberConfig((2,), (2,), (0,), 0, 0)
    assert geometry.euler_jump(cfg) == 2
