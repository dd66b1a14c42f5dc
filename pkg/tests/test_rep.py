import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballq import rep
from ballq.cyclo import CycNum
from ballq.lattice import c_value
from ballq.rep import (
    F,
    IDENTITY,
    ORIGIN,
    POINT_P,
    Mirror,
    ball_action,
    element_order,
    generators,
    mirror_map,
    point_on_mirror,
    word_to_matrix,
)

Z = CycNum.zeta(1)
OMEGA = cmath.exp(2j * cmath.pi / 3)
letters = st.sampled_from("u v b j U V B".split())


def _word(s):
    return " ".join(x.lower() + ("^-1" if x.isupper() else "") for x in s)


words = st.lists(letters, max_size=10).map(_word)


def test_generators_are_unitary():
    for g in generators().values():
        m = g.matrix()
        assert m.adjoint() * F * m == F


def test_j_is_diagonal():
    j = generators()["j"]
    assert j == rep.ProjElement.from_matrix(rep.Mat3.diag(Z, Z, 1))


@pytest.mark.parametrize("w", ["u^3", "v^4", "b^3", "(uv)^2 (vu)^-2", "v b v^-1 b^-1", "(buv)^3", "(buvu)^2 v", ""])
def test_relators_are_trivial(w):
    assert word_to_matrix(w).is_identity()


@pytest.mark.parametrize("w, order", [("", 1), ("uv", 24), ("vuj^2", 24), ("bu^-1", 4), ("bj", 8), ("uvj", 8), ("buv", 3)])
def test_element_order(w, order):
    assert element_order(word_to_matrix(w)) == order


def test_order_bound_sentinel():
    assert element_order(word_to_matrix("uv"), bound=10) is None


def test_canonical_form_ignores_scalars():
    u = word_to_matrix("u")
    scaled = rep.ProjElement.from_matrix(rep.Mat3.diag(Z, Z, Z) * u.matrix())
    assert scaled == u
    assert hash(scaled.p) == hash(u.p)


def test_v_fixes_origin():
    assert ball_action(word_to_matrix("v"), ORIGIN) == ORIGIN


def test_q_is_fixed_by_buv():
    q = rep.point_q()
    assert ball_action(word_to_matrix("buv"), q).close_to(q, 1e-9)
    assert q.close_to(rep.point_q_formula(), 1e-9)


def test_mirror_images():
    mc = Mirror.slope(rep.C_PARAM)
    assert mirror_map(IDENTITY, mc) == mc
    assert mirror_map(word_to_matrix("v"), mc) == Mirror.slope(c_value("--+"))
    assert mirror_map(word_to_matrix("uj"), Mirror.slope(0)) == Mirror.slope(Z**3)


def test_point_incidences():
    assert point_on_mirror(ORIGIN, Mirror.slope(0))
    # the origin has z = alpha w for every finite alpha
    assert point_on_mirror(ORIGIN, Mirror.slope(rep.C_PARAM))
    assert point_on_mirror(ORIGIN, Mirror.slope(None))
    assert not point_on_mirror(POINT_P, Mirror.slope(None))
    assert not point_on_mirror(POINT_P, Mirror.slope(0))
    assert point_on_mirror(POINT_P, Mirror.slope(rep.C_PARAM))


def test_point_on_mirror_needs_exact_vector():
    with pytest.raises(ValueError):
        point_on_mirror(rep.point_q(), Mirror.slope(0))


def test_reflections_and_their_mirrors():
    assert rep.reflection_mirror(word_to_matrix("u")) == Mirror.slope(rep.C_PARAM)
    assert rep.reflection_mirror(word_to_matrix("v")) == Mirror.slope(0)
    assert not rep.is_reflection(word_to_matrix("uv"))


def test_polar_must_be_positive():
    with pytest.raises(ValueError):
        Mirror.from_polar((CycNum(0), CycNum(0), CycNum(1)))


def test_jacobian_at_origin():
    vals = rep.jacobian_eigenvalues(word_to_matrix("j^4"), ORIGIN)
    assert rep.fixed_point_type(vals) == "1,1"
    assert rep.matches_up_to_unit(rep.jacobian_eigenvalues(IDENTITY, ORIGIN), (1, 1))


def test_jacobian_at_q_translate():
    h = word_to_matrix("b^-1vuj^3")
    g = h * word_to_matrix("buv") * h.inverse()
    x = ball_action(h, rep.point_q())
    assert rep.fixed_point_type(rep.jacobian_eigenvalues(g, x)) == "1,2"


def test_jacobian_requires_fixed_point():
    with pytest.raises(ValueError):
        rep.jacobian_eigenvalues(word_to_matrix("b"), ORIGIN)


def test_fixed_point_type_rejects_other_pairs():
    assert rep.fixed_point_type((1, 1j)) is None


@settings(max_examples=50, deadline=None)
@given(words)
def test_word_matrices_are_unitary(w):
    m = word_to_matrix(w).matrix()
    assert m.adjoint() * F * m == F


@settings(max_examples=50, deadline=None)
@given(words, words, st.integers(0, 10**6))
def test_ball_action_is_an_action(w1, w2, seed):
    g, h = word_to_matrix(w1), word_to_matrix(w2)
    x = Mirror.slope(0).sample_points(1, np.random.default_rng(seed))[0]
    lhs = ball_action(g * h, x)
    rhs = ball_action(g, ball_action(h, x))
    assert abs(lhs.z - rhs.z) < 1e-9 and abs(lhs.w - rhs.w) < 1e-9


@settings(max_examples=50, deadline=None)
@given(words, st.integers(0, 10**6))
def test_mirror_map_carries_points(w, seed):
    g = word_to_matrix(w)
    m = Mirror.slope(rep.C_PARAM)
    image = mirror_map(g, m)
    for x in m.sample_points(3, np.random.default_rng(seed)):
        assert image.contains(ball_action(g, x), tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(words)
def test_inverse(w):
    g = word_to_matrix(w)
    assert (g * g.inverse()).is_identity()


@settings(max_examples=30, deadline=None)
@given(words, st.integers(0, 10**6))
def test_displayed_jacobian_agrees_with_numeric_up_to_unit(w, seed):
    # at a fixed point both are similar to the same linear map up to a scalar of modulus one
    h = word_to_matrix(w)
    g = h * word_to_matrix("buv") * h.inverse()
    x = ball_action(h, rep.point_q())
    disp = np.linalg.eigvals(rep.jacobian_displayed(g, x))
    num = np.linalg.eigvals(rep.jacobian_numeric(g, x))
    assert rep.matches_up_to_unit(tuple(disp), tuple(num), tol=1e-5)
