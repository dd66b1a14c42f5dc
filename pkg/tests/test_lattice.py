import random

from hypothesis import given, settings, strategies as st

from ballq import lattice, rep
from ballq.rep import Mirror, word_to_matrix

from conftest import all_pass


def test_presentations_hold():
    all_pass(lattice.verify_presentation())


def test_K(atlas):
    all_pass(lattice.verify_K(atlas))
    all_pass(lattice.verify_dm_isomorphism(atlas))


def test_index_and_abelianization(atlas):
    certs = lattice.verify_index(atlas)
    all_pass(certs)
    by = {c.claim: c.computed for c in certs}
    assert by["pi_index"] == 864
    assert by["pi_abelianization"] == [0, 0]
    assert by["index.M0.coset_enumeration"] == 288
    assert by["index.Mc.coset_enumeration"] == 324
    assert by["index.bMc.coset_enumeration"] == 108


def test_congruence_images(atlas):
    cd = atlas.congruence
    assert len(cd.g21) == 21
    assert cd.rho2_image_order == 216
    assert len(cd.det2_image) == 3


def test_generators_of_pi_are_members(atlas):
    for w in lattice.PI_WORDS.values():
        assert lattice.pi_membership(w, atlas)
    assert not lattice.pi_membership("u", atlas)
    assert not lattice.pi_membership("j^4", atlas)


def test_membership_agrees_with_table(atlas):
    all_pass(lattice.membership_crosscheck(400, seed=3, atlas=atlas))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=25))
def test_membership_property(atlas, w):
    w = tuple(w)
    t = atlas.pi_table
    assert atlas.is_member(word_to_matrix(w)) == t.contains(w)


def test_torsion(atlas):
    all_pass(lattice.torsion_census(atlas))


def test_torsion_free(atlas):
    all_pass(lattice.torsion_freeness(atlas))


def test_normalizer_relations():
    all_pass(lattice.verify_normalizer_relations())


def test_reductions():
    all_pass(lattice.reduction_properties(200, seed=5))


def test_stabilizers():
    all_pass(lattice.verify_stabilizers())


def test_stabilizer_of_p_has_order_24():
    assert len(lattice.point_stabilizer(rep.POINT_P, 24)) == 24


def test_korbit_tables(atlas):
    all_pass(lattice.verify_korbit_tables(atlas))


def test_finite_subgroup_closure():
    g = rep.generators()
    h = lattice.closure([g["v"]])
    assert len(h) == 4 and h.is_closed()


def test_descent_rewriter_round_trip(atlas):
    rw = atlas.gamma0_rewriter
    rng = random.Random(11)
    for _ in range(10):
        w = tuple(rng.choice((1, -1, 2, -2, 3, -3, 4, -4)) for _ in range(rng.randint(1, 8)))
        g = rw.evaluate(w)
        out = rw.rewrite(g)
        assert rw.evaluate(out) == g


def test_gamma0_elements_stabilize_m0(atlas):
    m0 = Mirror.slope(0)
    for g in atlas.gamma0_named.values():
        assert rep.mirror_map(g, m0) == m0
    mc = Mirror.slope(rep.C_PARAM)
    for g in atlas.gammac_named.values():
        assert rep.mirror_map(g, mc) == mc


def test_coset_reps_are_distinct(atlas):
    t = atlas.pi_table
    assert len({t.trace(0, w) for _, _, w in atlas.coset_reps}) == 864
