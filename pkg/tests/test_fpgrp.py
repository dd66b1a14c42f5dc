import pytest
from hypothesis import given, settings, strategies as st

from ballq.fpgrp import CosetLimitExceeded, Presentation, cached_todd_coxeter, orbits, read_table, todd_coxeter, write_table
from ballq.fpgrp import words as W
from ballq.fpgrp.cache import cache_path
from ballq.fpgrp.rs import abelian_quotient, abelianized_vector, reidemeister_schreier
from ballq.fpgrp.snf import smith_normal_form

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
words = st.lists(letters, max_size=20).map(tuple)

S3 = Presentation.from_strings(("a", "b"), ("a^2", "b^3", "(ab)^2"))
Z2 = Presentation.from_strings(("x", "y"), ("x y = y x",))


def test_parse_and_format():
    w = S3.parse("a b^-1 (ab)^2")
    assert w == (1, -2, 1, 2, 1, 2)
    assert S3.format((1, -2)) == "a b^-1"


def test_parse_rejects_unknown_name():
    with pytest.raises(KeyError):
        S3.parse("a c")


def test_free_reduce():
    assert W.free_reduce((1, 2, -2, -1, 3)) == (3,)


def test_cyclic_conjugates():
    assert W.is_cyclic_conjugate((1, 2, 3), (3, 1, 2))
    assert not W.is_cyclic_conjugate((1, 2, 3), (1, 3, 2))


def test_commutator():
    assert W.commutator((1,), (2,)) == (1, 2, -1, -2)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_inverse_and_reduction(u, v):
    assert W.free_reduce(u + W.inverse(u)) == ()
    assert W.free_reduce(W.free_reduce(u) + v) == W.free_reduce(u + v)
    assert W.inverse(W.inverse(u)) == tuple(u)


@settings(max_examples=100, deadline=None)
@given(words, st.integers(0, 19))
def test_rotation_is_cyclic_conjugate(u, k):
    u = W.cyclic_reduce(W.free_reduce(u))
    if u:
        k %= len(u)
        assert W.is_cyclic_conjugate(u, u[k:] + u[:k])


def test_todd_coxeter_small_groups():
    assert todd_coxeter(S3).index == 6
    assert todd_coxeter(S3, [(1,)]).index == 3
    assert todd_coxeter(S3, [(2,)]).index == 2
    d8 = Presentation.from_strings(("r", "s"), ("r^4", "s^2", "(rs)^2"))
    assert todd_coxeter(d8).index == 8


def test_coset_table_closed_and_consistent():
    t = todd_coxeter(S3, [(1,)])
    assert t.is_closed()
    for rel in S3.relators:
        assert all(t.trace(c, rel) == c for c in range(t.index))
    reps = t.representatives()
    assert sorted(t.trace(0, r) for r in reps) == list(range(3))


def test_limit_exceeded():
    with pytest.raises(CosetLimitExceeded):
        todd_coxeter(Z2, max_cosets=50)


def test_orbits_partition():
    t = todd_coxeter(S3)
    orb = orbits(t, [(1,)])
    assert sorted(len(o) for o in orb) == [2, 2, 2]


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[2, 0], [0, 3]], [1, 6]),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
        ([[0, 0], [0, 0]], []),
        ([[6]], [6]),
    ],
)
def test_smith_normal_form(rows, expected):
    assert smith_normal_form(rows).diagonal == expected


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=1, max_size=4)
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_divisibility_and_rank(m):
    import numpy as np

    r = smith_normal_form(m)
    d = r.diagonal
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert r.rank == np.linalg.matrix_rank(np.array(m, dtype=float))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_column_transform(m):
    r = smith_normal_form(m, track_columns=True)
    V = r.col_transform
    n = len(m[0])
    # M V has its first `rank` columns spanning the row lattice; later columns vanish
    mv = [[sum(row[k] * V[k][j] for k in range(n)) for j in range(n)] for row in m]
    for row in mv:
        assert all(x == 0 for x in row[r.rank :])


def test_rs_on_index_two_subgroup():
    # <x^2, y> in Z^2 has abelianization Z^2 and x^2 maps to a primitive vector
    t = todd_coxeter(Z2, [(1, 1), (2,)])
    assert t.index == 2
    sp = reidemeister_schreier(t, Z2)
    aq = abelian_quotient(sp)
    assert aq.invariants() == [0, 0]
    free, _ = aq.coordinates(abelianized_vector(sp, (1, 1)))
    assert sorted(map(abs, free)) in ([0, 1], [1, 0])


def test_rs_torsion():
    # the index-2 subgroup <b> of S3 is cyclic of order 3
    sp = reidemeister_schreier(todd_coxeter(S3, [(2,)]), S3)
    assert abelian_quotient(sp).invariants() == [3]


def test_rewrite_evaluates_back():
    t = todd_coxeter(S3, [(2,)])
    sp = reidemeister_schreier(t, S3)
    w = (1, 2, -1)
    assert t.contains(w)
    rw = sp.rewrite(w)
    back = W.substitute(rw, sp.gen_words)
    # same element of S3: equal as cosets of the trivial subgroup
    full = todd_coxeter(S3)
    assert full.trace(0, back) == full.trace(0, w)


def test_cache_round_trip(tmp_path):
    t = cached_todd_coxeter(S3, [(1,)], tmp_path)
    path = cache_path(tmp_path, S3, [(1,)])
    assert path.exists()
    again = read_table(path, S3, [(1,)])
    assert again.table == t.table
    # a different key is ignored
    assert read_table(path, S3, [(2,)]) is None
    assert read_table(path, Z2, [(1,)]) is None


def test_cache_truncated_file_is_ignored(tmp_path):
    t = todd_coxeter(S3, [(1,)])
    p = tmp_path / "x.ctab"
    write_table(p, t, S3)
    p.write_bytes(p.read_bytes()[:-1])
    assert read_table(p, S3, [(1,)]) is None


def test_cache_hit_matches_fresh(tmp_path):
    first = cached_todd_coxeter(S3, [(2,)], tmp_path)
    second = cached_todd_coxeter(S3, [(2,)], tmp_path)
    assert first.table == second.table == todd_coxeter(S3, [(2,)]).table


def test_digest_changes_with_relators():
    assert S3.digest() != Presentation.from_strings(("a", "b"), ("a^2", "b^3")).digest()
