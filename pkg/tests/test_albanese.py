import pytest
from hypothesis import given, settings, strategies as st

from ballq import albanese
from ballq.albanese import TorusPoint, albanese_of

from conftest import all_pass


@pytest.fixture(scope="module")
def search(atlas):
    hits = albanese.fixed_point_search(atlas)
    return hits, albanese.dedupe(hits, atlas)


def test_torus_labels():
    assert albanese_of((0, 0)).label() == "p0"
    assert albanese_of((-2, -5)).label() == "p0"  # (2+w)/3 (-2+5w) = w - 3
    assert albanese_of((-5, 1)).label() == "p0"
    assert albanese_of((-6, 2)).label() == "p1"
    assert albanese_of((-4, 0)).label() == "p-1"


def test_twist_determinant():
    assert albanese.twist_determinant() == 3


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_image_is_fixed_by_the_torus_action(m, n):
    # x = alpha/3 solves (1 - w) x = theta mod Z[w], i.e. (1 - w) alpha = 3 theta mod 3 Z[w]
    p = albanese_of((m, n))
    a, b = albanese._zmul((1, -1), (p.a, p.b))
    assert a % 3 == 0 and b % 3 == 0
    assert p.label() in ("p0", "p1", "p-1")


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_conventions_are_negatives(m, n):
    p1, p2 = albanese_of((m, n), 1), albanese_of((m, n), 2)
    assert TorusPoint.third(-p1.a, -p1.b) == p2


def test_hit_pattern(search):
    hits, _ = search
    assert albanese.hit_pattern(hits) == {"j^4": 3, "buv": 18}


def test_no_hits_for_v(search):
    hits, _ = search
    assert not [h for h in hits if h.t in ("v", "v^-1")]


def test_dedupe(search):
    _, records = search
    assert len(records) == 9
    assert [r.label for r in records if r.t == "j^4"] == ["O1", "O2", "O3"]
    assert sorted(len(r.members) for r in records if r.t == "buv") == [3] * 6


def test_distinctness(search, atlas):
    _, records = search
    table = albanese.distinctness(records, atlas)
    assert len(table) == 36
    assert set(table.values()) == {0}


def test_albanese_suite(atlas):
    all_pass(albanese.verify_albanese(atlas))


def test_fixed_point_suite(atlas):
    all_pass(albanese.verify_fixed_points(atlas))


def test_parallel_search_matches_serial(atlas, search):
    hits, _ = search
    assert albanese.fixed_point_search(atlas, jobs=2) == hits
