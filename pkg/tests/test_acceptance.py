"""The eight acceptance criteria, each run through the CLI suites at its stated tolerance and time budget."""

import time

from ballq import cli

from conftest import ACCEPTANCE_LINES

OPTS = dict(max_cosets=2_000_000, bfs_depth=8, jobs=1, inner_jobs=1, cache_dir=None, seedless=False, seed=cli.DEFAULT_SEED)


def _run(names, budget):
    t0 = time.perf_counter()
    certs = []
    for n in names:
        certs.extend(cli.run(n, OPTS))
    dt = time.perf_counter() - t0
    return {c["claim"]: c for c in certs}, dt, budget


def _report(number, title, certs, dt, budget, required):
    missing = [c for c in required if c not in certs]
    failed = sorted(k for k, c in certs.items() if c["status"] != "pass")
    ok = not missing and not failed and dt < budget
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({len(certs)} certificates, {dt:.1f}s, budget {budget}s)"
    if missing:
        line += f" missing={missing}"
    if failed:
        line += f" failed={failed}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _value(certs, claim):
    return certs[claim]["computed"]


def test_criterion_1_presentation():
    certs, dt, budget = _run(["presentation"], 1.0)
    _report(1, "relator identities", certs, dt, budget, ["relators.gamma", "relators.K", "relators.gamma0", "relators.gammac", "relators.gamma34"])


def test_criterion_2_index():
    certs, dt, budget = _run(["index"], 120)
    assert _value(certs, "pi_index") == 864
    assert _value(certs, "pi_abelianization") == [0, 0]
    assert _value(certs, "index.M0.coset_enumeration") == 288
    assert _value(certs, "index.Mc.coset_enumeration") == 324
    assert _value(certs, "index.bMc.coset_enumeration") == 108
    _report(2, "indices 864/288/324/108 and abelianization Z^2", certs, dt, budget, ["pi_index", "pi_abelianization"])


def test_criterion_3_torsion():
    certs, dt, budget = _run(["torsion"], 300)
    assert _value(certs, "torsion.total") == 408
    assert _value(certs, "torsion.in_bK") == 76
    assert _value(certs, "torsion.in_bu-1bK") == 45
    _report(3, "torsion census and torsion-freeness", certs, dt, budget, ["torsion_free.table", "torsion_free.congruence"])


def test_criterion_4_mirrors():
    certs, dt, budget = _run(["mirrors"], 600)
    assert _value(certs, "n_mu.E1") == [3, 1, 2]
    assert _value(certs, "n_mu.E3") == [1, 4, 1]
    assert _value(certs, "n_mu.E2") == [2, 1, 3]
    assert _value(certs, "n_mu.C3") == [4, 3, 2]
    assert _value(certs, "n_mu.C1") == [0, 1, 2]
    assert _value(certs, "p3_partition.E1") == [6, 6, 6, 6]
    assert _value(certs, "p3_partition.E3") == [9, 9, 3, 3]
    assert _value(certs, "p3_partition.E2") == [12, 12, 0, 0]
    _report(4, "orbit tables, stabilizers, incidences", certs, dt, budget, ["korbit.Mc.set", "korbit.M0.set", "m_i.C1", "m_i.C3"])


def test_criterion_5_homology():
    certs, dt, budget = _run(["homology"], 30)
    assert _value(certs, "degree_sums") == {"E1": -60, "E2": -12, "C1": -24}
    _report(5, "f values, f(u_i), f(v_i) tables and degree sums", certs, dt, budget, ["fuv.E1", "fuv.E2", "fuv.C1", "f.well_defined"])


def test_criterion_6_intersections():
    certs, dt, budget = _run(["intersections"], 600)
    assert _value(certs, "gram") == [[5, 13, 11], [13, 5, 7], [11, 7, -1]]
    assert _value(certs, "gram.det") == 1296
    assert _value(certs, "kx.class") == ["1/2", "1/2", 0]
    assert _value(certs, "fiber.class") == [-1, 5, 0]
    assert _value(certs, "fiber.kx") == 36
    assert _value(certs, "fiber.genus") == 19
    _report(6, "Gram matrix, canonical class, fiber class and genus", certs, dt, budget, ["adjunction", "e3.class", "kx.third_of_E"])


def test_criterion_7_fixed_points():
    certs, dt, budget = _run(["fixed-points"], 600)
    assert _value(certs, "fixed.hit_pattern") == {"j^4": 3, "buv": 18}
    assert _value(certs, "fixed.count") == 9
    assert _value(certs, "albanese.images") == {"p0": 3, "p1": 3, "p-1": 3}
    kinds = _value(certs, "types.displayed")
    assert sorted(kinds.values()) == ["1,1"] * 3 + ["1,2"] * 6
    _report(7, "nine fixed points, images and types", certs, dt, budget, ["fixed.distinct", "types.numeric_oracle"])


def test_criterion_8_properties():
    names = ["membership", "f-properties", "reductions", "fibration"]
    certs, dt, budget = _run(names, 600)
    assert _value(certs, "membership.random_agreement") == cli.MEMBERSHIP_WORDS
    assert cli.F_PAIRS == 1000 and cli.MEMBERSHIP_WORDS == 10_000
    _report(
        8,
        "property suites",
        certs,
        dt,
        budget,
        ["f.homomorphism", "f.twist", "reduction.matrix_morphism", "fibration.total_jump", "fibration.geodesic_infeasible", "fibration.no_multiple_fiber.uniform"],
    )
