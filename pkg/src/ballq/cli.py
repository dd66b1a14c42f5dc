"""Command-line verification harness: ``ballq verify <suite>``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from .certs import SCHEMA, Certificate

SUITES = ("presentation", "index", "torsion", "mirrors", "homology", "intersections", "albanese", "fixed-points")
PROPERTY_SUITES = ("membership", "f-properties", "reductions", "fibration")
DEFAULT_SEED = 1729

MEMBERSHIP_WORDS = 10_000
F_PAIRS = 1_000
REDUCTION_SAMPLES = 1_000


def _seed() -> int:
    raw = os.environ.get("BALLQ_SEED")
    return int(raw) if raw else DEFAULT_SEED


def _atlas(opts: dict):
    from . import lattice

    return lattice.Atlas(max_cosets=opts["max_cosets"], cache_dir=opts["cache_dir"])


def _incidence(atlas, opts):
    from .geometry import Incidence

    return Incidence(atlas, opts["bfs_depth"])


def _run_presentation(atlas, opts):
    from . import lattice

    return lattice.verify_presentation() + lattice.verify_K(atlas) + lattice.verify_dm_isomorphism(atlas)


def _run_index(atlas, opts):
    from . import lattice

    return lattice.verify_index(atlas)


def _run_torsion(atlas, opts):
    from . import lattice

    return lattice.torsion_census(atlas) + lattice.torsion_freeness(atlas)


def _run_mirrors(atlas, opts):
    from . import geometry, lattice

    certs = lattice.verify_korbit_tables(atlas) + lattice.verify_stabilizers(opts["bfs_depth"])
    return certs + geometry.verify_mirror_incidences(_incidence(atlas, opts))


def _run_homology(atlas, opts):
    from . import homology

    return homology.verify_homology(atlas)


def _run_intersections(atlas, opts):
    from . import geometry

    return geometry.verify_intersections(_incidence(atlas, opts))


def _run_albanese(atlas, opts):
    from . import albanese

    return albanese.verify_albanese(atlas)


def _run_fixed_points(atlas, opts):
    from . import albanese

    return albanese.verify_fixed_points(atlas, jobs=opts["inner_jobs"])


def _skipped(claims: tuple, group: str) -> list:
    return [Certificate(c, group, None, None, status="skipped") for c in claims]


def _run_membership(atlas, opts):
    from . import lattice

    if opts["seedless"]:
        return _skipped(("membership.random_agreement",), "properties")
    return lattice.membership_crosscheck(MEMBERSHIP_WORDS, opts["seed"], atlas)


def _run_f_properties(atlas, opts):
    from . import homology

    if opts["seedless"]:
        return _skipped(("f.homomorphism", "f.twist"), "properties")
    return homology.homomorphism_checks(F_PAIRS, opts["seed"])


def _run_reductions(atlas, opts):
    from . import lattice

    if opts["seedless"]:
        return _skipped(("reduction.scalar_morphism", "reduction.matrix_morphism"), "properties")
    return lattice.reduction_properties(REDUCTION_SAMPLES, opts["seed"])


def _run_fibration(atlas, opts):
    from . import geometry

    return geometry.fibration_constraints()


RUNNERS: dict[str, Callable] = {
    "presentation": _run_presentation,
    "index": _run_index,
    "torsion": _run_torsion,
    "mirrors": _run_mirrors,
    "homology": _run_homology,
    "intersections": _run_intersections,
    "albanese": _run_albanese,
    "fixed-points": _run_fixed_points,
    "membership": _run_membership,
    "f-properties": _run_f_properties,
    "reductions": _run_reductions,
    "fibration": _run_fibration,
}


def run_suite(name: str, opts: dict, atlas=None) -> list:
    atlas = atlas or _atlas(opts)
    t0 = time.perf_counter()
    certs = RUNNERS[name](atlas, opts)
    dt = time.perf_counter() - t0
    for c in certs:
        if not c.seconds:
            c.seconds = dt / max(len(certs), 1)
        if not c.group:
            c.group = name
    return certs


def _suite_worker(args) -> list:
    name, opts = args
    return [c.to_dict() for c in run_suite(name, opts)]


def run(command: str, opts: dict) -> list[dict]:
    """Run one suite (or all of them) and return certificate dicts ordered by claim id."""
    names = SUITES + PROPERTY_SUITES if command == "all" else (command,)
    jobs = opts["jobs"]
    if jobs > 1 and len(names) > 1:
        inner = dict(opts, inner_jobs=1)
        with ProcessPoolExecutor(max_workers=min(jobs, len(names))) as ex:
            parts = list(ex.map(_suite_worker, [(n, inner) for n in names]))
        out = [c for part in parts for c in part]
    else:
        atlas = _atlas(opts)
        out = [c.to_dict() for n in names for c in run_suite(n, opts, atlas)]
    out.sort(key=lambda c: (c["claim"], c["group"]))
    return out


def format_json(command: str, certs: list[dict]) -> str:
    summary = {s: sum(1 for c in certs if c["status"] == s) for s in ("pass", "fail", "skipped")}
    return json.dumps({"schema": SCHEMA, "command": command, "summary": summary, "certificates": certs}, indent=2, sort_keys=True)


def _short(x) -> str:
    s = json.dumps(x, sort_keys=True)
    return s if len(s) <= 60 else s[:57] + "..."


def format_markdown(command: str, certs: list[dict]) -> str:
    lines = [f"# ballq verify {command}", ""]
    groups: dict = {}
    for c in certs:
        groups.setdefault(c["group"], []).append(c)
    for g in sorted(groups):
        lines += [f"## {g}", "", "| claim | status | computed | expected |", "|---|---|---|---|"]
        for c in groups[g]:
            lines.append(f"| {c['claim']} | {c['status']} | `{_short(c['computed'])}` | `{_short(c['expected'])}` |")
        lines.append("")
    npass = sum(1 for c in certs if c["status"] == "pass")
    nfail = sum(1 for c in certs if c["status"] == "fail")
    lines.append(f"{npass} passed, {nfail} failed, {len(certs) - npass - nfail} skipped")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballq", description="Exact verification of the ball quotient computations.")
    sub = p.add_subparsers(dest="action", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--max-cosets", type=int, default=2_000_000)
    v.add_argument("--bfs-depth", type=int, default=8)
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    v.add_argument("--cache-dir", default=None)
    v.add_argument("--format", choices=("json", "markdown"), default="json")
    v.add_argument("--seedless", action="store_true", help="skip the randomized property suites")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = {
        "max_cosets": args.max_cosets,
        "bfs_depth": args.bfs_depth,
        "jobs": max(1, args.jobs),
        "inner_jobs": max(1, args.jobs),
        "cache_dir": args.cache_dir,
        "seedless": args.seedless,
        "seed": _seed(),
    }
    certs = run(args.suite, opts)
    text = format_json(args.suite, certs) if args.format == "json" else format_markdown(args.suite, certs)
    sys.stdout.write(text + "\n")
    return 0 if all(c["status"] != "fail" for c in certs) else 1


if __name__ == "__main__":
    sys.exit(main())
