"""Fixed points of the order-3 automorphism induced by j^4, their images on the Albanese torus,
and their local types.

A fixed point of the automorphism is Pi.x with g.x = x for some g in the coset Pi j^4.
Up to Pi-conjugacy such g is r t r^-1 with t a torsion-table representative (or inverse)
and r = b^mu k a coset representative; the point is then r.Fix(t).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import homology, lattice, rep
from .certs import check
from .fpgrp import words as W
from .rep import IDENTITY, ProjElement, imul, parse_word, word_to_matrix

J4 = parse_word("j^4")
J4_INV = W.inverse(J4)
MU_WORDS = {0: (), 1: (3,), -1: (-3,)}

# witnesses h_i = b^mu k for the six points over Q, and the Pi-words h_i (buv) h_i^-1 j^-4
H_WORDS = ("b^-1vuj^3", "u^-1vj", "buv^2j^2", "b^-1v^2uj^3", "vj^2", "bvu^-1v")
PI_PRIME = (
    "a2^2 a1 a3^3",
    "j^8 a1 j^4",
    "j^8 a1 a2^3 j^4 a2 a1 a2^-2 a1^-1",
    "a3^3 a1^2 a3^3",
    "j^4 a1^-1 a2^-1 j^8",
    "a2 a1^-1",
)
PI_PRIME_F = ((-6, 2), (-4, 1), (1, -6), (-4, 0), (-4, 3), (-3, -2))
# b^mu j^4 b^-mu j^-4 for mu = 1, -1
PI_MU = {1: "a2 a1^-2 a3^-3 a1^-1", -1: "a2^2 a1 a3 a1^-1"}


# ---------------------------------------------------------------------------
# the torus C / Z[omega] and its 3-torsion


@dataclass(frozen=True)
class TorusPoint:
    """(a + b*omega)/3 modulo Z[omega], stored with a, b reduced mod 3."""

    a: int
    b: int

    @classmethod
    def third(cls, a: int, b: int) -> TorusPoint:
        return cls(a % 3, b % 3)

    def label(self) -> str:
        return {(0, 0): "p0", (2, 1): "p1", (1, 2): "p-1"}.get((self.a, self.b), f"({self.a}+{self.b}w)/3")


def _zmul(x: tuple, y: tuple) -> tuple:
    """(a + b w)(c + d w) with w^2 = -1 - w."""
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c - b * d)


# 3/(1 - w^i) in Z[omega]: i = 1 gives 2 + w, i = 2 gives -w(2 + w) = 1 - w
FIXED_FACTOR = {1: (2, 1), 2: (1, -1)}


def albanese_of(fpi: Sequence[int], convention: int = 1) -> TorusPoint:
    """The fixed point of x -> w^i x + theta(f(pi)) on the torus."""
    th = homology.theta(fpi)
    num = _zmul(FIXED_FACTOR[convention], (th.a, th.b))
    return TorusPoint.third(*num)


def twist_determinant() -> int:
    m = homology.TWIST
    return (1 - m[0][0]) * (1 - m[1][1]) - m[0][1] * m[1][0]


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class Hit:
    t: str  # torsion-table word, with "^-1" appended for inverses
    mu: int
    k: tuple  # word of k over u, v
    element: tuple  # integer matrix of b^mu k t k^-1 b^-mu

    @property
    def r_word(self) -> tuple:
        return MU_WORDS[self.mu] + tuple(self.k)

    def gamma_word(self, t_word: Sequence[int]) -> tuple:
        r = self.r_word
        return r + tuple(t_word) + W.inverse(r)

    def pi_word(self, t_word: Sequence[int]) -> tuple:
        """A word over u, v, b for pi = g j^-4."""
        return W.free_reduce(self.gamma_word(t_word) + J4_INV)


def _torsion_candidates() -> list:
    out = []
    for _, w, g in lattice.table_representatives():
        tw = parse_word(w)
        out.append((w, tw, g))
        out.append((w + "^-1", W.inverse(tw), g.inverse()))
    return out


def _search_chunk(args) -> list:
    labels, k_data, g21 = args
    member = lattice.MembershipTest(g21)
    cands = {w: g for w, _, g in _torsion_candidates()}
    j4inv = word_to_matrix(J4_INV).p
    mus = {mu: word_to_matrix(w).p if w else rep.IDENTITY_INT for mu, w in MU_WORDS.items()}
    out = []
    for label in labels:
        t = cands[label].p
        seen = set()
        for mu, bm in mus.items():
            for kw, kp, kinv in k_data:
                r = imul(bm, kp)
                rinv = imul(kinv, mus[-mu])
                g = rep.icanonical(imul(imul(r, t), rinv))
                if member(ProjElement(imul(g, j4inv))):
                    key = (mu, g)
                    out.append((label, mu, kw, g, key in seen))
                    seen.add(key)
    return out


def fixed_point_search(atlas: lattice.Atlas | None = None, jobs: int = 1) -> list:
    """All (t, mu, k) with b^mu k t k^-1 b^-mu j^-4 in Pi, as Hit records.

    For each t, repeated (mu, element) pairs coming from different k are dropped (this happens
    for t in the center of K), so a hit is a distinct element per (t, mu).
    """
    atlas = atlas or lattice.default_atlas()
    K = atlas.K
    k_data = [(tuple(K.word_of(k)), k.p, k.inverse().p) for k in K]
    labels = [w for w, _, _ in _torsion_candidates()]
    g21 = atlas.congruence.g21
    if jobs > 1:
        chunks = [labels[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_search_chunk, [(c, k_data, g21) for c in chunks]))
    else:
        parts = [_search_chunk((labels, k_data, g21))]
    hits = []
    order = {w: i for i, w in enumerate(labels)}
    for part in parts:
        for label, mu, kw, g, dup in part:
            if not dup:
                hits.append(Hit(label, mu, kw, g))
    hits.sort(key=lambda h: (order[h.t], h.mu, len(h.k), h.k))
    return hits


def hit_pattern(hits: Sequence[Hit]) -> dict:
    out: dict = {}
    for h in hits:
        out[h.t] = out.get(h.t, 0) + 1
    return out


# ---------------------------------------------------------------------------
# deduplication


@dataclass
class FixedPointRecord:
    label: str
    t: str
    mu: int
    k: tuple
    members: tuple  # the k-words of all hits identified with this point
    element: ProjElement  # g = r t r^-1
    pi_word: tuple  # over u, v, b
    f: tuple = ()
    image: TorusPoint | None = None
    image_other: TorusPoint | None = None
    eigenvalues: tuple = ()
    kind: str | None = None

    @property
    def r(self) -> ProjElement:
        return word_to_matrix(MU_WORDS[self.mu] + tuple(self.k))

    @cached_property
    def point(self) -> rep.BallPoint:
        base = rep.ORIGIN if self.t == "j^4" else rep.point_q()
        return rep.ball_action(self.r, base)


def _t_word(label: str) -> tuple:
    if label.endswith("^-1"):
        return W.inverse(parse_word(label[:-3]))
    return parse_word(label)


def dedupe(hits: Sequence[Hit], atlas: lattice.Atlas | None = None) -> list:
    """Identify hits giving the same point of the quotient via k -> k j^4 and k -> k j^8."""
    atlas = atlas or lattice.default_atlas()
    z = word_to_matrix(J4)
    records = []
    o_count = q_count = 0
    by_mu: dict = {}
    for h in hits:
        by_mu.setdefault((h.t, h.mu), []).append(h)
    for (t, mu), group in sorted(by_mu.items(), key=lambda kv: (kv[0][0] != "j^4", kv[0][0], [0, 1, -1].index(kv[0][1]))):
        if t == "j^4":
            o_count += 1
            h = group[0]
            records.append(_record(f"O{o_count}", h, (h.k,)))
            continue
        remaining = list(group)
        while remaining:
            h = remaining.pop(0)
            k = word_to_matrix(h.k)
            partners = {(k * z).p, (k * z * z).p}
            cls = [h.k]
            rest = []
            for o in remaining:
                if word_to_matrix(o.k).p in partners:
                    cls.append(o.k)
                else:
                    rest.append(o)
            remaining = rest
            q_count += 1
            records.append(_record(f"Q{q_count}", h, tuple(cls)))
    return records


def _record(label: str, h: Hit, members: tuple) -> FixedPointRecord:
    tw = _t_word(h.t)
    return FixedPointRecord(label, h.t, h.mu, h.k, members, ProjElement(h.element), h.pi_word(tw))


def distinctness(records: Sequence[FixedPointRecord], atlas: lattice.Atlas | None = None) -> dict:
    """For each unordered pair, the number of group elements certifying the points equal (must be 0).

    Two points r.x, r'.x with stabilizer S of x coincide in the quotient iff r' s r^-1 in Pi for some s in S.
    """
    atlas = atlas or lattice.default_atlas()
    member = atlas.is_member
    stab_q = [IDENTITY, word_to_matrix("buv"), word_to_matrix("(buv)^2")]
    stab_o = list(atlas.K)
    out = {}
    for i, a in enumerate(records):
        for b in records[i + 1 :]:
            if (a.t == "j^4") != (b.t == "j^4"):
                # stabilizers of orders 288 and 3 cannot be conjugate
                out[(a.label, b.label)] = 0
                continue
            stab = stab_o if a.t == "j^4" else stab_q
            ra_inv, rb = a.r.inverse(), b.r
            out[(a.label, b.label)] = sum(1 for s in stab if member(rb * s * ra_inv))
    return out


# ---------------------------------------------------------------------------
# images and types


def attach_images(records: Sequence[FixedPointRecord], fmap) -> None:
    for r in records:
        r.f = fmap(r.pi_word)
        r.image = albanese_of(r.f, 1)
        r.image_other = albanese_of(r.f, 2)


def attach_types(records: Sequence[FixedPointRecord]) -> None:
    for r in records:
        r.eigenvalues = rep.jacobian_eigenvalues(r.element, r.point)
        r.kind = rep.fixed_point_type(r.eigenvalues)


def numeric_types(records: Sequence[FixedPointRecord]) -> list:
    import numpy as np

    out = []
    for r in records:
        vals = np.linalg.eigvals(rep.jacobian_numeric(r.element, r.point))
        out.append(rep.fixed_point_type(tuple(complex(v) for v in vals), tol=1e-6))
    return out


def fiber_grouping(records: Sequence[FixedPointRecord]) -> dict:
    groups: dict = {}
    for r in records:
        groups.setdefault(r.image.label(), []).append(r.label)
    return groups


# ---------------------------------------------------------------------------
# suites


def verify_albanese(atlas: lattice.Atlas | None = None) -> list:
    """Torus-level facts: twist determinant, the listed Pi-words and their images."""
    atlas = atlas or lattice.default_atlas()
    certs = [check("torus.twist_det", "albanese", twist_determinant(), 3)]
    certs.extend(lattice.verify_normalizer_relations())
    buv = word_to_matrix("buv")
    j4inv = word_to_matrix(J4_INV)
    ok_words, members = [], []
    for h, w in zip(H_WORDS, PI_PRIME):
        hm = word_to_matrix(h)
        lhs = hm * buv * hm.inverse() * j4inv
        pw = word_to_matrix(homology.to_gamma_word(w))
        ok_words.append(lhs == pw)
        members.append(atlas.is_member(pw))
    certs.append(check("pi_prime.words", "albanese", ok_words, [True] * 6))
    certs.append(check("pi_prime.members", "albanese", members, [True] * 6))
    fs = tuple(homology.f_of_word(w) for w in PI_PRIME)
    certs.append(check("pi_prime.f", "albanese", fs, PI_PRIME_F))
    labels = tuple(albanese_of(f).label() for f in fs)
    certs.append(check("pi_prime.images", "albanese", labels, ("p1",) * 3 + ("p-1",) * 3))
    b = word_to_matrix("b")
    pm_ok = {}
    for mu, w in PI_MU.items():
        bm = b if mu == 1 else b.inverse()
        lhs = bm * word_to_matrix(J4) * bm.inverse() * j4inv
        pm_ok[mu] = lhs == word_to_matrix(homology.to_gamma_word(w))
    certs.append(check("pi_mu.words", "albanese", pm_ok, {1: True, -1: True}))
    fmu = {mu: homology.f_of_word(w) for mu, w in PI_MU.items()}
    certs.append(check("pi_mu.f", "albanese", fmu, {1: (-2, -5), -1: (-5, 1)}))
    # alpha_0(b^mu O) is a lattice point under both conventions for the torus action
    conv = {i: [albanese_of(fmu[mu], i).label() for mu in (1, -1)] for i in (1, 2)}
    certs.append(check("torus.convention_consistency", "albanese", conv, {1: ["p0", "p0"], 2: ["p0", "p0"]}))
    return certs


def verify_fixed_points(atlas: lattice.Atlas | None = None, jobs: int = 1) -> list:
    atlas = atlas or lattice.default_atlas()
    certs = []
    hits = fixed_point_search(atlas, jobs)
    certs.append(check("fixed.hit_pattern", "fixed-points", hit_pattern(hits), {"j^4": 3, "buv": 18}))
    records = dedupe(hits, atlas)
    certs.append(check("fixed.count", "fixed-points", len(records), 9))
    certs.append(check("fixed.class_sizes", "fixed-points", sorted(len(r.members) for r in records if r.t == "buv"), [3] * 6))
    dist = distinctness(records, atlas)
    certs.append(check("fixed.distinct", "fixed-points", sum(dist.values()), 0, pairs=len(dist)))
    # the listed witnesses land in the six classes, one each
    K = atlas.K
    b = word_to_matrix("b")
    found = []
    for h in H_WORDS:
        hm = word_to_matrix(h)
        match = None
        for r in records:
            if r.t != "buv":
                continue
            bm = IDENTITY if r.mu == 0 else (b if r.mu == 1 else b.inverse())
            k = bm.inverse() * hm
            if k in K and K.word_of(k) in {tuple(m) for m in r.members}:
                match = r.label
        found.append(match)
    certs.append(check("fixed.witnesses", "fixed-points", sorted(x for x in found if x), sorted(r.label for r in records if r.t == "buv")))
    for r in records:
        certs.append(check(f"fixed.{r.label}.member", "fixed-points", atlas.is_member(word_to_matrix(r.pi_word)), True))
    _, _, _, fmap = homology.certify_f(atlas)
    attach_images(records, fmap)
    # every hit in a class has the same image
    consistent = []
    for r in records:
        imgs = set()
        for kw in r.members:
            h = Hit(r.t, r.mu, kw, ())
            imgs.add(albanese_of(fmap(h.pi_word(_t_word(r.t)))).label())
        consistent.append(len(imgs) == 1)
    certs.append(check("albanese.class_constant", "fixed-points", consistent, [True] * len(records)))
    images = {r.label: r.image.label() for r in records}
    multiset: dict = {}
    for v in images.values():
        multiset[v] = multiset.get(v, 0) + 1
    certs.append(check("albanese.images", "fixed-points", multiset, {"p0": 3, "p1": 3, "p-1": 3}, images=images))
    other: dict = {}
    for r in records:
        lab = r.image_other.label()
        other[lab] = other.get(lab, 0) + 1
    certs.append(check("albanese.images_other_convention", "fixed-points", other, {"p0": 3, "p1": 3, "p-1": 3}))
    groups = fiber_grouping(records)
    certs.append(check("albanese.fiber_sizes", "fixed-points", sorted(len(v) for v in groups.values()), [3, 3, 3]))
    certs.append(check("albanese.p0_fiber", "fixed-points", sorted(groups.get("p0", [])), ["O1", "O2", "O3"]))
    attach_types(records)
    kinds = {r.label: r.kind for r in records}
    expected = {r.label: ("1,1" if r.t == "j^4" else "1,2") for r in records}
    certs.append(check("types.displayed", "fixed-points", kinds, expected, eigenvalues={r.label: r.eigenvalues for r in records}))
    num = dict(zip((r.label for r in records), numeric_types(records)))
    certs.append(check("types.numeric_oracle", "fixed-points", num, expected))
    ident = rep.jacobian_eigenvalues(word_to_matrix("j^12"), rep.ORIGIN)
    certs.append(check("types.cube_is_identity", "fixed-points", rep.matches_up_to_unit(ident, (1, 1)), True))
    return certs
