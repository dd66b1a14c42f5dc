"""The abelianization map f: Pi -> Z^2, its j^4 twist, the lattice map theta, and the
surface-group data for the curves E1, E2, C1 (and the genus-10 curve through M_c).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import lattice, rep
from .certs import check
from .fpgrp import todd_coxeter
from .fpgrp import words as W
from .rep import Mirror, word_to_matrix

# letters of Pi-words: a1, a2, a3 and j (only in multiples of four)
PI_ALPHABET = {"a1": (1,), "a2": (2,), "a3": (3,), "j": (4,)}
F_GENERATORS = {1: (1, 3), 2: (-2, 1), 3: (-1, -1)}
TWIST = ((0, -1), (1, -1))  # f(j^4 w j^-4) = f(w) . TWIST


def parse_pi(text: str) -> tuple:
    return W.parse(text, PI_ALPHABET)


def _vecmat(v: Sequence[int], m) -> tuple:
    return (v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1])


def _twist_power(v: Sequence[int], t: int) -> tuple:
    for _ in range(t % 3):
        v = _vecmat(v, TWIST)
    return tuple(v)


def f_of_word(w: Sequence[int] | str) -> tuple:
    """Image in Z^2 of a word over a1, a2, a3, j with net j-exponent divisible by 12."""
    if isinstance(w, str):
        w = parse_pi(w)
    jexp = 0
    m = n = 0
    for x in w:
        if abs(x) == 4:
            jexp += 1 if x > 0 else -1
            continue
        if jexp % 4:
            raise ValueError("j occurs with an exponent not divisible by 4 between Pi letters")
        v = _twist_power(F_GENERATORS[abs(x)], (jexp // 4) % 3)
        s = 1 if x > 0 else -1
        m += s * v[0]
        n += s * v[1]
    if jexp % 12:
        raise ValueError("net exponent of j is not divisible by 12")
    return (m, n)


def to_gamma_word(w: Sequence[int] | str) -> tuple:
    """Expand a word over a1, a2, a3, j into signed letters over u, v, b."""
    if isinstance(w, str):
        w = parse_pi(w)
    images = [lattice.parse_word(lattice.PI_WORDS[k]) for k in ("a1", "a2", "a3")] + [rep.J_WORD]
    return W.substitute(w, images)


@dataclass(frozen=True)
class LatticePoint:
    """a + b*omega in Z[omega]."""

    a: int
    b: int


def theta(x: Sequence[int]) -> LatticePoint:
    """(m, n) -> m - n*omega."""
    return LatticePoint(x[0], -x[1])


def degree_sum(pairs: Sequence) -> int:
    return sum(fu[0] * fv[1] - fu[1] * fv[0] for fu, fv in pairs)


# ---------------------------------------------------------------------------
# surface groups


@dataclass
class SurfaceGroupData:
    name: str
    generators: tuple  # names
    definitions: tuple  # Pi-word strings, one per generator
    relator: str  # over the generator names
    D: tuple = ()
    E: tuple = ()
    expected_table: tuple | None = None
    mirror: str = "M0"  # base mirror of the stabilizer (M0 or Mc)
    conjugator: str = ""  # the curve's mirror is conjugator(base)
    expected_index: int = 288

    @cached_property
    def alphabet(self) -> dict:
        return {g: (i + 1,) for i, g in enumerate(self.generators)}

    def gword(self, text: str) -> tuple:
        return W.parse(text, self.alphabet)

    @cached_property
    def pi_words(self) -> list:
        return [parse_pi(d) for d in self.definitions]

    def expand(self, w: Sequence[int]) -> tuple:
        """Generator word -> Pi-word over a1, a2, a3, j."""
        return W.substitute(w, self.pi_words)

    @cached_property
    def relator_word(self) -> tuple:
        return self.gword(self.relator)

    def standard_generators(self) -> tuple:
        """u_i = E_1..E_{i-1} D_i E_{i-1}^-1..E_1^-1 and v_i likewise with E_i."""
        Ds = [self.gword(d) for d in self.D]
        Es = [self.gword(e) for e in self.E]
        us, vs = [], []
        prefix: tuple = ()
        for Di, Ei in zip(Ds, Es):
            us.append(W.free_reduce(prefix + Di + W.inverse(prefix)))
            vs.append(W.free_reduce(prefix + Ei + W.inverse(prefix)))
            prefix = prefix + Ei
        return us, vs

    def standard_relator(self) -> tuple:
        us, vs = self.standard_generators()
        word: tuple = ()
        for u, v in zip(us, vs):
            word = word + W.commutator(u, v)
        return W.free_reduce(word)

    @property
    def genus(self) -> int:
        return len(self.D) if self.D else polygon_genus(self.relator_word)


def polygon_genus(r: Sequence[int]) -> int:
    """Genus of the closed surface obtained by gluing the edges of a polygon labeled by r.

    Each generator must occur exactly twice with opposite exponents.
    """
    n = len(r)
    occ: dict = {}
    for pos, x in enumerate(r):
        occ.setdefault(abs(x), []).append((pos, x))
    for g, lst in occ.items():
        if len(lst) != 2 or lst[0][1] != -lst[1][1]:
            raise ValueError("not a surface relator")
    # vertex k is the start of edge k; edge k goes from vertex k to vertex k+1
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for lst in occ.values():
        (p, x), (q, _) = lst
        # the edge at p (traversed as x) and at q (traversed as x^-1) are identified reversed
        union(p, (q + 1) % n)
        union((p + 1) % n, q)
    vertices = len({find(k) for k in range(n)})
    chi = vertices - len(occ) + 1
    return (2 - chi) // 2


def _doubled(defs: dict, pairs: Sequence[tuple], suffix: str) -> dict:
    out = dict(defs)
    for src, dst in pairs:
        out[dst] = f"j^4 ({defs[src]}) {suffix}"
    return out


_E1_ODD = {
    "g1": "a3^-3 a1^-1 a2 a1",
    "g3": "a2 a1^-2 a3^-3 a1^-1",
    "g5": "j^4 a2 a1 j^8 a2^-1 a3^3 a1^2",
    "g7": "j^4 a1^-1 a2^-1 j^4 a2 a1 j^4",
}
_E2_ODD = {
    "g1": "j^4 (a1^-1 a3^-2 a1^-1) j^8 a1^-1 a2^-1",
    "g3": "j^8 (a3 a1 a2 a1^-1 a2^-1) j^4",
    "g5": "j^8 (a2^-1 a3^-1) j^4",
    "g7": "j^4 (a1 a3 a1^-1 a3^-2) j^8",
}
_PAIRS8 = (("g1", "g2"), ("g3", "g4"), ("g5", "g6"), ("g7", "g8"))
_G8 = tuple(f"g{i}" for i in range(1, 9))
_REL8 = "g1 g2 g3 g4 g5 g6 g7 g8 g1^-1 g3^-1 g5^-1 g7^-1 g2^-1 g4^-1 g6^-1 g8^-1"
_D8 = ("g1 g2 g3 g4 g5 g6 g7", "g1 g2 g3 g4", "g1", "g3^-1")
_E8 = ("g8 g1^-1 g3^-1 g5^-1", "g5 g6 g2^-1", "g2 g3 g6^-1", "g6")


def _e1() -> SurfaceGroupData:
    defs = _doubled(_E1_ODD, _PAIRS8, "j^-4")
    return SurfaceGroupData(
        "E1", _G8, tuple(defs[g] for g in _G8), _REL8, _D8, _E8,
        (((-5, -2), (-2, 7)), ((-2, 1), (0, 0)), ((1, 4), (3, -6)), ((2, 5), (-1, -4))),
        "M0", "", 288,
    )


def _e2() -> SurfaceGroupData:
    defs = _doubled(_E2_ODD, _PAIRS8, "j^8")
    return SurfaceGroupData(
        "E2", _G8, tuple(defs[g] for g in _G8), _REL8, _D8, _E8,
        (((-1, 2), (2, -1)), ((-2, 1), (0, 0)), ((-3, 0), (-1, 2)), ((-2, 1), (3, 0))),
        "M0", "u^-1v^2uj^6", 288,
    )


_C1_DEFS = {
    "p1": "a2^3 a1^-1 a3^-1 j^8 a2^-2 a1^-1 j^4",
    "p2": "a3^3 a1 a3^2 a2 a1 j^4 a3^-1 j^8 a3^-2 a1^-1 a3^-3",
    "p3": "j^8 a1^-1 a3^-3 a2^2 j^4 a3^-2 a1^-1 a3^-3",
    "p4": "j^8 a2 a1 a2^-2 a1^-1 j^4 a3^3 a1^2 a2^-1",
    "p5": "a3^3 a1 a3^2 j^4 a1^-1 j^8 a3^2 a1 a2^-3",
    "p6": "a3^3 a1 a2 a1 a3 a2^-3",
    "p7": "a3^3 a1 j^8 a1 a2^-2 a1^-1 a3^2 j^4",
    "p8": "j^4 a3^-2 j^8 a2 a1 a2 a1 a2^-2",
}


def _c1() -> SurfaceGroupData:
    gens = tuple(f"p{i}" for i in range(1, 9))
    return SurfaceGroupData(
        "C1", gens, tuple(_C1_DEFS[g] for g in gens),
        "p5^-1 p2^-1 p5 p1 p3 p8^-1 p4 p1^-1 p7^-1 p6^-1 p7 p2 p3^-1 p8 p4^-1 p6",
        (
            "p5^-1 p2^-1 p5 p1 p3 p8^-1 p4 p1^-1 p7^-1",
            "p5^-1 p2^-1 p5 p1 p3 p8^-1",
            "p5^-1 p2^-1 p5 p1",
            "p5^-1",
        ),
        ("p6^-1", "p4 p1^-1 p2 p3^-1", "p3", "p2^-1"),
        (((0, -2), (-2, 0)), ((-4, 0), (0, 2)), ((-4, 2), (4, 0)), ((2, 0), (0, -2))),
        "Mc", "b", 108,
    )


_PIC_ODD = {
    "g1": "j^8 a1^-1 a2 a1 a3 a1^-1 j^4 a2 a1",
    "g3": "j^4 a2 a1 a2^-2 a1^-1 a3 j^4 a3^3 j^4",
    "g5": "j^8 a1^-1 j^4 a2 a1 j^4 a3 a2^-1 a1 a3 a1^-1 j^8",
    "g7": "j^8 a2 a1 j^4 a3^-1 j^4 a2 a1^-1 a2^-1 a3^-3 j^8",
    "g9": "j^8 a1^-1 a2^-2 a1^-1 a3^-1 j^8 a1^-1 a2^-1 j^8",
    "g12": "a2^-1 a1 a3 a1^-1 a3^-1 j^4 a3 a1 a2^2 a1^-1 a2^-1 j^8",
    "g15": "j^4 a1 j^4 a2 a3 a1^-1 j^4",
    "g17": "j^8 a1^-2 a2^-1 j^4 a3 a1 a2 a1",
    "g19": "a2^-1 a1 a3 a1^-1 a3^-2 j^4 a1 a2 j^4 a1^-1 a2^-1 j^4",
}
_PIC_REL = (
    "g4 g14^-1 g2^-1 g17^-1 g9 g19 g20 g14 g7^-1 g10^-1 g5^-1 g16^-1 g3^-1 g12^-1 g1 g2 g18^-1 g10 g19^-1 g12 "
    "g8^-1 g11^-1 g6^-1 g15 g16 g4^-1 g13^-1 g1^-1 g17 g18 g11 g20^-1 g13 g7 g8 g9^-1 g5 g6 g15^-1 g3"
)


def _pic() -> SurfaceGroupData:
    defs = dict(_PIC_ODD)
    for nu in (1, 3, 5, 7, 9, 10, 12, 13, 15, 17, 19):
        defs[f"g{nu + 1}"] = f"j^4 ({defs[f'g{nu}']}) j^-4"
    gens = tuple(f"g{i}" for i in range(1, 21))
    return SurfaceGroupData("C3", gens, tuple(defs[g] for g in gens), _PIC_REL, (), (), None, "Mc", "", 324)


def surface_data() -> dict:
    return {d.name: d for d in (_e1(), _e2(), _c1(), _pic())}


def fuv_table(d: SurfaceGroupData) -> list:
    us, vs = d.standard_generators()
    return [(f_of_word(d.expand(u)), f_of_word(d.expand(v))) for u, v in zip(us, vs)]


def verify_surface_data(d: SurfaceGroupData, atlas: lattice.Atlas | None = None, index_check: bool = True) -> list:
    atlas = atlas or lattice.default_atlas()
    certs = []
    elems = [word_to_matrix(to_gamma_word(w)) for w in d.pi_words]
    members = [atlas.is_member(g) for g in elems]
    certs.append(check(f"surface.{d.name}.members", "homology", all(members), True))
    rel = word_to_matrix(to_gamma_word(d.expand(d.relator_word)))
    certs.append(check(f"surface.{d.name}.relator_matrix", "homology", rel.is_identity(), True))
    base = Mirror.slope(0) if d.mirror == "M0" else Mirror.slope(rep.C_PARAM)
    conj = word_to_matrix(lattice.parse_word(d.conjugator)) if d.conjugator else rep.IDENTITY
    mirror = rep.mirror_map(conj, base)
    certs.append(check(f"surface.{d.name}.stabilize_mirror", "homology", all(rep.mirror_map(g, mirror) == mirror for g in elems), True))
    if d.D:
        std = d.standard_relator()
        ok = W.is_cyclic_conjugate(std, d.relator_word) or W.is_cyclic_conjugate(std, W.inverse(d.relator_word))
        certs.append(check(f"surface.{d.name}.standard_relator", "homology", ok, True))
    certs.append(check(f"surface.{d.name}.genus", "homology", d.genus, polygon_genus(d.relator_word)))
    if index_check:
        # conjugate into the base stabilizer, rewrite there, and enumerate cosets
        rewriter = atlas.gamma0_rewriter if d.mirror == "M0" else atlas.gammac_rewriter
        pres = lattice.GAMMA0 if d.mirror == "M0" else lattice.GAMMAC
        cinv = conj.inverse()
        subgens = [rewriter.rewrite(cinv * g * conj) for g in elems]
        idx = todd_coxeter(pres, subgens).index
        certs.append(check(f"surface.{d.name}.index", "homology", idx, d.expected_index))
    return certs


def verify_e2_conjugation() -> list:
    """The listed generators of the M_infinity group are k g_i k^-1 for the E1 generators g_i."""
    k = word_to_matrix(lattice.parse_word("u^-1v^2uj^6"))
    kinv = k.inverse()
    e1, e2 = _e1(), _e2()
    ok = [word_to_matrix(to_gamma_word(b)) == k * word_to_matrix(to_gamma_word(a)) * kinv for a, b in zip(e1.pi_words, e2.pi_words)]
    return [check("surface.E2.conjugates_of_E1", "homology", ok, [True] * 8)]


# ---------------------------------------------------------------------------
# certification of f through the abelianization of Pi


def _solve_gl2(ws: Sequence[tuple], fs: Sequence[tuple]):
    """The integer matrix A with w_i . A = f_i for all i, or None."""
    # use the first pair of rows with nonzero determinant
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            a, b = ws[i]
            c, d = ws[j]
            det = a * d - b * c
            if det == 0:
                continue
            inv = ((Fraction(d, det), Fraction(-b, det)), (Fraction(-c, det), Fraction(a, det)))
            rhs = (fs[i], fs[j])
            A = [[sum(inv[r][k] * rhs[k][col] for k in range(2)) for col in range(2)] for r in range(2)]
            if any(x.denominator != 1 for row in A for x in row):
                return None
            A = tuple(tuple(int(x) for x in row) for row in A)
            if all(_vecmat(w, A) == tuple(f) for w, f in zip(ws, fs)):
                return A
            return None
    return None


@dataclass
class AbelianMap:
    """f realized through coset-table rewriting and Smith normal form coordinates."""

    sp: object
    aq: object
    A: tuple

    def __call__(self, w: Sequence[int]) -> tuple:
        from .fpgrp.rs import abelianized_vector

        free, torsion = self.aq.coordinates(abelianized_vector(self.sp, w))
        return _vecmat(free, self.A)


def certify_f(atlas: lattice.Atlas | None = None) -> tuple:
    coords, sp, aq = lattice.pi_abelian_coordinates(atlas)
    fs = [F_GENERATORS[i] for i in (1, 2, 3)]
    A = _solve_gl2([tuple(c) for c in coords], fs)
    det = None if A is None else A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return coords, A, det, AbelianMap(sp, aq, A) if A is not None else None


def verify_homology(atlas: lattice.Atlas | None = None, index_check: bool = True) -> list:
    atlas = atlas or lattice.default_atlas()
    certs = []
    certs.append(check("f.a1a2-1a3^2", "homology", f_of_word("a1 a2^-1 a3^2"), (1, 0)))
    certs.append(check("f.a1^3a2^-2a3^7", "homology", f_of_word("a1^3 a2^-2 a3^7"), (0, 0)))
    coords, A, det, fmap = certify_f(atlas)
    certs.append(check("f.well_defined", "homology", det in (1, -1), True, snf_coordinates=coords, matrix=A))
    twist_ok = []
    for name, rhs in lattice.NORMALIZER_RELATIONS.items():
        lhs = f_of_word(f"j^4 {name} j^-4")
        twist_ok.append(lhs == f_of_word(rhs))
    certs.append(check("f.twist_matches_normalizer", "homology", twist_ok, [True] * 3))
    datas = surface_data()
    sums = {}
    for name in ("E1", "E2", "C1"):
        d = datas[name]
        certs.extend(verify_surface_data(d, atlas, index_check))
        table = fuv_table(d)
        certs.append(check(f"fuv.{name}", "homology", [list(map(tuple, p)) for p in table], [list(p) for p in d.expected_table]))
        if fmap is not None:
            us, vs = d.standard_generators()
            alt = [(fmap(to_gamma_word(d.expand(u))), fmap(to_gamma_word(d.expand(v)))) for u, v in zip(us, vs)]
            certs.append(check(f"fuv.{name}.abelianization_route", "homology", alt, table))
        sums[name] = degree_sum(table)
    certs.extend(verify_surface_data(datas["C3"], atlas, index_check))
    certs.extend(verify_e2_conjugation())
    certs.append(check("degree_sums", "homology", sums, {"E1": -60, "E2": -12, "C1": -24}))
    return certs


def curve_degrees() -> tuple:
    datas = surface_data()
    return tuple(abs(degree_sum(fuv_table(datas[n]))) for n in ("E1", "E2", "C1"))


def random_pi_word(rng: random.Random, length: int) -> tuple:
    """A random word over a1, a2, a3 and j^{+-4}, with the j-exponent balanced at the end."""
    w = []
    jexp = 0
    for _ in range(length):
        if rng.random() < 0.25:
            s = rng.choice((4, -4))
            w.extend([4 if s > 0 else -4] * 4)
            jexp += s
        else:
            w.append(rng.choice((1, -1, 2, -2, 3, -3)))
    r = (-jexp) % 12
    w.extend([4] * r)
    return tuple(w)


def homomorphism_checks(n: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    hom_bad = 0
    twist_bad = 0
    for _ in range(n):
        w1 = random_pi_word(rng, rng.randint(0, 12))
        w2 = random_pi_word(rng, rng.randint(0, 12))
        a, b = f_of_word(w1), f_of_word(w2)
        if f_of_word(w1 + w2) != (a[0] + b[0], a[1] + b[1]):
            hom_bad += 1
        conj = (4,) * 4 + w1 + (-4,) * 4
        if f_of_word(conj) != _vecmat(a, TWIST):
            twist_bad += 1
    m3 = ((1, 0), (0, 1))
    for _ in range(3):
        m3 = tuple(tuple(sum(m3[i][k] * TWIST[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return [
        check("f.homomorphism", "properties", hom_bad, 0, inputs=(n, seed)),
        check("f.twist", "properties", twist_bad, 0, inputs=(n, seed)),
        check("f.twist_order", "properties", m3, ((1, 0), (0, 1))),
    ]
