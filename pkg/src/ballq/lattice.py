"""The lattice atlas: presentations, the subgroup Pi of index 864, membership tests,
torsion census, point and mirror stabilizers, and rewriting into mirror-stabilizer generators.
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import rep
from .certs import check
from .cyclo import FIELDS, I_UNIT, CycNum, reduce_mod
from .fpgrp import Presentation, todd_coxeter
from .fpgrp import words as W
from .fpgrp.cache import cached_todd_coxeter
from .fpgrp.rs import abelian_quotient, abelianized_vector, reidemeister_schreier
from .rep import IDENTITY, Mirror, ProjElement, parse_word, word_to_matrix

# ---------------------------------------------------------------------------
# presentations

GAMMA_RELATORS = ("u^3", "v^4", "b^3", "(uv)^2 = (vu)^2", "vb = bv", "(buv)^3", "(buvu)^2 v")
GAMMA = Presentation.from_strings(("u", "v", "b"), GAMMA_RELATORS)
K_PRES = Presentation.from_strings(("u", "v"), ("u^3", "v^4", "(uv)^2 = (vu)^2"))

GAMMA0 = Presentation.from_strings(
    ("s2", "s3", "s12", "z0"),
    (
        "s12^12",
        "s3^3",
        "s2^2 = z0^3",
        "z0^4",
        "s12 z0 = z0 s12",
        "s3 z0 = z0 s3",
        "s2 z0 = z0 s2",
        "s12 s3 s2",
    ),
)
GAMMA0_WORDS = {"s2": "(jb)^-1", "s3": "b", "s12": "j", "z0": "v"}

GAMMAC = Presentation.from_strings(
    ("t2", "t4", "t12", "zc"),
    (
        "t12^12",
        "t4^4 = zc",
        "t2^2",
        "zc^3",
        "t12 zc = zc t12",
        "t4 zc = zc t4",
        "t2 zc = zc t2",
        "t12 t4 t2",
    ),
)
GAMMAC_WORDS = {"t2": "(bu^-1)^2", "t4": "j^-1 (bu^-1)^2", "t12": "j", "zc": "u"}

GAMMA34 = Presentation.from_strings(
    ("J", "R1", "A1"),
    ("J^3", "R1^3", "A1^4", "A1 = (J R1^-1 J)^2", "A1 R1 = R1 A1"),
)
GAMMA34_INVERSE = {"J": "buv", "R1": "b", "A1": "v", "R2": "u"}

PI_WORDS = {
    "a1": "v u v^-1 j^4 b u v j^2",
    "a2": "v^2 u b u v^-1 u v^2 j",
    "a3": "u^-1 v^2 u j^9 b v^-1 u v^-1 j^8",
}

# j^4 a_i j^-4 rewritten in the a_i
NORMALIZER_RELATIONS = {
    "a1": "a3 a2^-3 a3^3 a1",
    "a2": "a3^-1",
    "a3": "a1^-1 a2^-1 a1 a2^2 a1^-1 a2^-1 a1 a3^-1 a1^-1 a2 a1",
}

TORSION_TABLE = {
    2: ("v^2", "j^6", "(bu^-1)^2"),
    3: ("u", "j^4", "uj^4", "buv"),
    4: ("v", "j^3", "vj^3", "v^2j^3", "bu^-1"),
    6: ("j^2", "v^2j^2", "v^2uj", "v^2uj^5", "bv^2u^-1j", "bv^2"),
    8: ("uvj", "bj", "(bj)^3"),
    12: ("j", "j^5", "uv^-1j^2", "uv^-1j^3", "uv^-1j^6", "uv^-1j^-1", "v^2j", "uv^2", "uj", "uj^3", "bv", "(bv)^-5"),
    24: ("uv", "vuj^2"),
}


def pi_alphabet() -> dict:
    """Names a1, a2, a3 and j for parsing words in Pi and its normalizer."""
    alpha = {k: parse_word(v) for k, v in PI_WORDS.items()}
    alpha["j"] = rep.J_WORD
    return alpha


def pi_word(text: str) -> tuple:
    """Parse a word over a1, a2, a3, j into signed letters over u, v, b."""
    return W.parse(text, pi_alphabet())


def gens_alphabet(words: dict) -> dict:
    return {k: parse_word(v) for k, v in words.items()}


def _substitute_presentation_word(w, p: Presentation, words: dict) -> tuple:
    images = [parse_word(words[name]) for name in p.generators]
    return W.substitute(w, images)


def presentation_holds(p: Presentation, words: dict) -> list:
    """(relator text, holds) for each relator of p under generator images given as u, v, b words."""
    out = []
    for r in p.relators:
        out.append((p.format(r), word_to_matrix(_substitute_presentation_word(r, p, words)).is_identity()))
    return out


# ---------------------------------------------------------------------------
# finite subgroups


@dataclass
class FiniteSubgroup:
    elements: list
    words: list | None = None

    def __post_init__(self):
        self._index = {g.p: i for i, g in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: ProjElement) -> bool:
        return g.p in self._index

    def __iter__(self):
        return iter(self.elements)

    def word_of(self, g: ProjElement):
        return self.words[self._index[g.p]] if self.words is not None else None

    def is_closed(self) -> bool:
        for g in self.elements:
            if g.inverse() not in self:
                return False
            for h in self.elements:
                if g * h not in self:
                    return False
        return True


def closure(gens: Sequence[ProjElement], limit: int = 10_000) -> FiniteSubgroup:
    """Breadth-first closure of a set of elements under right multiplication; words are kept."""
    elems = [IDENTITY]
    seen = {IDENTITY.p}
    k = 0
    while k < len(elems):
        g = elems[k]
        k += 1
        for s in gens:
            h = g * s
            if h.p not in seen:
                seen.add(h.p)
                elems.append(h)
                if len(elems) > limit:
                    raise RuntimeError(f"closure exceeds {limit} elements")
    words = [g.word for g in elems] if all(g.word is not None for g in elems) else None
    return FiniteSubgroup(elems, words)


def finite_subgroup_words(h: FiniteSubgroup, ambient: dict, depth: int = 8) -> dict:
    """A word over the named ambient generators for every element of h, by breadth-first search.

    ``ambient`` maps generator names to ProjElements. Returns {element key: signed-letter word
    over the ambient generators in the given order}.
    """
    names = list(ambient)
    letters = []
    for i, name in enumerate(names):
        g = ambient[name]
        letters.append((i + 1, g))
        letters.append((-(i + 1), g.inverse()))
    want = {g.p for g in h}
    found = {}
    if IDENTITY.p in want:
        found[IDENTITY.p] = ()
    frontier = [(IDENTITY, ())]
    seen = {IDENTITY.p}
    for _ in range(depth):
        if len(found) == len(want):
            break
        nxt = []
        for g, w in frontier:
            for x, s in letters:
                e = ProjElement(rep.imul(g.p, s.p))
                if e.p in seen:
                    continue
                seen.add(e.p)
                ww = w + (x,)
                if e.p in want:
                    found[e.p] = ww
                nxt.append((e, ww))
        frontier = nxt
    if len(found) != len(want):
        raise RuntimeError(f"{len(want) - len(found)} elements not reached at depth {depth}")
    return found


# ---------------------------------------------------------------------------
# congruence description


def _gf_matmul(p: int, A: Sequence[int], B: Sequence[int]) -> tuple:
    ft = FIELDS[p]
    add, mul = ft.add, ft.mul
    out = []
    for i in range(3):
        for j in range(3):
            acc = 0
            for k in range(3):
                acc = add[acc][mul[A[3 * i + k]][B[3 * k + j]]]
            out.append(acc)
    return tuple(out)


def gf_det(p: int, m: Sequence[int]) -> int:
    ft = FIELDS[p]
    add, mul, neg = ft.add, ft.mul, ft.neg

    def minor(a, b, c, d):
        return add[mul[a][d]][neg[mul[b][c]]]

    t0 = mul[m[0]][minor(m[4], m[5], m[7], m[8])]
    t1 = mul[m[1]][minor(m[3], m[5], m[6], m[8])]
    t2 = mul[m[2]][minor(m[3], m[4], m[6], m[7])]
    return add[add[t0][neg[t1]]][t2]


def gf_normalize(p: int, m: Sequence[int]) -> tuple:
    """Scale a nonzero matrix over F_4 or F_9 so its first nonzero entry is 1."""
    ft = FIELDS[p]
    for x in m:
        if x:
            inv = ft.inv[x]
            return tuple(ft.mul[inv][y] for y in m)
    raise ValueError("zero matrix")


def gf_closure(p: int, gens: Sequence[tuple], limit: int = 100_000) -> set:
    ident = gf_normalize(p, tuple(FIELDS[p].from_int(int(i % 4 == 0)) for i in range(9)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = gf_normalize(p, _gf_matmul(p, x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise RuntimeError("closure limit exceeded")
        frontier = nxt
    return seen


@dataclass
class CongruenceData:
    rho2: dict
    rho3: dict
    g21: frozenset
    rho2_image_order: int
    det2_image: frozenset


def congruence_data() -> CongruenceData:
    gens = rep.generators()
    rho2 = {k: gens[k].reduce(2) for k in "uvb"}
    rho3 = {k: gens[k].reduce(3) for k in "uvb"}
    a = [word_to_matrix(parse_word(w)) for w in PI_WORDS.values()]
    g21 = frozenset(gf_closure(3, [gf_normalize(3, x.reduce(3)) for x in a]))
    img2 = gf_closure(2, [gf_normalize(2, m) for m in rho2.values()])
    dets = frozenset(gf_det(2, m) for m in img2)
    return CongruenceData(rho2, rho3, g21, len(img2), dets)


@dataclass
class MembershipTest:
    """Congruence membership in Pi: det of rho_2 trivial and rho_3 in the order-21 subgroup."""

    g21: frozenset

    def __call__(self, g: ProjElement) -> bool:
        if gf_det(2, g.reduce(2)) != 1:
            return False
        return gf_normalize(3, g.reduce(3)) in self.g21


# ---------------------------------------------------------------------------
# descent rewriting into the generators of a point-and-mirror stabilizer


def height(g: ProjElement) -> float:
    """|g_33|^2 for the F-unitary representative; equals 1 exactly when g fixes O."""
    x = rep.Mat3.from_int(g.p)[2, 2]
    return abs(x.embed()) ** 2


class DescentRewriter:
    """Express elements of a mirror stabilizer containing K-elements as words in its named generators.

    Each step left-multiplies by s*h (s a generator or inverse, h in the stabilizer of O
    inside the group) to reduce the height; at height 1 the remainder is looked up.
    The result is always verified by matrix equality.
    """

    def __init__(self, named: dict, stab_o: FiniteSubgroup, max_steps: int = 200):
        self.names = list(named)
        self.named = named
        self.max_steps = max_steps
        self.stab_words = finite_subgroup_words(stab_o, named)
        self.stab = stab_o
        moves = []
        for i, name in enumerate(self.names):
            for sign in (1, -1):
                s = named[name] if sign > 0 else named[name].inverse()
                for h in stab_o:
                    moves.append((s * h, (sign * (i + 1),) + self.stab_words[h.p]))
        self.moves = moves

    def rewrite(self, g: ProjElement) -> tuple:
        cur = g
        prefix: list = []  # g = m1^-1 m2^-1 ... cur
        for _ in range(self.max_steps):
            hcur = height(cur)
            if hcur < 1 + 1e-9:
                break
            best = None
            for m, w in self.moves:
                cand = m * cur
                hc = height(cand)
                if best is None or hc < best[0]:
                    best = (hc, cand, w)
            if best[0] >= hcur - 1e-12:
                raise RuntimeError("descent stalled")
            prefix.append(best[2])
            cur = best[1]
        else:
            raise RuntimeError("descent did not terminate")
        if cur not in self.stab:
            raise RuntimeError("descent ended outside the point stabilizer")
        word: tuple = ()
        for w in prefix:
            word = word + W.inverse(w)
        word = W.free_reduce(word + self.stab_words[cur.p])
        if self.evaluate(word) != g:
            raise RuntimeError("rewritten word does not evaluate to the element")
        return word

    def evaluate(self, w: Sequence[int]) -> ProjElement:
        acc = IDENTITY
        for x in w:
            s = self.named[self.names[abs(x) - 1]]
            acc = acc * (s if x > 0 else s.inverse())
        return acc


# ---------------------------------------------------------------------------
# the atlas


def _named_elements(words: dict) -> dict:
    return {k: word_to_matrix(parse_word(v)) for k, v in words.items()}


def conjugate_words(words: dict, g: str) -> dict:
    return {k: f"({g}) ({v}) ({g})^-1" for k, v in words.items()}


class Atlas:
    """Lazily built tables and finite groups shared by all verifications."""

    def __init__(self, max_cosets: int = 2_000_000, cache_dir=None):
        self.max_cosets = max_cosets
        self.cache_dir = cache_dir

    # words and elements
    @cached_property
    def pi_gens(self) -> list:
        return [parse_word(PI_WORDS[k]) for k in ("a1", "a2", "a3")]

    @cached_property
    def pi_table(self):
        t = cached_todd_coxeter(GAMMA, self.pi_gens, self.cache_dir, self.max_cosets)
        if not t.is_closed():
            raise RuntimeError("coset table is not closed")
        return t

    @cached_property
    def K(self) -> FiniteSubgroup:
        g = rep.generators()
        return closure([g["u"], g["v"]])

    @cached_property
    def congruence(self) -> CongruenceData:
        return congruence_data()

    @cached_property
    def is_member(self) -> MembershipTest:
        return MembershipTest(self.congruence.g21)

    @cached_property
    def coset_reps(self) -> list:
        """The words b^mu k, mu in (0, 1, -1), k in K."""
        out = []
        for mu in ((), (3,), (-3,)):
            for kw in self.K.words:
                out.append((mu, kw, mu + tuple(kw)))
        return out

    @cached_property
    def gamma0_named(self) -> dict:
        return _named_elements(GAMMA0_WORDS)

    @cached_property
    def gammac_named(self) -> dict:
        return _named_elements(GAMMAC_WORDS)

    def stab_o_in(self, mirror: Mirror) -> FiniteSubgroup:
        elems = [k for k in self.K if rep.mirror_map(k, mirror) == mirror]
        words = [self.K.word_of(k) for k in elems]
        return FiniteSubgroup(elems, words)

    @cached_property
    def gamma0_rewriter(self) -> DescentRewriter:
        return DescentRewriter(self.gamma0_named, self.stab_o_in(Mirror.slope(0)))

    @cached_property
    def gammac_rewriter(self) -> DescentRewriter:
        return DescentRewriter(self.gammac_named, self.stab_o_in(Mirror.slope(rep.C_PARAM)))

    def mirror_group_orbit(self, start_word: Sequence[int], gens_words: dict) -> tuple:
        """Orbit of the coset trace(0, start) under a mirror stabilizer, with Schreier data.

        Returns (orbit list, reps as words over the stabilizer generators, acting u,v,b words).
        """
        t = self.pi_table
        acting = [parse_word(gens_words[n]) for n in gens_words]
        start = t.trace(0, start_word)
        reps = {start: ()}
        order = [start]
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for i, w in enumerate(acting):
                for sign in (1, -1):
                    d = t.trace(c, w if sign > 0 else W.inverse(w))
                    if d not in reps:
                        reps[d] = reps[c] + (sign * (i + 1),)
                        order.append(d)
        return order, reps, acting

    def mirror_subgroup_table(self, which: str):
        """Coset table of Pi_M inside the mirror stabilizer, from Schreier generators over its presentation.

        which: 'M0' (Gamma_0), 'Mc' (Gamma_c) or 'bMc' (Gamma_c with cosets of b^-1 Pi b).
        """
        pres, gw, start = {
            "M0": (GAMMA0, GAMMA0_WORDS, ()),
            "Mc": (GAMMAC, GAMMAC_WORDS, ()),
            "bMc": (GAMMAC, GAMMAC_WORDS, (3,)),
        }[which]
        order, reps, acting = self.mirror_group_orbit(start, gw)
        t = self.pi_table
        subgens = []
        for c in order:
            for i, w in enumerate(acting):
                d = t.trace(c, w)
                sw = W.free_reduce(reps[c] + (i + 1,) + W.inverse(reps[d]))
                if sw:
                    subgens.append(sw)
        subgens = sorted(set(subgens), key=lambda w: (len(w), w))
        tab = cached_todd_coxeter(pres, subgens, self.cache_dir, self.max_cosets)
        return len(order), tab, subgens


_DEFAULT: Atlas | None = None


def default_atlas() -> Atlas:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Atlas()
    return _DEFAULT


# ---------------------------------------------------------------------------
# verifications


def verify_presentation() -> list:
    certs = []
    for name, pres, words in (
        ("gamma", GAMMA, {"u": "u", "v": "v", "b": "b"}),
        ("K", K_PRES, {"u": "u", "v": "v"}),
        ("gamma0", GAMMA0, GAMMA0_WORDS),
        ("gammac", GAMMAC, GAMMAC_WORDS),
        ("gamma34", GAMMA34, GAMMA34_INVERSE),
    ):
        results = presentation_holds(pres, words)
        failed = [r for r, ok in results if not ok]
        certs.append(check(f"relators.{name}", "presentation", len(results) - len(failed), len(results), inputs=pres.digest(), failed=failed))
    j = word_to_matrix(rep.J_WORD)
    zeta = rep.CycNum.zeta(1)
    certs.append(check("j_diagonal", "presentation", j == ProjElement.from_matrix(rep.Mat3.diag(zeta, zeta, 1)), True))
    r2 = word_to_matrix(parse_word("(buv) b (buv)^-1"))
    certs.append(check("gamma34.R2_is_u", "presentation", r2 == word_to_matrix("u"), True))
    return certs


def enumerate_K(atlas: Atlas | None = None) -> FiniteSubgroup:
    atlas = atlas or default_atlas()
    K = atlas.K
    if len(K) != 288:
        raise RuntimeError(f"K has order {len(K)}")
    return K


def verify_K(atlas: Atlas | None = None) -> list:
    K = enumerate_K(atlas)
    j = word_to_matrix(rep.J_WORD)
    central = all(k * j == j * k for k in K)
    v2 = rep.element_order(word_to_matrix("v^2"))
    return [
        check("K.order", "presentation", len(K), 288),
        check("K.center_contains_j", "presentation", central, True),
        check("K.order_v2", "presentation", v2, 2),
        check("K.tc_order", "presentation", todd_coxeter(K_PRES).index, 288),
    ]


def verify_dm_isomorphism(atlas: Atlas | None = None) -> list:
    results = presentation_holds(GAMMA34, GAMMA34_INVERSE)
    certs = [check("gamma34.relators", "presentation", all(ok for _, ok in results), True)]
    gens = rep.generators()
    sub = closure([gens["v"], gens["u"]])
    certs.append(check("gamma34.A1R2_order", "presentation", len(sub), 288))
    return certs


def pi_membership(g: ProjElement | str | Sequence[int], atlas: Atlas | None = None) -> bool:
    atlas = atlas or default_atlas()
    if not isinstance(g, ProjElement):
        g = word_to_matrix(g)
    return atlas.is_member(g)


def random_word(rng: random.Random, length: int) -> tuple:
    letters = (1, -1, 2, -2, 3, -3)
    return tuple(rng.choice(letters) for _ in range(length))


def membership_crosscheck(n: int, seed: int = 0, atlas: Atlas | None = None) -> list:
    """Congruence membership agrees with coset-table tracing on random words and on the 864 representatives."""
    atlas = atlas or default_atlas()
    t = atlas.pi_table
    rng = random.Random(seed)
    reps = t.representatives()
    agree = 0
    members = 0
    for i in range(n):
        w = random_word(rng, rng.randint(1, 30))
        if i % 2:
            w = W.free_reduce(w + W.inverse(reps[t.trace(0, w)]))  # forced into Pi by the table
        a = atlas.is_member(word_to_matrix(w))
        b = t.contains(w)
        agree += a == b
        members += b
    rep_members = []
    cosets = set()
    for mu, kw, w in atlas.coset_reps:
        if atlas.is_member(word_to_matrix(w)) != t.contains(w):
            rep_members.append(("disagree", w))
        elif t.contains(w):
            rep_members.append(w)
        cosets.add(t.trace(0, w))
    return [
        check("membership.random_agreement", "properties", agree, n, inputs=(n, seed), members=members),
        check("membership.reps_members", "properties", rep_members, [()]),
        check("membership.reps_distinct_cosets", "properties", len(cosets), 864),
    ]


def reduction_properties(n: int, seed: int = 0) -> list:
    """Reduction to F_4 and F_9 respects sums and products of numbers and products of group elements."""
    rng = random.Random(seed)
    scalar_bad = 0
    matrix_bad = 0
    for _ in range(n):
        x = CycNum(*(rng.randint(-6, 6) for _ in range(4)))
        y = CycNum(*(rng.randint(-6, 6) for _ in range(4)))
        for p in (2, 3):
            rx, ry = reduce_mod(x, p), reduce_mod(y, p)
            if reduce_mod(x + y, p) != rx + ry or reduce_mod(x * y, p) != rx * ry or reduce_mod(-x, p) != -rx:
                scalar_bad += 1
        g = word_to_matrix(random_word(rng, rng.randint(0, 12)))
        h = word_to_matrix(random_word(rng, rng.randint(0, 12)))
        for p in (2, 3):
            lhs = gf_normalize(p, (g * h).reduce(p))
            rhs = gf_normalize(p, _gf_matmul(p, g.reduce(p), h.reduce(p)))
            if lhs != rhs:
                matrix_bad += 1
    return [
        check("reduction.scalar_morphism", "properties", scalar_bad, 0, inputs=(n, seed)),
        check("reduction.matrix_morphism", "properties", matrix_bad, 0, inputs=(n, seed)),
    ]


def table_representatives() -> list:
    """(order, word text, element) for every entry of the torsion table."""
    out = []
    for order, ws in TORSION_TABLE.items():
        for w in ws:
            out.append((order, w, word_to_matrix(parse_word(w))))
    return out


def torsion_census(atlas: Atlas | None = None) -> list:
    atlas = atlas or default_atlas()
    K = atlas.K
    reps = table_representatives()
    order_ok = [w for order, w, g in reps if rep.element_order(g, 24) != order]
    invariants = {}
    for order, w, g in reps:
        invariants[rep.char_poly_invariant(g)] = w
        invariants[rep.char_poly_invariant(g.inverse())] = w + "^-1"
    counts = {}
    unmatched = 0
    for label, prefix in (("K", ""), ("bK", "b"), ("bu^-1bK", "bu^-1b")):
        pre = word_to_matrix(prefix) if prefix else IDENTITY
        n = 0
        for k in K:
            g = pre * k
            if g.is_identity():
                continue
            if rep.element_order(g, 24) is not None:
                n += 1
                if rep.char_poly_invariant(g) not in invariants:
                    unmatched += 1
        counts[label] = n
    row_counts = {order: len(ws) for order, ws in TORSION_TABLE.items()}
    return [
        check("torsion.total", "torsion", sum(counts.values()), 408, counts=counts),
        check("torsion.in_bK", "torsion", counts["bK"], 76),
        check("torsion.in_bu-1bK", "torsion", counts["bu^-1bK"], 45),
        check("torsion.unmatched_invariants", "torsion", unmatched, 0),
        check("torsion.table_orders", "torsion", order_ok, []),
        check("torsion.table_rows", "torsion", row_counts, {2: 3, 3: 4, 4: 5, 6: 6, 8: 3, 12: 12, 24: 2}),
    ]


def torsion_freeness(atlas: Atlas | None = None) -> list:
    """No conjugate r t r^-1 (t a table representative or inverse, r = b^mu k) lies in Pi, by both membership routes."""
    atlas = atlas or default_atlas()
    t = atlas.pi_table
    reps = table_representatives()
    table_hits = 0
    for _, w, g in reps:
        tw = parse_word(w)
        for x in (tw, W.inverse(tw)):
            perm = t.word_permutation(x)
            table_hits += sum(1 for c in range(t.index) if perm[c] == c)
    cong_hits = 0
    tests = 0
    rep_elems = [word_to_matrix(w) for _, _, w in atlas.coset_reps]
    rep_pairs = [(r.p, r.inverse().p) for r in rep_elems]
    for _, _, g in reps:
        for x in (g, g.inverse()):
            for r, rinv in rep_pairs:
                tests += 1
                if atlas.is_member(ProjElement(rep.imul(rep.imul(r, x.p), rinv))):
                    cong_hits += 1
    return [
        check("torsion_free.table", "torsion", table_hits, 0),
        check("torsion_free.congruence", "torsion", cong_hits, 0, tests=tests),
    ]


def verify_normalizer_relations() -> list:
    alpha = pi_alphabet()
    certs = []
    for name, rhs in NORMALIZER_RELATIONS.items():
        lhs = W.parse(f"j^4 {name} j^-4", alpha)
        ok = word_to_matrix(lhs) == word_to_matrix(W.parse(rhs, alpha))
        certs.append(check(f"normalizer.{name}", "index", ok, True))
    return certs


def verify_index(atlas: Atlas | None = None) -> list:
    atlas = atlas or default_atlas()
    t = atlas.pi_table
    certs = [check("pi_index", "index", t.index, 864)]
    sp = reidemeister_schreier(t, GAMMA)
    aq = abelian_quotient(sp)
    certs.append(check("pi_abelianization", "index", aq.invariants(), [0, 0], schreier_generators=sp.presentation.ngens))
    alls = todd_coxeter(GAMMA, [(1,), (2,), (3,)]).index
    certs.append(check("trivial_index", "index", alls, 1))
    for which, expected in (("M0", 288), ("Mc", 324), ("bMc", 108)):
        orbit_size, tab, _ = atlas.mirror_subgroup_table(which)
        certs.append(check(f"index.{which}.orbit", "index", orbit_size, expected))
        certs.append(check(f"index.{which}.coset_enumeration", "index", tab.index, expected))
    certs.extend(verify_normalizer_relations())
    return certs


def pi_abelian_coordinates(atlas: Atlas | None = None) -> tuple:
    """Coordinates of a1, a2, a3 in Pi^ab = Z^2 for the Smith basis, with the quotient object."""
    atlas = atlas or default_atlas()
    sp = reidemeister_schreier(atlas.pi_table, GAMMA)
    aq = abelian_quotient(sp)
    coords = [aq.coordinates(abelianized_vector(sp, w))[0] for w in atlas.pi_gens]
    return coords, sp, aq


# ---------------------------------------------------------------------------
# stabilizers of points and mirrors


def _point_key(x: rep.BallPoint) -> tuple:
    if x.exact is not None:
        return rep.exact_key(x.exact)
    return (round(x.z.real, 7), round(x.z.imag, 7), round(x.w.real, 7), round(x.w.imag, 7))


def _word_letters() -> list:
    gens = rep.generators()
    out = []
    for name in ("u", "v", "b", "j"):
        g = gens[name]
        out.append(g)
        out.append(g.inverse())
    return out


def point_stabilizer(x: rep.BallPoint, expected_order: int, depth: int = 8) -> FiniteSubgroup:
    """Stabilizer of a ball point by breadth-first search of its orbit.

    Two words reaching the same orbit point give a stabilizer element g^-1 h; the search
    stops once the closure of those elements reaches the expected order.
    """
    letters = _word_letters()
    seen = {_point_key(x): IDENTITY}
    frontier = [(x, IDENTITY)]
    found: list = []
    group = closure([])
    for _ in range(depth):
        nxt = []
        for y, g in frontier:
            for s in letters:
                h = s * g
                z = rep.ball_action(s, y)
                key = _point_key(z)
                if key in seen:
                    e = seen[key].inverse() * h
                    if e not in group:
                        if not rep.is_fixed(e, x):
                            raise RuntimeError("orbit key collision for distinct points")
                        found.append(e)
                        group = closure(found, limit=10 * expected_order + 10)
                        if len(group) >= expected_order:
                            if len(group) != expected_order:
                                raise RuntimeError(f"stabilizer larger than expected: {len(group)}")
                            return group
                else:
                    seen[key] = h
                    nxt.append((z, h))
        frontier = nxt
    raise RuntimeError(f"stabilizer incomplete at depth {depth}: found {len(group)}")


def special_points() -> dict:
    """Representative points with fixed stabilizer orders."""
    x3 = rep.mirror_intersection(Mirror.slope(0), rep.reflection_mirror(word_to_matrix("b")))
    return {
        "O": (rep.ORIGIN, 288),
        "P": (rep.POINT_P, 24),
        "P3": (x3, 12),
        "P4": (rep.fixed_point(word_to_matrix("bj")), 8),
        "Q": (rep.point_q(), 3),
    }


def verify_stabilizers(depth: int = 8) -> list:
    certs = []
    for name, (x, expected) in special_points().items():
        try:
            h = point_stabilizer(x, expected, depth)
            n = len(h)
        except RuntimeError:
            h, n = None, None
        details = {}
        if name == "P" and h is not None:
            refl = [g for g in h if rep.element_order(g, 3) == 3 and rep.is_reflection(g)]
            details["reflection_mirrors"] = len({rep.reflection_mirror(g) for g in refl})
        certs.append(check(f"stabilizer.{name}", "mirrors", n, expected, **details))
    pts = special_points()
    certs.append(check("stabilizer.O_is_K", "mirrors", len(point_stabilizer(*pts["O"], depth)), 288))
    certs.append(
        check("point_q.formula", "mirrors", rep.point_q().close_to(rep.point_q_formula(), 1e-9), True)
    )
    return certs


C_SIGNS = ("+--", "--+", "---", "+-+", "-++", "-+-", "+++", "++-")
C_WITNESS = ("", "v", "v^2", "v^3", "u^-1v^2u", "vu^-1v^2u", "v^2u^-1v^2u", "v^3u^-1v^2u")
M0_ORBIT = ((0, ""), ("i", "uj"), (-1, "vuj"), ("-i", "v^2uj"), (1, "v^3uj"), (None, "u^-1v^2uj^6"))


def c_value(signs: str) -> rep.CycNum:
    """c_{+-+} etc.: s1 (r + s2) (i + s3) / 2."""
    s = [1 if ch == "+" else -1 for ch in signs]
    return (rep.R + s[1]) * (I_UNIT + s[2]) * Fraction(s[0], 2)


def _slope(alpha) -> Mirror:
    if alpha is None:
        return Mirror.slope(None)
    if alpha == "i":
        return Mirror.slope(I_UNIT)
    if alpha == "-i":
        return Mirror.slope(-I_UNIT)
    return Mirror.slope(alpha)


def verify_korbit_tables(atlas: Atlas | None = None) -> list:
    atlas = atlas or default_atlas()
    K = atlas.K
    mc = Mirror.slope(rep.C_PARAM)
    m0 = Mirror.slope(0)
    orbit_c = {rep.mirror_map(k, mc) for k in K}
    orbit_0 = {rep.mirror_map(k, m0) for k in K}
    targets_c = {Mirror.slope(c_value(s)) for s in C_SIGNS}
    targets_0 = {_slope(a) for a, _ in M0_ORBIT}
    bad_c = [s for s, w in zip(C_SIGNS, C_WITNESS) if rep.mirror_map(word_to_matrix(w), mc) != Mirror.slope(c_value(s))]
    bad_0 = [str(a) for a, w in M0_ORBIT if rep.mirror_map(word_to_matrix(w), m0) != _slope(a)]
    return [
        check("korbit.Mc.size", "mirrors", len(orbit_c), 8),
        check("korbit.Mc.set", "mirrors", orbit_c == targets_c, True),
        check("korbit.Mc.c_value", "mirrors", c_value("+--") == rep.C_PARAM, True),
        check("korbit.Mc.witnesses", "mirrors", bad_c, []),
        check("korbit.M0.size", "mirrors", len(orbit_0), 6),
        check("korbit.M0.set", "mirrors", orbit_0 == targets_0, True),
        check("korbit.M0.witnesses", "mirrors", bad_0, []),
    ]
