"""Reidemeister-Schreier presentations of finite-index subgroups and Tietze simplification."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from . import words as W
from .coset import CosetTable
from .presentation import Presentation
from .snf import AbelianQuotient


@dataclass
class SubgroupPresentation:
    """A presentation of a subgroup H together with each generator as a word in the parent group."""

    presentation: Presentation
    gen_words: list
    table: CosetTable | None = None
    _schreier_index: dict = field(default_factory=dict, repr=False)

    def rewrite(self, w: Sequence[int]) -> tuple:
        """Express a parent word lying in H in the Schreier generators (before any simplification)."""
        if self.table is None:
            raise ValueError("rewriting requires the coset table")
        out = []
        c = 0
        tab = self.table.table
        for x in w:
            if x > 0:
                d = tab[c][2 * (x - 1)]
                y = self._schreier_index.get((c, x))
                if y is not None:
                    out.append(y)
                c = d
            else:
                d = tab[c][2 * (-x - 1) + 1]
                y = self._schreier_index.get((d, -x))
                if y is not None:
                    out.append(-y)
                c = d
        if c != 0:
            raise ValueError("word does not lie in the subgroup")
        return W.free_reduce(out)


def _spanning_tree(t: CosetTable) -> set:
    """Edges (coset, positive letter) used by the breadth-first Schreier transversal."""
    tree = set()
    seen = [False] * t.index
    seen[0] = True
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for col in range(2 * t.ngens):
            d = t.table[c][col]
            if not seen[d]:
                seen[d] = True
                queue.append(d)
                letter = col // 2 + 1
                tree.add((c, letter) if col % 2 == 0 else (d, letter))
    return tree


def reidemeister_schreier(t: CosetTable, p: Presentation) -> SubgroupPresentation:
    """Schreier generators y_(c,x) = rep(c) x rep(c.x)^-1 for non-tree edges, and rewritten relators."""
    reps = t.representatives()
    tree = _spanning_tree(t)
    index: dict = {}
    gen_words = []
    names = []
    for c in range(t.index):
        for x in range(1, t.ngens + 1):
            if (c, x) in tree:
                continue
            d = t.table[c][2 * (x - 1)]
            index[(c, x)] = len(gen_words) + 1
            gen_words.append(W.free_reduce(reps[c] + (x,) + W.inverse(reps[d])))
            names.append(f"y{len(gen_words)}")
    sp = SubgroupPresentation(Presentation(tuple(names), ()), gen_words, t, index)
    rels = []
    for c in range(t.index):
        for r in p.relators:
            conj = reps[c] + tuple(r) + W.inverse(reps[c])
            rels.append(W.cyclic_reduce(sp.rewrite(conj)))
    sp.presentation = Presentation(tuple(names), tuple(r for r in rels if r))
    return sp


def abelian_quotient(sp: SubgroupPresentation) -> AbelianQuotient:
    n = sp.presentation.ngens
    rows = []
    for r in sp.presentation.relators:
        row: dict = {}
        for x in r:
            k = abs(x) - 1
            row[k] = row.get(k, 0) + (1 if x > 0 else -1)
        rows.append(row)
    return AbelianQuotient(rows, n)


def abelianized_vector(sp: SubgroupPresentation, w: Sequence[int]) -> dict:
    """Exponent-sum vector, over the Schreier generators, of a parent word lying in the subgroup."""
    v: dict = {}
    for x in sp.rewrite(w):
        k = abs(x) - 1
        v[k] = v.get(k, 0) + (1 if x > 0 else -1)
    return v


def tietze_simplify(p: Presentation, gen_words: Sequence | None = None, max_relator_length: int = 10_000) -> tuple:
    """Eliminate generators occurring exactly once in some relator; drop duplicate relators.

    Returns (presentation, gen_words restricted to the surviving generators).
    Surviving generators keep their original names.
    """
    rels: dict = {}
    seen_forms: set = set()
    occ: dict = {g: set() for g in range(1, p.ngens + 1)}

    def add(r):
        r = W.cyclic_reduce(r)
        if not r:
            return
        form = W.cyclic_normal_form(r)
        if form in seen_forms:
            return
        seen_forms.add(form)
        rid = len(rels_order)
        rels_order.append(rid)
        rels[rid] = r
        for x in r:
            occ[abs(x)].add(rid)

    def remove(rid):
        r = rels.pop(rid)
        seen_forms.discard(W.cyclic_normal_form(r))
        for x in r:
            occ[abs(x)].discard(rid)

    rels_order: list = []
    for r in p.relators:
        add(r)
    alive_gens = set(range(1, p.ngens + 1))

    while True:
        best = None
        for rid in sorted(rels, key=lambda i: (len(rels[i]), i)):
            r = rels[rid]
            if best is not None and len(r) - 1 > best[0]:
                break
            counts: dict = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, cnt in counts.items():
                if cnt == 1:
                    cost = (len(r) - 1) * (len(occ[g]) - 1)
                    key = (cost, len(r), g)
                    if best is None or key < best[1]:
                        best = (len(r) - 1, key, rid, g)
            if best is not None and best[1][0] == 0:
                break
        if best is None:
            break
        _, _, rid, g = best
        r = rels[rid]
        if len(r) - 1 > max_relator_length:
            break
        k = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[k:] + r[:k]
        if rot[0] < 0:
            rot = W.inverse(rot)
            k = next(i for i, x in enumerate(rot) if abs(x) == g)
            rot = rot[k:] + rot[:k]
        replacement = W.inverse(rot[1:])  # g * rest = 1  =>  g = rest^-1
        remove(rid)
        alive_gens.discard(g)
        touched = sorted(occ[g])
        for other in touched:
            rold = rels[other]
            remove(other)
            add(W.substitute(rold, {h: ((h,) if h != g else replacement) for h in {abs(x) for x in rold}}))
    survivors = sorted(alive_gens)
    renum = {g: i + 1 for i, g in enumerate(survivors)}
    new_rels = []
    for rid in sorted(rels):
        new_rels.append(tuple((renum[abs(x)] if x > 0 else -renum[abs(x)]) for x in rels[rid]))
    names = tuple(p.generators[g - 1] for g in survivors)
    words_out = [gen_words[g - 1] for g in survivors] if gen_words is not None else None
    return Presentation(names, tuple(new_rels)), words_out
