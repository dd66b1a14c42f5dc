"""Todd-Coxeter coset enumeration (HLT strategy with coincidence processing).

Columns of the table are indexed 2*i for generator i and 2*i + 1 for its inverse,
so the inverse column of ``x`` is ``x ^ 1``.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .presentation import Presentation

UNDEF = -1


class CosetLimitExceeded(RuntimeError):
    pass


def letter_col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def word_cols(w: Sequence[int]) -> list:
    return [letter_col(x) for x in w]


class CosetTable:
    """A closed coset table; coset 0 is the subgroup itself.

    ``table[c][col]`` is the coset reached from ``c`` by the column's letter.
    Numbering is standardized (breadth-first over columns from coset 0), so two
    enumerations of the same subgroup produce identical tables.
    """

    __slots__ = ("ngens", "table", "subgens")

    def __init__(self, ngens: int, table: list, subgens: Sequence = ()):
        self.ngens = ngens
        self.table = table
        self.subgens = tuple(tuple(w) for w in subgens)

    @property
    def index(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def trace(self, start: int, w: Iterable[int]) -> int:
        c = start
        tab = self.table
        for x in w:
            c = tab[c][2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1]
        return c

    def contains(self, w: Iterable[int]) -> bool:
        return self.trace(0, w) == 0

    def permutation(self, gen: int) -> list:
        """Right action of a signed generator letter as a list of images."""
        col = letter_col(gen)
        return [row[col] for row in self.table]

    def word_permutation(self, w: Sequence[int]) -> list:
        cols = word_cols(w)
        out = []
        for c in range(len(self.table)):
            for col in cols:
                c = self.table[c][col]
            out.append(c)
        return out

    def is_closed(self) -> bool:
        for row in self.table:
            if UNDEF in row:
                return False
        for c, row in enumerate(self.table):
            for col, d in enumerate(row):
                if self.table[d][col ^ 1] != c:
                    return False
        return True

    def representatives(self) -> list:
        """A Schreier transversal: word (signed letters) from coset 0 to each coset."""
        reps: list = [None] * len(self.table)
        reps[0] = ()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for col in range(2 * self.ngens):
                d = self.table[c][col]
                if reps[d] is None:
                    letter = col // 2 + 1
                    reps[d] = reps[c] + ((letter if col % 2 == 0 else -letter),)
                    queue.append(d)
        return reps


class _Enumerator:
    def __init__(self, ngens: int, max_cosets: int):
        self.ncols = 2 * ngens
        self.max_cosets = max_cosets
        self.table: list = [[UNDEF] * self.ncols]
        self.parent = [0]
        self.live = 1

    def rep(self, k: int) -> int:
        p = self.parent
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def define(self, c: int, x: int) -> int:
        if self.live >= self.max_cosets:
            raise CosetLimitExceeded(f"coset limit {self.max_cosets} exceeded")
        d = len(self.table)
        self.table.append([UNDEF] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def merge(self, k: int, l: int, queue: list) -> None:
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = (a, b) if a < b else (b, a)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list = []
        self.merge(a, b, queue)
        tab = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = tab[g]
            for x in range(self.ncols):
                d = row[x]
                if d == UNDEF:
                    continue
                tab[d][x ^ 1] = UNDEF
                mu, nu = self.rep(g), self.rep(d)
                if tab[mu][x] != UNDEF:
                    self.merge(nu, tab[mu][x], queue)
                elif tab[nu][x ^ 1] != UNDEF:
                    self.merge(mu, tab[nu][x ^ 1], queue)
                else:
                    tab[mu][x] = nu
                    tab[nu][x ^ 1] = mu

    def scan_and_fill(self, alpha: int, word: list) -> None:
        tab = self.table
        n = len(word)
        if n == 0:
            return
        f, b = alpha, alpha
        i, j = 0, n - 1
        while True:
            while i <= j and tab[f][word[i]] != UNDEF:
                f = tab[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and tab[b][word[j] ^ 1] != UNDEF:
                b = tab[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                tab[f][word[i]] = b
                tab[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def standardize(self) -> list:
        """Renumber live cosets breadth-first from coset 0 and drop dead ones."""
        tab = self.table
        new = {0: 0}
        order = [0]
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for x in range(self.ncols):
                d = tab[c][x]
                if d == UNDEF:
                    raise RuntimeError("enumeration finished with undefined entries")
                d = self.rep(d)
                if d not in new:
                    new[d] = len(order)
                    order.append(d)
        return [[new[self.rep(tab[c][x])] for x in range(self.ncols)] for c in order]


def todd_coxeter(p: Presentation, subgens: Sequence[Sequence[int]] = (), max_cosets: int = 2_000_000) -> CosetTable:
    """Enumerate the cosets of <subgens> in the group presented by p."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    en = _Enumerator(p.ngens, max_cosets)
    rels = [word_cols(r) for r in p.relators]
    for w in subgens:
        en.scan_and_fill(0, word_cols(w))
    alpha = 0
    while alpha < len(en.table):
        if en.parent[alpha] == alpha:
            for r in rels:
                en.scan_and_fill(alpha, r)
                if en.parent[alpha] != alpha:
                    break
            else:
                row = en.table[alpha]
                for x in range(en.ncols):
                    if row[x] == UNDEF:
                        en.define(alpha, x)
        alpha += 1
    return CosetTable(p.ngens, en.standardize(), subgens)


def orbits(t: CosetTable, acting_words: Sequence[Sequence[int]], points: Iterable[int] | None = None) -> list:
    """Orbits of the right action of <acting_words> on cosets (or on a given invariant subset)."""
    perms = [t.word_permutation(w) for w in acting_words]
    pts = range(t.index) if points is None else points
    seen: dict = {}
    out = []
    for s in pts:
        if s in seen:
            continue
        orb = [s]
        seen[s] = len(out)
        k = 0
        while k < len(orb):
            c = orb[k]
            k += 1
            for perm in perms:
                d = perm[c]
                if d not in seen:
                    seen[d] = len(out)
                    orb.append(d)
        out.append(sorted(orb))
    return out


def orbit(t: CosetTable, start: int, acting_words: Sequence[Sequence[int]]) -> list:
    return orbits(t, acting_words, [start])[0]
