"""Smith normal form over the integers and abelian invariants of presentations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass
class SNFResult:
    diagonal: list  # nonzero invariant factors d1 | d2 | ...
    rank: int
    ncols: int
    col_transform: list | None = None  # V with U*M*V = D, when requested

    @property
    def free_rank(self) -> int:
        return self.ncols - self.rank

    @property
    def torsion(self) -> list:
        return [d for d in self.diagonal if d > 1]


def smith_normal_form(m: Sequence[Sequence[int]], track_columns: bool = False) -> SNFResult:
    """Invariant factors of an integer matrix; optionally the unimodular column transform."""
    a = [list(map(int, row)) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if track_columns else None

    def col_op(i, j, q):  # col_j -= q * col_i
        for row in a:
            row[j] -= q * row[i]
        if V is not None:
            for row in V:
                row[j] -= q * row[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nrows, ncols):
        # choose the smallest nonzero entry in the trailing block as pivot
        best = None
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        col_swap(t, j)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // p
                    ri, rt = a[i], a[t]
                    for k in range(t, ncols):
                        ri[k] -= q * rt[k]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    col_op(t, j, a[t][j] // p)
                    if a[t][j]:
                        done = False
            if done:
                # enforce divisibility of the remaining block by the pivot
                bad = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = a[t], a[bad]
                for k in range(t, ncols):
                    rt[k] += rb[k]
                continue
            # move the smallest entry of row/column t onto the diagonal
            best = (abs(p), t, t)
            for i in range(t + 1, nrows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, ncols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                col_swap(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        t += 1
    diag = [a[i][i] for i in range(t)]
    return SNFResult(diag, t, ncols, V)


class AbelianQuotient:
    """Z^n modulo the row span of a sparse integer relation matrix.

    Unit pivots are eliminated sparsely first; the remainder is put in Smith form.
    ``coordinates(v)`` maps a vector to (free coordinates, torsion residues).
    """

    def __init__(self, rows: Sequence[dict], ncols: int):
        self.ncols = ncols
        rows = [dict((k, v) for k, v in r.items() if v) for r in rows]
        rows = [r for r in rows if r]
        occ: dict = {}
        for idx, r in enumerate(rows):
            for k in r:
                occ.setdefault(k, set()).add(idx)
        alive = set(range(len(rows)))
        self._subs: list = []  # (col, {other col: coeff}) meaning col = sum coeff * other
        threshold = 2
        while alive:
            changed = False
            for idx in sorted(alive):
                if idx not in alive:
                    continue
                r = rows[idx]
                if len(r) > threshold:
                    continue
                k = None
                for c in sorted(r, key=lambda c: len(occ[c])):
                    if r[c] in (1, -1):
                        k = c
                        break
                if k is None:
                    continue
                self._eliminate(rows, occ, alive, idx, k)
                changed = True
            if not changed:
                longest = max(len(rows[i]) for i in alive)
                if threshold >= longest:
                    break
                threshold *= 2
        eliminated = {k for k, _ in self._subs}
        self.remaining = [c for c in range(ncols) if c not in eliminated]
        pos = {c: i for i, c in enumerate(self.remaining)}
        dense = []
        for idx in sorted(alive):
            row = [0] * len(self.remaining)
            for c, v in rows[idx].items():
                row[pos[c]] = v
            dense.append(row)
        self._pos = pos
        if dense:
            self.snf = smith_normal_form(dense, track_columns=True)
        else:
            n = len(self.remaining)
            self.snf = SNFResult([], 0, n, [[int(i == j) for j in range(n)] for i in range(n)])

    def _eliminate(self, rows, occ, alive, idx, k):
        r = rows[idx]
        s = r[k]
        expr = {c: -s * v for c, v in r.items() if c != k}  # s*k + rest = 0 with s = +-1
        self._subs.append((k, expr))
        alive.discard(idx)
        for c in r:
            occ[c].discard(idx)
        for other in list(occ[k]):
            ro = rows[other]
            coef = ro.pop(k)
            for c, v in expr.items():
                nv = ro.get(c, 0) + coef * v
                if nv:
                    if c not in ro:
                        occ.setdefault(c, set()).add(other)
                    ro[c] = nv
                elif c in ro:
                    del ro[c]
                    occ[c].discard(other)
            if not ro:
                alive.discard(other)
        del occ[k]

    @property
    def free_rank(self) -> int:
        return self.snf.free_rank

    @property
    def torsion(self) -> list:
        return self.snf.torsion

    def invariants(self) -> list:
        """Abelian invariants in the usual form: torsion factors then zeros for the free part."""
        return self.torsion + [0] * self.free_rank

    def coordinates(self, v: dict) -> tuple:
        v = {k: x for k, x in v.items() if x}
        for k, expr in self._subs:
            coef = v.pop(k, 0)
            if coef:
                for c, x in expr.items():
                    nv = v.get(c, 0) + coef * x
                    if nv:
                        v[c] = nv
                    else:
                        v.pop(c, None)
        n = len(self.remaining)
        dense = [0] * n
        for c, x in v.items():
            dense[self._pos[c]] = x
        V = self.snf.col_transform
        w = [sum(dense[i] * V[i][j] for i in range(n) if dense[i]) for j in range(n)]
        r = self.snf.rank
        torsion = tuple(w[i] % self.snf.diagonal[i] for i in range(r) if self.snf.diagonal[i] > 1)
        return tuple(w[r:]), torsion
