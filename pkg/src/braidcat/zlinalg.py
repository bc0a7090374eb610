"""Exact integer linear algebra: echelon forms, lattice kernels and solving over Z.

Everything here works on Python ints.  Sparse inputs are given column-wise as
``dict`` objects mapping a hashable row key to a nonzero integer; the row keys
are ordered by first appearance so results are deterministic for a fixed
construction order.
"""

from __future__ import annotations

import heapq
from typing import Hashable, Iterable, Sequence

__all__ = [
    "xgcd",
    "hermite_normal_form",
    "ColumnEchelon",
    "solve_integer",
    "integer_kernel",
    "smith_invariants",
    "rank",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def hermite_normal_form(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries above a pivot are reduced into ``[0, pivot)``
    and zero rows are dropped, so the result depends only on the lattice.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[int]] = []
    for j in range(ncols):
        live = [r for r in mat if r[j]]
        rest = [r for r in mat if not r[j]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[j]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[j] // p[j]
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[j]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        p = live[0]
        if p[j] < 0:
            p = [-a for a in p]
        for k, r in enumerate(out):
            q = r[j] // p[j]
            if q:
                out[k] = [a - q * b for a, b in zip(r, p)]
        out.append(p)
        mat = rest
    return out


class ColumnEchelon:
    """Column echelon form ``A U = H`` of a sparse integer matrix.

    ``U`` is unimodular and tracked explicitly.  After construction
    ``pivots`` maps a row index to the column holding its pivot, and
    ``kernel_columns`` lists the columns of ``U`` spanning ``ker A``.
    """

    def __init__(self, columns: Sequence[dict], row_order: Sequence[Hashable] | None = None):
        if row_order is None:
            seen: dict = {}
            for col in columns:
                for key in col:
                    if key not in seen:
                        seen[key] = len(seen)
            row_order = list(seen)
        self.row_keys = list(row_order)
        self.row_index = {k: i for i, k in enumerate(self.row_keys)}
        ri = self.row_index
        self.ncols = len(columns)
        self.cols: list[dict[int, int]] = [
            {ri[k]: v for k, v in col.items() if v} for col in columns
        ]
        self.U: list[dict[int, int]] = [{c: 1} for c in range(self.ncols)]
        self.pivots: dict[int, int] = {}
        self._reduce()

    def _reduce(self) -> None:
        cols, U = self.cols, self.U
        row_cols: dict[int, set[int]] = {}
        for c, col in enumerate(cols):
            for r in col:
                row_cols.setdefault(r, set()).add(c)

        def sub(c: int, p: int, q: int) -> None:
            # column c -= q * column p, keeping row_cols in sync
            cc, cp = cols[c], cols[p]
            for r, v in cp.items():
                nv = cc.get(r, 0) - q * v
                if nv:
                    if r not in cc:
                        row_cols.setdefault(r, set()).add(c)
                    cc[r] = nv
                elif r in cc:
                    del cc[r]
                    row_cols[r].discard(c)
            uc, up = U[c], U[p]
            for k, v in up.items():
                nv = uc.get(k, 0) - q * v
                if nv:
                    uc[k] = nv
                else:
                    uc.pop(k, None)

        for r in range(len(self.row_keys)):
            live = row_cols.get(r)
            if not live:
                continue
            while len(live) > 1:
                p = min(live, key=lambda c: (abs(cols[c][r]), c))
                pv = cols[p][r]
                for c in sorted(live - {p}):
                    sub(c, p, cols[c][r] // pv)
                live = row_cols.get(r, set())
            if not live:
                continue
            (p,) = live
            self.pivots[r] = p
            for rr in cols[p]:
                row_cols[rr].discard(p)

    @property
    def kernel_columns(self) -> list[dict[int, int]]:
        used = set(self.pivots.values())
        return [self.U[c] for c in range(self.ncols) if c not in used]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, rhs: dict) -> list[int] | None:
        """Integer solution ``x`` of ``A x = rhs`` or ``None`` if there is none."""
        res: dict[int, int] = {}
        for k, v in rhs.items():
            if not v:
                continue
            if k not in self.row_index:
                return None
            res[self.row_index[k]] = v
        y: dict[int, int] = {}
        # pivot columns vanish above their pivot row, so substitution only
        # ever creates residual entries below the current row
        heap = list(res)
        heapq.heapify(heap)
        while heap:
            r = heapq.heappop(heap)
            v = res.get(r, 0)
            if not v:
                continue
            p = self.pivots.get(r)
            if p is None:
                return None
            pv = self.cols[p][r]
            if v % pv:
                return None
            q = v // pv
            y[p] = q
            for rr, a in self.cols[p].items():
                nv = res.get(rr, 0) - q * a
                if nv:
                    if rr not in res:
                        heapq.heappush(heap, rr)
                    res[rr] = nv
                else:
                    res.pop(rr, None)
        x = [0] * self.ncols
        for c, q in y.items():
            for k, v in self.U[c].items():
                x[k] += q * v
        return x


def solve_integer(columns: Sequence[dict], rhs: dict) -> list[int] | None:
    """Solve ``sum_c x_c * columns[c] == rhs`` over the integers."""
    rows = None
    extra = [k for k in rhs if rhs[k]]
    if extra:
        seen: dict = {}
        for col in columns:
            for key in col:
                seen.setdefault(key, len(seen))
        for key in extra:
            seen.setdefault(key, len(seen))
        rows = list(seen)
    return ColumnEchelon(columns, rows).solve(rhs)


def integer_kernel(columns: Sequence[dict]) -> list[list[int]]:
    """Hermite-normalised Z-basis of ``{x : sum_c x_c columns[c] == 0}``."""
    ech = ColumnEchelon(columns)
    n = len(columns)
    dense = []
    for u in ech.kernel_columns:
        v = [0] * n
        for k, a in u.items():
            v[k] = a
        dense.append(v)
    return hermite_normal_form(dense)


def rank(columns: Sequence[dict]) -> int:
    return ColumnEchelon(columns).rank


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of a dense integer matrix."""
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                    if ri[t]:
                        clean = False
            for j in range(t + 1, n):
                v = a[t][j]
                if v:
                    q = v // p
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        clean = False
            if clean:
                break
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for k in range(len(diag) - 1):
            x, y = diag[k], diag[k + 1]
            _, _, g = xgcd(x, y)
            if g != x:
                diag[k], diag[k + 1] = g, x * y // g
                changed = True
    return diag
