"""Exact rank computations over the Gaussian rationals.

Two independent routes:

* :class:`SparseEchelon` -- incremental sparse row echelon form with exact
  field arithmetic, used by every dimension count in the package.
* :func:`bareiss_rank` -- dense fraction-free (Bareiss) elimination on
  integer matrices, used as a cross-check.  Complex input is realified.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from math import lcm

from .scalars import Cx, imag_part, inverse, real_part


class SparseEchelon:
    """Row echelon basis where every stored row has its pivot at its
    smallest column index and pivot value 1.

    Rows with distinct minimal columns are linearly independent, so a new
    vector is independent of the basis iff reducing it leaves a nonzero
    remainder whose minimal column is not yet a pivot.
    """

    def __init__(self):
        self._rows = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec):
        v = {k: x for k, x in vec.items() if x != 0}
        heap = list(v)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            if c not in v:
                continue
            row = self._rows.get(c)
            if row is None:
                return v, c
            coef = v[c]
            for j, r in row.items():
                if j in v:
                    nv = v[j] - coef * r
                    if nv == 0:
                        del v[j]
                    else:
                        v[j] = nv
                else:
                    v[j] = -coef * r
                    heapq.heappush(heap, j)
        return v, None

    def add(self, vec) -> bool:
        """Insert ``vec`` (a mapping column -> scalar); return True iff it
        enlarged the span."""
        v, pivot = self.reduce(vec)
        if pivot is None:
            return False
        scale = inverse(v[pivot])
        self._rows[pivot] = {j: x * scale for j, x in v.items()}
        return True

    def contains(self, vec) -> bool:
        return self.reduce(vec)[1] is None


def exact_rank(vectors) -> int:
    ech = SparseEchelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def _integer_rows(rows):
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def bareiss_rank(matrix) -> int:
    """Rank of a dense matrix (list of rows) by fraction-free elimination.

    Entries may be ints, Fractions or :class:`Cx`; complex matrices are
    embedded as real matrices of twice the size, whose rank is twice the
    complex rank.
    """
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    if any(isinstance(x, Cx) for r in rows for x in r):
        re = [[real_part(x) for x in r] for r in rows]
        im = [[imag_part(x) for x in r] for r in rows]
        top = [a + [-b for b in bi] for a, bi in zip(re, im)]
        bottom = [b + a for a, b in zip(re, im)]
        return bareiss_rank(top + bottom) // 2
    m = _integer_rows(rows)
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = None
        for r in range(rank, n_rows):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            a = m[r][col]
            row_r, row_k = m[r], m[rank]
            for c in range(col, n_cols):
                row_r[c] = (p * row_r[c] - a * row_k[c]) // prev
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank
