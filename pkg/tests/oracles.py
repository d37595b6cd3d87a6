"""Independent reference computations used by the tests.

These work from labels and closed-form metrics, never from the window's
adjacency structure, so they check the library rather than mirror it.
"""
from fractions import Fraction

import numpy as np

from folnerlab.space import word_distance


def label_metric(w):
    """Distance function on point ids computed from labels alone."""
    def d(x, y):
        a, b = w.labels[x], w.labels[y]
        if isinstance(a, str):
            return word_distance(a, b)
        return sum(abs(p - q) for p, q in zip(a, b))
    return d


def boundary_by_enumeration(w, A, R, ambient_complement=None):
    """Two-sided boundary by brute force over all pairs.

    ``ambient_complement(x)`` optionally gives d(x, X \\ A) in the ambient
    space for x in A; otherwise the complement is taken in the window."""
    d = label_metric(w)
    A = set(A)
    comp = [y for y in range(w.n) if y not in A]
    out = set()
    for x in range(w.n):
        dA = min((d(x, a) for a in A), default=None)
        if dA is None or dA > R:
            continue
        if x not in A:
            out.add(x)
            continue
        if ambient_complement is not None:
            dc = ambient_complement(x)
        else:
            dc = min((d(x, y) for y in comp), default=None)
        if dc is not None and dc <= R:
            out.add(x)
    return out


def interval_boundary(m, R):
    """|d_R [0, m)| in the ambient integers, by counting."""
    count = 0
    for x in range(-R - 1, m + R + 1):
        inside = 0 <= x < m
        dA = 0 if inside else min(abs(x), abs(x - (m - 1)))
        dC = min(x + 1, m - x) if inside else 0
        if dA <= R and dC <= R:
            count += 1
    return count


def dense_exact(T):
    n = T.window.n
    M = [[Fraction(0)] * n for _ in range(n)]
    for x, y, v in T.entries():
        M[x][y] = v
    return M


def dense_mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n) if A[i][k] != 0), Fraction(0)) for j in range(n)]
            for i in range(n)]


def spectral_norm(T):
    return float(np.linalg.norm(T.to_dense(), 2))
