"""Finite-propagation operators on l2 of a window.

Entries are exact (``Fraction`` or Gaussian-rational ``Cx``) and stored
row-major as ``{row: {col: value}}`` with zeros never stored.  Identities
are checked by exact equality; norms are the only floating-point output and
come with directional guarantees.
"""
from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import EmptySet, WindowMismatch
from .scalars import abs2, absf, conj, format_fraction, imag_part, parse_fraction, real_part, cx
from .space import SpaceWindow

NORM_SLACK = 1e-12
POWER_ITERATIONS = 200


class FinitePropOperator:
    __slots__ = ("window", "rows", "_prop")

    def __init__(self, window: SpaceWindow, entries=None, *, _rows=None):
        self.window = window
        self._prop = None
        if _rows is not None:
            self.rows = _rows
            return
        rows = {}
        for (x, y), v in (entries or {}).items():
            if v == 0:
                continue
            if not (0 <= x < window.n and 0 <= y < window.n):
                raise ValueError(f"entry ({x}, {y}) outside the window")
            if window.component[x] != window.component[y]:
                raise ValueError(f"entry ({x}, {y}) straddles coarse components")
            rows.setdefault(x, {})[y] = v
        self.rows = rows

    # ---- construction helpers -------------------------------------------

    @classmethod
    def zero(cls, window):
        return cls(window, _rows={})

    @classmethod
    def identity(cls, window):
        return DiagonalFunction(window, {x: 1 for x in range(window.n)})

    @classmethod
    def from_dense(cls, window, matrix):
        return cls(window, {(i, j): v for i, row in enumerate(matrix) for j, v in enumerate(row)})

    # ---- inspection -----------------------------------------------------

    def entries(self):
        for x in sorted(self.rows):
            r = self.rows[x]
            for y in sorted(r):
                yield x, y, r[y]

    def get(self, x, y):
        return self.rows.get(x, {}).get(y, 0)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    @property
    def propagation(self) -> int:
        if self._prop is None:
            d = 0
            w = self.window
            for x, r in self.rows.items():
                for y in r:
                    if y != x:
                        d = max(d, int(w.dist(x, y)))
            self._prop = d
        return self._prop

    def support_points(self) -> frozenset:
        pts = set(self.rows)
        for r in self.rows.values():
            pts.update(r)
        return frozenset(pts)

    def to_dense(self) -> np.ndarray:
        n = self.window.n
        out = np.zeros((n, n), dtype=complex)
        for x, y, v in self.entries():
            out[x, y] = complex(v) if not isinstance(v, (int, Fraction)) else float(v)
        return out

    def to_exact_dense(self) -> list:
        n = self.window.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for x, y, v in self.entries():
            out[x][y] = v
        return out

    # ---- algebra ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, FinitePropOperator):
            raise TypeError("expected a FinitePropOperator")
        if other.window is not self.window and other.window.hash != self.window.hash:
            raise WindowMismatch("operators act on different windows")

    def __add__(self, other):
        self._check(other)
        rows = {x: dict(r) for x, r in self.rows.items()}
        for x, r in other.rows.items():
            tgt = rows.setdefault(x, {})
            for y, v in r.items():
                s = tgt.get(y, 0) + v
                if s == 0:
                    tgt.pop(y, None)
                else:
                    tgt[y] = s
            if not tgt:
                del rows[x]
        return FinitePropOperator(self.window, _rows=rows)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, c):
        if c == 0:
            return FinitePropOperator.zero(self.window)
        rows = {x: {y: c * v for y, v in r.items()} for x, r in self.rows.items()}
        return FinitePropOperator(self.window, _rows=rows)

    def __matmul__(self, other):
        self._check(other)
        rows = {}
        orows = other.rows
        for x, r in self.rows.items():
            acc = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for y, b in ok.items():
                    acc[y] = acc.get(y, 0) + a * b
            acc = {y: v for y, v in acc.items() if v != 0}
            if acc:
                rows[x] = acc
        return FinitePropOperator(self.window, _rows=rows)

    multiply = __matmul__

    def adjoint(self):
        rows = {}
        for x, r in self.rows.items():
            for y, v in r.items():
                rows.setdefault(y, {})[x] = conj(v)
        return FinitePropOperator(self.window, _rows=rows)

    def __eq__(self, other):
        if not isinstance(other, FinitePropOperator):
            return NotImplemented
        return self.window.hash == other.window.hash and self.rows == other.rows

    def __hash__(self):
        return hash((self.window.hash, tuple(self.entries())))

    def __repr__(self):
        return f"{type(self).__name__}(nnz={self.nnz}, propagation={self.propagation})"

    def is_zero(self) -> bool:
        return not self.rows

    def vectorize(self) -> dict:
        """Sparse vector keyed by (row, col), used for exact rank."""
        return {(x, y): v for x, y, v in self.entries()}

    # ---- export -------------------------------------------------------------

    def to_csv(self, path):
        header = {"window": self.window.hash, "propagation": self.propagation, "n": self.window.n}
        with open(path, "w", newline="") as fh:
            fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
            wr = csv.writer(fh)
            wr.writerow(["x", "y", "re", "im"])
            for x, y, v in self.entries():
                wr.writerow([x, y, format_fraction(real_part(v)), format_fraction(imag_part(v))])


def read_operator_csv(window: SpaceWindow, path) -> FinitePropOperator:
    with open(path) as fh:
        first = fh.readline()
        header = json.loads(first[2:])
        if header["window"] != window.hash:
            raise WindowMismatch("CSV was exported from a different window")
        rd = csv.DictReader(fh)
        ent = {(int(r["x"]), int(r["y"])): cx(parse_fraction(r["re"]), parse_fraction(r["im"])) for r in rd}
    return FinitePropOperator(window, ent)


class DiagonalFunction(FinitePropOperator):
    """Multiplication operator by a function on the window."""

    __slots__ = ()

    def __init__(self, window: SpaceWindow, values):
        values = dict(values)
        super().__init__(window, _rows={x: {x: v} for x, v in values.items() if v != 0})

    @property
    def values(self) -> dict:
        return {x: r[x] for x, r in self.rows.items()}

    @property
    def propagation(self) -> int:
        return 0

    def sup_norm(self) -> float:
        return max((absf(v) for v in self.values.values()), default=0.0)


class Projection(DiagonalFunction):
    """The diagonal 0/1 operator P_F."""

    __slots__ = ()

    def __init__(self, window: SpaceWindow, F: Iterable[int]):
        super().__init__(window, {x: 1 for x in set(F)})

    @property
    def support(self) -> frozenset:
        return frozenset(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def join(self, other: "Projection") -> "Projection":
        return Projection(self.window, self.support | other.support)


def from_partial_translation(t) -> FinitePropOperator:
    """(V_t)_{t(x), x} = 1."""
    return FinitePropOperator(t.window, _rows={y: {x: 1} for x, y in t.pairs})


def propagation(T: FinitePropOperator) -> int:
    return T.propagation


# ---- norms ------------------------------------------------------------------


def hs_norm_sq(T: FinitePropOperator) -> Fraction:
    return sum((abs2(v) for _, _, v in T.entries()), Fraction(0))


def hs_norm(T: FinitePropOperator) -> float:
    return math.sqrt(hs_norm_sq(T))


def _abs_sums(T):
    rows = [0.0]
    cols = {}
    for x, r in T.rows.items():
        s = 0.0
        for y, v in r.items():
            a = absf(v)
            s += a
            cols[y] = cols.get(y, 0.0) + a
        rows.append(s)
    return max(rows), max(cols.values(), default=0.0)


def opnorm_upper(T: FinitePropOperator) -> float:
    """Upper bound sqrt(||T||_1 ||T||_inf), inflated by a relative slack that
    dominates the float rounding of the absolute sums."""
    r, c = _abs_sums(T)
    return math.sqrt(r * c) * (1 + NORM_SLACK)


def _to_scipy(T):
    import scipy.sparse as sp

    n = T.window.n
    xs, ys, vs = [], [], []
    for x, y, v in T.entries():
        xs.append(x)
        ys.append(y)
        vs.append(complex(v) if not isinstance(v, (int, Fraction)) else float(v))
    return sp.csr_matrix((np.array(vs, dtype=complex), (xs, ys)), shape=(n, n))


def opnorm_lower(T: FinitePropOperator, seed: int = 0) -> float:
    """Power iteration on T*T; sqrt of a Rayleigh quotient never exceeds ||T||."""
    if T.is_zero():
        return 0.0
    M = _to_scipy(T)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[1]) + 0j
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(POWER_ITERATIONS):
        u = M @ v
        nu = np.linalg.norm(u)
        if nu == 0:
            v = rng.standard_normal(M.shape[1]) + 0j
            v /= np.linalg.norm(v)
            continue
        new = nu
        v = M.conj().T @ u
        nv = np.linalg.norm(v)
        if nv == 0:
            break
        v /= nv
        if abs(new - est) <= 1e-12 * max(new, 1.0):
            est = new
            break
        est = new
    # final Rayleigh quotient with the normalized iterate
    est = max(est, float(np.linalg.norm(M @ v)))
    return est * (1 - NORM_SLACK)


def op_norm_est(T: FinitePropOperator, seed: int = 0):
    up = opnorm_upper(T)
    return min(opnorm_lower(T, seed), up), up


# ---- commutators --------------------------------------------------------------


def _projection(w, F):
    return F if isinstance(F, Projection) else Projection(w, F)


def commutator(T: FinitePropOperator, P) -> FinitePropOperator:
    P = _projection(T.window, P)
    return T @ P - P @ T


def edge_operators(T: FinitePropOperator, F, R: int, ambient: bool = False):
    """(lhs, rhs) of [T, P_F] = P_out T P_in - P_in T P_out."""
    if R < T.propagation:
        raise ValueError("R must be at least the propagation of T")
    w = T.window
    F = _projection(w, F)
    inner, outer = w.boundary_masks(w.mask(F.support), R, ambient)
    P_in = Projection(w, np.nonzero(inner)[0].tolist())
    P_out = Projection(w, np.nonzero(outer)[0].tolist())
    lhs = commutator(T, F)
    rhs = P_out @ T @ P_in - P_in @ T @ P_out
    return lhs, rhs


def edge_identity_check(T: FinitePropOperator, F, R: int, ambient: bool = False) -> bool:
    lhs, rhs = edge_operators(T, F, R, ambient)
    return lhs == rhs


def commutator_ratio(T: FinitePropOperator, F) -> float:
    F = _projection(T.window, F)
    if F.rank == 0:
        raise EmptySet("commutator ratio against the zero projection")
    return math.sqrt(hs_norm_sq(commutator(T, F)) / F.rank)


def folner_bound(T: FinitePropOperator, F, R: Optional[int] = None, ambient: bool = False) -> float:
    """2 ||T||_upper sqrt(|d_R F| / |F|) with R defaulting to p(T)."""
    from .folner import boundary_ratio

    w = T.window
    F = _projection(w, F)
    if F.rank == 0:
        raise EmptySet("Folner bound for the empty set")
    R = T.propagation if R is None else R
    if R < T.propagation:
        raise ValueError("R must be at least the propagation of T")
    return 2 * opnorm_upper(T) * math.sqrt(boundary_ratio(w, F.support, R, ambient))


# ---- diagonal expectation and traces --------------------------------------------


def conditional_expectation(T: FinitePropOperator) -> DiagonalFunction:
    return DiagonalFunction(T.window, {x: r[x] for x, r in T.rows.items() if x in r})


def trace(T: FinitePropOperator):
    return sum((r[x] for x, r in T.rows.items() if x in r), Fraction(0))


def normalized_trace(T: FinitePropOperator):
    return trace(T) / T.window.n


def trace_factorization_check(T: FinitePropOperator) -> bool:
    E = conditional_expectation(T)
    return normalized_trace(T) == normalized_trace(E) and conditional_expectation(E) == E


def pt_norm_upper(decomp):
    """Sum of sup norms for the given decomposition T = sum V_{t_i} f_i,
    returned with the assembled operator.  Not the infimum over decompositions."""
    if not decomp:
        raise ValueError("empty decomposition")
    w = decomp[0][0].window
    total = FinitePropOperator.zero(w)
    value = 0.0
    for t, f in decomp:
        if not isinstance(f, FinitePropOperator):
            f = DiagonalFunction(w, {x: f for x in t.domain})
        total = total + from_partial_translation(t) @ f
        value += f.sup_norm() if isinstance(f, DiagonalFunction) else opnorm_upper(f)
    return value, total


__all__ = [
    "FinitePropOperator", "DiagonalFunction", "Projection", "from_partial_translation",
    "propagation", "hs_norm", "hs_norm_sq", "opnorm_upper", "opnorm_lower", "op_norm_est",
    "commutator", "edge_operators", "edge_identity_check", "commutator_ratio", "folner_bound",
    "conditional_expectation", "trace", "normalized_trace", "trace_factorization_check",
    "pt_norm_upper", "read_operator_csv",
]
