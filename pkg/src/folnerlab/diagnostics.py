"""Operator-level amenability diagnostics on a finite window.

Each estimate comes back as a :class:`DefectReport` holding the measured
value next to the bound it must respect.  Dimensions are exact ranks;
norms are floats computed from exact radicands.
"""
from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DependentBasis, EmptySet, PreconditionFailed, ZeroProjection
from .exact import SparseEchelon
from .roe import (
    FinitePropOperator,
    Projection,
    commutator_ratio,
    folner_bound,
    hs_norm_sq,
    opnorm_upper,
)

TOLERANCE = 1e-9
HS_SPACE_LIMIT = 30  # points; the HS space has n**2 dimensions


@dataclass(frozen=True)
class DefectReport:
    name: str
    value: float
    bound: float
    certified: bool = True
    inputs_hash: str = ""

    @property
    def holds(self) -> bool:
        return not self.certified or self.value <= self.bound + TOLERANCE

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "certified": self.certified,
            "inputs_hash": self.inputs_hash,
        }

    @classmethod
    def from_json(cls, doc):
        return cls(doc["name"], float(doc["value"]), float(doc["bound"]),
                   bool(doc["certified"]), doc.get("inputs_hash", ""))


def inputs_hash(*objs) -> str:
    h = hashlib.sha256()
    for o in objs:
        if isinstance(o, FinitePropOperator):
            h.update(o.window.hash.encode())
            h.update(repr(list(o.entries())).encode())
        elif isinstance(o, (list, tuple)):
            h.update(inputs_hash(*o).encode())
        else:
            h.update(repr(o).encode())
    return h.hexdigest()[:16]


def _proj(w, P):
    return P if isinstance(P, Projection) else Projection(w, P)


# ---- Folner projections -------------------------------------------------------


def folner_projection_defect(family: Sequence[FinitePropOperator], F) -> DefectReport:
    """max_T ||[T, P_F]||_2 / ||P_F||_2 against max_T of the boundary bound."""
    if not family:
        raise ValueError("empty family")
    P = _proj(family[0].window, F)
    if P.rank == 0:
        raise EmptySet("Folner projection of the empty set")
    value = max(commutator_ratio(T, P) for T in family)
    bound = max(folner_bound(T, P, T.propagation) for T in family)
    return DefectReport("folner_projection_defect", value, bound, True, inputs_hash(family, sorted(P.support)))


def merge_threshold(family, Q: Projection, eps) -> float:
    return max(4 * opnorm_upper(T) * math.sqrt(Q.rank) / float(eps) for T in family)


def merge_projection(P0: Projection, Q: Projection, family, eps) -> Projection:
    """P0 v Q, valid as an (family, eps)-Folner projection once P0 is an
    (family, eps/2)-Folner projection with ||P0||_2 >= max 4||T|| ||Q||_2 / eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    N = merge_threshold(family, Q, eps)
    if math.sqrt(P0.rank) < N:
        raise PreconditionFailed(f"||P0||_2 = {math.sqrt(P0.rank):.6g} is below N = {N:.6g}")
    d0 = max(commutator_ratio(T, P0) for T in family)
    if d0 > float(eps) / 2 + TOLERANCE:
        raise PreconditionFailed(f"P0 has defect {d0:.6g} > eps/2")
    P = P0.join(Q)
    d = max(commutator_ratio(T, P) for T in family)
    if d > float(eps) + TOLERANCE:
        raise AssertionError(f"merged projection has defect {d} > eps")
    return P


# ---- u.c.p. compressions ------------------------------------------------------


def ucp_compress(P, T: FinitePropOperator) -> np.ndarray:
    """P T P as an exact (object dtype) matrix indexed by sorted supp(P)."""
    P = _proj(T.window, P)
    if P.rank == 0:
        raise ZeroProjection("compression to the zero projection")
    idx = sorted(P.support)
    pos = {x: i for i, x in enumerate(idx)}
    out = np.full((len(idx), len(idx)), Fraction(0), dtype=object)
    for x, y, v in T.entries():
        if x in pos and y in pos:
            out[pos[x], pos[y]] = v
    return out


def _complement(P: Projection) -> Projection:
    return Projection(P.window, set(range(P.window.n)) - P.support)


def ucp_defect_sq(P: Projection, A, B) -> Fraction:
    """Exact ||phi(AB) - phi(A)phi(B)||_{2,tr}^2 with phi(X) = P X P.

    phi(AB) - phi(A)phi(B) = P A (1-P) B P."""
    D = P @ A @ _complement(P) @ B @ P
    return hs_norm_sq(D) / P.rank


def ucp_defect(P, A: FinitePropOperator, B: FinitePropOperator) -> DefectReport:
    P = _proj(A.window, P)
    if P.rank == 0:
        raise ZeroProjection("compression to the zero projection")
    value = math.sqrt(ucp_defect_sq(P, A, B))
    bound = commutator_ratio(A, P) * opnorm_upper(B)
    return DefectReport("ucp_defect", value, bound, True, inputs_hash(A, B, sorted(P.support)))


def reverse_defect_check(P, A: FinitePropOperator) -> DefectReport:
    """||[A,P]||_2/||P||_2 <= sqrt(d(A*,A)) + sqrt(d(A,A*)) for the
    multiplicativity defects d of the compression."""
    P = _proj(A.window, P)
    if P.rank == 0:
        raise ZeroProjection("compression to the zero projection")
    As = A.adjoint()
    value = commutator_ratio(A, P)
    bound = math.sqrt(math.sqrt(ucp_defect_sq(P, As, A))) + math.sqrt(math.sqrt(ucp_defect_sq(P, A, As)))
    return DefectReport("reverse_defect", value, bound, True, inputs_hash(A, sorted(P.support)))


# ---- algebraic amenability ----------------------------------------------------


class SubspaceBasis:
    """Linearly independent operators spanning W (checked by exact rank)."""

    def __init__(self, ops: Sequence[FinitePropOperator], check: bool = True):
        ops = list(ops)
        if not ops:
            raise ValueError("empty basis")
        w = ops[0].window
        for op in ops:
            op._check(ops[0])
        self.window = w
        self.ops = ops
        self._echelon = None
        if check:
            ech = self.echelon()
            if ech.rank != len(ops):
                raise DependentBasis(f"{len(ops)} operators span only {ech.rank} dimensions")

    def echelon(self) -> SparseEchelon:
        if self._echelon is None:
            ech = SparseEchelon()
            for op in self.ops:
                ech.add(op.vectorize())
            self._echelon = ech
        return self._echelon

    @property
    def dim(self) -> int:
        return len(self.ops)

    def __len__(self):
        return len(self.ops)


def corner_subspace(w, F: Iterable[int]) -> SubspaceBasis:
    """Matrix units e_xy, x, y in F: the corner P_F A P_F of the algebra."""
    F = sorted(set(F))
    if not F:
        raise EmptySet("corner on the empty set")
    ops = [FinitePropOperator(w, _rows={x: {y: Fraction(1)}}) for x in F for y in F]
    return SubspaceBasis(ops, check=False)  # distinct matrix units


def sum_dimension(a: FinitePropOperator, W: SubspaceBasis) -> int:
    """dim(aW + W) by sparse exact elimination."""
    ech = SparseEchelon()
    for op in W.ops:
        ech.add(op.vectorize())
    for op in W.ops:
        ech.add((a @ op).vectorize())
    return ech.rank


def alg_amen_ratio(a: FinitePropOperator, W: SubspaceBasis) -> Fraction:
    return Fraction(sum_dimension(a, W), W.dim)


def _hs_columns(ops, n):
    return np.stack([op.to_dense().reshape(n * n) for op in ops], axis=1)


def subspace_projection_defect(W: SubspaceBasis, B: FinitePropOperator) -> DefectReport:
    """||(1-P) L_B P||_2 / ||P||_2 for P the projection onto W inside the
    Hilbert-Schmidt space of the window (trace state), L_B left multiplication."""
    n = W.window.n
    if n > HS_SPACE_LIMIT:
        raise ValueError(f"HS-space computation gated to windows of at most {HS_SPACE_LIMIT} points")
    M = _hs_columns(W.ops, n)
    Q, _ = np.linalg.qr(M)
    Bd = B.to_dense()
    # L_B applied to each orthonormal column, viewed as an n x n matrix
    LBQ = np.stack([(Bd @ Q[:, j].reshape(n, n)).reshape(n * n) for j in range(Q.shape[1])], axis=1)
    resid = LBQ - Q @ (Q.conj().T @ LBQ)
    value = float(np.linalg.norm(resid)) / math.sqrt(W.dim)
    gap = sum_dimension(B, W) - W.dim
    bound = math.sqrt(gap / W.dim) * opnorm_upper(B)
    return DefectReport("subspace_projection_defect", value, bound, True, inputs_hash(B, W.ops))


# ---- proper injectivity -------------------------------------------------------


@dataclass(frozen=True)
class InjectivityReport:
    family_rank: int
    image_rank: int

    @property
    def injective(self) -> bool:
        return self.image_rank == self.family_rank


def injectivity_report(family: Sequence[FinitePropOperator], P) -> InjectivityReport:
    """Ranks of span(family) and of its image under A -> P pi(A) Omega.

    The reference vector is Omega = 1/sqrt(n) in the trace (Hilbert-Schmidt)
    representation, where pi(A) Omega is A itself up to scale and P acts by
    left multiplication with P_F."""
    if not family:
        return InjectivityReport(0, 0)
    P = _proj(family[0].window, P)
    span = SparseEchelon()
    image = SparseEchelon()
    for A in family:
        span.add(A.vectorize())
        image.add((P @ A).vectorize())
    if span.rank < len(family):
        warnings.warn(f"family is dependent: {len(family)} operators span {span.rank} dimensions",
                      RuntimeWarning, stacklevel=2)
    return InjectivityReport(span.rank, image.rank)


def proper_injectivity_check(family: Sequence[FinitePropOperator], P) -> bool:
    return injectivity_report(family, P).injective
