"""Leavitt relations on symbolic isometries, checked on saturated windows.

A symbolic isometry is an injective total map on a countable set (naturals
or reduced words of F2).  On a finite window W the isometry S becomes the
0/1 partial permutation e_x -> e_{S(x)}, restricted to x, S(x) in W.  A
window is saturated when it is closed under every generator's partial
inverse; then the range relation sum_i S_i S_i^* = 1 holds on all of W,
while S_j^* S_i = delta_ij 1 is checked on the points whose images stay
in W.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import InvalidCertificate, RangeOverlap, UnsaturatedWindow
from .roe import Projection, from_partial_translation
from .space import free_group_letters, letter_inverse


@dataclass(frozen=True)
class SymbolicIsometry:
    name: str
    forward: Callable
    preimage: Callable  # y -> x with forward(x) == y, or None
    tag: str = ""

    def __call__(self, x):
        return self.forward(x)


def compose_isometries(outer: SymbolicIsometry, inner: SymbolicIsometry) -> SymbolicIsometry:
    """outer o inner (operator product outer * inner)."""

    def fwd(x):
        return outer.forward(inner.forward(x))

    def pre(y):
        z = outer.preimage(y)
        return None if z is None else inner.preimage(z)

    return SymbolicIsometry(f"{outer.name}{inner.name}", fwd, pre, "word")


# ---- models -------------------------------------------------------------------


def nary_model(n: int) -> list:
    """S_i(x) = n x + i on the naturals, i = 0..n-1 (named S1..Sn)."""
    if n < 1:
        raise ValueError("n >= 1")

    def make(i):
        def fwd(x):
            return n * x + i

        def pre(y):
            return (y - i) // n if y >= i and (y - i) % n == 0 else None

        return SymbolicIsometry(f"S{i + 1}", fwd, pre, f"nary:{n}")

    return [make(i) for i in range(n)]


def binary_model() -> list:
    return nary_model(2)


def nary_window(n: int, m: int) -> range:
    """{0, ..., n**m - 1}, saturated for the n-ary model."""
    return range(n ** m)


def _children(word: str, rank: int = 2) -> list:
    letters = free_group_letters(rank)
    if not word:
        return list(letters)
    last_inv = letter_inverse(word[-1])
    return [word + c for c in letters if c != last_inv]


def is_root(word: str, rank: int = 2) -> bool:
    """Root status in the built-in doubling of the Cayley tree."""
    root = True
    for k in range(len(word)):
        parent = word[:k]
        idx = _children(parent, rank).index(word[: k + 1])
        root = idx >= 1 if root else idx >= 2
    return root


def free_group_doubling(rank: int = 2) -> list:
    """Two injections t+ and t- of F2 with displacement <= 1 and ranges
    partitioning the group.

    Orient the Cayley tree away from e.  The identity is a root; a root
    keeps its first child and makes its other children roots, a non-root
    keeps its first two children and makes the third a root.  Then
    t+(y) = y, t-(y) = first child for roots, and t+(y), t-(y) are the two
    kept children otherwise.  Every vertex is hit exactly once and its
    preimage is itself or its parent, so balls around e are saturated."""
    if rank != 2:
        raise ValueError("the built-in construction is for rank 2")

    def plus(y):
        return y if is_root(y) else _children(y)[0]

    def minus(y):
        ch = _children(y)
        return ch[0] if is_root(y) else ch[1]

    def pre_plus(z):
        if is_root(z):
            return z
        if not z:
            return None
        p = z[:-1]
        return p if not is_root(p) and _children(p)[0] == z else None

    def pre_minus(z):
        if not z or is_root(z):
            return None
        p = z[:-1]
        k = _children(p).index(z)
        if is_root(p):
            return p if k == 0 else None
        return p if k == 1 else None

    return [
        SymbolicIsometry("t+", plus, pre_plus, "free_group"),
        SymbolicIsometry("t-", minus, pre_minus, "free_group"),
    ]


# ---- relation check -------------------------------------------------------------


@dataclass
class LeavittReport:
    n: int
    kind: str
    window_size: int
    saturated: bool
    relations: dict = field(default_factory=dict)  # name -> bool
    failures: list = field(default_factory=list)
    interior_size: int = 0

    @property
    def passed(self) -> bool:
        return self.saturated and all(self.relations.values())

    def to_json(self):
        return {
            "n": self.n,
            "kind": self.kind,
            "window_size": self.window_size,
            "interior_size": self.interior_size,
            "saturated": self.saturated,
            "relations": dict(self.relations),
            "failures": self.failures[:20],
            "passed": self.passed,
        }


def _partial_perm(S: SymbolicIsometry, W: set) -> dict:
    out = {}
    for x in W:
        y = S.forward(x)
        if y in W:
            out[x] = y
    return out


def leavitt_relation_check(gens: Sequence[SymbolicIsometry], n: Optional[int] = None,
                           window: Iterable = (), kind: str = "L1n",
                           prefix: Optional[int] = None) -> LeavittReport:
    """Check S_j^* S_i = delta_ij 1 and (for L(1,n)) sum_i S_i S_i^* = 1
    as identities of 0/1 matrices on the window.

    ``kind="Linf"`` checks only the first family for i, j < prefix."""
    gens = list(gens)
    n = len(gens) if n is None else n
    if len(gens) != n:
        raise ValueError(f"expected {n} generators, got {len(gens)}")
    if kind not in ("L1n", "Linf"):
        raise ValueError("kind must be 'L1n' or 'Linf'")
    W = set(window)
    if kind == "Linf":
        k = n if prefix is None else prefix
        gens = gens[:k]
    # saturation: partial inverses of every generator stay in W
    offenders = set()
    hits = {}
    for z in W:
        for i, S in enumerate(gens):
            x = S.preimage(z)
            if x is None:
                continue
            if x not in W:
                offenders.add(z)
            hits.setdefault(z, []).append(i)
    if offenders:
        raise UnsaturatedWindow(offenders)
    overlap = [z for z, h in hits.items() if len(h) > 1]
    if overlap:
        raise RangeOverlap(f"ranges overlap at {sorted(overlap, key=repr)[:10]}")

    perms = [_partial_perm(S, W) for S in gens]
    inv = [{y: x for x, y in p.items()} for p in perms]
    interior = [x for x in W if all(x in p for p in perms)]
    rep = LeavittReport(n, kind, len(W), True, interior_size=len(interior))

    # S_j^* S_i e_x = e_{S_j^{-1}(S_i x)} if S_i x in ran S_j else 0
    ok1 = True
    for i in range(len(gens)):
        for j in range(len(gens)):
            for x in interior:
                y = inv[j].get(perms[i][x])
                expected = x if i == j else None
                if y != expected:
                    ok1 = False
                    rep.failures.append(f"S{j + 1}*S{i + 1} at {x!r}")
                    break
    rep.relations["isometry_orthogonality"] = ok1

    if kind == "L1n":
        # sum_i S_i S_i^* e_z = (number of ranges containing z) e_z
        ok2 = True
        for z in W:
            c = sum(1 for p in inv if z in p)
            if c != 1:
                ok2 = False
                rep.failures.append(f"range sum {c} at {z!r}")
        rep.relations["range_sum_identity"] = ok2
    return rep


# ---- embedding L(1,n) into L(1,2) -----------------------------------------------


@dataclass(frozen=True)
class LeavittEmbedding:
    n: int
    x_words: tuple  # each a tuple of generator names, leftmost factor first
    y_words: tuple

    def lengths(self) -> list:
        return [len(w) for w in self.x_words]


_ADJOINT = {"X11": "Y11", "X12": "Y21", "Y11": "X11", "Y21": "X12"}


def embed_L1n_in_L12(n: int) -> LeavittEmbedding:
    """X_1 = X11^(n-1), X_i = X11^(n-i) X12 (i = 2..n); Y-words are their adjoints."""
    if n < 2:
        raise ValueError("n >= 2")
    xs = [("X11",) * (n - 1)]
    ys = [("Y11",) * (n - 1)]
    for i in range(2, n + 1):
        xs.append(("X11",) * (n - i) + ("X12",))
        ys.append(("Y21",) + ("Y11",) * (n - i))
    return LeavittEmbedding(n, tuple(xs), tuple(ys))


def adjoint_word(word) -> tuple:
    return tuple(_ADJOINT[g] for g in reversed(word))


def realize_words(emb: LeavittEmbedding, model: Sequence[SymbolicIsometry]) -> list:
    """Evaluate the X-words over a concrete L(1,2) model (X11 = S1, X12 = S2)."""
    gen = {"X11": model[0], "X12": model[1]}
    out = []
    for word in emb.x_words:
        op = gen[word[-1]]
        for g in reversed(word[:-1]):
            op = compose_isometries(gen[g], op)
        out.append(SymbolicIsometry("".join(word), op.forward, op.preimage, "word"))
    return out


# ---- properly infinite witness ------------------------------------------------


@dataclass
class ProperlyInfiniteReport:
    isometry_plus: bool
    isometry_minus: bool
    orthogonal_ranges: bool
    range_sum: bool
    dominated: bool

    @property
    def passed(self) -> bool:
        return all((self.isometry_plus, self.isometry_minus, self.orthogonal_ranges,
                    self.range_sum, self.dominated))

    def to_json(self):
        return {
            "isometry_plus": self.isometry_plus,
            "isometry_minus": self.isometry_minus,
            "orthogonal_ranges": self.orthogonal_ranges,
            "range_sum": self.range_sum,
            "dominated": self.dominated,
            "passed": self.passed,
        }


def properly_infinite_witness(cert, w):
    """(V1, V2, report) for V1 = V_{t+}, V2 = V_{t-} of a doubling certificate."""
    errs = cert.check(w)
    if errs:
        raise InvalidCertificate("; ".join(errs))
    V1 = from_partial_translation(cert.t_plus)
    V2 = from_partial_translation(cert.t_minus)
    Pc = Projection(w, cert.carrier)
    ran_sum = V1 @ V1.adjoint() + V2 @ V2.adjoint()
    halves = Projection(w, cert.x_plus) + Projection(w, cert.x_minus)
    expected = Projection(w, cert.t_plus.range) + Projection(w, cert.t_minus.range)
    # X+ and X- are disjoint, so P_{X+} + P_{X-} is a projection; dominance
    # of the range sum is then (P_X+ + P_X-) S = S
    rep = ProperlyInfiniteReport(
        isometry_plus=V1.adjoint() @ V1 == Pc,
        isometry_minus=V2.adjoint() @ V2 == Pc,
        orthogonal_ranges=(V1.adjoint() @ V2).is_zero(),
        range_sum=ran_sum == expected,
        dominated=halves @ ran_sum == ran_sum and (halves @ halves == halves),
    )
    return V1, V2, rep
