"""Partial translations, doubling (paradoxicality) certificates and the
windowed Tarski dichotomy.

A doubling at radius R asks for two injections t+ and t- of a carrier C into
N_R(C) with disjoint ranges and displacement <= R.  This is a bipartite
b-matching in which every carrier point has capacity 2; it is solved by
Hopcroft-Karp on two copies of the carrier.  When no perfect matching exists
the Konig closure of the unmatched copies yields a Hall violator S with
|N_R(S)| < 2|S|.
"""
from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import EmptySet, FixedPointPresent, InvalidCertificate, WindowMismatch
from .folner import FolnerCertificate, SearchStrategy, explore
from .space import INF, SpaceWindow


class PartialTranslation:
    """Injective map between two subsets of one window with finite displacement."""

    __slots__ = ("window", "pairs", "displacement", "_map")

    def __init__(self, window: SpaceWindow, mapping: Mapping[int, int] | Iterable = ()):
        m = dict(mapping)
        if len(set(m.values())) != len(m):
            raise ValueError("partial translation must be injective")
        disp = 0
        for x, y in m.items():
            if not (0 <= x < window.n and 0 <= y < window.n):
                raise ValueError(f"pair ({x}, {y}) leaves the window")
            d = window.dist(x, y)
            if d == INF:
                raise ValueError(f"pair ({x}, {y}) crosses coarse components")
            disp = max(disp, int(d))
        self.window = window
        self._map = m
        self.pairs = tuple(sorted(m.items()))
        self.displacement = disp

    @classmethod
    def identity(cls, window, points):
        return cls(window, {x: x for x in points})

    @classmethod
    def from_labels(cls, window, label_map):
        return cls(window, {window.index(a): window.index(b) for a, b in label_map.items()})

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    @property
    def range(self) -> frozenset:
        return frozenset(self._map.values())

    @property
    def mapping(self) -> dict:
        return dict(self._map)

    def __call__(self, x):
        return self._map[x]

    def get(self, x, default=None):
        return self._map.get(x, default)

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        return (
            isinstance(other, PartialTranslation)
            and self.window.hash == other.window.hash
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.window.hash, self.pairs))

    def __repr__(self):
        return f"PartialTranslation({len(self.pairs)} pairs, displacement={self.displacement})"

    def image(self, A: Iterable[int]) -> frozenset:
        return frozenset(self._map[a] for a in A)

    def fixed_points(self) -> list:
        return [x for x, y in self.pairs if x == y]

    def restrict(self, A: Iterable[int]) -> "PartialTranslation":
        A = set(A)
        return PartialTranslation(self.window, {x: y for x, y in self.pairs if x in A})

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "t_x"])
            wr.writerows(self.pairs)

    def to_json(self):
        return {"pairs": [list(p) for p in self.pairs], "displacement": self.displacement}

    @classmethod
    def from_json(cls, window, doc):
        return cls(window, {int(x): int(y) for x, y in doc["pairs"]})


def _same_window(a, b):
    if a.window.hash != b.window.hash:
        raise WindowMismatch("partial translations live on different windows")


def compose(t: PartialTranslation, s: PartialTranslation) -> PartialTranslation:
    """t o s on s^{-1}(dom t & ran s)."""
    _same_window(t, s)
    tm = t._map
    return PartialTranslation(t.window, {x: tm[y] for x, y in s.pairs if y in tm})


def invert(t: PartialTranslation) -> PartialTranslation:
    return PartialTranslation(t.window, {y: x for x, y in t.pairs})


# --------------------------------------------------------------------------
# doubling


@dataclass
class DoublingCertificate:
    carrier: frozenset
    R: int
    t_plus: PartialTranslation
    t_minus: PartialTranslation
    x_plus: frozenset
    x_minus: frozenset

    @property
    def region(self) -> frozenset:
        return self.x_plus | self.x_minus

    def check(self, w: SpaceWindow) -> list:
        """List of violated conditions (empty when valid)."""
        errs = []
        for name, t in (("t_plus", self.t_plus), ("t_minus", self.t_minus)):
            if t.window.hash != w.hash:
                errs.append(f"{name}: wrong window")
                continue
            if t.domain != self.carrier:
                errs.append(f"{name}: domain differs from carrier")
            if len(t.range) != len(t.pairs):
                errs.append(f"{name}: not injective")
            if any(w.dist(x, y) > self.R for x, y in t.pairs):
                errs.append(f"{name}: displacement exceeds R")
        if self.x_plus & self.x_minus:
            errs.append("halves overlap")
        region = frozenset(np.nonzero(w.neighborhood(w.mask(self.carrier), self.R))[0].tolist())
        if self.region != region:
            errs.append("halves do not partition N_R(carrier)")
        if not self.t_plus.range <= self.x_plus:
            errs.append("ran(t_plus) not inside X+")
        if not self.t_minus.range <= self.x_minus:
            errs.append("ran(t_minus) not inside X-")
        return errs

    def verify(self, w: SpaceWindow) -> bool:
        return not self.check(w)

    def to_json(self):
        return {
            "carrier": sorted(self.carrier),
            "R": self.R,
            "t_plus": self.t_plus.to_json(),
            "t_minus": self.t_minus.to_json(),
            "x_plus": sorted(self.x_plus),
            "x_minus": sorted(self.x_minus),
        }

    @classmethod
    def from_json(cls, w, doc):
        return cls(
            carrier=frozenset(doc["carrier"]),
            R=int(doc["R"]),
            t_plus=PartialTranslation.from_json(w, doc["t_plus"]),
            t_minus=PartialTranslation.from_json(w, doc["t_minus"]),
            x_plus=frozenset(doc["x_plus"]),
            x_minus=frozenset(doc["x_minus"]),
        )


@dataclass
class DeficiencyWitness:
    """Hall violator: |N_R(S)| < 2|S|, so no doubling of the carrier exists at R."""

    S: frozenset
    R: int
    neighborhood_size: int
    flow_value: int
    carrier_size: int

    @property
    def deficiency(self) -> int:
        return 2 * len(self.S) - self.neighborhood_size

    def verify(self, w: SpaceWindow) -> bool:
        nb = int(w.neighborhood(w.mask(self.S), self.R).sum())
        return nb == self.neighborhood_size and nb < 2 * len(self.S)

    def to_json(self):
        return {
            "S": sorted(self.S),
            "R": self.R,
            "neighborhood_size": self.neighborhood_size,
            "flow_value": self.flow_value,
            "carrier_size": self.carrier_size,
        }

    @classmethod
    def from_json(cls, doc):
        return cls(frozenset(doc["S"]), int(doc["R"]), int(doc["neighborhood_size"]),
                   int(doc["flow_value"]), int(doc["carrier_size"]))


@dataclass
class DoublingResult:
    R: int
    flow_value: int
    certificate: Optional[DoublingCertificate] = None
    witness: Optional[DeficiencyWitness] = None

    @property
    def found(self) -> bool:
        return self.certificate is not None


def _hopcroft_karp(adj, n_right):
    """Maximum bipartite matching; adj[u] lists right vertices in preference order."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = n_left + 1
    while True:
        dist = [inf] * n_left
        q = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                m = match_r[v]
                if m < 0:
                    found = True
                elif dist[m] == inf:
                    dist[m] = dist[u] + 1
                    q.append(m)
        if not found:
            break
        it = [0] * n_left

        def augment(root):
            stack = [root]
            path = []
            while stack:
                u = stack[-1]
                advanced = False
                while it[u] < len(adj[u]):
                    v = adj[u][it[u]]
                    it[u] += 1
                    m = match_r[v]
                    if m < 0:
                        path.append((u, v))
                        for a, b in path:
                            match_l[a] = b
                            match_r[b] = a
                        return True
                    if dist[m] == dist[u] + 1:
                        path.append((u, v))
                        stack.append(m)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path:
                        path.pop()
            return False

        for u in range(n_left):
            if match_l[u] < 0:
                augment(u)
    return match_l, match_r


def doubling_search(w: SpaceWindow, carrier: Iterable[int], R: int,
                    ambient: bool = True) -> DoublingResult:
    """Two injections of ``carrier`` into N_R(carrier) with disjoint ranges,
    or a Hall violator proving none exists at this R."""
    C = sorted(set(carrier))
    if not C:
        raise EmptySet("empty carrier")
    cmask = w.mask(C)
    if ambient:
        w.require_interior(cmask, R)
    region = np.nonzero(w.neighborhood(cmask, R))[0].tolist()
    ridx = {y: i for i, y in enumerate(region)}
    balls = [sorted(ridx[y] for y in w.ball(x, R)) for x in C]
    adj = [balls[i // 2] for i in range(2 * len(C))]
    match_l, match_r = _hopcroft_karp(adj, len(region))
    flow = sum(1 for m in match_l if m >= 0)
    res = DoublingResult(R=R, flow_value=flow)
    if flow == 2 * len(C):
        tp = {C[i]: region[match_l[2 * i]] for i in range(len(C))}
        tm = {C[i]: region[match_l[2 * i + 1]] for i in range(len(C))}
        xp = frozenset(tp.values())
        res.certificate = DoublingCertificate(
            carrier=frozenset(C), R=R,
            t_plus=PartialTranslation(w, tp), t_minus=PartialTranslation(w, tm),
            x_plus=xp, x_minus=frozenset(region) - xp,
        )
        return res
    # Konig closure from the unmatched copies along alternating paths
    seen_l = [False] * len(adj)
    seen_r = [False] * len(region)
    q = deque(u for u in range(len(adj)) if match_l[u] < 0)
    for u in q:
        seen_l[u] = True
    while q:
        u = q.popleft()
        for v in adj[u]:
            if not seen_r[v]:
                seen_r[v] = True
                m = match_r[v]
                if m >= 0 and not seen_l[m]:
                    seen_l[m] = True
                    q.append(m)
    S = frozenset(C[u // 2] for u in range(len(adj)) if seen_l[u])
    res.witness = DeficiencyWitness(S, R, sum(seen_r), flow, len(C))
    return res


def minimal_doubling_radius(w: SpaceWindow, carrier, R_max: int, ambient: bool = True):
    """Smallest R <= R_max admitting a doubling; returns (R, result) or (None, last)."""
    last = None
    for R in range(R_max + 1):
        last = doubling_search(w, carrier, R, ambient)
        if last.found:
            return R, last
    return None, last


@dataclass
class TarskiOutcome:
    R: int
    eps: Fraction
    folner: Optional[FolnerCertificate]
    folner_best: Optional[FolnerCertificate]
    folner_examined: int
    folner_budget: int
    doubling: Optional[DoublingResult]
    fired: str  # "folner", "doubling", "both" or "neither"


def windowed_tarski(w: SpaceWindow, R: int, eps, budget: int = 10_000,
                    carrier: Optional[Iterable[int]] = None,
                    strategy: Optional[SearchStrategy] = None,
                    policy: str = "first", ambient: bool = True) -> TarskiOutcome:
    """Følner arm first, then the doubling arm.  With policy "first" the
    doubling arm is skipped once a Følner certificate is found; with "both"
    the two arms always run.  A finding is windowed evidence, not a proof."""
    if policy not in ("first", "both"):
        raise ValueError("policy must be 'first' or 'both'")
    st = strategy or SearchStrategy(budget=budget)
    st.budget = budget
    res = explore(w, R, eps, st, ambient)
    folner = res.certificate
    dbl = None
    if folner is None or policy == "both":
        if carrier is None:
            carrier = np.nonzero(w.interior_mask(R))[0].tolist() if ambient else range(w.n)
        carrier = list(carrier)
        if carrier:
            dbl = doubling_search(w, carrier, R, ambient)
    has_d = dbl is not None and dbl.found
    fired = {(True, True): "both", (True, False): "folner",
             (False, True): "doubling", (False, False): "neither"}[(folner is not None, has_d)]
    return TarskiOutcome(R, Fraction(eps), folner, res.best, res.examined, st.budget, dbl, fired)


# --------------------------------------------------------------------------
# coloring and means


@dataclass
class ColoringDecomposition:
    parts: tuple
    colors: dict = field(default_factory=dict)

    def verify(self, t: PartialTranslation) -> bool:
        union = []
        for p in self.parts:
            if p.domain & p.range:
                return False
            union.extend(p.pairs)
        return sorted(union) == list(t.pairs) and len(union) == len(set(union))


def three_color_decompose(t: PartialTranslation) -> ColoringDecomposition:
    """Split t into three pieces with dom and ran disjoint in each piece.

    Vertices of the functional graph x -> t(x) have at most two neighbours,
    so greedy coloring with three colors never gets stuck; the piece of
    color c is the restriction of t to sources colored c."""
    fixed = t.fixed_points()
    if fixed:
        raise FixedPointPresent(fixed)
    nbrs = {}
    for x, y in t.pairs:
        nbrs.setdefault(x, set()).add(y)
        nbrs.setdefault(y, set()).add(x)
    order = sorted(nbrs, key=lambda v: (-len(nbrs[v]), v))
    color = {}
    for v in order:
        used = {color[u] for u in nbrs[v] if u in color}
        color[v] = min(c for c in range(3) if c not in used)
    parts = tuple(
        PartialTranslation(t.window, {x: y for x, y in t.pairs if color[x] == c}) for c in range(3)
    )
    return ColoringDecomposition(parts, color)


def uniform_mean(F: Iterable[int], S: Iterable[int]) -> Fraction:
    F = frozenset(F)
    if not F:
        raise EmptySet("mean over the empty set")
    return Fraction(len(F & frozenset(S)), len(F))


def mean_defect(w: SpaceWindow, F: Iterable[int], t: PartialTranslation, A: Iterable[int]) -> Fraction:
    """|mu_F(t(A)) - mu_F(A)| for the uniform mean mu_F."""
    F = frozenset(F)
    A = frozenset(A)
    if not A <= t.domain:
        raise ValueError("A must lie in dom(t)")
    return abs(uniform_mean(F, t.image(A)) - uniform_mean(F, A))


def check_certificate(cert: DoublingCertificate, w: SpaceWindow):
    errs = cert.check(w)
    if errs:
        raise InvalidCertificate("; ".join(errs))
