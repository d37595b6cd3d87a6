"""Search, certification and profiling of (R, eps)-Folner sets.

Every ratio is an exact ``Fraction``.  A certificate stores its point set and
boundary count and is re-checked by recomputing the boundary from scratch;
search heuristics never produce a claim that is not re-verified.
"""
from __future__ import annotations

import csv
import enum
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .errors import BudgetExceeded, EmptySet
from .scalars import format_fraction, parse_fraction
from .space import SpaceWindow, _GridPart

EXHAUSTIVE_LIMIT = 20


@dataclass(frozen=True)
class FolnerCertificate:
    points: tuple
    R: int
    boundary_count: int
    size: int
    ratio: Fraction
    ambient: bool

    def verify(self, w: SpaceWindow) -> bool:
        if not self.points or self.size != len(self.points) or len(set(self.points)) != self.size:
            return False
        if self.ratio != Fraction(self.boundary_count, self.size):
            return False
        try:
            count = boundary_count(w, self.points, self.R, ambient=self.ambient)
        except Exception:
            return False
        return count == self.boundary_count

    def is_folner(self, eps) -> bool:
        return self.ratio <= Fraction(eps)

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "R": self.R,
            "boundary_count": self.boundary_count,
            "size": self.size,
            "ratio": format_fraction(self.ratio),
            "ambient": self.ambient,
        }

    @classmethod
    def from_json(cls, doc) -> "FolnerCertificate":
        return cls(
            points=tuple(int(p) for p in doc["points"]),
            R=int(doc["R"]),
            boundary_count=int(doc["boundary_count"]),
            size=int(doc["size"]),
            ratio=parse_fraction(doc["ratio"]),
            ambient=bool(doc["ambient"]),
        )


@dataclass(frozen=True)
class NonExistenceCertificate:
    """Exhaustive proof that no subset of the candidate pool is (R, eps)-Folner."""

    R: int
    eps: Fraction
    window_hash: str
    pool_size: int
    examined: int
    min_ratio: Optional[Fraction]
    ambient: bool


def boundary_count(w: SpaceWindow, F: Iterable[int], R: int, ambient: bool = False) -> int:
    mask = w.mask(F)
    inner, outer = w.boundary_masks(mask, R, ambient)
    return int(inner.sum() + outer.sum())


def boundary_ratio(w: SpaceWindow, F: Iterable[int], R: int, ambient: bool = False) -> Fraction:
    F = frozenset(F)
    if not F:
        raise EmptySet("boundary ratio of the empty set")
    return Fraction(boundary_count(w, F, R, ambient), len(F))


def certify(w: SpaceWindow, F: Iterable[int], R: int, ambient: bool = False) -> FolnerCertificate:
    pts = tuple(sorted(set(F)))
    if not pts:
        raise EmptySet("certificate for the empty set")
    count = boundary_count(w, pts, R, ambient)
    return FolnerCertificate(pts, R, count, len(pts), Fraction(count, len(pts)), ambient)


# --------------------------------------------------------------------------
# strategies


class Strategy(enum.Enum):
    BALL_SWEEP = "ball_sweep"
    BOX_SWEEP = "box_sweep"
    GREEDY_EXCHANGE = "greedy_exchange"
    ANNEAL = "anneal"
    EXHAUSTIVE = "exhaustive"
    AUTO = "auto"


@dataclass
class SearchStrategy:
    kind: Strategy = Strategy.AUTO
    budget: int = 10_000
    seed: int = 0
    centers: Optional[int] = None  # ball sweep: sample this many centers
    initial_size: int = 1
    tabu: int = 7
    t0: float = 0.5
    cooling: float = 0.995

    def __post_init__(self):
        self.kind = Strategy(self.kind)


@dataclass(frozen=True)
class MinSize:
    N: int


@dataclass(frozen=True)
class Superset:
    A: frozenset


Constraint = Union[MinSize, Superset]


@dataclass
class SearchResult:
    certificate: Optional[FolnerCertificate]
    best: Optional[FolnerCertificate]
    examined: int
    budget: int
    strategy: Strategy
    exhausted: bool = False  # candidate pool fully enumerated
    nonexistence: Optional[NonExistenceCertificate] = None

    @property
    def found(self) -> bool:
        return self.certificate is not None


class _Tracker:
    """Best-so-far accumulator with lexicographic tie-breaking."""

    def __init__(self, w, R, eps, ambient, lo, hi, required):
        self.w = w
        self.R = R
        self.eps = None if eps is None else Fraction(eps)
        self.ambient = ambient
        self.lo = lo
        self.hi = hi
        self.required = required
        self.best_ratio = None
        self.best_points = None
        self.examined = 0
        self.hit = False
        self._balls = {}

    def admissible(self, size, points=None):
        if size < self.lo or (self.hi is not None and size > self.hi):
            return False
        if self.required and points is not None and not self.required <= set(points):
            return False
        return True

    def offer(self, points, count):
        """Record a candidate; returns True once a target hit is recorded."""
        self.examined += 1
        size = len(points)
        ratio = Fraction(count, size)
        better = self.best_ratio is None or ratio < self.best_ratio
        if not better and ratio == self.best_ratio:
            key = tuple(sorted(points))
            better = key < self.best_points
        if better:
            self.best_ratio = ratio
            self.best_points = tuple(sorted(points))
        if self.eps is not None and ratio <= self.eps:
            self.hit = True
        return self.hit

    def evaluate_mask(self, mask):
        inner, outer = self.w.boundary_masks(mask, self.R, False)
        count = int(inner.sum() + outer.sum())
        return self.offer(np.nonzero(mask)[0].tolist(), count)

    def evaluate_points(self, pts):
        """Local evaluation: cost proportional to |F| times the ball size."""
        F = set(pts)
        outer = set()
        inner = 0
        for x in F:
            b = self._ball(x)
            if not b <= F:
                inner += 1
                outer.update(b - F)
        return self.offer(pts, inner + len(outer))

    def _ball(self, x):
        b = self._balls.get(x)
        if b is None:
            b = self._balls[x] = self.w.ball(x, self.R)
        return b

    def certificate(self):
        if self.best_points is None:
            return None
        return certify(self.w, self.best_points, self.R, self.ambient)


def _allowed_mask(w, R, ambient):
    return w.interior_mask(R) if ambient else np.ones(w.n, dtype=bool)


def _ball_sweep(tr: _Tracker, allowed, st: SearchStrategy):
    w = tr.w
    centers = np.nonzero(allowed)[0].tolist()
    if tr.required:
        centers = sorted(tr.required)
    if st.centers is not None and len(centers) > st.centers:
        rng = random.Random(st.seed)
        centers = sorted(rng.sample(centers, st.centers))
    # whole components first: cheapest certificates on finite pieces
    for comp in w.components():
        if tr.examined >= st.budget:
            return False
        idx = sorted(comp)
        if allowed[idx].all() and tr.admissible(len(idx), idx):
            m = w.mask(idx)
            if tr.evaluate_mask(m):
                return True
    for c in centers:
        order, sizes = [], []
        hi = tr.hi if tr.hi is not None else w.n
        for layer in _bfs_layers(w, c):
            stop = False
            for y in layer:
                if not allowed[y] or len(order) >= hi:
                    stop = True
                    break
                order.append(y)
            if stop:
                break
            sizes.append(len(order))
        if tr.lo > 1 or tr.hi is not None:
            sizes = [k for k in sizes if tr.lo <= k]
            if tr.lo <= len(order):
                sizes.extend(range(tr.lo, len(order) + 1) if tr.hi is not None else [tr.lo])
        for k in sorted(set(sizes)):
            if tr.examined >= st.budget:
                return False
            pts = order[:k]
            if not tr.admissible(k, pts):
                continue
            if tr.evaluate_points(pts):
                return True
    return None  # pool exhausted


def _bfs_layers(w, x):
    """Distance layers of x's component, each sorted by id."""
    if w._parts[w._part_of[x]].table is not None:
        order = w.bfs_order(x)
        dists = [w.dist(x, y) for y in order]
        start = 0
        for i in range(1, len(order) + 1):
            if i == len(order) or dists[i] != dists[start]:
                yield order[start:i]
                start = i
        return
    seen = {x}
    frontier = [x]
    indptr, indices = w._indptr, w._indices
    while frontier:
        yield frontier
        nxt = set()
        for u in frontier:
            for v in indices[indptr[u]:indptr[u + 1]].tolist():
                if v not in seen:
                    seen.add(v)
                    nxt.add(v)
        frontier = sorted(nxt)


def _box_chain(lo_shape, limit):
    shape = list(lo_shape)
    while True:
        yield tuple(shape)
        axes = [i for i in range(len(shape)) if shape[i] < limit[i]]
        if not axes:
            return
        i = min(axes, key=lambda a: (shape[a], a))
        shape[i] += 1


def _box_sweep(tr: _Tracker, allowed, st: SearchStrategy):
    w = tr.w
    for part in w._parts:
        if not isinstance(part, _GridPart):
            continue
        sl = slice(part.offset, part.offset + part.size)
        ok = allowed[sl]
        if not ok.any():
            continue
        coords = part.coords
        a_lo = coords[ok].min(axis=0)
        a_hi = coords[ok].max(axis=0)
        limit = a_hi - a_lo + 1
        if tr.required:
            req = [r for r in tr.required]
            if not all(part.offset <= r < part.offset + part.size for r in req):
                continue
            rc = coords[[r - part.offset for r in req]]
            b_lo, b_hi = rc.min(axis=0), rc.max(axis=0)
            start = b_hi - b_lo + 1
        else:
            b_lo = b_hi = None
            start = np.ones(len(limit), dtype=np.int64)
        if np.any(start > limit):
            continue
        for shape in _box_chain(start, limit):
            vol = math.prod(shape)
            if vol < tr.lo:
                continue
            if tr.hi is not None and vol > tr.hi:
                break
            s = np.array(shape)
            if b_lo is None:
                pos = a_lo
            else:
                pos = np.maximum(a_lo, b_hi - s + 1)
                if np.any(pos > b_lo) or np.any(pos + s - 1 > a_hi):
                    continue
            inside = np.all((coords >= pos) & (coords <= pos + s - 1), axis=1)
            if not ok[inside].all():
                continue
            if tr.examined >= st.budget:
                return False
            mask = np.zeros(w.n, dtype=bool)
            mask[sl] = inside
            if tr.evaluate_mask(mask):
                return True
    return None


class _Incremental:
    """Boundary count of a mutable set F via per-point ball occupancy."""

    def __init__(self, w: SpaceWindow, R: int):
        self.w = w
        self.balls = [np.fromiter(w.ball(x, R), dtype=np.int64) for x in range(w.n)]
        self.bsize = np.array([len(b) for b in self.balls], dtype=np.int64)
        self.cnt = np.zeros(w.n, dtype=np.int64)
        self.inF = np.zeros(w.n, dtype=bool)
        self.count = 0

    def _status(self, cnt, bsize):
        return (cnt > 0) & (cnt < bsize)

    def delta(self, p, sign):
        b = self.balls[p]
        c = self.cnt[b]
        bs = self.bsize[b]
        return int(self._status(c + sign, bs).sum() - self._status(c, bs).sum())

    def apply(self, p, sign):
        self.count += self.delta(p, sign)
        self.cnt[self.balls[p]] += sign
        self.inF[p] = sign > 0

    def frontier(self):
        return np.nonzero((self.cnt > 0) & ~self.inF)[0]


def _start_set(tr: _Tracker, allowed, st, rng):
    w = tr.w
    if tr.required:
        start = set(tr.required)
        anchor = min(tr.required)
    else:
        cands = np.nonzero(allowed)[0]
        if not len(cands):
            return None
        anchor = int(cands[rng.randrange(len(cands))])
        start = {anchor}
    target = max(tr.lo, st.initial_size, len(start))
    if tr.hi is not None:
        target = min(target, tr.hi)
    for y in w.bfs_order(anchor):
        if len(start) >= target:
            break
        if allowed[y]:
            start.add(y)
    return start


def _local_search(tr: _Tracker, allowed, st: SearchStrategy, anneal: bool):
    w = tr.w
    rng = random.Random(st.seed)
    inc = _Incremental(w, tr.R)
    start = _start_set(tr, allowed, st, rng)
    if not start:
        return None
    for p in sorted(start):
        inc.apply(p, +1)
    size = len(start)
    required = tr.required or frozenset()
    if tr.admissible(size) and tr.offer(sorted(start), inc.count):
        return True
    tabu = []
    temp = st.t0
    hi = tr.hi if tr.hi is not None else w.n

    def moves():
        out = []
        if size < hi:
            out.extend((int(p), +1) for p in inc.frontier() if allowed[p])
        if size > max(tr.lo, 1):
            out.extend((int(p), -1) for p in np.nonzero(inc.inF)[0] if p not in required)
        return out

    while tr.examined < st.budget:
        cand = moves()
        fixed = not cand and tr.lo == hi
        if fixed:
            # fixed size: composite add-then-remove move
            adds = [int(p) for p in inc.frontier() if allowed[p]]
            rems = [int(p) for p in np.nonzero(inc.inF)[0] if p not in required]
            if not adds or not rems:
                return None
            a = min(adds, key=lambda p: (inc.delta(p, +1), p))
            inc.apply(a, +1)
            r = min((p for p in rems), key=lambda p: (inc.delta(p, -1), p))
            inc.apply(r, -1)
            if tr.offer(np.nonzero(inc.inF)[0].tolist(), inc.count):
                return True
            continue
        if not cand:
            return None
        if anneal:
            p, sign = cand[rng.randrange(len(cand))]
            d = inc.delta(p, sign)
            new_ratio = (inc.count + d) / (size + sign)
            old_ratio = inc.count / size
            accept = new_ratio <= old_ratio or rng.random() < math.exp(
                -(new_ratio - old_ratio) / max(temp, 1e-12)
            )
            temp *= st.cooling
            if not accept:
                tr.examined += 1
                continue
        else:
            scored = []
            for p, sign in cand:
                if p in tabu:
                    continue
                d = inc.delta(p, sign)
                scored.append((Fraction(inc.count + d, size + sign), p, sign))
            if not scored:
                tabu.clear()
                continue
            _, p, sign = min(scored)
            tabu.append(p)
            if len(tabu) > st.tabu:
                tabu.pop(0)
        inc.apply(p, sign)
        size += sign
        pts = np.nonzero(inc.inF)[0].tolist()
        if tr.admissible(size) and tr.offer(pts, inc.count):
            return True
        elif not tr.admissible(size):
            tr.examined += 1
    return False


def _exhaustive(tr: _Tracker, allowed, st: SearchStrategy):
    w = tr.w
    pool = np.nonzero(allowed)[0].tolist()
    if len(pool) > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive search is gated to {EXHAUSTIVE_LIMIT} candidate points")
    balls = []
    for x in pool:
        bm = 0
        for y in w.ball(x, tr.R):
            bm |= 1 << y
        balls.append(bm)
    k = len(pool)
    union = [0] * (1 << k)
    full_window = (1 << w.n) - 1
    for s in range(1, 1 << k):
        low = (s & -s).bit_length() - 1
        union[s] = union[s & (s - 1)] | balls[low]
        members = [pool[i] for i in range(k) if s >> i & 1]
        smask = 0
        for x in members:
            smask |= 1 << x
        outer = union[s] & ~smask & full_window
        inner = sum(1 for i in range(k) if s >> i & 1 and balls[i] & ~smask)
        if not tr.admissible(len(members), members):
            continue
        if tr.offer(members, bin(outer).count("1") + inner) and tr.eps is not None:
            return True
    return None


def explore(w: SpaceWindow, R: int, eps=None, strategy: Optional[SearchStrategy] = None,
            ambient: bool = True, min_size: int = 1, max_size: Optional[int] = None,
            superset: Iterable[int] = ()) -> SearchResult:
    """Minimise |d_R F|/|F| over the strategy's candidate pool, stopping
    early once the ratio is <= eps (when eps is given)."""
    st = strategy or SearchStrategy()
    if eps is not None and Fraction(eps) < 0:
        raise ValueError("eps must be nonnegative")
    kind = st.kind
    if kind is Strategy.AUTO:
        only_grid = all(isinstance(p, _GridPart) for p in w._parts)
        kind = Strategy.BOX_SWEEP if only_grid else Strategy.BALL_SWEEP
    required = frozenset(superset)
    allowed = _allowed_mask(w, R, ambient)
    if required and not allowed[list(required)].all():
        raise ValueError("superset contains points that are not admissible (window truncation)")
    tr = _Tracker(w, R, eps, ambient, max(1, min_size), max_size, required)
    runner = {
        Strategy.BALL_SWEEP: _ball_sweep,
        Strategy.BOX_SWEEP: _box_sweep,
        Strategy.GREEDY_EXCHANGE: lambda t, a, s: _local_search(t, a, s, anneal=False),
        Strategy.ANNEAL: lambda t, a, s: _local_search(t, a, s, anneal=True),
        Strategy.EXHAUSTIVE: _exhaustive,
    }[kind]
    outcome = runner(tr, allowed, st)
    best = tr.certificate()
    cert = best if (tr.hit and best is not None and best.is_folner(tr.eps)) else None
    if cert is not None and not cert.verify(w):
        raise AssertionError("internal error: search produced a certificate that does not re-verify")
    result = SearchResult(cert, best, tr.examined, st.budget, kind, exhausted=outcome is None)
    if kind is Strategy.EXHAUSTIVE and cert is None and eps is not None:
        result.nonexistence = NonExistenceCertificate(
            R, Fraction(eps), w.hash, int(allowed.sum()), tr.examined,
            best.ratio if best else None, ambient,
        )
    return result


def _finish(res: SearchResult):
    if res.certificate is not None:
        return res.certificate
    if res.exhausted:
        return None
    raise BudgetExceeded(
        f"no certificate within {res.budget} candidates; best ratio "
        f"{res.best.ratio if res.best else None}",
        best=res.best,
        examined=res.examined,
    )


def search_folner(w: SpaceWindow, R: int, eps, strategy: Optional[SearchStrategy] = None,
                  ambient: bool = True) -> Optional[FolnerCertificate]:
    """Return an (R, eps)-Folner certificate, or None once the candidate pool
    is exhausted.  Raises BudgetExceeded if the budget runs out first.
    Failure is never evidence of non-amenability."""
    return _finish(explore(w, R, eps, strategy, ambient))


def search_proper_folner(w: SpaceWindow, R: int, eps, constraint: Constraint,
                         strategy: Optional[SearchStrategy] = None,
                         ambient: bool = True) -> Optional[FolnerCertificate]:
    if isinstance(constraint, MinSize):
        res = explore(w, R, eps, strategy, ambient, min_size=constraint.N)
    else:
        res = explore(w, R, eps, strategy, ambient, superset=constraint.A)
    return _finish(res)


@dataclass
class ProfileEntry:
    N: int
    ratio: Optional[Fraction]
    certificate: Optional[FolnerCertificate]


@dataclass
class IsoperimetricProfile:
    R: int
    entries: list = field(default_factory=list)
    search_budget: int = 0

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "ratio_num", "ratio_den", "budget"])
            for e in self.entries:
                num = "" if e.ratio is None else e.ratio.numerator
                den = "" if e.ratio is None else e.ratio.denominator
                writer.writerow([e.N, num, den, self.search_budget])


def profile(w: SpaceWindow, R: int, size_targets, budget: int = 10_000,
            strategy: Optional[SearchStrategy] = None, ambient: bool = True,
            size_slack: int = 0) -> IsoperimetricProfile:
    """Best ratio found among sets with N <= |F| <= N + size_slack, per target."""
    targets = sorted(set(int(n) for n in size_targets))
    if not targets:
        raise ValueError("size_targets must be nonempty")
    st = strategy or SearchStrategy(budget=budget)
    st.budget = budget
    prof = IsoperimetricProfile(R=R, search_budget=budget)
    for N in targets:
        res = explore(w, R, None, st, ambient, min_size=N, max_size=N + size_slack)
        best = res.best
        prof.entries.append(ProfileEntry(N, best.ratio if best else None, best))
    return prof


def certificate_to_json_str(cert: FolnerCertificate) -> str:
    return json.dumps(cert.to_json(), sort_keys=True)
