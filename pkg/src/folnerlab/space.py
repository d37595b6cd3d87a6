"""Finite windows of bounded-geometry extended metric spaces.

A window is a finite point set with an integer-valued extended metric
(``INF`` between coarse components).  Points are the integers
``0..n-1``; each carries a human-readable label (a lattice coordinate, a
reduced word, ...).

Built-in models: lattice boxes in Z^d, balls in the free group F_r with the
word metric, discrete tori (Z/n)^d, box spaces (disjoint unions at infinite
separation), and explicit distance tables.  For the two infinite models
(grid, free group) a point is *interior at radius R* when its ambient
R-ball lies entirely inside the window; ambient-exact boundary queries are
only answered for sets of interior points.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import itertools
import json
import math
import os
import threading
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InvalidMetric, RecipeTooLarge, TruncationError

INF = math.inf

DEFAULT_MAX_POINTS = 250_000
MAX_POINTS_ENV = "FOLNERLAB_MAX_POINTS"
EXHAUSTIVE_METRIC_CHECK = 300


def max_points_cap() -> int:
    raw = os.environ.get(MAX_POINTS_ENV)
    return int(raw) if raw else DEFAULT_MAX_POINTS


# --------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Grid:
    """Box ``prod_i [origin_i, origin_i + sides_i)`` in Z^d with the l1 metric."""

    sides: tuple
    origin: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(int(s) for s in self.sides))
        if self.origin is None:
            object.__setattr__(self, "origin", (0,) * len(self.sides))
        else:
            object.__setattr__(self, "origin", tuple(int(o) for o in self.origin))

    @property
    def dims(self):
        return len(self.sides)


@dataclass(frozen=True)
class FreeGroupBall:
    rank: int
    radius: int


@dataclass(frozen=True)
class CyclicQuotient:
    """The torus (Z/n)^dims with the quotient word metric."""

    n: int
    dims: int = 1


@dataclass(frozen=True)
class BoxSpace:
    """Finite quotients placed at pairwise infinite distance.

    ``separation`` records the intended (strictly increasing) separation
    schedule; ``None`` means infinite from the start.  The window always
    models inter-component distances as ``INF``.
    """

    components: tuple
    separation: Optional[tuple] = None


@dataclass(frozen=True)
class DisjointUnion:
    parts: tuple


@dataclass(frozen=True)
class Explicit:
    """Distance table; ``None`` entries mean infinite distance."""

    distances: tuple
    labels: Optional[tuple] = None


Descriptor = Union[Grid, FreeGroupBall, CyclicQuotient, BoxSpace, DisjointUnion, Explicit]


def descriptor_to_json(desc) -> dict:
    if isinstance(desc, Grid):
        return {"kind": "grid", "sides": list(desc.sides), "origin": list(desc.origin)}
    if isinstance(desc, FreeGroupBall):
        return {"kind": "free_group_ball", "rank": desc.rank, "radius": desc.radius}
    if isinstance(desc, CyclicQuotient):
        return {"kind": "cyclic", "n": desc.n, "dims": desc.dims}
    if isinstance(desc, BoxSpace):
        return {
            "kind": "box_space",
            "components": [descriptor_to_json(c) for c in desc.components],
            "separation": "inf" if desc.separation is None else list(desc.separation),
        }
    if isinstance(desc, DisjointUnion):
        return {"kind": "disjoint_union", "parts": [descriptor_to_json(p) for p in desc.parts]}
    if isinstance(desc, Explicit):
        out = {"kind": "explicit", "distances": [list(r) for r in desc.distances]}
        if desc.labels is not None:
            out["labels"] = list(desc.labels)
        return out
    raise TypeError(f"not a space descriptor: {desc!r}")


def descriptor_from_json(doc: dict):
    try:
        kind = doc["kind"]
        if kind == "grid":
            if "sides" in doc:
                sides = doc["sides"]
            else:
                sides = [doc["side"]] * int(doc.get("dims", 1))
            if isinstance(sides, int):
                sides = [sides] * int(doc.get("dims", 1))
            return Grid(tuple(sides), tuple(doc["origin"]) if doc.get("origin") is not None else None)
        if kind == "free_group_ball":
            return FreeGroupBall(int(doc["rank"]), int(doc["radius"]))
        if kind == "cyclic":
            return CyclicQuotient(int(doc["n"]), int(doc.get("dims", 1)))
        if kind == "box_space":
            sep = doc.get("separation", "inf")
            sep = None if sep in (None, "inf") else tuple(int(s) for s in sep)
            return BoxSpace(tuple(descriptor_from_json(c) for c in doc["components"]), sep)
        if kind == "disjoint_union":
            return DisjointUnion(tuple(descriptor_from_json(p) for p in doc["parts"]))
        if kind == "explicit":
            dist = tuple(tuple(None if x is None else int(x) for x in row) for row in doc["distances"])
            labels = doc.get("labels")
            return Explicit(dist, tuple(labels) if labels is not None else None)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed space descriptor: {exc}") from exc
    raise ValueError(f"unknown space kind {doc.get('kind')!r}")


def _canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def descriptor_hash(desc) -> str:
    return hashlib.sha256(_canonical(descriptor_to_json(desc)).encode()).hexdigest()[:16]


def _free_group_ball_size(rank: int, radius: int) -> int:
    if radius < 0:
        return 0
    k = 2 * rank
    if rank == 0:
        return 1
    return 1 + sum(k * (k - 1) ** (j - 1) for j in range(1, radius + 1))


def point_count(desc) -> int:
    if isinstance(desc, Grid):
        return math.prod(desc.sides)
    if isinstance(desc, FreeGroupBall):
        return _free_group_ball_size(desc.rank, desc.radius)
    if isinstance(desc, CyclicQuotient):
        return desc.n ** desc.dims
    if isinstance(desc, BoxSpace):
        return sum(point_count(c) for c in desc.components)
    if isinstance(desc, DisjointUnion):
        return sum(point_count(p) for p in desc.parts)
    if isinstance(desc, Explicit):
        return len(desc.distances)
    raise TypeError(f"not a space descriptor: {desc!r}")


def _check_params(desc):
    if isinstance(desc, Grid):
        if desc.dims < 1 or any(s < 1 for s in desc.sides):
            raise ValueError("grid needs dims >= 1 and positive side lengths")
        if len(desc.origin) != desc.dims:
            raise ValueError("grid origin must have one coordinate per dimension")
    elif isinstance(desc, FreeGroupBall):
        if desc.rank < 1 or desc.radius < 0:
            raise ValueError("free group ball needs rank >= 1 and radius >= 0")
    elif isinstance(desc, CyclicQuotient):
        if desc.n < 1 or desc.dims < 1:
            raise ValueError("cyclic quotient needs n >= 1 and dims >= 1")
    elif isinstance(desc, BoxSpace):
        if not desc.components:
            raise ValueError("box space needs at least one component")
        for c in desc.components:
            if not isinstance(c, (CyclicQuotient, Explicit)):
                raise ValueError("box space components must be finite quotients (cyclic or explicit)")
            _check_params(c)
        if desc.separation is not None:
            sep = list(desc.separation)
            if len(sep) != len(desc.components):
                raise ValueError("separation schedule needs one entry per component")
            if any(s <= 0 for s in sep) or any(b <= a for a, b in zip(sep, sep[1:])):
                raise ValueError("separation schedule must be positive and strictly increasing")
    elif isinstance(desc, DisjointUnion):
        if not desc.parts:
            raise ValueError("disjoint union needs at least one part")
        for p in desc.parts:
            _check_params(p)
    elif isinstance(desc, Explicit):
        n = len(desc.distances)
        if n == 0:
            raise ValueError("explicit table is empty")
        if any(len(r) != n for r in desc.distances):
            raise InvalidMetric("explicit distance table must be square")
        if desc.labels is not None and len(desc.labels) != n:
            raise ValueError("explicit labels must match table size")


# --------------------------------------------------------------------------
# parts: one per primitive model


class _Part:
    """One primitive model occupying ids ``offset .. offset+size-1``."""

    infinite = False
    table = None  # dense distance table (float, INF allowed) for explicit parts

    def __init__(self, offset, labels):
        self.offset = offset
        self.labels = labels
        self.size = len(labels)

    def edges(self):
        return np.empty((0, 2), dtype=np.int64)

    def metric(self, i, j):
        raise NotImplementedError

    def interior_mask(self, R):
        return np.ones(self.size, dtype=bool)

    def max_ball(self, R):
        raise NotImplementedError


class _GridPart(_Part):
    infinite = True

    def __init__(self, offset, desc: Grid):
        ranges = [range(o, o + s) for o, s in zip(desc.origin, desc.sides)]
        labels = list(itertools.product(*ranges))
        super().__init__(offset, labels)
        self.desc = desc
        self.coords = np.array(labels, dtype=np.int64).reshape(len(labels), desc.dims)
        self.lo = np.array(desc.origin, dtype=np.int64)
        self.hi = self.lo + np.array(desc.sides, dtype=np.int64) - 1

    def edges(self):
        sides = self.desc.sides
        idx = np.arange(self.size).reshape(sides)
        out = []
        for axis in range(self.desc.dims):
            a = np.take(idx, range(0, sides[axis] - 1), axis=axis).ravel()
            b = np.take(idx, range(1, sides[axis]), axis=axis).ravel()
            out.append(np.stack([a, b], axis=1))
        return np.concatenate(out) if out else super().edges()

    def metric(self, i, j):
        return int(np.abs(self.coords[i] - self.coords[j]).sum())

    def interior_mask(self, R):
        c = self.coords
        return np.all((c - self.lo >= R) & (self.hi - c >= R), axis=1)

    def max_ball(self, R):
        d = self.desc.dims
        return sum(2 ** k * math.comb(d, k) * math.comb(R, k) for k in range(0, min(d, R) + 1))


def free_group_letters(rank: int) -> list:
    """Letters ordered a, A, b, B, ...; upper case is the inverse."""
    out = []
    for i in range(rank):
        ch = chr(ord("a") + i)
        out.extend([ch, ch.upper()])
    return out


def letter_inverse(ch: str) -> str:
    return ch.lower() if ch.isupper() else ch.upper()


def reduce_word(word: str) -> str:
    stack = []
    for ch in word:
        if stack and stack[-1] == letter_inverse(ch):
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def word_distance(g: str, h: str) -> int:
    """Left-invariant word metric |g^{-1} h| on reduced words."""
    k = 0
    for a, b in zip(g, h):
        if a != b:
            break
        k += 1
    return len(g) + len(h) - 2 * k


def enumerate_reduced_words(rank: int, radius: int) -> list:
    letters = free_group_letters(rank)
    level = [""]
    out = [""]
    for _ in range(radius):
        nxt = []
        for w in level:
            for ch in letters:
                if w and w[-1] == letter_inverse(ch):
                    continue
                nxt.append(w + ch)
        out.extend(nxt)
        level = nxt
    return out


class _FreeGroupPart(_Part):
    infinite = True

    def __init__(self, offset, desc: FreeGroupBall):
        labels = enumerate_reduced_words(desc.rank, desc.radius)
        super().__init__(offset, labels)
        self.desc = desc
        self.lengths = np.array([len(w) for w in labels], dtype=np.int64)
        self.lookup = {w: i for i, w in enumerate(labels)}

    def edges(self):
        pairs = [(self.lookup[w[:-1]], i) for i, w in enumerate(self.labels) if w]
        return np.array(pairs, dtype=np.int64).reshape(len(pairs), 2)

    def metric(self, i, j):
        return word_distance(self.labels[i], self.labels[j])

    def interior_mask(self, R):
        return self.lengths + R <= self.desc.radius

    def max_ball(self, R):
        return _free_group_ball_size(self.desc.rank, R)


class _TorusPart(_Part):
    def __init__(self, offset, desc: CyclicQuotient):
        labels = list(itertools.product(range(desc.n), repeat=desc.dims))
        super().__init__(offset, labels)
        self.desc = desc
        self.coords = np.array(labels, dtype=np.int64).reshape(len(labels), desc.dims)
        self._ball_sizes = {}

    def edges(self):
        n, d = self.desc.n, self.desc.dims
        if n == 1:
            return super().edges()
        idx = np.arange(self.size).reshape((n,) * d)
        out = set()
        for axis in range(d):
            shifted = np.roll(idx, -1, axis=axis)
            for a, b in zip(idx.ravel(), shifted.ravel()):
                out.add((min(a, b), max(a, b)))
        return np.array(sorted(out), dtype=np.int64)

    def metric(self, i, j):
        n = self.desc.n
        diff = np.abs(self.coords[i] - self.coords[j])
        return int(np.minimum(diff, n - diff).sum())

    def max_ball(self, R):
        # vertex-transitive: every ball has the size of the ball at 0
        if R not in self._ball_sizes:
            n = self.desc.n
            per_axis = [min(k, n - k) for k in range(n)]
            dist = np.array([0])
            for _ in range(self.desc.dims):
                dist = (dist[:, None] + np.array(per_axis)[None, :]).ravel()
            self._ball_sizes[R] = int((dist <= R).sum())
        return self._ball_sizes[R]


class _ExplicitPart(_Part):
    def __init__(self, offset, desc: Explicit, seed=0):
        n = len(desc.distances)
        labels = list(desc.labels) if desc.labels is not None else list(range(n))
        super().__init__(offset, labels)
        table = np.array(
            [[INF if x is None else float(x) for x in row] for row in desc.distances], dtype=float
        )
        self.table = table
        self.validation_mode = _validate_table(table, seed)

    def edges(self):
        # pairs at finite distance; used only for coarse components
        i, j = np.nonzero(np.isfinite(self.table))
        keep = i < j
        return np.stack([i[keep], j[keep]], axis=1).astype(np.int64)

    def metric(self, i, j):
        d = self.table[i, j]
        return INF if math.isinf(d) else int(d)

    def max_ball(self, R):
        return int((self.table <= R).sum(axis=1).max())


def _validate_table(t: np.ndarray, seed: int) -> str:
    n = t.shape[0]
    finite = t[np.isfinite(t)]
    if np.any(finite < 0) or np.any(finite != np.round(finite)):
        raise InvalidMetric("distances must be nonnegative integers or null")
    if not np.array_equal(t, t.T):
        raise InvalidMetric("distance table is not symmetric")
    if np.any(np.diag(t) != 0):
        raise InvalidMetric("d(x,x) must be 0")
    off = t[~np.eye(n, dtype=bool)]
    if np.any(off < 1):
        raise InvalidMetric("distinct points must be at distance >= 1 (uniform discreteness)")
    if n <= EXHAUSTIVE_METRIC_CHECK:
        for k in range(n):
            via = t[:, k][:, None] + t[k, :][None, :]
            if np.any(t > via):
                bad = np.argwhere(t > via)[0]
                raise InvalidMetric(f"triangle inequality fails at ({bad[0]}, {k}, {bad[1]})")
        return "exhaustive"
    rng = np.random.default_rng(seed)
    m = 200_000
    a, b, c = rng.integers(0, n, size=(3, m))
    if np.any(t[a, c] > t[a, b] + t[b, c]):
        raise InvalidMetric("triangle inequality fails on a sampled triple")
    return "sampled"


def _flatten(desc, offset, parts, comp_labels, prefix):
    if isinstance(desc, (BoxSpace, DisjointUnion)):
        children = desc.components if isinstance(desc, BoxSpace) else desc.parts
        for k, child in enumerate(children):
            offset = _flatten(child, offset, parts, comp_labels, prefix + (k,))
        return offset
    if isinstance(desc, Grid):
        part = _GridPart(offset, desc)
    elif isinstance(desc, FreeGroupBall):
        part = _FreeGroupPart(offset, desc)
    elif isinstance(desc, CyclicQuotient):
        part = _TorusPart(offset, desc)
    elif isinstance(desc, Explicit):
        part = _ExplicitPart(offset, desc)
    else:
        raise TypeError(f"not a space descriptor: {desc!r}")
    parts.append(part)
    comp_labels.append(prefix)
    return offset + part.size


# --------------------------------------------------------------------------
# the window


class BoundaryKind(enum.Enum):
    TWO_SIDED = "two_sided"
    OUTER = "outer"
    INNER = "inner"


PointSet = frozenset


class SpaceWindow:
    """Immutable finite window; only the geometry-bound cache mutates."""

    def __init__(self, descriptor, parts, prefixes):
        self.descriptor = descriptor
        self._parts = parts
        labels = []
        for part, prefix in zip(parts, prefixes):
            if prefix:
                labels.extend((prefix if len(prefix) > 1 else prefix[0], lab) for lab in part.labels)
            else:
                labels.extend(part.labels)
        self.labels = labels
        self.n = len(labels)
        self._part_of = np.concatenate(
            [np.full(p.size, k, dtype=np.int64) for k, p in enumerate(parts)]
        )
        self._lookup = None

        graph_edges, finite_edges = [], []
        for p in parts:
            e = p.edges() + p.offset
            (finite_edges if p.table is not None else graph_edges).append(e)
        ge = np.concatenate(graph_edges) if graph_edges else np.empty((0, 2), dtype=np.int64)
        fe = np.concatenate(finite_edges) if finite_edges else np.empty((0, 2), dtype=np.int64)
        self.adjacency = self._sym_csr(ge)
        n_comp, comp = connected_components(
            self._sym_csr(np.concatenate([ge, fe])), directed=False
        )
        # relabel components in order of first appearance
        order = {}
        for c in comp:
            order.setdefault(int(c), len(order))
        self.component = np.array([order[int(c)] for c in comp], dtype=np.int64)
        self.n_components = n_comp
        self._indptr = self.adjacency.indptr
        self._indices = self.adjacency.indices
        self._geometry_bound = {}
        self._lock = threading.Lock()
        self.validation_mode = next(
            (p.validation_mode for p in parts if isinstance(p, _ExplicitPart)), None
        )

    def _sym_csr(self, edges):
        n = self.n
        if len(edges) == 0:
            return sp.csr_matrix((n, n), dtype=np.int8)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        m = sp.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        m.data[:] = 1
        return m

    # ---- identity ----------------------------------------------------------

    @property
    def hash(self) -> str:
        return descriptor_hash(self.descriptor)

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def is_infinite_model(self) -> bool:
        return any(p.infinite for p in self._parts)

    def index(self, label) -> int:
        if self._lookup is None:
            self._lookup = {lab: i for i, lab in enumerate(self.labels)}
        return self._lookup[label]

    def indices(self, labels: Iterable) -> frozenset:
        return frozenset(self.index(lab) for lab in labels)

    def components(self) -> list:
        out = [[] for _ in range(self.n_components)]
        for i, c in enumerate(self.component):
            out[c].append(i)
        return [frozenset(c) for c in out]

    # ---- metric ------------------------------------------------------------

    def _local(self, x):
        part = self._parts[self._part_of[x]]
        return part, x - part.offset

    def dist(self, x: int, y: int):
        if x == y:
            return 0
        if self.component[x] != self.component[y]:
            return INF
        part, i = self._local(x)
        return part.metric(i, y - part.offset)

    def ball(self, x: int, R: int) -> frozenset:
        part, i = self._local(x)
        if part.table is not None:
            row = part.table[i]
            return frozenset((np.nonzero(row <= R)[0] + part.offset).tolist())
        seen = {x}
        frontier = [x]
        indptr, indices = self._indptr, self._indices
        for _ in range(R):
            nxt = []
            for u in frontier:
                for v in indices[indptr[u]:indptr[u + 1]]:
                    v = int(v)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            if not nxt:
                break
            frontier = nxt
        return frozenset(seen)

    def bfs_order(self, x: int, limit: Optional[int] = None) -> list:
        """Points of x's component ordered by distance from x, ties by id."""
        part, i = self._local(x)
        if part.table is not None:
            row = part.table[i]
            ids = [j for j in np.argsort(row, kind="stable") if np.isfinite(row[j])]
            out = [int(j) + part.offset for j in ids]
            return out[:limit] if limit is not None else out
        out = [x]
        seen = {x}
        frontier = [x]
        indptr, indices = self._indptr, self._indices
        while frontier and (limit is None or len(out) < limit):
            nxt = set()
            for u in frontier:
                for v in indices[indptr[u]:indptr[u + 1]]:
                    v = int(v)
                    if v not in seen:
                        seen.add(v)
                        nxt.add(v)
            frontier = sorted(nxt)
            out.extend(frontier)
        return out[:limit] if limit is not None else out

    def geometry_bound(self, R: int) -> int:
        """sup_x |B_R(x)| over the modelled space (ambient for infinite models)."""
        with self._lock:
            if R not in self._geometry_bound:
                self._geometry_bound[R] = max(p.max_ball(R) for p in self._parts)
            return self._geometry_bound[R]

    # ---- masks and neighbourhoods -----------------------------------------

    def mask(self, points: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        idx = np.fromiter(points, dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= self.n:
                raise ValueError("point id outside the window")
            m[idx] = True
        return m

    def neighborhood(self, mask: np.ndarray, R: int) -> np.ndarray:
        """Boolean mask of {x : d(x, S) <= R} for S given by ``mask``."""
        out = mask.copy()
        if R > 0 and self.adjacency.nnz:
            cur = mask.astype(np.int8)
            for _ in range(R):
                grown = (self.adjacency @ cur > 0) | out
                if np.array_equal(grown, out):
                    break
                out = grown
                cur = out.astype(np.int8)
        for p in self._parts:
            if p.table is None:
                continue
            sl = slice(p.offset, p.offset + p.size)
            sub = mask[sl]
            if sub.any():
                out[sl] |= (p.table[sub] <= R).any(axis=0)
        return out

    def interior_mask(self, R: int) -> np.ndarray:
        return np.concatenate([p.interior_mask(R) for p in self._parts])

    def is_interior(self, x: int, R: int) -> bool:
        part, i = self._local(x)
        return bool(part.interior_mask(R)[i])

    def require_interior(self, mask: np.ndarray, R: int):
        bad = mask & ~self.interior_mask(R)
        if bad.any():
            offenders = np.nonzero(bad)[0][:5].tolist()
            raise TruncationError(
                f"ambient boundary at R={R} needs interior points; offenders {offenders}"
            )

    def boundary_masks(self, mask: np.ndarray, R: int, ambient: bool = False):
        """(inner, outer) boundary masks of the set given by ``mask``."""
        if ambient:
            self.require_interior(mask, R)
        outer = self.neighborhood(mask, R) & ~mask
        inner = self.neighborhood(~mask, R) & mask
        return inner, outer

    # ---- export ------------------------------------------------------------

    def export_edges(self, path, cutoff: int):
        """CSV ``x,y,d`` for all pairs x < y with d(x,y) <= cutoff."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "d"])
            for x in range(self.n):
                for y in sorted(self.ball(x, cutoff)):
                    if y > x:
                        writer.writerow([x, y, self.dist(x, y)])

    def __repr__(self):
        return f"SpaceWindow(n={self.n}, components={self.n_components}, hash={self.hash})"


def build_window(desc, max_points: Optional[int] = None) -> SpaceWindow:
    _check_params(desc)
    cap = max_points_cap() if max_points is None else max_points
    count = point_count(desc)
    if count > cap:
        raise RecipeTooLarge(f"recipe has {count} points, cap is {cap} (set {MAX_POINTS_ENV})")
    parts, prefixes = [], []
    _flatten(desc, 0, parts, prefixes, ())
    return SpaceWindow(desc, parts, prefixes)


def ball(w: SpaceWindow, x: int, R: int) -> frozenset:
    return w.ball(x, R)


def boundary(w: SpaceWindow, A: Iterable[int], R: int, kind=BoundaryKind.TWO_SIDED,
             ambient: bool = False) -> frozenset:
    """R-boundary of A.  Complements are taken inside the window unless
    ``ambient`` is set, in which case A must consist of R-interior points."""
    kind = BoundaryKind(kind)
    inner, outer = w.boundary_masks(w.mask(A), R, ambient)
    if kind is BoundaryKind.INNER:
        m = inner
    elif kind is BoundaryKind.OUTER:
        m = outer
    else:
        m = inner | outer
    return frozenset(np.nonzero(m)[0].tolist())


def complement(w: SpaceWindow, A: Iterable[int]) -> frozenset:
    return frozenset(np.nonzero(~w.mask(A))[0].tolist())
