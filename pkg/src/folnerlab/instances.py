"""Seeded random instances: partial translations, operators, subsets."""
from __future__ import annotations

import random
from fractions import Fraction

from .roe import DiagonalFunction, FinitePropOperator, from_partial_translation
from .scalars import cx
from .translations import PartialTranslation


def small_rational(rng: random.Random, bound: int = 3, den: int = 4) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))
        if q != 0:
            return q


def small_scalar(rng: random.Random, complex_prob: float = 0.25):
    re = small_rational(rng)
    if rng.random() < complex_prob:
        return cx(re, small_rational(rng))
    return re


def random_partial_translation(w, R: int, rng: random.Random, density: float = 0.6,
                               fixed_point_free: bool = False, domain=None) -> PartialTranslation:
    pts = sorted(domain) if domain is not None else list(range(w.n))
    rng.shuffle(pts)
    used = set()
    pairs = {}
    for x in pts:
        if rng.random() > density:
            continue
        cands = sorted(y for y in w.ball(x, R) if y not in used and not (fixed_point_free and y == x))
        if not cands:
            continue
        y = rng.choice(cands)
        pairs[x] = y
        used.add(y)
    return PartialTranslation(w, pairs)


def random_diagonal(w, rng: random.Random, support=None, density: float = 0.7) -> DiagonalFunction:
    pts = range(w.n) if support is None else sorted(support)
    return DiagonalFunction(w, {x: small_scalar(rng) for x in pts if rng.random() < density})


def random_operator(w, R: int, rng: random.Random, terms: int = 3, density: float = 0.6) -> FinitePropOperator:
    """Sum of V_t f over random partial translations t of displacement <= R."""
    T = FinitePropOperator.zero(w)
    for _ in range(terms):
        t = random_partial_translation(w, R, rng, density)
        f = random_diagonal(w, rng, t.domain)
        T = T + from_partial_translation(t) @ f
    return T


def random_subset(w, rng: random.Random, k: int, pool=None) -> list:
    pool = sorted(range(w.n) if pool is None else pool)
    return sorted(rng.sample(pool, min(k, len(pool))))
