import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from folnerlab.errors import FixedPointPresent, WindowMismatch
from folnerlab.folner import boundary_ratio, certify
from folnerlab.instances import random_partial_translation
from folnerlab.space import FreeGroupBall, Grid, build_window, enumerate_reduced_words, reduce_word
from folnerlab.translations import (
    DoublingCertificate,
    PartialTranslation,
    compose,
    doubling_search,
    invert,
    mean_defect,
    minimal_doubling_radius,
    three_color_decompose,
    windowed_tarski,
)


def _word_ball(w, x, R):
    # right multiplication by every reduced word of length <= R
    label = w.labels[x]
    out = set()
    for u in enumerate_reduced_words(2, R):
        y = reduce_word(label + u)
        try:
            out.add(w.index(y))
        except KeyError:
            pass
    return out


def max_flow_oracle(w, carrier, R):
    """Doubling flow value by networkx max-flow, independent of the matcher."""
    G = nx.DiGraph()
    region = set()
    words = isinstance(w.labels[0], str)
    for x in carrier:
        G.add_edge("s", ("c", x), capacity=2)
        near = _word_ball(w, x, R) if words else [y for y in range(w.n) if w.dist(x, y) <= R]
        for y in near:
            G.add_edge(("c", x), ("t", y), capacity=1)
            region.add(y)
    for y in region:
        G.add_edge(("t", y), "z", capacity=1)
    return nx.maximum_flow_value(G, "s", "z")


def shift(w, k, lo, hi):
    return PartialTranslation(w, {w.index((i,)): w.index((i + k,)) for i in range(lo, hi + 1)})


def test_shift_composition():
    w = build_window(Grid((20,), (-5,)))
    t = shift(w, 1, 0, 9)
    assert compose(t, t) == shift(w, 2, 0, 8)
    assert compose(t, invert(t)) == PartialTranslation.identity(w, t.range)
    assert compose(t, t).displacement == 2


def test_invert_empty_and_involution():
    w = build_window(Grid((5,)))
    e = PartialTranslation(w, {})
    assert invert(e) == e and len(e) == 0
    t = PartialTranslation(w, {0: 2, 1: 0})
    assert invert(invert(t)) == t and invert(t).displacement == t.displacement


def test_invalid_translations():
    w = build_window(Grid((5,)))
    with pytest.raises(ValueError):
        PartialTranslation(w, {0: 1, 2: 1})
    other = build_window(Grid((6,)))
    with pytest.raises(WindowMismatch):
        compose(PartialTranslation(w, {0: 1}), PartialTranslation(other, {0: 1}))


def brute_compose(t, s):
    out = {}
    for x, y in s.pairs:
        for u, v in t.pairs:
            if u == y:
                out[x] = v
    return out


@given(st.integers(0, 10_000))
def test_composition_matches_bruteforce(seed):
    rng = random.Random(seed)
    w = build_window(Grid((50,)))
    t = random_partial_translation(w, 3, rng)
    s = random_partial_translation(w, 3, rng)
    ts = compose(t, s)
    assert ts.mapping == brute_compose(t, s)
    assert ts.displacement <= t.displacement + s.displacement


@given(st.integers(0, 10_000))
def test_associativity_and_inverse(seed):
    rng = random.Random(seed)
    w = build_window(Grid((10, 10)))
    t, s, r = (random_partial_translation(w, 2, rng) for _ in range(3))
    assert compose(compose(t, s), r) == compose(t, compose(s, r))
    assert compose(invert(t), t) == PartialTranslation.identity(w, t.domain)


@pytest.mark.parametrize("m,R", [(3, 1), (10, 1), (10, 2), (20, 4), (9, 4)])
def test_interval_has_no_doubling(m, R):
    w = build_window(Grid((m + 2 * R + 4,), (-R - 2,)))
    C = [w.index((i,)) for i in range(m)]
    res = doubling_search(w, C, R)
    assert not res.found
    assert res.flow_value == max_flow_oracle(w, C, R) == m + 2 * R
    wit = res.witness
    assert wit.S == frozenset(C) and wit.neighborhood_size == m + 2 * R
    assert wit.verify(w)


def test_single_point_doubling():
    w = build_window(Grid((3,)))
    res = doubling_search(w, [1], 1)
    cert = res.certificate
    assert cert.verify(w)
    assert cert.t_plus(1) != cert.t_minus(1)


def test_free_group_ball_doubling():
    w = build_window(FreeGroupBall(2, 8))
    C = [i for i, x in enumerate(w.labels) if len(x) <= 5]
    oracle = [max_flow_oracle(w, C, R) for R in range(3)]
    r_star = next(R for R, f in enumerate(oracle) if f == 2 * len(C))
    R, res = minimal_doubling_radius(w, C, 4)
    assert R == r_star == 1
    assert res.certificate.verify(w)
    doc = res.certificate.to_json()
    assert DoublingCertificate.from_json(w, doc).verify(w)


def test_corrupted_doubling_detected():
    w = build_window(FreeGroupBall(2, 4))
    C = [i for i, x in enumerate(w.labels) if len(x) <= 2]
    cert = doubling_search(w, C, 1).certificate
    bad = DoublingCertificate(cert.carrier, cert.R, cert.t_plus, cert.t_plus, cert.x_plus, cert.x_minus)
    assert not bad.verify(w)


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_witnesses_are_sound(seed, R):
    rng = random.Random(seed)
    w = build_window(Grid((8, 8)))
    C = rng.sample(range(w.n), rng.randint(1, 30))
    res = doubling_search(w, C, R, ambient=False)
    assert res.flow_value == max_flow_oracle(w, C, R)
    if res.found:
        assert res.certificate.verify(w)
    else:
        assert res.witness.verify(w)
        assert res.witness.deficiency == 2 * len(C) - res.flow_value


def test_tarski_arms():
    z2 = build_window(Grid((84, 84)))
    out = windowed_tarski(z2, 1, Fraction(1, 10))
    assert out.fired == "folner" and out.folner.verify(z2)
    f2 = build_window(FreeGroupBall(2, 6))
    out = windowed_tarski(f2, 1, Fraction(1, 2), budget=2000)
    assert out.fired == "doubling" and out.doubling.certificate.verify(f2)
    assert out.folner_best.ratio >= 2
    one = build_window(Grid((1,)))
    out = windowed_tarski(one, 0, Fraction(1, 2))
    assert out.fired == "folner" and out.folner.points == (0,) and out.folner.ratio == 0


def two_part_exists(t):
    pairs = list(t.pairs)
    for colors in itertools.product(range(2), repeat=len(pairs)):
        ok = True
        for c in range(2):
            part = [p for p, k in zip(pairs, colors) if k == c]
            if {x for x, _ in part} & {y for _, y in part}:
                ok = False
        if ok:
            return True
    return False


def test_three_cycle():
    w = build_window(Grid((3,)))
    t = PartialTranslation(w, {0: 1, 1: 2, 2: 0})
    dec = three_color_decompose(t)
    assert dec.verify(t) and all(len(p) == 1 for p in dec.parts)
    assert not two_part_exists(t)


def test_path_shift_two_parts():
    w = build_window(Grid((30,)))
    t = PartialTranslation(w, {i: i + 1 for i in range(29)})
    dec = three_color_decompose(t)
    assert dec.verify(t) and len(dec.parts[2]) == 0
    assert two_part_exists(PartialTranslation(w, {i: i + 1 for i in range(6)}))


def test_coloring_edge_cases():
    w = build_window(Grid((4,)))
    assert all(len(p) == 0 for p in three_color_decompose(PartialTranslation(w, {})).parts)
    with pytest.raises(FixedPointPresent) as info:
        three_color_decompose(PartialTranslation(w, {0: 0, 1: 2}))
    assert info.value.fixed_points == [0]


@given(st.integers(0, 10_000))
def test_coloring_random(seed):
    rng = random.Random(seed)
    w = build_window(Grid((12, 12)))
    t = random_partial_translation(w, 2, rng, fixed_point_free=True)
    assert three_color_decompose(t).verify(t)


def test_mean_defect_trivial_cases():
    w = build_window(Grid((10,)))
    t = PartialTranslation.identity(w, range(5))
    assert mean_defect(w, range(3, 8), t, range(5)) == 0
    cyc = build_window(Grid((1,)))
    assert mean_defect(cyc, [0], PartialTranslation.identity(cyc, [0]), [0]) == 0


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_mean_defect_bound(seed, R):
    rng = random.Random(seed)
    w = build_window(Grid((12, 12)))
    F = rng.sample(range(w.n), rng.randint(1, 60))
    t = random_partial_translation(w, R, rng)
    A = [x for x in t.domain if rng.random() < 0.5]
    val = mean_defect(w, F, t, A)
    direct = abs(Fraction(sum(t(a) in set(F) for a in A) - sum(a in set(F) for a in A), len(F)))
    assert val == direct <= boundary_ratio(w, F, R)


def test_pairs_csv(tmp_path):
    w = build_window(Grid((5,)))
    t = PartialTranslation(w, {0: 1, 3: 2})
    t.to_csv(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().split() == ["x,t_x", "0,1", "3,2"]
    assert certify(w, [0, 1], 1).verify(w)
