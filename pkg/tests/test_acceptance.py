"""Acceptance gate.

One test (or a small group) per numbered criterion, tagged with the
``criterion`` marker; the terminal summary prints a PASS/FAIL line per
criterion and the suite wall time.
"""
import itertools
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from folnerlab.cli import EXIT_OK, main
from folnerlab.diagnostics import (
    SubspaceBasis,
    alg_amen_ratio,
    corner_subspace,
    reverse_defect_check,
    subspace_projection_defect,
    sum_dimension,
    ucp_defect,
)
from folnerlab.errors import DependentBasis
from folnerlab.exact import bareiss_rank
from folnerlab.folner import FolnerCertificate, boundary_ratio, certify, explore, search_folner
from folnerlab.instances import random_operator, random_partial_translation
from folnerlab.leavitt import (
    binary_model,
    embed_L1n_in_L12,
    leavitt_relation_check,
    nary_window,
    properly_infinite_witness,
    realize_words,
)
from folnerlab.roe import (
    commutator_ratio,
    edge_identity_check,
    folner_bound,
    from_partial_translation,
    opnorm_upper,
    trace,
    trace_factorization_check,
)
from folnerlab.space import (
    BoundaryKind,
    BoxSpace,
    CyclicQuotient,
    FreeGroupBall,
    Grid,
    boundary,
    build_window,
    enumerate_reduced_words,
    reduce_word,
)
from folnerlab.translations import PartialTranslation, doubling_search, mean_defect, minimal_doubling_radius, three_color_decompose

from oracles import interval_boundary

ROOT = Path(__file__).resolve().parents[1]


def report(n, msg):
    print(f"[criterion {n}] {msg}")


# ---- 1 -------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_c01_boundary_exactness():
    w = build_window(Grid((220,), (-10,)))
    t0 = time.perf_counter()
    counts = {}
    for R in (1, 2, 4):
        for m in range(1, 201):
            F = range(w.index((0,)), w.index((m,)))
            counts[R, m] = (len(boundary(w, F, R, ambient=True)), boundary_ratio(w, F, R, ambient=True))
    elapsed = time.perf_counter() - t0
    for (R, m), (count, ratio) in counts.items():
        assert count == interval_boundary(m, R), (R, m)
        if m > 2 * R:
            assert ratio == Fraction(4 * R, m)
    report(1, f"600 intervals exact in {elapsed:.3f}s")
    assert elapsed < 1.0


# ---- 2 -------------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_c02_folner_on_z2():
    t0 = time.perf_counter()
    w = build_window(Grid((84, 84)))
    cert = search_folner(w, 1, Fraction(1, 10))
    elapsed = time.perf_counter() - t0
    assert cert is not None and cert.ratio <= Fraction(1, 10) and cert.size <= 10_000
    again = FolnerCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert again == cert and again.verify(w)
    report(2, f"|F|={cert.size} ratio={cert.ratio} in {elapsed:.3f}s")
    assert elapsed < 5.0


# ---- 3 -------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_c03_box_space_components():
    w = build_window(BoxSpace(tuple(CyclicQuotient(n) for n in (3, 4, 5, 6, 7, 8))))
    for comp in w.components():
        for R in range(11):
            assert boundary(w, comp, R) == frozenset()
            assert boundary_ratio(w, comp, R) == 0
    report(3, f"{w.n_components} components, R=0..10 empty")


# ---- 4 -------------------------------------------------------------------------


@pytest.mark.criterion(4)
@pytest.mark.parametrize("R", [1, 2, 3, 4])
def test_c04a_interval_has_no_doubling(R):
    w = build_window(Grid((80,), (-20,)))
    for m in range(2 * R + 1, 41):
        C = [w.index((i,)) for i in range(m)]
        res = doubling_search(w, C, R)
        assert not res.found
        wit = res.witness
        assert wit.S == frozenset(C) and wit.neighborhood_size == m + 2 * R < 2 * m
        assert wit.verify(w)


def _word_flow(w, C, R):
    """Max-flow value of the doubling network built from word arithmetic."""
    G = nx.DiGraph()
    short = enumerate_reduced_words(2, R)
    for x in C:
        G.add_edge("s", ("c", x), capacity=2)
        for u in short:
            y = w.index(reduce_word(w.labels[x] + u))
            G.add_edge(("c", x), ("t", y), capacity=1)
            G.add_edge(("t", y), "z", capacity=1)
    return nx.maximum_flow_value(G, "s", "z")


@pytest.fixture(scope="module")
def f2_doubling():
    t0 = time.perf_counter()
    w = build_window(FreeGroupBall(2, 9))
    C = [i for i, x in enumerate(w.labels) if len(x) <= 5]
    R, res = minimal_doubling_radius(w, C, 4)
    return w, C, R, res, time.perf_counter() - t0


@pytest.mark.criterion(4)
def test_c04b_free_group_doubling(f2_doubling):
    w, C, R, res, elapsed = f2_doubling
    r_star = next(r for r in range(5) if _word_flow(w, C, r) == 2 * len(C))
    assert R == r_star <= 4
    cert = res.certificate
    assert cert.check(w) == [] and cert.verify(w)
    assert len(cert.t_plus.range & cert.t_minus.range) == 0
    near = {w.index(reduce_word(w.labels[x] + u)) for x in C for u in enumerate_reduced_words(2, R)}
    assert cert.x_plus | cert.x_minus == near and not cert.x_plus & cert.x_minus
    report(4, f"F2 B_5 (|C|={len(C)}): R*={R} (oracle {r_star}) in {elapsed:.3f}s")
    assert elapsed < 30.0


# ---- 5, 6 ----------------------------------------------------------------------

FAMILIES = {"Z": Grid((40,)), "Z2": Grid((7, 7)), "F2": FreeGroupBall(2, 3)}


def _bench(family):
    w = build_window(FAMILIES[family])
    rng = random.Random(f"bench:{family}")
    out = []
    for _ in range(100):
        T = random_operator(w, rng.randint(0, 3), rng, terms=rng.randint(1, 4))
        F = [x for x in range(w.n) if rng.random() < rng.uniform(0.2, 0.8)] or [rng.randrange(w.n)]
        R = T.propagation + rng.randint(0, 2)
        out.append((w, T, F, R))
    return out


@pytest.fixture(scope="module")
def bench():
    return {f: _bench(f) for f in FAMILIES}


@pytest.mark.criterion(5)
@pytest.mark.parametrize("family", list(FAMILIES))
def test_c05_edge_identity(bench, family):
    assert all(edge_identity_check(T, F, R) for _, T, F, R in bench[family])
    report(5, f"{family}: 100/100 exact")


@pytest.mark.criterion(6)
@pytest.mark.parametrize("family", list(FAMILIES))
def test_c06_hs_folner_bound(bench, family):
    worst = -float("inf")
    for w, T, F, R in bench[family]:
        lhs = commutator_ratio(T, F)
        rhs = 2 * opnorm_upper(T) * float(boundary_ratio(w, F, R)) ** 0.5
        assert rhs == pytest.approx(folner_bound(T, F, R), rel=1e-12)
        assert lhs <= rhs + 1e-9
        worst = max(worst, lhs - rhs)
    report(6, f"{family}: max(lhs - rhs) = {worst:.3g}")


# ---- 7 -------------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_c07_ucp_defect_chains():
    rng = random.Random("ucp")
    windows = [build_window(d) for d in FAMILIES.values()]
    for _ in range(100):
        w = rng.choice(windows)
        A = random_operator(w, rng.randint(0, 2), rng, terms=rng.randint(1, 3))
        B = random_operator(w, rng.randint(0, 2), rng, terms=rng.randint(1, 3))
        P = [x for x in range(w.n) if rng.random() < 0.5] or [0]
        assert ucp_defect(P, A, B).holds
        assert reverse_defect_check(P, A).holds
    report(7, "100 instances, both directions")


# ---- 8 -------------------------------------------------------------------------


@pytest.mark.criterion(8)
def test_c08_trace_facts():
    rng = random.Random("trace")
    windows = [build_window(d) for d in FAMILIES.values()]
    for _ in range(100):
        w = rng.choice(windows)
        t = random_partial_translation(w, rng.randint(1, 3), rng, fixed_point_free=True)
        assert trace(from_partial_translation(t)) == 0
        assert trace_factorization_check(random_operator(w, 2, rng))
    report(8, "traces: 100 + 100 exact")


@pytest.mark.criterion(8)
def test_c08_three_coloring():
    rng = random.Random("color")
    w = build_window(Grid((100, 100)))
    for n_pairs in (10, 100, 1000, 10_000):
        # a random fixed-point-free bijection on a random subset, cycles included
        dom = rng.sample(range(w.n), n_pairs)
        img = dom[:]
        while True:
            rng.shuffle(img)
            if all(a != b for a, b in zip(dom, img)):
                break
        t = PartialTranslation(w, dict(zip(dom, img)))
        dec = three_color_decompose(t)
        assert dec.verify(t) and sum(len(p) for p in dec.parts) == n_pairs
    three = PartialTranslation(build_window(Grid((3,))), {0: 1, 1: 2, 2: 0})
    assert three_color_decompose(three).verify(three)
    pairs = list(three.pairs)
    for colors in itertools.product((0, 1), repeat=3):
        parts = [[p for p, c in zip(pairs, colors) if c == k] for k in (0, 1)]
        assert any({x for x, _ in part} & {y for _, y in part} for part in parts)
    report(8, "coloring up to 10^4 pairs; 3-cycle has no 2-part split (8 splits checked)")


# ---- 9 -------------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_c09_leavitt(f2_doubling):
    for m in range(13):
        assert leavitt_relation_check(binary_model(), 2, nary_window(2, m)).passed
    for n in (2, 3, 5):
        gens = realize_words(embed_L1n_in_L12(n), binary_model())
        assert leavitt_relation_check(gens, n, nary_window(2, 12)).passed
    w, _, _, res, _ = f2_doubling
    _, _, rep = properly_infinite_witness(res.certificate, w)
    assert rep.passed
    report(9, "binary m<=12, L(1,n) n=2,3,5, F2 witness exact")


# ---- 10 ------------------------------------------------------------------------

SMALL = [Grid((40,)), Grid((6, 6)), FreeGroupBall(2, 2), BoxSpace((CyclicQuotient(5), CyclicQuotient(7)))]


@pytest.mark.criterion(10)
def test_c10_algebraic_amenability():
    rng = random.Random("alg")
    count = 0
    for desc in SMALL:
        w = build_window(desc)
        assert w.n <= 40
        for k in range(10):
            R = rng.randint(1, 2)
            res = explore(w, R, None, ambient=False, max_size=rng.randint(2, 10))
            F = res.best.points if k % 2 == 0 else certify(w, rng.sample(range(w.n), rng.randint(1, 8)), R).points
            a = random_operator(w, R, rng, terms=3)
            W = corner_subspace(w, F)
            outer = boundary(w, F, R, BoundaryKind.OUTER)
            assert alg_amen_ratio(a, W) <= 1 + Fraction(len(outer), len(F))
            vecs = [op.vectorize() for op in W.ops] + [(a @ op).vectorize() for op in W.ops]
            keys = sorted({key for v in vecs for key in v})
            dense = [[v.get(key, 0) for key in keys] for v in vecs]
            rank = sum_dimension(a, W)
            assert rank == bareiss_rank(dense)
            assert rank == np.linalg.matrix_rank(np.array([[complex(x) for x in row] for row in dense]))
            count += 1
    report(10, f"{count} corner instances exact")


# ---- 11 ------------------------------------------------------------------------


@pytest.mark.criterion(11)
def test_c11_subspace_projection_defect():
    rng = random.Random("subspace")
    windows = [build_window(d) for d in (Grid((30,)), Grid((5, 5)), FreeGroupBall(2, 2))]
    done = 0
    worst = -float("inf")
    while done < 50:
        w = rng.choice(windows)
        B = random_operator(w, rng.randint(0, 2), rng)
        if done % 2:
            W = corner_subspace(w, rng.sample(range(w.n), rng.randint(1, 4)))
        else:
            ops = [random_operator(w, 1, rng, terms=1) for _ in range(rng.randint(1, 4))]
            try:
                W = SubspaceBasis([op for op in ops if not op.is_zero()])
            except (DependentBasis, ValueError):
                continue
        rep = subspace_projection_defect(W, B)
        assert rep.holds, rep
        worst = max(worst, rep.value - rep.bound)
        done += 1
    report(11, f"50 instances, max(value - bound) = {worst:.3g}")


# ---- 12 ------------------------------------------------------------------------


@pytest.mark.criterion(12)
def test_c12_mean_defect():
    rng = random.Random("mean")
    windows = [build_window(d) for d in FAMILIES.values()]
    for _ in range(100):
        w = rng.choice(windows)
        R = rng.randint(1, 3)
        cert = certify(w, rng.sample(range(w.n), rng.randint(1, w.n // 2)), R)
        t = random_partial_translation(w, R, rng)
        A = [x for x in sorted(t.domain) if rng.random() < 0.6]
        F = set(cert.points)
        direct = abs(Fraction(sum(t(a) in F for a in A) - sum(a in F for a in A), len(F)))
        assert mean_defect(w, cert.points, t, A) == direct <= cert.ratio
    report(12, "100 triples exact")


# ---- 13 ------------------------------------------------------------------------


@pytest.mark.criterion(13)
@pytest.mark.parametrize("scenario", sorted((ROOT / "scenarios").glob("*.json")), ids=lambda p: p.stem)
def test_c13_cli_determinism(tmp_path, scenario):
    docs = []
    for name in ("a", "b"):
        assert main(["run", str(scenario), "--out", str(tmp_path / name)]) == EXIT_OK
        assert main(["verify", str(tmp_path / name / "report.json")]) == EXIT_OK
        doc = json.loads((tmp_path / name / "report.json").read_text())
        doc.pop("timing")
        docs.append(doc)
    assert docs[0] == docs[1]
