import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from folnerlab.errors import EmptySet, WindowMismatch
from folnerlab.instances import random_diagonal, random_operator, random_partial_translation
from folnerlab.roe import (
    DiagonalFunction,
    FinitePropOperator,
    Projection,
    commutator,
    commutator_ratio,
    conditional_expectation,
    edge_identity_check,
    folner_bound,
    from_partial_translation,
    hs_norm,
    hs_norm_sq,
    op_norm_est,
    pt_norm_upper,
    read_operator_csv,
    trace,
    trace_factorization_check,
)
from folnerlab.scalars import cx
from folnerlab.space import FreeGroupBall, Grid, build_window
from folnerlab.translations import PartialTranslation, compose, invert

from oracles import dense_exact, dense_mul, label_metric, spectral_norm

WINDOWS = [Grid((16,)), Grid((5, 5)), FreeGroupBall(2, 2)]


def rand_op(seed, desc=Grid((5, 5)), R=2):
    rng = random.Random(seed)
    w = build_window(desc)
    return w, rng, random_operator(w, R, rng)


@given(st.integers(0, 10_000), st.sampled_from(WINDOWS))
def test_algebra_against_dense(seed, desc):
    rng = random.Random(seed)
    w = build_window(desc)
    A = random_operator(w, 2, rng)
    B = random_operator(w, 1, rng)
    dA, dB = dense_exact(A), dense_exact(B)
    assert dense_exact(A @ B) == dense_mul(dA, dB)
    assert dense_exact(A + B) == [[a + b for a, b in zip(r, s)] for r, s in zip(dA, dB)]
    assert (A @ B).adjoint() == B.adjoint() @ A.adjoint()
    assert A.adjoint().adjoint() == A
    assert (A - A).is_zero()


@given(st.integers(0, 10_000))
def test_propagation_subadditive(seed):
    w, rng, A = rand_op(seed)
    B = random_operator(w, 1, rng)
    d = label_metric(w)
    brute = max((d(x, y) for x, y, _ in A.entries()), default=0)
    assert A.propagation == brute <= 2
    assert (A @ B).propagation <= A.propagation + B.propagation
    assert (A + B).propagation <= max(A.propagation, B.propagation)


@given(st.integers(0, 10_000))
def test_translation_functor(seed):
    rng = random.Random(seed)
    w = build_window(Grid((6, 6)))
    t = random_partial_translation(w, 2, rng)
    s = random_partial_translation(w, 2, rng)
    Vt, Vs = from_partial_translation(t), from_partial_translation(s)
    assert from_partial_translation(compose(t, s)) == Vt @ Vs
    assert from_partial_translation(invert(t)) == Vt.adjoint()
    # V_t* V_t is the projection onto the domain
    assert Vt.adjoint() @ Vt == Projection(w, t.domain)
    assert Vt.propagation <= t.displacement


@given(st.integers(0, 10_000), st.sampled_from(WINDOWS))
def test_norm_brackets(seed, desc):
    rng = random.Random(seed)
    w = build_window(desc)
    A = random_operator(w, 2, rng)
    lo, up = op_norm_est(A)
    true = spectral_norm(A)
    assert lo <= true * (1 + 1e-9) + 1e-12
    assert true <= up * (1 + 1e-9) + 1e-12
    assert math.isclose(hs_norm(A), float(np.linalg.norm(A.to_dense())), rel_tol=1e-12, abs_tol=1e-12)


def test_norm_of_shift_and_zero():
    w = build_window(Grid((10,)))
    V = from_partial_translation(PartialTranslation(w, {i: i + 1 for i in range(9)}))
    lo, up = op_norm_est(V)
    assert lo <= 1 <= up and up - lo < 1e-6
    assert op_norm_est(FinitePropOperator.zero(w)) == (0.0, 0.0)
    assert hs_norm_sq(V) == 9


def test_shift_commutator_example():
    # [V, P_F] for the unit shift on an interval has one entry at each end
    w = build_window(Grid((30,), (-5,)))
    m = 10
    F = [w.index((i,)) for i in range(m)]
    V = from_partial_translation(PartialTranslation(w, {x: x + 1 for x in range(w.n - 1)}))
    C = commutator(V, F)
    assert sorted((w.labels[x][0], w.labels[y][0], v) for x, y, v in C.entries()) == [(0, -1, -1), (10, 9, 1)]
    assert commutator_ratio(V, F) == math.sqrt(2 / m)
    assert edge_identity_check(V, F, 1)
    assert commutator_ratio(V, F) <= folner_bound(V, F, 1)


@given(st.integers(0, 10_000), st.sampled_from(WINDOWS), st.integers(0, 2))
def test_edge_identity_random(seed, desc, extra):
    rng = random.Random(seed)
    w = build_window(desc)
    T = random_operator(w, rng.randint(0, 2), rng)
    F = [x for x in range(w.n) if rng.random() < 0.5] or [0]
    R = T.propagation + extra
    assert edge_identity_check(T, F, R)
    assert commutator_ratio(T, F) <= folner_bound(T, F, R) + 1e-9


def test_edge_identity_requires_radius():
    w = build_window(Grid((8,)))
    V = from_partial_translation(PartialTranslation(w, {0: 2}))
    with pytest.raises(ValueError):
        edge_identity_check(V, [0, 1], 1)
    with pytest.raises(EmptySet):
        commutator_ratio(V, [])


@given(st.integers(0, 10_000))
def test_conditional_expectation_and_trace(seed):
    w, rng, A = rand_op(seed)
    B = random_operator(w, 2, rng)
    f = random_diagonal(w, rng)
    E = conditional_expectation
    assert E(E(A)) == E(A)
    assert E(f @ A @ f) == f @ E(A) @ f
    assert E(A.adjoint()) == E(A).adjoint()
    assert trace(A @ B) == trace(B @ A)
    assert trace(A) == trace(E(A))
    assert trace_factorization_check(A)


@given(st.integers(0, 10_000))
def test_fixed_point_free_trace_zero(seed):
    rng = random.Random(seed)
    w = build_window(FreeGroupBall(2, 3))
    t = random_partial_translation(w, 2, rng, fixed_point_free=True)
    assert trace(from_partial_translation(t)) == 0


def test_pt_norm_upper():
    w = build_window(Grid((8,)))
    t = PartialTranslation(w, {i: i + 1 for i in range(7)})
    s = PartialTranslation.identity(w, range(8))
    f = DiagonalFunction(w, {i: Fraction(i, 4) for i in range(7)})
    value, T = pt_norm_upper([(t, f), (s, Fraction(-1, 2))])
    assert value == 6 / 4 + 1 / 2
    assert T == from_partial_translation(t) @ f + Projection(w, range(8)).scalar_mul(Fraction(-1, 2))
    assert spectral_norm(T) <= value + 1e-12


def test_operator_validation():
    w = build_window(Grid((3,)))
    with pytest.raises(ValueError):
        FinitePropOperator(w, {(0, 5): 1})
    with pytest.raises(WindowMismatch):
        FinitePropOperator.identity(w) + FinitePropOperator.identity(build_window(Grid((4,))))
    assert FinitePropOperator(w, {(0, 1): 0}).is_zero()
    assert Projection(w, [0, 1]).join(Projection(w, [2])) == FinitePropOperator.identity(w)


def test_csv_round_trip(tmp_path):
    w = build_window(Grid((4, 4)))
    T = FinitePropOperator(w, {(0, 1): Fraction(3, 7), (5, 5): cx(1, -2), (6, 2): Fraction(-1)})
    path = tmp_path / "T.csv"
    T.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# {") and lines[1] == "x,y,re,im"
    assert read_operator_csv(w, path) == T
    with pytest.raises(WindowMismatch):
        read_operator_csv(build_window(Grid((4, 5))), path)
