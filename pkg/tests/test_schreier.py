"""Tuple-action Schreier graphs and the power-iteration gap estimator.
Oracle: dense eigensolve of the same normalized adjacency."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permword import (
    Permutation,
    TupleGraph,
    conditioned_walk,
    estimate_gap,
    evaluate,
    random_uniform,
)
from permword.schreier import _conditioned_walk_counted

from conftest import seeded_pair


def small_graph(n=6, ell=2, seed=11):
    g, h, _ = seeded_pair(n, seed)
    return TupleGraph(g, h, ell), g, h


def test_vertex_count_and_rank_roundtrip():
    graph, _, _ = small_graph(6, 2)
    assert graph.num_vertices == 30
    for idx in range(graph.num_vertices):
        assert graph.rank_of(graph.tuple_at(idx)) == idx


@settings(max_examples=50)
@given(st.integers(0, 6 * 5 * 4 - 1))
def test_rank_unrank_fuzz_ell3(idx):
    graph, _, _ = small_graph(6, 3)
    assert graph.rank_of(graph.tuple_at(idx)) == idx


def test_rank_of_rejects_bad_tuples():
    graph, _, _ = small_graph(6, 2)
    with pytest.raises(ValueError):
        graph.rank_of((1, 1))
    with pytest.raises(ValueError):
        graph.rank_of((0, 2))
    with pytest.raises(ValueError):
        graph.rank_of((1, 2, 3))


def test_neighbors_follow_generator_action():
    graph, g, h = small_graph(5, 2, seed=4)
    for idx in (0, 7, graph.num_vertices - 1):
        tup = graph.tuple_at(idx)
        for row, s in enumerate((g, g.inverse(), h, h.inverse())):
            moved = tuple(s.apply(x) for x in tup)
            assert graph.neighbors[row, idx] == graph.rank_of(moved)


def test_adjacency_dense_vs_implicit():
    graph, _, _ = small_graph(6, 3, seed=2)
    A = graph.dense_adjacency()
    assert np.allclose(A.sum(axis=1), 1.0)
    assert np.allclose(A, A.T)
    rng = np.random.default_rng(0)
    f = rng.standard_normal(graph.num_vertices)
    assert np.allclose(graph.apply_adjacency(f), A @ f, atol=1e-12)


def test_tuple_graph_rejects_oversize_and_bad_ell():
    g, h, _ = seeded_pair(40, 0)
    with pytest.raises(ValueError):
        TupleGraph(g, h, 5)
    with pytest.raises(ValueError):
        TupleGraph(g, h, 0)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_estimate_gap_matches_dense_eigensolve(ell):
    # the estimator powers the lazy operator (I+A)/2 but reports the second
    # eigenvalue of A itself, so the dense oracle reads off eigvalsh(A)
    graph, _, _ = small_graph(6, ell, seed=9)
    A = graph.dense_adjacency()
    eigs = np.sort(np.linalg.eigvalsh(A))[::-1]
    est = estimate_gap(graph, rng=np.random.default_rng(1))
    assert abs(est.lambda1 - eigs[1]) < 1e-6
    assert abs(est.gap - (1 - eigs[1])) < 1e-6


def test_estimate_fields_consistent():
    graph, _, _ = small_graph(6, 2, seed=9)
    est = estimate_gap(graph, rng=np.random.default_rng(3))
    assert 0.0 <= est.lambda1 <= 1.0
    assert est.residual_trace
    assert est.residual == est.residual_trace[-1]
    assert est.iterations >= len(est.residual_trace)
    if est.converged:
        assert est.residual <= 1e-8


def test_estimate_gap_seed_stable():
    graph, _, _ = small_graph(7, 2, seed=5)
    a = estimate_gap(graph, rng=np.random.default_rng(2))
    b = estimate_gap(graph, rng=np.random.default_rng(2))
    assert a == b


def test_conditioned_walk_meets_constraints(rng):
    g, h, _ = seeded_pair(12, 3)
    constraints = [(1, 5), (2, 9)]
    sigma, word = conditioned_walk(g, h, 60, constraints, rng)
    assert evaluate(word, g, h) == sigma
    for a, b in constraints:
        assert sigma.apply(a) == b


def test_conditioned_walk_trial_counts_scale_like_point_probability():
    # one constraint thins acceptance to roughly 1/n, two to roughly 1/n^2
    g, h, _ = seeded_pair(10, 1)
    rng = np.random.default_rng(42)
    tries_one = []
    tries_two = []
    for _ in range(40):
        _, _, t1 = _conditioned_walk_counted(g, h, 50, [(1, 2)], rng, None)
        tries_one.append(t1)
        _, _, t2 = _conditioned_walk_counted(g, h, 50, [(1, 2), (3, 4)], rng, None)
        tries_two.append(t2)
    assert 2 < np.mean(tries_one) < 40
    assert np.mean(tries_two) > 1.5 * np.mean(tries_one)


def test_conditioned_walk_exhausts_on_impossible_constraint():
    from permword import RetryExhaustedError

    g = Permutation.from_cycles(6, [(1, 2, 3)])
    h = Permutation.from_cycles(6, [(2, 3, 4)])
    # the pair fixes points 5 and 6, so 5 -> 1 is unreachable
    with pytest.raises(RetryExhaustedError):
        conditioned_walk(g, h, 20, [(5, 1)], np.random.default_rng(0), max_tries=200)


def test_conditioned_walk_validates_constraints():
    g, h, rng = seeded_pair(8, 0)
    with pytest.raises(ValueError):
        conditioned_walk(g, h, 10, [(1, 2), (1, 3)], rng)
    with pytest.raises(ValueError):
        conditioned_walk(g, h, 10, [(1, 2), (3, 2)], rng)
    with pytest.raises(ValueError):
        conditioned_walk(g, h, 10, [(0, 2)], rng)
