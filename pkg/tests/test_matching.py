import numpy as np
import pytest

from coopsense.algorithms import CopyGraph, max_weight_matching
from coopsense.matching import max_weight_matching_matrix, min_cost_assignment
from oracles import matching_oracle


def total(w, edges):
    return sum(w[r, c] for r, c in edges)


def test_single_edge():
    assert max_weight_matching_matrix(np.array([[2.5]])) == [(0, 0)]


def test_diagonal_dominance():
    w = np.array([[3.0, 1.0], [1.0, 3.0]])
    edges = max_weight_matching_matrix(w)
    assert sorted(edges) == [(0, 0), (1, 1)]
    assert total(w, edges) == 6.0


def test_empty_and_degenerate_shapes():
    assert max_weight_matching_matrix(np.zeros((0, 3))) == []
    assert max_weight_matching_matrix(np.zeros((3, 0))) == []
    edges = max_weight_matching_matrix(np.zeros((2, 2)))
    assert len(edges) == 2


def test_rejects_negative_weights():
    with pytest.raises(ValueError):
        max_weight_matching_matrix(np.array([[1.0, -0.5]]))


def test_result_is_a_matching(rng):
    for _ in range(50):
        w = rng.random(tuple(rng.integers(1, 12, 2)))
        edges = max_weight_matching_matrix(w)
        rows = [r for r, _ in edges]
        cols = [c for _, c in edges]
        assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)
        assert len(edges) == min(w.shape)


@pytest.mark.parametrize("shape", [(1, 5), (5, 1), (3, 3), (4, 7), (8, 8), (8, 3)])
def test_against_enumeration(rng, shape):
    for _ in range(10):
        w = rng.random(shape) * 5
        assert total(w, max_weight_matching_matrix(w)) == pytest.approx(matching_oracle(w), rel=1e-12)


def test_integer_weights_exact(rng):
    for _ in range(50):
        w = rng.integers(0, 6, tuple(rng.integers(1, 8, 2))).astype(float)
        assert total(w, max_weight_matching_matrix(w)) == matching_oracle(w)


def test_min_cost_assignment_against_scipy(rng):
    scipy_opt = pytest.importorskip("scipy.optimize")
    for _ in range(50):
        n = int(rng.integers(1, 15))
        m = int(rng.integers(n, 20))
        c = rng.normal(size=(n, m))
        cols = min_cost_assignment(c)
        r, k = scipy_opt.linear_sum_assignment(c)
        assert c[np.arange(n), cols].sum() == pytest.approx(c[r, k].sum(), abs=1e-10)


def test_copy_graph_matching():
    graph = CopyGraph(((0, 0), (0, 1), (1, 0)), np.array([[3.0, 2.0], [3.0, 2.0], [2.5, 0.5]]))
    edges = max_weight_matching(graph)
    # both channels go to SU 0's copies: 3 + 2 beats 2.5 + 2
    assert {k for _, k in edges} == {0, 1}
    assert {copy[0] for copy, _ in edges} == {0}


def test_copy_graph_requires_identical_copy_weights():
    with pytest.raises(ValueError, match="SU 0"):
        CopyGraph(((0, 0), (0, 1)), np.array([[1.0, 2.0], [2.0, 1.0]]))
