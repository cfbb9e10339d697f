import math

import numpy as np
import pytest

from ctxgraph.graph import Graph
from ctxgraph.numerics import NumericsError, _jacobi, cholesky, eigen_sym, is_psd, min_eigenvalue, solve_spd, sym_matrix
from ctxgraph.scenario import f9_vectors


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


def random_symmetric(rng, d):
    m = rng.normal(size=(d, d))
    return 0.5 * (m + m.T)


def test_eigen_examples():
    vals, _ = eigen_sym(np.eye(3))
    assert np.allclose(vals, [1, 1, 1])
    vals, vecs = eigen_sym(np.diag([2.0, -1.0]))
    assert np.allclose(vals, [2, -1])
    assert np.allclose(np.abs(vecs), np.eye(2))


def test_eigen_cycle_closed_form():
    vals, _ = eigen_sym(adjacency(Graph.cycle(5)))
    expected = sorted((2 * math.cos(2 * math.pi * k / 5) for k in range(5)), reverse=True)
    assert vals[0] == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(vals, expected, atol=1e-12)


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_eigen_trace_and_determinant(rng, method):
    for _ in range(200):
        d = int(rng.integers(2, 13))
        m = random_symmetric(rng, d)
        vals, vecs = eigen_sym(m, method)
        assert np.all(np.diff(vals) <= 0)
        assert vals.sum() == pytest.approx(np.trace(m), rel=1e-8, abs=1e-10)
        assert np.prod(vals) == pytest.approx(np.linalg.det(m), rel=1e-8, abs=1e-10)
        assert np.allclose(vecs @ np.diag(vals) @ vecs.T, m, atol=1e-10)


def test_jacobi_preserves_frobenius_norm(rng):
    for _ in range(100):
        m = random_symmetric(rng, int(rng.integers(2, 13)))
        vals, _ = _jacobi(m)
        assert np.sqrt(np.sum(vals ** 2)) == pytest.approx(np.linalg.norm(m), rel=1e-12)


def test_psd_examples():
    assert is_psd(np.eye(4))
    assert not is_psd(np.diag([1.0, -1e-3]), tol=1e-6)
    gram = np.array([[float(np.dot(a.real, b.real)) for b in f9_vectors()] for a in f9_vectors()])
    assert is_psd(gram, tol=1e-12)
    assert min_eigenvalue(np.diag([3.0, -2.0])) == pytest.approx(-2.0)


def test_solve_examples():
    assert np.allclose(solve_spd(np.eye(2), [1, 2]), [1, 2])
    assert np.allclose(solve_spd(np.diag([2.0, 4.0]), [2, 4]), [1, 1])


def test_solve_multiply_back(rng):
    for _ in range(100):
        a = rng.normal(size=(8, 8))
        m = a @ a.T + 0.5 * np.eye(8)
        rhs = rng.normal(size=8)
        x = solve_spd(m, rhs)
        assert np.linalg.norm(m @ x - rhs) <= 1e-10 * np.linalg.norm(m) * max(1.0, np.linalg.norm(x))


def test_cholesky_rejects_indefinite():
    with pytest.raises(NumericsError):
        cholesky(np.diag([1.0, -1.0]))
    with pytest.raises(NumericsError):
        cholesky(np.diag([1.0, 1e-14]))


def test_sym_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        sym_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        sym_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))
    # non-symmetric input is averaged with its transpose
    assert np.array_equal(sym_matrix([[1.0, 2.0], [0.0, 1.0]]), [[1.0, 1.0], [1.0, 1.0]])
