import numpy as np
import pytest

from qherm import (
    DimensionMismatch,
    NotHermitian,
    NotPositiveDefinite,
    Operator,
    adjoint,
    cluster_eigenvalues,
    eig_general,
    eig_hermitian,
    sqrt_pd,
)
from helpers import random_hermitian, random_pd, rng

SQRT5 = np.sqrt(5.0)


def test_operator_invariants():
    with pytest.raises(DimensionMismatch):
        Operator(np.ones((2, 3)))
    with pytest.raises(ValueError):
        Operator([[np.nan, 0], [0, 1]])
    op = Operator([[1, 2], [3, 4]], "demo")
    assert op.dim == 2
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 5.0  # frozen storage


def test_adjoint_examples():
    assert np.array_equal(
        adjoint(Operator([[0, 1], [0, 0]])).matrix, np.array([[0, 0], [1, 0]])
    )
    assert np.array_equal(
        adjoint(Operator([[1j, 0], [0, 1j]])).matrix, np.diag([-1j, -1j])
    )
    herm = Operator([[2, 1j], [-1j, 3]])
    assert np.array_equal(adjoint(herm).matrix, herm.matrix)
    a = Operator([[1 + 2j, 3], [4j, 5]])
    assert np.array_equal(adjoint(adjoint(a)).matrix, a.matrix)


def test_eig_hermitian_examples():
    es = eig_hermitian(Operator(np.diag([2.0, 1.0])))
    assert np.allclose(es.eigenvalues, [1.0, 2.0], atol=0)
    assert np.allclose(np.abs(es.right_vectors), [[0, 1], [1, 0]], atol=0)

    es = eig_hermitian(Operator([[0, 1], [1, 0]]))
    assert np.allclose(es.eigenvalues, [-1.0, 1.0], atol=1e-14)

    # trace 3, det 1 -> (3 -+ sqrt 5)/2
    es = eig_hermitian(Operator([[1, -1], [-1, 2]]))
    expected = [(3 - SQRT5) / 2, (3 + SQRT5) / 2]
    assert np.allclose(es.eigenvalues, expected, atol=1e-14)
    assert abs(es.vector_condition - 1.0) <= 1e-12
    assert not es.defective


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(Operator([[0, 1], [0, 0]]))


def test_eig_general_examples():
    es = eig_general(Operator([[1, 1], [0, 2]]))
    assert np.allclose(es.eigenvalues, [1.0, 2.0], atol=0)
    assert not es.defective

    es = eig_general(Operator([[1, 1], [0, 1]]))
    assert np.allclose(es.eigenvalues, [1.0, 1.0], atol=0)
    assert es.defective

    es = eig_general(Operator([[0, 1], [-1, 0]]))
    by_imag = sorted(es.eigenvalues, key=lambda z: z.imag)
    assert np.allclose(by_imag, [-1j, 1j], atol=1e-14)
    assert not es.defective


def test_eig_general_unit_columns_and_residual():
    gen = rng(11)
    a = gen.standard_normal((8, 8)) + 1j * gen.standard_normal((8, 8))
    es = eig_general(Operator(a))
    assert np.allclose(np.linalg.norm(es.right_vectors, axis=0), 1.0, atol=1e-13)
    resid = a @ es.right_vectors - es.right_vectors * es.eigenvalues
    assert np.abs(resid).max() <= 1e-12 * np.linalg.norm(a)


def test_sqrt_pd_examples():
    half, invhalf = sqrt_pd(Operator(np.diag([4.0, 0.25])))
    assert np.allclose(half.matrix, np.diag([2.0, 0.5]), atol=1e-15)
    assert np.allclose(invhalf.matrix, np.diag([0.5, 2.0]), atol=1e-15)

    half, invhalf = sqrt_pd(Operator.identity(3))
    assert np.allclose(half.matrix, np.eye(3), atol=0)
    assert np.allclose(invhalf.matrix, np.eye(3), atol=0)

    # Cayley-Hamilton oracle: G^2 = 3G - I, hence G^1/2 = (I + G)/sqrt(5)
    g = np.array([[1.0, -1.0], [-1.0, 2.0]])
    half, invhalf = sqrt_pd(Operator(g))
    assert np.abs(half.matrix - (np.eye(2) + g) / SQRT5).max() <= 1e-14
    assert np.linalg.norm(half.matrix @ half.matrix - g, "fro") <= 1e-12
    assert np.abs(half.matrix @ invhalf.matrix - np.eye(2)).max() <= 1e-14


def test_sqrt_pd_errors():
    with pytest.raises(NotHermitian):
        sqrt_pd(Operator([[0, 1], [0, 0]]))
    with pytest.raises(NotPositiveDefinite) as info:
        sqrt_pd(Operator([[1, 1], [1, 1]]))
    assert abs(info.value.min_eigenvalue) <= 1e-12


def test_cluster_eigenvalues():
    values = np.array([1.0, 1.0 + 1e-12, 2.0, 2.0, 5.0])
    clusters = cluster_eigenvalues(values, 1e-10)
    assert [(c.start, c.size) for c in clusters] == [(0, 2), (2, 2), (4, 1)]
    assert cluster_eigenvalues(np.array([]), 1e-10) == ()


def test_random_hermitian_invariants():
    gen = rng(5)
    for _ in range(10):
        n = int(gen.integers(2, 65))
        h = random_hermitian(gen, n)
        es = eig_hermitian(Operator(h))
        v = es.right_vectors
        assert np.linalg.norm(v.conj().T @ v - np.eye(n), "fro") <= 1e-10
        recon = h @ v - v * es.eigenvalues
        assert np.linalg.norm(recon, "fro") <= 1e-10 * np.linalg.norm(h, "fro")


def test_random_pd_sqrt_invariants():
    gen = rng(6)
    for _ in range(10):
        n = int(gen.integers(2, 65))
        g = random_pd(gen, n)
        half, invhalf = sqrt_pd(Operator(g))
        gf = np.linalg.norm(g, "fro")
        assert np.linalg.norm(half.matrix @ half.matrix - g, "fro") <= 1e-10 * gf
        comm = half.matrix @ g - g @ half.matrix
        assert (
            np.linalg.norm(comm, "fro")
            <= 1e-10 * np.linalg.norm(half.matrix, "fro") * gf
        )
        assert np.linalg.norm(half.matrix @ invhalf.matrix - np.eye(n), "fro") <= 1e-10


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    d1 = max(np.min(np.abs(b[None, :] - a[:, None]), axis=1))
    d2 = max(np.min(np.abs(a[None, :] - b[:, None]), axis=1))
    return max(d1, d2)


def test_adjoint_spectrum_conjugation():
    gen = rng(7)
    for _ in range(10):
        n = int(gen.integers(2, 40))
        a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        w = eig_general(Operator(a)).eigenvalues
        w_adj = eig_general(adjoint(Operator(a))).eigenvalues
        assert _hausdorff(w, np.conj(w_adj)) <= 1e-8


def test_tolerance_override():
    # a slightly non-Hermitian matrix passes only with a loosened tolerance
    almost = Operator([[1.0, 1e-6], [0.0, 2.0]])
    with pytest.raises(NotHermitian):
        eig_hermitian(almost)
    es = eig_hermitian(almost, tol=1e-3)
    assert np.allclose(es.eigenvalues, [1.0, 2.0], atol=1e-5)
