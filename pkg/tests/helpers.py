"""Seeded random matrix constructors shared by the test modules."""

from __future__ import annotations

import numpy as np


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unitary(gen: np.random.Generator, n: int) -> np.ndarray:
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(gen: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    return scale * 0.5 * (z + z.conj().T)


def random_pd(gen: np.random.Generator, n: int, spread: float = 10.0) -> np.ndarray:
    """Hermitian positive definite with eigenvalues in [1/spread, spread]."""
    u = random_unitary(gen, n)
    w = np.exp(gen.uniform(-np.log(spread), np.log(spread), n))
    return (u * w) @ u.conj().T


def well_conditioned(gen: np.random.Generator, n: int, spread: float = 4.0) -> np.ndarray:
    """Invertible matrix with singular values in [1/spread, spread]."""
    u1 = random_unitary(gen, n)
    u2 = random_unitary(gen, n)
    s = np.exp(gen.uniform(-np.log(spread), np.log(spread), n))
    return (u1 * s) @ u2.conj().T


def diagonalizable_real_spectrum(
    gen: np.random.Generator, n: int, lo: float = -3.0, hi: float = 3.0
) -> tuple[np.ndarray, np.ndarray]:
    """A = V diag(lam) V^-1 with real well-separated lam; returns (A, lam)."""
    lam = np.sort(gen.uniform(lo, hi, n))
    while n > 1 and np.min(np.diff(lam)) < 1e-3:
        lam = np.sort(gen.uniform(lo, hi, n))
    v = well_conditioned(gen, n)
    return v @ np.diag(lam) @ np.linalg.inv(v), lam


def manufactured_quasi_hermitian(
    gen: np.random.Generator, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """(A, G) with A = G^-1/2 H G^1/2 for Hermitian H, so G A = A* G."""
    g = random_pd(gen, n, spread=6.0)
    w, u = np.linalg.eigh(g)
    g_half = (u * np.sqrt(w)) @ u.conj().T
    g_invhalf = (u / np.sqrt(w)) @ u.conj().T
    h = random_hermitian(gen, n)
    return g_invhalf @ h @ g_half, g


def jordan_case(gen: np.random.Generator, n: int) -> np.ndarray:
    """Exactly triangular matrix with a genuine Jordan block.

    Triangular structure keeps LAPACK's eigenvalues exact, so the
    defectiveness verdict is robust.
    """
    block = int(gen.integers(2, min(4, n) + 1))
    lam = float(gen.integers(-3, 4))
    a = np.diag(np.arange(n, dtype=np.complex128) * 2.0 + 5.0)
    a[:block, :block] = lam * np.eye(block) + np.diag(np.ones(block - 1), 1)
    return a
