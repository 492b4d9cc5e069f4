"""Matrix generators and assertions shared by the tests."""

import math

import numpy as np

from effham.linalg import HermitianMatrix


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0, real: bool = False) -> HermitianMatrix:
    """Random Hermitian matrix with entries of order ``scale``."""
    a = rng.normal(size=(dim, dim))
    if not real:
        a = a + 1j * rng.normal(size=(dim, dim))
    return HermitianMatrix(scale * (a + a.conj().T) / 2)


def perturbed_diagonal(rng: np.random.Generator, dim: int, coupling: float, gap: float = 1.0) -> HermitianMatrix:
    """D + coupling * V with well separated diagonal D and a fixed-size random off-diagonal V."""
    d = np.diag(gap * np.arange(dim) + 0.1 * rng.uniform(size=dim))
    v = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    v = (v + v.conj().T) / 2
    np.fill_diagonal(v, 0.0)
    return HermitianMatrix(d + coupling * v)


def hermitian_with_spectrum(rng: np.random.Generator, values) -> HermitianMatrix:
    """Q diag(values) Q^H for a random unitary Q."""
    n = len(values)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return HermitianMatrix(q @ np.diag(values) @ q.conj().T)


def coupled_pair(d: np.ndarray, v: np.ndarray, coupling: float) -> HermitianMatrix:
    return HermitianMatrix(d + coupling * v)


def assert_close(actual, expected, atol=1e-12, rtol=0.0):
    assert math.isclose(actual, expected, rel_tol=rtol, abs_tol=atol), f"{actual!r} != {expected!r}"


def max_abs(a) -> float:
    return float(np.max(np.abs(np.asarray(a))))
