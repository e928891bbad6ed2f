"""Shared random-object generators for the test suite."""

from __future__ import annotations

import numpy as np

import belldiag as bd


def ginibre_state(rng: np.random.Generator, rank: int = 4) -> bd.DensityMatrix:
    """Random two-qubit density matrix of the given rank."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return bd.DensityMatrix(m / np.trace(m).real, validate=False)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def random_psd(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g @ g.conj().T


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_spec(rng: np.random.Generator) -> bd.BdsSpec:
    """Uniform draw from the full probability simplex."""
    return bd.BdsSpec(*rng.dirichlet(np.ones(4)))


def random_product_spec(rng: np.random.Generator) -> bd.BdsSpec:
    """Spec whose probability table factorizes over the two Bell indices."""
    angles = bd.AnglePair(rng.uniform(0, np.pi), rng.uniform(0, np.pi))
    return bd.probs_from_angles(angles)
