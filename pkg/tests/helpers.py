"""Shared instance builders for the test suite.

Random feasible pairs are built constructively rather than by rejection:
draw a PSD unit-diagonal coefficient matrix ``M = C C^dag`` (rows of C
normalized), draw a random independent final set, and define the initial
Gram as the entrywise product ``G1 = M * G2``.  The Schur product of a PSD
matrix with positive diagonal and a positive-definite matrix is positive
definite, so factoring G1 yields an independent spanning initial set whose
overlap-ratio matrix equals M up to roundoff.
"""

from __future__ import annotations

import numpy as np

from detchan import (
    StateSet,
    gram,
    hermitian_eig,
    psd_factor,
    random_state_set,
)

# Gram matrices with smallest eigenvalue below this are re-drawn: dual
# vectors scale with the inverse Gram, and the 1e-9 residual targets are
# unreachable for near-singular sets (the library itself refuses them
# only at the far larger condition ceiling).
MIN_GRAM_EIG = 1e-4


def sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


def well_conditioned_set(rng: np.random.Generator, n: int, d: int) -> StateSet:
    while True:
        s = random_state_set(d, n, sub_seed(rng), mode="independent")
        w, _ = hermitian_eig(gram(s))
        if float(w[-1]) >= MIN_GRAM_EIG:
            return s


def unit_row_factor(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    c = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return c / np.linalg.norm(c, axis=1, keepdims=True)


def feasible_pair(
    rng: np.random.Generator,
    n: int,
    k: int | None = None,
    min_subdominant: float | None = None,
):
    """Independent spanning pair (D = N) whose ratio matrix is PSD.

    ``k`` bounds the rank of the coefficient matrix; ``min_subdominant``
    asks for a ratio matrix genuinely far from rank one
    (lambda_2 / lambda_1 at least that large).
    """
    k = n if k is None else k
    while True:
        final = well_conditioned_set(rng, n, n)
        g2 = gram(final)
        c = unit_row_factor(rng, n, k)
        m = c @ c.conj().T
        w, _ = hermitian_eig(m)
        if min_subdominant is not None and n > 1:
            if float(w[1]) < min_subdominant * float(w[0]):
                continue
        g1 = m * g2
        w1, _ = hermitian_eig(g1)
        if float(w1[-1]) < MIN_GRAM_EIG:
            continue
        b = psd_factor(g1)
        if b.shape[1] != n:
            continue
        initial = StateSet.from_vectors(b, normalize=True)
        return initial, final, m


def bounded_complete_coefficients(rng: np.random.Generator, n: int) -> np.ndarray:
    """Complete coefficient vectors with moduli bounded away from zero.

    The purity gap of a decohering channel vanishes as the superposition
    approaches a single basis direction, so gap assertions need
    coefficients kept away from the axes.
    """
    moduli = 0.35 + 0.65 * rng.random(n)
    phases = np.exp(2j * np.pi * rng.random(n))
    q = moduli * phases
    return q / np.linalg.norm(q)


def subset_instance(seed: int = 101, theta: float = 0.7, beta: float = 0.3):
    """Three-state Feasible pair whose ratio matrix is rank two with a
    unimodular (0, 1) entry: the pair (0, 1) is unitary-related while the
    full set is not."""
    final = random_state_set(3, 3, seed, mode="independent")
    g2 = gram(final)
    c = np.array(
        [
            [1.0, 0.0],
            [np.exp(-1j * theta), 0.0],
            [beta, np.sqrt(1.0 - beta**2)],
        ],
        dtype=complex,
    )
    g1 = (c @ c.conj().T) * g2
    initial = StateSet.from_vectors(psd_factor(g1), normalize=True)
    return initial, final
