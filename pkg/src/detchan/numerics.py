"""Dense complex-matrix kernels: Hermitian eigendecomposition, positivity
tests, rank-revealing PSD factorization and guarded linear solves.

All decisions (Hermiticity, positivity, rank) are made relative to the
spectral scale of the input; nothing here assumes exact arithmetic.
Matrices are plain ``numpy.ndarray`` values with ``complex128`` entries.
Every function is pure, so concurrent use needs no locking.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    NotFiniteError,
    NotHermitianError,
    NotPSDError,
    SingularMatrixError,
    SizeMismatchError,
)

#: Relative tolerance for Hermiticity and positivity decisions.
DEFAULT_TOL = 1e-9
#: Relative eigenvalue cutoff used when revealing numerical rank.
DEFAULT_RANK_TOL = 1e-10
#: Linear solves refuse condition numbers above this ceiling.
DEFAULT_COND_CEILING = 1e12


class EigenDecomposition(NamedTuple):
    """Hermitian eigendecomposition with eigenvalues sorted descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce input to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise SizeMismatchError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotFiniteError(f"{name} contains NaN or Inf entries")
    return m


def frobenius(a) -> float:
    return float(np.linalg.norm(a, "fro"))


def hermitian_eig(h, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian within ``tol * max(1, ||h||_F)``.
    tol : float
        Relative symmetry tolerance.

    Returns
    -------
    EigenDecomposition
        Real eigenvalues in descending order and orthonormal eigenvector
        columns, so ``V @ diag(w) @ V.conj().T`` reconstructs ``h``.
    """
    m = as_complex_matrix(h, name="h")
    if m.shape[0] != m.shape[1]:
        raise SizeMismatchError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, frobenius(m))
    sym_residual = frobenius(m - m.conj().T)
    if sym_residual > tol * scale:
        raise NotHermitianError(
            f"symmetry residual {sym_residual:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return EigenDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def psd_check(h, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Decide positive semidefiniteness of a Hermitian matrix.

    Returns ``(is_psd, min_eigenvalue)``.  The verdict tolerates
    eigenvalues down to ``-tol * max(1, spectral radius)``.
    """
    eig = hermitian_eig(h, tol)
    min_eig = float(eig.eigenvalues[-1])
    radius = float(np.max(np.abs(eig.eigenvalues)))
    return min_eig >= -tol * max(1.0, radius), min_eig


def psd_factor(
    m, rank_tol: float = DEFAULT_RANK_TOL, tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Rank-revealing factor ``C`` with ``m = C @ C.conj().T``.

    Eigenvalues in the band between ``-tol`` (relative) and
    ``rank_tol * lambda_max`` are treated as zero, so boundary-PSD inputs
    such as rank-one matrices factor cleanly; anything more negative makes
    the input non-PSD. The number of columns of ``C`` equals the numerical
    rank of ``m``.

    Column phases are pinned (largest-modulus entry real positive) to make
    the output deterministic; any ``C @ W`` with ``W`` unitary is an
    equally valid factor of the same matrix.
    """
    ok, min_eig = psd_check(m, tol)
    if not ok:
        raise NotPSDError(f"matrix is not PSD: min eigenvalue {min_eig:.3e}")
    w, v = hermitian_eig(m, tol)
    w = np.clip(w, 0.0, None)
    lam_max = float(w[0])
    keep = w > rank_tol * lam_max
    c = v[:, keep] * np.sqrt(w[keep])
    return pin_column_phases(c)


def pin_column_phases(c) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive."""
    out = np.array(c, dtype=np.complex128)
    for k in range(out.shape[1]):
        col = out[:, k]
        pivot = col[int(np.argmax(np.abs(col)))]
        if np.abs(pivot) > 0.0:
            out[:, k] = col * (np.abs(pivot) / pivot)
    return out


def solve_linear(a, b, cond_ceiling: float = DEFAULT_COND_CEILING) -> np.ndarray:
    """Solve ``a @ x = b``, refusing ill-conditioned systems.

    Raises ``SingularMatrixError`` when the 2-norm condition estimate of
    ``a`` exceeds ``cond_ceiling`` (or is not finite).
    """
    am = as_complex_matrix(a, name="a")
    bm = np.asarray(b, dtype=np.complex128)
    if am.shape[0] != am.shape[1]:
        raise SizeMismatchError(f"coefficient matrix must be square, got {am.shape}")
    if bm.shape[0] != am.shape[0]:
        raise SizeMismatchError(
            f"right-hand side has leading dimension {bm.shape[0]}, expected {am.shape[0]}"
        )
    if not np.all(np.isfinite(bm)):
        raise NotFiniteError("right-hand side contains NaN or Inf entries")
    cond = float(np.linalg.cond(am))
    if not np.isfinite(cond) or cond > cond_ceiling:
        raise SingularMatrixError(
            f"condition number {cond:.3e} exceeds ceiling {cond_ceiling:.1e}"
        )
    return np.linalg.solve(am, bm)
