"""Pure-state sets: construction, Gram matrices, linear independence,
reciprocal (dual) states, superpositions and seeded random generation."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    IllConditionedError,
    InvalidDimensionsError,
    NotFiniteError,
    NotIndependentError,
    NotNormalizedError,
    NotSpanningError,
    SizeMismatchError,
    ZeroVectorError,
)
from .numerics import (
    DEFAULT_COND_CEILING,
    DEFAULT_TOL,
    hermitian_eig,
    solve_linear,
)

#: States must be normalized this tightly at construction time.
UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateSet:
    """A set of N unit-norm pure states in a D-dimensional complex space.

    ``states`` holds one amplitude vector per row, shape (N, D).  Instances
    are immutable: the underlying array is marked read-only, so sets can be
    shared freely across threads.
    """

    dimension: int
    states: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.array(self.states, dtype=np.complex128)
        if arr.ndim != 2:
            raise InvalidDimensionsError(f"states must be 2-D, got shape {arr.shape}")
        n, d = arr.shape
        if n < 1 or d < 1:
            raise InvalidDimensionsError(f"need N >= 1 and D >= 1, got N={n}, D={d}")
        if d != self.dimension:
            raise InvalidDimensionsError(
                f"declared dimension {self.dimension} != vector length {d}"
            )
        if not np.all(np.isfinite(arr)):
            raise NotFiniteError("state amplitudes contain NaN or Inf")
        worst = float(np.max(np.abs(np.linalg.norm(arr, axis=1) - 1.0)))
        if worst > UNIT_NORM_TOL:
            raise NotNormalizedError(f"state norms deviate from 1 by up to {worst:.3e}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise SizeMismatchError(f"{len(labels)} labels for {n} states")
            object.__setattr__(self, "labels", labels)
        arr.setflags(write=False)
        object.__setattr__(self, "states", arr)

    @classmethod
    def from_vectors(cls, vectors, labels=None, normalize: bool = False) -> "StateSet":
        """Build a set from a sequence of amplitude vectors (rows)."""
        arr = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        if normalize:
            norms = np.linalg.norm(arr, axis=1, keepdims=True)
            if np.any(norms == 0.0):
                raise ZeroVectorError("cannot normalize a zero vector")
            arr = arr / norms
        return cls(
            dimension=arr.shape[1],
            states=arr,
            labels=tuple(labels) if labels else None,
        )

    @property
    def n(self) -> int:
        """Number of states in the set."""
        return self.states.shape[0]

    def subset(self, indices: Sequence[int]) -> "StateSet":
        """Restriction to the given state indices (same ambient dimension)."""
        idx = list(indices)
        labels = tuple(self.labels[i] for i in idx) if self.labels else None
        return StateSet(self.dimension, self.states[idx, :], labels)


@dataclass(frozen=True, eq=False)
class DualSet:
    """Reciprocal vectors w_j with <w_j|psi_k> = delta_jk (unnormalized)."""

    dimension: int
    duals: np.ndarray

    def __post_init__(self):
        arr = np.array(self.duals, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "duals", arr)


class Independence(NamedTuple):
    independent: bool
    rank: int
    #: Columns are coefficient dependencies: sum_j c_j |psi_j> = 0.
    null_vectors: np.ndarray


class Superposition(NamedTuple):
    vector: np.ndarray
    support: tuple[int, ...]


def gram(s: StateSet) -> np.ndarray:
    """Gram matrix with entry (j, k) = <psi_k | psi_j>.

    Hermitian and PSD with unit diagonal for unit-norm states.
    """
    g = s.states @ s.states.conj().T
    return (g + g.conj().T) / 2.0


def linear_independence(s: StateSet, tol: float = DEFAULT_TOL) -> Independence:
    """Numerical rank of a state set plus its coefficient dependencies.

    The rank is the number of Gram eigenvalues above ``tol`` relative to
    the largest; the remaining eigenvectors are returned as columns c that
    satisfy ``sum_j c_j |psi_j> = 0`` (numerically).
    """
    overlap = gram(s).conj()  # entry (j, k) = <psi_j | psi_k>
    w, v = hermitian_eig(overlap, tol)
    cutoff = tol * max(float(w[0]), 1.0)
    rank = int(np.sum(w > cutoff))
    return Independence(rank == s.n, rank, v[:, rank:])


def span_duals(
    s: StateSet,
    tol: float = DEFAULT_TOL,
    cond_ceiling: float = DEFAULT_COND_CEILING,
) -> np.ndarray:
    """In-span reciprocal vectors of an independent set, one per row.

    Row j satisfies <w_j|psi_k> = delta_jk and lies inside span(s); for a
    spanning set (N = D) these are the unique reciprocal states.
    """
    ind = linear_independence(s, tol)
    if not ind.independent:
        raise NotIndependentError(f"state set has rank {ind.rank} < N = {s.n}")
    overlap = gram(s).conj()
    cond = float(np.linalg.cond(overlap))
    if not np.isfinite(cond) or cond > cond_ceiling:
        raise IllConditionedError(
            f"Gram condition {cond:.3e} exceeds ceiling {cond_ceiling:.1e}"
        )
    inv_overlap = solve_linear(overlap, np.eye(s.n, dtype=np.complex128), cond_ceiling)
    return (s.states.T @ inv_overlap).T


def dual_states(
    s: StateSet,
    tol: float = DEFAULT_TOL,
    cond_ceiling: float = DEFAULT_COND_CEILING,
) -> DualSet:
    """Biorthogonal duals of an independent spanning set (N = D).

    The normalization fixes <w_j|psi_j> = 1 exactly, which makes
    ``sum_j |psi_j><w_j|`` a resolution of the identity.
    """
    if s.n != s.dimension:
        raise NotSpanningError(
            f"duals need a spanning set with N = D, got N={s.n}, D={s.dimension}"
        )
    return DualSet(s.dimension, span_duals(s, tol, cond_ceiling))


def span_complement(s: StateSet, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of span(s).

    Empty (D x 0) for a spanning set; requires independence.
    """
    duals = span_duals(s, tol)
    projector = s.states.T @ duals.conj()
    w, v = hermitian_eig(np.eye(s.dimension) - projector, tol)
    return v[:, w > 0.5]


def superpose(s: StateSet, coefficients, tol: float = DEFAULT_TOL) -> Superposition:
    """Normalized ``sum_j q_j |psi_j>`` plus the support {j : q_j != 0}."""
    q = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
    if q.shape[0] != s.n:
        raise SizeMismatchError(f"{q.shape[0]} coefficients for {s.n} states")
    if not np.all(np.isfinite(q)):
        raise NotFiniteError("coefficients contain NaN or Inf")
    support = tuple(int(j) for j in np.nonzero(q)[0])
    vec = q @ s.states
    norm = float(np.linalg.norm(vec))
    if norm <= tol * max(1.0, float(np.linalg.norm(q))):
        raise ZeroVectorError(f"superposition norm {norm:.3e} is below tolerance")
    return Superposition(vec / norm, support)


def fingerprint(s: StateSet) -> str:
    """Stable identity of a state set (dimension plus exact amplitudes).

    Labels are deliberately excluded; negative zeros are normalized so the
    fingerprint survives serialization round trips.
    """
    h = hashlib.sha256()
    h.update(f"stateset:{s.n}:{s.dimension}:".encode())
    h.update(np.ascontiguousarray(s.states + (0.0 + 0.0j)).tobytes())
    return h.hexdigest()


def _haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag = np.where(np.abs(diag) < 1e-300, 1.0, diag)
    return q * (diag / np.abs(diag))


def random_unitary(dimension: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary, deterministic in the seed (PCG64)."""
    if dimension < 1:
        raise InvalidDimensionsError(f"dimension must be >= 1, got {dimension}")
    return _haar_unitary(np.random.default_rng(seed), dimension)


def random_state_set(
    dimension: int,
    n_states: int,
    seed: int,
    mode: str = "generic",
    base: StateSet | None = None,
    max_attempts: int = 1000,
    tol: float = DEFAULT_TOL,
) -> StateSet:
    """Seeded random state sets (numpy PCG64; same seed, same set).

    Modes
    -----
    generic
        Each state drawn independently from the rotation-invariant
        distribution on the unit sphere.
    independent
        Generic draws re-sampled (up to ``max_attempts``) until the Gram
        matrix has full rank N; requires N <= D.
    unitary_image
        Returns {U |psi_j>} for a Haar-random U applied to ``base``;
        ``dimension``/``n_states`` must match the base set.
    """
    if dimension < 1 or n_states < 1:
        raise InvalidDimensionsError(f"need D >= 1 and N >= 1, got D={dimension}, N={n_states}")
    rng = np.random.default_rng(seed)
    if mode == "generic":
        return StateSet.from_vectors(_sphere_points(rng, n_states, dimension))
    if mode == "independent":
        if n_states > dimension:
            raise InvalidDimensionsError(
                f"independent draws need N <= D, got N={n_states}, D={dimension}"
            )
        for _ in range(max_attempts):
            candidate = StateSet.from_vectors(_sphere_points(rng, n_states, dimension))
            if linear_independence(candidate, tol).independent:
                return candidate
        raise NotIndependentError(
            f"no independent set of {n_states} states in dimension {dimension} "
            f"after {max_attempts} attempts"
        )
    if mode == "unitary_image":
        if base is None:
            raise InvalidDimensionsError("unitary_image mode requires a base set")
        if dimension != base.dimension or n_states != base.n:
            raise InvalidDimensionsError(
                f"unitary_image dimensions ({n_states}, {dimension}) must match "
                f"the base set ({base.n}, {base.dimension})"
            )
        u = _haar_unitary(rng, dimension)
        return StateSet(base.dimension, base.states @ u.T, base.labels)
    raise InvalidDimensionsError(f"unknown mode {mode!r}")


def _sphere_points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    vecs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs / norms
