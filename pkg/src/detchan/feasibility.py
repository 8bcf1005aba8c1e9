"""Deterministic-transformability analysis.

The central object is the overlap-ratio matrix: entry (j, k) divides the
initial overlap <psi1_k|psi1_j> by the final overlap <psi2_k|psi2_j>.
Positive semidefiniteness of that matrix is necessary for a deterministic
channel mapping each initial state onto its target, and sufficient when
the initial states are linearly independent.  Ratios with vanishing
denominator are tracked explicitly rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, SizeMismatchError, UndefinedEntryError
from .numerics import DEFAULT_TOL, psd_check
from .states import StateSet, gram, linear_independence

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
NECESSARY_ONLY = "NecessaryOnly"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True, eq=False)
class RatioMatrix:
    """Entrywise ratio of initial to final state overlaps.

    ``entries[j, k] = <psi1_k|psi1_j> / <psi2_k|psi2_j>`` wherever the
    final overlap is nonzero; ``defined[j, k]`` records which entries
    exist (undefined slots are stored as 0).  Pairs whose final overlap
    vanishes while the initial one does not are collected in
    ``undefined_nonzero_pairs``; they rule out any deterministic channel.
    Pairs where both overlaps vanish are unconstrained (``free_pairs``).
    The diagonal is always defined and exactly 1.
    """

    entries: np.ndarray
    defined: np.ndarray
    n_states: int
    dimension: int
    undefined_nonzero_pairs: tuple[tuple[int, int], ...]
    free_pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for name in ("entries", "defined"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def fully_defined(self) -> bool:
        return bool(np.all(self.defined))


@dataclass(frozen=True)
class PairOverlap:
    """Overlap moduli of one state pair in both sets."""

    j: int
    k: int
    initial_overlap: float
    final_overlap: float
    violation: bool


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Verdict on deterministic transformability plus diagnostics.

    ``Feasible`` requires an independent initial set, fully defined ratio
    entries (or a unitary shortcut, see notes) and a PSD ratio matrix.
    ``NecessaryOnly`` means the positivity test passed but the initial set
    is dependent, where positivity is not known to suffice.
    ``Undetermined`` marks instances whose ratio matrix has unconstrained
    entries; no positive completion is attempted.
    """

    verdict: str
    min_eigenvalue: float | None
    violating_pairs: tuple[PairOverlap, ...]
    initial_independent: bool
    final_independent: bool
    notes: tuple[str, ...]


def build_ratio_matrix(
    initial: StateSet, final: StateSet, tol: float = DEFAULT_TOL
) -> RatioMatrix:
    """Overlap-ratio matrix of a transformation instance.

    Final overlaps with modulus <= ``tol`` leave the entry undefined; the
    diagonal is normalized to exactly 1 (both overlaps are 1 there).
    """
    if initial.n != final.n:
        raise SizeMismatchError(f"{initial.n} initial states vs {final.n} final states")
    if initial.dimension != final.dimension:
        raise DimensionMismatchError(
            f"initial dimension {initial.dimension} != final dimension {final.dimension}"
        )
    g1 = gram(initial)
    g2 = gram(final)
    defined = np.abs(g2) > tol
    np.fill_diagonal(defined, True)
    entries = np.zeros_like(g1)
    entries[defined] = g1[defined] / g2[defined]
    np.fill_diagonal(entries, 1.0)
    entries = (entries + entries.conj().T) / 2.0
    nonzero, free = [], []
    n = initial.n
    for j in range(n):
        for k in range(j + 1, n):
            if not defined[j, k]:
                (nonzero if np.abs(g1[j, k]) > tol else free).append((j, k))
    return RatioMatrix(entries, defined, n, initial.dimension, tuple(nonzero), tuple(free))


def distinguishability_audit(
    initial: StateSet, final: StateSet, tol: float = DEFAULT_TOL
) -> tuple[PairOverlap, ...]:
    """Pairwise overlap moduli for both sets, flagging forbidden pairs.

    A deterministic channel can never make a pair of states more
    distinguishable, so a pair is flagged when its initial overlap modulus
    exceeds the final one by more than ``tol``.
    """
    if initial.n != final.n:
        raise SizeMismatchError(f"{initial.n} initial states vs {final.n} final states")
    g1 = np.abs(gram(initial))
    g2 = np.abs(gram(final))
    records = []
    for j in range(initial.n):
        for k in range(j + 1, initial.n):
            records.append(
                PairOverlap(
                    j,
                    k,
                    float(g1[j, k]),
                    float(g2[j, k]),
                    bool(g1[j, k] > g2[j, k] + tol),
                )
            )
    return tuple(records)


def witness_value(m: RatioMatrix, j: int, k: int) -> float:
    """Quadratic form <v, M v> for the phase-aligned two-index probe.

    The probe vector has components (delta_j - e^{-i theta} delta_k)/sqrt(2)
    with theta the argument of entry (j, k); for a unit-diagonal ratio
    matrix the value equals 1 - |mu_jk|, so a negative result certifies
    that no deterministic channel exists.
    """
    if j == k:
        raise ValueError("witness requires two distinct indices")
    n = m.n_states
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"indices ({j}, {k}) out of range for {n} states")
    if not m.defined[j, k]:
        raise UndefinedEntryError(f"entry ({j}, {k}) has a vanishing final overlap")
    theta = float(np.angle(m.entries[j, k]))
    v = np.zeros(n, dtype=np.complex128)
    v[j] = 1.0 / np.sqrt(2.0)
    v[k] = -np.exp(-1j * theta) / np.sqrt(2.0)
    return float(np.real(v.conj() @ m.entries @ v))


def _grams_match(initial: StateSet, final: StateSet, tol: float) -> bool:
    return float(np.max(np.abs(gram(initial) - gram(final)))) <= tol


def feasibility_check(
    initial: StateSet, final: StateSet, tol: float = DEFAULT_TOL
) -> FeasibilityReport:
    """Decide whether a deterministic channel can map each initial state
    onto its final counterpart.

    The verdict is ``Feasible`` iff the initial set is independent and the
    (fully defined) ratio matrix is PSD -- or the two Gram matrices agree
    entrywise, in which case an explicit unitary channel exists and any
    unconstrained entries are completed with 1.  Failures of positivity,
    pairs made strictly more distinguishable, or a final span exceeding
    the initial span each yield ``Infeasible``.  Dependent initial sets
    cap the verdict at ``NecessaryOnly``; unconstrained entries without a
    unitary shortcut give ``Undetermined``.
    """
    m = build_ratio_matrix(initial, final, tol)
    ind1 = linear_independence(initial, tol)
    ind2 = linear_independence(final, tol)
    audit = distinguishability_audit(initial, final, tol)
    violations = tuple(p for p in audit if p.violation)
    notes: list[str] = []
    if not ind1.independent:
        notes.append(f"initial set is linearly dependent (rank {ind1.rank} of {initial.n})")
    if not ind2.independent:
        notes.append(f"final set is linearly dependent (rank {ind2.rank} of {final.n})")

    def report(verdict, min_eig):
        return FeasibilityReport(
            verdict, min_eig, violations, ind1.independent, ind2.independent, tuple(notes)
        )

    if m.undefined_nonzero_pairs:
        pairs = ", ".join(f"({j}, {k})" for j, k in m.undefined_nonzero_pairs)
        notes.append(f"orthogonal final pairs with non-orthogonal initial counterparts: {pairs}")
        return report(INFEASIBLE, None)

    if ind2.rank > ind1.rank:
        notes.append(
            f"final states span {ind2.rank} dimensions, initial states only {ind1.rank}; "
            "a linear map cannot enlarge the span"
        )
        return report(INFEASIBLE, None)

    if m.fully_defined:
        ok, min_eig = psd_check(m.entries, tol)
        if not ok:
            notes.append(f"ratio matrix has negative eigenvalue {min_eig:.6e}")
            return report(INFEASIBLE, min_eig)
        if ind1.independent:
            return report(FEASIBLE, min_eig)
        notes.append(
            "ratio matrix is PSD, which is necessary but not known sufficient "
            "for a dependent initial set"
        )
        return report(NECESSARY_ONLY, min_eig)

    # Entries with 0/0 overlaps are unconstrained.
    if _grams_match(initial, final, tol):
        completed = np.where(m.defined, m.entries, 1.0)
        _, min_eig = psd_check(completed, tol)
        notes.append(
            "initial and final Gram matrices coincide: a unitary channel realizes "
            "the transformation (unconstrained entries completed with 1)"
        )
        if ind1.independent:
            return report(FEASIBLE, min_eig)
        notes.append("verdict capped at NecessaryOnly because the initial set is dependent")
        return report(NECESSARY_ONLY, min_eig)
    if violations:
        notes.append("a final pair is more distinguishable than its initial counterpart")
        return report(INFEASIBLE, None)
    notes.append(
        f"{len(m.free_pairs)} state pair(s) leave the ratio matrix underdetermined; "
        "no positive completion attempted"
    )
    return report(UNDETERMINED, None)
