"""Superposition-purity probes and unitary-relation extraction.

A deterministic channel between two independent state sets either comes
from a unitary (up to per-state phases) or it decoheres every
superposition that involves the whole set: purity of a single complete
superposition output forces the unitary relation.  This module measures
purity directly (probe), tests the structural criterion on the
overlap-ratio matrix (rank one, flat-modulus top eigenvector), extracts
the unitary and phases when they exist, and cross-checks the two routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    FingerprintMismatchError,
    NotIndependentError,
    SizeMismatchError,
    SupportTooSmallError,
)
from .numerics import DEFAULT_RANK_TOL, DEFAULT_TOL, frobenius, hermitian_eig
from .states import (
    StateSet,
    fingerprint,
    gram,
    linear_independence,
    span_complement,
    span_duals,
    superpose,
)
from .synthesis import KrausSet, apply_channel, state_to_density, synthesize
from .feasibility import build_ratio_matrix

UNITARY_RELATED = "UnitaryRelated"
DECOHERING = "Decohering"

#: A state counts as pure when 1 - Tr(rho^2) is at most this.
DEFAULT_PURITY_TOL = 1e-9
#: Relative size allowed for subdominant eigenvalues in the rank-one test.
DEFAULT_RANK_GAP = 1e-6
#: Allowed relative spread of top-eigenvector component moduli.
DEFAULT_MODULUS_SPREAD = 1e-6
#: Residual allowed for U^dag U - I and the per-state projector match.
DEFAULT_UNITARY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    """Outcome of a purity probe or a unitary-relation test.

    Fields that do not apply to the producing operation are None: the
    probe fills the purity side, the structural test fills the unitary
    side.  ``extracted_unitary`` is present only with a UnitaryRelated
    verdict and then satisfies ||U^dag U - I|| <= 1e-8.
    """

    coefficients: np.ndarray | None
    support: tuple[int, ...]
    output_purity: float | None
    is_pure: bool | None
    output_state: np.ndarray | None
    output_coefficients: np.ndarray | None
    extracted_unitary: np.ndarray | None
    phases: np.ndarray | None
    verdict: str


@dataclass(frozen=True, eq=False)
class CoherenceRoundTrip:
    """Cross-check of the purity probe against the structural test."""

    probe: CoherenceReport
    test: CoherenceReport
    agree: bool
    #: max |r_j r_k^* - q_j q_k^* mu_jk| from the recovered expansion.
    coefficient_law_residual: float | None
    #: same law read off the output density matrix through an
    #: orthogonalizing map built from the final set's duals.
    device_residual: float | None


def purity(rho) -> float:
    """Tr(rho^2); 1 for pure states, 1/D for the maximally mixed state."""
    r = np.asarray(rho, dtype=np.complex128)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise SizeMismatchError(f"density matrix must be square, got {r.shape}")
    return float(np.real(np.trace(r @ r)))


def _pin_phase(vec: np.ndarray) -> np.ndarray:
    pivot = vec[int(np.argmax(np.abs(vec)))]
    if np.abs(pivot) > 0.0:
        return vec * (np.abs(pivot) / pivot)
    return vec


def coherence_probe(
    ks: KrausSet,
    initial: StateSet,
    coefficients,
    purity_tol: float = DEFAULT_PURITY_TOL,
    final: StateSet | None = None,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Send a superposition of the initial states through the channel and
    measure whether it survives as a pure state.

    The Kraus set must carry the fingerprint of ``initial`` (and of
    ``final`` when supplied).  At least two coefficients must be nonzero.
    For a pure output the state is recovered as the top eigenvector of
    the output density matrix; when the final set is available and
    independent on the support, the output is additionally expanded in
    the final states to recover its combination coefficients.
    """
    if fingerprint(initial) != ks.initial_fingerprint:
        raise FingerprintMismatchError("Kraus set was not synthesized from this initial set")
    if final is not None and ks.final_fingerprint and fingerprint(final) != ks.final_fingerprint:
        raise FingerprintMismatchError("Kraus set was not synthesized onto this final set")
    if initial.dimension != ks.dimension:
        raise DimensionMismatchError(
            f"state dimension {initial.dimension} != channel dimension {ks.dimension}"
        )
    q = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
    vec, support = superpose(initial, q, tol)
    if len(support) < 2:
        raise SupportTooSmallError("need at least two nonzero coefficients")
    rho = apply_channel(ks, state_to_density(vec))
    p = purity(rho)
    is_pure = (1.0 - p) <= purity_tol
    output_state = None
    output_coefficients = None
    if is_pure:
        _, vecs = hermitian_eig(rho, tol=1e-6)
        output_state = _pin_phase(vecs[:, 0])
        if final is not None:
            sub = final.subset(support)
            if linear_independence(sub, tol).independent:
                r_support, *_ = np.linalg.lstsq(sub.states.T, output_state, rcond=None)
                r = np.zeros(initial.n, dtype=np.complex128)
                r[list(support)] = r_support
                output_coefficients = r
    return CoherenceReport(
        coefficients=q,
        support=support,
        output_purity=p,
        is_pure=is_pure,
        output_state=output_state,
        output_coefficients=output_coefficients,
        extracted_unitary=None,
        phases=None,
        verdict=UNITARY_RELATED if is_pure else DECOHERING,
    )


def unitary_relation_test(
    initial: StateSet,
    final: StateSet,
    support=None,
    tol: float = DEFAULT_TOL,
    rank_gap: float = DEFAULT_RANK_GAP,
    modulus_spread: float = DEFAULT_MODULUS_SPREAD,
    unitary_tol: float = DEFAULT_UNITARY_TOL,
) -> CoherenceReport:
    """Decide whether the two sets are related by one unitary on the
    support, and extract it when they are.

    Restricted to the support, the overlap-ratio matrix of a
    unitary-related pair is rank one with top eigenvalue equal to the
    support size and a top eigenvector of uniform component modulus; its
    phases give the per-state gauge.  Both sets must be independent on
    the support (a unitary cannot create a dependent image).  The
    candidate unitary maps psi1_j to e^{i phi_j} psi2_j, extended over the
    span and completed orthogonally off it; it is accepted only if
    ||U^dag U - I|| and every projector mismatch stay within
    ``unitary_tol``.  The global phase is pinned by making the
    largest-modulus entry of the first column real positive.
    """
    if initial.n != final.n:
        raise SizeMismatchError(f"{initial.n} initial states vs {final.n} final states")
    if initial.dimension != final.dimension:
        raise DimensionMismatchError(
            f"initial dimension {initial.dimension} != final dimension {final.dimension}"
        )
    n = initial.n
    support = tuple(range(n)) if support is None else tuple(sorted({int(i) for i in support}))
    if any(i < 0 or i >= n for i in support):
        raise IndexError(f"support {support} out of range for {n} states")
    if len(support) < 2:
        raise SupportTooSmallError("support must contain at least two states")
    sub1 = initial.subset(support)
    sub2 = final.subset(support)
    if not linear_independence(sub1, tol).independent:
        raise NotIndependentError("initial states are dependent on the support")
    if not linear_independence(sub2, tol).independent:
        raise NotIndependentError(
            "final states are dependent on the support; no unitary produces a dependent image"
        )
    m = build_ratio_matrix(sub1, sub2, tol)
    s = len(support)

    def decohering():
        return CoherenceReport(
            coefficients=None,
            support=support,
            output_purity=None,
            is_pure=None,
            output_state=None,
            output_coefficients=None,
            extracted_unitary=None,
            phases=None,
            verdict=DECOHERING,
        )

    if m.undefined_nonzero_pairs:
        return decohering()
    if m.fully_defined:
        w, v = hermitian_eig(m.entries, tol)
        lam1 = float(w[0])
        subdominant = float(np.max(np.abs(w[1:]))) if s > 1 else 0.0
        if lam1 <= 0.0 or subdominant > rank_gap * lam1 or abs(lam1 - s) > rank_gap * s:
            return decohering()
        a = v[:, 0]
        moduli = np.abs(a)
        if float(moduli.max() - moduli.min()) > modulus_spread * float(moduli.max()):
            return decohering()
        phases = np.angle(a) - np.angle(a[0])
        phases[0] = 0.0
    else:
        phases = _phase_sync(m, rank_gap)
        if phases is None:
            return decohering()

    u = _extend_unitary(sub1, sub2, phases, tol)
    if frobenius(u.conj().T @ u - np.eye(initial.dimension)) > unitary_tol:
        return decohering()
    for j in range(s):
        p1 = state_to_density(sub1.states[j])
        p2 = state_to_density(sub2.states[j])
        if frobenius(u @ p1 @ u.conj().T - p2) > unitary_tol:
            return decohering()
    u = u * _global_phase_pin(u)
    return CoherenceReport(
        coefficients=None,
        support=support,
        output_purity=None,
        is_pure=None,
        output_state=None,
        output_coefficients=None,
        extracted_unitary=u,
        phases=phases,
        verdict=UNITARY_RELATED,
    )


def _global_phase_pin(u: np.ndarray) -> complex:
    col = u[:, 0]
    pivot = col[int(np.argmax(np.abs(col)))]
    return np.abs(pivot) / pivot if np.abs(pivot) > 0.0 else 1.0


def _phase_sync(m, rank_gap: float) -> np.ndarray | None:
    # Fallback for ratio matrices with 0/0 entries (e.g. orthonormal
    # bases): unconstrained pairs are consistent with any phases, so the
    # per-state phases are propagated over the graph of defined pairs and
    # verified on every defined entry, per connected component.
    s = m.n_states
    offdiag = np.array(m.defined)
    np.fill_diagonal(offdiag, False)
    # Moduli must be 1 on every defined off-diagonal entry.
    if np.any(np.abs(np.abs(m.entries[offdiag]) - 1.0) > rank_gap):
        return None
    phases = np.zeros(s)
    seen = np.zeros(s, dtype=bool)
    for root in range(s):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            j = queue.pop()
            for k in range(s):
                if not seen[k] and offdiag[j, k]:
                    # mu_jk = e^{i(phi_j - phi_k)}
                    phases[k] = phases[j] - float(np.angle(m.entries[j, k]))
                    seen[k] = True
                    queue.append(k)
    for j in range(s):
        for k in range(s):
            if offdiag[j, k]:
                expected = np.exp(1j * (phases[j] - phases[k]))
                if abs(m.entries[j, k] - expected) > rank_gap:
                    return None
    return phases


def _extend_unitary(sub1: StateSet, sub2: StateSet, phases, tol: float) -> np.ndarray:
    duals1 = span_duals(sub1, tol)
    u = sub2.states.T @ (np.exp(1j * np.asarray(phases))[:, None] * duals1.conj())
    if sub1.n < sub1.dimension:
        b1 = span_complement(sub1, tol)
        b2 = span_complement(sub2, tol)
        u = u + b2 @ b1.conj().T
    return u


def coherence_roundtrip(
    initial: StateSet,
    final: StateSet,
    coefficients,
    tol: float = DEFAULT_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    purity_tol: float = DEFAULT_PURITY_TOL,
) -> CoherenceRoundTrip:
    """Run the purity probe and the structural test on one instance and
    cross-check them.

    Synthesizes the channel (the instance must be Feasible), probes the
    superposition given by ``coefficients`` (restricting to its support,
    which must contain at least two states) and runs the structural test
    on the same support; the two verdicts must agree.  For pure outputs
    the coefficient law r_j r_k^* = q_j q_k^* mu_jk is verified twice:
    once from the recovered expansion coefficients and once by reading the
    output density matrix through an orthogonalizing map that sends the
    final states to an orthonormal basis (built from their duals).
    """
    if not linear_independence(initial, tol).independent:
        raise NotIndependentError("initial set must be linearly independent")
    if not linear_independence(final, tol).independent:
        raise NotIndependentError("final set must be linearly independent")
    q = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
    ks = synthesize(initial, final, tol, rank_tol)
    probe = coherence_probe(ks, initial, q, purity_tol, final=final, tol=tol)
    test = unitary_relation_test(initial, final, probe.support, tol)
    agree = bool(probe.is_pure) == (test.verdict == UNITARY_RELATED)
    law_residual = None
    device_residual = None
    if probe.is_pure and probe.output_coefficients is not None:
        support = list(probe.support)
        sub1 = initial.subset(support)
        sub2 = final.subset(support)
        m = build_ratio_matrix(sub1, sub2, tol)
        mu = np.where(m.defined, m.entries, 1.0)
        # Effective coefficients of the normalized input superposition.
        q_eff = q / float(np.linalg.norm(q @ initial.states))
        qs = q_eff[support]
        analytic = (qs[:, None] * qs.conj()[None, :]) * mu
        rs = probe.output_coefficients[support]
        law_residual = float(np.max(np.abs(np.outer(rs, rs.conj()) - analytic)))
        vec, _ = superpose(initial, q, tol)
        rho = apply_channel(ks, state_to_density(vec))
        ortho_map = span_duals(sub2, tol).conj()
        device = ortho_map @ rho @ ortho_map.conj().T
        device_residual = float(np.max(np.abs(device - analytic)))
    return CoherenceRoundTrip(probe, test, agree, law_residual, device_residual)
