import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detchan import (
    NotFiniteError,
    NotHermitianError,
    NotPSDError,
    SingularMatrixError,
    hermitian_eig,
    psd_check,
    psd_factor,
    solve_linear,
)
from detchan.numerics import frobenius, pin_column_phases


def rand_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + a.conj().T) / 2.0


def char_poly_roots(h):
    """Independent eigenvalue oracle: characteristic-polynomial coefficients
    via the Faddeev-LeVerrier trace recursion, then companion-matrix roots
    (np.roots). No symmetric eigensolver involved."""
    n = h.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.zeros_like(h)
    for k in range(1, n + 1):
        m = h @ m + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(h @ m) / k
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


# ---------------------------------------------------------------- hermitian_eig


def test_eig_identity():
    w, v = hermitian_eig(np.eye(2))
    np.testing.assert_allclose(w, [1.0, 1.0])
    np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-14)


def test_eig_rank_one_all_ones():
    w, _ = hermitian_eig(np.ones((2, 2)))
    np.testing.assert_allclose(w, [2.0, 0.0], atol=1e-14)


def test_eig_matches_companion_matrix_oracle():
    rng = np.random.default_rng(42)
    h = rand_hermitian(rng, 5)
    w, _ = hermitian_eig(h)
    np.testing.assert_allclose(w, char_poly_roots(h), atol=1e-8)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eig([[0.0, 1.0], [0.0, 0.0]])


def test_eig_rejects_nan():
    with pytest.raises(NotFiniteError):
        hermitian_eig([[np.nan, 0.0], [0.0, 1.0]])


def test_eig_reconstruction_and_orthonormality_up_to_dim_16():
    rng = np.random.default_rng(7)
    for n in [1, 2, 3, 5, 8, 13, 16]:
        h = rand_hermitian(rng, n, scale=rng.uniform(0.1, 10.0))
        w, v = hermitian_eig(h)
        scale = max(1.0, frobenius(h))
        assert frobenius(v @ np.diag(w) @ v.conj().T - h) <= 1e-10 * scale
        assert frobenius(v.conj().T @ v - np.eye(n)) <= 1e-10 * scale
        assert np.all(np.diff(w) <= 1e-12)  # descending


@settings(max_examples=60, deadline=None, derandomize=True)
@given(
    n=st.integers(min_value=1, max_value=6),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    scale=st.floats(min_value=1e-3, max_value=1e3),
)
def test_eig_invariants_property(n, seed, scale):
    h = rand_hermitian(np.random.default_rng(seed), n, scale=scale)
    w, v = hermitian_eig(h)
    bound = 1e-10 * max(1.0, frobenius(h))
    assert frobenius(v @ np.diag(w) @ v.conj().T - h) <= bound
    assert frobenius(v.conj().T @ v - np.eye(n)) <= bound


# ---------------------------------------------------------------- psd_check


def test_psd_identity():
    ok, min_eig = psd_check(np.eye(3))
    assert ok and min_eig == pytest.approx(1.0)


def test_psd_indefinite_two_by_two():
    # eigenvalues are 1 +- sqrt(2)
    ok, min_eig = psd_check([[1.0, np.sqrt(2.0)], [np.sqrt(2.0), 1.0]])
    assert not ok
    assert min_eig == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-14)


def test_psd_boundary_rank_one():
    ok, min_eig = psd_check(np.ones((2, 2)))
    assert ok and min_eig == pytest.approx(0.0, abs=1e-14)


def test_psd_agrees_with_sylvester_minor_oracle():
    # For Hermitian matrices with eigenvalues bounded away from zero,
    # PSD <=> PD <=> all leading principal minors positive (LU-based
    # determinants, no eigensolver).
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(400):
        n = int(rng.integers(2, 4))
        h = rand_hermitian(rng, n)
        w = np.linalg.eigvalsh(h)
        if np.min(np.abs(w)) < 1e-6:
            continue
        minors_positive = all(
            np.linalg.det(h[: k + 1, : k + 1]).real > 0.0 for k in range(n)
        )
        ok, _ = psd_check(h)
        assert ok == minors_positive
        checked += 1
    assert checked > 300


# ---------------------------------------------------------------- psd_factor


def test_factor_identity():
    c = psd_factor(np.eye(4))
    assert c.shape == (4, 4)
    np.testing.assert_allclose(c @ c.conj().T, np.eye(4), atol=1e-12)


def test_factor_all_ones_is_single_unit_column():
    n = 5
    c = psd_factor(np.ones((n, n)))
    assert c.shape == (n, 1)
    np.testing.assert_allclose(np.abs(c[:, 0]), np.ones(n), atol=1e-12)
    np.testing.assert_allclose(c @ c.conj().T, np.ones((n, n)), atol=1e-12)


def test_factor_roundtrip_rank_two():
    rng = np.random.default_rng(3)
    b = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    m = b @ b.conj().T
    c = psd_factor(m)
    assert c.shape == (4, 2)
    assert frobenius(c @ c.conj().T - m) <= 1e-10


def test_factor_rejects_indefinite():
    with pytest.raises(NotPSDError):
        psd_factor([[1.0, np.sqrt(2.0)], [np.sqrt(2.0), 1.0]])


def test_factor_clamps_tiny_negatives():
    m = np.ones((2, 2)) + np.diag([1e-13, -1e-13])
    c = psd_factor(m)
    assert frobenius(c @ c.conj().T - m) <= 1e-10


@settings(max_examples=40, deadline=None, derandomize=True)
@given(
    n=st.integers(min_value=1, max_value=6),
    k=st.integers(min_value=1, max_value=6),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
def test_factor_roundtrip_property(n, k, seed):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = b @ b.conj().T
    c = psd_factor(m)
    assert frobenius(c @ c.conj().T - m) <= 1e-10 * max(1.0, frobenius(m))
    assert c.shape[1] <= min(n, k)


def test_pin_column_phases_gauges_only():
    rng = np.random.default_rng(5)
    c = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    pinned = pin_column_phases(c)
    np.testing.assert_allclose(np.abs(pinned), np.abs(c), atol=1e-14)
    np.testing.assert_allclose(
        pinned @ pinned.conj().T, c @ c.conj().T, atol=1e-12
    )
    for k in range(2):
        pivot = pinned[np.argmax(np.abs(pinned[:, k])), k]
        assert pivot.imag == pytest.approx(0.0, abs=1e-14)
        assert pivot.real > 0


# ---------------------------------------------------------------- solve_linear


def test_solve_identity_returns_rhs():
    b = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_allclose(solve_linear(np.eye(2), b), b)


def test_solve_scaled_identity():
    np.testing.assert_allclose(solve_linear(2.0 * np.eye(3), np.eye(3)), np.eye(3) / 2.0)


def test_solve_residual_well_conditioned():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)) + 6 * np.eye(6)
    b = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    x = solve_linear(a, b)
    assert frobenius(a @ x - b) <= 1e-10 * frobenius(b)


def test_solve_rejects_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear([[1.0, 1.0], [1.0, 1.0]], np.eye(2))
