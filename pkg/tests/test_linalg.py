"""Tests for the dense Hermitian linear algebra layer."""

import numpy as np
import pytest

from reebound import linalg

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (a + a.conj().T)


def random_pd(rng, d, eig_min=0.05):
    """Random positive definite matrix with spectrum bounded away from zero."""
    h = random_hermitian(rng, d)
    w, v = np.linalg.eigh(h)
    w = eig_min + np.abs(w)
    return (v * w) @ v.conj().T


def test_hermitian_eig_pauli_x():
    w, v = linalg.hermitian_eig(PAULI_X)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-10)


def test_hermitian_eig_identity():
    w, _ = linalg.hermitian_eig(np.eye(3, dtype=complex))
    np.testing.assert_allclose(w, np.ones(3), atol=1e-12)


def test_hermitian_eig_sorts_ascending():
    w, _ = linalg.hermitian_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(w, [1.0, 2.0, 3.0], atol=1e-12)


def test_hermitian_eig_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError, match=r"\(0,1\)"):
        linalg.hermitian_eig(bad)


def test_hermitian_eig_reconstruction():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = random_hermitian(rng, 6)
        w, v = linalg.hermitian_eig(a)
        rebuilt = (v * w) @ v.conj().T
        assert np.linalg.norm(rebuilt - a) <= 1e-10 * max(np.linalg.norm(a), 1.0)


def test_matrix_log_floored_diagonal():
    a = np.diag([1.0, np.e]).astype(complex)
    np.testing.assert_allclose(
        linalg.matrix_log_floored(a), np.diag([0.0, 1.0]), atol=1e-12
    )


def test_matrix_log_floored_identity():
    out = linalg.matrix_log_floored(np.eye(4, dtype=complex))
    np.testing.assert_allclose(out, np.zeros((4, 4)), atol=1e-12)


def test_matrix_log_floored_clamps_tiny_eigenvalues():
    a = np.diag([1e-20, 1.0]).astype(complex)
    out = linalg.matrix_log_floored(a, floor=1e-14)
    np.testing.assert_allclose(out, np.diag([np.log(1e-14), 0.0]), atol=1e-10)


def test_matrix_log_floored_warns_on_negative_input():
    a = np.diag([-1e-3, 1.0]).astype(complex)
    with pytest.warns(RuntimeWarning, match="not PSD"):
        linalg.matrix_log_floored(a)


def test_frechet_log_commuting_diagonal():
    # On commuting inputs the derivative is multiplication by 1/lambda.
    a = np.diag([0.5, 2.0]).astype(complex)
    x = np.diag([1.0, 1.0]).astype(complex)
    out = linalg.frechet_log(a, x)
    np.testing.assert_allclose(out, np.diag([2.0, 0.5]), atol=1e-12)


def test_frechet_log_matches_finite_differences():
    """Central finite differences agree to 1e-5 relative over 100 seeded draws."""
    t = 1e-6
    for seed in range(100):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 7))
        a = random_pd(rng, d)
        x = random_hermitian(rng, d)
        exact = linalg.frechet_log(a, x)
        fd = (
            linalg.matrix_log_floored(a + t * x) - linalg.matrix_log_floored(a - t * x)
        ) / (2 * t)
        err = np.linalg.norm(exact - fd) / np.linalg.norm(fd)
        assert err <= 1e-5, f"seed {seed}: relative error {err:.2e}"


def test_frechet_log_linearity():
    rng = np.random.default_rng(11)
    a = random_pd(rng, 4)
    x = random_hermitian(rng, 4)
    y = random_hermitian(rng, 4)
    lhs = linalg.frechet_log(a, 2.0 * x + y)
    rhs = 2.0 * linalg.frechet_log(a, x) + linalg.frechet_log(a, y)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_frechet_log_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        linalg.frechet_log(np.eye(2, dtype=complex), np.eye(3, dtype=complex))


def test_frechet_log_near_degenerate_spectrum_is_stable():
    # Eigenvalue gaps near machine precision must not blow up the table.
    a = np.diag([0.5, 0.5 + 1e-13, 1.0]).astype(complex)
    x = np.ones((3, 3), dtype=complex)
    out = linalg.frechet_log(a, x)
    assert np.all(np.isfinite(out))
    assert abs(out[0, 1] - 2.0) < 1e-3  # divided difference -> 1/0.5


def test_kron_matches_manual_block():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.eye(2, dtype=complex)
    out = linalg.kron(a, b)
    assert out.shape == (4, 4)
    np.testing.assert_array_equal(out[:2, :2], np.eye(2) * 1)
    np.testing.assert_array_equal(out[:2, 2:], np.eye(2) * 2)


def test_partial_transpose_is_bitexact_involution():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    twice = linalg.partial_transpose(linalg.partial_transpose(a, 2, 3), 2, 3)
    assert np.array_equal(twice, a)


def test_partial_transpose_preserves_trace_exactly():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    assert np.trace(linalg.partial_transpose(a, 2, 3)) == np.trace(a)


def test_partial_transpose_bell_min_eigenvalue():
    # PT of the maximally entangled projector has eigenvalue -1/2.
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    proj = np.outer(psi, psi.conj())
    w = np.linalg.eigvalsh(linalg.partial_transpose(proj, 2, 2))
    np.testing.assert_allclose(w[0], -0.5, atol=1e-12)


def test_partial_transpose_shape_mismatch():
    with pytest.raises(ValueError, match="does not match dims"):
        linalg.partial_transpose(np.eye(5, dtype=complex), 2, 2)


def test_partial_trace_b_product_state():
    rho_a = np.array([[0.7, 0.1], [0.1, 0.3]], dtype=complex)
    rho_b = np.diag([0.2, 0.8]).astype(complex)
    out = linalg.partial_trace_b(np.kron(rho_a, rho_b), 2, 2)
    np.testing.assert_allclose(out, rho_a, atol=1e-12)


def test_partial_trace_b_demo_state():
    # (|00> + |11> + |12>)/sqrt(3) reduces to diag(1/3, 2/3) on the first factor.
    psi = np.zeros(6, dtype=complex)
    psi[0] = psi[4] = psi[5] = 1 / np.sqrt(3)
    proj = np.outer(psi, psi.conj())
    out = linalg.partial_trace_b(proj, 2, 3)
    np.testing.assert_allclose(out, np.diag([1 / 3, 2 / 3]), atol=1e-12)


def test_partial_trace_b_preserves_trace():
    rng = np.random.default_rng(5)
    a = random_hermitian(rng, 6)
    assert abs(np.trace(linalg.partial_trace_b(a, 2, 3)) - np.trace(a)) < 1e-12


def test_entropy_uniform_qubit():
    assert linalg.von_neumann_entropy(np.diag([0.5, 0.5]).astype(complex)) == pytest.approx(1.0)


def test_entropy_pure_state():
    assert linalg.von_neumann_entropy(np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.0, abs=1e-12)


def test_entropy_third_two_thirds():
    val = linalg.von_neumann_entropy(np.diag([1 / 3, 2 / 3]).astype(complex))
    assert val == pytest.approx(0.9182958340544896, abs=1e-12)
    assert round(val, 4) == 0.9183


def test_entropy_base_e():
    val = linalg.von_neumann_entropy(np.diag([0.5, 0.5]).astype(complex), base=np.e)
    assert val == pytest.approx(np.log(2), abs=1e-12)


def test_entropy_bounds():
    rng = np.random.default_rng(6)
    for _ in range(20):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        s = linalg.von_neumann_entropy(rho)
        assert -1e-10 <= s <= np.log2(4) + 1e-9


def test_relative_entropy_self_is_zero():
    rng = np.random.default_rng(8)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    assert abs(linalg.relative_entropy(rho, rho)) <= 1e-10


def test_relative_entropy_bell_vs_maximally_mixed():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    val = linalg.relative_entropy(rho, np.eye(4, dtype=complex) / 4)
    assert val == pytest.approx(2.0, abs=1e-10)


def test_relative_entropy_commuting_werner_pair():
    # Both operators are functions of the swap, so the value reduces to a
    # classical divergence between their spectra.
    f = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            f[i * 2 + j, j * 2 + i] = 1.0
    def w_state(alpha):
        return (np.eye(4) - alpha * f) / (4 - 2 * alpha)
    val = linalg.relative_entropy(w_state(0.9), w_state(0.5))
    assert val == pytest.approx(0.42536430216232046, abs=1e-10)


def test_relative_entropy_is_nonnegative():
    rng = np.random.default_rng(9)
    for _ in range(20):
        g1 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        g2 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        r1 = g1 @ g1.conj().T
        r1 /= np.trace(r1).real
        r2 = g2 @ g2.conj().T
        r2 /= np.trace(r2).real
        assert linalg.relative_entropy(r1, r2) >= -1e-10


def test_relative_entropy_support_violation_is_finite_and_warns():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.diag([0.0, 1.0]).astype(complex)
    with pytest.warns(RuntimeWarning, match="support violation"):
        val = linalg.relative_entropy(rho, sigma)
    assert np.isfinite(val)
    assert val > 10.0


def test_relative_entropy_rejects_trace_violation():
    with pytest.raises(ValueError, match="unit trace"):
        linalg.relative_entropy(
            np.eye(2, dtype=complex), np.eye(2, dtype=complex) / 2
        )


def test_relative_entropy_rejects_dim_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        linalg.relative_entropy(
            np.eye(2, dtype=complex) / 2, np.eye(3, dtype=complex) / 3
        )


def test_trace_inner_identity():
    assert linalg.trace_inner(np.eye(2, dtype=complex), np.eye(2, dtype=complex)) == pytest.approx(2.0)


def test_trace_inner_orthogonal_paulis():
    assert linalg.trace_inner(PAULI_X, PAULI_Z) == pytest.approx(0.0, abs=1e-14)


def test_trace_inner_symmetry_on_hermitian_inputs():
    rng = np.random.default_rng(10)
    for _ in range(20):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        assert abs(linalg.trace_inner(a, b) - linalg.trace_inner(b, a)) <= 1e-12
