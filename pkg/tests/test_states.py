"""Tests for state constructors, sampling, and the PPT test."""

import numpy as np
import pytest

from reebound import linalg, states


def test_density_matrix_validates_trace():
    with pytest.raises(ValueError, match="trace"):
        states.DensityMatrix(2, 2, np.eye(4, dtype=complex))


def test_density_matrix_validates_psd():
    mat = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="not PSD"):
        states.DensityMatrix(2, 2, mat)


def test_density_matrix_validates_shape():
    with pytest.raises(ValueError, match="does not match dims"):
        states.DensityMatrix(2, 3, np.eye(4, dtype=complex) / 4)


def test_product_ket_validates_norm():
    with pytest.raises(ValueError, match="unit norm"):
        states.ProductKet(np.array([1.0, 1.0], dtype=complex), np.array([1.0, 0.0], dtype=complex))


def test_product_ket_vec_is_kron():
    k = states.ProductKet(
        np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
    )
    np.testing.assert_array_equal(k.vec, [0, 1, 0, 0])


def test_as_density_matrix_renormalizes_near_unit_trace():
    mat = np.eye(4, dtype=complex) / 4 * (1 + 5e-9)
    rho = states.as_density_matrix(mat, dims=(2, 2))
    assert rho.mat.trace() == pytest.approx(1.0, abs=1e-15)


def test_as_density_matrix_rejects_bad_trace():
    with pytest.raises(ValueError, match="trace"):
        states.as_density_matrix(np.eye(4, dtype=complex) / 2, dims=(2, 2))


def test_as_density_matrix_requires_dims_for_arrays():
    with pytest.raises(ValueError, match="dims"):
        states.as_density_matrix(np.eye(4, dtype=complex) / 4)


def test_swap_operator_permutes_basis():
    f = states.swap_operator(2)
    # F|01> = |10>
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0
    out = f @ v
    np.testing.assert_array_equal(out, [0, 0, 1, 0])


def test_swap_operator_is_involution():
    f = states.swap_operator(3)
    np.testing.assert_array_equal(f @ f, np.eye(9))


def test_swap_operator_trace_is_d():
    assert states.swap_operator(3).trace() == pytest.approx(3.0)


def test_max_entangled_reduces_to_maximally_mixed():
    rho = states.max_entangled(3)
    reduced = linalg.partial_trace_b(rho.mat, 3, 3)
    np.testing.assert_allclose(reduced, np.eye(3) / 3, atol=1e-12)


def test_max_entangled_swap_expectation():
    rho = states.max_entangled(2)
    f = states.swap_operator(2)
    assert linalg.trace_inner(rho.mat, f) == pytest.approx(1.0, abs=1e-12)


def test_werner_alpha_zero_is_maximally_mixed():
    rho = states.werner(2, 0.0)
    np.testing.assert_allclose(rho.mat, np.eye(4) / 4, atol=1e-12)


def test_werner_swap_expectation():
    # Oracle: Tr(rho_W F) = (1 - alpha d) / (d - alpha).
    rho = states.werner(2, 0.8)
    f = states.swap_operator(2)
    assert linalg.trace_inner(rho.mat, f) == pytest.approx(-0.5, abs=1e-12)


def test_werner_rejects_invalid_alpha():
    with pytest.raises(ValueError, match="alpha"):
        states.werner(2, 1.2)


def test_werner_ppt_flips_at_threshold():
    eps = 1e-3
    assert states.is_ppt(states.werner(2, 0.5 - eps))
    assert not states.is_ppt(states.werner(2, 0.5 + eps))
    assert states.is_ppt(states.werner(3, 1 / 3 - eps))
    assert not states.is_ppt(states.werner(3, 1 / 3 + eps))


def test_isotropic_alpha_zero_is_maximally_mixed():
    rho = states.isotropic(3, 0.0)
    np.testing.assert_allclose(rho.mat, np.eye(9) / 9, atol=1e-12)


def test_isotropic_alpha_one_is_max_entangled():
    rho = states.isotropic(2, 1.0)
    np.testing.assert_allclose(rho.mat, states.max_entangled(2).mat, atol=1e-12)


def test_isotropic_rejects_invalid_alpha():
    with pytest.raises(ValueError, match="alpha"):
        states.isotropic(2, -0.5)


def test_isotropic_ppt_flips_at_threshold():
    eps = 1e-3
    assert states.is_ppt(states.isotropic(2, 1 / 3 - eps))
    assert not states.is_ppt(states.isotropic(2, 1 / 3 + eps))
    assert states.is_ppt(states.isotropic(3, 0.25 - eps))
    assert not states.is_ppt(states.isotropic(3, 0.25 + eps))


def test_tiles_kets_are_orthonormal_products():
    v = states._tiles_kets()
    np.testing.assert_allclose(v @ v.conj().T, np.eye(5), atol=1e-12)


def test_tiles_state_spectrum():
    w = np.linalg.eigvalsh(states.tiles_state().mat)
    np.testing.assert_allclose(w[:5], np.zeros(5), atol=1e-12)
    np.testing.assert_allclose(w[5:], np.full(4, 0.25), atol=1e-12)


def test_tiles_state_is_ppt():
    assert states.is_ppt(states.tiles_state())


def test_tiles_state_pt_min_eigenvalue():
    rho = states.tiles_state()
    pt = linalg.partial_transpose(rho.mat, 3, 3)
    assert np.linalg.eigvalsh(pt)[0] >= -1e-10


def test_tiles_family_endpoints():
    np.testing.assert_allclose(states.tiles_family(0.0).mat, np.eye(9) / 9, atol=1e-12)
    np.testing.assert_allclose(
        states.tiles_family(1.0).mat, states.tiles_state().mat, atol=1e-12
    )


def test_tiles_family_is_ppt_on_grid():
    for alpha in np.arange(0.0, 1.0 + 1e-9, 0.01):
        assert states.is_ppt(states.tiles_family(float(alpha)))


def test_random_density_trace_and_determinism():
    r1 = states.random_density(2, 3, seed=42)
    r2 = states.random_density(2, 3, seed=42)
    assert np.array_equal(r1.mat, r2.mat)
    assert abs(r1.mat.trace() - 1.0) <= 1e-12


def test_random_density_rank_control():
    rho = states.random_density(2, 2, rank=1, seed=1)
    w = np.linalg.eigvalsh(rho.mat)
    assert (w > 1e-10).sum() == 1


def test_random_density_rejects_bad_rank():
    with pytest.raises(ValueError, match="rank"):
        states.random_density(2, 2, rank=5)


def test_random_entangled_is_npt_and_deterministic():
    r1 = states.random_entangled(2, 2, seed=7)
    r2 = states.random_entangled(2, 2, seed=7)
    assert np.array_equal(r1.mat, r2.mat)
    assert not states.is_ppt(r1)


def test_random_entangled_acceptance_rate_2x2():
    # Full-rank draws are NPT often enough that rejection ends within a few
    # tries; measure the unconditional NPT rate over 100 seeds.
    hits = sum(
        not states.is_ppt(states.random_density(2, 2, seed=s)) for s in range(100)
    )
    assert hits >= 50, f"NPT rate {hits}/100 is too low for quick acceptance"


def test_random_product_ket_normalized_and_deterministic():
    k1 = states.random_product_ket(2, 3, seed=5)
    k2 = states.random_product_ket(2, 3, seed=5)
    assert np.array_equal(k1.vec, k2.vec)
    assert np.linalg.norm(k1.vec) == pytest.approx(1.0, abs=1e-12)


def test_random_product_ket_haar_moment():
    # |<0|a>|^2 averages to 1/dim_a over the Haar measure.
    n = 4000
    vals = [
        abs(states.random_product_ket(2, 2, seed=s).ket_a[0]) ** 2 for s in range(n)
    ]
    se = np.sqrt(1 / 12 / n)
    assert abs(np.mean(vals) - 0.5) <= 4 * se


def test_perturb_ket_zero_delta_is_bit_exact():
    k = states.random_product_ket(2, 3, seed=9)
    out = states.perturb_ket(k, 0.0, seed=123)
    assert out is k


def test_perturb_ket_preserves_norm():
    k = states.random_product_ket(3, 3, seed=11)
    out = states.perturb_ket(k, 0.3, seed=12)
    assert np.linalg.norm(out.ket_a) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(out.ket_b) == pytest.approx(1.0, abs=1e-12)


def test_perturb_ket_fidelity_shrinks_with_delta():
    k = states.random_product_ket(2, 2, seed=13)
    def mean_fid(delta):
        fids = []
        for s in range(100):
            out = states.perturb_ket(k, delta, seed=s)
            fids.append(abs(np.vdot(out.vec, k.vec)) ** 2)
        return np.mean(fids)
    f_small, f_mid, f_large = mean_fid(0.01), mean_fid(0.1), mean_fid(0.5)
    assert f_small > 0.99
    assert f_small > f_mid > f_large


def test_perturb_ket_rejects_negative_delta():
    k = states.random_product_ket(2, 2, seed=1)
    with pytest.raises(ValueError, match="delta"):
        states.perturb_ket(k, -0.1)


def test_is_ppt_bell_state_false():
    assert not states.is_ppt(states.max_entangled(2))


def test_is_ppt_product_state_true():
    k = states.random_product_ket(2, 2, seed=3)
    assert states.is_ppt(states.product_projector(k))


def test_product_projector_is_rank_one():
    k = states.random_product_ket(2, 3, seed=4)
    rho = states.product_projector(k)
    w = np.linalg.eigvalsh(rho.mat)
    assert w[-1] == pytest.approx(1.0, abs=1e-12)
    assert abs(rho.mat.trace() - 1.0) <= 1e-12
