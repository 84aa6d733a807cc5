"""Core linear algebra primitives: examples and randomized invariants."""

import numpy as np
import pytest

from qcorr.errors import DimensionMismatchError
from qcorr.linalg import (
    eig_hermitian,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    tensor_product,
    validate_density,
)
from qcorr.states import random_density, singlet


def test_tensor_product_identity():
    out = tensor_product(np.eye(2), np.eye(2))
    assert np.array_equal(out, np.eye(4))


def test_tensor_product_basis_projector_placement():
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    p1 = np.array([[0, 0], [0, 1]], dtype=complex)
    out = tensor_product(p0, p1)
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1] = 1.0
    assert np.array_equal(out, expected)


def test_tensor_product_all_ones():
    ones = np.ones((2, 2))
    assert np.array_equal(tensor_product(ones, ones), np.ones((4, 4)))


def test_tensor_product_rejects_nonfinite():
    bad = np.array([[np.nan, 0], [0, 1]])
    with pytest.raises(ValueError):
        tensor_product(bad, np.eye(2))


def test_partial_trace_singlet_marginal():
    psi = singlet()
    rho = np.outer(psi, psi.conj())
    for keep in ("a", "b"):
        marg = partial_trace(rho, 2, 2, keep)
        assert np.max(np.abs(marg - np.eye(2) / 2)) < 1e-15


def test_partial_trace_factorizes_products():
    rng = np.random.default_rng(10)
    for _ in range(100):
        da, db = rng.integers(2, 5), rng.integers(2, 5)
        rho_a = random_density(int(da), seed=rng.integers(2**32))
        rho_b = random_density(int(db), seed=rng.integers(2**32))
        prod = tensor_product(rho_a, rho_b)
        assert np.max(np.abs(partial_trace(prod, da, db, "a") - rho_a)) < 1e-12
        assert np.max(np.abs(partial_trace(prod, da, db, "b") - rho_b)) < 1e-12


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(11)
    for _ in range(100):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho = random_density(da * db, seed=rng.integers(2**32))
        out = partial_trace(rho, da, db, "b")
        assert abs(np.trace(out) - np.trace(rho)) < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4) / 4, 2, 3)


def test_partial_transpose_diagonal_invariant():
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    assert np.array_equal(partial_transpose(rho, 2, 2, "b"), rho)


def test_partial_transpose_singlet_min_eigenvalue():
    psi = singlet()
    rho = np.outer(psi, psi.conj())
    pt = partial_transpose(rho, 2, 2, "b")
    vals = np.linalg.eigvalsh(pt)
    assert abs(vals[0] - (-0.5)) < 1e-12


def test_partial_transpose_of_product_stays_psd():
    rho_a = random_density(2, seed=1)
    rho_b = random_density(3, seed=2)
    prod = tensor_product(rho_a, rho_b)
    pt = partial_transpose(prod, 2, 3, "b")
    assert np.max(np.abs(pt - tensor_product(rho_a, rho_b.T))) < 1e-14
    assert np.linalg.eigvalsh(pt)[0] > -1e-12


def test_partial_transpose_involution():
    rng = np.random.default_rng(12)
    for _ in range(100):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho = random_density(da * db, seed=rng.integers(2**32))
        for side in ("a", "b"):
            twice = partial_transpose(partial_transpose(rho, da, db, side), da, db, side)
            assert np.array_equal(twice, rho)


def test_eig_identity():
    spec = eig_hermitian(np.eye(5))
    assert np.allclose(spec.eigenvalues, 1.0)


def test_eig_werner_spectrum():
    # p = 0.5 depolarized singlet has eigenvalues (1+3p)/4 and (1-p)/4 x3
    from qcorr.states import werner

    spec = eig_hermitian(werner(0.5))
    assert np.allclose(spec.eigenvalues, [0.625, 0.125, 0.125, 0.125], atol=1e-12)


def test_eig_pauli_x():
    spec = eig_hermitian(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(spec.eigenvalues, [1.0, -1.0])


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eig_reconstruction_and_orthonormality():
    rng = np.random.default_rng(13)
    for _ in range(100):
        dim = int(rng.integers(2, 10))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        herm = 0.5 * (g + g.conj().T)
        spec = eig_hermitian(herm)
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        assert np.max(np.abs(rebuilt - herm)) < 1e-9
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        assert np.max(np.abs(gram - np.eye(dim))) < 1e-9
        assert (np.diff(spec.eigenvalues) <= 1e-12).all()


def test_eig_degenerate_tie_break_is_computational():
    spec = eig_hermitian(np.eye(2) / 2)
    assert np.allclose(spec.eigenvectors, np.eye(2))


def test_eig_deterministic():
    rho = random_density(6, seed=99)
    a = eig_hermitian(rho)
    b = eig_hermitian(rho.copy())
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_psd_sqrt_identity_and_diagonal():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(psd_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]))


def test_psd_sqrt_multiply_back():
    rng = np.random.default_rng(14)
    for _ in range(50):
        dim = int(rng.integers(2, 8))
        rho = random_density(dim, seed=rng.integers(2**32))
        root = psd_sqrt(rho)
        assert np.max(np.abs(root @ root - rho)) < 1e-8
        assert np.max(np.abs(root - root.conj().T)) < 1e-12


def test_psd_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_validate_density_pass_and_fail():
    assert validate_density(np.eye(2) / 2, tol=1e-10).ok
    bad_trace = validate_density(np.diag([0.6, 0.6]), tol=1e-10)
    assert not bad_trace.ok
    assert bad_trace.trace_defect > 0.1
    bad_psd = validate_density(np.diag([1.1, -0.1]), tol=1e-10)
    assert not bad_psd.ok
    assert bad_psd.min_eigenvalue < -0.05
