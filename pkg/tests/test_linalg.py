import numpy as np
import pytest

from collneg import states
from collneg.linalg import (
    SIGMA_0,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionMismatchError,
    NonHermitianError,
    dagger,
    hermitian_eigenvalues,
    kron,
    matmul,
    partial_transpose,
    trace,
)

from conftest import random_hermitian
from oracles import charpoly_eigenvalues_4x4


def test_pauli_involution():
    assert np.array_equal(matmul(SIGMA_X, SIGMA_X), SIGMA_0)


def test_dagger_hermitian_pauli():
    assert np.array_equal(dagger(SIGMA_Y), SIGMA_Y)


def test_trace_sigma_z():
    assert trace(SIGMA_Z) == 0


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        matmul(SIGMA_X, np.eye(3))


def test_kron_identities():
    assert np.array_equal(kron(SIGMA_0, SIGMA_0), np.eye(4))
    assert np.array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1.0, -1.0, -1.0, 1.0]))


def test_kron_dimension_chain():
    out = kron(kron(np.eye(2), np.eye(4)), np.eye(2))
    assert out.shape == (16, 16)


def test_kron_associative_and_trace_multiplicative(rng):
    for _ in range(20):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)
        assert abs(trace(kron(a, b)) - trace(a) * trace(b)) < 1e-12


def test_partial_transpose_diagonal_invariant():
    d = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    assert np.array_equal(partial_transpose(d, "A"), d)


def test_partial_transpose_involution(rng):
    h = random_hermitian(rng)
    for sub in ("A", "B"):
        assert np.array_equal(partial_transpose(partial_transpose(h, sub), sub), h)


def test_partial_transpose_singlet_spectrum():
    rho = np.outer(states.SINGLET, states.SINGLET.conj())
    eigs = hermitian_eigenvalues(partial_transpose(rho, "A"))
    assert np.allclose(eigs, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_preserves_trace_and_hermiticity(rng):
    h = random_hermitian(rng)
    pt = partial_transpose(h, "B")
    assert abs(trace(pt) - trace(h)) < 1e-14
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-14


def test_partial_transpose_subsystems_share_spectrum():
    # Full transpose preserves eigenvalues, so PT over A and over B agree.
    rhos = states.sample_states(2024, 0, 1000)
    for rho in rhos:
        ea = hermitian_eigenvalues(partial_transpose(rho, "A"))
        eb = hermitian_eigenvalues(partial_transpose(rho, "B"))
        assert np.max(np.abs(ea - eb)) < 1e-10


def test_partial_transpose_wrong_dimension():
    with pytest.raises(DimensionMismatchError):
        partial_transpose(np.eye(2), "A")
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4), "C")


def test_hermitian_eigenvalues_identity_and_pauli():
    assert np.allclose(hermitian_eigenvalues(np.eye(4)), [1, 1, 1, 1])
    assert np.allclose(hermitian_eigenvalues(SIGMA_Z), [-1, 1])


def test_hermitian_eigenvalues_werner_pt():
    # Analytic PT spectrum of the p=2/3 Werner state: {(1-3p)/4, (1+p)/4 x3},
    # i.e. {-1/4, 5/12 x3}; the values sum to the unit trace.
    pt = partial_transpose(states.werner_state(2 / 3), "A")
    eigs = hermitian_eigenvalues(pt)
    assert np.allclose(eigs, [-1 / 4, 5 / 12, 5 / 12, 5 / 12], atol=1e-12)


def test_hermitian_eigenvalues_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eigenvalue_sum_matches_trace(rng):
    for _ in range(50):
        h = random_hermitian(rng)
        assert abs(hermitian_eigenvalues(h).sum() - trace(h).real) < 1e-10


def test_eigenvalues_match_charpoly_oracle(rng):
    for _ in range(1000):
        h = random_hermitian(rng)
        got = hermitian_eigenvalues(h)
        want = charpoly_eigenvalues_4x4(h)
        assert np.max(np.abs(got - want)) < 1e-9
