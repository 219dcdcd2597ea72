"""Random two-qubit density matrices, exact negativity, and the two-copy state.

Sampling follows a two-stage recipe: a random diagonal spectrum followed by
conjugation with a random 4x4 unitary assembled from six 2x2 blocks.  Every
state is a pure function of a seedable random stream, and bulk generation
keys a private substream to each state index so that serial and parallel
generation produce identical results.
"""

from __future__ import annotations

import numpy as np

from .linalg import SWAP, hermitian_eigenvalues, partial_transpose

__all__ = [
    "SINGLET",
    "state_stream",
    "sample_spectrum",
    "sample_unitary",
    "random_state",
    "negativity",
    "build_rho4",
    "werner_state",
    "sample_states",
    "negativity_batch",
    "rho4_batch",
]

# Singlet Bell state (|01> - |10>)/sqrt(2) in the computational basis.
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)

# Uniform draws consumed per state: 4 spectrum values, then (xi, alpha,
# psi, chi) for each of the 6 unitary blocks.  This layout is a stable
# contract; changing it would silently change every seeded dataset.
DRAWS_PER_STATE = 28

# 0-based row/column offsets of the 2x2 block embedded by each of the six
# unitary factors, in product order (leftmost factor first).
_BLOCK_OFFSETS = (2, 1, 0, 2, 1, 2)


def state_stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent random stream for state number ``index`` under a master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=[int(master_seed), int(index)]))


def sample_spectrum(rng: np.random.Generator) -> np.ndarray:
    """Draw a random diagonal 4x4 density matrix.

    rho11 = r1, rho22 = r2(1 - rho11), rho33 = r3(1 - rho11 - rho22) with
    r_n uniform on [0, 1]; the last diagonal entry closes the trace to one.
    A fourth r is still drawn (and discarded) to keep the stream layout
    stable.
    """
    r = rng.random(4)
    return _spectrum_from_draws(r[None, :])[0]


def sample_unitary(rng: np.random.Generator) -> np.ndarray:
    """Draw a random 4x4 unitary as a product of six block-embedded 2x2 unitaries.

    Each block is e^{i alpha} [[e^{i psi} cos phi, e^{i chi} sin phi],
    [-e^{-i chi} sin phi, e^{-i psi} cos phi]] with phi = arcsin(sqrt(xi)),
    xi uniform on [0, 1] and alpha, psi, chi uniform on [0, 2 pi).
    """
    blocks = rng.random((6, 4))
    return _unitary_from_draws(blocks[None, :, :])[0]


def random_state(rng: np.random.Generator) -> np.ndarray:
    """Draw a random two-qubit density matrix rho = U rho_diag U†."""
    rho_i = sample_spectrum(rng)
    u = sample_unitary(rng)
    return u @ rho_i @ u.conj().T


def negativity(rho: np.ndarray) -> float:
    """Entanglement negativity max(0, -2 min eig) of the partial transpose.

    Zero for separable states, 1 for maximally entangled two-qubit states.
    """
    eigs = hermitian_eigenvalues(partial_transpose(rho, "A"))
    return max(0.0, -2.0 * float(eigs[0]))


def build_rho4(rho: np.ndarray) -> np.ndarray:
    """Two-copy 16x16 state rho ⊗ (SWAP rho SWAP†).

    Qubit order is (copy-1 qubit 1, copy-1 qubit 2, copy-2 qubit 2,
    copy-2 qubit 1): positions 2 and 3 carry the nonlocally projected pair,
    positions 1 and 4 the locally projected qubits.
    """
    return np.kron(rho, SWAP @ rho @ SWAP.conj().T)


def werner_state(p: float) -> np.ndarray:
    """Werner state p |Psi-><Psi-| + (1-p) I/4; negativity max(0, (3p-1)/2)."""
    return p * np.outer(SINGLET, SINGLET.conj()) + (1.0 - p) * np.eye(4, dtype=complex) / 4.0


# ---------------------------------------------------------------------------
# Vectorized kernels.  The scalar API above delegates to these with a batch
# of one so that both paths evaluate the exact same arithmetic.

def _spectrum_from_draws(r: np.ndarray) -> np.ndarray:
    """Diagonal density matrices (n,4,4) from uniform draws (n,4)."""
    d = np.zeros((r.shape[0], 4))
    d[:, 0] = r[:, 0]
    d[:, 1] = r[:, 1] * (1.0 - d[:, 0])
    d[:, 2] = r[:, 2] * (1.0 - d[:, 0] - d[:, 1])
    d[:, 3] = 1.0 - d[:, 0] - d[:, 1] - d[:, 2]
    out = np.zeros((r.shape[0], 4, 4), dtype=complex)
    idx = np.arange(4)
    out[:, idx, idx] = d
    return out


def _unitary_from_draws(blocks: np.ndarray) -> np.ndarray:
    """Random unitaries (n,4,4) from uniform draws (n,6,4).

    blocks[:, j] = (xi, alpha, psi, chi) for factor j.
    """
    n = blocks.shape[0]
    phi = np.arcsin(np.sqrt(blocks[:, :, 0]))
    alpha = 2.0 * np.pi * blocks[:, :, 1]
    psi = 2.0 * np.pi * blocks[:, :, 2]
    chi = 2.0 * np.pi * blocks[:, :, 3]

    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    phase = np.exp(1j * alpha)
    u2 = np.empty((n, 6, 2, 2), dtype=complex)
    u2[:, :, 0, 0] = phase * np.exp(1j * psi) * cos_phi
    u2[:, :, 0, 1] = phase * np.exp(1j * chi) * sin_phi
    u2[:, :, 1, 0] = -phase * np.exp(-1j * chi) * sin_phi
    u2[:, :, 1, 1] = phase * np.exp(-1j * psi) * cos_phi

    u = None
    for j, off in enumerate(_BLOCK_OFFSETS):
        factor = np.broadcast_to(np.eye(4, dtype=complex), (n, 4, 4)).copy()
        factor[:, off:off + 2, off:off + 2] = u2[:, j]
        u = factor if u is None else u @ factor
    return u


def _states_from_draws(draws: np.ndarray) -> np.ndarray:
    """Density matrices (n,4,4) from raw uniform draws (n, DRAWS_PER_STATE)."""
    rho_i = _spectrum_from_draws(draws[:, :4])
    u = _unitary_from_draws(draws[:, 4:].reshape(-1, 6, 4))
    return u @ rho_i @ u.conj().transpose(0, 2, 1)


def sample_states(master_seed: int, start: int, count: int) -> np.ndarray:
    """Batch of ``count`` random states for indices start..start+count-1.

    Each state is drawn from its own index-keyed substream, so any chunking
    of the index range reproduces the same states.
    """
    draws = np.empty((count, DRAWS_PER_STATE))
    for k in range(count):
        draws[k] = state_stream(master_seed, start + k).random(DRAWS_PER_STATE)
    return _states_from_draws(draws)


def negativity_batch(rhos: np.ndarray) -> np.ndarray:
    """Negativity of each state in a (n,4,4) batch."""
    r = rhos.reshape(-1, 2, 2, 2, 2).transpose(0, 3, 2, 1, 4).reshape(-1, 4, 4)
    pt = (r + r.conj().transpose(0, 2, 1)) / 2
    eigs = np.linalg.eigvalsh(pt)
    return np.maximum(0.0, -2.0 * eigs[:, 0])


def rho4_batch(rhos: np.ndarray) -> np.ndarray:
    """Two-copy 16x16 states for a (n,4,4) batch."""
    swapped = SWAP @ rhos @ SWAP.conj().T
    n = rhos.shape[0]
    return np.einsum("nab,ncd->nacbd", rhos, swapped).reshape(n, 16, 16)
