"""Tetrahedral projectors, the singlet projection, and collective probabilities.

A collective measurement projects one qubit of each state copy locally
(tetrahedral set) and the remaining pair onto the singlet Bell state.  The
observable quantity is the conditional success probability

    P_xy = Tr[rho4 (Pi_x ⊗ Pi_Bell ⊗ Pi_y)] / Tr[rho4 (Pi_x ⊗ I4 ⊗ Pi_y)]

with the three slots acting on qubit positions (1; 2,3; 4) of the two-copy
state.  Probabilities are symmetric under swapping the local projections,
leaving 10 independent configurations from 4 local projectors.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .linalg import SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z
from .states import SINGLET, build_rho4

__all__ = [
    "CONFIGS",
    "FEATURE_NAMES",
    "DENOMINATOR_TOL",
    "VanishingDenominatorError",
    "tetrahedral_projectors",
    "bell_projector",
    "config_operators",
    "collective_probability",
    "all_probabilities",
    "probabilities_batch",
    "feature_vector",
]

# Measurement configurations (x, y) in the canonical feature order: the four
# diagonal pairs first, then off-diagonal pairs appended one per feature
# count from 5 up to 10.  This ordering is a persistence contract.
CONFIGS = ((1, 1), (2, 2), (3, 3), (4, 4), (1, 3), (2, 4), (1, 4), (1, 2), (2, 3), (3, 4))

FEATURE_NAMES = tuple(f"p{x}{y}" for x, y in CONFIGS)

# Below this value the conditioning probability is treated as vanishing (the
# state is orthogonal to both local projections) and P_xy is undefined.
DENOMINATOR_TOL = 1e-12

_SIGNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))


class VanishingDenominatorError(ValueError):
    """Conditioning probability of a configuration is numerically zero."""

    def __init__(self, config, value):
        self.config = tuple(config)
        self.value = float(value)
        x, y = self.config
        super().__init__(
            f"conditioning probability for configuration ({x},{y}) is "
            f"{value:.3e}; the state is orthogonal to both local projections"
        )


def tetrahedral_projectors() -> np.ndarray:
    """The four sub-normalized tetrahedral projection operators, shape (4,2,2).

    Element k is (sigma_0 + n_k . sigma / sqrt(3)) / 4 where the Bloch
    vectors n_k are the vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)
    of a regular tetrahedron.  Each has trace 1/2 and the four sum to the
    identity.
    """
    out = np.empty((4, 2, 2), dtype=complex)
    for k, (sx, sy, sz) in enumerate(_SIGNS):
        out[k] = (SIGMA_0 + (sx * SIGMA_X + sy * SIGMA_Y + sz * SIGMA_Z) / np.sqrt(3)) / 4
    return out


def bell_projector() -> np.ndarray:
    """Rank-one projector onto the singlet state, shape (4,4)."""
    return np.outer(SINGLET, SINGLET.conj())


def config_operators(px: np.ndarray, py: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator 16x16 operators for local projectors px, py."""
    num = np.kron(px, np.kron(bell_projector(), py))
    den = np.kron(px, np.kron(np.eye(4, dtype=complex), py))
    return num, den


@lru_cache(maxsize=1)
def _operator_table() -> tuple[np.ndarray, np.ndarray]:
    """Stacked numerator/denominator operators for all 10 configs, (10,16,16) each."""
    proj = tetrahedral_projectors()
    nums = np.empty((10, 16, 16), dtype=complex)
    dens = np.empty((10, 16, 16), dtype=complex)
    for i, (x, y) in enumerate(CONFIGS):
        nums[i], dens[i] = config_operators(proj[x - 1], proj[y - 1])
    return nums, dens


@lru_cache(maxsize=1)
def _operator_vectors() -> np.ndarray:
    """All 20 operators vectorized for trace-by-dot evaluation, shape (20,256)."""
    nums, dens = _operator_table()
    ops = np.concatenate([nums, dens])
    return ops.transpose(0, 2, 1).reshape(20, 256)  # row m = vec(M_m^T)


def probabilities_batch(rho4s: np.ndarray) -> np.ndarray:
    """All 10 collective probabilities for a batch of (n,16,16) two-copy states."""
    parts = rho4s.reshape(-1, 256) @ _operator_vectors().T
    nums = parts[:, :10].real
    dens = parts[:, 10:].real
    if np.any(dens <= DENOMINATOR_TOL):
        n_idx, c_idx = np.argwhere(dens <= DENOMINATOR_TOL)[0]
        raise VanishingDenominatorError(CONFIGS[c_idx], dens[n_idx, c_idx])
    return nums / dens


def all_probabilities(rho4: np.ndarray) -> np.ndarray:
    """All 10 collective probabilities of one two-copy state, in CONFIGS order."""
    return probabilities_batch(rho4[None, :, :])[0]


def collective_probability(rho4: np.ndarray, config: tuple[int, int]) -> float:
    """P_xy for one configuration; accepts either (x, y) or (y, x)."""
    x, y = config
    pair = (x, y) if (x, y) in CONFIGS else (y, x)
    if pair not in CONFIGS:
        raise ValueError(f"unknown configuration {config!r}")
    nums, dens = _operator_table()
    i = CONFIGS.index(pair)
    num = np.einsum("ij,ji->", rho4, nums[i]).real
    den = np.einsum("ij,ji->", rho4, dens[i]).real
    if den <= DENOMINATOR_TOL:
        raise VanishingDenominatorError(pair, den)
    return float(num / den)


def feature_vector(rho: np.ndarray, b: int) -> np.ndarray:
    """The first ``b`` collective probabilities of a state, b in 5..10.

    feature_vector(rho, b) is a strict prefix of feature_vector(rho, b+1).
    """
    if not 5 <= b <= 10:
        raise ValueError(f"b must be in 5..10, got {b}")
    return all_probabilities(build_rho4(rho))[:b]
