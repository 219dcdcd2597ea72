"""Dense complex matrix algebra for small quantum systems (dim 2, 4, 16).

Everything operates on plain ``numpy.ndarray`` values with ``complex128``
entries; matrices are immutable by convention (callers must not mutate
returned arrays).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SIGMA_0",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SWAP",
    "DimensionMismatchError",
    "NonHermitianError",
    "matmul",
    "dagger",
    "trace",
    "kron",
    "partial_transpose",
    "hermitian_eigenvalues",
]

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Exchanges the two qubits of a 4-dimensional system.
SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=complex,
)

HERMITICITY_TOL = 1e-10


class DimensionMismatchError(ValueError):
    """Raised when operand shapes are incompatible."""


class NonHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not, beyond tolerance."""


def _as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b with an explicit shape check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(
            f"cannot multiply shapes {a.shape} and {b.shape}"
        )
    return a @ b


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def trace(a: np.ndarray) -> complex:
    """Sum of the diagonal."""
    return complex(np.trace(_as_square(a)))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; result dimension is dim(a) * dim(b)."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_transpose(rho: np.ndarray, subsystem: str = "A") -> np.ndarray:
    """Transpose the indices of one qubit of a two-qubit (4x4) matrix.

    ``subsystem`` selects which qubit is transposed ("A" = first, "B" =
    second).  Both choices yield the same eigenvalue spectrum for any
    density matrix.
    """
    rho = _as_square(rho, "rho")
    if rho.shape != (4, 4):
        raise DimensionMismatchError(
            f"partial transpose is defined for 4x4 matrices, got {rho.shape}"
        )
    if subsystem not in ("A", "B"):
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    r = rho.reshape(2, 2, 2, 2)
    # Index layout r[iA, iB, jA, jB]; transposing qubit A swaps iA <-> jA.
    if subsystem == "A":
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(r.reshape(4, 4))


def hermitian_eigenvalues(h: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    The input must be Hermitian to within ``tol`` in maximum entrywise
    deviation; it is then symmetrized as (h + h†)/2 before solving, which
    absorbs round-off accumulated by upstream constructions.
    """
    h = _as_square(h, "h")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > tol:
        raise NonHermitianError(
            f"matrix deviates from Hermiticity by {dev:.3e} (tolerance {tol:.1e})"
        )
    return np.linalg.eigvalsh((h + h.conj().T) / 2)
