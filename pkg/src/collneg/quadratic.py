"""Quadratic regression on collective probabilities.

The model is a dot product N_p = theta . x_expanded where the expansion of a
length-B probability vector is (1, x1..xB, x1^2, x1 x2, .., x1 xB, x2^2, ..,
xB^2) - constant, linear terms, then upper-triangular quadratic blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "QuadraticModel",
    "RankDeficientError",
    "theta_length",
    "expand_features",
    "fit",
    "predict",
    "predict_clipped",
    "save_model",
    "load_model",
]

RIDGE = 1e-10


class RankDeficientError(RuntimeError):
    """Design matrix is rank deficient beyond what ridge regularization rescues."""


def theta_length(b: int) -> int:
    """Parameter count 1 + B + B(B+1)/2 of the quadratic expansion."""
    return 1 + b + b * (b + 1) // 2


@dataclass(frozen=True)
class QuadraticModel:
    b: int
    theta: np.ndarray

    def __post_init__(self):
        if self.theta.shape != (theta_length(self.b),):
            raise ValueError(
                f"theta for b={self.b} must have length {theta_length(self.b)}, "
                f"got {self.theta.shape}"
            )


def expand_features(x: np.ndarray) -> np.ndarray:
    """Quadratic expansion of feature rows.

    Accepts a single vector (B,) or a matrix (n, B); returns (n, P) or (P,)
    with P = 1 + B + B(B+1)/2.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    n, b = x.shape
    cols = [np.ones((n, 1)), x]
    for i in range(b):
        cols.append(x[:, i:i + 1] * x[:, i:])
    out = np.hstack(cols)
    return out[0] if single else out


def fit(features: np.ndarray, labels: np.ndarray, b: int | None = None) -> QuadraticModel:
    """Least-squares fit of theta on (n, B) probability rows and negativity labels.

    Solves min ||X theta - y||^2 through a QR factorization of the expanded
    design matrix; falls back to ridge-regularized normal equations when the
    design is numerically rank deficient.
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float).ravel()
    if b is None:
        b = features.shape[1]
    if features.shape[1] != b:
        raise ValueError(f"feature rows have width {features.shape[1]}, expected {b}")
    p = theta_length(b)
    if features.shape[0] < 2 * p:
        raise ValueError(
            f"need at least {2 * p} training rows for b={b}, got {features.shape[0]}"
        )
    design = expand_features(features)
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diag(r))
    if diag.min() > diag.max() * np.finfo(float).eps * design.shape[0]:
        theta = np.linalg.solve(r, q.T @ labels)
    else:
        gram = design.T @ design
        gram[np.diag_indices_from(gram)] += RIDGE
        try:
            theta = np.linalg.solve(gram, design.T @ labels)
        except np.linalg.LinAlgError as exc:
            raise RankDeficientError(
                f"design matrix for b={b} is rank deficient beyond ridge rescue"
            ) from exc
        if not np.all(np.isfinite(theta)):
            raise RankDeficientError(
                f"design matrix for b={b} is rank deficient beyond ridge rescue"
            )
    return QuadraticModel(b=b, theta=theta)


def predict(model: QuadraticModel, x: np.ndarray) -> np.ndarray | float:
    """Raw (unclipped) model output; this is what the metrics consume."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.b:
        raise ValueError(f"feature width {x.shape[-1]} does not match model b={model.b}")
    return expand_features(x) @ model.theta


def predict_clipped(model: QuadraticModel, x: np.ndarray) -> np.ndarray | float:
    """End-user prediction clipped into the valid negativity range [0, 1]."""
    return np.clip(predict(model, x), 0.0, 1.0)


def save_model(model: QuadraticModel, path: str | Path) -> None:
    """Write a plain-text theta list: a `b=` header line then one value per line."""
    lines = [f"b={model.b}"]
    lines += [f"{v:.17g}" for v in model.theta]
    Path(path).write_text("\n".join(lines) + "\n")


def load_model(path: str | Path) -> QuadraticModel:
    """Read a plain-text theta list written by save_model (or a bundled reference)."""
    values: list[float] = []
    b: int | None = None
    for raw in Path(path).read_text().split("\n"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("b="):
            b = int(line[2:])
            continue
        values.extend(float(tok) for tok in line.replace(",", " ").split())
    theta = np.array(values)
    if b is None:
        # Infer B from the parameter count.
        for cand in range(1, 64):
            if theta_length(cand) == theta.size:
                b = cand
                break
        else:
            raise ValueError(f"{path}: cannot infer b from {theta.size} parameters")
    return QuadraticModel(b=b, theta=theta)
