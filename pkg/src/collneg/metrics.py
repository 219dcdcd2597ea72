"""Prediction-quality metrics: coefficient of determination, residual spread.

All quantities compare analytic negativities against model predictions:
R2 = 1 - SS_res/SS_tot, mu is the mean residual, tau the population
standard deviation of the residuals, and MSE the mean squared residual.
They satisfy tau^2 + mu^2 = MSE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Metrics", "ConstantLabelsError", "compute_metrics"]


class ConstantLabelsError(ValueError):
    """Raised when the actual values are constant (zero total sum of squares)."""


@dataclass(frozen=True)
class Metrics:
    r2: float
    tau: float
    mu: float
    mse: float
    n: int

    def as_line(self, **extra) -> str:
        """One-line key=value record, machine-readable."""
        fields = dict(extra)
        fields.update(r2=f"{self.r2:.6f}", tau=f"{self.tau:.6f}",
                      mu=f"{self.mu:.6f}", mse=f"{self.mse:.6f}", n=str(self.n))
        return " ".join(f"{k}={v}" for k, v in fields.items())


def compute_metrics(actual: np.ndarray, predicted: np.ndarray) -> Metrics:
    """Metrics for a pair of equal-length value arrays."""
    actual = np.asarray(actual, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if actual.size == 0 or actual.shape != predicted.shape:
        raise ValueError(
            f"need equal nonempty arrays, got {actual.shape} and {predicted.shape}"
        )
    res = actual - predicted
    ss_res = float(np.sum(res ** 2))
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantLabelsError("actual values are constant; R2 is undefined")
    mu = float(res.mean())
    tau = float(np.sqrt(np.mean((res - mu) ** 2)))
    mse = float(np.mean(res ** 2))
    return Metrics(r2=1.0 - ss_res / ss_tot, tau=tau, mu=mu, mse=mse, n=actual.size)
