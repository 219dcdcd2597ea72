"""Bundled reference coefficient vectors for the quadratic model, B = 5..10.

These are externally published fits shipped for comparison runs; how their
features were preprocessed is not documented, so evaluations against them
are reported rather than asserted.
"""

from __future__ import annotations

from importlib import resources

from .quadratic import QuadraticModel, load_model

__all__ = ["reference_model"]


def reference_model(b: int) -> QuadraticModel:
    """Load the bundled reference quadratic model for ``b`` features."""
    if not 5 <= b <= 10:
        raise ValueError(f"reference models exist for b in 5..10, got {b}")
    path = resources.files("collneg.data").joinpath(f"theta_b{b:02d}.txt")
    with resources.as_file(path) as concrete:
        return load_model(concrete)
