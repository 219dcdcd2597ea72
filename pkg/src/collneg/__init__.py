"""Simulation of two-copy collective measurements on random two-qubit states
and machine-learning models predicting the entanglement negativity from the
measured probabilities."""

from .datasets import Dataset, generate, load, save, split
from .measurement import CONFIGS, all_probabilities, feature_vector
from .metrics import Metrics, compute_metrics
from .states import build_rho4, negativity, random_state, state_stream, werner_state

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "generate",
    "load",
    "save",
    "split",
    "CONFIGS",
    "all_probabilities",
    "feature_vector",
    "Metrics",
    "compute_metrics",
    "build_rho4",
    "negativity",
    "random_state",
    "state_stream",
    "werner_state",
    "__version__",
]
