"""From-scratch multilayer perceptron trained with Adam.

Architecture: affine -> ReLU -> affine -> ReLU -> affine -> SoftPlus.  The
network is trained on squared negativities (it learns the squared target
more easily), so the forward pass outputs a prediction of N^2 and
``predict_negativity`` takes the square root.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "MlpModel",
    "TrainConfig",
    "TrainingDivergedError",
    "relu",
    "softplus",
    "init_model",
    "forward",
    "loss_and_grads",
    "train",
    "predict_negativity",
    "save_model",
    "load_model",
]

_MAGIC = b"CMLP"
_VERSION = 1


class TrainingDivergedError(RuntimeError):
    """Loss became non-finite during training."""

    def __init__(self, epoch: int, batch: int, loss: float):
        self.epoch = epoch
        self.batch = batch
        super().__init__(
            f"training loss became {loss!r} at epoch {epoch}, batch {batch}"
        )


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 256
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    hidden: tuple[int, int] = (256, 128)
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or self.learning_rate <= 0:
            raise ValueError("epochs, batch size and learning rate must be positive")


@dataclass
class MlpModel:
    layer_dims: tuple[int, ...]
    weights: list[np.ndarray] = field(repr=False)
    biases: list[np.ndarray] = field(repr=False)

    @property
    def b(self) -> int:
        return self.layer_dims[0]


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softplus(x: np.ndarray) -> np.ndarray:
    """ln(1 + e^x), evaluated stably for large |x|."""
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Derivative of softplus; exp(-softplus(-x)) avoids overflow on both tails.
    return np.exp(-np.logaddexp(0.0, -x))


def init_model(b: int, hidden: tuple[int, int], rng: np.random.Generator) -> MlpModel:
    """He-uniform init for the ReLU layers, Glorot-uniform for the output layer."""
    dims = (b, hidden[0], hidden[1], 1)
    weights, biases = [], []
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        if i < 2:
            limit = np.sqrt(6.0 / fan_in)
        else:
            limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(layer_dims=dims, weights=weights, biases=biases)


def _forward_cached(model: MlpModel, x: np.ndarray):
    w1, w2, w3 = model.weights
    b1, b2, b3 = model.biases
    z1 = x @ w1 + b1
    a1 = relu(z1)
    z2 = a1 @ w2 + b2
    a2 = relu(z2)
    z3 = a2 @ w3 + b3
    out = softplus(z3)[:, 0]
    return z1, a1, z2, a2, z3, out


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray | float:
    """Network output (predicted squared negativity, always positive).

    Accepts a single feature vector (B,) or a batch (n, B).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if x.shape[-1] != model.layer_dims[0]:
        raise ValueError(
            f"input width {x.shape[-1]} does not match model input dim {model.layer_dims[0]}"
        )
    out = _forward_cached(model, x[None, :] if single else x)[-1]
    return float(out[0]) if single else out


def loss_and_grads(model: MlpModel, x: np.ndarray, y: np.ndarray):
    """Mean squared error against squared-negativity labels plus its gradients.

    Returns (loss, [dW1, dW2, dW3], [db1, db2, db3]).
    """
    m = x.shape[0]
    w2, w3 = model.weights[1], model.weights[2]
    z1, a1, z2, a2, z3, out = _forward_cached(model, x)
    err = out - y
    loss = float(np.mean(err ** 2))

    dz3 = (2.0 / m) * err[:, None] * _sigmoid(z3)
    dw3 = a2.T @ dz3
    db3 = dz3.sum(axis=0)
    da2 = dz3 @ w3.T
    dz2 = da2 * (z2 > 0)
    dw2 = a1.T @ dz2
    db2 = dz2.sum(axis=0)
    da1 = dz2 @ w2.T
    dz1 = da1 * (z1 > 0)
    dw1 = x.T @ dz1
    db1 = dz1.sum(axis=0)
    return loss, [dw1, dw2, dw3], [db1, db2, db3]


def train(
    features: np.ndarray,
    labels_sq: np.ndarray,
    cfg: TrainConfig,
) -> tuple[MlpModel, np.ndarray]:
    """Minibatch Adam over shuffled epochs.

    ``labels_sq`` must contain squared negativities.  Returns the trained
    model and the per-epoch mean training loss history.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels_sq, dtype=float).ravel()
    if x.ndim != 2 or x.shape[0] == 0 or x.shape[0] != y.size:
        raise ValueError(f"bad training set shapes {x.shape} / {y.shape}")

    rng = np.random.default_rng(cfg.seed)
    model = init_model(x.shape[1], cfg.hidden, rng)
    params = model.weights + model.biases
    m_state = [np.zeros_like(p) for p in params]
    v_state = [np.zeros_like(p) for p in params]
    t = 0

    history = np.empty(cfg.epochs)
    for epoch in range(cfg.epochs):
        order = rng.permutation(x.shape[0])
        epoch_loss = 0.0
        n_batches = 0
        for batch, start in enumerate(range(0, x.shape[0], cfg.batch_size)):
            idx = order[start:start + cfg.batch_size]
            loss, d_w, d_b = loss_and_grads(model, x[idx], y[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, batch, loss)
            epoch_loss += loss
            n_batches += 1
            t += 1
            scale = cfg.learning_rate * np.sqrt(1.0 - cfg.beta2 ** t) / (1.0 - cfg.beta1 ** t)
            for p, g, ms, vs in zip(params, d_w + d_b, m_state, v_state):
                ms *= cfg.beta1
                ms += (1.0 - cfg.beta1) * g
                vs *= cfg.beta2
                vs += (1.0 - cfg.beta2) * g * g
                p -= scale * ms / (np.sqrt(vs) + cfg.eps)
        history[epoch] = epoch_loss / n_batches
    return model, history


def predict_negativity(model: MlpModel, x: np.ndarray) -> np.ndarray | float:
    """Predicted negativity min(1, sqrt(forward)), in [0, 1]."""
    out = forward(model, x)
    return np.minimum(1.0, np.sqrt(out)) if isinstance(out, np.ndarray) else min(1.0, float(np.sqrt(out)))


def save_model(model: MlpModel, path: str | Path) -> None:
    """Self-describing binary: magic, version, layer dims, little-endian f64 params."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(model.layer_dims)))
        fh.write(struct.pack(f"<{len(model.layer_dims)}I", *model.layer_dims))
        for w, b in zip(model.weights, model.biases):
            fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def load_model(path: str | Path) -> MlpModel:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise ValueError(f"{path}: not a serialized MLP model")
    version, n_dims = struct.unpack_from("<II", data, 4)
    if version != _VERSION:
        raise ValueError(f"{path}: unsupported model version {version}")
    dims = struct.unpack_from(f"<{n_dims}I", data, 12)
    offset = 12 + 4 * n_dims
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        w = np.frombuffer(data, dtype="<f8", count=fan_in * fan_out, offset=offset)
        offset += 8 * fan_in * fan_out
        b = np.frombuffer(data, dtype="<f8", count=fan_out, offset=offset)
        offset += 8 * fan_out
        weights.append(w.reshape(fan_in, fan_out).astype(float))
        biases.append(b.astype(float))
    if offset != len(data):
        raise ValueError(f"{path}: trailing or missing parameter bytes")
    return MlpModel(layer_dims=tuple(dims), weights=weights, biases=biases)
