"""Dense autoencoder over adjacency rows, trained by plain gradient descent.

The network is symmetric around the bottleneck: layer sizes
(k, hidden, bottleneck, hidden, k), tanh on hidden layers, sigmoid on the
output layer.  Training is full-batch with exact backpropagation and no
momentum, so a (seed, data, config) triple reproduces bit-identical results
on the same platform.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, DivergenceError

CHECKPOINT_MAGIC = b"MGAE"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters; hidden/bottleneck fall back to size-derived defaults."""

    epochs: int = 500
    learning_rate: float = 0.1
    seed: int = 0
    bottleneck_dim: int | None = None
    hidden_dim: int | None = None

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be positive, got {self.epochs}")
        if not self.learning_rate >= 0.0:
            raise ConfigError(f"learning_rate must be nonnegative, got {self.learning_rate}")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise ConfigError(f"seed must fit an unsigned 64-bit integer, got {self.seed}")

    def resolve_dims(self, k: int) -> tuple[int, int]:
        """(hidden, bottleneck) for input width k: (128, 32) clamped to
        (ceil(k/4), ceil(k/16)) below k = 256."""
        hidden = self.hidden_dim if self.hidden_dim is not None else (128 if k >= 256 else math.ceil(k / 4))
        bottleneck = self.bottleneck_dim if self.bottleneck_dim is not None else (32 if k >= 256 else math.ceil(k / 16))
        if not 0 < bottleneck < hidden < k:
            raise ConfigError(
                f"need 0 < bottleneck ({bottleneck}) < hidden ({hidden}) < k ({k})"
            )
        return hidden, bottleneck


@dataclass(frozen=True)
class AutoencoderModel:
    """Layer parameters; weights[l] maps layer_dims[l] -> layer_dims[l+1]."""

    layer_dims: tuple[int, ...]
    weights: tuple[np.ndarray, ...] = field(repr=False)
    biases: tuple[np.ndarray, ...] = field(repr=False)
    activations: tuple[str, ...]

    def __post_init__(self) -> None:
        dims = self.layer_dims
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise ConfigError("one weight matrix and bias vector per layer required")
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (dims[l + 1], dims[l]) or b.shape != (dims[l + 1],):
                raise ConfigError(f"layer {l}: bad parameter shapes {W.shape}, {b.shape}")
            if not (np.isfinite(W).all() and np.isfinite(b).all()):
                raise ConfigError(f"layer {l}: non-finite parameters")

    @property
    def k(self) -> int:
        return self.layer_dims[0]

    @property
    def bottleneck_index(self) -> int:
        """Index of the layer whose output is the latent representation."""
        return (len(self.layer_dims) - 1) // 2 - 1


@dataclass(frozen=True)
class TrainTrace:
    """Pre-update mean loss per epoch; length equals the configured epochs."""

    losses: tuple[float, ...]


def init_model(k: int, cfg: TrainConfig) -> AutoencoderModel:
    """Glorot-uniform weights from a seeded PCG64 generator, zero biases."""
    if k < 2:
        raise ConfigError(f"input width must be at least 2, got {k}")
    hidden, bottleneck = cfg.resolve_dims(k)
    dims = (k, hidden, bottleneck, hidden, k)
    rng = np.random.default_rng(cfg.seed)
    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    activations = ("tanh",) * (len(dims) - 2) + ("sigmoid",)
    return AutoencoderModel(
        layer_dims=dims,
        weights=tuple(weights),
        biases=tuple(biases),
        activations=activations,
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _apply(act: str, z: np.ndarray) -> np.ndarray:
    if act == "tanh":
        return np.tanh(z)
    if act == "sigmoid":
        return _sigmoid(z)
    raise ConfigError(f"unknown activation {act!r}")


def _forward_batch(model: AutoencoderModel, X: np.ndarray) -> list[np.ndarray]:
    """All layer outputs for a batch; result[0] is X itself."""
    outputs = [X]
    a = X
    for W, b, act in zip(model.weights, model.biases, model.activations):
        a = _apply(act, a @ W.T + b)
        outputs.append(a)
    return outputs


def forward(model: AutoencoderModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run one k-vector through the network; returns (latent, reconstruction)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.k,):
        raise DataError(f"input shape {x.shape} does not match width {model.k}")
    if not np.isfinite(x).all():
        raise DataError("non-finite input vector")
    outputs = _forward_batch(model, x[np.newaxis, :])
    latent = outputs[model.bottleneck_index + 1][0]
    return latent, outputs[-1][0]


def mse_loss(x: np.ndarray, x_hat: np.ndarray) -> float:
    """(1/k) sum |x_j - x_hat_j|^2."""
    x = np.asarray(x, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x.shape != x_hat.shape:
        raise DataError(f"shape mismatch: {x.shape} vs {x_hat.shape}")
    diff = x - x_hat
    return float(np.mean(diff * diff))


def mean_loss(model: AutoencoderModel, rows: np.ndarray) -> float:
    """Mean over rows of the per-row reconstruction MSE."""
    X = _as_batch(model, rows)
    X_hat = _forward_batch(model, X)[-1]
    diff = X - X_hat
    return float(np.mean(diff * diff))


def _as_batch(model: AutoencoderModel, rows: np.ndarray) -> np.ndarray:
    X = np.asarray(rows, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.k:
        raise DataError(f"rows must be (n, {model.k}), got {X.shape}")
    if not np.isfinite(X).all():
        raise DataError("non-finite training rows")
    return X


def _gradients(
    model: AutoencoderModel, X: np.ndarray
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean loss and its exact gradients for one full batch."""
    outputs = _forward_batch(model, X)
    X_hat = outputs[-1]
    n, k = X.shape
    diff = X_hat - X
    loss = float(np.mean(diff * diff))

    grad_Ws: list[np.ndarray] = [np.empty(0)] * len(model.weights)
    grad_bs: list[np.ndarray] = [np.empty(0)] * len(model.biases)
    dA = 2.0 * diff / (n * k)
    for l in range(len(model.weights) - 1, -1, -1):
        A_out = outputs[l + 1]
        if model.activations[l] == "sigmoid":
            dZ = dA * A_out * (1.0 - A_out)
        else:
            dZ = dA * (1.0 - A_out * A_out)
        grad_Ws[l] = dZ.T @ outputs[l]
        grad_bs[l] = dZ.sum(axis=0)
        if l > 0:
            dA = dZ @ model.weights[l]
    return loss, grad_Ws, grad_bs


def train(
    model: AutoencoderModel, rows: np.ndarray, cfg: TrainConfig
) -> tuple[AutoencoderModel, TrainTrace]:
    """Full-batch gradient descent for cfg.epochs epochs at a fixed rate.

    The trace records the pre-update loss of each epoch.  The input model is
    left untouched; a trained copy is returned.  A non-finite loss raises
    DivergenceError naming the epoch.
    """
    X = _as_batch(model, rows)
    weights = [W.copy() for W in model.weights]
    biases = [b.copy() for b in model.biases]
    current = replace(model, weights=tuple(weights), biases=tuple(biases))
    losses: list[float] = []
    lr = cfg.learning_rate
    for epoch in range(cfg.epochs):
        loss, grad_Ws, grad_bs = _gradients(current, X)
        if not math.isfinite(loss):
            raise DivergenceError(f"non-finite loss at epoch {epoch}")
        losses.append(loss)
        for l in range(len(weights)):
            weights[l] -= lr * grad_Ws[l]
            biases[l] -= lr * grad_bs[l]
        current = replace(current, weights=tuple(weights), biases=tuple(biases))
    return current, TrainTrace(losses=tuple(losses))


def reconstruction_errors(model: AutoencoderModel, rows: np.ndarray) -> np.ndarray:
    """Per-row reconstruction MSE; one score per node when rows are adjacency rows."""
    X = _as_batch(model, rows)
    X_hat = _forward_batch(model, X)[-1]
    diff = X - X_hat
    return np.mean(diff * diff, axis=1)


def save_model(model: AutoencoderModel, path: str | Path) -> Path:
    """Write the flat binary checkpoint.

    Layout: magic 'MGAE' | u32 version | u32 dim count | u32 per dim |
    per layer, weights row-major then bias, all little-endian float64.
    Activations are implied by the layout (tanh hidden layers, sigmoid out).
    """
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", CHECKPOINT_VERSION))
        fh.write(struct.pack("<I", len(model.layer_dims)))
        fh.write(struct.pack(f"<{len(model.layer_dims)}I", *model.layer_dims))
        for W, b in zip(model.weights, model.biases):
            fh.write(np.ascontiguousarray(W, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return path


def load_model(path: str | Path) -> AutoencoderModel:
    """Read a checkpoint written by :func:`save_model`."""
    blob = Path(path).read_bytes()
    if blob[:4] != CHECKPOINT_MAGIC:
        raise DataError(f"{path}: bad magic bytes {blob[:4]!r}")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != CHECKPOINT_VERSION:
        raise DataError(f"{path}: unsupported checkpoint version {version}")
    (n_dims,) = struct.unpack_from("<I", blob, 8)
    dims = struct.unpack_from(f"<{n_dims}I", blob, 12)
    offset = 12 + 4 * n_dims
    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        n_w = fan_out * fan_in
        W = np.frombuffer(blob, dtype="<f8", count=n_w, offset=offset).reshape(fan_out, fan_in)
        offset += 8 * n_w
        b = np.frombuffer(blob, dtype="<f8", count=fan_out, offset=offset)
        offset += 8 * fan_out
        weights.append(W.astype(float))
        biases.append(b.astype(float))
    if offset != len(blob):
        raise DataError(f"{path}: trailing bytes in checkpoint")
    activations = ("tanh",) * (len(dims) - 2) + ("sigmoid",)
    return AutoencoderModel(
        layer_dims=tuple(dims),
        weights=tuple(weights),
        biases=tuple(biases),
        activations=activations,
    )
