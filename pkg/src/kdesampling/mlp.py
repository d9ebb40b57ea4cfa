"""Feed-forward binary classifiers in numpy: ReLU hidden layers, a sigmoid
output unit, mean binary cross-entropy and RMSprop."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .dataset import Dataset

PROB_CLIP = 1e-7
MODEL_FORMAT = "kdesampling-mlp"
MODEL_FORMAT_VERSION = 1


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(f"training diverged (loss {loss}) at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass(frozen=True)
class MlpArchitecture:
    name: str
    hidden_layers: tuple[int, ...]

    def __post_init__(self):
        if not self.hidden_layers or any(w < 1 for w in self.hidden_layers):
            raise ValueError(f"{self.name}: need at least one hidden layer of width >= 1")


ARCHITECTURES = {
    "MLP-1": MlpArchitecture("MLP-1", (64,)),
    "MLP-2": MlpArchitecture("MLP-2", (32, 8)),
    "MLP-3": MlpArchitecture("MLP-3", (64, 32, 4)),
}


def get_architecture(name: str) -> MlpArchitecture:
    try:
        return ARCHITECTURES[name]
    except KeyError:
        raise ValueError(f"unknown architecture {name!r}; choose from {sorted(ARCHITECTURES)}") from None


@dataclass(frozen=True)
class MlpModel:
    weights: tuple[np.ndarray, ...]  # weights[l] has shape (fan_in, fan_out)
    biases: tuple[np.ndarray, ...]
    architecture: MlpArchitecture

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    def params(self) -> tuple[np.ndarray, ...]:
        return self.weights + self.biases

    def with_params(self, params) -> "MlpModel":
        k = len(self.weights)
        return MlpModel(tuple(params[:k]), tuple(params[k:]), self.architecture)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 0.001
    rmsprop_decay: float = 0.9
    rmsprop_epsilon: float = 1e-7
    shuffle_each_epoch: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not 0 < self.rmsprop_decay < 1:
            raise ValueError(f"rmsprop_decay must lie in (0, 1), got {self.rmsprop_decay}")
        if not self.rmsprop_epsilon > 0:
            raise ValueError("rmsprop_epsilon must be > 0")


@dataclass(frozen=True)
class RmspropState:
    accumulators: tuple[np.ndarray, ...] = field(default=())

    @classmethod
    def zeros_like(cls, model: MlpModel) -> "RmspropState":
        return cls(tuple(np.zeros_like(p) for p in model.params()))


def init(architecture: MlpArchitecture, input_dim: int, rng: np.random.Generator) -> MlpModel:
    """Glorot-uniform weights, zero biases."""
    if input_dim < 1:
        raise ValueError(f"input_dim must be >= 1, got {input_dim}")
    widths = (input_dim, *architecture.hidden_layers, 1)
    weights, biases = [], []
    for fan_in, fan_out in zip(widths, widths[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(tuple(weights), tuple(biases), architecture)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward_cache(model: MlpModel, x: np.ndarray):
    activations = [x]
    pre = []
    a = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        pre.append(z)
        a = _sigmoid(z) if i == last else np.maximum(z, 0.0)
        activations.append(a)
    return pre, activations


def _check_input(model: MlpModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != model.input_dim:
        raise ValueError(f"input has {x.shape[1]} columns, model expects {model.input_dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains NaN or infinity")
    return x


def forward(model: MlpModel, x) -> np.ndarray:
    """Class-1 probabilities, clipped to [1e-7, 1 - 1e-7]."""
    _, acts = _forward_cache(model, _check_input(model, x))
    return np.clip(acts[-1][:, 0], PROB_CLIP, 1.0 - PROB_CLIP)


def bce_loss(probabilities, labels) -> float:
    p = np.clip(np.asarray(probabilities, dtype=np.float64), PROB_CLIP, 1.0 - PROB_CLIP)
    y = np.asarray(labels, dtype=np.float64)
    if p.shape != y.shape:
        raise ValueError(f"shape mismatch: {p.shape} probabilities vs {y.shape} labels")
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def mean_loss(model: MlpModel, x, y) -> float:
    _, acts = _forward_cache(model, _check_input(model, x))
    return bce_loss(acts[-1][:, 0], np.asarray(y, dtype=np.float64).reshape(-1))


def loss_and_gradients(model: MlpModel, x, y) -> tuple[float, tuple[np.ndarray, ...]]:
    """Mean BCE and its gradients, ordered like ``model.params()``.

    The output delta uses the unclipped sigmoid (p - y); ReLU'(0) is taken as 0.
    """
    x = _check_input(model, x)
    y = np.asarray(y, dtype=np.float64).reshape(-1, 1)
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    pre, acts = _forward_cache(model, x)
    loss = bce_loss(acts[-1][:, 0], y[:, 0])
    delta = (acts[-1] - y) / x.shape[0]
    n_layers = len(model.weights)
    grad_w = [None] * n_layers
    grad_b = [None] * n_layers
    for layer in range(n_layers - 1, -1, -1):
        grad_w[layer] = acts[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer:
            delta = (delta @ model.weights[layer].T) * (pre[layer - 1] > 0)
    return loss, tuple(grad_w) + tuple(grad_b)


def backward(model: MlpModel, x, y) -> tuple[np.ndarray, ...]:
    return loss_and_gradients(model, x, y)[1]


def rmsprop_step(
    model: MlpModel,
    grads,
    state: RmspropState,
    config: TrainConfig,
) -> tuple[MlpModel, RmspropState]:
    rho, lr, eps = config.rmsprop_decay, config.learning_rate, config.rmsprop_epsilon
    params = model.params()
    accs = state.accumulators or tuple(np.zeros_like(p) for p in params)
    if len(grads) != len(params) or any(g.shape != p.shape for g, p in zip(grads, params)):
        raise ValueError("gradient shapes do not match model parameters")
    new_accs = tuple(rho * a + (1.0 - rho) * g * g for a, g in zip(accs, grads))
    new_params = tuple(p - lr * g / (np.sqrt(a) + eps) for p, g, a in zip(params, grads, new_accs))
    return model.with_params(new_params), RmspropState(new_accs)


def train(
    architecture: MlpArchitecture,
    train_data: Dataset,
    config: TrainConfig,
    on_epoch: Callable[[int, float], None] | None = None,
) -> MlpModel:
    """Mini-batch RMSprop. ``on_epoch(epoch, mean_batch_loss)`` is called after
    every epoch (1-based). Raises TrainingDivergedError when the loss, a
    gradient, a parameter or an RMSprop accumulator stops being finite."""
    train_data.require_both_classes()
    rng = np.random.default_rng(config.seed)
    model = init(architecture, train_data.n_features, rng)
    state = RmspropState.zeros_like(model)
    x, y = train_data.features, train_data.labels.astype(np.float64)
    n = x.shape[0]
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n) if config.shuffle_each_epoch else np.arange(n)
        losses = []
        for batch, start in enumerate(range(0, n, config.batch_size), start=1):
            rows = order[start : start + config.batch_size]
            loss, grads = loss_and_gradients(model, x[rows], y[rows])
            if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
                raise TrainingDivergedError(epoch, batch, loss)
            with np.errstate(over="ignore", invalid="ignore"):
                model, state = rmsprop_step(model, grads, state, config)
            if not all(np.all(np.isfinite(a)) for a in model.params() + state.accumulators):
                raise TrainingDivergedError(epoch, batch, loss)
            losses.append(loss)
        if on_epoch is not None:
            on_epoch(epoch, float(np.mean(losses)))
    return model


def predict_class(model: MlpModel, x, threshold: float = 0.5) -> np.ndarray:
    return (forward(model, x) >= threshold).astype(np.int64)


def model_to_dict(model: MlpModel) -> dict:
    shapes = [list(p.shape) for p in model.params()]
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "architecture": {
            "name": model.architecture.name,
            "hidden_layers": list(model.architecture.hidden_layers),
        },
        "input_dim": model.input_dim,
        "layout": "weights then biases, layer order, row-major",
        "shapes": shapes,
        "params": [float(v) for p in model.params() for v in p.ravel(order="C")],
    }


def model_from_dict(doc: dict) -> MlpModel:
    if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model document: {doc.get('format')!r} v{doc.get('version')!r}")
    arch = MlpArchitecture(doc["architecture"]["name"], tuple(doc["architecture"]["hidden_layers"]))
    flat = np.asarray(doc["params"], dtype=np.float64)
    params, offset = [], 0
    for shape in doc["shapes"]:
        size = int(np.prod(shape))
        params.append(flat[offset : offset + size].reshape(shape))
        offset += size
    if offset != flat.size:
        raise ValueError("parameter count does not match declared shapes")
    k = len(params) // 2
    return MlpModel(tuple(params[:k]), tuple(params[k:]), arch)


def save_model(model: MlpModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path: str | Path) -> MlpModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def with_seed(config: TrainConfig, seed: int) -> TrainConfig:
    return replace(config, seed=seed)
