"""Gaussian product-kernel density estimation for the minority class.

Each feature gets its own bandwidth, by default Scott's rule ``n**-0.2 * s``
with ``s`` the population standard deviation of that feature. Sampling from
the fitted mixture is exact: pick a training point uniformly, add Gaussian
noise with per-feature std equal to the bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class KdeError(ValueError):
    pass


@dataclass(frozen=True)
class KdeModel:
    training_points: np.ndarray  # (n, d)
    bandwidths: np.ndarray  # (d,)

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.training_points, dtype=np.float64))
        h = np.asarray(self.bandwidths, dtype=np.float64).reshape(-1)
        n, d = points.shape
        if n < 1 or d < 1:
            raise KdeError(f"need at least one point and one feature, got shape {points.shape}")
        if h.shape != (d,):
            raise KdeError(f"expected {d} bandwidths, got {h.shape[0]}")
        if np.any(h < 0) or not np.all(np.isfinite(h)):
            raise KdeError("bandwidths must be finite and >= 0")
        points.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "training_points", points)
        object.__setattr__(self, "bandwidths", h)

    @property
    def n(self) -> int:
        return self.training_points.shape[0]

    @property
    def d(self) -> int:
        return self.training_points.shape[1]


@dataclass(frozen=True)
class BandwidthGrid:
    """Multipliers applied to the Scott baseline."""

    candidates: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.candidates)
        if not c:
            raise KdeError("bandwidth grid is empty")
        if any(v <= 0 or not math.isfinite(v) for v in c):
            raise KdeError("bandwidth multipliers must be positive and finite")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise KdeError("bandwidth multipliers must be strictly ascending")
        object.__setattr__(self, "candidates", c)


def scott_bandwidth(n: int, s: float) -> float:
    if n < 1 or s < 0:
        raise KdeError(f"scott_bandwidth needs n >= 1 and s >= 0, got n={n}, s={s}")
    return n ** -0.2 * s


def scott_bandwidths(points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(points)
    n = points.shape[0]
    return np.array([scott_bandwidth(n, s) for s in points.std(axis=0)])


def fit(minority_points, bandwidth_override=None) -> KdeModel:
    points = np.asarray(minority_points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if points.size == 0:
        raise KdeError("cannot fit a KDE on an empty point set")
    if bandwidth_override is not None:
        return KdeModel(points, np.asarray(bandwidth_override, dtype=np.float64))
    return KdeModel(points, scott_bandwidths(points))


def _log_kernel_terms(model: KdeModel, x: np.ndarray) -> np.ndarray:
    """log of each product-kernel term, shape (m, n) for queries x of shape (m, d)."""
    h = model.bandwidths
    if np.any(h == 0):
        raise KdeError(
            "density undefined with a zero bandwidth (constant feature "
            f"{int(np.flatnonzero(h == 0)[0])})"
        )
    u = (x[:, None, :] - model.training_points[None, :, :]) / h
    return -0.5 * np.einsum("mnd,mnd->mn", u, u) - model.d * _LOG_SQRT_2PI - np.log(h).sum()


def density(model: KdeModel, x) -> np.ndarray:
    """Vectorised density for a batch of query rows (m, d) -> (m,)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1) if model.d == 1 else x.reshape(1, -1)
    if x.shape[1] != model.d:
        raise KdeError(f"query has {x.shape[1]} coordinates, model has {model.d}")
    if not np.all(np.isfinite(x)):
        raise KdeError("query points must be finite")
    return np.exp(_log_kernel_terms(model, x)).mean(axis=1)


def density_at(model: KdeModel, x) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return float(density(model, x)[0])


def log_density(model: KdeModel, x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    terms = _log_kernel_terms(model, x)
    top = terms.max(axis=1, keepdims=True)
    return top[:, 0] + np.log(np.exp(terms - top).sum(axis=1)) - math.log(model.n)


def mixture_cdf(model: KdeModel, x) -> np.ndarray:
    """Exact CDF of a one-feature model at the points ``x``."""
    from scipy.special import ndtr

    if model.d != 1:
        raise KdeError("mixture_cdf is only defined for one-feature models")
    h = model.bandwidths[0]
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    centres = model.training_points[:, 0]
    if h == 0:
        return (centres[None, :] <= x[:, None]).mean(axis=1)
    return ndtr((x[:, None] - centres[None, :]) / h).mean(axis=1)


def sample(model: KdeModel, k: int, rng: np.random.Generator) -> np.ndarray:
    if k < 0:
        raise KdeError(f"sample count must be >= 0, got {k}")
    idx = rng.integers(0, model.n, size=k)
    noise = rng.standard_normal((k, model.d))
    return model.training_points[idx] + noise * model.bandwidths


def sample_mise(
    model: KdeModel,
    true_density: Callable[[np.ndarray], float],
    eval_points,
) -> float:
    """Mean over ``eval_points`` of the squared gap between model and true density."""
    pts = np.asarray(eval_points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None] if model.d == 1 else pts[None, :]
    if pts.shape[0] == 0:
        raise KdeError("sample_mise needs at least one evaluation point")
    truth = np.array([float(true_density(p)) for p in pts])
    if not np.all(np.isfinite(truth)):
        raise KdeError("true_density returned a non-finite value")
    est = density(model, pts)
    return float(np.mean((est - truth) ** 2))


def loo_log_likelihood(points: np.ndarray, bandwidths: np.ndarray) -> float:
    """Sum over i of log density at x_i of the KDE built from the other points.

    Zero-bandwidth (constant) features are skipped; they contribute the same
    point mass for every candidate bandwidth.
    """
    points = np.atleast_2d(points)
    if points.shape[0] < 2:
        raise KdeError("LOO requires >= 2 points")
    keep = bandwidths > 0
    if not np.any(keep):
        raise KdeError("LOO requires at least one feature with positive bandwidth")
    model = KdeModel(points[:, keep], bandwidths[keep])
    terms = _log_kernel_terms(model, model.training_points)
    np.fill_diagonal(terms, -np.inf)
    top = terms.max(axis=1, keepdims=True)
    with np.errstate(divide="ignore"):
        logs = top[:, 0] + np.log(np.exp(terms - top).sum(axis=1)) - math.log(model.n - 1)
    return float(logs.sum())


def select_bandwidth(
    points,
    grid: BandwidthGrid,
    criterion: Literal["oracle-mise", "loo"] = "loo",
    true_density: Callable[[np.ndarray], float] | None = None,
) -> np.ndarray:
    """Grid search over multipliers of the Scott baseline.

    ``oracle-mise`` minimises the sample MISE at the data points against a
    known ``true_density``; ``loo`` maximises the leave-one-out log-likelihood.
    Ties go to the smallest multiplier.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    base = scott_bandwidths(points)
    if criterion == "oracle-mise":
        if true_density is None:
            raise KdeError("oracle-mise criterion needs a true_density")

        def score(h):
            return -sample_mise(KdeModel(points, h), true_density, points)

    elif criterion == "loo":
        if points.shape[0] < 2:
            raise KdeError("LOO requires >= 2 points")

        def score(h):
            return loo_log_likelihood(points, h)

    else:
        raise KdeError(f"unknown criterion {criterion!r}")

    candidates = [m * base for m in grid.candidates]
    return candidates[first_argmax([score(h) for h in candidates])]


def first_argmax(values) -> int:
    """Index of the first maximum, so ties resolve to the smallest multiplier."""
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best
