"""Balancing strategies applied to a training split.

``none`` passes data through, ``ros`` duplicates minority rows with
replacement, ``rus`` drops majority rows without replacement, and ``kde``
appends rows drawn from a Gaussian KDE fit on the minority class.
Oversamplers keep every original row and append new minority rows at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from . import kde
from .dataset import Dataset, DatasetError

SamplerKind = Literal["none", "kde", "ros", "rus"]
BandwidthMode = Literal["scott", "override", "loo-grid"]

DISPLAY_NAMES = {"none": "imbalanced", "kde": "KDE", "ros": "ROS", "rus": "RUS"}


@dataclass(frozen=True)
class SamplerSpec:
    kind: SamplerKind
    bandwidth_mode: BandwidthMode | None = None
    bandwidth_override: tuple[float, ...] | None = None
    bandwidth_grid: kde.BandwidthGrid | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in DISPLAY_NAMES:
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.kind == "kde":
            if self.bandwidth_mode is None:
                object.__setattr__(self, "bandwidth_mode", "scott")
            if self.bandwidth_mode == "override" and self.bandwidth_override is None:
                raise ValueError("bandwidth_mode 'override' needs bandwidth_override")
            if self.bandwidth_mode == "loo-grid" and self.bandwidth_grid is None:
                raise ValueError("bandwidth_mode 'loo-grid' needs bandwidth_grid")
            if self.bandwidth_mode not in ("scott", "override", "loo-grid"):
                raise ValueError(f"unknown bandwidth mode {self.bandwidth_mode!r}")
        elif (
            self.bandwidth_mode is not None
            or self.bandwidth_override is not None
            or self.bandwidth_grid is not None
        ):
            raise ValueError(f"bandwidth settings only apply to kind 'kde', not {self.kind!r}")

    @property
    def display_name(self) -> str:
        return self.label or DISPLAY_NAMES[self.kind]


@dataclass(frozen=True)
class ResampleOutcome:
    data: Dataset
    n_synthetic: int
    n_removed: int
    kind: SamplerKind
    source_counts: tuple[int, int]  # (majority, minority) before resampling


def _kde_bandwidths(points: np.ndarray, spec: SamplerSpec) -> np.ndarray:
    if spec.bandwidth_mode == "override":
        return np.asarray(spec.bandwidth_override, dtype=np.float64)
    if spec.bandwidth_mode == "loo-grid":
        return kde.select_bandwidth(points, spec.bandwidth_grid, criterion="loo")
    return kde.scott_bandwidths(points)


def resample(train: Dataset, spec: SamplerSpec, rng: np.random.Generator) -> ResampleOutcome:
    train.require_both_classes()
    n_maj, n_min = train.class_counts()
    if n_min > n_maj:
        raise DatasetError(
            f"minority class (label 1) has {n_min} rows but majority has {n_maj}; labels look inverted"
        )
    counts = (n_maj, n_min)
    gap = n_maj - n_min
    minority_rows = np.flatnonzero(train.labels == 1)

    if spec.kind == "none":
        return ResampleOutcome(train, 0, 0, "none", counts)

    if spec.kind == "rus":
        majority_rows = np.flatnonzero(train.labels == 0)
        kept = rng.choice(majority_rows, size=n_min, replace=False)
        mask = train.labels == 1
        mask[kept] = True
        return ResampleOutcome(train.subset(np.flatnonzero(mask)), 0, gap, "rus", counts)

    if spec.kind == "ros":
        new_x = train.features[rng.choice(minority_rows, size=gap, replace=True)]
    else:
        points = train.features[minority_rows]
        model = kde.fit(points, _kde_bandwidths(points, spec))
        new_x = kde.sample(model, gap, rng)

    data = replace(
        train,
        features=np.vstack([train.features, new_x]),
        labels=np.concatenate([train.labels, np.ones(gap, dtype=np.int64)]),
    )
    return ResampleOutcome(data, gap, 0, spec.kind, counts)


def verify_balance(outcome: ResampleOutcome) -> bool:
    n_maj, n_min = outcome.data.class_counts()
    src_maj, src_min = outcome.source_counts
    if outcome.kind == "none":
        return (n_maj, n_min) == (src_maj, src_min) and outcome.n_synthetic == 0 and outcome.n_removed == 0
    if n_maj != n_min:
        return False
    if outcome.kind == "rus":
        return outcome.n_synthetic == 0 and outcome.n_removed == src_maj - n_maj and n_min == src_min
    return outcome.n_removed == 0 and outcome.n_synthetic == n_min - src_min and n_maj == src_maj
