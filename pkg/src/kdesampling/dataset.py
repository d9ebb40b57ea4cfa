"""Binary datasets: CSV ingestion, stratified holdout splits, z-scoring and a
synthetic two-Gaussian generator."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus {0,1} labels, with 1 the minority class."""

    name: str
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...] = field(default=())
    class_names: tuple[str, str] = ("0", "1")  # original (majority, minority) label text

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels).astype(np.int64)
        if features.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {features.shape}")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise DatasetError(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels"
            )
        if not np.all(np.isin(labels, (0, 1))):
            raise DatasetError("labels must be 0 or 1")
        if not np.all(np.isfinite(features)):
            raise DatasetError("features contain NaN or infinity")
        names = tuple(self.feature_names) or tuple(
            f"x{j}" for j in range(features.shape[1])
        )
        if len(names) != features.shape[1]:
            raise DatasetError("feature_names length does not match feature count")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(majority count, minority count)."""
        n_min = int(self.labels.sum())
        return self.n_samples - n_min, n_min

    def require_both_classes(self) -> None:
        n_maj, n_min = self.class_counts()
        if n_maj == 0 or n_min == 0:
            raise DatasetError(f"dataset {self.name!r} contains a single class")

    def subset(self, rows: np.ndarray) -> "Dataset":
        return replace(self, features=self.features[rows], labels=self.labels[rows])

    def with_features(self, features: np.ndarray) -> "Dataset":
        return replace(self, features=features)


@dataclass(frozen=True)
class DatasetMeta:
    name: str
    imbalance_ratio: float
    n_samples: int
    n_features: int

    def display_ratio(self) -> str:
        """Ratio at two significant figures, e.g. ``9.7:1`` or ``42:1``."""
        return f"{float(f'{self.imbalance_ratio:.2g}'):g}:1"


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray
    constant: np.ndarray  # bool mask of zero-variance features


def meta(dataset: Dataset) -> DatasetMeta:
    dataset.require_both_classes()
    n_maj, n_min = dataset.class_counts()
    return DatasetMeta(dataset.name, n_maj / n_min, dataset.n_samples, dataset.n_features)


def _parse_float(text: str) -> float:
    value = float(text)  # raises ValueError on junk
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def load_csv(
    path: str | Path,
    label_column: str | int,
    positive_label: str,
    name: str | None = None,
) -> Dataset:
    """Read a comma-separated, header-first, UTF-8 file.

    ``label_column`` is a header name or a 0-based column index. Rows named in
    errors are 1-based data rows (the header is not counted); columns are
    1-based positions in the file.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise DatasetError(f"empty dataset: {path} has no header")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    if not body:
        raise DatasetError(f"empty dataset: {path} has no data rows")

    if isinstance(label_column, int):
        if not 0 <= label_column < len(header):
            raise DatasetError(f"label column index {label_column} out of range")
        label_idx = label_column
    elif label_column in header:
        label_idx = header.index(label_column)
    else:
        raise DatasetError(f"label column {label_column!r} not in header {header}")

    feature_idx = [j for j in range(len(header)) if j != label_idx]
    features = np.empty((len(body), len(feature_idx)))
    raw_labels = []
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise DatasetError(
                f"row {i + 1}: expected {len(header)} fields, found {len(row)}"
            )
        raw_labels.append(row[label_idx].strip())
        for k, j in enumerate(feature_idx):
            try:
                features[i, k] = _parse_float(row[j].strip())
            except ValueError:
                raise DatasetError(
                    f"non-numeric value {row[j]!r} at row {i + 1}, "
                    f"column {j + 1} ({header[j]!r})"
                ) from None

    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DatasetError(
            f"label column must hold exactly 2 distinct values, found {len(distinct)}: {distinct[:5]}"
        )
    if positive_label not in distinct:
        raise DatasetError(f"positive label {positive_label!r} not among {distinct}")
    labels = np.array([int(v == positive_label) for v in raw_labels])
    return Dataset(
        name or path.stem,
        features,
        labels,
        tuple(header[j] for j in feature_idx),
        (next(v for v in distinct if v != positive_label), positive_label),
    )


def write_csv(dataset: Dataset, path: str | Path, label_column: str = "label") -> None:
    """Write features and labels (as ``class_names`` text); floats use ``repr``
    so they round-trip exactly through :func:`load_csv`."""
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([*dataset.feature_names, label_column])
        for x, y in zip(dataset.features, dataset.labels):
            writer.writerow([*(repr(float(v)) for v in x), dataset.class_names[y]])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(
    dataset: Dataset, test_fraction: float, rng: np.random.Generator
) -> SplitPair:
    """Per-class holdout with ``round_half_up(count * test_fraction)`` test rows,
    clamped so each side keeps at least one row of each class. Row order is
    preserved within both halves."""
    if not 0.0 < test_fraction < 1.0:
        raise DatasetError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    test_mask = np.zeros(dataset.n_samples, dtype=bool)
    for label in (0, 1):
        rows = np.flatnonzero(dataset.labels == label)
        if rows.size < 2:
            raise DatasetError(
                f"class {label} has {rows.size} sample(s); stratified split needs at least 2"
            )
        n_test = min(max(_round_half_up(rows.size * test_fraction), 1), rows.size - 1)
        test_mask[rng.permutation(rows)[:n_test]] = True
    return SplitPair(
        dataset.subset(np.flatnonzero(~test_mask)),
        dataset.subset(np.flatnonzero(test_mask)),
    )


def fit_standardizer(train: Dataset) -> Standardizer:
    if train.n_samples == 0:
        raise DatasetError("cannot fit a standardizer on an empty dataset")
    means = train.features.mean(axis=0)
    stds = train.features.std(axis=0)  # population (ddof=0)
    constant = stds == 0.0
    return Standardizer(means, np.where(constant, 1.0, stds), constant)


def apply_standardizer(std: Standardizer, data: Dataset) -> Dataset:
    z = (data.features - std.means) / std.stds
    z[:, std.constant] = 0.0
    return data.with_features(z)


def make_synthetic(
    n_majority: int,
    n_minority: int,
    n_features: int,
    class_separation: float,
    rng: np.random.Generator,
    name: str = "synthetic",
) -> Dataset:
    """Majority ~ N(0, I); minority ~ N(s * e_0, I). Majority rows come first."""
    if min(n_majority, n_minority, n_features) < 1:
        raise DatasetError("counts and n_features must be >= 1")
    if class_separation < 0:
        raise DatasetError("class_separation must be >= 0")
    majority = rng.standard_normal((n_majority, n_features))
    minority = rng.standard_normal((n_minority, n_features))
    minority[:, 0] += class_separation
    labels = np.concatenate([np.zeros(n_majority, int), np.ones(n_minority, int)])
    return Dataset(name, np.vstack([majority, minority]), labels)


def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)

