"""Experiment configuration, read from JSON.

Schema (all keys except ``datasets`` optional)::

    {
      "datasets": [
        {"name": "synth", "synthetic": {"n_majority": 1000, "n_minority": 50,
                                        "n_features": 10, "class_separation": 1.5,
                                        "seed": 7}},
        {"name": "abalone", "csv": {"path": "data/abalone.csv",
                                    "label_column": "label", "positive_label": "1"}}
      ],
      "samplers": [{"kind": "none"}, {"kind": "kde", "bandwidth": "scott"},
                   {"kind": "kde", "bandwidth": {"override": [0.5, 0.5]}},
                   {"kind": "kde", "bandwidth": {"loo_grid": [0.5, 1, 2]}, "label": "KDE-loo"},
                   {"kind": "ros"}, {"kind": "rus"}],
      "architectures": ["MLP-1", "MLP-2", "MLP-3"],
      "train": {"epochs": 100, "batch_size": 32, "learning_rate": 0.001,
                "rmsprop_decay": 0.9, "rmsprop_epsilon": 1e-7,
                "shuffle_each_epoch": true},
      "test_fraction": 0.25, "n_trials": 5, "base_seed": 20201,
      "output_dir": "results", "parallelism": 1
    }
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from ..kde import BandwidthGrid, KdeError
from ..mlp import ARCHITECTURES, TrainConfig
from ..samplers import SamplerSpec

DEFAULT_SAMPLERS = ("none", "kde", "ros", "rus")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticSource:
    n_majority: int
    n_minority: int
    n_features: int
    class_separation: float
    seed: int | None = None


@dataclass(frozen=True)
class CsvSource:
    path: str
    label_column: str | int
    positive_label: str


@dataclass(frozen=True)
class DatasetSource:
    name: str
    source: SyntheticSource | CsvSource


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetSource, ...]
    samplers: tuple[SamplerSpec, ...] = tuple(SamplerSpec(k) for k in DEFAULT_SAMPLERS)
    architectures: tuple[str, ...] = tuple(ARCHITECTURES)
    train: TrainConfig = field(default_factory=TrainConfig)
    test_fraction: float = 0.25
    n_trials: int = 5
    base_seed: int = 20201
    output_dir: str = "results"
    parallelism: int = 1

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("config needs at least one dataset")
        if not self.samplers:
            raise ConfigError("config needs at least one sampler")
        if not self.architectures:
            raise ConfigError("config needs at least one architecture")
        for arch in self.architectures:
            if arch not in ARCHITECTURES:
                raise ConfigError(f"unknown architecture {arch!r}; choose from {sorted(ARCHITECTURES)}")
        if self.n_trials < 1:
            raise ConfigError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 0 < self.test_fraction < 1:
            raise ConfigError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        for what, names in (
            ("dataset", [d.name for d in self.datasets]),
            ("sampler label", [s.display_name for s in self.samplers]),
            ("architecture", list(self.architectures)),
        ):
            dupes = {n for n in names if names.count(n) > 1}
            if dupes:
                raise ConfigError(f"duplicate {what}(s): {sorted(dupes)}")


def _check_keys(where: str, doc: dict, allowed: set[str], required: set[str] = frozenset()):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object, got {type(doc).__name__}")
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = set(required) - set(doc)
    if missing:
        raise ConfigError(f"{where}: missing key(s) {sorted(missing)}")


def _dataset_from_dict(i: int, doc: dict) -> DatasetSource:
    where = f"datasets[{i}]"
    _check_keys(where, doc, {"name", "synthetic", "csv"}, {"name"})
    if ("synthetic" in doc) == ("csv" in doc):
        raise ConfigError(f"{where}: give exactly one of 'synthetic' or 'csv'")
    if "synthetic" in doc:
        names = {f.name for f in fields(SyntheticSource)}
        _check_keys(f"{where}.synthetic", doc["synthetic"], names, names - {"seed"})
        source = SyntheticSource(**doc["synthetic"])
    else:
        names = {f.name for f in fields(CsvSource)}
        _check_keys(f"{where}.csv", doc["csv"], names, names)
        source = CsvSource(**doc["csv"])
    return DatasetSource(str(doc["name"]), source)


def _sampler_from_dict(i: int, doc: dict | str) -> SamplerSpec:
    where = f"samplers[{i}]"
    if isinstance(doc, str):
        doc = {"kind": doc}
    _check_keys(where, doc, {"kind", "bandwidth", "label"}, {"kind"})
    kind, bw, label = doc["kind"], doc.get("bandwidth"), doc.get("label")
    try:
        if kind != "kde":
            if bw is not None:
                raise ConfigError(f"{where}: 'bandwidth' only applies to kind 'kde'")
            return SamplerSpec(kind, label=label)
        if bw is None or bw == "scott":
            return SamplerSpec("kde", "scott", label=label)
        _check_keys(f"{where}.bandwidth", bw, {"override", "loo_grid"})
        if len(bw) != 1:
            raise ConfigError(f"{where}.bandwidth: give exactly one of 'override' or 'loo_grid'")
        if "override" in bw:
            return SamplerSpec("kde", "override", bandwidth_override=tuple(map(float, bw["override"])), label=label)
        return SamplerSpec("kde", "loo-grid", bandwidth_grid=BandwidthGrid(tuple(bw["loo_grid"])), label=label)
    except (ValueError, KdeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from None


def config_from_dict(doc: dict[str, Any]) -> ExperimentConfig:
    top = {f.name for f in fields(ExperimentConfig)}
    _check_keys("config", doc, top, {"datasets"})
    kwargs: dict[str, Any] = {k: v for k, v in doc.items() if k not in ("datasets", "samplers", "architectures", "train")}
    kwargs["datasets"] = tuple(_dataset_from_dict(i, d) for i, d in enumerate(doc["datasets"]))
    if "samplers" in doc:
        kwargs["samplers"] = tuple(_sampler_from_dict(i, s) for i, s in enumerate(doc["samplers"]))
    if "architectures" in doc:
        kwargs["architectures"] = tuple(doc["architectures"])
    if "train" in doc:
        names = {f.name for f in fields(TrainConfig)} - {"seed"}
        _check_keys("train", doc["train"], names)
        try:
            kwargs["train"] = TrainConfig(**doc["train"])
        except ValueError as exc:
            raise ConfigError(f"train: {exc}") from None
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(doc)


def sampler_to_dict(spec: SamplerSpec) -> dict:
    out: dict[str, Any] = {"kind": spec.kind}
    if spec.kind == "kde":
        if spec.bandwidth_mode == "override":
            out["bandwidth"] = {"override": list(spec.bandwidth_override)}
        elif spec.bandwidth_mode == "loo-grid":
            out["bandwidth"] = {"loo_grid": list(spec.bandwidth_grid.candidates)}
        else:
            out["bandwidth"] = "scott"
    if spec.label is not None:
        out["label"] = spec.label
    return out


def config_to_dict(config: ExperimentConfig, execution: bool = True) -> dict:
    """``execution=False`` drops output_dir and parallelism, which do not affect results."""
    datasets = []
    for d in config.datasets:
        key = "synthetic" if isinstance(d.source, SyntheticSource) else "csv"
        datasets.append({"name": d.name, key: asdict(d.source)})
    train = asdict(config.train)
    train.pop("seed")
    out = {
        "datasets": datasets,
        "samplers": [sampler_to_dict(s) for s in config.samplers],
        "architectures": list(config.architectures),
        "train": train,
        "test_fraction": config.test_fraction,
        "n_trials": config.n_trials,
        "base_seed": config.base_seed,
    }
    if execution:
        out["output_dir"] = config.output_dir
        out["parallelism"] = config.parallelism
    return out
