"""The dataset x sampler x architecture x trial grid.

Every cell is an independent job. The split seed depends only on
(dataset, trial), so all samplers and architectures of a trial see the same
test partition; the resampling and training seeds come from the full tuple.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import dataset as ds_mod
from ..dataset import Dataset
from ..metrics import score
from ..mlp import TrainConfig, TrainingDivergedError, get_architecture, predict_class, train, with_seed
from ..samplers import SamplerSpec, resample
from .config import CsvSource, DatasetSource, ExperimentConfig, config_to_dict
from .report import EvalReport, RunResult, aggregate
from .seeds import derive_seed

log = logging.getLogger(__name__)

PARALLELISM_ENV = "KDESAMPLING_JOBS"
SPLIT_TAG = "split"
DATA_TAG = "data"
ANY_TAG = "*"


class DatasetLoadError(RuntimeError):
    pass


@dataclass(frozen=True)
class Job:
    data: Dataset
    sampler: SamplerSpec
    architecture: str
    trial: int
    base_seed: int
    test_fraction: float
    train_config: TrainConfig


def load_dataset(src: DatasetSource, base_seed: int, base_dir: Path | None = None) -> Dataset:
    s = src.source
    try:
        if isinstance(s, CsvSource):
            path = Path(s.path)
            if base_dir is not None and not path.is_absolute() and not path.exists():
                path = base_dir / path
            return ds_mod.load_csv(path, s.label_column, s.positive_label, name=src.name)
        seed = s.seed if s.seed is not None else derive_seed(base_seed, src.name, DATA_TAG, ANY_TAG, 0)
        return ds_mod.make_synthetic(
            s.n_majority, s.n_minority, s.n_features, s.class_separation,
            np.random.default_rng(seed), name=src.name,
        )
    except (ValueError, OSError) as exc:
        raise DatasetLoadError(f"dataset {src.name!r}: {exc}") from exc


def split_for(data: Dataset, base_seed: int, trial: int, test_fraction: float):
    """Standardised (train, test) for one trial; independent of sampler and architecture."""
    rng = np.random.default_rng(derive_seed(base_seed, data.name, SPLIT_TAG, ANY_TAG, trial))
    pair = ds_mod.stratified_split(data, test_fraction, rng)
    std = ds_mod.fit_standardizer(pair.train)
    return ds_mod.apply_standardizer(std, pair.train), ds_mod.apply_standardizer(std, pair.test)


def _digest(test: Dataset) -> str:
    h = hashlib.sha256(np.ascontiguousarray(test.features).tobytes())
    h.update(np.ascontiguousarray(test.labels).tobytes())
    return h.hexdigest()


def run_job(job: Job) -> RunResult:
    label = job.sampler.display_name
    seed = derive_seed(job.base_seed, job.data.name, label, job.architecture, job.trial)
    start = time.perf_counter()
    train_part, test_part = split_for(job.data, job.base_seed, job.trial, job.test_fraction)
    resample_seq, train_seq = np.random.SeedSequence(seed).spawn(2)
    outcome = resample(train_part, job.sampler, np.random.default_rng(resample_seq))
    train_seed = int(train_seq.generate_state(1, np.uint64)[0])
    try:
        model = train(get_architecture(job.architecture), outcome.data, with_seed(job.train_config, train_seed))
        result, error = score(predict_class(model, test_part.features), test_part.labels), None
    except TrainingDivergedError as exc:
        log.warning("%s/%s/%s trial %d diverged: %s", job.data.name, label, job.architecture, job.trial, exc)
        result, error = None, str(exc)
    return RunResult(
        job.data.name, label, job.architecture, job.trial, result,
        time.perf_counter() - start, seed, _digest(test_part), error,
    )


def resolve_parallelism(config: ExperimentConfig) -> int:
    env = os.environ.get(PARALLELISM_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{PARALLELISM_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{PARALLELISM_ENV} must be >= 1")
        return value
    return config.parallelism


def run_experiment(
    config: ExperimentConfig,
    parallelism: int | None = None,
    base_dir: Path | None = None,
) -> EvalReport:
    datasets = [load_dataset(d, config.base_seed, base_dir) for d in config.datasets]
    metas = {}
    for data in datasets:
        data.require_both_classes()
        m = ds_mod.meta(data)
        metas[data.name] = {
            "imbalance_ratio": m.imbalance_ratio,
            "ratio_display": m.display_ratio(),
            "n_samples": m.n_samples,
            "n_features": m.n_features,
        }
    jobs = [
        Job(data, spec, arch, trial, config.base_seed, config.test_fraction, config.train)
        for data in datasets
        for spec in config.samplers
        for arch in config.architectures
        for trial in range(config.n_trials)
    ]
    workers = parallelism if parallelism is not None else resolve_parallelism(config)
    log.info("running %d jobs with parallelism %d", len(jobs), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_job, jobs))
    else:
        runs = [run_job(j) for j in jobs]
    return aggregate(
        runs,
        [d.name for d in datasets],
        [s.display_name for s in config.samplers],
        list(config.architectures),
        config=config_to_dict(config, execution=False),
        dataset_meta=metas,
    )
