"""Confusion counts and macro-averaged F1 with label 1 as the positive
(minority) class. 0/0 in any F1 is taken as 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ScorePair:
    f1_major: float
    f1_minor: float
    macro: float


def confusion(predictions, labels) -> ConfusionMatrix:
    p = np.asarray(predictions).astype(np.int64).reshape(-1)
    y = np.asarray(labels).astype(np.int64).reshape(-1)
    if p.shape != y.shape:
        raise ValueError(f"length mismatch: {p.size} predictions vs {y.size} labels")
    if p.size == 0:
        raise ValueError("cannot score an empty prediction vector")
    tp = int(np.sum((p == 1) & (y == 1)))
    fp = int(np.sum((p == 1) & (y == 0)))
    fn = int(np.sum((p == 0) & (y == 1)))
    return ConfusionMatrix(tp, fp, fn, p.size - tp - fp - fn)


def _f1(hits: int, false_pos: int, false_neg: int) -> float:
    denom = 2 * hits + false_pos + false_neg
    return 2 * hits / denom if denom else 0.0


def f1_per_class(cm: ConfusionMatrix) -> tuple[float, float]:
    """(f1_major, f1_minor)."""
    return _f1(cm.tn, cm.fn, cm.fp), _f1(cm.tp, cm.fp, cm.fn)


def macro_f1(pair: tuple[float, float]) -> float:
    f1_major, f1_minor = pair
    return (f1_major + f1_minor) / 2


def score(predictions, labels) -> ScorePair:
    pair = f1_per_class(confusion(predictions, labels))
    return ScorePair(pair[0], pair[1], macro_f1(pair))
