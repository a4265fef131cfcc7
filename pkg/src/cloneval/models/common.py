"""Shared model-facing types: predictions, decisions, training sets, scaling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import SingleClassTrainingSet
from ..features import FeatureVector
from ..fragments import Label


@dataclass(frozen=True)
class Prediction:
    """Class probabilities (true positive, false positive), summing to 1."""

    prob_true: float
    prob_false: float

    @property
    def probs(self) -> tuple[float, float]:
        return (self.prob_true, self.prob_false)


def decide(prediction: Prediction, gamma: float = 0.5) -> Label:
    """Threshold rule: true positive iff prob_true >= gamma (inclusive)."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    return Label.TRUE_POSITIVE if prediction.prob_true >= gamma else Label.FALSE_POSITIVE


def one_hot(label: Label) -> tuple[int, int]:
    if label is Label.TRUE_POSITIVE:
        return (1, 0)
    if label is Label.FALSE_POSITIVE:
        return (0, 1)
    raise ValueError("training rows must be labeled")


@dataclass(frozen=True)
class TrainingSet:
    """Feature matrix with one-hot labels: y=(1,0) true positive, (0,1) false."""

    X: np.ndarray  # (m, n) float64
    y: np.ndarray  # (m, 2) one-hot
    pair_ids: tuple[str, ...]
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if self.X.shape[0] != self.y.shape[0] or self.X.shape[0] != len(self.pair_ids):
            raise ValueError("X, y and pair_ids must have matching row counts")
        if self.X.shape[1] != len(self.feature_names):
            raise ValueError("X columns must match feature_names")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def labels(self) -> list[Label]:
        return [
            Label.TRUE_POSITIVE if row[0] == 1 else Label.FALSE_POSITIVE for row in self.y
        ]

    def class_counts(self) -> tuple[int, int]:
        tp = int(self.y[:, 0].sum())
        return tp, len(self) - tp

    def require_both_classes(self) -> None:
        tp, fp = self.class_counts()
        if tp == 0 or fp == 0:
            raise SingleClassTrainingSet(
                f"training needs both classes, got {tp} TP and {fp} FP rows"
            )

    def subset(self, indices: Sequence[int]) -> "TrainingSet":
        idx = list(indices)
        return TrainingSet(
            self.X[idx],
            self.y[idx],
            tuple(self.pair_ids[i] for i in idx),
            self.feature_names,
        )

    def extended(self, rows: Iterable[tuple[str, FeatureVector, Label]]) -> "TrainingSet":
        rows = list(rows)
        if not rows:
            return self
        extra_x = np.array([r[1].values for r in rows], dtype=np.float64)
        extra_y = np.array([one_hot(r[2]) for r in rows], dtype=np.float64)
        for _, fv, _ in rows:
            if fv.names != self.feature_names:
                raise ValueError("feedback rows use a different feature ordering")
        return TrainingSet(
            np.vstack([self.X, extra_x]) if len(self) else extra_x,
            np.vstack([self.y, extra_y]) if len(self) else extra_y,
            self.pair_ids + tuple(r[0] for r in rows),
            self.feature_names,
        )

    @classmethod
    def from_feature_rows(cls, rows: Sequence[tuple[str, FeatureVector, Label]]) -> "TrainingSet":
        rows = [r for r in rows if r[2] is not Label.UNLABELED]
        if not rows:
            raise ValueError("no labeled rows to train on")
        names = rows[0][1].names
        X = np.array([r[1].values for r in rows], dtype=np.float64)
        y = np.array([one_hot(r[2]) for r in rows], dtype=np.float64)
        return cls(X, y, tuple(r[0] for r in rows), names)


def fit_minmax(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return X.min(axis=0), X.max(axis=0)


def apply_minmax(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Scale each column to [0, 1] by training bounds; out-of-range values clamp."""
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    with np.errstate(invalid="ignore"):
        scaled = (X - lo) / safe
        scaled = np.where(span > 0, scaled, 0.0)
        return np.clip(scaled, 0.0, 1.0)
