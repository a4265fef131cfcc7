"""Naive Bayes with per-feature Gaussian kernel density likelihoods.

Priors come from class frequencies; each feature's class-conditional
likelihood is a 1-D Gaussian KDE over that class's training values with a
Silverman rule-of-thumb bandwidth, floored at 1e-6 so constant features
stay usable. Posteriors accumulate in log space.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionMismatch
from .common import Prediction, TrainingSet

BANDWIDTH_FLOOR = 1e-6
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def silverman_bandwidth(values: np.ndarray, floor: float = BANDWIDTH_FLOOR) -> float:
    """0.9 * min(sample std, IQR/1.34) * m^(-1/5), floored for degenerate data."""
    m = len(values)
    if m < 2:
        return floor
    std = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread = min(std, iqr / 1.34) if iqr > 0 else std
    h = 0.9 * spread * m ** (-0.2)
    if not math.isfinite(h) or h < floor:
        return floor
    return h


class NaiveBayesKdeClassifier:
    """Two-class Naive Bayes over continuous features."""

    kind = "naive-bayes-kde"

    def __init__(self, bandwidth_floor: float = BANDWIDTH_FLOOR, seed: int = 0):
        self.bandwidth_floor = bandwidth_floor
        self.seed = seed  # unused; kept for a uniform trainer interface

    def get_params(self) -> dict:
        return {"bandwidth_floor": self.bandwidth_floor, "seed": self.seed}

    def fit(self, ts: TrainingSet, eval_set: TrainingSet | None = None) -> "NaiveBayesKdeClassifier":
        ts.require_both_classes()
        self.feature_names_ = ts.feature_names
        self.n_features_ = ts.n_features
        tp_mask = ts.y[:, 0] == 1
        self.class_values_ = {
            "tp": np.asarray(ts.X[tp_mask], dtype=np.float64),
            "fp": np.asarray(ts.X[~tp_mask], dtype=np.float64),
        }
        total = len(ts)
        self.priors_ = {
            "tp": tp_mask.sum() / total,
            "fp": (total - tp_mask.sum()) / total,
        }
        self.bandwidths_ = {
            key: np.array(
                [
                    silverman_bandwidth(vals[:, i], self.bandwidth_floor)
                    for i in range(self.n_features_)
                ]
            )
            for key, vals in self.class_values_.items()
        }
        self.eval_accuracy_trace_ = None
        return self

    def _log_density(self, key: str, feature: int, x: float) -> float:
        values = self.class_values_[key][:, feature]
        h = self.bandwidths_[key][feature]
        z = (x - values) / h
        # log of (1 / (m h)) * sum(phi(z)) via logsumexp for stability
        exponents = -0.5 * z * z
        peak = exponents.max()
        total = np.exp(exponents - peak).sum()
        return float(peak + math.log(total) - math.log(len(values) * h) - _LOG_SQRT_2PI)

    def class_feature_density(self, label_key: str, feature: int, x: float) -> float:
        """KDE density value (1/(m h)) * sum K((x - x_i)/h); 'tp' or 'fp'."""
        return math.exp(self._log_density(label_key, feature, x))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_:
            raise DimensionMismatch(
                f"model expects {self.n_features_} features, got {X.shape[1]}"
            )
        out = np.empty((X.shape[0], 2))
        for row, x in enumerate(X):
            scores = []
            for key in ("tp", "fp"):
                score = math.log(self.priors_[key])
                for i in range(self.n_features_):
                    score += self._log_density(key, i, float(x[i]))
                scores.append(score)
            peak = max(scores)
            exp = [math.exp(s - peak) for s in scores]
            total = exp[0] + exp[1]
            out[row, 0] = exp[0] / total
            out[row, 1] = exp[1] / total
        return out

    def predict_one(self, x) -> Prediction:
        probs = self.predict_proba(np.asarray(x, dtype=np.float64).reshape(1, -1))[0]
        return Prediction(float(probs[0]), float(probs[1]))
