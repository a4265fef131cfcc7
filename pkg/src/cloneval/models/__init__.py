"""Trainable validation models and the decision rule."""

from __future__ import annotations

from typing import Sequence

from ..errors import CloneValError
from ..features import FEATURE_NAMES, extract_features
from ..fragments import ClonePair, Label
from .common import Prediction, TrainingSet, decide, one_hot
from .naive_bayes import NaiveBayesKdeClassifier, silverman_bandwidth
from .neural_net import DEEP_HIDDEN, DEFAULT_HIDDEN, NeuralNetClassifier
from .serialize import dump_model, load_model, load_model_file, save_model
from .tfidf_baseline import TfIdfCloneScorer

__all__ = [
    "Prediction",
    "TrainingSet",
    "decide",
    "one_hot",
    "NeuralNetClassifier",
    "NaiveBayesKdeClassifier",
    "TfIdfCloneScorer",
    "silverman_bandwidth",
    "make_classifier",
    "update_with_feedback",
    "dump_model",
    "load_model",
    "save_model",
    "load_model_file",
    "DEFAULT_HIDDEN",
    "DEEP_HIDDEN",
]

MODEL_KINDS = ("nn", "deep-nn", "bayes")


def make_classifier(config: dict):
    """Build a feature-vector classifier from a config mapping.

    Recognized kinds: "nn" (one sigmoid hidden layer, k=107), "deep-nn"
    (three ReLU layers of 32 with dropout 0.5), "bayes" (KDE Naive Bayes).
    Remaining keys override the model's constructor defaults.
    """
    config = dict(config)
    kind = config.pop("model", "nn")
    if kind == "nn":
        return NeuralNetClassifier(**config)
    if kind == "deep-nn":
        config.setdefault("hidden_layer_sizes", DEEP_HIDDEN)
        config.setdefault("hidden_activation", "relu")
        config.setdefault("dropout", 0.5)
        return NeuralNetClassifier(**config)
    if kind == "bayes":
        return NaiveBayesKdeClassifier(**{k: v for k, v in config.items() if k in ("bandwidth_floor", "seed")})
    raise CloneValError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def update_with_feedback(
    model_kind: str,
    base_ts: TrainingSet,
    feedback: Sequence[ClonePair],
    config: dict | None = None,
    warm_start_from: NeuralNetClassifier | None = None,
):
    """Append labeled feedback pairs to the base set and retrain from scratch.

    The same seed policy applies, so empty feedback reproduces the base
    model exactly. Unlabeled feedback violates the precondition.
    """
    include_extras = len(base_ts.feature_names) > len(FEATURE_NAMES)
    rows = []
    for pair in feedback:
        if pair.label is Label.UNLABELED:
            raise ValueError(f"feedback pair {pair.id} is unlabeled")
        fv = extract_features(pair, include_extras=include_extras)
        rows.append((pair.id, fv, pair.label))
    ts = base_ts.extended(rows)
    model = make_classifier({"model": model_kind, **(config or {})})
    if isinstance(model, NeuralNetClassifier) and warm_start_from is not None:
        return model.fit(ts, warm_start_from=warm_start_from)
    return model.fit(ts)
