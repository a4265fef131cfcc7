"""Model persistence: one self-describing JSON document per model.

Round-trips are bit-exact (floats survive via repr), and every document
embeds the model kind, a format version, and a fingerprint of the feature
ordering it was trained on.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter

import numpy as np

from ..errors import FeatureOrderMismatch, MalformedDocument, VersionMismatch
from .naive_bayes import NaiveBayesKdeClassifier
from .neural_net import NeuralNetClassifier
from .tfidf_baseline import TfIdfCloneScorer

FORMAT_MARKER = "cloneval-model"
FORMAT_VERSION = 1


def _fingerprint(names: tuple[str, ...] | None) -> str | None:
    if names is None:
        return None
    return hashlib.sha256(",".join(names).encode("utf-8")).hexdigest()


def _nn_state(model: NeuralNetClassifier) -> dict:
    return {
        "n_features": model.n_features_,
        "weights": [w.tolist() for w in model.weights_],
        "biases": [b.tolist() for b in model.biases_],
        "scale_min": model.scale_min_.tolist(),
        "scale_max": model.scale_max_.tolist(),
        "epochs_trained": model.epochs_trained_,
    }


def _nb_state(model: NaiveBayesKdeClassifier) -> dict:
    return {
        "n_features": model.n_features_,
        "priors": {k: float(v) for k, v in model.priors_.items()},
        "class_values": {k: v.tolist() for k, v in model.class_values_.items()},
        "bandwidths": {k: v.tolist() for k, v in model.bandwidths_.items()},
    }


def _docs_to_json(docs: list[tuple[Counter, float]]) -> list:
    return [
        {"ngrams": [[list(term), count] for term, count in sorted(doc.items())], "weight": w}
        for doc, w in docs
    ]


def _docs_from_json(payload: list) -> list[tuple[Counter, float]]:
    out = []
    for entry in payload:
        counter = Counter({tuple(term): count for term, count in entry["ngrams"]})
        out.append((counter, float(entry["weight"])))
    return out


def dump_model(model) -> str:
    """Serialize any trained model to its JSON document."""
    feature_names = getattr(model, "feature_names_", None)
    if feature_names is not None:
        feature_names = list(feature_names)
    doc = {
        "format": FORMAT_MARKER,
        "version": FORMAT_VERSION,
        "kind": model.kind,
        "feature_names": feature_names,
        "feature_fingerprint": _fingerprint(tuple(feature_names) if feature_names else None),
        "params": _jsonable(model.get_params()),
    }
    if isinstance(model, NeuralNetClassifier):
        doc["state"] = _nn_state(model)
    elif isinstance(model, NaiveBayesKdeClassifier):
        doc["state"] = _nb_state(model)
    elif isinstance(model, TfIdfCloneScorer):
        doc["state"] = {
            "true_docs": _docs_to_json(model.true_docs_),
            "false_docs": _docs_to_json(model.false_docs_),
        }
    else:
        raise MalformedDocument(f"cannot serialize model of type {type(model).__name__}")
    return json.dumps(doc, indent=2)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def load_model(text: str, expected_feature_names: tuple[str, ...] | None = None):
    """Parse a model document back into a ready-to-predict model.

    Raises MalformedDocument for unparseable input, VersionMismatch for a
    foreign format version, and FeatureOrderMismatch when the embedded
    fingerprint disagrees with the names (or with expected_feature_names).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_MARKER:
        raise MalformedDocument("missing cloneval-model format marker")
    if doc.get("version") != FORMAT_VERSION:
        raise VersionMismatch(f"document version {doc.get('version')!r}, expected {FORMAT_VERSION}")

    names = doc.get("feature_names")
    names_tuple = tuple(names) if names else None
    if _fingerprint(names_tuple) != doc.get("feature_fingerprint"):
        raise FeatureOrderMismatch("feature fingerprint does not match the stored names")
    if expected_feature_names is not None and names_tuple != tuple(expected_feature_names):
        raise FeatureOrderMismatch(
            f"model was trained on {names_tuple}, expected {tuple(expected_feature_names)}"
        )

    kind = doc.get("kind")
    params = doc.get("params", {})
    state = doc.get("state")
    if state is None:
        raise MalformedDocument("document has no model state")

    try:
        if kind == NeuralNetClassifier.kind:
            params = dict(params)
            params["hidden_layer_sizes"] = tuple(params.get("hidden_layer_sizes", ()))
            model = NeuralNetClassifier(**params)
            model.n_features_ = int(state["n_features"])
            model.weights_ = [np.array(w, dtype=np.float64) for w in state["weights"]]
            model.biases_ = [np.array(b, dtype=np.float64) for b in state["biases"]]
            model.scale_min_ = np.array(state["scale_min"], dtype=np.float64)
            model.scale_max_ = np.array(state["scale_max"], dtype=np.float64)
            model.epochs_trained_ = int(state["epochs_trained"])
            model.feature_names_ = names_tuple
            return model
        if kind == NaiveBayesKdeClassifier.kind:
            model = NaiveBayesKdeClassifier(**params)
            model.n_features_ = int(state["n_features"])
            model.priors_ = {k: float(v) for k, v in state["priors"].items()}
            model.class_values_ = {
                k: np.array(v, dtype=np.float64) for k, v in state["class_values"].items()
            }
            model.bandwidths_ = {
                k: np.array(v, dtype=np.float64) for k, v in state["bandwidths"].items()
            }
            model.feature_names_ = names_tuple
            return model
        if kind == TfIdfCloneScorer.kind:
            model = TfIdfCloneScorer(**params)
            model.true_docs_ = _docs_from_json(state["true_docs"])
            model.false_docs_ = _docs_from_json(state["false_docs"])
            model.all_docs_ = [d for d, _ in model.true_docs_] + [
                d for d, _ in model.false_docs_
            ]
            model._idf_cache = {}
            return model
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"incomplete {kind!r} state: {exc}") from exc
    raise MalformedDocument(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as stream:
        stream.write(dump_model(model))
        stream.write("\n")


def load_model_file(path, expected_feature_names=None):
    with open(path, "r", encoding="utf-8") as stream:
        return load_model(stream.read(), expected_feature_names)
