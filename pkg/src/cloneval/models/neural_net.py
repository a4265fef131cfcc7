"""Feed-forward network trained with full-batch backpropagation.

Softmax output over the two clone classes, cross-entropy loss, optional
per-epoch dropout on the hidden layers (inverted scaling during training,
plain forward pass at inference). The single hidden sigmoid layer with
k=107 is the default; a deeper ReLU stack with dropout 0.5 is available
through the configuration.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, DivergedLoss
from .common import Prediction, TrainingSet, apply_minmax, fit_minmax

DEFAULT_HIDDEN = (107,)
DEEP_HIDDEN = (32, 32, 32)


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    if kind == "relu":
        return np.maximum(z, 0.0)
    raise ValueError(f"unknown hidden activation: {kind!r}")


def _activate_grad(z: np.ndarray, a: np.ndarray, kind: str) -> np.ndarray:
    if kind == "sigmoid":
        return a * (1.0 - a)
    return np.where(z > 0, 1.0, 0.0)


class NeuralNetClassifier:
    """Backprop network with an sklearn-shaped fit/predict surface."""

    def __init__(
        self,
        hidden_layer_sizes: Sequence[int] = DEFAULT_HIDDEN,
        hidden_activation: str = "sigmoid",
        learning_rate: float = 0.05,
        max_epochs: int = 1000,
        convergence_tol: float = 1e-9,
        dropout: float = 0.0,
        seed: int = 0,
    ):
        if max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not 0.0 <= dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        self.hidden_layer_sizes = tuple(int(k) for k in hidden_layer_sizes)
        self.hidden_activation = hidden_activation
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.convergence_tol = convergence_tol
        self.dropout = dropout
        self.seed = seed

    kind = "neural-net"

    def get_params(self) -> dict:
        return {
            "hidden_layer_sizes": self.hidden_layer_sizes,
            "hidden_activation": self.hidden_activation,
            "learning_rate": self.learning_rate,
            "max_epochs": self.max_epochs,
            "convergence_tol": self.convergence_tol,
            "dropout": self.dropout,
            "seed": self.seed,
        }

    def set_params(self, **params) -> "NeuralNetClassifier":
        for key, value in params.items():
            if not hasattr(self, key):
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    # -- construction helpers ------------------------------------------------

    @property
    def layer_sizes_(self) -> tuple[int, ...]:
        return (self.n_features_, *self.hidden_layer_sizes, 2)

    def init_weights(self, n_features: int) -> "NeuralNetClassifier":
        """Seeded uniform [-0.5, 0.5] initialization of all layers."""
        rng = np.random.Generator(np.random.PCG64(self.seed))
        self.n_features_ = n_features
        sizes = self.layer_sizes_
        self.weights_ = [
            rng.uniform(-0.5, 0.5, size=(sizes[i], sizes[i + 1])) for i in range(len(sizes) - 1)
        ]
        self.biases_ = [rng.uniform(-0.5, 0.5, size=sizes[i + 1]) for i in range(len(sizes) - 1)]
        self.scale_min_ = np.zeros(n_features)
        self.scale_max_ = np.ones(n_features)
        self.feature_names_ = None
        self.epochs_trained_ = 0
        self._rng = rng
        return self

    @classmethod
    def zeros(cls, n_features: int, **params) -> "NeuralNetClassifier":
        """An untrained network with all-zero weights (predicts 0.5/0.5)."""
        model = cls(**params)
        model.init_weights(n_features)
        model.weights_ = [np.zeros_like(w) for w in model.weights_]
        model.biases_ = [np.zeros_like(b) for b in model.biases_]
        return model

    # -- forward / loss / gradients -------------------------------------------

    def _scaled(self, X: np.ndarray) -> np.ndarray:
        return apply_minmax(X, self.scale_min_, self.scale_max_)

    def _forward(self, Xs: np.ndarray, masks: list[np.ndarray] | None = None):
        activations = [Xs]
        pre = []
        a = Xs
        n_hidden = len(self.weights_) - 1
        for layer in range(n_hidden):
            z = a @ self.weights_[layer] + self.biases_[layer]
            a = _activate(z, self.hidden_activation)
            if masks is not None:
                a = a * masks[layer] / (1.0 - self.dropout)
            pre.append(z)
            activations.append(a)
        z_out = a @ self.weights_[-1] + self.biases_[-1]
        probs = _softmax(z_out)
        return activations, pre, probs

    def loss(self, X: np.ndarray, y: np.ndarray) -> float:
        """Mean cross-entropy of the clean (dropout-free) forward pass."""
        _, _, probs = self._forward(self._scaled(np.asarray(X, dtype=np.float64)))
        eps = 1e-12
        return float(-(y * np.log(probs + eps)).sum(axis=1).mean())

    def loss_and_gradients(
        self, X: np.ndarray, y: np.ndarray, masks: list[np.ndarray] | None = None
    ):
        """Cross-entropy loss plus its exact partials for every weight and bias."""
        Xs = self._scaled(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64)
        m = Xs.shape[0]
        activations, pre, probs = self._forward(Xs, masks)
        eps = 1e-12
        loss = float(-(y * np.log(probs + eps)).sum(axis=1).mean())

        grads_w = [np.zeros_like(w) for w in self.weights_]
        grads_b = [np.zeros_like(b) for b in self.biases_]

        delta = (probs - y) / m
        grads_w[-1] = activations[-1].T @ delta
        grads_b[-1] = delta.sum(axis=0)
        for layer in range(len(self.weights_) - 2, -1, -1):
            delta = delta @ self.weights_[layer + 1].T
            if masks is not None:
                delta = delta * masks[layer] / (1.0 - self.dropout)
            delta = delta * _activate_grad(pre[layer], activations[layer + 1], self.hidden_activation)
            grads_w[layer] = activations[layer].T @ delta
            grads_b[layer] = delta.sum(axis=0)
        return loss, grads_w, grads_b

    # -- training --------------------------------------------------------------

    def fit(
        self,
        ts: TrainingSet,
        eval_set: TrainingSet | None = None,
        warm_start_from: "NeuralNetClassifier | None" = None,
    ) -> "NeuralNetClassifier":
        """Full-batch gradient descent on cross-entropy until convergence.

        Deterministic for a fixed seed. Raises SingleClassTrainingSet when a
        class is missing and DivergedLoss when the loss goes non-finite.
        """
        ts.require_both_classes()
        self.init_weights(ts.n_features)
        self.feature_names_ = ts.feature_names
        if warm_start_from is not None:
            self.weights_ = [w.copy() for w in warm_start_from.weights_]
            self.biases_ = [b.copy() for b in warm_start_from.biases_]
        self.scale_min_, self.scale_max_ = fit_minmax(ts.X)

        X, y = ts.X, ts.y
        self.loss_trace_ = []
        self.eval_accuracy_trace_ = [] if eval_set is not None else None
        prev_loss = np.inf
        rng = self._rng
        n_hidden = len(self.weights_) - 1

        for epoch in range(self.max_epochs):
            masks = None
            if self.dropout > 0.0:
                masks = [
                    (rng.random(self.weights_[layer].shape[1]) >= self.dropout).astype(float)
                    for layer in range(n_hidden)
                ]
            loss, grads_w, grads_b = self.loss_and_gradients(X, y, masks)
            if not np.isfinite(loss):
                raise DivergedLoss(f"loss became non-finite at epoch {epoch}")
            for layer in range(len(self.weights_)):
                self.weights_[layer] -= self.learning_rate * grads_w[layer]
                self.biases_[layer] -= self.learning_rate * grads_b[layer]
            if not all(np.isfinite(w).all() for w in self.weights_):
                raise DivergedLoss(f"weights became non-finite at epoch {epoch}")
            self.loss_trace_.append(loss)
            self.epochs_trained_ = epoch + 1
            if eval_set is not None:
                self.eval_accuracy_trace_.append(self._accuracy(eval_set))
            if prev_loss - loss < self.convergence_tol:
                break
            prev_loss = loss
        return self

    def _accuracy(self, ts: TrainingSet) -> float:
        probs = self.predict_proba(ts.X)
        predicted_tp = probs[:, 0] >= 0.5
        actual_tp = ts.y[:, 0] == 1
        return float((predicted_tp == actual_tp).mean())

    # -- inference --------------------------------------------------------------

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """(m, 2) class probabilities; never applies dropout."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_:
            raise DimensionMismatch(
                f"model expects {self.n_features_} features, got {X.shape[1]}"
            )
        _, _, probs = self._forward(self._scaled(X))
        return probs

    def predict_one(self, x) -> Prediction:
        probs = self.predict_proba(np.asarray(x, dtype=np.float64).reshape(1, -1))[0]
        return Prediction(float(probs[0]), float(probs[1]))
