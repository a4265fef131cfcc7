import numpy as np
import pytest

from cloneval.errors import DimensionMismatch, DivergedLoss, SingleClassTrainingSet
from cloneval.models import NeuralNetClassifier, TrainingSet


def random_training_set(rng, rows=6, features=4):
    X = rng.random((rows, features))
    labels = rng.integers(0, 2, rows)
    labels[0], labels[1] = 0, 1  # force both classes
    y = np.zeros((rows, 2))
    y[labels == 1, 0] = 1
    y[labels == 0, 1] = 1
    return TrainingSet(X, y, tuple(f"p{i}" for i in range(rows)), tuple(f"f{i}" for i in range(features)))


def relative_error(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-2)


@pytest.mark.parametrize("activation", ["sigmoid", "relu"])
def test_gradients_match_finite_differences(activation):
    rng = np.random.default_rng(17)
    for trial in range(10):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(2, 6))
        ts = random_training_set(rng, rows=int(rng.integers(3, 8)), features=n)
        model = NeuralNetClassifier(hidden_layer_sizes=(k,), hidden_activation=activation, seed=trial)
        model.init_weights(n)
        model.scale_min_, model.scale_max_ = ts.X.min(0), ts.X.max(0)
        _, grads_w, grads_b = model.loss_and_gradients(ts.X, ts.y)
        eps = 1e-5
        for layer, W in enumerate(model.weights_):
            for i in range(W.shape[0]):
                for j in range(W.shape[1]):
                    W[i, j] += eps
                    up = model.loss(ts.X, ts.y)
                    W[i, j] -= 2 * eps
                    down = model.loss(ts.X, ts.y)
                    W[i, j] += eps
                    assert relative_error((up - down) / (2 * eps), grads_w[layer][i, j]) < 1e-4
        for layer, b in enumerate(model.biases_):
            for i in range(b.shape[0]):
                b[i] += eps
                up = model.loss(ts.X, ts.y)
                b[i] -= 2 * eps
                down = model.loss(ts.X, ts.y)
                b[i] += eps
                assert relative_error((up - down) / (2 * eps), grads_b[layer][i]) < 1e-4


def test_xor_training_reaches_full_accuracy():
    X = np.zeros((4, 8))
    X[1, 1] = 1
    X[2, 0] = 1
    X[3, 0] = X[3, 1] = 1
    y = np.array([[0, 1], [1, 0], [1, 0], [0, 1]], dtype=float)
    ts = TrainingSet(X, y, ("a", "b", "c", "d"), tuple(f"f{i}" for i in range(8)))
    model = NeuralNetClassifier(hidden_layer_sizes=(8,), learning_rate=0.5, max_epochs=1000, seed=42)
    model.fit(ts)
    probs = model.predict_proba(X)
    assert (((probs[:, 0] >= 0.5) == (y[:, 0] == 1))).all()
    assert model.epochs_trained_ <= 1000


def test_determinism_same_seed_bit_identical():
    rng = np.random.default_rng(3)
    ts = random_training_set(rng, rows=12, features=5)
    first = NeuralNetClassifier(hidden_layer_sizes=(6,), seed=42, max_epochs=50).fit(ts)
    second = NeuralNetClassifier(hidden_layer_sizes=(6,), seed=42, max_epochs=50).fit(ts)
    for w1, w2 in zip(first.weights_, second.weights_):
        assert np.array_equal(w1, w2)
    for b1, b2 in zip(first.biases_, second.biases_):
        assert np.array_equal(b1, b2)


def test_single_class_rejected():
    X = np.random.default_rng(0).random((3, 4))
    y = np.tile([1.0, 0.0], (3, 1))
    ts = TrainingSet(X, y, ("a", "b", "c"), ("f0", "f1", "f2", "f3"))
    with pytest.raises(SingleClassTrainingSet):
        NeuralNetClassifier().fit(ts)


def test_diverged_loss_detected():
    # the guard must surface numerical breakdown instead of training through
    # NaNs (stable softmax makes huge-but-finite inputs saturate, not blow up,
    # so the reachable non-finite path is a poisoned feature column)
    rng = np.random.default_rng(9)
    ts = random_training_set(rng, rows=8, features=4)
    ts.X[3, 2] = np.inf
    with pytest.raises(DivergedLoss):
        NeuralNetClassifier(hidden_layer_sizes=(4,), max_epochs=50, seed=1).fit(ts)


def test_zero_network_emits_half_half_exactly():
    model = NeuralNetClassifier.zeros(8)
    prediction = model.predict_one(np.linspace(0, 1, 8))
    assert prediction.prob_true == 0.5
    assert prediction.prob_false == 0.5


def test_dimension_mismatch():
    model = NeuralNetClassifier.zeros(8)
    with pytest.raises(DimensionMismatch):
        model.predict_proba(np.ones((1, 5)))


def test_dropout_zero_matches_plain_network():
    rng = np.random.default_rng(21)
    ts = random_training_set(rng, rows=10, features=4)
    plain = NeuralNetClassifier(hidden_layer_sizes=(5, 5), hidden_activation="relu", seed=7, max_epochs=40).fit(ts)
    gated = NeuralNetClassifier(
        hidden_layer_sizes=(5, 5), hidden_activation="relu", dropout=0.0, seed=7, max_epochs=40
    ).fit(ts)
    assert np.array_equal(plain.predict_proba(ts.X), gated.predict_proba(ts.X))


def test_dropout_training_runs_and_inference_is_deterministic():
    rng = np.random.default_rng(2)
    ts = random_training_set(rng, rows=16, features=4)
    model = NeuralNetClassifier(
        hidden_layer_sizes=(32, 32, 32), hidden_activation="relu", dropout=0.5, seed=5, max_epochs=30
    ).fit(ts)
    first = model.predict_proba(ts.X)
    second = model.predict_proba(ts.X)
    assert np.array_equal(first, second)
    assert np.allclose(first.sum(axis=1), 1.0, atol=1e-9)


def test_convergence_stops_early():
    rng = np.random.default_rng(14)
    ts = random_training_set(rng, rows=10, features=3)
    model = NeuralNetClassifier(hidden_layer_sizes=(4,), convergence_tol=1e-2, max_epochs=1000, seed=0)
    model.fit(ts)
    assert model.epochs_trained_ < 1000


def test_eval_trace_recorded():
    rng = np.random.default_rng(31)
    train = random_training_set(rng, rows=12, features=4)
    test = random_training_set(rng, rows=6, features=4)
    model = NeuralNetClassifier(hidden_layer_sizes=(4,), max_epochs=25, seed=3)
    model.fit(train, eval_set=test)
    assert len(model.eval_accuracy_trace_) == model.epochs_trained_
    assert all(0.0 <= a <= 1.0 for a in model.eval_accuracy_trace_)
