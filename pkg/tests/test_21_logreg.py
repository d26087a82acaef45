import numpy as np
import pytest

from relseq.core_math import Rng
from relseq.evaluation.logreg import Classifier
from relseq.evaluation.logreg import accuracy
from relseq.evaluation.logreg import classifier_loss
from relseq.evaluation.logreg import softmax_loss_and_grads
from relseq.evaluation.logreg import train_logreg
from relseq.exception import ArgumentError
from relseq.exception import ShapeError
from relseq.training.trainer import TrainConfig


def _blobs(n=50):
    rng = Rng(5)
    X = np.concatenate([rng.normal((n, 2)) + 3.0, rng.normal((n, 2)) - 3.0])
    y = np.array([0] * n + [1] * n)
    return X, y


def test_separable():
    X, y = _blobs()
    cfg = TrainConfig(learning_rate=0.1, epochs=30, batch_size=10, seed=1)
    clf = train_logreg(X, y, cfg)
    assert clf.num_classes == 2
    assert clf.dim == 2
    assert accuracy(clf, X, y) == 1.0
    assert classifier_loss(clf, X, y) < 0.1


def test_deterministic():
    X, y = _blobs(10)
    cfg = TrainConfig(learning_rate=0.1, epochs=3, batch_size=4, seed=2)
    a = train_logreg(X, y, cfg, num_classes=3)
    b = train_logreg(X, y, cfg, num_classes=3)
    assert np.array_equal(a.weights, b.weights)
    assert a.num_classes == 3


def test_nondeterministic_shuffle():
    X, y = _blobs(10)
    cfg = TrainConfig(learning_rate=0.1, epochs=3, batch_size=4, seed=2, determinism=False)
    a = train_logreg(X, y, cfg)
    b = train_logreg(X, y, cfg)
    assert not np.array_equal(a.weights, b.weights)


def test_zero_epochs_predicts_first_class():
    X, y = _blobs(5)
    clf = train_logreg(X, y, TrainConfig(epochs=0))
    assert np.array_equal(clf.predict(X), np.zeros(10))


def test_accuracy_counts_mistakes():
    clf = Classifier([[1.0], [-1.0]], [0.0, 0.0])
    X = np.array([[1.0], [2.0], [-1.0], [3.0]])
    assert accuracy(clf, X, [0, 0, 1, 1]) == 0.75


def test_ties_go_to_lowest_class():
    clf = Classifier(np.zeros((3, 2)), np.zeros(3))
    assert clf.predict(np.ones((1, 2)))[0] == 0


def test_empty_set():
    clf = Classifier(np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(ArgumentError):
        accuracy(clf, np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(ArgumentError):
        train_logreg(np.zeros((0, 2)), np.zeros(0), TrainConfig())


def test_bad_input():
    with pytest.raises(ShapeError):
        Classifier(np.zeros((2, 2)), np.zeros(3))
    clf = Classifier(np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(ShapeError):
        clf.predict(np.zeros((3, 4)))
    with pytest.raises(ShapeError):
        accuracy(clf, np.zeros((3, 2)), np.zeros(2))
    with pytest.raises(ArgumentError):
        train_logreg(np.zeros((2, 2)), [0, 5], TrainConfig(), num_classes=3)


def test_gradients_match_finite_differences():
    rng = Rng(6)
    W = rng.normal((3, 4), 0.5)
    b = rng.normal(3, 0.5)
    X = rng.normal((5, 4))
    y = np.array([0, 2, 1, 1, 0])
    _, grads = softmax_loss_and_grads(W, b, X, y, l2=0.1)

    h = 1e-6
    for name, theta in (("weights", W), ("bias", b)):
        numeric = np.zeros_like(theta)
        for idx in np.ndindex(theta.shape):
            old = theta[idx]
            theta[idx] = old + h
            up, _ = softmax_loss_and_grads(W, b, X, y, l2=0.1)
            theta[idx] = old - h
            down, _ = softmax_loss_and_grads(W, b, X, y, l2=0.1)
            theta[idx] = old
            numeric[idx] = (up - down) / (2 * h)
        assert np.allclose(grads[name], numeric, rtol=1e-5, atol=1e-8)
