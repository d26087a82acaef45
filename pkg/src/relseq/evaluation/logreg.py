"""Multinomial logistic regression on mapping descriptors."""
import logging

import numpy as np

from relseq.exception import ArgumentError
from relseq.exception import DivergenceError
from relseq.exception import NonFiniteError
from relseq.exception import ShapeError
from relseq.training.optimizer import SgdMomentum
from relseq.training.trainer import shuffle_stream

logger = logging.getLogger(__name__)

DEFAULT_L2 = 1e-4


class Classifier(object):
    def __init__(self, weights, bias):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = np.asarray(bias, dtype=np.float64)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ShapeError(
                f"weights {self.weights.shape} and bias {self.bias.shape} do not match"
            )

    @property
    def num_classes(self):
        return self.weights.shape[0]

    @property
    def dim(self):
        return self.weights.shape[1]

    def logits(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ShapeError(f"Descriptors of shape {X.shape} for a {self.dim}-d classifier")
        return X @ self.weights.T + self.bias

    def predict(self, X):
        # argmax returns the first maximum: ties go to the lowest class index.
        return np.argmax(self.logits(X), axis=1)


def _log_softmax(z):
    z = z - np.max(z, axis=1, keepdims=True)
    return z - np.log(np.sum(np.exp(z), axis=1, keepdims=True))


def softmax_loss_and_grads(weights, bias, X, y, l2=0.0):
    """
    Mean cross-entropy plus ``0.5 * l2 * |weights|^2``.

    :return: (loss, {"weights": dW, "bias": db})
    """
    n = X.shape[0]
    logp = _log_softmax(X @ weights.T + bias)
    loss = -np.mean(logp[np.arange(n), y]) + 0.5 * l2 * np.sum(weights * weights)
    dz = np.exp(logp)
    dz[np.arange(n), y] -= 1.0
    dz /= n
    return float(loss), {"weights": dz.T @ X + l2 * weights, "bias": dz.sum(axis=0)}


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise ShapeError(f"Descriptors must be (n, dim), got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ShapeError(f"{X.shape[0]} descriptors but labels of shape {y.shape}")
    if X.shape[0] == 0:
        raise ArgumentError("Empty sample set")
    return X, y.astype(np.int64)


def train_logreg(X, y, cfg, num_classes=None):
    """
    Fits a classifier with minibatch SGD and momentum, starting from zeros.

    :param X: (n, dim) descriptors
    :param y: n labels in [0, num_classes)
    :param cfg: TrainConfig (learning_rate, momentum, epochs, batch_size,
        l2, seed and determinism are used)
    """
    X, y = _check_xy(X, y)
    if num_classes is None:
        num_classes = int(y.max()) + 1
    if y.min() < 0 or y.max() >= num_classes:
        raise ArgumentError(f"Labels outside [0, {num_classes})")

    n, dim = X.shape
    params = {
        "weights": np.zeros((num_classes, dim)),
        "bias": np.zeros(num_classes),
    }
    optimizer = SgdMomentum(cfg.learning_rate, cfg.momentum, cfg.max_grad_norm)
    rng = shuffle_stream(cfg)

    for epoch in range(cfg.epochs):
        order = rng.substream(epoch).permutation(n)
        total = 0.0
        for b0 in range(0, n, cfg.batch_size):
            idx = order[b0:b0 + cfg.batch_size]
            loss, grads = softmax_loss_and_grads(
                params["weights"], params["bias"], X[idx], y[idx], cfg.l2
            )
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"Classifier loss not finite in epoch {epoch + 1}", epoch=epoch + 1
                )
            try:
                params = optimizer.step(params, grads)
            except NonFiniteError:
                raise DivergenceError(
                    f"Classifier diverged in epoch {epoch + 1}", epoch=epoch + 1
                )
            total += loss * len(idx)
        if (epoch + 1) % 50 == 0 or epoch + 1 == cfg.epochs:
            logger.debug("logreg epoch %d loss %.6g", epoch + 1, total / n)

    return Classifier(params["weights"], params["bias"])


def classifier_loss(c, X, y, l2=0.0):
    X, y = _check_xy(X, y)
    return softmax_loss_and_grads(c.weights, c.bias, X, y, l2)[0]


def accuracy(c, X, y):
    X, y = _check_xy(X, y)
    return float(np.mean(c.predict(X) == y))
