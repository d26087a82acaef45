"""
Dense double precision kernels and seeded random streams.

Matrices are 2-D :class:`numpy.ndarray` objects of dtype float64. Batches of
vectors are stored as columns; nothing here broadcasts implicitly, every
operation checks shapes and refuses a mismatch.
"""
import logging

import numpy as np

from relseq.exception import ArgumentError
from relseq.exception import NonFiniteError
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

ELEMENTWISE = {"mul": np.multiply, "add": np.add, "sub": np.subtract}


def as_matrix(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"Expected a matrix, got shape {a.shape}")
    return a


def as_columns(x):
    """A vector becomes a one column matrix, a matrix is left as it is."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x.reshape(-1, 1), True
    if x.ndim != 2:
        raise ShapeError(f"Expected a vector or a column batch, got shape {x.shape}")
    return x, False


def check_finite(a, what="result"):
    if not np.isfinite(a).all():
        raise NonFiniteError(f"Non-finite entries in {what}")
    return a


def matmul(a, b, transpose_a=False, transpose_b=False):
    a = as_matrix(a)
    b = as_matrix(b)
    _a = a.T if transpose_a else a
    _b = b.T if transpose_b else b
    if _a.shape[1] != _b.shape[0]:
        raise ShapeError(
            "Inner dimensions differ: {}{} x {}{}".format(
                a.shape, "^T" if transpose_a else "", b.shape, "^T" if transpose_b else ""
            )
        )
    return check_finite(_a @ _b, "matmul")


def elementwise(a, b, op="mul"):
    try:
        func = ELEMENTWISE[op]
    except KeyError:
        raise ArgumentError(f"Unknown elementwise operation '{op}'")

    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"Shape mismatch: {a.shape} vs {b.shape}")
    return check_finite(func(a, b), f"elementwise {op}")


def sigmoid(a):
    a = check_finite(np.asarray(a, dtype=np.float64), "sigmoid input")
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    _e = np.exp(a[~pos])
    out[~pos] = _e / (1.0 + _e)
    return out


class Rng(object):
    """
    Counter based random stream (Philox).

    A stream is fully determined by its seed and spawn key, so
    ``Rng(seed).substream(i)`` gives the same numbers wherever and in
    whatever order it is created.
    """

    def __init__(self, seed=0, spawn_key=()):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.spawn_key = tuple(int(k) for k in spawn_key)
        _seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.Philox(_seq))

    def substream(self, *index):
        return Rng(self.seed, self.spawn_key + tuple(index))

    def normal(self, size, std=1.0):
        return self.generator.standard_normal(size) * std

    def uniform(self, low, high, size=None):
        return self.generator.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size)

    def permutation(self, n):
        return self.generator.permutation(n)

    def __repr__(self):
        return f"Rng(seed={self.seed}, spawn_key={self.spawn_key})"


def sample_gaussian(rng, rows, cols, std):
    if std < 0:
        raise ArgumentError(f"Negative standard deviation {std}")
    return rng.normal((rows, cols), std)
