"""
Single layer gated autoencoder.

Frames are vectors of length ``dim_in`` or batches of such vectors stacked as
columns. With factor responses ``a = U x1`` and ``b = V x2`` the mapping
units are ``m = sigmoid(W (a * b))``; either input is reconstructed from the
other one and ``m`` through the transposed filters. There are no biases.
"""
import logging
from collections import namedtuple

import numpy as np

from relseq.core_math import as_columns
from relseq.core_math import as_matrix
from relseq.core_math import matmul
from relseq.core_math import sample_gaussian
from relseq.core_math import sigmoid
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

# Factor responses of one encoding: a = U x1, b = V x2 and their product.
Factors = namedtuple("Factors", ["a", "b", "product"])


class GaeParams(object):
    depth = 1

    def __init__(self, U, V, W):
        self.U = as_matrix(U)
        self.V = as_matrix(V)
        self.W = as_matrix(W)

        if self.U.shape != self.V.shape:
            raise ShapeError(f"U and V differ: {self.U.shape} vs {self.V.shape}")
        if self.W.shape[1] != self.U.shape[0]:
            raise ShapeError(
                f"W {self.W.shape} does not match {self.U.shape[0]} factors"
            )

    @property
    def dim_in(self):
        return self.U.shape[1]

    @property
    def num_factors(self):
        return self.U.shape[0]

    @property
    def num_mappings(self):
        return self.W.shape[0]

    @classmethod
    def initialize(cls, rng, dim_in, num_factors, num_mappings, std=0.01):
        return cls(
            U=sample_gaussian(rng, num_factors, dim_in, std),
            V=sample_gaussian(rng, num_factors, dim_in, std),
            W=sample_gaussian(rng, num_mappings, num_factors, std),
        )

    def as_dict(self, layer=1):
        return {
            f"U{layer}": self.U,
            f"V{layer}": self.V,
            f"W{layer}": self.W,
        }

    @classmethod
    def from_dict(cls, arrays, layer=1):
        return cls(
            U=arrays[f"U{layer}"], V=arrays[f"V{layer}"], W=arrays[f"W{layer}"]
        )

    def copy(self):
        return GaeParams(self.U.copy(), self.V.copy(), self.W.copy())

    def is_finite(self):
        return all(np.isfinite(a).all() for a in (self.U, self.V, self.W))

    def __eq__(self, other):
        if not isinstance(other, GaeParams):
            return False
        return all(
            np.array_equal(x, y)
            for x, y in zip((self.U, self.V, self.W), (other.U, other.V, other.W))
        )

    def __repr__(self):
        return "GaeParams(dim_in={}, num_factors={}, num_mappings={})".format(
            self.dim_in, self.num_factors, self.num_mappings
        )


def _pair(x1, x2):
    _x1, vector = as_columns(x1)
    _x2, _ = as_columns(x2)
    if _x1.shape != _x2.shape:
        raise ShapeError(f"Input shapes differ: {_x1.shape} vs {_x2.shape}")
    return _x1, _x2, vector


def _out(y, vector):
    return y[:, 0] if vector else y


def encode(p, x1, x2):
    """Column batch mappings plus the factor responses needed by encode_backward."""
    a = matmul(p.U, x1)
    b = matmul(p.V, x2)
    product = a * b
    m = sigmoid(matmul(p.W, product))
    return m, Factors(a, b, product)


def encode_backward(p, x1, x2, m, factors, dm):
    """
    Back propagate ``dm`` through ``m = sigmoid(W ((U x1) * (V x2)))``.

    :return: dU, dV, dW, dx1, dx2
    """
    ds = dm * m * (1.0 - m)
    dW = matmul(ds, factors.product, transpose_b=True)
    dproduct = matmul(p.W, ds, transpose_a=True)
    da = dproduct * factors.b
    db = dproduct * factors.a
    dU = matmul(da, x1, transpose_b=True)
    dV = matmul(db, x2, transpose_b=True)
    dx1 = matmul(p.U, da, transpose_a=True)
    dx2 = matmul(p.V, db, transpose_a=True)
    return dU, dV, dW, dx1, dx2


def decode(A, B, W, x, m):
    """
    ``y = B^T ((A x) * (W^T m))``; reconstruct_x2 is (A, B) = (U, V) and
    reconstruct_x1 is (A, B) = (V, U).
    """
    a = matmul(A, x)
    g = matmul(W, m, transpose_a=True)
    h = a * g
    return matmul(B, h, transpose_a=True), (a, g, h)


def decode_backward(A, B, W, x, m, cache, dy):
    """
    :return: dA, dB, dW, dx, dm
    """
    a, g, h = cache
    dB = matmul(h, dy, transpose_b=True)
    dh = matmul(B, dy)
    da = dh * g
    dg = dh * a
    dA = matmul(da, x, transpose_b=True)
    dx = matmul(A, da, transpose_a=True)
    dW = matmul(m, dg, transpose_b=True)
    dm = matmul(W, dg)
    return dA, dB, dW, dx, dm


def infer_mappings(p, x1, x2, return_factors=False):
    _x1, _x2, vector = _pair(x1, x2)
    m, factors = encode(p, _x1, _x2)
    if return_factors:
        return _out(m, vector), factors
    return _out(m, vector)


def _decode_io(A, B, W, x, m):
    _x, vector = as_columns(x)
    _m, _ = as_columns(m)
    if _x.shape[1] != _m.shape[1]:
        raise ShapeError(f"Batch sizes differ: {_x.shape} vs {_m.shape}")
    y, _ = decode(A, B, W, _x, _m)
    return _out(y, vector)


def reconstruct_x2(p, x1, m):
    return _decode_io(p.U, p.V, p.W, x1, m)


def reconstruct_x1(p, x2, m):
    return _decode_io(p.V, p.U, p.W, x2, m)


def predict_step(p, x_prev, x_curr):
    """Apply the transformation taking x_prev to x_curr once more to x_curr."""
    return reconstruct_x2(p, x_curr, infer_mappings(p, x_prev, x_curr))


def recon_loss_and_grads(p, x1, x2):
    """
    Symmetric reconstruction error and its exact gradient.

    The loss is ``|x1 - x1_hat|^2 + |x2 - x2_hat|^2`` averaged over the
    columns of a batch. The mappings depend on both inputs, so the gradient
    also flows through the encoder.

    :return: (loss, GaeParams holding dU, dV, dW)
    """
    _x1, _x2, _ = _pair(x1, x2)
    n = _x1.shape[1]

    m, factors = encode(p, _x1, _x2)
    y2, cache2 = decode(p.U, p.V, p.W, _x1, m)
    y1, cache1 = decode(p.V, p.U, p.W, _x2, m)
    r1 = y1 - _x1
    r2 = y2 - _x2
    loss = (np.sum(r1 * r1) + np.sum(r2 * r2)) / n

    dU, dV, dW, _, dm = decode_backward(p.U, p.V, p.W, _x1, m, cache2, 2.0 * r2 / n)
    _dV, _dU, _dW, _, _dm = decode_backward(
        p.V, p.U, p.W, _x2, m, cache1, 2.0 * r1 / n
    )
    dU += _dU
    dV += _dV
    dW += _dW
    dm += _dm

    eU, eV, eW, _, _ = encode_backward(p, _x1, _x2, m, factors, dm)
    return float(loss), GaeParams(dU + eU, dV + eV, dW + eW)
