"""
PCA whitening.

Samples are rows. The transform keeps the leading principal components that
explain the requested fraction of the variance and scales each of them to
unit variance.
"""
import logging

import numpy as np

from relseq.exception import ArgumentError
from relseq.exception import DegenerateDataError
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

DEFAULT_TARGET_FRACTION = 0.95
DEFAULT_EPS = 1e-8


class WhiteningTransform(object):
    def __init__(self, mean, forward, inverse, eigenvalues, retained_fraction):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.forward = np.asarray(forward, dtype=np.float64)
        self.inverse = np.asarray(inverse, dtype=np.float64)
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        self.retained_fraction = float(retained_fraction)

        d_kept, d_pixels = self.forward.shape
        if self.inverse.shape != (d_pixels, d_kept) or self.mean.shape != (d_pixels,):
            raise ShapeError(
                "Inconsistent whitening shapes: mean {}, forward {}, inverse {}".format(
                    self.mean.shape, self.forward.shape, self.inverse.shape
                )
            )

    @property
    def d_kept(self):
        return self.forward.shape[0]

    @property
    def d_pixels(self):
        return self.forward.shape[1]

    def as_dict(self):
        return {
            "mean": self.mean,
            "forward": self.forward,
            "inverse": self.inverse,
            "eigenvalues": self.eigenvalues,
        }

    @classmethod
    def from_dict(cls, arrays, retained_fraction=None):
        eigenvalues = np.asarray(arrays["eigenvalues"], dtype=np.float64)
        d_kept = np.asarray(arrays["forward"]).shape[0]
        if retained_fraction is None:
            retained_fraction = eigenvalues[:d_kept].sum() / eigenvalues.sum()
        return cls(
            arrays["mean"], arrays["forward"], arrays["inverse"], eigenvalues,
            retained_fraction,
        )


def _fix_signs(vectors):
    """Makes the largest magnitude entry of every column positive."""
    rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def fit_whitening(samples, target_fraction=DEFAULT_TARGET_FRACTION, eps=DEFAULT_EPS):
    """
    :param samples: (n, d_pixels) matrix of pixel vectors
    :param target_fraction: smallest fraction of the variance to keep
    :param eps: added to the eigenvalues before taking square roots
    :return: WhiteningTransform
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        raise ShapeError(f"Expected (n, d) samples, got shape {samples.shape}")
    if samples.shape[0] < 2:
        raise ArgumentError(f"At least 2 samples needed, got {samples.shape[0]}")
    if not 0.0 < target_fraction <= 1.0:
        raise ArgumentError(f"target_fraction must be in (0, 1], got {target_fraction}")

    mean = samples.mean(axis=0)
    centered = samples - mean
    cov = centered.T @ centered / (samples.shape[0] - 1)

    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    eigenvalues = np.clip(eigenvalues[::-1], 0.0, None)
    eigenvectors = _fix_signs(eigenvectors[:, ::-1])

    total = eigenvalues.sum()
    if total <= 0.0:
        raise DegenerateDataError("All samples are identical")

    cumulative = np.cumsum(eigenvalues) / total
    # Rounding may leave the full sum a hair below 1.
    keep = int(np.searchsorted(cumulative, target_fraction - 1e-12) + 1)
    keep = min(keep, eigenvalues.size)
    if keep == eigenvalues.size and target_fraction < 1.0:
        logger.warning("Keeping all %d components for fraction %.3f", keep, target_fraction)

    kept = eigenvectors[:, :keep]
    scale = np.sqrt(eigenvalues[:keep] + eps)
    retained = float(eigenvalues[:keep].sum() / total)
    logger.info(
        "Whitening keeps %d of %d components (%.2f%% of the variance)",
        keep, eigenvalues.size, 100 * retained,
    )
    return WhiteningTransform(
        mean=mean,
        forward=kept.T / scale[:, None],
        inverse=kept * scale[None, :],
        eigenvalues=eigenvalues,
        retained_fraction=retained,
    )


def apply(t, x):
    """Whitens a pixel vector, or the rows of an (n, d_pixels) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != t.d_pixels:
        raise ShapeError(f"Expected {t.d_pixels} pixels, got shape {x.shape}")
    return (x - t.mean) @ t.forward.T


def invert(t, z):
    """Maps whitened vectors (or rows) back to pixel space."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != t.d_kept:
        raise ShapeError(f"Expected {t.d_kept} components, got shape {z.shape}")
    return z @ t.inverse.T + t.mean
