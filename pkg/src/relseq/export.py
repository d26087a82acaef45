"""
Binary PGM (P5, maxval 255) images of frames and filters.

Every sequence is scaled to [0, 255] with its own minimum and maximum, so
the frames of one sequence stay comparable with each other.
"""
import logging
import os

import numpy as np

from relseq.container import atomic_write
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

MAXVAL = 255


def side_length(d_pixels):
    size = int(round(np.sqrt(d_pixels)))
    if size * size != d_pixels:
        raise ShapeError(f"Frames of {d_pixels} pixels are not square images")
    return size


def normalize_sequence(frames):
    """
    :param frames: (T, d_pixels) array of one sequence
    :return: (T, size, size) uint8 array
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2:
        raise ShapeError(f"Expected (T, d) frames, got shape {frames.shape}")
    size = side_length(frames.shape[1])
    lo = frames.min() if frames.size else 0.0
    span = (frames.max() - lo) if frames.size else 0.0
    if span > 0:
        scaled = np.rint((frames - lo) / span * MAXVAL)
    else:
        scaled = np.zeros_like(frames)
    return scaled.astype(np.uint8).reshape(frames.shape[0], size, size)


def pgm_bytes(img):
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ShapeError(f"Expected a 2-d uint8 image, got {img.dtype} {img.shape}")
    rows, cols = img.shape
    return b"P5\n%d %d\n%d\n" % (cols, rows, MAXVAL) + img.tobytes()


def write_sequence(directory, prefix, frames):
    """Writes ``<prefix>_fNN.pgm`` for every frame, returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for t, img in enumerate(normalize_sequence(frames)):
        path = os.path.join(directory, f"{prefix}_f{t:02d}.pgm")
        atomic_write(path, pgm_bytes(img))
        paths.append(path)
    logger.debug("Wrote %d images %s_f*.pgm to %s", len(paths), prefix, directory)
    return paths


def filter_pairs(U, V, inverse=None):
    """
    Rows of U and V as pixel space images.

    :param inverse: (d_pixels, d_kept) dewhitening matrix, or None when the
        filters already live in pixel space
    :return: (num_factors, 2, d_pixels)
    """
    U = np.asarray(U, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    if inverse is not None:
        U = U @ np.asarray(inverse).T
        V = V @ np.asarray(inverse).T
    return np.stack([U, V], axis=1)
