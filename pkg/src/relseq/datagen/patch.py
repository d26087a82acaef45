"""
Image patch sources: procedural sinusoid mixtures, or patches read from a
container file.
"""
import logging

import numpy as np

from relseq.container import read_container
from relseq.exception import ArgumentError
from relseq.exception import ContainerError
from relseq.exception import DegenerateDataError
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

NOISE_LEVEL = 0.05


def normalize(patch):
    patch = patch - patch.mean()
    std = patch.std()
    if std == 0.0:
        raise DegenerateDataError("Constant patch")
    return patch / std


def make_patch(rng, size):
    """
    A sum of 3 to 6 plane waves with random wave vector and phase plus a
    little noise, scaled to zero mean and unit variance.

    Wave vectors have integer cycle counts per patch, so the pattern is
    periodic on the patch and wraps around seamlessly. Amplitudes fall off
    as 1/frequency, like in natural images.

    :return: (size * size,) vector, row-major
    """
    if size < 4:
        raise ArgumentError(f"Patch size must be at least 4, got {size}")

    kmax = max(1, size // 4)
    yy, xx = np.mgrid[0:size, 0:size]
    img = np.zeros((size, size))
    for _ in range(int(rng.integers(3, 7))):
        kx, ky = 0, 0
        while kx == 0 and ky == 0:
            kx, ky = (int(k) for k in rng.integers(-kmax, kmax + 1, 2))
        amplitude = rng.uniform(0.5, 1.5) / np.hypot(kx, ky)
        phase = rng.uniform(0.0, 2 * np.pi)
        img += amplitude * np.cos(2 * np.pi * (kx * xx + ky * yy) / size + phase)

    img += NOISE_LEVEL * rng.normal((size, size))
    return normalize(img).reshape(-1)


def load_patches(path):
    """
    Reads user supplied patches from the array "patches" of a container,
    shape (n, size * size) or (n, size, size).

    :return: (n, size * size) array, every row normalized
    """
    arrays, _ = read_container(path)
    try:
        patches = np.asarray(arrays["patches"], dtype=np.float64)
    except KeyError:
        raise ContainerError(f"No 'patches' array in {path}")

    patches = patches.reshape(patches.shape[0], -1)
    size = int(round(np.sqrt(patches.shape[1])))
    if size * size != patches.shape[1]:
        raise ShapeError(f"Patches of {patches.shape[1]} pixels are not square")
    logger.info("Loaded %d patches of %dx%d from %s", patches.shape[0], size, size, path)
    return np.stack([normalize(p) for p in patches])


class PatchSource(object):
    def __init__(self, size, patches=None):
        self.size = size
        self.patches = patches
        if patches is not None and patches.shape[1] != size * size:
            raise ShapeError(
                f"Loaded patches have {patches.shape[1]} pixels, not {size}x{size}"
            )

    def draw(self, rng):
        if self.patches is None:
            return make_patch(rng, self.size)
        return self.patches[int(rng.integers(0, self.patches.shape[0]))]
