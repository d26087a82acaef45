import logging

import numpy as np

from relseq.exception import ArgumentError

logger = logging.getLogger(__name__)

# Proportions of the 100k / 20k / 50k partition.
DEFAULT_FRACTIONS = (100 / 170, 20 / 170, 50 / 170)


def split_counts(n, sizes):
    """Counts from integer counts or from fractions of n."""
    if len(sizes) != 3:
        raise ArgumentError(f"Need three split sizes, got {sizes!r}")
    if all(isinstance(s, (int, np.integer)) for s in sizes):
        counts = [int(s) for s in sizes]
    else:
        if sum(sizes) > 1.0 + 1e-9:
            raise ArgumentError(f"Split fractions {sizes} sum to more than 1")
        counts = [int(np.floor(f * n)) for f in sizes]
    if min(counts) < 0:
        raise ArgumentError(f"Negative split size in {sizes!r}")
    if sum(counts) > n:
        raise ArgumentError(f"Splits {counts} need {sum(counts)} samples, only {n} given")
    return counts


def split_indices(n, sizes, rng):
    counts = split_counts(n, sizes)
    order = rng.permutation(n)
    a = counts[0]
    b = a + counts[1]
    c = b + counts[2]
    return order[:a], order[a:b], order[b:c]


def split_dataset(samples, sizes, rng):
    """
    Disjoint shuffled train, validation and test parts.

    :param samples: a list, an array, or anything with a ``subset`` method
    :param sizes: three counts, or three fractions of len(samples)
    :return: (train, valid, test) of the same kind as samples
    """
    parts = split_indices(len(samples), sizes, rng)
    logger.debug("Split %d samples into %s", len(samples), [len(p) for p in parts])
    if hasattr(samples, "subset"):
        return tuple(samples.subset(p) for p in parts)
    if isinstance(samples, np.ndarray):
        return tuple(samples[p] for p in parts)
    return tuple([samples[i] for i in p] for p in parts)
