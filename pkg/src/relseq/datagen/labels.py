"""
Discretization of transformation parameters into 8 classes.

Shift vectors: the quadrant of the vector, plus 4 if its length reaches the
threshold beta. Angles: equal width bins.
"""
import logging
import math

import numpy as np

from relseq.exception import ArgumentError

logger = logging.getLogger(__name__)

NUM_CLASSES = 8


class ShiftLabelSpec(object):
    def __init__(self, beta, alpha):
        if not 0 < beta < alpha:
            raise ArgumentError(f"Need 0 < beta < alpha, got beta={beta}, alpha={alpha}")
        self.beta = float(beta)
        self.alpha = float(alpha)

    def to_dict(self):
        return {"beta": self.beta, "alpha": self.alpha}


def fit_beta(vectors):
    """The median vector length: half of the vectors fall on either side."""
    norms = np.hypot(*np.asarray(vectors, dtype=np.float64).reshape(-1, 2).T)
    return float(np.median(norms))


def fit_shift_spec(vectors, bound=None):
    """
    beta is the median length, alpha the largest length or ``bound`` if that
    is larger.

    When all lengths coincide (a single sample, or a zero range) alpha is
    widened to twice beta. When the median length is zero, beta becomes half
    of alpha.

    :param bound: the largest length the generator can produce
    """
    vectors = np.asarray(vectors, dtype=np.float64).reshape(-1, 2)
    if len(vectors) == 0:
        raise ArgumentError("No vectors to fit shift labels on")
    alpha = max(float(np.hypot(vectors[:, 0], vectors[:, 1]).max()), bound or 0.0)
    beta = fit_beta(vectors)
    if beta <= 0 or alpha <= beta:
        logger.warning(
            "Degenerate shift lengths (median %.6g, max %.6g) over %d vectors",
            beta, alpha, len(vectors),
        )
        if alpha <= beta:
            alpha = 2.0 * beta if beta > 0 else 1.0
        if beta <= 0:
            beta = alpha / 2.0
    return ShiftLabelSpec(beta, alpha)


def quadrant(x, y):
    if y >= 0:
        return 0 if x >= 0 else 1
    return 2 if x < 0 else 3


def label_shift(v, spec):
    x, y = float(v[0]), float(v[1])
    magnitude = math.hypot(x, y)
    if magnitude > spec.alpha * (1 + 1e-12):
        raise ArgumentError(f"|{(x, y)}| = {magnitude} exceeds alpha = {spec.alpha}")
    q = quadrant(x, y)
    return q if magnitude < spec.beta else q + 4


def label_angle(theta, bins=NUM_CLASSES, limit=math.pi):
    """
    ``floor((theta + limit) / (2 * limit / bins))`` clamped to the last bin.

    :param limit: angles live in (-limit, limit); pi for rotation angles,
        the acceleration bound for angular accelerations
    """
    theta = float(theta)
    if not -limit <= theta <= limit:
        raise ArgumentError(f"Angle {theta} outside (-{limit}, {limit})")
    # Same as the closed form above, arranged so that bin edges such as
    # theta = pi / 2 land exactly.
    return min(int(math.floor((theta / limit + 1.0) * bins / 2.0)), bins - 1)
