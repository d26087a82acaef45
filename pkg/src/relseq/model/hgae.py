"""
Two layer (higher order) gated autoencoder.

The first layer maps pairs of frames to first order mappings, the second
layer maps pairs of first order mappings to second order mappings. A
prediction goes top-down: the second order mapping transforms the newest
first order mapping, which in turn transforms the newest frame.
"""
import logging

import numpy as np

from relseq import DIVERGENCE_LIMIT
from relseq import SEED_FRAMES
from relseq.core_math import as_columns
from relseq.core_math import sample_gaussian
from relseq.exception import ArgumentError
from relseq.exception import DivergenceError
from relseq.exception import NonFiniteError
from relseq.exception import ShapeError
from relseq.model.gae import GaeParams
from relseq.model.gae import infer_mappings
from relseq.model.gae import predict_step
from relseq.model.gae import reconstruct_x2

logger = logging.getLogger(__name__)


class HgaeParams(object):
    depth = 2

    def __init__(self, layer1, layer2):
        if layer2.dim_in != layer1.num_mappings:
            raise ShapeError(
                "Layer 2 takes {} inputs but layer 1 has {} mappings".format(
                    layer2.dim_in, layer1.num_mappings
                )
            )
        self.layer1 = layer1
        self.layer2 = layer2

    @property
    def dim_in(self):
        return self.layer1.dim_in

    @classmethod
    def initialize(cls, rng, dim_in, num_factors, num_mappings,
                   num_factors2=None, num_mappings2=None, std=0.01):
        layer1 = GaeParams.initialize(rng, dim_in, num_factors, num_mappings, std)
        layer2 = GaeParams(
            U=sample_gaussian(rng, num_factors2 or num_factors, num_mappings, std),
            V=sample_gaussian(rng, num_factors2 or num_factors, num_mappings, std),
            W=sample_gaussian(
                rng, num_mappings2 or num_mappings, num_factors2 or num_factors, std
            ),
        )
        return cls(layer1, layer2)

    def as_dict(self):
        _arrays = self.layer1.as_dict(1)
        _arrays.update(self.layer2.as_dict(2))
        return _arrays

    @classmethod
    def from_dict(cls, arrays):
        return cls(GaeParams.from_dict(arrays, 1), GaeParams.from_dict(arrays, 2))

    def copy(self):
        return HgaeParams(self.layer1.copy(), self.layer2.copy())

    def is_finite(self):
        return self.layer1.is_finite() and self.layer2.is_finite()

    def __eq__(self, other):
        if not isinstance(other, HgaeParams):
            return False
        return self.layer1 == other.layer1 and self.layer2 == other.layer2

    def __repr__(self):
        return f"HgaeParams(layer1={self.layer1!r}, layer2={self.layer2!r})"


def params_from_arrays(arrays):
    """GaeParams or HgaeParams depending on which arrays are present."""
    if all(f"{n}2" in arrays for n in "UVW"):
        return HgaeParams.from_dict(arrays)
    if all(f"{n}1" in arrays for n in "UVW"):
        return GaeParams.from_dict(arrays, 1)
    raise ArgumentError(f"No layer parameters among {sorted(arrays)}")


class RolloutConfig(object):
    def __init__(self, k=1, seed_frames=2):
        if k < 1:
            raise ArgumentError(f"Prediction horizon must be at least 1, got {k}")
        if seed_frames not in (2, 3):
            raise ArgumentError(f"seed_frames must be 2 or 3, got {seed_frames}")
        self.k = k
        self.seed_frames = seed_frames

    @classmethod
    def for_model(cls, p, k=1):
        return cls(k=k, seed_frames=SEED_FRAMES[p.depth])


def infer_hierarchy(p, x0, x1, x2):
    m1_a = infer_mappings(p.layer1, x0, x1)
    m1_b = infer_mappings(p.layer1, x1, x2)
    m2 = infer_mappings(p.layer2, m1_a, m1_b)
    return m1_a, m1_b, m2


def predict_mapping(p, m1_prev, m2):
    """Linear prediction of the next first order mapping; no squashing."""
    return reconstruct_x2(p.layer2, m1_prev, m2)


def predict_frame(p, x_curr, m1_pred):
    return reconstruct_x2(p.layer1, x_curr, m1_pred)


def next_frame(p, window):
    """One prediction from the last ``seed_frames`` entries of window."""
    if p.depth == 1:
        return predict_step(p, window[-2], window[-1])

    _, m1_b, m2 = infer_hierarchy(p, window[-3], window[-2], window[-1])
    return predict_frame(p, window[-1], predict_mapping(p, m1_b, m2))


def rollout(p, seeds, steps):
    """
    Predict ``steps`` frames after the seed frames.

    Each prediction is appended to the sequence and the mappings are inferred
    again on the newest window, whether its frames are observed or predicted.
    Only the last ``seed_frames`` seeds are used.

    :param p: GaeParams or HgaeParams
    :param seeds: frames (vectors, or column batches of equal shape)
    :param steps: number of frames to predict
    :return: list of predicted frames
    """
    need = SEED_FRAMES[p.depth]
    if len(seeds) < need:
        raise ArgumentError(
            f"A depth {p.depth} model needs {need} seed frames, got {len(seeds)}"
        )
    if steps < 0:
        raise ArgumentError(f"Negative number of steps {steps}")

    if len(seeds) > need:
        logger.debug("Using the last %d of %d seed frames", need, len(seeds))
    window = [np.asarray(s, dtype=np.float64) for s in seeds[-need:]]
    shapes = {w.shape for w in window}
    if len(shapes) != 1:
        raise ShapeError(f"Seed frames differ in shape: {sorted(shapes)}")
    as_columns(window[0])

    predictions = []
    for step in range(1, steps + 1):
        try:
            frame = next_frame(p, window)
        except NonFiniteError:
            raise DivergenceError(f"Non-finite prediction at step {step}", step=step)

        peak = np.max(np.abs(frame)) if frame.size else 0.0
        if peak > DIVERGENCE_LIMIT:
            raise DivergenceError(
                f"Prediction magnitude {peak:.3g} exceeds {DIVERGENCE_LIMIT:g} "
                f"at step {step}",
                step=step,
            )
        predictions.append(frame)
        window = window[1:] + [frame]

    logger.debug("Rolled out %d steps with a depth %d model", steps, p.depth)
    return predictions
