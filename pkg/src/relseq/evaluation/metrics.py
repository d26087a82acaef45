import logging

import numpy as np

from relseq.exception import ArgumentError
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)


class RolloutError(object):
    """Per step mean squared errors of a rollout and of the persistence baseline."""

    def __init__(self, per_step, baseline):
        self.per_step = list(per_step)
        self.baseline = list(baseline)

    @property
    def mean(self):
        return float(np.mean(self.per_step)) if self.per_step else 0.0

    @property
    def baseline_mean(self):
        return float(np.mean(self.baseline)) if self.baseline else 0.0

    def to_dict(self):
        return {
            "per_step": self.per_step,
            "mean": self.mean,
            "baseline_per_step": self.baseline,
            "baseline_mean": self.baseline_mean,
        }


def _stack(frames):
    return np.stack([np.asarray(f, dtype=np.float64) for f in frames])


def rollout_mse(pred, truth, last_seed=None):
    """
    :param pred: predicted frames, each a vector or a column batch
    :param truth: the true frames at the same steps
    :param last_seed: the last observed frame, which the persistence baseline
        repeats; defaults to truth[0] when absent
    :return: RolloutError; MSE per step is averaged over entries
    """
    if len(pred) != len(truth):
        raise ShapeError(f"{len(pred)} predictions for {len(truth)} true frames")
    if not pred:
        return RolloutError([], [])

    _pred = _stack(pred)
    _truth = _stack(truth)
    if _pred.shape != _truth.shape:
        raise ShapeError(f"Prediction shape {_pred.shape} vs truth {_truth.shape}")

    if last_seed is None:
        last_seed = _truth[0]
    last_seed = np.asarray(last_seed, dtype=np.float64)
    if last_seed.shape != _truth.shape[1:]:
        raise ShapeError(f"Seed shape {last_seed.shape} vs frame shape {_truth.shape[1:]}")

    axes = tuple(range(1, _pred.ndim))
    per_step = np.mean((_pred - _truth) ** 2, axis=axes)
    baseline = np.mean((last_seed[None] - _truth) ** 2, axis=axes)
    return RolloutError(per_step.tolist(), baseline.tolist())


def frame_variance(frames):
    frames = np.asarray(frames, dtype=np.float64)
    if frames.size == 0:
        raise ArgumentError("No frames")
    return float(np.var(frames))
