"""
Central finite differences and the gradient check suites run by
``relseq gradcheck``.
"""
import logging
import time
import warnings

import numpy as np

from relseq.core_math import Rng
from relseq.evaluation.logreg import softmax_loss_and_grads
from relseq.exception import ArgumentError
from relseq.exception import FaultInjected
from relseq.model.gae import GaeParams
from relseq.model.gae import recon_loss_and_grads
from relseq.model.hgae import HgaeParams
from relseq.training.bptt import predictive_loss_and_grads

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-5
INSTANCE_STD = 0.4


def finite_difference_grads(loss_fn, params, h=1e-5):
    """
    ``(f(theta + h) - f(theta - h)) / 2h`` for every coordinate.

    :param loss_fn: called with a parameter structure of the same kind as
        ``params``, returns a float
    :param params: an array, or a dictionary name -> array
    :return: gradients shaped like params
    """
    if h <= 0:
        raise ArgumentError(f"Step must be positive, got {h}")

    single = not isinstance(params, dict)
    work = {"theta": params} if single else params
    work = {k: np.array(v, dtype=np.float64, copy=True) for k, v in work.items()}

    def _call():
        return float(loss_fn(work["theta"] if single else work))

    grads = {}
    for name, arr in work.items():
        flat = arr.reshape(-1)
        g = np.zeros(flat.size)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + h
            f_plus = _call()
            flat[j] = orig - h
            f_minus = _call()
            flat[j] = orig
            g[j] = (f_plus - f_minus) / (2.0 * h)
        grads[name] = g.reshape(arr.shape)

    return grads["theta"] if single else grads


def max_relative_error(analytic, numeric):
    """max |a - n| / max(1, |n|) over all entries of all arrays."""
    worst = 0.0
    for name, num in numeric.items():
        diff = np.abs(analytic[name] - num) / np.maximum(1.0, np.abs(num))
        if diff.size:
            worst = max(worst, float(diff.max()))
    return worst


class GradCheckResult(object):
    def __init__(self, path, instances, max_rel_error, tolerance, seconds):
        self.path = path
        self.instances = instances
        self.max_rel_error = max_rel_error
        self.tolerance = tolerance
        self.seconds = seconds

    @property
    def passed(self):
        return self.max_rel_error < self.tolerance

    def to_dict(self):
        return {
            "path": self.path,
            "instances": self.instances,
            "max_rel_error": self.max_rel_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seconds": self.seconds,
        }


def _dims(rng):
    # frame 4-8, factors 3-6, mappings 2-4
    return (
        int(rng.integers(4, 9)),
        int(rng.integers(3, 7)),
        int(rng.integers(2, 5)),
    )


def _gae(rng, dim, factors, mappings):
    return GaeParams.initialize(rng, dim, factors, mappings, INSTANCE_STD)


def _hgae(rng, dim, factors, mappings):
    return HgaeParams.initialize(
        rng, dim, factors, mappings, factors, mappings, INSTANCE_STD
    )


def _model_case(make, loss):
    """Instance builder for a loss over model parameters."""

    def _case(rng):
        dim, factors, mappings = _dims(rng)
        p = make(rng, dim, factors, mappings)
        rebuild = HgaeParams.from_dict if p.depth == 2 else GaeParams.from_dict
        data = loss.data(rng, dim)

        def analytic():
            _, grads = loss(p, data)
            return grads.as_dict()

        def numeric(arrays):
            return loss(rebuild(arrays), data)[0]

        return p.as_dict(), analytic, numeric

    return _case


class _Recon(object):
    def data(self, rng, dim):
        return rng.normal((dim, 3)), rng.normal((dim, 3))

    def __call__(self, p, data):
        return recon_loss_and_grads(p, data[0], data[1])


class _Predictive(object):
    def __init__(self, k, seed_frames):
        self.k = k
        self.seed_frames = seed_frames

    def data(self, rng, dim):
        return [rng.normal((dim, 2)) for _ in range(self.seed_frames + self.k)]

    def __call__(self, p, data):
        return predictive_loss_and_grads(p, data, self.k)


def _logreg_case(rng):
    dim = int(rng.integers(3, 7))
    classes = int(rng.integers(2, 5))
    X = rng.normal((10, dim))
    y = rng.integers(0, classes, 10)
    arrays = {"weights": rng.normal((classes, dim), 0.5), "bias": rng.normal(classes, 0.5)}
    l2 = 1e-2

    def analytic():
        return softmax_loss_and_grads(arrays["weights"], arrays["bias"], X, y, l2)[1]

    def numeric(_arrays):
        return softmax_loss_and_grads(_arrays["weights"], _arrays["bias"], X, y, l2)[0]

    return arrays, analytic, numeric


SUITES = {
    "recon-gae": _model_case(_gae, _Recon()),
    "pred1-gae": _model_case(_gae, _Predictive(1, 2)),
    "bptt-gae-k2": _model_case(_gae, _Predictive(2, 2)),
    "bptt-gae-k3": _model_case(_gae, _Predictive(3, 2)),
    "bptt-hgae-k1": _model_case(_hgae, _Predictive(1, 3)),
    "bptt-hgae-k2": _model_case(_hgae, _Predictive(2, 3)),
    "bptt-hgae-k3": _model_case(_hgae, _Predictive(3, 3)),
    "logreg": _logreg_case,
}


def check_path(path, instances=10, tolerance=DEFAULT_TOLERANCE, seed=0, h=1e-5,
               fault=False):
    """
    Compares analytic and finite difference gradients of one loss on
    ``instances`` random instances.

    :param fault: flip the sign of the analytic gradient (harness self test)
    """
    try:
        case = SUITES[path]
    except KeyError:
        raise ArgumentError(f"Unknown gradient path '{path}'")

    if fault:
        warnings.warn(f"Gradient of {path} sign-flipped", FaultInjected, stacklevel=2)

    start = time.perf_counter()
    worst = 0.0
    for i in range(instances):
        rng = Rng(seed).substream(i)
        arrays, analytic, numeric = case(rng)
        grads = analytic()
        if fault:
            grads = {k: -g for k, g in grads.items()}
        worst = max(worst, max_relative_error(grads, finite_difference_grads(numeric, arrays, h)))

    result = GradCheckResult(path, instances, worst, tolerance, time.perf_counter() - start)
    logger.info(
        "gradcheck %s: max relative error %.3g over %d instances (%s)",
        path, worst, instances, "ok" if result.passed else "FAILED",
    )
    return result


def run_gradcheck(paths=None, instances=10, tolerance=DEFAULT_TOLERANCE, seed=0,
                  fault=None):
    """Runs the named suites (all by default); ``fault`` names one to corrupt."""
    paths = paths or list(SUITES)
    return [
        check_path(p, instances, tolerance, seed, fault=(p == fault)) for p in paths
    ]
