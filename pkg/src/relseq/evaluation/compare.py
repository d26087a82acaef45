"""
One step predictive against reconstructive training of a one layer model.

Both arms start from the same reconstructive warm start. The reconstructive
arm then keeps minimizing the reconstruction error, the predictive arm the
one step prediction error, for the same number of epochs. An arm is scored by
the test accuracy of a classifier on the first mapping of each sequence and
by its one step prediction error on the test sequences.
"""
import logging

import numpy as np

from relseq.evaluation.descriptor import descriptor_matrix
from relseq.evaluation.logreg import accuracy
from relseq.evaluation.logreg import train_logreg
from relseq.evaluation.metrics import rollout_mse
from relseq.exception import ArgumentError
from relseq.model.gae import predict_step
from relseq.training.trainer import predictive_finetune
from relseq.training.trainer import pretrain_gae

logger = logging.getLogger(__name__)

ARMS = ("reconstructive", "predictive")


class Comparison(object):
    def __init__(self, min_gap):
        self.min_gap = min_gap
        self.records = []

    def add(self, seed, arm, **scores):
        self.records.append(dict(scores, seed=seed, arm=arm))

    def mean(self, arm, key="test_acc"):
        vals = [r[key] for r in self.records if r["arm"] == arm]
        return float(np.mean(vals)) if vals else None

    @property
    def gap(self):
        """Mean test accuracy of the predictive arm minus the reconstructive one, in points."""
        pred, rec = self.mean("predictive"), self.mean("reconstructive")
        if pred is None or rec is None:
            return None
        return 100.0 * (pred - rec)

    @property
    def passed(self):
        return self.gap is not None and self.gap >= self.min_gap

    def to_dict(self):
        return {
            "records": self.records,
            "mean_test_acc": {arm: self.mean(arm) for arm in ARMS},
            "mean_prediction_mse": {arm: self.mean(arm, "prediction_mse") for arm in ARMS},
            "gap_points": self.gap,
            "min_gap": self.min_gap,
            "passed": self.passed,
        }


def prediction_error(p, sequences):
    """Mean squared one step prediction error of frame 3 from frames 1 and 2."""
    x0, x1, x2 = (np.ascontiguousarray(sequences[:, t, :].T) for t in range(3))
    return rollout_mse([predict_step(p, x0, x1)], [x2], x1).mean


def _score(p, X_of, labels, parts, classifier_cfg, num_classes, test_frames):
    X = X_of(p)
    train, valid, test = ((X[i], labels[i]) for i in parts)
    classifier = train_logreg(train[0], train[1], classifier_cfg, num_classes)
    return {
        "train_acc": accuracy(classifier, *train),
        "valid_acc": accuracy(classifier, *valid) if len(valid[1]) else None,
        "test_acc": accuracy(classifier, *test),
        "prediction_mse": prediction_error(p, test_frames),
    }


def compare_objectives(frames, labels, parts, cfg, classifier_cfg, seeds=(0, 1, 2),
                       warmup_epochs=50, num_factors=64, num_mappings=64, min_gap=1.0):
    """
    :param frames: (n, T, d) model space sequences, T >= 3
    :param labels: n class labels
    :param parts: train, valid and test index arrays
    :param cfg: TrainConfig of both arms; epochs is the length of each arm
        after the warm start, seed is replaced by each of ``seeds``
    :param classifier_cfg: TrainConfig of the classifier
    :return: Comparison
    """
    frames = np.asarray(frames, dtype=np.float64)
    labels = np.asarray(labels)
    if frames.ndim != 3 or frames.shape[1] < 3:
        raise ArgumentError(f"Need (n, T >= 3, d) sequences, got shape {frames.shape}")
    if len(labels) != frames.shape[0]:
        raise ArgumentError(f"{len(labels)} labels for {frames.shape[0]} sequences")
    if not seeds:
        raise ArgumentError("No seeds to compare over")
    train_idx, _, test_idx = parts
    if len(train_idx) == 0 or len(test_idx) == 0:
        raise ArgumentError("Comparison needs non-empty train and test parts")

    num_classes = int(labels.max()) + 1
    train_frames = frames[train_idx]
    test_frames = frames[test_idx]

    def X_of(p):
        return descriptor_matrix(p, frames, "m1_first")

    result = Comparison(min_gap)
    for seed in seeds:
        arm_cfg = cfg.update(seed=seed)
        warm, _ = pretrain_gae(
            train_frames, arm_cfg.update(epochs=warmup_epochs), num_factors, num_mappings,
            phase="warm-start",
        )
        rec, rec_report = pretrain_gae(train_frames, arm_cfg, init=warm)
        pred, pred_report = predictive_finetune(
            warm, train_frames, arm_cfg.update(horizon_schedule=[(0, 1)])
        )
        for arm, p, report in (("reconstructive", rec, rec_report),
                               ("predictive", pred, pred_report)):
            scores = _score(p, X_of, labels, parts, classifier_cfg, num_classes, test_frames)
            scores["final_loss"] = report.losses[-1] if len(report) else None
            result.add(seed, arm, **scores)
            logger.info(
                "seed %d %s: test accuracy %.4f, prediction MSE %.4g",
                seed, arm, scores["test_acc"], scores["prediction_mse"],
            )

    logger.info(
        "Predictive minus reconstructive test accuracy: %.2f points (need %.2f)",
        result.gap, min_gap,
    )
    return result
