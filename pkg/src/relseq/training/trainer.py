"""
Training loops: reconstructive pretraining of either layer and predictive
finetuning with a growing prediction horizon.
"""
import json
import logging
import time

import numpy as np

from relseq import SEED_FRAMES
from relseq.config import Configuration
from relseq.core_math import Rng
from relseq.exception import ArgumentError
from relseq.exception import ConfigurationError
from relseq.exception import DivergenceError
from relseq.exception import NonFiniteError
from relseq.exception import ShapeError
from relseq.model.gae import GaeParams
from relseq.model.gae import infer_mappings
from relseq.model.gae import recon_loss_and_grads
from relseq.model.hgae import HgaeParams
from relseq.training.bptt import predictive_loss_and_grads
from relseq.training.optimizer import SgdMomentum
from relseq.training.optimizer import add_l2

logger = logging.getLogger(__name__)

# Substream of the run seed used for parameter initialization; epochs use
# substreams 0, 1, 2, ...
INIT_STREAM = 2 ** 32


def parse_horizon_schedule(spec):
    """
    Accepts ``"0:1,400:2"`` or a list of (epoch_start, k) pairs.

    :return: list of (epoch_start, k) tuples sorted by epoch_start
    """
    if isinstance(spec, str):
        pairs = []
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                start, k = part.split(":")
                pairs.append((int(start), int(k)))
            except ValueError:
                raise ConfigurationError(f"Malformed horizon schedule entry '{part}'")
    else:
        try:
            pairs = [(int(start), int(k)) for start, k in spec]
        except (TypeError, ValueError):
            raise ConfigurationError(f"Malformed horizon schedule {spec!r}")

    if not pairs:
        raise ConfigurationError("Empty horizon schedule")

    pairs.sort()
    starts = [s for s, _ in pairs]
    if len(set(starts)) != len(starts):
        raise ConfigurationError(f"Repeated epoch in horizon schedule {pairs}")
    ks = [k for _, k in pairs]
    if min(ks) < 1:
        raise ConfigurationError(f"Horizon below 1 in {pairs}")
    if any(b < a for a, b in zip(ks, ks[1:])):
        raise ConfigurationError(f"Horizon must not decrease: {pairs}")
    return pairs


def format_horizon_schedule(pairs):
    return ",".join(f"{s}:{k}" for s, k in pairs)


class TrainConfig(Configuration):
    c_param = {
        "learning_rate": (float, False, 0.001),
        "momentum": (float, False, 0.9),
        "epochs": (int, False, 100),
        "batch_size": (int, False, 100),
        "horizon_schedule": (parse_horizon_schedule, False, [(0, 1)]),
        "l2": (float, False, 0.0),
        "seed": (int, False, 0),
        "determinism": (bool, False, True),
        "max_grad_norm": (float, False, None),
        "init_std": (float, False, 0.01),
    }

    def verify(self):
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigurationError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.learning_rate < 0:
            raise ConfigurationError(f"Negative learning rate {self.learning_rate}")
        if self.epochs < 0:
            raise ConfigurationError(f"Negative number of epochs {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be positive, got {self.batch_size}")
        if self.l2 < 0:
            raise ConfigurationError(f"Negative l2 coefficient {self.l2}")
        if self.max_grad_norm is not None and self.max_grad_norm <= 0:
            raise ConfigurationError(f"max_grad_norm must be positive, got {self.max_grad_norm}")
        if self.init_std < 0:
            raise ConfigurationError(f"Negative init_std {self.init_std}")
        self.horizon_schedule = [tuple(p) for p in self.horizon_schedule]

    def horizon_at(self, epoch):
        k = self.horizon_schedule[0][1]
        for start, _k in self.horizon_schedule:
            if start <= epoch:
                k = _k
        return k

    @property
    def max_horizon(self):
        return max(k for _, k in self.horizon_schedule)


class TrainReport(object):
    def __init__(self, phase=""):
        self.phase = phase
        self.records = []
        self.checkpoint = None

    def add(self, epoch, k, loss, seconds, steps):
        self.records.append(
            {"epoch": epoch, "k": k, "loss": loss, "seconds": seconds, "steps": steps}
        )

    @property
    def losses(self):
        return [r["loss"] for r in self.records]

    @property
    def steps(self):
        return sum(r["steps"] for r in self.records)

    @property
    def seconds(self):
        return sum(r["seconds"] for r in self.records)

    def to_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    def __len__(self):
        return len(self.records)


class WindowSampler(object):
    """
    Every run of ``length`` consecutive frames in a (n, T, d) sequence array,
    addressed by a flat window index.
    """

    def __init__(self, sequences, length):
        sequences = np.asarray(sequences, dtype=np.float64)
        if sequences.ndim != 3:
            raise ShapeError(f"Expected (n, T, d) sequences, got shape {sequences.shape}")
        if sequences.shape[1] < length:
            raise ArgumentError(
                f"Sequences of length {sequences.shape[1]} are shorter than {length}"
            )
        self.sequences = sequences
        self.length = length
        self.per_sequence = sequences.shape[1] - length + 1
        self.offsets = np.arange(length)

    def __len__(self):
        return self.sequences.shape[0] * self.per_sequence

    def block(self, idx):
        """The windows as a list of ``length`` column batches (d, len(idx))."""
        idx = np.asarray(idx)
        seq = idx // self.per_sequence
        start = idx % self.per_sequence
        _block = self.sequences[seq[:, None], start[:, None] + self.offsets]
        return [np.ascontiguousarray(_block[:, j, :].T) for j in range(self.length)]


def _rebuild(params):
    if isinstance(params, HgaeParams):
        return HgaeParams.from_dict
    return lambda arrays: GaeParams.from_dict(arrays, 1)


def shuffle_stream(cfg):
    """
    The random stream minibatch order is drawn from.

    With ``determinism`` on this is a pure function of ``cfg.seed``; otherwise
    a seed is drawn from OS entropy and logged.
    """
    if cfg.determinism:
        return Rng(cfg.seed)
    seed = np.random.SeedSequence().entropy & 0xFFFFFFFFFFFFFFFF
    logger.info("Non-deterministic shuffling, drawn seed %d", seed)
    return Rng(seed)


def _run_epochs(params, cfg, phase, sampler_for, loss_and_grads):
    rng = shuffle_stream(cfg)
    rebuild = _rebuild(params)
    optimizer = SgdMomentum(cfg.learning_rate, cfg.momentum, cfg.max_grad_norm)
    arrays = params.as_dict()
    report = TrainReport(phase)

    for epoch in range(cfg.epochs):
        k = cfg.horizon_at(epoch)
        sampler = sampler_for(k)
        n = len(sampler)
        if n == 0:
            raise ArgumentError(f"{phase}: no training windows")
        start = time.perf_counter()
        order = rng.substream(epoch).permutation(n)
        steps_before = optimizer.steps
        total = 0.0

        for b0 in range(0, n, cfg.batch_size):
            idx = order[b0:b0 + cfg.batch_size]
            try:
                loss, grads = loss_and_grads(rebuild(arrays), sampler.block(idx), k)
                loss, _grads = add_l2(loss, grads.as_dict(), arrays, cfg.l2)
                if not np.isfinite(loss):
                    raise NonFiniteError("Non-finite loss")
                arrays = optimizer.step(arrays, _grads)
            except NonFiniteError as err:
                raise DivergenceError(
                    f"{phase}: training diverged in epoch {epoch + 1} ({err})",
                    epoch=epoch + 1,
                )
            total += loss * len(idx)
            logger.debug("%s epoch %d batch %d loss %.6g", phase, epoch + 1, b0, loss)

        seconds = time.perf_counter() - start
        epoch_loss = total / n
        report.add(epoch + 1, k, epoch_loss, seconds, optimizer.steps - steps_before)
        logger.info(
            "%s epoch %d/%d k=%d loss %.6g (%.2fs)",
            phase, epoch + 1, cfg.epochs, k, epoch_loss, seconds,
        )

    return rebuild(arrays), report


def _recon_loss(p, block, k):
    return recon_loss_and_grads(p, block[0], block[1])


def pretrain_gae(data, cfg, num_factors=64, num_mappings=64, init=None,
                 phase="pretrain-l1"):
    """
    Reconstructive training on pairs of subsequent frames.

    :param data: (n, T, d) array; every pair of consecutive frames is a
        training pair, so (n, 2, d) is a plain list of pairs
    :param cfg: TrainConfig
    :param init: optional GaeParams to start from
    :return: (GaeParams, TrainReport)
    """
    sampler = WindowSampler(data, 2)
    if init is None:
        init = GaeParams.initialize(
            Rng(cfg.seed).substream(INIT_STREAM),
            sampler.sequences.shape[2], num_factors, num_mappings, cfg.init_std,
        )
    logger.info(
        "%s on %d pairs with %r", phase, len(sampler), init
    )
    return _run_epochs(init, cfg, phase, lambda k: sampler, _recon_loss)


def mapping_pairs(l1, triples):
    """
    First order mappings of every triple of consecutive frames.

    :param l1: trained first layer
    :param triples: (n, T, d) array with T >= 3
    :return: (n * (T - 2), 2, num_mappings) array of (m1_a, m1_b) pairs
    """
    sampler = WindowSampler(triples, 3)
    x0, x1, x2 = sampler.block(np.arange(len(sampler)))
    m1_a = infer_mappings(l1, x0, x1)
    m1_b = infer_mappings(l1, x1, x2)
    return np.stack([m1_a.T, m1_b.T], axis=1)


def pretrain_hgae_layer2(l1, triples, cfg, num_factors=None, num_mappings=None,
                         init=None):
    """
    Reconstructive pretraining of the second layer on first order mapping
    pairs. The first layer is only read.

    :return: (GaeParams for layer 2, TrainReport)
    """
    pairs = mapping_pairs(l1, triples)
    return pretrain_gae(
        pairs, cfg,
        num_factors=num_factors or l1.num_factors,
        num_mappings=num_mappings or l1.num_mappings,
        init=init,
        phase="pretrain-l2",
    )


def _predictive_loss(p, block, k):
    return predictive_loss_and_grads(p, block, k)


def predictive_finetune(params, sequences, cfg):
    """
    Minimizes the k-step prediction error, k following the configured
    horizon schedule, with gradients through the whole unrolled rollout.

    :param params: GaeParams or HgaeParams
    :param sequences: (n, T, d) array
    :return: (params, TrainReport)
    """
    sequences = np.asarray(sequences, dtype=np.float64)
    s = SEED_FRAMES[params.depth]
    need = s + cfg.max_horizon
    if sequences.ndim != 3 or sequences.shape[1] < need:
        raise ArgumentError(
            "Sequences of shape {} are too short for {} seed frames and "
            "horizon {}".format(sequences.shape, s, cfg.max_horizon)
        )

    samplers = {}

    def sampler_for(k):
        if k not in samplers:
            samplers[k] = WindowSampler(sequences, s + k)
        return samplers[k]

    logger.info(
        "finetune %r on %d sequences, schedule %s",
        params, sequences.shape[0], format_horizon_schedule(cfg.horizon_schedule),
    )
    return _run_epochs(params, cfg, "finetune", sampler_for, _predictive_loss)
