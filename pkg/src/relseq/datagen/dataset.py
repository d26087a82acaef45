import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from relseq.exception import ShapeError

logger = logging.getLogger(__name__)

NO_LABEL = -1
GEN_PARAMS_WIDTH = 4


class SequenceSample(object):
    """
    One generated sequence.

    :param frames: (T, d) pixel space frames
    :param params: generator record, e.g. velocity and acceleration
    :param label: class label or None
    """

    def __init__(self, frames, params, label=None):
        self.frames = np.asarray(frames, dtype=np.float64)
        if self.frames.ndim != 2:
            raise ShapeError(f"Frames must be (T, d), got shape {self.frames.shape}")
        self.params = params
        self.label = label

    def gen_params(self):
        """The generator record packed in a fixed width vector."""
        vec = np.zeros(GEN_PARAMS_WIDTH)
        _flat = np.concatenate([np.ravel(v) for v in self.params.values()])[:GEN_PARAMS_WIDTH]
        vec[:_flat.size] = _flat
        return vec


class Dataset(object):
    def __init__(self, frames, labels=None, gen_params=None, meta=None):
        self.frames = np.asarray(frames, dtype=np.float64)
        if self.frames.ndim != 3:
            raise ShapeError(f"Frames must be (n, T, d), got shape {self.frames.shape}")
        n = self.frames.shape[0]
        if labels is None:
            labels = np.full(n, NO_LABEL, dtype=np.int64)
        if gen_params is None:
            gen_params = np.zeros((n, GEN_PARAMS_WIDTH))
        self.labels = np.asarray(labels, dtype=np.int64)
        self.gen_params = np.asarray(gen_params, dtype=np.float64)
        if self.labels.shape != (n,) or self.gen_params.shape[0] != n:
            raise ShapeError(
                "{} sequences but labels {} and gen_params {}".format(
                    n, self.labels.shape, self.gen_params.shape
                )
            )
        self.meta = meta or {}

    def __len__(self):
        return self.frames.shape[0]

    @property
    def labeled(self):
        return bool(np.all(self.labels >= 0)) and len(self) > 0

    def subset(self, idx):
        return Dataset(self.frames[idx], self.labels[idx], self.gen_params[idx], self.meta)

    @classmethod
    def from_samples(cls, samples, meta=None):
        labels = [NO_LABEL if s.label is None else s.label for s in samples]
        return cls(
            np.stack([s.frames for s in samples]),
            np.array(labels, dtype=np.int64),
            np.stack([s.gen_params() for s in samples]),
            meta,
        )

    def as_dict(self):
        return {
            "frames": self.frames.astype(np.float32),
            "labels": self.labels,
            "gen_params": self.gen_params.astype(np.float32),
        }

    @classmethod
    def from_dict(cls, arrays, meta=None):
        return cls(
            arrays["frames"], arrays.get("labels"), arrays.get("gen_params"), meta
        )


def generate_samples(make_one, rng, n, workers=1):
    """
    Calls ``make_one(rng.substream(i))`` for i in range(n). Results do not
    depend on the number of workers.
    """
    if workers <= 1 or n < 2:
        return [make_one(rng.substream(i)) for i in range(n)]

    logger.debug("Generating %d samples with %d workers", n, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: make_one(rng.substream(i)), range(n)))


class SequenceGenerator(object):
    """
    Base class of the registered generators. ``parameters`` lists the
    constructor arguments, which are also recorded in the dataset meta.
    """
    parameters = ()
    labeled = True

    def __init__(self, kind="", **kwargs):
        self.kind = kind
        for key in self.parameters:
            setattr(self, key, kwargs.get(key))

    def config(self):
        return {key: getattr(self, key) for key in self.parameters}

    def sample_fn(self):
        """A function rng -> SequenceSample."""
        raise NotImplementedError

    def assign_labels(self, samples):
        """Sets sample labels, returns labelling information for the meta."""
        return {}

    def generate(self, rng, n, workers=1):
        samples = generate_samples(self.sample_fn(), rng, n, workers)
        meta = {
            "generator": self.kind,
            "config": self.config(),
            "n": n,
            "seed": rng.seed,
        }
        if self.labeled:
            meta["labels"] = self.assign_labels(samples)
        logger.info("Generated %d %s sequences", n, self.kind)
        return Dataset.from_samples(samples, meta)
