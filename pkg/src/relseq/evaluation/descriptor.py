"""
Mapping descriptors of the first frames of a sequence, used as classifier
input.

* ``m1_first``: first layer mapping of (x1, x2)
* ``m1_second``: first layer mapping of (x2, x3)
* ``m1_concat``: both of the above, stacked
* ``m2``: second layer mapping of the triple
"""
import logging

import numpy as np

from relseq import DESCRIPTOR_KINDS
from relseq.exception import ArgumentError
from relseq.model.gae import infer_mappings
from relseq.model.hgae import infer_hierarchy

logger = logging.getLogger(__name__)


class Descriptor(object):
    def __init__(self, values, kind):
        self.values = values
        self.kind = kind

    def __len__(self):
        return self.values.shape[0]


def _layer1(model):
    return model.layer1 if model.depth == 2 else model


def extract_descriptor(model, frames, kind):
    """
    :param model: GaeParams or HgaeParams
    :param frames: the first 2 (m1_first) or 3 frames, vectors or column
        batches
    :return: Descriptor; values are a vector, or (dim, batch) for batches
    """
    if kind not in DESCRIPTOR_KINDS:
        raise ArgumentError(
            "Unknown descriptor '{}', choose from {}".format(kind, ", ".join(DESCRIPTOR_KINDS))
        )
    need = 2 if kind == "m1_first" else 3
    if len(frames) < need:
        raise ArgumentError(f"Descriptor {kind} needs {need} frames, got {len(frames)}")
    if kind == "m2" and model.depth < 2:
        raise ArgumentError("Descriptor m2 needs a two layer model")

    l1 = _layer1(model)
    if kind == "m1_first":
        values = infer_mappings(l1, frames[0], frames[1])
    elif kind == "m1_second":
        values = infer_mappings(l1, frames[1], frames[2])
    elif kind == "m1_concat":
        values = np.concatenate(
            [infer_mappings(l1, frames[0], frames[1]), infer_mappings(l1, frames[1], frames[2])],
            axis=0,
        )
    else:
        values = infer_hierarchy(model, frames[0], frames[1], frames[2])[2]
    return Descriptor(values, kind)


def descriptor_matrix(model, sequences, kind):
    """
    Descriptors of a whole data set.

    :param sequences: (n, T, d) array
    :return: (n, dim) array, one row per sequence
    """
    sequences = np.asarray(sequences, dtype=np.float64)
    count = min(sequences.shape[1], 3)
    frames = [np.ascontiguousarray(sequences[:, t, :].T) for t in range(count)]
    return extract_descriptor(model, frames, kind).values.T
