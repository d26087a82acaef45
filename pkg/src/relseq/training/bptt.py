"""
k-step prediction error and its gradient by back propagation through time.

The rollout graph is unrolled completely: predicted frames are fed back into
the next inference step and the gradient flows through them.
"""
import logging

import numpy as np

from relseq import SEED_FRAMES
from relseq.core_math import as_columns
from relseq.exception import ArgumentError
from relseq.exception import ShapeError
from relseq.model.gae import GaeParams
from relseq.model.gae import decode
from relseq.model.gae import decode_backward
from relseq.model.gae import encode
from relseq.model.gae import encode_backward
from relseq.model.hgae import HgaeParams

logger = logging.getLogger(__name__)


def _as_blocks(frames):
    blocks = [as_columns(f)[0] for f in frames]
    shapes = {b.shape for b in blocks}
    if len(shapes) != 1:
        raise ShapeError(f"Frames differ in shape: {sorted(shapes)}")
    return blocks


def _gae_step(p, window):
    prev, curr = window[-2], window[-1]
    m, factors = encode(p, prev, curr)
    y, cache = decode(p.U, p.V, p.W, curr, m)
    return y, (prev, curr, m, factors, cache)


def _gae_step_backward(p, tape, dy, acc):
    prev, curr, m, factors, cache = tape
    dU, dV, dW, dcurr, dm = decode_backward(p.U, p.V, p.W, curr, m, cache, dy)
    eU, eV, eW, dprev, dcurr2 = encode_backward(p, prev, curr, m, factors, dm)
    acc["U1"] += dU + eU
    acc["V1"] += dV + eV
    acc["W1"] += dW + eW
    return [dprev, dcurr + dcurr2]


def _hgae_step(p, window):
    l1, l2 = p.layer1, p.layer2
    w0, w1, w2 = window[-3], window[-2], window[-1]
    m1_a, fa = encode(l1, w0, w1)
    m1_b, fb = encode(l1, w1, w2)
    m2, f2 = encode(l2, m1_a, m1_b)
    m1_pred, cache2 = decode(l2.U, l2.V, l2.W, m1_b, m2)
    y, cache1 = decode(l1.U, l1.V, l1.W, w2, m1_pred)
    return y, (w0, w1, w2, m1_a, fa, m1_b, fb, m2, f2, m1_pred, cache2, cache1)


def _hgae_step_backward(p, tape, dy, acc):
    l1, l2 = p.layer1, p.layer2
    w0, w1, w2, m1_a, fa, m1_b, fb, m2, f2, m1_pred, cache2, cache1 = tape

    dU1, dV1, dW1, dw2, dm1_pred = decode_backward(
        l1.U, l1.V, l1.W, w2, m1_pred, cache1, dy
    )
    dU2, dV2, dW2, dm1_b, dm2 = decode_backward(
        l2.U, l2.V, l2.W, m1_b, m2, cache2, dm1_pred
    )
    eU2, eV2, eW2, dm1_a, dm1_b2 = encode_backward(l2, m1_a, m1_b, m2, f2, dm2)
    dm1_b = dm1_b + dm1_b2
    aU1, aV1, aW1, dw0, dw1_a = encode_backward(l1, w0, w1, m1_a, fa, dm1_a)
    bU1, bV1, bW1, dw1_b, dw2_b = encode_backward(l1, w1, w2, m1_b, fb, dm1_b)

    acc["U1"] += dU1 + aU1 + bU1
    acc["V1"] += dV1 + aV1 + bV1
    acc["W1"] += dW1 + aW1 + bW1
    acc["U2"] += dU2 + eU2
    acc["V2"] += dV2 + eV2
    acc["W2"] += dW2 + eW2
    return [dw0, dw1_a + dw1_b, dw2 + dw2_b]


def predictive_loss_and_grads(p, frames, k, with_grads=True):
    """
    ``L = sum_{i=1..k} |x_hat_{t+i} - x_{t+i}|^2`` averaged over the batch.

    :param p: GaeParams or HgaeParams
    :param frames: at least seed_frames + k frames, vectors or column
        batches; the first seed_frames seed the rollout, the next k are
        the targets
    :param k: prediction horizon
    :param with_grads: if False only the loss is computed
    :return: (loss, gradients shaped like p or None)
    """
    s = SEED_FRAMES[p.depth]
    if k < 1:
        raise ArgumentError(f"Prediction horizon must be at least 1, got {k}")
    if len(frames) < s + k:
        raise ArgumentError(
            f"{s + k} frames needed for {k}-step prediction, got {len(frames)}"
        )

    blocks = _as_blocks(frames[: s + k])
    n = blocks[0].shape[1]
    step, step_backward = (
        (_gae_step, _gae_step_backward) if p.depth == 1 else (_hgae_step, _hgae_step_backward)
    )

    extended = list(blocks[:s])
    tapes = []
    residuals = []
    loss = 0.0
    for i in range(k):
        y, tape = step(p, extended[-s:])
        r = y - blocks[s + i]
        loss += float(np.sum(r * r))
        extended.append(y)
        tapes.append(tape)
        residuals.append(r)
    loss /= n

    if not with_grads:
        return loss, None

    arrays = p.as_dict()
    acc = {name: np.zeros_like(a) for name, a in arrays.items()}
    dext = [np.zeros_like(b) for b in extended]

    for i in reversed(range(k)):
        dy = dext[s + i] + 2.0 * residuals[i] / n
        dwindow = step_backward(p, tapes[i], dy, acc)
        for j, dw in enumerate(dwindow):
            dext[i + j] += dw

    if isinstance(p, HgaeParams):
        return loss, HgaeParams.from_dict(acc)
    return loss, GaeParams.from_dict(acc, 1)
