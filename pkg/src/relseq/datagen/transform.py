"""
Shift and rotation sequences of image patches.

Sampling is bilinear with periodic boundaries: a source coordinate outside
the patch wraps around. Motion follows constant (angular) acceleration,
``v_{t+1} = v_t + a`` with the displacement accumulated frame by frame.
"""
import logging
import math

import numpy as np

from relseq.datagen.dataset import SequenceGenerator
from relseq.datagen.dataset import SequenceSample
from relseq.datagen.dataset import generate_samples
from relseq.datagen.labels import fit_shift_spec
from relseq.datagen.labels import label_angle
from relseq.datagen.labels import label_shift
from relseq.datagen.patch import PatchSource
from relseq.datagen.patch import load_patches
from relseq.exception import ArgumentError

logger = logging.getLogger(__name__)


def bilinear_wrap(img, rows, cols):
    """Samples img at real valued (rows, cols), wrapping around the edges."""
    h, w = img.shape
    r0 = np.floor(rows)
    c0 = np.floor(cols)
    fr = rows - r0
    fc = cols - c0
    r0 = r0.astype(np.int64) % h
    c0 = c0.astype(np.int64) % w
    r1 = (r0 + 1) % h
    c1 = (c0 + 1) % w
    top = (1.0 - fc) * img[r0, c0] + fc * img[r0, c1]
    bottom = (1.0 - fc) * img[r1, c0] + fc * img[r1, c1]
    return (1.0 - fr) * top + fr * bottom


def translate(img, dx, dy):
    """``out[y, x] = img[y - dy, x - dx]``; integer shifts are exact rolls."""
    h, w = img.shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    return bilinear_wrap(img, yy - dy, xx - dx)


def rotate(img, angle):
    """Rotation by ``angle`` radians about the patch center."""
    h, w = img.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    py, px = yy - cy, xx - cx
    c, s = math.cos(angle), math.sin(angle)
    return bilinear_wrap(img, -s * px + c * py + cy, c * px + s * py + cx)


def _check_lengths(T, acc_range):
    if T < 1:
        raise ArgumentError(f"Sequence length must be positive, got {T}")
    if acc_range > 0 and T < 3:
        raise ArgumentError(f"Accelerated sequences need T >= 3, got {T}")


def _shift_sample(source, T, vel_range, acc_range):
    def _sample(rng):
        base = source.draw(rng).reshape(source.size, source.size)
        velocity = rng.uniform(-vel_range, vel_range, 2)
        acceleration = rng.uniform(-acc_range, acc_range, 2) if acc_range > 0 else np.zeros(2)

        frames = []
        displacement = np.zeros(2)
        v = velocity.copy()
        for _ in range(T):
            frames.append(translate(base, displacement[0], displacement[1]).reshape(-1))
            displacement = displacement + v
            v = v + acceleration
        return SequenceSample(
            frames, {"velocity": velocity, "acceleration": acceleration}
        )

    return _sample


def _rotation_sample(source, T, angle_range, acc_range):
    def _sample(rng):
        base = source.draw(rng).reshape(source.size, source.size)
        omega = float(rng.uniform(-angle_range, angle_range))
        alpha = float(rng.uniform(-acc_range, acc_range)) if acc_range > 0 else 0.0

        frames = []
        angle = 0.0
        w = omega
        for _ in range(T):
            frames.append(rotate(base, angle).reshape(-1))
            angle += w
            w += alpha
        return SequenceSample(frames, {"velocity": omega, "acceleration": alpha})

    return _sample


def gen_shift_sequences(rng, n, T, size, vel_range, acc_range, patches=None, workers=1):
    """
    :return: list of unlabeled SequenceSample, params hold the initial
        velocity and the acceleration (x, y) in pixels per frame
    """
    _check_lengths(T, acc_range)
    _sample = _shift_sample(PatchSource(size, patches), T, vel_range, acc_range)
    return generate_samples(_sample, rng, n, workers)


def gen_rotation_sequences(rng, n, T, size, angle_range, acc_range, patches=None,
                           workers=1):
    """
    :return: list of unlabeled SequenceSample, params hold the initial
        angular velocity and the angular acceleration in radians per frame
    """
    _check_lengths(T, acc_range)
    _sample = _rotation_sample(PatchSource(size, patches), T, angle_range, acc_range)
    return generate_samples(_sample, rng, n, workers)


class _PatchSequences(SequenceGenerator):
    def __init__(self, kind="", **kwargs):
        SequenceGenerator.__init__(self, kind, **kwargs)
        if self.T is None:
            self.T = 8
        if self.size is None:
            self.size = 13
        if self.acc_range is None:
            self.acc_range = 0.0
        _check_lengths(self.T, self.acc_range)
        self.source = PatchSource(
            self.size, load_patches(self.patches) if self.patches else None
        )


class ShiftSequences(_PatchSequences):
    parameters = ("T", "size", "vel_range", "acc_range", "patches")

    def __init__(self, kind="", **kwargs):
        _PatchSequences.__init__(self, kind, **kwargs)
        if self.vel_range is None:
            self.vel_range = 3.0

    def sample_fn(self):
        return _shift_sample(self.source, self.T, self.vel_range, self.acc_range)

    def assign_labels(self, samples):
        # Constant shifts are classified by velocity, accelerated ones by
        # acceleration.
        key = "acceleration" if self.acc_range > 0 else "velocity"
        bound = (self.acc_range if key == "acceleration" else self.vel_range) * math.sqrt(2)
        spec = fit_shift_spec([s.params[key] for s in samples], bound)
        for s in samples:
            s.label = label_shift(s.params[key], spec)
        info = spec.to_dict()
        info["source"] = key
        return info


class RotationSequences(_PatchSequences):
    parameters = ("T", "size", "angle_range", "acc_range", "patches")

    def __init__(self, kind="", **kwargs):
        _PatchSequences.__init__(self, kind, **kwargs)
        if self.angle_range is None:
            self.angle_range = math.pi

    def sample_fn(self):
        return _rotation_sample(self.source, self.T, self.angle_range, self.acc_range)

    def assign_labels(self, samples):
        if self.acc_range > 0:
            key, limit = "acceleration", self.acc_range
        else:
            key, limit = "velocity", self.angle_range
        for s in samples:
            s.label = label_angle(s.params[key], limit=limit)
        return {"source": key, "limit": limit}
