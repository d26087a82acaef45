"""
Bouncing balls: equal mass discs moving without friction in a square box,
colliding elastically with the walls and with each other.
"""
import logging
import math

import numpy as np

from relseq.datagen.dataset import SequenceGenerator
from relseq.datagen.dataset import SequenceSample
from relseq.datagen.dataset import generate_samples
from relseq.exception import ArgumentError

logger = logging.getLogger(__name__)

MAX_PACKING = 0.5
MAX_PLACEMENT_TRIES = 1000
SUPERSAMPLE = 4


class BallState(object):
    def __init__(self, positions, velocities, radius, box_size):
        self.positions = np.array(positions, dtype=np.float64).reshape(-1, 2)
        self.velocities = np.array(velocities, dtype=np.float64).reshape(-1, 2)
        self.radius = float(radius)
        self.box_size = float(box_size)

    @property
    def n_balls(self):
        return self.positions.shape[0]

    def kinetic_energy(self):
        return 0.5 * float(np.sum(self.velocities * self.velocities))

    def inside_box(self):
        p = self.positions
        return bool(np.all(p >= self.radius) and np.all(p <= self.box_size - self.radius))

    def copy(self):
        return BallState(self.positions, self.velocities, self.radius, self.box_size)


def check_packing(n_balls, radius, box_size):
    if radius <= 0 or 2 * radius >= box_size:
        raise ArgumentError(f"Radius {radius} does not fit a box of size {box_size}")
    covered = n_balls * math.pi * radius ** 2
    if covered > MAX_PACKING * box_size ** 2:
        raise ArgumentError(
            "{} balls of radius {} cover {:.0f}% of a box of size {}".format(
                n_balls, radius, 100 * covered / box_size ** 2, box_size
            )
        )


def initial_state(rng, n_balls, radius, box_size, speed):
    """Non overlapping positions by rejection sampling, random directions."""
    check_packing(n_balls, radius, box_size)
    positions = []
    tries = 0
    while len(positions) < n_balls:
        tries += 1
        if tries > MAX_PLACEMENT_TRIES * n_balls:
            raise ArgumentError(f"Could not place {n_balls} balls without overlap")
        p = rng.uniform(radius, box_size - radius, 2)
        if all(np.hypot(*(p - q)) >= 2 * radius for q in positions):
            positions.append(p)

    angles = rng.uniform(0.0, 2 * math.pi, n_balls)
    velocities = speed * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return BallState(positions, velocities, radius, box_size)


def _collide_pairs(p, v, radius):
    limit = (2 * radius) ** 2
    for i in range(p.shape[0]):
        for j in range(i + 1, p.shape[0]):
            d = p[i] - p[j]
            dist2 = d @ d
            if dist2 >= limit or dist2 == 0.0:
                continue
            rel = v[i] - v[j]
            if rel @ d >= 0.0:
                # already separating
                continue
            normal = d / math.sqrt(dist2)
            dv = (rel @ normal) * normal
            v[i] -= dv
            v[j] += dv


def _reflect_walls(p, v, radius, box_size):
    low = p < radius
    p[low] = 2 * radius - p[low]
    v[low] = np.abs(v[low])

    hi = box_size - radius
    high = p > hi
    p[high] = 2 * hi - p[high]
    v[high] = -np.abs(v[high])

    np.clip(p, radius, hi, out=p)


def simulate_step(state, substeps=10):
    """Advances one frame; returns a new state."""
    s = state.copy()
    dt = 1.0 / substeps
    for _ in range(substeps):
        s.positions += s.velocities * dt
        _collide_pairs(s.positions, s.velocities, s.radius)
        _reflect_walls(s.positions, s.velocities, s.radius, s.box_size)
    return s


def render(state, resolution, supersample=SUPERSAMPLE):
    """
    Grayscale image with the balls as filled discs, anti-aliased by
    averaging ``supersample`` x ``supersample`` samples per pixel.

    :return: (resolution * resolution,) vector in [0, 1], row-major with
        rows along the second coordinate
    """
    sub = resolution * supersample
    coords = (np.arange(sub) + 0.5) * (state.box_size / sub)
    xx, yy = np.meshgrid(coords, coords)
    canvas = np.zeros((sub, sub))
    r2 = state.radius ** 2
    for x, y in state.positions:
        canvas += ((xx - x) ** 2 + (yy - y) ** 2) <= r2
    np.minimum(canvas, 1.0, out=canvas)
    img = canvas.reshape(resolution, supersample, resolution, supersample).mean(axis=(1, 3))
    return img.reshape(-1)


def _ball_sample(T, resolution, n_balls, radius, box_size, speed, substeps):
    def _sample(rng):
        state = initial_state(rng, n_balls, radius, box_size, speed)
        energy = state.kinetic_energy()
        frames = []
        for _ in range(T):
            frames.append(render(state, resolution))
            state = simulate_step(state, substeps)
        return SequenceSample(
            frames,
            {
                "kinetic_energy": energy,
                "n_balls": n_balls,
                "radius": radius,
                "box_size": box_size,
            },
        )

    return _sample


def gen_bouncing_balls(rng, n_sequences, T, resolution, n_balls=3, radius=1.2,
                       box_size=10.0, speed=0.5, substeps=10, workers=1):
    check_packing(n_balls, radius, box_size)
    _sample = _ball_sample(T, resolution, n_balls, radius, box_size, speed, substeps)
    return generate_samples(_sample, rng, n_sequences, workers)


class BouncingBalls(SequenceGenerator):
    parameters = ("T", "resolution", "n_balls", "radius", "box_size", "speed", "substeps")
    labeled = False
    defaults = {
        "T": 8,
        "resolution": 16,
        "n_balls": 3,
        "radius": 1.2,
        "box_size": 10.0,
        "speed": 0.5,
        "substeps": 10,
    }

    def __init__(self, kind="", **kwargs):
        SequenceGenerator.__init__(self, kind, **kwargs)
        for key, val in self.defaults.items():
            if getattr(self, key) is None:
                setattr(self, key, val)
        check_packing(self.n_balls, self.radius, self.box_size)

    def sample_fn(self):
        return _ball_sample(
            self.T, self.resolution, self.n_balls, self.radius, self.box_size,
            self.speed, self.substeps,
        )
