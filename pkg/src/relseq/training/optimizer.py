import logging

import numpy as np

from relseq.exception import NonFiniteError
from relseq.exception import ShapeError

logger = logging.getLogger(__name__)


def sgd_momentum_step(params, grads, velocity, lr, momentum):
    """
    One step of gradient descent with momentum::

        v <- momentum * v - lr * g
        theta <- theta + v

    All three arguments are dictionaries name -> array, ``velocity`` may be
    None on the first step. Nothing is updated in place.

    :return: (new params, new velocity)
    """
    new_params = {}
    new_velocity = {}
    for name, theta in params.items():
        g = grads[name]
        if g.shape != theta.shape:
            raise ShapeError(f"Gradient of {name} has shape {g.shape}, not {theta.shape}")
        if velocity is None:
            v = np.zeros_like(theta)
        else:
            v = velocity[name]
            if v.shape != theta.shape:
                raise ShapeError(
                    f"Velocity of {name} has shape {v.shape}, not {theta.shape}"
                )
        v = momentum * v - lr * g
        _theta = theta + v
        if not np.isfinite(_theta).all():
            raise NonFiniteError(f"Update made {name} non-finite")
        new_params[name] = _theta
        new_velocity[name] = v
    return new_params, new_velocity


def global_norm(grads):
    return float(np.sqrt(sum(np.sum(g * g) for g in grads.values())))


def clip_by_global_norm(grads, max_norm):
    norm = global_norm(grads)
    if max_norm is None or norm <= max_norm:
        return grads, norm
    scale = max_norm / norm
    logger.debug("Clipping gradient norm %.4g to %.4g", norm, max_norm)
    return {k: g * scale for k, g in grads.items()}, norm


def add_l2(loss, grads, params, l2):
    """Adds 0.5 * l2 * |theta|^2 to the loss and l2 * theta to the gradients."""
    if not l2:
        return loss, grads
    _grads = {}
    for name, theta in params.items():
        loss += 0.5 * l2 * float(np.sum(theta * theta))
        _grads[name] = grads[name] + l2 * theta
    return loss, _grads


class SgdMomentum(object):
    def __init__(self, lr, momentum, max_grad_norm=None):
        self.lr = lr
        self.momentum = momentum
        self.max_grad_norm = max_grad_norm
        self.velocity = None
        self.steps = 0

    def step(self, params, grads):
        grads, _ = clip_by_global_norm(grads, self.max_grad_norm)
        params, self.velocity = sgd_momentum_step(
            params, grads, self.velocity, self.lr, self.momentum
        )
        self.steps += 1
        return params
