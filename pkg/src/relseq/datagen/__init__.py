import logging
import math

from relseq.exception import UnknownGenerator
from relseq.util import importer

logger = logging.getLogger(__name__)

GENERATORS = {
    "const-shift": {
        "class": "relseq.datagen.transform.ShiftSequences",
        "kwargs": {"vel_range": 3.0, "acc_range": 0.0},
    },
    "acc-shift": {
        "class": "relseq.datagen.transform.ShiftSequences",
        "kwargs": {"vel_range": 3.0, "acc_range": 3.0},
    },
    "const-rot": {
        "class": "relseq.datagen.transform.RotationSequences",
        "kwargs": {"angle_range": math.pi, "acc_range": 0.0},
    },
    "acc-rot": {
        "class": "relseq.datagen.transform.RotationSequences",
        "kwargs": {"angle_range": math.pi / 12, "acc_range": math.pi / 12},
    },
    "balls": {
        "class": "relseq.datagen.balls.BouncingBalls",
        "kwargs": {},
    },
}


def build_generator(kind, conf=None, **overrides):
    """
    Instantiates the generator registered under ``kind``. Overrides that
    are None, or that the generator does not take, are ignored.

    :param conf: registry to use instead of GENERATORS
    """
    conf = conf or GENERATORS
    try:
        spec = conf[kind]
    except KeyError:
        raise UnknownGenerator(
            "Unknown generator '{}', choose from {}".format(kind, ", ".join(sorted(conf)))
        )

    _cls = spec["class"]
    if isinstance(_cls, str):
        _cls = importer(_cls)

    kwargs = dict(spec.get("kwargs", {}))
    for key, val in overrides.items():
        if val is not None and key in _cls.parameters:
            kwargs[key] = val
    logger.debug("Building generator %s with %s", kind, kwargs)
    return _cls(kind=kind, **kwargs)
