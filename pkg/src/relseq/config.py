"""
Validated configuration objects.

A configuration class declares its parameters in ``c_param`` as
``key: (type or converter, required, default)``. Unknown keys are refused.
"""
import copy
import json
import logging

import yaml

from relseq.exception import ConfigurationError

logger = logging.getLogger(__name__)

SIMPLE_TYPES = (bool, int, float, str, dict, list)


def _convert(key, typ, val):
    if typ is bool:
        if not isinstance(val, bool):
            raise ConfigurationError(f"'{key}' must be a boolean, got {val!r}")
        return val
    if typ is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigurationError(f"'{key}' must be an integer, got {val!r}")
        return val
    if typ is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigurationError(f"'{key}' must be a number, got {val!r}")
        return float(val)
    if typ in SIMPLE_TYPES:
        if not isinstance(val, typ):
            raise ConfigurationError(f"'{key}' must be a {typ.__name__}, got {val!r}")
        return val
    try:
        return typ(val)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigurationError(f"Bad value for '{key}': {err}")


class Configuration(object):
    c_param = {}

    def __init__(self, **kwargs):
        unknown = sorted(set(kwargs) - set(self.c_param))
        if unknown:
            raise ConfigurationError(
                "Unknown {} parameter(s): {}".format(
                    self.__class__.__name__, ", ".join(unknown)
                )
            )

        for key, (typ, required, default) in self.c_param.items():
            val = kwargs.get(key)
            if val is None:
                if required:
                    raise ConfigurationError(f"Missing required parameter '{key}'")
                val = copy.deepcopy(default)
            else:
                val = _convert(key, typ, val)
            setattr(self, key, val)

        self.verify()

    def verify(self):
        pass

    def to_dict(self):
        return {key: copy.deepcopy(getattr(self, key)) for key in self.c_param}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, info):
        if not isinstance(info, dict):
            raise ConfigurationError(
                f"{cls.__name__} expects a mapping, got {type(info).__name__}"
            )
        return cls(**info)

    def update(self, **kwargs):
        """A new instance with the given non-None values replaced."""
        _info = self.to_dict()
        _info.update({k: v for k, v in kwargs.items() if v is not None})
        return self.__class__(**_info)

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"{self.__class__.__name__}({self.to_dict()})"


class ModelConfig(Configuration):
    c_param = {
        "depth": (int, False, 1),
        "factors": (int, False, 64),
        "mappings": (int, False, 64),
        "factors2": (int, False, None),
        "mappings2": (int, False, None),
    }

    def verify(self):
        if self.depth not in (1, 2):
            raise ConfigurationError(f"depth must be 1 or 2, got {self.depth}")
        for key in ("factors", "mappings", "factors2", "mappings2"):
            val = getattr(self, key)
            if val is not None and val < 1:
                raise ConfigurationError(f"'{key}' must be positive, got {val}")


class DataConfig(Configuration):
    c_param = {
        "dataset": (str, False, None),
        "whitening": (str, False, None),
        "checkpoint": (str, False, None),
    }


def _train_config(info):
    # Imported here, trainer depends on this module.
    from relseq.training.trainer import TrainConfig

    return TrainConfig.from_dict(info)


class RunConfig(Configuration):
    c_param = {
        "train": (_train_config, False, None),
        "model": (ModelConfig.from_dict, False, None),
        "data": (DataConfig.from_dict, False, None),
        "seed": (int, False, 0),
    }

    def __init__(self, **kwargs):
        # A top-level seed is inherited by the train section unless it sets its own.
        train = kwargs.get("train")
        if isinstance(train, dict) and kwargs.get("seed") is not None:
            train = dict(train)
            train.setdefault("seed", kwargs["seed"])
            kwargs["train"] = train
        super().__init__(**kwargs)

    def verify(self):
        if self.train is None:
            self.train = _train_config({"seed": self.seed})
        if self.model is None:
            self.model = ModelConfig()
        if self.data is None:
            self.data = DataConfig()

    def to_dict(self):
        return {
            "train": self.train.to_dict(),
            "model": self.model.to_dict(),
            "data": self.data.to_dict(),
            "seed": self.seed,
        }


def load_run_config(path):
    """Reads a YAML (or JSON) run configuration."""
    with open(path, "r") as fp:
        info = yaml.safe_load(fp)
    if info is None:
        info = {}
    logger.info("Loaded run configuration from %s", path)
    return RunConfig.from_dict(info)
