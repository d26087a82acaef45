import json
import os

import pytest

from relseq.config import DataConfig
from relseq.config import ModelConfig
from relseq.config import RunConfig
from relseq.config import load_run_config
from relseq.exception import ConfigurationError
from relseq.training.trainer import TrainConfig


def test_train_config_defaults():
    cfg = TrainConfig()
    assert cfg.learning_rate == 0.001
    assert cfg.momentum == 0.9
    assert cfg.epochs == 100
    assert cfg.batch_size == 100
    assert cfg.horizon_schedule == [(0, 1)]
    assert cfg.l2 == 0.0
    assert cfg.seed == 0
    assert cfg.determinism is True
    assert cfg.max_grad_norm is None
    assert cfg.init_std == 0.01


def test_unknown_key():
    with pytest.raises(ConfigurationError) as err:
        TrainConfig(learning_rate=0.1, colour="blue")
    assert "colour" in str(err.value)


def test_wrong_type():
    with pytest.raises(ConfigurationError):
        TrainConfig(epochs="ten")
    with pytest.raises(ConfigurationError):
        TrainConfig(epochs=True)
    with pytest.raises(ConfigurationError):
        TrainConfig(determinism="yes")


def test_int_accepted_as_float():
    cfg = TrainConfig(learning_rate=1)
    assert isinstance(cfg.learning_rate, float)


def test_invalid_values():
    with pytest.raises(ConfigurationError):
        TrainConfig(momentum=1.0)
    with pytest.raises(ConfigurationError):
        TrainConfig(batch_size=0)
    with pytest.raises(ConfigurationError):
        TrainConfig(epochs=-1)
    with pytest.raises(ConfigurationError):
        TrainConfig(max_grad_norm=0.0)


def test_update():
    cfg = TrainConfig(epochs=5)
    new = cfg.update(epochs=None, learning_rate=0.5)
    assert new.epochs == 5
    assert new.learning_rate == 0.5
    assert cfg.learning_rate == 0.001


def test_horizon_schedule_string():
    cfg = TrainConfig(horizon_schedule="0:1,400:2")
    assert cfg.horizon_schedule == [(0, 1), (400, 2)]
    assert cfg.horizon_at(0) == 1
    assert cfg.horizon_at(399) == 1
    assert cfg.horizon_at(400) == 2
    assert cfg.max_horizon == 2


def test_to_json_round_trip():
    cfg = TrainConfig(horizon_schedule="0:1,3:3", l2=0.01)
    again = TrainConfig.from_dict(json.loads(cfg.to_json()))
    assert again == cfg


def test_model_config():
    assert ModelConfig().factors == 64
    with pytest.raises(ConfigurationError):
        ModelConfig(depth=3)
    with pytest.raises(ConfigurationError):
        ModelConfig(mappings=0)


def test_from_dict_needs_mapping():
    with pytest.raises(ConfigurationError):
        DataConfig.from_dict(["a"])


class TestRunConfig:
    @pytest.fixture(autouse=True)
    def create_file(self, tmpdir):
        self.path = os.path.join(str(tmpdir), "run.yaml")

    def _write(self, text):
        with open(self.path, "w") as fp:
            fp.write(text)

    def test_defaults(self):
        run = RunConfig()
        assert run.train == TrainConfig()
        assert run.model == ModelConfig()
        assert run.data.dataset is None

    def test_yaml(self):
        self._write(
            "seed: 3\n"
            "train:\n"
            "  learning_rate: 0.01\n"
            "  horizon_schedule: '0:1,10:2'\n"
            "model:\n"
            "  factors: 16\n"
            "  depth: 2\n"
            "data:\n"
            "  dataset: d.rtc\n"
        )
        run = load_run_config(self.path)
        assert run.seed == 3
        assert run.train.learning_rate == 0.01
        assert run.train.horizon_schedule == [(0, 1), (10, 2)]
        assert run.model.factors == 16
        assert run.model.depth == 2
        assert run.data.dataset == "d.rtc"

    def test_json(self):
        self._write(json.dumps({"train": {"epochs": 7}}))
        assert load_run_config(self.path).train.epochs == 7

    def test_seed_reaches_train(self):
        self._write("seed: 9\n")
        assert load_run_config(self.path).train.seed == 9

    def test_seed_reaches_train_section(self):
        self._write("seed: 5\ntrain:\n  epochs: 3\n")
        run = load_run_config(self.path)
        assert run.train.seed == 5
        assert run.train.epochs == 3

    def test_train_seed_wins(self):
        run = RunConfig.from_dict({"seed": 5, "train": {"seed": 11}})
        assert run.train.seed == 11
        assert run.seed == 5

    def test_empty_file(self):
        self._write("")
        assert load_run_config(self.path) == RunConfig()

    def test_unknown_section(self):
        self._write("optimizer:\n  name: adam\n")
        with pytest.raises(ConfigurationError):
            load_run_config(self.path)

    def test_unknown_nested_key(self):
        self._write("train:\n  lr: 0.1\n")
        with pytest.raises(ConfigurationError):
            load_run_config(self.path)
