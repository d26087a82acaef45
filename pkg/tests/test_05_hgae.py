import numpy as np
import pytest

from relseq.core_math import Rng
from relseq.core_math import sigmoid
from relseq.exception import ArgumentError
from relseq.exception import DivergenceError
from relseq.exception import ShapeError
from relseq.model.gae import GaeParams
from relseq.model.gae import infer_mappings
from relseq.model.gae import predict_step
from relseq.model.gae import reconstruct_x2
from relseq.model.hgae import HgaeParams
from relseq.model.hgae import RolloutConfig
from relseq.model.hgae import infer_hierarchy
from relseq.model.hgae import next_frame
from relseq.model.hgae import params_from_arrays
from relseq.model.hgae import predict_frame
from relseq.model.hgae import predict_mapping
from relseq.model.hgae import rollout


def _ones():
    one = np.ones((1, 1))
    return HgaeParams(GaeParams(one, one, one), GaeParams(one, one, one))


class TestHgaeParams:
    @pytest.fixture(autouse=True)
    def create_params(self):
        self.p = HgaeParams.initialize(Rng(0), 9, 6, 4, 5, 3, std=0.3)

    def test_shapes(self):
        assert self.p.depth == 2
        assert self.p.dim_in == 9
        assert self.p.layer1.U.shape == (6, 9)
        assert self.p.layer1.W.shape == (4, 6)
        assert self.p.layer2.U.shape == (5, 4)
        assert self.p.layer2.W.shape == (3, 5)

    def test_layer_mismatch(self):
        with pytest.raises(ShapeError):
            HgaeParams(self.p.layer1, GaeParams.initialize(Rng(1), 5, 3, 2))

    def test_arrays(self):
        arrays = self.p.as_dict()
        assert sorted(arrays) == ["U1", "U2", "V1", "V2", "W1", "W2"]
        assert params_from_arrays(arrays) == self.p
        layer1 = {k: v for k, v in arrays.items() if k.endswith("1")}
        assert params_from_arrays(layer1) == self.p.layer1
        with pytest.raises(ArgumentError):
            params_from_arrays({"frames": np.zeros(3)})

    def test_copy(self):
        c = self.p.copy()
        assert c == self.p
        c.layer2.W[0, 0] = 5.0
        assert c != self.p


def test_all_zero_frames():
    p = HgaeParams.initialize(Rng(2), 6, 4, 3, std=0.5)
    zero = np.zeros(6)
    m1_a, m1_b, m2 = infer_hierarchy(p, zero, zero, zero)
    assert np.array_equal(m1_a, np.full(3, 0.5))
    assert np.array_equal(m1_b, np.full(3, 0.5))
    l2 = p.layer2
    half = np.full(3, 0.5)
    expected = sigmoid(l2.W @ ((l2.U @ half) * (l2.V @ half)))
    assert np.allclose(m2, expected, rtol=0, atol=1e-12)


def test_scalar_hierarchy():
    p = _ones()
    x0, x1, x2 = np.array([0.3]), np.array([-0.7]), np.array([1.1])
    m1_a, m1_b, m2 = infer_hierarchy(p, x0, x1, x2)
    assert m1_a[0] == pytest.approx(sigmoid(np.array([0.3 * -0.7]))[0], abs=1e-15)
    s_a = sigmoid(np.array([0.3 * -0.7]))[0]
    s_b = sigmoid(np.array([-0.7 * 1.1]))[0]
    assert m2[0] == pytest.approx(sigmoid(np.array([s_a * s_b]))[0], abs=1e-15)


def test_scalar_predictions():
    p = _ones()
    assert predict_mapping(p, np.array([0.4]), np.array([0.5]))[0] == pytest.approx(0.2)
    assert predict_frame(p, np.array([3.0]), np.array([0.5]))[0] == pytest.approx(1.5)


def test_zero_gates():
    p = HgaeParams.initialize(Rng(3), 6, 4, 3, std=0.5)
    assert np.array_equal(predict_mapping(p, np.ones(3), np.zeros(3)), np.zeros(3))
    assert np.array_equal(predict_frame(p, np.ones(6), np.zeros(3)), np.zeros(6))


def test_predict_mapping_not_squashed():
    p = HgaeParams.initialize(Rng(4), 6, 4, 3, std=2.0)
    m1 = Rng(5).uniform(0, 1, 3)
    m2 = Rng(6).uniform(0, 1, 3)
    assert np.array_equal(
        predict_mapping(p, m1, m2), reconstruct_x2(p.layer2, m1, m2)
    )


def test_predict_frame_consistency():
    p = HgaeParams.initialize(Rng(7), 6, 4, 3, std=0.5)
    rng = Rng(8)
    x_curr = rng.normal(6)
    x_next = rng.normal(6)
    m1 = infer_mappings(p.layer1, x_curr, x_next)
    assert np.array_equal(
        predict_frame(p, x_curr, m1), reconstruct_x2(p.layer1, x_curr, m1)
    )


def test_constant_sequence():
    p = HgaeParams.initialize(Rng(9), 6, 4, 3, std=0.5)
    x = Rng(10).normal(6)
    m1_a, m1_b, _ = infer_hierarchy(p, x, x, x)
    assert np.array_equal(m1_a, m1_b)


def test_rollout_config():
    gae = GaeParams.initialize(Rng(0), 4, 3, 2)
    hgae = HgaeParams.initialize(Rng(0), 4, 3, 2)
    assert RolloutConfig.for_model(gae).seed_frames == 2
    assert RolloutConfig.for_model(hgae, k=3).seed_frames == 3
    with pytest.raises(ArgumentError):
        RolloutConfig(k=0)
    with pytest.raises(ArgumentError):
        RolloutConfig(seed_frames=4)


class TestRollout:
    @pytest.fixture(autouse=True)
    def create_models(self):
        self.gae = GaeParams.initialize(Rng(11), 6, 5, 3, std=0.5)
        self.hgae = HgaeParams.initialize(Rng(12), 6, 5, 3, std=0.5)
        rng = Rng(13)
        self.frames = [rng.normal(6) for _ in range(4)]

    def test_zero_steps(self):
        assert rollout(self.gae, self.frames[:2], 0) == []
        assert rollout(self.hgae, self.frames[:3], 0) == []

    def test_lengths(self):
        assert len(rollout(self.gae, self.frames[:2], 5)) == 5
        res = rollout(self.hgae, self.frames[:3], 4)
        assert len(res) == 4
        assert all(f.shape == (6,) for f in res)

    def test_first_step(self):
        assert np.array_equal(
            rollout(self.gae, self.frames[:2], 1)[0],
            predict_step(self.gae, self.frames[0], self.frames[1]),
        )
        assert np.array_equal(
            rollout(self.hgae, self.frames[:3], 1)[0], next_frame(self.hgae, self.frames[:3])
        )

    def test_feeds_back_predictions(self):
        res = rollout(self.gae, self.frames[:2], 2)
        assert np.array_equal(res[1], predict_step(self.gae, self.frames[1], res[0]))

    def test_too_few_seeds(self):
        with pytest.raises(ArgumentError):
            rollout(self.hgae, self.frames[:2], 3)
        with pytest.raises(ArgumentError):
            rollout(self.gae, self.frames[:1], 3)

    def test_negative_steps(self):
        with pytest.raises(ArgumentError):
            rollout(self.gae, self.frames[:2], -1)

    def test_only_last_seeds_matter(self):
        res = rollout(self.hgae, self.frames[1:], 3)
        perturbed = [self.frames[0] + 100.0] + self.frames[1:]
        other = rollout(self.hgae, perturbed, 3)
        for a, b in zip(res, other):
            assert np.array_equal(a, b)

    def test_extra_seeds_logged(self, caplog):
        with caplog.at_level("DEBUG", logger="relseq.model.hgae"):
            rollout(self.gae, self.frames, 1)
        assert "last 2 of 4 seed frames" in caplog.text

    def test_exact_seeds_not_logged(self, caplog):
        with caplog.at_level("DEBUG", logger="relseq.model.hgae"):
            rollout(self.hgae, self.frames[:3], 1)
        assert "seed frames" not in caplog.text

    def test_batched(self):
        seeds = [np.stack([f, 2 * f], axis=1) for f in self.frames[:3]]
        res = rollout(self.hgae, seeds, 2)
        assert res[0].shape == (6, 2)
        single = rollout(self.hgae, [s[:, 1] for s in seeds], 2)
        assert np.allclose(res[1][:, 1], single[1], rtol=1e-10, atol=1e-12)

    def test_seed_shape_mismatch(self):
        with pytest.raises(ShapeError):
            rollout(self.gae, [np.zeros(6), np.zeros((6, 2))], 1)


def test_rollout_divergence_step():
    # Every prediction is about 20 times the newest frame.
    one = np.ones((1, 1))
    p = GaeParams(one, one, 20.0 * one)
    with pytest.raises(DivergenceError) as err:
        rollout(p, [np.array([1.0]), np.array([1.0])], 10)
    assert err.value.step == 5
