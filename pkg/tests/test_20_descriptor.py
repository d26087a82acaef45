import numpy as np
import pytest

from relseq import DESCRIPTOR_KINDS
from relseq.core_math import Rng
from relseq.evaluation.descriptor import descriptor_matrix
from relseq.evaluation.descriptor import extract_descriptor
from relseq.exception import ArgumentError
from relseq.model.gae import GaeParams
from relseq.model.gae import infer_mappings
from relseq.model.hgae import HgaeParams
from relseq.model.hgae import infer_hierarchy


class TestExtract:
    @pytest.fixture(autouse=True)
    def create_models(self):
        self.gae = GaeParams.initialize(Rng(0), 9, 5, 4, std=0.3)
        self.hgae = HgaeParams.initialize(Rng(1), 9, 5, 4, num_factors2=3, num_mappings2=2, std=0.3)
        rng = Rng(2)
        self.frames = [rng.normal(9) for _ in range(3)]

    def test_first_and_second(self):
        x1, x2, x3 = self.frames
        first = extract_descriptor(self.gae, self.frames[:2], "m1_first")
        assert first.kind == "m1_first"
        assert len(first) == 4
        assert np.allclose(first.values, infer_mappings(self.gae, x1, x2))
        second = extract_descriptor(self.gae, self.frames, "m1_second")
        assert np.allclose(second.values, infer_mappings(self.gae, x2, x3))

    def test_concat(self):
        concat = extract_descriptor(self.gae, self.frames, "m1_concat")
        assert len(concat) == 8
        assert np.allclose(concat.values[:4], extract_descriptor(self.gae, self.frames, "m1_first").values)
        assert np.allclose(concat.values[4:], extract_descriptor(self.gae, self.frames, "m1_second").values)

    def test_second_layer(self):
        m2 = extract_descriptor(self.hgae, self.frames, "m2")
        assert len(m2) == 2
        assert np.allclose(m2.values, infer_hierarchy(self.hgae, *self.frames)[2])
        assert np.all((m2.values > 0) & (m2.values < 1))

    def test_first_layer_of_hierarchy(self):
        a = extract_descriptor(self.hgae, self.frames, "m1_first").values
        b = extract_descriptor(self.hgae.layer1, self.frames, "m1_first").values
        assert np.array_equal(a, b)

    def test_m2_needs_two_layers(self):
        with pytest.raises(ArgumentError):
            extract_descriptor(self.gae, self.frames, "m2")

    def test_unknown_kind(self):
        with pytest.raises(ArgumentError):
            extract_descriptor(self.gae, self.frames, "m3")

    def test_too_few_frames(self):
        with pytest.raises(ArgumentError):
            extract_descriptor(self.gae, self.frames[:2], "m1_second")
        with pytest.raises(ArgumentError):
            extract_descriptor(self.gae, self.frames[:1], "m1_first")


@pytest.mark.parametrize("kind", DESCRIPTOR_KINDS)
def test_matrix_rows_match_single_sequences(kind):
    model = HgaeParams.initialize(Rng(3), 4, 3, 5, std=0.3)
    sequences = Rng(4).normal((6, 4, 4))
    X = descriptor_matrix(model, sequences, kind)
    assert X.shape[0] == 6
    for i in range(6):
        single = extract_descriptor(model, list(sequences[i, :3]), kind).values
        assert np.allclose(X[i], single)
