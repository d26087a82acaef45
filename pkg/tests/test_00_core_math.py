import numpy as np
import pytest

from relseq.core_math import Rng
from relseq.core_math import as_columns
from relseq.core_math import elementwise
from relseq.core_math import matmul
from relseq.core_math import sample_gaussian
from relseq.core_math import sigmoid
from relseq.exception import ArgumentError
from relseq.exception import NonFiniteError
from relseq.exception import ShapeError


def test_matmul_identity():
    res = matmul(np.eye(2), np.array([[3.0], [4.0]]))
    assert np.array_equal(res, [[3.0], [4.0]])


def test_matmul_hand():
    res = matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[5.0], [6.0]]))
    assert np.array_equal(res, [[17.0], [39.0]])


def test_matmul_transpose_b():
    rng = Rng(1)
    a = rng.normal((2, 3))
    b = rng.normal((2, 3))
    res = matmul(a, b, transpose_b=True)
    naive = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(3):
                naive[i, j] += a[i, k] * b[j, k]
    assert np.allclose(res, naive, rtol=0, atol=1e-14)


def test_matmul_transpose_a():
    rng = Rng(2)
    a = rng.normal((3, 2))
    b = rng.normal((3, 4))
    assert np.array_equal(matmul(a, b, transpose_a=True), a.T @ b)


def test_matmul_shape_error():
    with pytest.raises(ShapeError) as err:
        matmul(np.ones((2, 3)), np.ones((4, 5)))
    assert "(2, 3)" in str(err.value)
    assert "(4, 5)" in str(err.value)


def test_matmul_not_a_matrix():
    with pytest.raises(ShapeError):
        matmul(np.ones(3), np.ones((3, 1)))


def test_matmul_non_finite():
    with pytest.raises(NonFiniteError):
        matmul(np.array([[np.inf]]), np.array([[1.0]]))


def test_elementwise():
    assert np.array_equal(elementwise([1.0, 2.0], [3.0, 4.0], "mul"), [3.0, 8.0])
    x = np.array([1.5, -2.0, 7.0])
    assert np.array_equal(elementwise(x, np.zeros(3), "mul"), np.zeros(3))
    assert np.array_equal(elementwise(x, x, "sub"), np.zeros(3))
    assert np.array_equal(elementwise(x, x, "add"), 2 * x)


def test_elementwise_errors():
    with pytest.raises(ShapeError):
        elementwise(np.ones(3), np.ones(4))
    with pytest.raises(ArgumentError):
        elementwise(np.ones(3), np.ones(3), "div")


def test_sigmoid_values():
    assert sigmoid(np.array([0.0]))[0] == 0.5
    assert sigmoid(np.array([-1.0]))[0] == pytest.approx(0.2689414213699951, abs=1e-12)
    big = sigmoid(np.array([40.0]))[0]
    assert 1 - 1e-15 < big <= 1.0


def test_sigmoid_no_overflow():
    with np.errstate(over="raise"):
        res = sigmoid(np.array([-1000.0, 1000.0]))
    assert res[0] == 0.0
    assert res[1] == 1.0


def test_sigmoid_not_finite():
    with pytest.raises(NonFiniteError):
        sigmoid(np.array([[np.nan]]))
    with pytest.raises(NonFiniteError):
        sigmoid(np.array([0.0, np.inf]))


def test_sigmoid_symmetry():
    a = np.linspace(-20, 20, 41)
    assert np.allclose(sigmoid(a) + sigmoid(-a), 1.0, atol=1e-15)


def test_as_columns():
    x, vector = as_columns(np.arange(3.0))
    assert x.shape == (3, 1)
    assert vector
    x, vector = as_columns(np.ones((3, 2)))
    assert x.shape == (3, 2)
    assert not vector
    with pytest.raises(ShapeError):
        as_columns(np.ones((2, 2, 2)))


class TestRng:
    def test_same_seed(self):
        assert np.array_equal(Rng(5).normal(10), Rng(5).normal(10))

    def test_different_seed(self):
        assert not np.array_equal(Rng(5).normal(10), Rng(6).normal(10))

    def test_substream_independent_of_order(self):
        rng = Rng(3)
        first = rng.substream(7).normal(4)
        rng.normal(100)
        rng.substream(1).normal(100)
        assert np.array_equal(rng.substream(7).normal(4), first)

    def test_substreams_differ(self):
        rng = Rng(3)
        assert not np.array_equal(rng.substream(0).normal(4), rng.substream(1).normal(4))

    def test_nested_substream(self):
        assert np.array_equal(
            Rng(3).substream(1).substream(2).normal(3), Rng(3).substream(1, 2).normal(3)
        )


def test_sample_gaussian_zero_std():
    assert np.array_equal(sample_gaussian(Rng(0), 3, 4, 0.0), np.zeros((3, 4)))


def test_sample_gaussian_deterministic():
    assert np.array_equal(
        sample_gaussian(Rng(11), 5, 2, 0.3), sample_gaussian(Rng(11), 5, 2, 0.3)
    )


def test_sample_gaussian_moments():
    x = sample_gaussian(Rng(0), 1000, 100, 1.0)
    assert abs(x.mean()) < 0.02
    assert abs(x.std() - 1.0) < 0.02


def test_sample_gaussian_negative_std():
    with pytest.raises(ArgumentError):
        sample_gaussian(Rng(0), 2, 2, -1.0)
