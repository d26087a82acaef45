import os

import numpy as np
import pytest

from relseq.exception import ShapeError
from relseq.export import MAXVAL
from relseq.export import filter_pairs
from relseq.export import normalize_sequence
from relseq.export import pgm_bytes
from relseq.export import side_length
from relseq.export import write_sequence


def test_side_length():
    assert side_length(169) == 13
    with pytest.raises(ShapeError):
        side_length(10)


def test_normalize_sequence():
    frames = np.arange(8, dtype=float).reshape(2, 4)
    imgs = normalize_sequence(frames)
    assert imgs.shape == (2, 2, 2)
    assert imgs.dtype == np.uint8
    assert imgs.min() == 0 and imgs.max() == MAXVAL
    assert imgs[0, 0, 1] == 36


def test_constant_sequence():
    assert not normalize_sequence(np.full((3, 4), 7.0)).any()


def test_pgm_bytes():
    img = np.array([[0, 255, 7]], dtype=np.uint8)
    assert pgm_bytes(img) == b"P5\n3 1\n255\n\x00\xff\x07"
    with pytest.raises(ShapeError):
        pgm_bytes(np.zeros((2, 2)))


def test_write_sequence(tmpdir):
    directory = os.path.join(str(tmpdir), "imgs")
    paths = write_sequence(directory, "seq000", np.arange(18, dtype=float).reshape(2, 9))
    assert [os.path.basename(p) for p in paths] == ["seq000_f00.pgm", "seq000_f01.pgm"]
    with open(paths[1], "rb") as fp:
        data = fp.read()
    header = b"P5\n3 3\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 9
    assert data[-1] == 255


def test_filter_pairs():
    U = np.arange(6, dtype=float).reshape(3, 2)
    V = -U
    pairs = filter_pairs(U, V)
    assert pairs.shape == (3, 2, 2)
    assert np.array_equal(pairs[1, 0], U[1])
    inverse = np.arange(8, dtype=float).reshape(4, 2)
    pairs = filter_pairs(U, V, inverse)
    assert pairs.shape == (3, 2, 4)
    assert np.allclose(pairs[2, 1], inverse @ V[2])
