import json
import os
import struct

import numpy as np
import pytest

from relseq.container import MAGIC
from relseq.container import atomic_write
from relseq.container import pack_container
from relseq.container import read_container
from relseq.container import unpack_container
from relseq.container import write_container
from relseq.exception import ContainerError


def _blob(header, payload=b""):
    raw = json.dumps(header).encode("utf-8")
    return MAGIC + struct.pack("<I", len(raw)) + raw + payload


def test_round_trip(tmpdir):
    path = os.path.join(str(tmpdir), "a.rtc")
    arrays = {
        "frames": np.arange(24, dtype=np.float64).reshape(2, 3, 4) / 4,
        "labels": np.array([3, -1], dtype=np.int64),
        "weights": np.array([[0.1, 1 / 3]]),
    }
    meta = {"seed": 7, "nested": {"a": [1, 2]}, "name": "x"}
    write_container(path, arrays, meta, wide=("weights",))
    _arrays, _meta = read_container(path)
    assert _meta == meta
    assert set(_arrays) == set(arrays)
    for name, arr in arrays.items():
        assert _arrays[name].shape == arr.shape
        assert np.array_equal(_arrays[name], arr)
    assert _arrays["frames"].dtype == np.float64
    assert _arrays["labels"].dtype == np.int64


def test_f32_on_disk():
    x = np.array([1 / 3])
    arrays, _ = unpack_container(pack_container({"x": x}))
    assert arrays["x"][0] == np.float32(1 / 3)
    assert arrays["x"][0] != x[0]
    arrays, _ = unpack_container(pack_container({"x": x}, wide=("x",)))
    assert arrays["x"][0] == x[0]


def test_layout():
    blob = pack_container({"b": np.ones(3), "a": np.zeros(2, dtype=np.int64)}, {"k": 1})
    assert blob[:4] == b"RTC1"
    (header_len,) = struct.unpack("<I", blob[4:8])
    header = json.loads(blob[8:8 + header_len].decode("utf-8"))
    assert [e["name"] for e in header["arrays"]] == ["a", "b"]
    for e in header["arrays"]:
        assert e["offset"] % 8 == 0
    assert header["arrays"][0]["dtype"] == "i64"
    assert header["arrays"][1]["dtype"] == "f32"
    assert header["meta"] == {"k": 1}


def test_deterministic_bytes():
    arrays = {"x": np.arange(5.0), "y": np.eye(2)}
    assert pack_container(arrays, {"b": 1, "a": 2}) == pack_container(
        dict(reversed(list(arrays.items()))), {"a": 2, "b": 1}
    )


def test_empty_array():
    arrays, _ = unpack_container(pack_container({"e": np.zeros((0, 3))}))
    assert arrays["e"].shape == (0, 3)


def test_bad_magic():
    with pytest.raises(ContainerError):
        unpack_container(b"XXXX" + b"\0" * 20)


def test_outside_payload():
    header = {"arrays": [{"name": "x", "dtype": "f64", "shape": [4], "offset": 0}]}
    with pytest.raises(ContainerError):
        unpack_container(_blob(header, b"\0" * 16))


def test_overlapping():
    header = {
        "arrays": [
            {"name": "x", "dtype": "f64", "shape": [2], "offset": 0},
            {"name": "y", "dtype": "f64", "shape": [2], "offset": 8},
        ]
    }
    with pytest.raises(ContainerError):
        unpack_container(_blob(header, b"\0" * 24))


def test_unknown_dtype():
    header = {"arrays": [{"name": "x", "dtype": "c128", "shape": [1], "offset": 0}]}
    with pytest.raises(ContainerError):
        unpack_container(_blob(header, b"\0" * 16))


def test_unsupported_array_dtype():
    with pytest.raises(ContainerError):
        pack_container({"s": np.array(["a", "b"])})


def test_read_missing(tmpdir):
    with pytest.raises(ContainerError):
        read_container(os.path.join(str(tmpdir), "nothing.rtc"))


def test_atomic_write_leaves_no_temp(tmpdir):
    path = os.path.join(str(tmpdir), "out.txt")
    atomic_write(path, "hello\n")
    atomic_write(path, b"bytes")
    with open(path, "rb") as fp:
        assert fp.read() == b"bytes"
    assert os.listdir(str(tmpdir)) == ["out.txt"]


def test_atomic_write_failure_cleans_up(tmpdir):
    path = os.path.join(str(tmpdir), "out.txt")
    with pytest.raises(TypeError):
        atomic_write(path, 12)
    assert os.listdir(str(tmpdir)) == []
