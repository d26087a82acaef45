"""
Tensor container files.

Layout::

    b"RTC1" | header length (uint32, little endian) | UTF-8 JSON header | payload

The header is ``{"arrays": [{"name", "dtype", "shape", "offset"}], "meta": {}}``
with offsets relative to the start of the payload. Arrays are stored little
endian, row-major, each starting on an 8 byte boundary.

Floating point arrays are written as f32 unless f64 is asked for; everything
read back is float64 (or int64) in memory.
"""
import json
import logging
import os
import struct
import tempfile

import numpy as np

from relseq.exception import ContainerError

logger = logging.getLogger(__name__)

MAGIC = b"RTC1"
ALIGNMENT = 8
DTYPES = {"f32": "<f4", "f64": "<f8", "i64": "<i8"}


def _disk_dtype(arr, wide):
    if np.issubdtype(arr.dtype, np.integer) or arr.dtype == np.bool_:
        return "i64"
    if np.issubdtype(arr.dtype, np.floating):
        return "f64" if wide else "f32"
    raise ContainerError(f"Cannot store arrays of dtype {arr.dtype}")


def pack_container(arrays, meta=None, wide=()):
    """
    :param arrays: dictionary name -> array, stored in sorted name order
    :param meta: JSON serializable dictionary
    :param wide: names of float arrays to keep in double precision
    :return: the container as bytes
    """
    entries = []
    chunks = []
    offset = 0
    for name in sorted(arrays):
        arr = np.asarray(arrays[name])
        dtype = _disk_dtype(arr, name in wide)
        data = np.ascontiguousarray(arr, dtype=DTYPES[dtype]).tobytes()
        pad = (-offset) % ALIGNMENT
        chunks.append(b"\0" * pad)
        offset += pad
        entries.append(
            {"name": name, "dtype": dtype, "shape": list(arr.shape), "offset": offset}
        )
        chunks.append(data)
        offset += len(data)

    header = json.dumps(
        {"arrays": entries, "meta": meta or {}}, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    return MAGIC + struct.pack("<I", len(header)) + header + b"".join(chunks)


def unpack_container(blob):
    """
    :return: (arrays, meta)
    """
    if blob[:4] != MAGIC:
        raise ContainerError("Not a tensor container (bad magic)")
    if len(blob) < 8:
        raise ContainerError("Truncated container header")
    (header_len,) = struct.unpack("<I", blob[4:8])
    try:
        header = json.loads(blob[8:8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as err:
        raise ContainerError(f"Unreadable container header: {err}")

    payload = memoryview(blob)[8 + header_len:]
    arrays = {}
    extents = []
    for entry in header.get("arrays", []):
        try:
            name, dtype, shape, offset = (
                entry["name"], entry["dtype"], entry["shape"], entry["offset"]
            )
            np_dtype = np.dtype(DTYPES[dtype])
        except KeyError as err:
            raise ContainerError(f"Bad array entry {entry!r}: {err}")

        count = int(np.prod(shape, dtype=np.int64))
        end = offset + count * np_dtype.itemsize
        if offset < 0 or end > len(payload):
            raise ContainerError(f"Array '{name}' lies outside the payload")
        extents.append((offset, end, name))

        if count == 0:
            arr = np.zeros(shape, dtype=np_dtype)
        else:
            arr = np.frombuffer(payload[offset:end], dtype=np_dtype).reshape(shape)
        arrays[name] = arr.astype(np.int64 if dtype == "i64" else np.float64)

    extents.sort()
    for (_, end, a), (start, _, b) in zip(extents, extents[1:]):
        if start < end:
            raise ContainerError(f"Arrays '{a}' and '{b}' overlap")

    return arrays, header.get("meta", {})


def atomic_write(path, data):
    """Writes bytes or text through a temporary file renamed into place."""
    directory = os.path.dirname(os.path.abspath(path))
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as fp:
            fp.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_container(path, arrays, meta=None, wide=()):
    blob = pack_container(arrays, meta, wide)
    atomic_write(path, blob)
    logger.info("Wrote %s (%s, %d bytes)", path, ", ".join(sorted(arrays)), len(blob))


def read_container(path):
    try:
        with open(path, "rb") as fp:
            blob = fp.read()
    except OSError as err:
        raise ContainerError(f"Cannot read {path}: {err}")
    return unpack_container(blob)
