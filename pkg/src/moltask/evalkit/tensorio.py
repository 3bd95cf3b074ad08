"""Binary tensor container and its JSON label sidecar.

Layout (little-endian): 8-byte magic ``MOLTNSR1``, uint8 dtype code
(1 = float32, 2 = float64), uint8 ndim, 6 reserved bytes, then ndim
uint64 dimensions, then the row-major payload.  Logits use 3-D tensors;
embedding matrices reuse the same container in 2-D.

The sidecar maps label names to vocabulary token ids::

    {"labels": ["task_a", ...], "token_ids": [17, ...]}
"""

from __future__ import annotations

import json
import struct

import numpy as np

__all__ = ["write_tensor", "read_tensor", "write_sidecar", "read_sidecar",
           "MAGIC"]

MAGIC = b"MOLTNSR1"

_DTYPES = {1: np.dtype("<f4"), 2: np.dtype("<f8")}
_CODES = {np.dtype("float32"): 1, np.dtype("float64"): 2}


def write_tensor(path, array) -> None:
    array = np.asarray(array)
    code = _CODES.get(array.dtype)
    if code is None:
        array = array.astype(np.float32)
        code = 1
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<BB6x", code, array.ndim))
        fh.write(struct.pack(f"<{array.ndim}Q", *array.shape))
        fh.write(np.ascontiguousarray(array).astype(_DTYPES[code]).tobytes())


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        code, ndim = struct.unpack("<BB6x", fh.read(8))
        dtype = _DTYPES.get(code)
        if dtype is None:
            raise ValueError(f"{path}: unknown dtype code {code}")
        if ndim == 0 or ndim > 8:
            raise ValueError(f"{path}: implausible ndim {ndim}")
        shape = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim))
        count = 1
        for d in shape:
            count *= d
        data = np.frombuffer(fh.read(count * dtype.itemsize), dtype=dtype)
        if data.size != count:
            raise ValueError(f"{path}: truncated payload")
        return data.reshape(shape).copy()


def write_sidecar(path, label_names, token_ids) -> None:
    names = list(label_names)
    ids = [int(t) for t in token_ids]
    if len(names) != len(ids):
        raise ValueError("label names and token ids must pair up")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"labels": names, "token_ids": ids}, fh, indent=2)
        fh.write("\n")


def read_sidecar(path) -> tuple[list[str], list[int]]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    names = list(data["labels"])
    ids = [int(t) for t in data["token_ids"]]
    if len(names) != len(ids):
        raise ValueError(f"{path}: label names and token ids must pair up")
    return names, ids
