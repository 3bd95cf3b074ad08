"""Binary tensor container and sidecar round trips."""

import numpy as np
import pytest

from moltask.evalkit import read_sidecar, read_tensor, write_sidecar, write_tensor


def test_tensor_3d_float32_round_trip(tmp_path):
    path = tmp_path / "logits.bin"
    array = np.random.default_rng(0).normal(size=(4, 5, 7)).astype(np.float32)
    write_tensor(path, array)
    back = read_tensor(path)
    assert back.dtype == np.float32
    assert back.shape == (4, 5, 7)
    assert np.array_equal(back, array)


def test_tensor_2d_float64_round_trip(tmp_path):
    path = tmp_path / "emb.bin"
    array = np.random.default_rng(1).normal(size=(3, 16))
    write_tensor(path, array)
    back = read_tensor(path)
    assert back.dtype == np.float64
    assert np.array_equal(back, array)


def test_tensor_other_dtype_coerced(tmp_path):
    path = tmp_path / "ints.bin"
    write_tensor(path, np.arange(6).reshape(2, 3))
    back = read_tensor(path)
    assert back.dtype == np.float32
    assert np.array_equal(back, np.arange(6).reshape(2, 3))


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 32)
    with pytest.raises(ValueError, match="magic"):
        read_tensor(path)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "logits.bin"
    write_tensor(path, np.zeros((2, 2, 2), dtype=np.float32))
    data = path.read_bytes()
    path.write_bytes(data[:-4])
    with pytest.raises(ValueError, match="truncated"):
        read_tensor(path)


def test_sidecar_round_trip(tmp_path):
    path = tmp_path / "labels.json"
    write_sidecar(path, ["bbbp", "tox"], [101, 102])
    names, ids = read_sidecar(path)
    assert names == ["bbbp", "tox"]
    assert ids == [101, 102]


def test_sidecar_mismatch_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_sidecar(tmp_path / "x.json", ["a"], [1, 2])
