import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from fdqoct import io


finite = st.floats(-1e300, 1e300, allow_nan=False)


@given(hnp.arrays(float, hnp.array_shapes(min_dims=2, max_dims=2, max_side=12), elements=finite))
def test_matrix_roundtrip_exact(m):
    out = io.decode_matrix(io.encode_matrix(m))
    assert out.shape == m.shape
    assert np.array_equal(out, m)


def test_matrix_file_layout(tmp_path):
    m = np.arange(6.0).reshape(2, 3)
    path = tmp_path / "m.qjs"
    io.write_matrix(path, m)
    raw = path.read_bytes()
    assert raw[:4] == b"QJS1"
    assert raw[4:12] == (2).to_bytes(4, "little") + (3).to_bytes(4, "little")
    assert len(raw) == 12 + 6 * 8
    assert np.array_equal(io.read_matrix(path), m)


def test_matrix_rejects_bad_files():
    with pytest.raises(ValueError):
        io.decode_matrix(b"NOPE" + bytes(8))
    good = io.encode_matrix(np.ones((3, 3)))
    with pytest.raises(ValueError):
        io.decode_matrix(good[:-8])
    with pytest.raises(ValueError):
        io.encode_matrix(np.ones(4))


def test_csv_roundtrip(tmp_path, rng):
    cols = {"depth_m": rng.random(50) * 1e-3, "amplitude": rng.standard_normal(50)}
    path = tmp_path / "a.csv"
    io.write_csv(path, cols)
    back = io.read_csv(path)
    assert list(back) == ["depth_m", "amplitude"]
    for k in cols:
        assert np.allclose(back[k], cols[k], rtol=1e-12, atol=0)


def test_csv_empty_and_ragged(tmp_path):
    io.write_csv(tmp_path / "e.csv", {"a": [], "b": []})
    back = io.read_csv(tmp_path / "e.csv")
    assert back["a"].size == 0 and back["b"].size == 0
    with pytest.raises(ValueError):
        io.write_csv(tmp_path / "r.csv", {"a": [1.0], "b": [1.0, 2.0]})


def test_metrics_roundtrip(tmp_path):
    m = {"x": 1.5, "y": float("nan"), "z": float("-inf"), "n": 3}
    io.write_metrics(tmp_path / "m.csv", m)
    back = io.read_metrics(tmp_path / "m.csv")
    assert list(back) == list(m)
    assert back["x"] == 1.5 and np.isnan(back["y"]) and back["z"] == float("-inf") and back["n"] == 3.0


def test_metrics_rejects_other_csv(tmp_path):
    io.write_csv(tmp_path / "t.csv", {"a": [1.0]})
    with pytest.raises(ValueError):
        io.read_metrics(tmp_path / "t.csv")


def test_pgm_scaling_and_roundtrip(tmp_path):
    img = np.array([[0.0, 1.0, 2.0], [3.0, 4.0, 5.0]])
    io.write_pgm(tmp_path / "p.pgm", img)
    raw = (tmp_path / "p.pgm").read_bytes()
    assert raw.startswith(b"P5\n3 2\n255\n")
    pix = io.read_pgm(tmp_path / "p.pgm")
    assert pix.shape == (2, 3)
    assert pix[0, 0] == 0 and pix[1, 2] == 255
    assert np.array_equal(pix.ravel(), np.rint(np.arange(6) / 5 * 255).astype(np.uint8))


def test_pgm_pixels_that_look_like_whitespace():
    # leading pixel values 9, 10, 13 and 32 are whitespace bytes
    values = np.array([[9, 10, 13, 32, 0, 255]], dtype=float)
    pix = io.decode_pgm(io.encode_pgm(values))
    assert np.array_equal(pix, values.astype(np.uint8))


def test_pgm_flat_image_is_black():
    assert not io.decode_pgm(io.encode_pgm(np.full((4, 4), 7.0))).any()


def test_pgm_rejects_bad_input():
    with pytest.raises(ValueError):
        io.decode_pgm(b"P2\n1 1\n255\n0")
    with pytest.raises(ValueError):
        io.decode_pgm(b"P5\n2 2\n255\n\x00")
    with pytest.raises(ValueError):
        io.decode_pgm(b"P5\n1 1\n65535\n\x00\x00")
    with pytest.raises(ValueError):
        io.encode_pgm(np.zeros(3))


def test_atomic_write_replaces_and_cleans_up(tmp_path):
    path = tmp_path / "f.bin"
    path.write_bytes(b"old")
    io.atomic_write(path, b"new")
    assert path.read_bytes() == b"new"
    assert os.listdir(tmp_path) == ["f.bin"]


def test_atomic_write_failure_keeps_old_file(tmp_path, monkeypatch):
    path = tmp_path / "f.bin"
    path.write_bytes(b"old")

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(io.os, "replace", boom)
    with pytest.raises(OSError):
        io.atomic_write(path, b"new")
    assert path.read_bytes() == b"old"
    assert os.listdir(tmp_path) == ["f.bin"]
