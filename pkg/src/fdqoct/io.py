"""File formats: QJS1 matrices, CSV tables and 8-bit PGM previews.

All writers go through :func:`atomic_write`, so a reader never sees a
half-written file.
"""

from __future__ import annotations

import csv
import io
import os
import re
import struct
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

MATRIX_MAGIC = b"QJS1"
FLOAT_FORMAT = "%.12e"


def atomic_write(path: str | os.PathLike, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def encode_matrix(matrix: np.ndarray) -> bytes:
    m = np.asarray(matrix, dtype="<f8")
    if m.ndim != 2:
        raise ValueError("only 2D matrices can be stored")
    return MATRIX_MAGIC + struct.pack("<II", *m.shape) + np.ascontiguousarray(m).tobytes()


def decode_matrix(payload: bytes) -> np.ndarray:
    if payload[:4] != MATRIX_MAGIC:
        raise ValueError("not a QJS1 matrix file")
    rows, cols = struct.unpack("<II", payload[4:12])
    body = payload[12:]
    if len(body) != rows * cols * 8:
        raise ValueError(f"QJS1 body holds {len(body)} bytes, header promises {rows}x{cols} doubles")
    return np.frombuffer(body, dtype="<f8").reshape(rows, cols).astype(float)


def write_matrix(path, matrix: np.ndarray) -> None:
    atomic_write(path, encode_matrix(matrix))


def read_matrix(path) -> np.ndarray:
    return decode_matrix(Path(path).read_bytes())


def write_csv(path, columns: Mapping[str, Sequence[float]]) -> None:
    """Numeric table with a header row; every column must have one length."""
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    if len({d.size for d in data}) > 1:
        raise ValueError("CSV columns differ in length")
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*data):
        buf.write(",".join(FLOAT_FORMAT % v for v in row) + "\n")
    atomic_write(path, buf.getvalue().encode("ascii"))


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in r] for r in reader if r]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_metrics(path, metrics: Mapping[str, float]) -> None:
    """Flat ``key,value`` report in insertion order."""
    buf = io.StringIO()
    buf.write("key,value\n")
    for k, v in metrics.items():
        buf.write(f"{k},{FLOAT_FORMAT % float(v)}\n")
    atomic_write(path, buf.getvalue().encode("ascii"))


def read_metrics(path) -> dict[str, float]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if next(reader) != ["key", "value"]:
            raise ValueError(f"{path}: not a metrics file")
        return {k: float(v) for k, v in reader}


def encode_pgm(image: np.ndarray) -> bytes:
    """Binary P5 greymap, min-max scaled to 0..255; row 0 is written first."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("PGM preview needs a 2D array")
    lo, hi = float(np.min(img)), float(np.max(img))
    scaled = np.zeros(img.shape) if hi == lo else (img - lo) / (hi - lo) * 255.0
    pixels = np.rint(scaled).astype(np.uint8)
    rows, cols = pixels.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + pixels.tobytes()


def decode_pgm(payload: bytes) -> np.ndarray:
    # exactly one whitespace byte separates the header from the pixels
    head = re.match(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s", payload)
    if head is None:
        raise ValueError("not a binary PGM file")
    cols, rows, maxval = (int(g) for g in head.groups())
    if maxval != 255:
        raise ValueError("only 8-bit PGM is supported")
    body = payload[head.end():]
    if len(body) != rows * cols:
        raise ValueError("PGM body size does not match its header")
    return np.frombuffer(body, dtype=np.uint8).reshape(rows, cols)


def write_pgm(path, image: np.ndarray) -> None:
    atomic_write(path, encode_pgm(image))


def read_pgm(path) -> np.ndarray:
    return decode_pgm(Path(path).read_bytes())
