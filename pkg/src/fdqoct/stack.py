"""Diagonal stacks and FFT stacks.

A joint-spectrum diagonal is a line of constant ``omega_alpha + omega_beta``,
which is an anti-diagonal ``i + j = const`` of the sampled matrix. Row ``k``
of a stack is the anti-diagonal ``i + j = N - 1 + 2k``: its central
frequency is ``omega_c + k * d_omega`` and all rows share the detuning
lattice ``omega' = (m - (N - 1) / 2) * d_omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import C_LIGHT
from .synth import JointSpectrum

FILL_MODES = ("zero", "crop")


@dataclass(frozen=True, eq=False)
class DiagonalStack:
    rows: np.ndarray
    omega0_axis: np.ndarray
    omega_prime_axis: np.ndarray
    lambda0_span: float
    delta_omega: float
    fill: str = "zero"

    @property
    def count(self) -> int:
        return self.rows.shape[0]

    @property
    def length(self) -> int:
        return self.rows.shape[1]

    @property
    def center_row(self) -> np.ndarray:
        return self.rows[self.count // 2]


@dataclass(frozen=True, eq=False)
class FFTStack:
    rows: np.ndarray
    depth_axis: np.ndarray
    omega0_axis: np.ndarray


def depth_axis(n_fft: int, delta_omega: float) -> np.ndarray:
    """Depths of the first ``n_fft // 2`` bins of a detuning-domain FFT.

    A fringe ``exp(2i z omega' / c)`` lands at depth ``z``.
    """
    return C_LIGHT * math.pi * np.arange(n_fft // 2) / (n_fft * delta_omega)


def _anti_diagonal(data: np.ndarray, k: int) -> np.ndarray:
    n = data.shape[0]
    s = n - 1 + 2 * k
    i = np.arange(max(0, s - n + 1), min(n - 1, s) + 1)
    return data[i, s - i]


def extract_diagonals(js: JointSpectrum, count: int, fill: str = "zero") -> DiagonalStack:
    """Stack the ``count`` most central diagonals of a joint spectrum.

    ``fill="zero"`` keeps every diagonal at its full extent and pads the
    shorter ones with zeros to the length ``N`` of the main diagonal;
    ``fill="crop"`` cuts all rows to the common central length
    ``N - (count - 1)``.
    """
    n = js.size
    if js.data.shape != (n, n):
        raise ValueError("joint spectrum must be square")
    if count < 1 or count % 2 == 0:
        raise ValueError(f"diagonal count must be odd and >= 1, got {count}")
    if count > n // 2:
        raise ValueError(f"diagonal count {count} exceeds N/2 = {n // 2}")
    if fill not in FILL_MODES:
        raise ValueError(f"fill must be one of {FILL_MODES}, got {fill!r}")

    half = (count - 1) // 2
    length = n if fill == "zero" else n - (count - 1)
    rows = np.zeros((count, length))
    for r, k in enumerate(range(-half, half + 1)):
        diag = _anti_diagonal(js.data, k)
        # both fill modes keep rows centred on omega' = 0
        lead = (length - diag.size) // 2
        if lead >= 0:
            rows[r, lead : lead + diag.size] = diag
        else:
            rows[r] = diag[-lead : -lead + length]

    d_omega = js.grid.delta_omega
    ks = np.arange(-half, half + 1)
    omega_prime = (np.arange(length) - (length - 1) / 2.0) * d_omega
    span = (count - 1) * js.grid.delta_lambda
    return DiagonalStack(rows, js.grid.center + ks * d_omega, omega_prime, span, d_omega, fill)


def fft_stack(stack: DiagonalStack, window: str = "rect", n_fft: int | None = None) -> FFTStack:
    """Row-wise FFT magnitudes over the positive-depth half."""
    n_fft = n_fft or stack.length
    rows = stack.rows
    if window == "hann":
        rows = rows * np.hanning(stack.length)[None, :]
    elif window != "rect":
        raise ValueError(f"unknown window {window!r}")
    mag = np.abs(np.fft.fft(rows, n=n_fft, axis=1))[:, : n_fft // 2]
    return FFTStack(mag, depth_axis(n_fft, stack.delta_omega), stack.omega0_axis)
