"""Artefact removal by two-dimensional Fourier transformation.

Quadrant convention: maps are stored ``fftshift``-ed, so index ``M // 2``
on each axis is zero delay. A fringe ``exp(i (za * omega_a - zb * omega_b) / c)``
peaks at ``(za, -zb)``; structural terms therefore lie on the line
``z_beta = -z_alpha`` (the anti-diagonal of the unshifted array).

Along that line consecutive samples are ``sqrt(2)`` bins apart. Scaling
this geometric distance by ``sqrt(2)`` and applying the halving used for
diagonal A-scans leaves a depth equal to ``z_alpha``, so interfaces land at
their optical depths with doubled resolving power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .averaging import AScan
from .model import C_LIGHT
from .stack import DiagonalStack, depth_axis
from .synth import JointSpectrum

AXIS_ALIGNED = "axis-aligned"
ROTATED = "rotated"


@dataclass(frozen=True, eq=False)
class FourierMap:
    """Shifted complex 2D transform with axes in optical length.

    For the axis-aligned frame ``axis0`` is z_alpha and ``axis1`` z_beta;
    for the rotated frame ``axis0`` is z_perp (rows) and ``axis1`` z_par.
    """

    data: np.ndarray
    axis0: np.ndarray
    axis1: np.ndarray
    frame: str
    delta_omega: float
    pad: int = 1

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.data)


def _signed_axis(m: int, delta_omega: float) -> np.ndarray:
    return C_LIGHT * 2.0 * math.pi * (np.arange(m) - m // 2) / (m * delta_omega)


def fft2_joint(js: JointSpectrum, pad: int = 1) -> FourierMap:
    """2D FFT of the joint spectrum, zero-padded to ``pad * N`` per axis."""
    n = js.size
    if js.data.shape != (n, n):
        raise ValueError("joint spectrum must be square")
    if pad < 1 or int(pad) != pad:
        raise ValueError("pad must be a positive integer")
    m = int(pad) * n
    spec = np.fft.fftshift(np.fft.fft2(js.data, s=(m, m)))
    ax = _signed_axis(m, js.grid.delta_omega)
    return FourierMap(spec, ax, ax.copy(), AXIS_ALIGNED, js.grid.delta_omega, int(pad))


def extract_diagonal_ascan(fmap: FourierMap) -> AScan:
    """Sample ``|m|`` along ``z_beta = -z_alpha`` for ``z_alpha >= 0``."""
    if fmap.frame != AXIS_ALIGNED:
        raise ValueError("diagonal extraction needs an axis-aligned map")
    m = fmap.data.shape[0]
    c0 = m // 2
    k = np.arange(m // 2)
    amp = np.abs(fmap.data[c0 + k, c0 - k])
    depth = fmap.axis0[c0 + k]
    return AScan(
        depth, amp, "fft2-joint",
        imaging_range=depth[1] * (m // 2), meta={"pad": fmap.pad},
    )


def fft2_stack(stack: DiagonalStack, pad: int = 1) -> tuple[FourierMap, AScan]:
    """2D FFT of a diagonal stack and the A-scan from its middle row.

    Rows are shifted so the zero-``z_perp`` row sits at index ``K_pad // 2``.
    The detuning axis is padded by ``pad``; the ``omega_0`` axis likewise.
    """
    if pad < 1 or int(pad) != pad:
        raise ValueError("pad must be a positive integer")
    kk = stack.count * int(pad)
    ll = stack.length * int(pad)
    spec = np.fft.fftshift(np.fft.fft2(stack.rows, s=(kk, ll)), axes=0)
    perp = _signed_axis(kk, stack.delta_omega)
    par = depth_axis(ll, stack.delta_omega)
    fmap = FourierMap(spec[:, : ll // 2], perp, par, ROTATED, stack.delta_omega, int(pad))
    middle = np.abs(spec[kk // 2, : ll // 2])
    ascan = AScan(
        par, middle, "fft2-stack", stack.count, stack.lambda0_span,
        par[1] * (ll // 2), {"pad": int(pad)},
    )
    return fmap, ascan
