"""Object transfer function and joint-spectrum synthesis."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (
    FrequencyGrid,
    ObjectSpec,
    SourceSpec,
    build_frequency_grid,
    dispersion_phases,
    effective_reflectance,
    optical_delays,
)

FWHM_TO_GAUSS = 4.0 * math.log(2.0)


def thread_count(requested: int | None = None) -> int:
    """Worker count, capped by the ``QOCT_THREADS`` environment variable."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get("QOCT_THREADS")
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ValueError(f"QOCT_THREADS must be an integer, got {cap!r}") from None
    return max(1, n)


@dataclass(frozen=True, eq=False)
class TransferFunction:
    """Object response f(omega) on a frequency grid.

    ``weights`` are the effective reflectances S_n, ``delays`` the optical
    delays z~_n (s) and ``dispersion`` the per-interface phase phi_n^D
    sampled on the grid.
    """

    values: np.ndarray
    grid: FrequencyGrid
    weights: np.ndarray
    delays: np.ndarray
    dispersion: np.ndarray

    def linear_phase(self, n: int) -> np.ndarray:
        return self.delays[n] * self.grid.detuning

    def dispersion_phase(self, n: int) -> np.ndarray:
        return self.dispersion[n]


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Coincidence map C[i, j] over (omega_alpha[i], omega_beta[j])."""

    data: np.ndarray
    grid: FrequencyGrid

    @property
    def size(self) -> int:
        return self.data.shape[0]


def transfer_function(obj: ObjectSpec, grid: FrequencyGrid) -> TransferFunction:
    weights = effective_reflectance(obj)
    delays = optical_delays(obj)
    d = grid.detuning
    disp = dispersion_phases(obj, d)
    values = np.zeros(grid.size, dtype=complex)
    # fixed summation order: shallowest interface first
    for s, tau, phi in zip(weights, delays, disp):
        values += s * np.exp(1j * (tau * d + phi))
    return TransferFunction(values, grid, weights, delays, disp)


def _gauss(x: np.ndarray, fwhm: float) -> np.ndarray:
    return np.exp(-FWHM_TO_GAUSS * (x / fwhm) ** 2)


def joint_spectral_profile(source: SourceSpec, grid: FrequencyGrid) -> np.ndarray:
    """Peak-normalised |phi(omega_alpha, omega_beta)|^2.

    Separable Gaussian in the rotated coordinates: the central frequency
    ``omega_0`` carries the pump width and the detuning ``omega'`` the
    diagonal bandwidth, measured as a width in ``omega_alpha``.
    """
    w = grid.omega
    w0_fwhm = grid.omega_span(source.antidiagonal_fwhm)
    wp_fwhm = grid.omega_span(source.diagonal_bandwidth)
    a, b = w[:, None], w[None, :]
    return _gauss((a + b) / 2.0 - grid.center, w0_fwhm) * _gauss((a - b) / 2.0, wp_fwhm)


def _rows(profile: np.ndarray, f: np.ndarray, lo: int, hi: int) -> np.ndarray:
    power = f.real**2 + f.imag**2
    fa = f[lo:hi, None]
    cross = fa.real * f.real[None, :] + fa.imag * f.imag[None, :]
    return profile[lo:hi] * ((power[lo:hi, None] + power[None, :]) - 2.0 * cross)


def synthesize_joint_spectrum(
    obj: ObjectSpec,
    source: SourceSpec,
    *,
    transfer: TransferFunction | None = None,
    noise_snr_db: float | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> JointSpectrum:
    """Evaluate the coincidence map in its three-term form.

    ``C = |phi|^2 (|f_a|^2 + |f_b|^2 - 2 Re f_a f_b*)``. Optional additive
    white noise is scaled so that ``peak / sigma`` equals ``noise_snr_db``.
    """
    grid = build_frequency_grid(source)
    if transfer is None:
        transfer = transfer_function(obj, grid)
    elif not transfer.grid.same_as(grid):
        raise ValueError("transfer function was evaluated on a different frequency grid")

    profile = joint_spectral_profile(source, grid)
    f = transfer.values
    n = grid.size
    workers = thread_count(threads)
    if workers == 1:
        data = _rows(profile, f, 0, n)
    else:
        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda ab: _rows(profile, f, *ab), zip(bounds[:-1], bounds[1:]))
            data = np.vstack(list(parts))

    if noise_snr_db is not None:
        peak = float(np.max(np.abs(data)))
        sigma = peak / 10.0 ** (noise_snr_db / 20.0) if peak > 0 else 0.0
        rng = np.random.default_rng(seed)
        data = data + sigma * rng.standard_normal(data.shape)
    return JointSpectrum(data, grid)
