"""Artefact removal by complex averaging of joint-spectrum diagonals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .stack import DiagonalStack, depth_axis, extract_diagonals
from .synth import JointSpectrum

DEFAULT_KAISER_BETA = 6.0


@dataclass(frozen=True, eq=False)
class AScan:
    """Depth profile on an optical-length axis starting at zero OPD."""

    depth: np.ndarray
    amplitude: np.ndarray
    algorithm: str = "fft"
    k: int = 1
    lambda0_span: float = 0.0
    imaging_range: float = float("nan")
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.depth.shape != self.amplitude.shape:
            raise ValueError("depth and amplitude must have the same shape")

    @property
    def pixel(self) -> float:
        return float(self.depth[1] - self.depth[0])

    def truncated(self, n: int) -> "AScan":
        return AScan(
            self.depth[:n], self.amplitude[:n], self.algorithm, self.k,
            self.lambda0_span, self.imaging_range, dict(self.meta),
        )

    def scaled(self, factor: float) -> "AScan":
        return AScan(
            self.depth, self.amplitude * factor, self.algorithm, self.k,
            self.lambda0_span, self.imaging_range, dict(self.meta),
        )


def analytic_signal(row: np.ndarray) -> np.ndarray:
    """Complex signal with a one-sided spectrum whose real part is ``row``.

    Negative-frequency bins are zeroed, positive ones doubled; DC and (for
    even lengths) Nyquist are kept as they are.
    """
    x = np.asarray(row, dtype=float)
    n = x.shape[-1]
    if n < 4:
        raise ValueError("analytic signal needs at least 4 samples")
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(np.fft.fft(x, axis=-1) * h, axis=-1)


def kaiser_weights(count: int, beta: float = DEFAULT_KAISER_BETA) -> np.ndarray:
    return np.kaiser(count, beta)


def complex_average(
    stack: DiagonalStack,
    window: str | np.ndarray = "kaiser",
    beta: float = DEFAULT_KAISER_BETA,
) -> np.ndarray:
    """Weighted mean of the analytic signals of all stack rows.

    ``window`` is ``"kaiser"``, ``"uniform"`` or an explicit weight array of
    length ``stack.count``. The sum is normalised by the total weight.
    """
    if isinstance(window, str):
        if window == "kaiser":
            w = kaiser_weights(stack.count, beta)
        elif window == "uniform":
            w = np.ones(stack.count)
        else:
            raise ValueError(f"unknown window {window!r}")
    else:
        w = np.asarray(window, dtype=float)
    if w.shape != (stack.count,):
        raise ValueError(f"window length {w.size} does not match stack height {stack.count}")
    total = w.sum()
    if total == 0:
        raise ValueError("window weights sum to zero")

    analytic = analytic_signal(stack.rows)
    acc = np.zeros(stack.length, dtype=complex)
    for wk, row in zip(w, analytic):
        acc += wk * row
    return acc / total


def ascan_from_spectrum(
    spectrum: np.ndarray,
    delta_omega: float,
    n_fft: int | None = None,
    *,
    algorithm: str = "fft",
    k: int = 1,
    lambda0_span: float = 0.0,
) -> AScan:
    """FFT magnitude over the positive-depth half of a detuning spectrum.

    Zero padding (``n_fft`` larger than the spectrum) refines the depth
    sampling but leaves the imaging range unchanged.
    """
    spectrum = np.asarray(spectrum)
    n_fft = n_fft or spectrum.size
    amp = np.abs(np.fft.fft(spectrum, n=n_fft))[: n_fft // 2]
    depth = depth_axis(n_fft, delta_omega)
    full_range = depth[1] * (n_fft // 2)
    return AScan(depth, amp, algorithm, k, lambda0_span, full_range)


def averaged_ascan(
    js: JointSpectrum,
    count: int,
    *,
    beta: float = DEFAULT_KAISER_BETA,
    window: str | np.ndarray = "kaiser",
    fill: str = "zero",
    n_fft: int | None = None,
) -> AScan:
    """Full first algorithm: stack, complex-average, Fourier transform."""
    stack = extract_diagonals(js, count, fill=fill)
    spec = complex_average(stack, window=window if count > 1 else "uniform", beta=beta)
    return ascan_from_spectrum(
        spec, stack.delta_omega, n_fft or js.size,
        algorithm="complex-average", k=count, lambda0_span=stack.lambda0_span,
    )


def min_layer_thickness(
    oscillations: float, center_wavelength: float, lambda0_span: float, index: float = 1.0
) -> float:
    """Thinnest layer whose artefacts complete ``oscillations`` periods over the span.

    ``2 S lambda_c**2 / (span * n)``.
    """
    if oscillations < 0:
        raise ValueError("oscillation count must be >= 0")
    if center_wavelength <= 0 or lambda0_span <= 0 or index <= 0:
        raise ValueError("wavelengths and refractive index must be > 0")
    return 2.0 * oscillations * center_wavelength**2 / (lambda0_span * index)


def required_diagonal_count(fwhm_lambda0: float, delta_lambda: float) -> int:
    """Odd diagonal count whose central-wavelength span covers ``fwhm_lambda0``."""
    if fwhm_lambda0 <= 0 or delta_lambda <= 0:
        raise ValueError("both widths must be > 0")
    # tolerate ratios a hair above an integer from unit conversions
    k = max(1, math.ceil(fwhm_lambda0 / delta_lambda - 1e-9))
    return k if k % 2 else k + 1
