"""Domain types, unit conventions and the shared frequency grid.

Everything is SI. Depths reported to the user are optical lengths, i.e. a
delay multiplied by the vacuum speed of light, so a vacuum segment of
100 um contributes 100 um of optical depth.

Dispersion is expanded around the grid centre ``omega_c``::

    beta(omega) = beta1 * d + beta2 * d**2 + beta3 * d**3,   d = omega - omega_c

which keeps ``beta1`` interpretable as the inverse group velocity at the
centre and leaves the constant term out (it only sets a fringe phase).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

C_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class SourceSpec:
    """Photon-pair source and detection grid.

    Parameters
    ----------
    center_wavelength:
        Centre wavelength (m).
    diagonal_bandwidth:
        Wavelength span of the detection grid, and the FWHM of the
        spectral envelope along the main anti-diagonal (m).
    antidiagonal_fwhm:
        FWHM of the pump (central frequency) distribution, expressed as a
        wavelength span (m).
    grid_size:
        Number of samples per frequency axis.
    """

    center_wavelength: float = 1560e-9
    diagonal_bandwidth: float = 180e-9
    antidiagonal_fwhm: float = 16e-9
    grid_size: int = 256

    def __post_init__(self) -> None:
        if not self.center_wavelength > 0:
            raise ValueError("center_wavelength must be > 0")
        if not 0 < self.diagonal_bandwidth < self.center_wavelength:
            raise ValueError("diagonal_bandwidth must lie in (0, center_wavelength)")
        if not self.antidiagonal_fwhm > 0:
            raise ValueError("antidiagonal_fwhm must be > 0")
        n = self.grid_size
        if int(n) != n or n < 8 or n % 2:
            raise ValueError(f"grid_size must be an even integer >= 8, got {n!r}")


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Uniform angular-frequency grid, symmetric about ``center``."""

    omega: np.ndarray
    center: float
    delta_omega: float
    delta_lambda: float
    center_wavelength: float

    @property
    def size(self) -> int:
        return self.omega.size

    @property
    def detuning(self) -> np.ndarray:
        return self.omega - self.center

    @property
    def imaging_range(self) -> float:
        """Largest depth representable on a diagonal A-scan (m)."""
        return C_LIGHT * math.pi / (2.0 * self.delta_omega)

    def wavelength_span(self, delta_omega: float) -> float:
        """Convert an angular-frequency span near the centre to a wavelength span."""
        return delta_omega * self.center_wavelength**2 / (2.0 * math.pi * C_LIGHT)

    def omega_span(self, delta_lambda: float) -> float:
        """Convert a wavelength span near the centre to an angular-frequency span."""
        return 2.0 * math.pi * C_LIGHT * delta_lambda / self.center_wavelength**2

    def same_as(self, other: "FrequencyGrid") -> bool:
        return (
            self.size == other.size
            and self.delta_omega == other.delta_omega
            and bool(np.array_equal(self.omega, other.omega))
        )


def build_frequency_grid(source: SourceSpec) -> FrequencyGrid:
    """Sample ``grid_size`` uniformly spaced angular frequencies.

    The wavelength interval ``lambda_c +/- bandwidth/2`` is converted to
    angular frequency; its width sets the span, and the samples are placed
    symmetrically about ``omega_c = 2 pi c / lambda_c``.
    """
    n = source.grid_size
    lam_c = source.center_wavelength
    half = source.diagonal_bandwidth / 2.0
    span = 2.0 * math.pi * C_LIGHT * (1.0 / (lam_c - half) - 1.0 / (lam_c + half))
    d_omega = span / (n - 1)
    omega_c = 2.0 * math.pi * C_LIGHT / lam_c
    # integer-symmetric offsets keep omega[i] + omega[n-1-i] == 2 omega_c
    offsets = np.arange(n, dtype=float) - (n - 1) / 2.0
    omega = omega_c + offsets * d_omega
    return FrequencyGrid(
        omega=omega,
        center=omega_c,
        delta_omega=d_omega,
        delta_lambda=source.diagonal_bandwidth / (n - 1),
        center_wavelength=lam_c,
    )


@dataclass(frozen=True)
class LayerSegment:
    """Medium traversed before reaching an interface.

    ``group_index_coeff`` is beta1 in s/m (1/c for vacuum); ``beta2`` and
    ``beta3`` are the Taylor coefficients in s^2/m and s^3/m.
    """

    thickness: float
    group_index_coeff: float = 1.0 / C_LIGHT
    beta2: float = 0.0
    beta3: float = 0.0

    def __post_init__(self) -> None:
        if not self.thickness >= 0:
            raise ValueError("thickness must be >= 0")

    @classmethod
    def with_group_index(
        cls, thickness: float, group_index: float = 1.0, beta2: float = 0.0, beta3: float = 0.0
    ) -> "LayerSegment":
        return cls(thickness, group_index / C_LIGHT, beta2, beta3)

    @property
    def group_index(self) -> float:
        return self.group_index_coeff * C_LIGHT


@dataclass(frozen=True)
class Interface:
    reflectivity: float
    segment: LayerSegment

    def __post_init__(self) -> None:
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError(f"reflectivity must lie in [0, 1], got {self.reflectivity!r}")


@dataclass(frozen=True)
class ObjectSpec:
    """Ordered stack of reflecting interfaces, shallowest first."""

    interfaces: tuple[Interface, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "interfaces", tuple(self.interfaces))

    def __len__(self) -> int:
        return len(self.interfaces)

    @property
    def reflectivities(self) -> np.ndarray:
        return np.array([i.reflectivity for i in self.interfaces], dtype=float)

    @classmethod
    def from_depths(
        cls,
        depths: Sequence[float],
        reflectivities: float | Sequence[float] = 0.5,
        group_index: float = 1.0,
    ) -> "ObjectSpec":
        """Non-dispersive object with interfaces at the given geometric depths."""
        depths = [float(d) for d in depths]
        if any(b < a for a, b in zip(depths, depths[1:])):
            raise ValueError("depths must be non-decreasing")
        if np.isscalar(reflectivities):
            refl = [float(reflectivities)] * len(depths)
        else:
            refl = [float(r) for r in reflectivities]
        if len(refl) != len(depths):
            raise ValueError("one reflectivity per depth is required")
        tops = [0.0] + depths[:-1]
        return cls(
            tuple(
                Interface(r, LayerSegment.with_group_index(d - t, group_index))
                for r, d, t in zip(refl, depths, tops)
            )
        )

    def with_segment(self, index: int, **changes: float) -> "ObjectSpec":
        """Copy with fields of one segment replaced (e.g. ``beta2=...``)."""
        items = list(self.interfaces)
        old = items[index]
        seg = LayerSegment(**{**old.segment.__dict__, **changes})
        items[index] = Interface(old.reflectivity, seg)
        return ObjectSpec(tuple(items))


def effective_reflectance(obj: ObjectSpec) -> np.ndarray:
    """Reflectance of each interface after attenuation by the ones above it."""
    r = obj.reflectivities
    if r.size == 0:
        return r
    transmitted = np.concatenate(([1.0], np.cumprod(1.0 - r[:-1])))
    return r * transmitted


def optical_delays(obj: ObjectSpec) -> np.ndarray:
    """Cumulative group delay of each interface, ``sum(z_m * beta1_m)`` (s)."""
    seg = [i.segment for i in obj.interfaces]
    return np.cumsum([s.thickness * s.group_index_coeff for s in seg], dtype=float)


def optical_depths(obj: ObjectSpec) -> np.ndarray:
    """Cumulative optical depth of each interface (m)."""
    return C_LIGHT * optical_delays(obj)


def dispersion_phases(obj: ObjectSpec, detuning: Iterable[float] | np.ndarray) -> np.ndarray:
    """Accumulated higher-order phase of each interface, shape (n_interfaces, n_omega)."""
    d = np.asarray(detuning, dtype=float)
    seg = [i.segment for i in obj.interfaces]
    if not seg:
        return np.zeros((0, d.size))
    b2 = np.cumsum([s.thickness * s.beta2 for s in seg])
    b3 = np.cumsum([s.thickness * s.beta3 for s in seg])
    return b2[:, None] * d**2 + b3[:, None] * d**3
