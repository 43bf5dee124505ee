"""Peak finding, artefact prediction, suppression metrics and brute-force oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .averaging import AScan
from .fft2d import AXIS_ALIGNED, FourierMap
from .model import C_LIGHT, ObjectSpec, SourceSpec, build_frequency_grid, effective_reflectance, optical_depths
from .synth import FWHM_TO_GAUSS, transfer_function

ORACLE_MAX_1D = 512


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    fwhm: float
    index: int


@dataclass(frozen=True)
class PeakList:
    peaks: tuple[Peak, ...]

    def __len__(self) -> int:
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.peaks])

    @property
    def heights(self) -> np.ndarray:
        return np.array([p.height for p in self.peaks])


def _log_parabola(ym1: float, y0: float, yp1: float) -> tuple[float, float, float]:
    """Offset, height and Gaussian FWHM (in samples) through three samples."""
    if min(ym1, y0, yp1) <= 0:
        # fall back to a plain parabola when the log is undefined
        denom = ym1 - 2 * y0 + yp1
        p = 0.5 * (ym1 - yp1) / denom if denom else 0.0
        return p, y0 - 0.25 * (ym1 - yp1) * p, float("nan")
    a, b, c = math.log(ym1), math.log(y0), math.log(yp1)
    curv = a - 2 * b + c
    if curv >= 0:
        return 0.0, y0, float("nan")
    p = 0.5 * (a - c) / curv
    height = math.exp(b - 0.25 * (a - c) * p)
    fwhm = 2.0 * math.sqrt(2.0 * math.log(2.0) / -curv)
    return p, height, fwhm


def find_peaks(ascan: AScan, rel_threshold: float = 0.05, min_depth: float = 0.0) -> PeakList:
    """Interior local maxima above ``rel_threshold`` of the largest sample.

    Only samples at ``depth >= min_depth`` take part, which lets callers
    step over the zero-OPD lobe. Positions and widths come from a parabola
    through the log-amplitude of the apex and its two neighbours.
    """
    if not 0 < rel_threshold < 1:
        raise ValueError("rel_threshold must lie in (0, 1)")
    amp = np.asarray(ascan.amplitude, dtype=float)
    if amp.size < 3:
        raise ValueError("A-scan is too short for peak finding")
    start = int(np.searchsorted(ascan.depth, min_depth))
    region = amp[start:]
    top = float(region.max()) if region.size else 0.0
    if top <= 0:
        raise ValueError("A-scan has no positive amplitude")
    step = ascan.pixel
    found = []
    for i in range(max(1, start), amp.size - 1):
        y0 = amp[i]
        if y0 < rel_threshold * top or not (y0 > amp[i - 1] and y0 >= amp[i + 1]):
            continue
        p, h, w = _log_parabola(amp[i - 1], y0, amp[i + 1])
        found.append(Peak(float(ascan.depth[i] + p * step), float(h), float(w * step), i))
    return PeakList(tuple(found))


def measure_fwhm(ascan: AScan, position: float) -> float:
    """Full width at half maximum around the sample nearest ``position``.

    Walks out from the apex to the half-maximum crossings and interpolates
    linearly between samples; needs a reasonably well-sampled peak.
    """
    amp = ascan.amplitude
    z = ascan.depth
    i = int(np.argmin(np.abs(z - position)))
    # climb to the local apex
    while 0 < i < amp.size - 1 and max(amp[i - 1], amp[i + 1]) > amp[i]:
        i += 1 if amp[i + 1] > amp[i - 1] else -1
    half = amp[i] / 2.0
    lo = i
    while lo > 0 and amp[lo] > half:
        lo -= 1
    hi = i
    while hi < amp.size - 1 and amp[hi] > half:
        hi += 1
    if amp[lo] > half or amp[hi] > half:
        raise ValueError("peak does not fall to half maximum inside the A-scan")
    z_lo = z[lo] + (half - amp[lo]) / (amp[lo + 1] - amp[lo]) * (z[lo + 1] - z[lo])
    z_hi = z[hi - 1] + (amp[hi - 1] - half) / (amp[hi - 1] - amp[hi]) * (z[hi] - z[hi - 1])
    return float(z_hi - z_lo)


@dataclass(frozen=True, eq=False)
class ArtefactPrediction:
    """Where the features of an object appear (optical lengths, m).

    ``stationary`` holds interface separations. On a diagonal A-scan, whose
    depth axis halves the detuning fringe frequency, a separation ``d``
    shows up at ``d / 2``; ``stationary_ascan`` gives those positions.
    ``pairs`` lists the interface index pairs (n, u), n < u, in the order
    used by ``stationary`` and ``instationary``.
    """

    structural: np.ndarray
    stationary: np.ndarray
    instationary: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    weights: np.ndarray

    @property
    def stationary_ascan(self) -> np.ndarray:
        return self.stationary / 2.0

    @property
    def pair_weights(self) -> np.ndarray:
        """S_n * S_u per pair; artefact heights scale with these."""
        return np.array([self.weights[n] * self.weights[u] for n, u in self.pairs])

    def ascan_features(self) -> list[tuple[str, float, float]]:
        """(kind, position, relative height) of every expected A-scan peak."""
        out = [("structural", float(z), float(s * s)) for z, s in zip(self.structural, self.weights)]
        for (n, u), d, mid, w in zip(self.pairs, self.stationary_ascan, self.instationary, self.pair_weights):
            out.append(("stationary", float(d), float(2 * w)))
            out.append(("instationary", float(mid), float(2 * w)))
        return out


def predict_artefacts(obj: ObjectSpec) -> ArtefactPrediction:
    if len(obj) == 0:
        raise ValueError("object has no interfaces")
    return predict_from_depths(optical_depths(obj), effective_reflectance(obj))


def predict_from_depths(depths: np.ndarray, weights: np.ndarray | None = None) -> ArtefactPrediction:
    """Same as :func:`predict_artefacts` from optical depths and S_n directly."""
    z = np.asarray(depths, dtype=float)
    if z.size == 0:
        raise ValueError("no interface depths given")
    w = np.ones_like(z) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != z.shape:
        raise ValueError("one weight per depth is required")
    pairs = tuple(combinations(range(z.size), 2))
    stationary = np.array([z[u] - z[n] for n, u in pairs])
    instationary = np.array([(z[n] + z[u]) / 2.0 for n, u in pairs])
    return ArtefactPrediction(z, stationary, instationary, pairs, w)


@dataclass
class SuppressionReport:
    artefacts: list[dict] = field(default_factory=list)
    structural: list[dict] = field(default_factory=list)

    @property
    def counted(self) -> list[dict]:
        return [a for a in self.artefacts if not a["excluded"]]

    @property
    def worst_artefact_db(self) -> float:
        vals = [a["residual_db"] for a in self.counted]
        return max(vals) if vals else float("nan")

    @property
    def mean_artefact_db(self) -> float:
        vals = [a["residual_db"] for a in self.counted]
        return float(np.mean(vals)) if vals else float("nan")

    def as_flat(self) -> dict[str, float]:
        """Flat key/value view used by the CLI metrics file."""
        flat: dict[str, float] = {
            "artefact_worst_db": self.worst_artefact_db,
            "artefact_mean_db": self.mean_artefact_db,
            "artefact_counted": float(len(self.counted)),
        }
        for i, a in enumerate(self.artefacts):
            key = f"artefact_{i}_{a['kind']}"
            flat[f"{key}_position"] = a["position"]
            flat[f"{key}_residual_db"] = a["residual_db"]
            flat[f"{key}_excluded"] = float(a["excluded"])
        for i, s in enumerate(self.structural):
            flat[f"structural_{i}_position"] = s["position"]
            flat[f"structural_{i}_shift"] = s["shift"]
            flat[f"structural_{i}_height_db"] = s["height_db"]
        return flat


def _window_max(ascan: AScan, position: float, half_width: int) -> float:
    i = int(round(position / ascan.pixel))
    lo, hi = max(0, i - half_width), min(ascan.amplitude.size, i + half_width + 1)
    if lo >= hi:
        return float("nan")
    return float(ascan.amplitude[lo:hi].max())


def _apex(ascan: AScan, position: float) -> float:
    i = int(round(position / ascan.pixel))
    lo, hi = max(1, i - 1), min(ascan.amplitude.size - 1, i + 2)
    j = lo + int(np.argmax(ascan.amplitude[lo:hi]))
    j = min(max(j, 1), ascan.amplitude.size - 2)
    a = ascan.amplitude
    p, _, _ = _log_parabola(a[j - 1], a[j], a[j + 1])
    return float(ascan.depth[j] + p * ascan.pixel)


def suppression_report(
    raw: AScan,
    cleaned: AScan,
    pred: ArtefactPrediction,
    window_px: int = 3,
    collision_px: float = 2.0,
) -> SuppressionReport:
    """Artefact residuals of ``cleaned`` relative to ``raw``.

    Each A-scan is first normalised by the mean height of its structural
    peaks, so algorithms with different overall gain compare directly.
    Residual = (cleaned window max / cleaned structure) divided by
    (raw window max / raw structure), in dB, with a window of
    ``+/- window_px`` samples. Artefacts closer than ``collision_px``
    samples to a structural peak, or close enough to zero OPD for the
    window to reach the zero-delay lobe, are reported but excluded.
    """
    if raw.depth.shape != cleaned.depth.shape or not np.allclose(
        raw.depth, cleaned.depth, rtol=1e-9, atol=1e-15
    ):
        raise ValueError("raw and cleaned A-scans must share one depth axis")
    px = raw.pixel
    struct = pred.structural

    def collides(z: float, exclude_self: bool = False) -> bool:
        d = np.abs(struct - z) / px
        if exclude_self:
            d = d[d > 1e-9]
        return bool(np.any(d < collision_px))

    art_pos = [(k, p) for k, p, _ in pred.ascan_features() if k != "structural"]
    art_z = np.array([p for _, p in art_pos])
    clean_struct = [
        z for z in struct
        if not np.any(np.abs(art_z - z) / px < collision_px)
    ] or list(struct)

    def reference(scan: AScan) -> float:
        return float(np.mean([_window_max(scan, z, 1) for z in clean_struct]))

    ref_raw, ref_clean = reference(raw), reference(cleaned)
    report = SuppressionReport()
    for kind, z in art_pos:
        near_dc = z / px < window_px + collision_px
        excluded = collides(z) or near_dc
        r = _window_max(raw, z, window_px) / ref_raw
        c = _window_max(cleaned, z, window_px) / ref_clean
        db = 20.0 * math.log10(c / r) if r > 0 and c > 0 else float("-inf") if r > 0 else float("nan")
        report.artefacts.append(
            {"kind": kind, "position": z, "residual_db": db, "excluded": excluded,
             "reason": "zero-opd" if near_dc else ("collision" if excluded else "")}
        )
    for z in struct:
        hr = _window_max(raw, z, 1) / ref_raw
        hc = _window_max(cleaned, z, 1) / ref_clean
        report.structural.append(
            {"position": float(z), "shift": _apex(cleaned, z) - _apex(raw, z),
             "height_db": 20.0 * math.log10(hc / hr) if hr > 0 and hc > 0 else float("nan"),
             "collision": collides(z)}
        )
    return report


def _dft_matrix(n: int) -> np.ndarray:
    jk = np.outer(np.arange(n), np.arange(n)) % n
    angle = -2.0 * math.pi * jk / n
    return np.cos(angle) + 1j * np.sin(angle)


def dft_oracle_1d(signal: np.ndarray) -> np.ndarray:
    """Direct-summation DFT, ``X[k] = sum_j x[j] exp(-2 pi i j k / n)``."""
    x = np.asarray(signal)
    if x.ndim != 1:
        raise ValueError("expected a 1D signal")
    if x.size > ORACLE_MAX_1D:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_1D} samples")
    return _dft_matrix(x.size) @ x


def dft_oracle_2d(matrix: np.ndarray) -> np.ndarray:
    """Direct-summation 2D DFT, evaluated as sums over each index in turn."""
    x = np.asarray(matrix)
    if x.ndim != 2:
        raise ValueError("expected a 2D matrix")
    if max(x.shape) > ORACLE_MAX_1D:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_1D} samples per axis")
    return _dft_matrix(x.shape[0]) @ x @ _dft_matrix(x.shape[1]).T


def ncc(a: np.ndarray, b: np.ndarray) -> float:
    """Zero-lag normalised cross-correlation (Pearson) of two profiles."""
    a = np.asarray(a, dtype=float) - np.mean(a)
    b = np.asarray(b, dtype=float) - np.mean(b)
    den = np.linalg.norm(a) * np.linalg.norm(b)
    return float(a @ b / den) if den else float("nan")


def map_peaks(
    fmap: FourierMap, rel_threshold: float = 0.05, axis_guard_px: int = 2
) -> list[tuple[float, float, float]]:
    """Local maxima of ``|m|`` in the quadrant z_alpha > 0, z_beta < 0.

    Peaks within ``axis_guard_px`` samples of either axis belong to the
    zero-delay ridges and are skipped. The threshold is relative to the
    global maximum of the whole map.
    """
    if fmap.frame != AXIS_ALIGNED:
        raise ValueError("peak search expects an axis-aligned map")
    mag = fmap.magnitude
    top = mag.max()
    if top <= 0:
        return []
    padded = np.pad(mag, 1, mode="constant", constant_values=-np.inf)
    neigh = np.max(
        [padded[1 + di : 1 + di + mag.shape[0], 1 + dj : 1 + dj + mag.shape[1]]
         for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj],
        axis=0,
    )
    c0 = mag.shape[0] // 2
    ii, jj = np.nonzero((mag > neigh) & (mag >= rel_threshold * top))
    keep = (ii >= c0 + axis_guard_px) & (jj <= c0 - axis_guard_px)
    return sorted(
        (float(fmap.axis0[i]), float(fmap.axis1[j]), float(mag[i, j]))
        for i, j in zip(ii[keep], jj[keep])
    )


def classical_ascan(obj: ObjectSpec, source: SourceSpec, n_fft: int | None = None) -> AScan:
    """Conventional single-photon spectral-domain A-scan, for comparison.

    Spectrum ``G(omega) |1 + f(omega)|^2`` with the diagonal envelope; a
    fringe ``exp(i z omega / c)`` is placed at depth ``z``.
    """
    grid = build_frequency_grid(source)
    f = transfer_function(obj, grid).values
    env = np.exp(-FWHM_TO_GAUSS * (grid.detuning / grid.omega_span(source.diagonal_bandwidth)) ** 2)
    spec = env * np.abs(1.0 + f) ** 2
    n_fft = n_fft or grid.size
    amp = np.abs(np.fft.fft(spec, n=n_fft))[: n_fft // 2]
    depth = C_LIGHT * 2.0 * math.pi * np.arange(n_fft // 2) / (n_fft * grid.delta_omega)
    return AScan(depth, amp, "classical", imaging_range=depth[1] * (n_fft // 2))
