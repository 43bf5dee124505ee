"""Joint-spectrum synthesis and artefact removal for Fourier-domain quantum OCT."""

from .analyze import (
    ArtefactPrediction,
    Peak,
    PeakList,
    SuppressionReport,
    classical_ascan,
    dft_oracle_1d,
    dft_oracle_2d,
    find_peaks,
    map_peaks,
    measure_fwhm,
    ncc,
    predict_artefacts,
    predict_from_depths,
    suppression_report,
)
from .averaging import (
    AScan,
    analytic_signal,
    ascan_from_spectrum,
    averaged_ascan,
    complex_average,
    kaiser_weights,
    min_layer_thickness,
    required_diagonal_count,
)
from .fft2d import FourierMap, extract_diagonal_ascan, fft2_joint, fft2_stack
from .model import (
    C_LIGHT,
    FrequencyGrid,
    Interface,
    LayerSegment,
    ObjectSpec,
    SourceSpec,
    build_frequency_grid,
    effective_reflectance,
    optical_depths,
)
from .stack import DiagonalStack, FFTStack, extract_diagonals, fft_stack
from .synth import JointSpectrum, TransferFunction, synthesize_joint_spectrum, transfer_function

__version__ = "0.1.0"

__all__ = [
    "AScan",
    "ArtefactPrediction",
    "C_LIGHT",
    "DiagonalStack",
    "FFTStack",
    "FourierMap",
    "FrequencyGrid",
    "Interface",
    "JointSpectrum",
    "LayerSegment",
    "ObjectSpec",
    "Peak",
    "PeakList",
    "SourceSpec",
    "SuppressionReport",
    "TransferFunction",
    "analytic_signal",
    "ascan_from_spectrum",
    "averaged_ascan",
    "build_frequency_grid",
    "classical_ascan",
    "complex_average",
    "dft_oracle_1d",
    "dft_oracle_2d",
    "effective_reflectance",
    "extract_diagonal_ascan",
    "extract_diagonals",
    "fft2_joint",
    "fft2_stack",
    "fft_stack",
    "find_peaks",
    "kaiser_weights",
    "map_peaks",
    "measure_fwhm",
    "min_layer_thickness",
    "ncc",
    "optical_depths",
    "predict_artefacts",
    "predict_from_depths",
    "required_diagonal_count",
    "suppression_report",
    "synthesize_joint_spectrum",
    "transfer_function",
]
