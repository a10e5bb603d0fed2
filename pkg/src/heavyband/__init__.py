"""Heavy-tailed random band matrices: sampling, spectra, localization and Monte Carlo studies."""
from . import errors
from .ensemble import (
    BandPattern,
    SampledMatrix,
    build_pattern,
    custom_pattern,
    largest_entries,
    matrix_from_dense,
    matrix_from_entries,
    normalization,
    sample_matrix,
)
from .heavy_tail import RegimeParams, TailLaw, b_n, critical_alpha, sample_entries, tail_probability
from .spectral import SpectralSummary, dense_eigh, lanczos_topk, semicircle_ks, spectral_radius, submatrix_rho

__version__ = "0.1.0"
