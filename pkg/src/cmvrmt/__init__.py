"""CMV matrix models for classical compact-group and beta random matrix ensembles.

The compiled eigenvalue kernels are used when the extension is built; set
``CMVRMT_BACKEND=python`` to force the pure-Python implementation.
"""

from ._backend import BACKEND, available_backends
from .cmv import (
    build_block_cmv,
    build_cmv,
    build_symmetric_cmv,
    cmvfy,
    truncate_first,
    truncated_operator,
)
from .ensembles import CouplingSpec, EnsembleSpec, make_rng, sample_ensemble_eigs, verblunsky_model
from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    DimensionError,
    DomainError,
    NotCyclicError,
    StratificationError,
)
from .opuc import PointMeasure, inverse_szego, szego_forward, verblunsky_from_measure
from .spectra import EigenCloud, eigvals, polyroots, spectral_measure

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "build_block_cmv",
    "build_cmv",
    "build_symmetric_cmv",
    "cmvfy",
    "truncate_first",
    "truncated_operator",
    "CouplingSpec",
    "EnsembleSpec",
    "make_rng",
    "sample_ensemble_eigs",
    "verblunsky_model",
    "ConvergenceError",
    "DegenerateSpectrumError",
    "DimensionError",
    "DomainError",
    "NotCyclicError",
    "StratificationError",
    "PointMeasure",
    "inverse_szego",
    "szego_forward",
    "verblunsky_from_measure",
    "EigenCloud",
    "eigvals",
    "polyroots",
    "spectral_measure",
]
