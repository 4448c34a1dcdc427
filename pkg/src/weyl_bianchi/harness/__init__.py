"""CLI, configuration, bispinor reconstruction, sweeps and validation."""

from .bispinor import BispinorSample, reconstruct_bispinor
from .config import SweepConfig, load_request, load_sweep
from .requests import EvolutionRequest, EvolutionResult, evolve_request
from .sweep import read_csv, run_sweep, write_csv_path
from .validation import CriterionResult, run_validation_suite

__all__ = [
    "BispinorSample",
    "reconstruct_bispinor",
    "SweepConfig",
    "load_request",
    "load_sweep",
    "EvolutionRequest",
    "EvolutionResult",
    "evolve_request",
    "read_csv",
    "run_sweep",
    "write_csv_path",
    "CriterionResult",
    "run_validation_suite",
]
