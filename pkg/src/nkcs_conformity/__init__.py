"""Conformity and knowledge diffusion in multi-unit organizations on NKCS landscapes."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    ExperimentResult,
    RunResult,
    ScenarioConfig,
    run_experiment,
    run_once,
)
from .exceptions import ConfigurationError, DegenerateLandscapeError  # noqa: E402
from .landscape import make_landscape  # noqa: E402
from .metrics import normalized_performance, synchrony  # noqa: E402
from .network import build_network  # noqa: E402

__all__ = [
    "ConfigurationError",
    "DegenerateLandscapeError",
    "ExperimentResult",
    "RunResult",
    "ScenarioConfig",
    "build_network",
    "make_landscape",
    "normalized_performance",
    "run_experiment",
    "run_once",
    "synchrony",
]
