"""Finite volume solver for nonlinear sorption transport."""

from .config import RunConfigFile, parse_config, serialize_config
from .errors import (ConfigError, DomainError, InstabilityError, NewtonError,
                     RangeViolationError, SorptranError, SweepError)
from .exact import StepRiemannSolution, exact_step_solution, fine_grid_oracle
from .experiments import PRESETS, eoc, l1_error, run_preset
from .grids import Grid1D, Grid2D
from .isotherm import DEFAULT_NEWTON, IsothermSpec, NewtonConfig
from .schemes_1d import courant_max_1d, run_1d
from .schemes_2d import courant_max_2d, run_2d
from .stepping import (SCHEMES, DirichletBC, ExactBC, LimiterState,
                       LimiterState2D, OutflowBC, Problem1D, Problem2D,
                       RunResult, SchemeConfig, StepDiagnostics)
from .velocity import (ConstantVelocity, ConstantVelocity2D, CosineVelocity,
                       RotationVelocity, TabulatedVelocity)

__all__ = [
    "RunConfigFile", "parse_config", "serialize_config",
    "ConfigError", "DomainError", "InstabilityError", "NewtonError",
    "RangeViolationError", "SorptranError", "SweepError",
    "StepRiemannSolution", "exact_step_solution", "fine_grid_oracle",
    "PRESETS", "eoc", "l1_error", "run_preset",
    "Grid1D", "Grid2D",
    "DEFAULT_NEWTON", "IsothermSpec", "NewtonConfig",
    "courant_max_1d", "run_1d", "courant_max_2d", "run_2d",
    "SCHEMES", "DirichletBC", "ExactBC", "LimiterState", "LimiterState2D",
    "OutflowBC", "Problem1D", "Problem2D", "RunResult", "SchemeConfig",
    "StepDiagnostics",
    "ConstantVelocity", "ConstantVelocity2D", "CosineVelocity",
    "RotationVelocity", "TabulatedVelocity",
]
