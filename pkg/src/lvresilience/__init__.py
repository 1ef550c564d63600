"""Separatrix, resilience and parameter sensitivity for two-species Lotka-Volterra competition."""
from .errors import (FCloseToZero, InvalidParameters, LVError, ManifoldEscape, NotStrongCompetition,
                     NumericalFailure, OracleStall, OutOfDomain, QuadratureFailure,
                     SingularCoefficient)
from .integrator import (BasinLabel, Direction, IntegrationConfig, StopKind, StopReason,
                         Trajectory, classify_initial_condition, classify_many, integrate)
from .kernels import BACKEND
from .limits import (LimitDirection, LimitStudy, deviation_from_limit, limit_study,
                     slow_manifold_reduced_flow)
from .model import (DimensionalParams, EquilibriumSet, NondimParams, Regime, RegimeClass,
                    SaddleSpectrum, State, classify_regime, coexistence_point, equilibria,
                    jacobian, nondimensionalize, saddle_spectrum, vector_field)
from .resilience import (ResilienceReport, basin_grid, latitude, latitude_monte_carlo,
                         precariousness, resilience_report)
from .sensitivity import (SensitivitySolution, dAB_dparam, finite_difference_sensitivity,
                          initial_value_C, monotonicity_report, separatrix_sensitivity)
from .separatrix import (SeparatrixBuildConfig, SeparatrixCurve, bisection_oracle,
                         compute_separatrix, eval_s, integral_residual, inverse_s,
                         model_separatrix, slope_field)

__version__ = "0.1.0"
