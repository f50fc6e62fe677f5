"""snbif: attractors, minimal sets and bifurcation diagrams of scalar
nonautonomous ODEs x' = f(omega.t, x) driven by torus rotations."""

from .base_flow import (GOLDEN_MEAN, BaseFlowSpec, BaseKind, BasePoint, advance,
                        ergodic_average, grid_points)
from .bifurcation import (BifurcationDiagram, DiagramClass, LocatedPoint, Observable,
                          PointKind, SpectrumEstimate, classify, estimate_spectrum,
                          locate_bifurcation, spectrum_rule_verdict, sweep,
                          sweep_c2_shift)
from .dconcavity import (DcInterval, SdcClass, SdcReport, check_module_inequality,
                         classify_sdc, measure_positive_module, standardized_module)
from .equilibria import (EquilibriumSample, Hyperbolicity, MinimalSetReport, Side,
                         Track, bisect_repeller, bracketing_bounds, census,
                         lyapunov_exponent, pullback_equilibrium, sample_equilibria,
                         zero_section_exponent)
from .errors import (DomainError, NonConvergenceError, ScenarioError,
                     TrackingLostError)
from .integrate import OdeSolution, SolveStatus, schwarzian, solve
from .kernels import USING_NUMBA
from .model import (CubicRhs, DeadzoneRhs, Harmonic, RhsModel, TrigPoly,
                    divided_difference, eval_derivatives)
from .scenario import (Family, NumericsConfig, Scenario, SweepSpec, ValidationReport,
                       emit_scenario, override_numerics, parse_scenario,
                       validate_model, with_c2_shift)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
