"""Standardized concavity modules and strict d-concavity classification.

The central object is, for a compact interval J and 0 <= eps <= l(J),

    b_{J,eps}(omega) = eps / (4 l(J)^2) *
        min over {x : [x-eps/2, x+eps/2] in J} of
        ( 2 f_x(omega,x) - f_x(omega,x-eps/2) - f_x(omega,x+eps/2) ),

a computable per-fiber lower bound on gaps of second-order divided
differences.  For the cubic shape the minimized expression is independent of
x and evaluates in closed form to -(3/2) c3(omega) eps^2; for the deadzone
shape the minimum is found by a grid scan plus golden-section refinement.
Strictness verdicts are measure estimates over a single long orbit (the
rotation base is uniquely ergodic) and are numerical evidence, not proofs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .base_flow import BasePoint
from .errors import DomainError
from .model import CubicRhs, RhsModel, pack_orbit
from .scenario import Scenario
from . import kernels

POS_TOL = 1e-12   # separates structural zeros of the module from roundoff
_COARSE_DT = 0.02  # orbit sampling step for measure estimates, before refinement


@dataclass(frozen=True)
class DcInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError("lo < hi required")

    @property
    def length(self) -> float:
        return self.hi - self.lo


class SdcClass(enum.Enum):
    NOT_DC = "not_dc"
    DC_ONLY = "dc_only"
    SDC = "sdc"
    SDC_M_EVIDENCE = "sdc_m_evidence"  # reserved; a finite eps grid cannot certify it


@dataclass(frozen=True)
class SdcReport:
    interval: DcInterval
    eps_grid: tuple[float, ...]
    measures: tuple[float, ...]
    classification: SdcClass
    birkhoff_T: float
    pos_tol: float
    sample_dt: float
    shrinking_measure: bool
    note: str

    def as_dict(self):
        return {"interval": [self.interval.lo, self.interval.hi],
                "eps_grid": list(self.eps_grid),
                "measures": list(self.measures),
                "classification": self.classification.value,
                "resolution": {"birkhoff_T": self.birkhoff_T, "pos_tol": self.pos_tol,
                               "sample_dt": self.sample_dt},
                "shrinking_measure": self.shrinking_measure,
                "note": self.note}


def standardized_module(m: RhsModel, omega: BasePoint, J: DcInterval, eps: float) -> float:
    """b_{J,eps}(omega); exact for the cubic shape, refined scan for deadzone."""
    if not 0.0 <= eps <= J.length:
        raise DomainError("0 <= eps <= l(J) required")
    if eps == 0.0:
        return 0.0
    scale = eps / (4.0 * J.length ** 2)
    if isinstance(m, CubicRhs):
        return scale * (-1.5 * m.c3(omega.theta) * eps * eps)
    w = max(m.w(omega.theta), 0.0)
    return scale * kernels.dz_bracket_min(w, J.lo, J.hi, eps)


def _require_module_domain(J: DcInterval, eps: float):
    if not (0.0 < 2.0 * eps <= J.length):
        raise DomainError("0 < 2*eps <= l(J) required")


@dataclass(frozen=True)
class InequalityCheck:
    passed: bool
    trials: int
    min_slack: float
    witness_omega: tuple[float, ...]
    witness_xs: tuple[float, float, float, float]


def check_module_inequality(m: RhsModel, J: DcInterval, eps: float, trials: int,
                            *, base=None, seed: int = 0) -> InequalityCheck:
    """Sample the defining inequality of the module on random node tuples.

    Draws omega uniformly on the torus and x0, x1 < x2 < x3 in J with both
    gaps >= eps, and checks
        f(omega,[x1,x0,x2]) >= f(omega,[x1,x0,x3]) + b_{J,eps}(omega) - 1e-10.
    Returns the minimum slack seen and its witness.
    """
    from .base_flow import BaseFlowSpec, BaseKind
    from .model import divided_difference

    _require_module_domain(J, eps)
    if base is None:
        base = BaseFlowSpec(BaseKind.AUTONOMOUS, ())
    rng = np.random.default_rng(seed)
    d = base.dim
    lo, hi, l = J.lo, J.hi, J.length
    min_slack = math.inf
    witness = ((), (0.0,) * 4)
    ok = True
    for _ in range(trials):
        omega = BasePoint(tuple(rng.random(d))) if d else BasePoint(())
        x1 = lo + rng.random() * (l - 2.0 * eps)
        x2 = x1 + eps + rng.random() * (hi - eps - (x1 + eps))
        x3 = x2 + eps + rng.random() * max(hi - (x2 + eps), 0.0)
        x3 = min(x3, hi)
        while True:
            x0 = lo + rng.random() * l
            if min(abs(x0 - x1), abs(x0 - x2), abs(x0 - x3)) > 1e-6 * l:
                break
        left = divided_difference(m, omega, [x1, x0, x2])
        right = divided_difference(m, omega, [x1, x0, x3])
        b = standardized_module(m, omega, J, eps)
        slack = left - (right + b)
        if slack < min_slack:
            min_slack = slack
            witness = (omega.theta, (x0, x1, x2, x3))
        if slack < -1e-10:
            ok = False
    return InequalityCheck(ok, trials, min_slack, witness[0], witness[1])


def _orbit_measures(s: Scenario, J: DcInterval, eps_values, T: float) -> np.ndarray:
    means, amps, angs, phs, off = pack_orbit(s.rhs, s.base, BasePoint((0.0,) * s.base.dim))
    shape = kernels.CUBIC if isinstance(s.rhs, CubicRhs) else kernels.DEADZONE
    return kernels.measure_positive_fraction(
        means, amps, angs, phs, off, shape, J.lo, J.hi,
        np.asarray(eps_values, dtype=float), T, _COARSE_DT, POS_TOL)


def measure_positive_module(s: Scenario, J: DcInterval, eps: float) -> float:
    """Fraction of orbit time in [0, birkhoff_T] where b_{J,eps} > POS_TOL.

    Estimates the base measure of the positivity set; deterministic for a
    given scenario (single orbit from the zero angle, fixed sampling grid).
    """
    _require_module_domain(J, eps)
    return float(_orbit_measures(s, J, [eps], s.numerics.birkhoff_T)[0])


def classify_sdc(s: Scenario, J: DcInterval, eps_grid) -> SdcReport:
    """Estimate positivity measures over an eps grid and classify.

    SDC evidence requires every estimate strictly positive; a zero estimate
    yields DC_only.  Uniform-in-eps strictness cannot be certified from a
    finite grid, so no stronger verdict is ever emitted; the shrinking-measure
    flag exposes the small-eps trend instead.
    """
    from .scenario import validate_model

    eps_grid = tuple(float(e) for e in eps_grid)
    if not eps_grid:
        raise DomainError("empty eps grid")
    if list(eps_grid) != sorted(eps_grid):
        raise DomainError("eps grid must be sorted ascending")
    for e in eps_grid:
        _require_module_domain(J, e)
    report = validate_model(s)
    if not report.check("d_concave").passed:
        return SdcReport(J, eps_grid, (), SdcClass.NOT_DC, s.numerics.birkhoff_T,
                         POS_TOL, _COARSE_DT, False,
                         "model failed the d-concavity check")
    measures = tuple(float(v) for v in _orbit_measures(s, J, eps_grid, s.numerics.birkhoff_T))
    all_pos = all(v > 0.0 for v in measures)
    shrinking = len(measures) >= 2 and measures[0] < 0.5 * measures[-1]
    cls = SdcClass.SDC if all_pos else SdcClass.DC_ONLY
    note = ("numerical evidence only; on a uniquely ergodic base the "
            "measure-specific and measure-uniform strictness notions coincide")
    if shrinking and all_pos:
        note += "; positivity measure shrinks toward small eps"
    return SdcReport(J, eps_grid, measures, cls, s.numerics.birkhoff_T,
                     POS_TOL, _COARSE_DT, shrinking, note)
