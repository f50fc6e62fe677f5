"""Right-hand-side models: cubic polynomials with trig-poly coefficients and
the deadzone cubic, with analytic x-derivatives and divided differences."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .base_flow import BaseFlowSpec, BasePoint
from .errors import DomainError
from . import kernels


@dataclass(frozen=True)
class Harmonic:
    wave: tuple[int, ...]
    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if all(k == 0 for k in self.wave):
            raise DomainError("harmonic wave vector must be nonzero")


@dataclass(frozen=True)
class TrigPoly:
    """c(theta) = mean + sum_j amplitude_j * cos(2*pi*<wave_j, theta> + phase_j)."""

    mean: float = 0.0
    harmonics: tuple[Harmonic, ...] = ()

    def __call__(self, theta) -> float:
        th = np.asarray(theta, dtype=float)
        v = self.mean
        for h in self.harmonics:
            v += h.amplitude * math.cos(2.0 * math.pi * float(np.dot(h.wave, th)) + h.phase)
        return v

    def upper_bound(self) -> float:
        return self.mean + sum(abs(h.amplitude) for h in self.harmonics)

    def lower_bound(self) -> float:
        return self.mean - sum(abs(h.amplitude) for h in self.harmonics)

    def sup_norm_bound(self) -> float:
        return abs(self.mean) + sum(abs(h.amplitude) for h in self.harmonics)

    def is_zero(self) -> bool:
        return self.mean == 0.0 and all(h.amplitude == 0.0 for h in self.harmonics)

    def is_constant(self) -> bool:
        return all(h.amplitude == 0.0 for h in self.harmonics)


class RhsShape(enum.Enum):
    CUBIC = "cubic"
    DEADZONE = "deadzone"


@dataclass(frozen=True)
class CubicRhs:
    """f(omega, x) = c0 + c1 x + c2 x^2 + c3 x^3 with trig-poly coefficients."""

    c0: TrigPoly = field(default_factory=TrigPoly)
    c1: TrigPoly = field(default_factory=TrigPoly)
    c2: TrigPoly = field(default_factory=TrigPoly)
    c3: TrigPoly = field(default_factory=TrigPoly)

    shape = RhsShape.CUBIC

    @property
    def coefficients(self) -> tuple[TrigPoly, ...]:
        return (self.c0, self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class DeadzoneRhs:
    """Odd C^2 field that is flat on [-w(omega), w(omega)] and cubic outside.

    f = -(x - w)^3 for x > w, 0 inside, -(x + w)^3 for x < -w.  The third
    x-derivative is taken one-sided: -6 outside the dead zone, 0 inside.
    """

    w: TrigPoly = field(default_factory=TrigPoly)

    shape = RhsShape.DEADZONE


RhsModel = CubicRhs | DeadzoneRhs


def _shape_code(m: RhsModel) -> int:
    return kernels.CUBIC if isinstance(m, CubicRhs) else kernels.DEADZONE


def pack_orbit(m: RhsModel, base: BaseFlowSpec, omega: BasePoint):
    """Flatten the model coefficients along the orbit through omega.

    Returns (means, amps, angs, phs, off) such that coefficient k at orbit
    time s is means[k] + sum over its slice of amps*cos(angs*s + phs).
    """
    groups = m.coefficients if isinstance(m, CubicRhs) else (m.w,)
    theta = omega.array()
    nu = np.asarray(base.frequencies, dtype=float)
    means = np.array([g.mean for g in groups], dtype=float)
    amps, angs, phs = [], [], []
    off = np.zeros(len(groups) + 1, dtype=np.int64)
    for k, g in enumerate(groups):
        for h in g.harmonics:
            wave = np.asarray(h.wave, dtype=float)
            amps.append(h.amplitude)
            angs.append(2.0 * math.pi * float(wave @ nu))
            phs.append(2.0 * math.pi * float(wave @ theta) + h.phase)
        off[k + 1] = len(amps)
    return (means, np.asarray(amps, dtype=float), np.asarray(angs, dtype=float),
            np.asarray(phs, dtype=float), off)


def pack_observable(tp: TrigPoly, base: BaseFlowSpec, omega: BasePoint):
    """Pack a lone trig polynomial as the constant-in-x coefficient of a cubic."""
    zero = TrigPoly()
    return pack_orbit(CubicRhs(c0=tp, c1=zero, c2=zero, c3=zero), base, omega)


def eval_derivatives(m: RhsModel, omega: BasePoint, x: float) -> tuple[float, float, float, float]:
    """(f, f_x, f_xx, f_xxx) at the base point omega and state x."""
    if isinstance(m, CubicRhs):
        th = omega.theta
        c0, c1, c2, c3 = (c(th) for c in m.coefficients)
        f = ((c3 * x + c2) * x + c1) * x + c0
        fx = (3.0 * c3 * x + 2.0 * c2) * x + c1
        fxx = 6.0 * c3 * x + 2.0 * c2
        return f, fx, fxx, 6.0 * c3
    w = max(m.w(omega.theta), 0.0)
    if x > w:
        d = x - w
    elif x < -w:
        d = x + w
    else:
        return 0.0, 0.0, 0.0, 0.0
    return -d ** 3, -3.0 * d * d, -6.0 * d, -6.0


def divided_difference(m: RhsModel, omega: BasePoint, xs) -> float:
    """First- or second-order divided difference of f(omega, .) at 2 or 3 nodes."""
    pts = [float(x) for x in xs]
    if len(pts) not in (2, 3):
        raise DomainError("2 or 3 abscissae required")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise DomainError("distinct abscissae required")
    vals = [eval_derivatives(m, omega, x)[0] for x in pts]
    if len(pts) == 2:
        return (vals[1] - vals[0]) / (pts[1] - pts[0])
    d01 = (vals[1] - vals[0]) / (pts[1] - pts[0])
    d12 = (vals[2] - vals[1]) / (pts[2] - pts[1])
    return (d12 - d01) / (pts[2] - pts[0])
