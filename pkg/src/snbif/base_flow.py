"""Torus rotation base flows: advance, deterministic sampling, Birkhoff averages.

The base is a rotation on a d-torus: autonomous (d=0), periodic (d=1) or
quasiperiodic (d>=2 with rationally independent frequencies, asserted by the
user -- independence is not decidable from floats).  Rotations are minimal and
uniquely ergodic with Lebesgue measure, which is what makes single-orbit time
averages meaningful everywhere else in the package.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from . import kernels


class BaseKind(enum.Enum):
    AUTONOMOUS = "autonomous"
    PERIODIC = "periodic"
    QUASIPERIODIC = "quasiperiodic"


GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BaseFlowSpec:
    kind: BaseKind
    frequencies: tuple[float, ...] = ()

    def __post_init__(self):
        d = len(self.frequencies)
        if self.kind is BaseKind.AUTONOMOUS and d != 0:
            raise DomainError("autonomous base takes no frequencies")
        if self.kind is BaseKind.PERIODIC and d != 1:
            raise DomainError("periodic base takes exactly one frequency")
        if self.kind is BaseKind.QUASIPERIODIC and d < 2:
            raise DomainError("quasiperiodic base needs at least two frequencies")
        if any(v == 0.0 for v in self.frequencies):
            raise DomainError("frequencies must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.frequencies)


@dataclass(frozen=True)
class BasePoint:
    theta: tuple[float, ...] = ()

    def __post_init__(self):
        if any(not (0.0 <= v < 1.0) for v in self.theta):
            object.__setattr__(self, "theta", tuple(v % 1.0 for v in self.theta))

    def array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=float)


def advance(spec: BaseFlowSpec, omega: BasePoint, t: float) -> BasePoint:
    """Flow omega forward (or backward) by time t: theta_i -> theta_i + nu_i t mod 1."""
    if spec.dim == 0:
        return omega
    return BasePoint(tuple((th + nu * t) % 1.0 for th, nu in zip(omega.theta, spec.frequencies)))


def grid_points(spec: BaseFlowSpec, n: int) -> list[BasePoint]:
    """Deterministic low-discrepancy sample of the torus.

    d=0: the single point.  d=1: the uniform n-grid.  d>=2: the Kronecker
    sequence k * nu_hat mod 1 with nu_hat the frequency vector scaled so its
    first entry is 1.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    if spec.dim == 0:
        return [BasePoint(())]
    if spec.dim == 1:
        return [BasePoint((k / n,)) for k in range(n)]
    nu_hat = np.asarray(spec.frequencies) / spec.frequencies[0]
    return [BasePoint(tuple((k * nu_hat) % 1.0)) for k in range(n)]


def _trig_average(spec: BaseFlowSpec, tp, omega0: BasePoint, T: float,
                  rtol: float, atol: float) -> float:
    """Average a trig polynomial along an orbit via the ODE quadrature x' = g."""
    from .model import pack_observable

    means, amps, angs, phs, off = pack_observable(tp, spec, omega0)
    y0 = np.zeros(5)
    status, _, y, _ = kernels.rk45_orbit(
        means, amps, angs, phs, off, kernels.CUBIC, kernels.ADDITIVE, 0.0,
        0.0, T, y0, 0, rtol, atol, math.inf, math.inf)
    if status != kernels.OK:
        raise DomainError("quadrature failed")
    return y[0] / T


def ergodic_average(spec: BaseFlowSpec, g, omega0: BasePoint, T: float,
                    rtol: float = 1e-9, atol: float = 1e-12) -> float:
    """Birkhoff average (1/T) * integral_0^T g(omega0 . s) ds.

    ``g`` may be a TrigPoly (integrated with the same adaptive stepper the ODE
    solver uses, keeping time grids consistent) or any callable on BasePoint
    (integrated by composite Gauss-Legendre panels).
    """
    if T <= 0.0:
        raise DomainError("T > 0 required")
    from .model import TrigPoly

    if isinstance(g, TrigPoly):
        return _trig_average(spec, g, omega0, T, rtol, atol)
    return _callable_average(spec, g, omega0, T)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _callable_average(spec: BaseFlowSpec, g: Callable[[BasePoint], float],
                      omega0: BasePoint, T: float) -> float:
    width = min(0.1, T)
    npanels = max(1, int(math.ceil(T / width)))
    width = T / npanels
    total = 0.0
    half = 0.5 * width
    for p in range(npanels):
        mid = (p + 0.5) * width
        acc = 0.0
        for xi, wi in zip(_GL_NODES, _GL_WEIGHTS):
            acc += wi * g(advance(spec, omega0, mid + half * xi))
        total += acc * half
    return total / T


_SPREAD_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def spread_points(spec: BaseFlowSpec, n: int) -> list[BasePoint]:
    """Kronecker-spread sample used for finite-time spectrum bracketing.

    Unlike grid_points this covers every torus coordinate (generator
    frac(sqrt(p_i)) over the first primes), so observables depending on any
    single angle still see a genuine spread of initial phases.
    """
    if spec.dim == 0:
        return [BasePoint(())]
    alpha = np.array([math.sqrt(p) % 1.0 for p in _SPREAD_PRIMES[:spec.dim]])
    return [BasePoint(tuple((k * alpha) % 1.0)) for k in range(n)]


def finite_time_average(spec: BaseFlowSpec, tp, omega0: BasePoint, T: float) -> float:
    """Exact average over [0, T] of a trig polynomial along the orbit of omega0.

    The orbit restriction of each harmonic is cos(a s + p) with
    a = 2*pi*<wave, nu> nonzero (nonresonance is asserted with the base), so
    the antiderivative is available in closed form.
    """
    if T <= 0.0:
        raise DomainError("T > 0 required")
    theta = omega0.array()
    nu = np.asarray(spec.frequencies, dtype=float)
    total = tp.mean
    for h in tp.harmonics:
        wave = np.asarray(h.wave, dtype=float)
        a = 2.0 * math.pi * float(wave @ nu)
        p = 2.0 * math.pi * float(wave @ theta) + h.phase
        total += h.amplitude * (math.sin(a * T + p) - math.sin(p)) / (a * T)
    return total
