"""Scalar ODE solves along base orbits, with variational equations and the
Schwarzian derivative of the time-t solution map."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .base_flow import BasePoint
from .errors import DomainError
from .model import CubicRhs, pack_orbit
from .scenario import Family, Scenario
from . import kernels


class SolveStatus(enum.Enum):
    OK = "ok"
    BLOWUP_DETECTED = "blowup_detected"
    STEP_FLOOR_HIT = "step_floor_hit"


_STATUS = {kernels.OK: SolveStatus.OK,
           kernels.BLOWUP: SolveStatus.BLOWUP_DETECTED,
           kernels.STEP_FLOOR: SolveStatus.STEP_FLOOR_HIT}


@dataclass(frozen=True)
class OdeSolution:
    t_end: float
    x_end: float
    status: SolveStatus
    fx_integral: float | None = None
    ux: float | None = None
    uxx: float | None = None
    uxxx: float | None = None
    nsteps: int = 0

    @property
    def ok(self) -> bool:
        return self.status is SolveStatus.OK


def _family_code(family: Family) -> int:
    return kernels.LINEAR if family is Family.LINEAR else kernels.ADDITIVE


def default_blowup_bound(s: Scenario, lam: float) -> float:
    """10*(1+rho2) when a coercivity bracket exists, else a generous cap."""
    from .equilibria import bracketing_bounds

    try:
        _, rho2 = bracketing_bounds(s, lam)
        return 10.0 * (1.0 + rho2)
    except DomainError:
        return 1e8


def _raw_solve(s: Scenario, lam: float, omega: BasePoint, x0: float,
               t0: float, t1: float, mode: int, blow: float,
               max_step: float = math.inf):
    """Kernel call with orbit-time window [t0, t1] relative to omega.

    Dispatches to the state-scalar steppers for modes 0 and 1; the result is
    always normalized to (status, t_end, y[5], nsteps).
    """
    means, amps, angs, phs, off = pack_orbit(s.rhs, s.base, omega)
    shape = kernels.CUBIC if isinstance(s.rhs, CubicRhs) else kernels.DEADZONE
    fam = _family_code(s.family)
    n = s.numerics
    if mode == 0:
        status, t_end, x, nsteps = kernels.rk45_x(
            means, amps, angs, phs, off, shape, fam, lam, t0, t1, x0,
            n.rtol, n.atol, blow, max_step)
        return status, t_end, np.array([x, 0.0, 1.0, 0.0, 0.0]), nsteps
    if mode == 1:
        status, t_end, x, q, nsteps = kernels.rk45_xq(
            means, amps, angs, phs, off, shape, fam, lam, t0, t1, x0, 0.0,
            n.rtol, n.atol, blow, max_step)
        return status, t_end, np.array([x, q, 1.0, 0.0, 0.0]), nsteps
    y0 = np.array([x0, 0.0, 1.0, 0.0, 0.0])
    return kernels.rk45_orbit(means, amps, angs, phs, off, shape, fam, lam,
                              t0, t1, y0, mode, n.rtol, n.atol, blow, max_step)


def solve(s: Scenario, lam: float, omega: BasePoint, x0: float, t: float,
          with_variationals: bool = False, *, blowup_bound: float | None = None,
          max_step: float = math.inf) -> OdeSolution:
    """Integrate x' = F(omega.s, x) over [0, t] (t may be negative).

    F is f + lambda for the additive family and f + lambda*x for the linear
    one.  The running integral of F_x is always co-integrated; with
    ``with_variationals`` the first three variational components
    (u_x, u_xx, u_xxx) are carried as well, from (1, 0, 0).
    """
    blow = default_blowup_bound(s, lam) if blowup_bound is None else blowup_bound
    mode = 2 if with_variationals else 1
    status, t_end, y, nsteps = _raw_solve(s, lam, omega, x0, 0.0, t, mode, blow, max_step)
    if with_variationals:
        return OdeSolution(t_end, y[0], _STATUS[status], fx_integral=y[1],
                           ux=y[2], uxx=y[3], uxxx=y[4], nsteps=nsteps)
    return OdeSolution(t_end, y[0], _STATUS[status], fx_integral=y[1], nsteps=nsteps)


def schwarzian(s: Scenario, lam: float, omega: BasePoint, x0: float, t: float,
               *, blowup_bound: float | None = None) -> float:
    """Schwarzian derivative of x0 -> u(t, omega, x0): u_xxx/u_x - 1.5*(u_xx/u_x)^2."""
    if t < 0.0:
        raise DomainError("t >= 0 required")
    if t == 0.0:
        return 0.0
    sol = solve(s, lam, omega, x0, t, with_variationals=True, blowup_bound=blowup_bound)
    if not sol.ok:
        raise DomainError(f"solution left its domain: {sol.status.value} at t={sol.t_end:.6g}")
    r = sol.uxx / sol.ux
    return sol.uxxx / sol.ux - 1.5 * r * r
