"""Attractor delimiters via pullback limits, the interior repeller via basin
bisection, Lyapunov exponents along tracked equilibria, and the minimal-set
census at a fixed parameter value."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .base_flow import BasePoint, advance, ergodic_average, grid_points
from .errors import DomainError, NonConvergenceError, TrackingLostError
from .integrate import _raw_solve
from .model import CubicRhs, DeadzoneRhs
from .scenario import Family, Scenario
from . import kernels

_PULLBACK_DOUBLINGS = 10   # horizon cap: pullback_T * 2**10
_BISECT_WIDTH = 1e-10      # absolute width of the basin-boundary bisection


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class Track(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    KAPPA = "kappa"


class Hyperbolicity(enum.Enum):
    ATTRACTIVE = "attractive"
    REPULSIVE = "repulsive"
    NONHYPERBOLIC_EVIDENCE = "nonhyperbolic_evidence"


@dataclass(frozen=True)
class SetInfo:
    role: str                      # "lower" | "middle" | "upper" | "single" (+ zero-section tag)
    value: float
    exponent: float | None
    hyperbolicity: Hyperbolicity


@dataclass(frozen=True)
class EquilibriumSample:
    lam: float
    grid: tuple[BasePoint, ...]
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    kappa: tuple[float, ...] | None
    gamma_alpha: float | None
    gamma_beta: float | None
    gamma_kappa: float | None
    pullback_horizon_used: float


@dataclass(frozen=True)
class MinimalSetReport:
    lam: float
    count: int
    ordering: str
    sets: tuple[SetInfo, ...]
    pinched: bool
    gap_min: float
    gap_max: float
    alpha_mean: float
    kappa_mean: float | None
    beta_mean: float
    gamma_alpha: float | None
    gamma_kappa: float | None
    gamma_beta: float | None
    horizon: float
    degraded: tuple[str, ...]
    notes: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.degraded


def _threads(threads):
    if threads is not None:
        return max(1, int(threads))
    import os

    env = os.environ.get("SNBIF_THREADS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def _parallel_map(fn, items, threads):
    nt = min(_threads(threads), len(items))
    if nt <= 1 or not kernels.USING_NUMBA:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=nt) as pool:
        return list(pool.map(fn, items))


def bracketing_bounds(s: Scenario, lam: float) -> tuple[float, float]:
    """Constants rho1 < rho2 with F > 0 below rho1 and F < 0 above rho2.

    Cubic shape: a Cauchy-style root bound off the leading coefficient,
    1 + (|c2| + |c1| + |c0| + |lam|) / |c3|_min, with the sup norms taken from
    the coefficient l1 bounds.  Deadzone: the halfwidth bound plus a margin
    sized to dominate the lambda term.
    """
    if isinstance(s.rhs, CubicRhs):
        ub = s.rhs.c3.upper_bound()
        if ub >= 0.0:
            worst = max(s.rhs.c3(p.theta) for p in grid_points(s.base, 4096))
            if worst >= 0.0:
                raise DomainError("coercivity not validated: leading coefficient "
                                  "is not uniformly negative")
            ub = worst
        c3_min = -ub
        span = (s.rhs.c2.sup_norm_bound() + s.rhs.c1.sup_norm_bound()
                + s.rhs.c0.sup_norm_bound() + abs(lam))
        b = 1.0 + span / c3_min
        return -b, b
    wmax = max(s.rhs.w.upper_bound(), 0.0)
    if s.family is Family.LINEAR:
        lam_pos = max(lam, 0.0)
        b = wmax + 1.0 + max(1.0 + lam_pos, lam_pos * (wmax + 2.0))
    else:
        b = wmax + 1.0 + abs(lam) ** (1.0 / 3.0)
    return -b, b


def pullback_equilibrium(s: Scenario, lam: float, omega: BasePoint,
                         side: Side) -> tuple[float, float]:
    """Delimiter equilibrium at omega as a pullback limit.

    Integrates forward from omega.(-T) starting at rho1 (lower) or rho2
    (upper) over doubling horizons T, stopping when two successive horizon
    values agree to pullback_tol.  The value sequence is monotone in the
    horizon (nondecreasing for the lower side, nonincreasing for the upper),
    which is asserted up to the same tolerance.
    """
    n = s.numerics
    rho1, rho2 = bracketing_bounds(s, lam)
    x0 = rho1 if side is Side.LOWER else rho2
    blow = 10.0 * (1.0 + rho2)
    prev = None
    val = x0
    horizon = n.pullback_T
    for k in range(_PULLBACK_DOUBLINGS + 1):
        horizon = n.pullback_T * (2.0 ** k)
        th_back = advance(s.base, omega, -horizon)
        status, _, y, _ = _raw_solve(s, lam, th_back, x0, 0.0, horizon, 0, blow)
        if status != kernels.OK:
            raise NonConvergenceError(
                f"pullback integration failed (status {status}) at horizon {horizon:g}",
                last_values=(prev, val), horizon=horizon)
        val = float(y[0])
        if prev is not None:
            drift = val - prev
            if side is Side.LOWER and drift < -n.pullback_tol:
                raise NonConvergenceError(
                    f"pullback monotonicity violated by {-drift:.3g} at horizon {horizon:g}",
                    last_values=(prev, val), horizon=horizon)
            if side is Side.UPPER and drift > n.pullback_tol:
                raise NonConvergenceError(
                    f"pullback monotonicity violated by {drift:.3g} at horizon {horizon:g}",
                    last_values=(prev, val), horizon=horizon)
            if abs(drift) < n.pullback_tol:
                return val, horizon
        prev = val
    raise NonConvergenceError(
        f"pullback did not converge by horizon {horizon:g}",
        last_values=(prev, val), horizon=horizon)


def _forward_x(s: Scenario, lam: float, omega: BasePoint, x0: float,
               T: float, blow: float) -> float | None:
    status, _, y, _ = _raw_solve(s, lam, omega, x0, 0.0, T, 0, blow)
    if status != kernels.OK:
        return None
    return y[0]


def bisect_repeller(s: Scenario, lam: float, omega: BasePoint,
                    alpha: float, beta: float) -> float | None:
    """Basin boundary between the two attracting delimiters, or None.

    Reference orbits start at alpha+sep_tol and beta-sep_tol; the comparison
    horizon doubles until the references hold a stable macroscopic separation
    (they merge when there is no interior repeller).  The boundary is then
    bisected on "lands nearer the upper reference than the lower" to absolute
    width 1e-10.  Forward dynamics only.
    """
    n = s.numerics
    if not alpha + n.sep_tol < beta:
        raise DomainError("alpha + sep_tol < beta required")
    x_lo = alpha + n.sep_tol
    x_hi = beta - n.sep_tol
    if x_lo >= x_hi:
        return None
    _, rho2 = bracketing_bounds(s, lam)
    blow = 10.0 * (1.0 + rho2)
    target = min(10.0 * n.sep_tol, 0.45 * (beta - alpha))

    T = n.pullback_T
    prev_gap = None
    T_sep = None
    for _ in range(13):
        u_lo = _forward_x(s, lam, omega, x_lo, T, blow)
        u_hi = _forward_x(s, lam, omega, x_hi, T, blow)
        if u_lo is None or u_hi is None:
            return None
        gap = u_hi - u_lo
        if gap < n.sep_tol:
            return None                      # references merged: predicate constant
        if gap > target and (prev_gap is None or gap > 0.8 * prev_gap):
            T_sep = T
            break
        prev_gap = gap
        T *= 2.0
    if T_sep is None:
        if gap <= target:
            return None
        T_sep = T
    T_sep *= 4.0                             # sharpen the boundary preimage

    u_lo = _forward_x(s, lam, omega, x_lo, T_sep, blow)
    u_hi = _forward_x(s, lam, omega, x_hi, T_sep, blow)
    if u_lo is None or u_hi is None or u_hi - u_lo < n.sep_tol:
        return None
    mid_ref = 0.5 * (u_lo + u_hi)
    a, b = x_lo, x_hi
    for _ in range(80):
        if b - a <= _BISECT_WIDTH:
            break
        m = 0.5 * (a + b)
        um = _forward_x(s, lam, omega, m, T_sep, blow)
        if um is None or um > mid_ref:
            b = m
        else:
            a = m
    return float(0.5 * (a + b))


def zero_section_exponent(s: Scenario, lam: float, omega: BasePoint) -> float:
    """Lyapunov exponent of the invariant zero section of the linear family:
    lambda plus the Birkhoff average of f_x(., 0)."""
    if s.family is not Family.LINEAR:
        raise DomainError("zero section is invariant for the linear family only")
    if isinstance(s.rhs, DeadzoneRhs):
        return lam
    c1 = s.rhs.c1
    if c1.is_constant():
        return lam + c1.mean
    return lam + ergodic_average(s.base, c1, omega, s.numerics.birkhoff_T,
                                 s.numerics.rtol, s.numerics.atol)


def _track_delimiter(s: Scenario, lam: float, omega: BasePoint, side: Side) -> float:
    """Average F_x along a delimiter over birkhoff_T, re-anchoring by a fresh
    pullback every sixteenth of the horizon to suppress drift."""
    n = s.numerics
    T = n.birkhoff_T
    seg = T / 16.0
    _, rho2 = bracketing_bounds(s, lam)
    blow = 10.0 * (1.0 + rho2)
    x, _ = pullback_equilibrium(s, lam, omega, side)
    th = omega
    q_total = 0.0
    for k in range(16):
        status, _, y, _ = _raw_solve(s, lam, th, x, 0.0, seg, 1, blow)
        if status != kernels.OK:
            raise TrackingLostError(f"delimiter track left its domain (status {status})",
                                    progress=k / 16.0)
        q_total += y[1]
        th = advance(s.base, th, seg)
        try:
            x, _ = pullback_equilibrium(s, lam, th, side)
        except NonConvergenceError as e:
            raise TrackingLostError(f"re-anchor failed: {e}", progress=(k + 1) / 16.0) from e
    return q_total / T


def _track_repeller(s: Scenario, lam: float, omega: BasePoint) -> float:
    """Average F_x along the interior repeller over birkhoff_T.

    The repeller is located by forward basin bisection at the advanced base
    point omega.T and then integrated backward to omega: backward time is the
    stable direction for the repeller, so deviations contract instead of
    compounding, and no periodic re-projection is needed.  Blowup along the
    way (the orbit slipping out of the attractor band) raises TrackingLost.
    """
    n = s.numerics
    T = n.birkhoff_T
    th_end = advance(s.base, omega, T)
    try:
        a_end, _ = pullback_equilibrium(s, lam, th_end, Side.LOWER)
        b_end, _ = pullback_equilibrium(s, lam, th_end, Side.UPPER)
    except NonConvergenceError as e:
        raise TrackingLostError(f"anchor pullback failed: {e}", progress=0.0) from e
    if not a_end + n.sep_tol < b_end:
        raise TrackingLostError("no fiber gap at the anchor point", progress=0.0)
    kap = bisect_repeller(s, lam, th_end, a_end, b_end)
    if kap is None:
        raise TrackingLostError("basin bisection found no interior boundary", progress=0.0)
    _, rho2 = bracketing_bounds(s, lam)
    blow = 10.0 * (1.0 + rho2)
    seg = T / 8.0
    x = kap
    q_total = 0.0
    for k in range(8):
        t0 = -k * seg
        status, _, y, _ = _raw_solve(s, lam, th_end, x, t0, t0 - seg, 1, blow)
        if status != kernels.OK:
            raise TrackingLostError(f"repeller track left the attractor band "
                                    f"(status {status})", progress=k / 8.0)
        q_total += y[1]
        x = y[0]
    return -q_total / T


def lyapunov_exponent(s: Scenario, lam: float, omega: BasePoint, track: Track) -> float:
    """Lyapunov exponent estimate along the tracked object, horizon birkhoff_T."""
    if track is Track.ALPHA:
        return _track_delimiter(s, lam, omega, Side.LOWER)
    if track is Track.BETA:
        return _track_delimiter(s, lam, omega, Side.UPPER)
    return _track_repeller(s, lam, omega)


def _classify_exponent(gamma: float | None, margin: float) -> Hyperbolicity:
    if gamma is None or abs(gamma) <= margin:
        return Hyperbolicity.NONHYPERBOLIC_EVIDENCE
    return Hyperbolicity.ATTRACTIVE if gamma < 0.0 else Hyperbolicity.REPULSIVE


def sample_equilibria(s: Scenario, lam: float, *, with_kappa: bool = False,
                      threads=None) -> EquilibriumSample:
    """Grid-sampled delimiters (and optionally the repeller) with exponents."""
    n = s.numerics
    grid = tuple(grid_points(s.base, n.grid_n))

    def one(p):
        a, ha = pullback_equilibrium(s, lam, p, Side.LOWER)
        b, hb = pullback_equilibrium(s, lam, p, Side.UPPER)
        return a, b, max(ha, hb)

    rows = _parallel_map(one, grid, threads)
    alpha = tuple(r[0] for r in rows)
    beta = tuple(r[1] for r in rows)
    horizon = max(r[2] for r in rows)
    gaps = [b - a for a, b in zip(alpha, beta)]
    istar = int(np.argmax(gaps))
    kappa = None
    gamma_kappa = None
    if with_kappa and gaps[istar] > n.sep_tol:
        ks = [bisect_repeller(s, lam, p, a, b) if b - a > n.sep_tol else None
              for p, a, b in zip(grid, alpha, beta)]
        if all(k is not None for k in ks):
            kappa = tuple(ks)
            gamma_kappa = _track_repeller(s, lam, grid[istar])
    gamma_alpha = _track_delimiter(s, lam, grid[istar], Side.LOWER)
    gamma_beta = _track_delimiter(s, lam, grid[istar], Side.UPPER)
    return EquilibriumSample(lam, grid, alpha, beta, kappa,
                             gamma_alpha, gamma_beta, gamma_kappa, horizon)


def census(s: Scenario, lam: float, threads=None) -> MinimalSetReport:
    """Count and classify the minimal sets at one parameter value.

    One minimal set when the fiber gap stays below sep_tol everywhere; else a
    basin bisection at the widest fiber hunts the interior repeller, and three
    sets are certified only when the exponent pattern (-,+,-) holds with
    margin exp_margin.  Anything weaker downgrades the count and is recorded
    in the notes.  For the linear family the invariant zero section supplies
    the middle candidate whenever it lies strictly inside the fiber gap; its
    exponent is a direct Birkhoff average rather than a tracked estimate.
    """
    n = s.numerics
    m = n.exp_margin
    grid = tuple(grid_points(s.base, n.grid_n))
    degraded: list[str] = []
    notes: list[str] = []

    def one(item):
        i, p = item
        out = []
        for side in (Side.LOWER, Side.UPPER):
            try:
                v, h = pullback_equilibrium(s, lam, p, side)
                out.append((v, h, None))
            except NonConvergenceError as e:
                last = e.last_values[-1] if e.last_values else math.nan
                out.append((last, e.horizon or math.nan, f"pullback_{side.value}@{i}: {e}"))
        return out

    rows = _parallel_map(one, list(enumerate(grid)), threads)
    alpha = [float(r[0][0]) for r in rows]
    beta = [float(r[1][0]) for r in rows]
    horizon = float(max(max(r[0][1], r[1][1]) for r in rows))
    for r in rows:
        for _, _, err in r:
            if err:
                degraded.append(err)

    gaps = [float(b - a) for a, b in zip(alpha, beta)]
    gap_min = min(gaps)
    gap_max = max(gaps)
    istar = int(np.argmax(gaps))
    pinched = bool(gap_min < n.pinch_tol and gap_max >= n.sep_tol)
    alpha_mean = float(np.mean(alpha))
    beta_mean = float(np.mean(beta))

    def guarded(fn, name):
        try:
            return fn()
        except (NonConvergenceError, TrackingLostError, DomainError) as e:
            degraded.append(f"{name}: {e}")
            return None

    def guarded_all(jobs):
        """Run (name, thunk) jobs concurrently, reporting failures in job order."""
        def run(job):
            name, fn = job
            try:
                return fn(), None
            except (NonConvergenceError, TrackingLostError, DomainError) as e:
                return None, f"{name}: {e}"

        results = _parallel_map(run, jobs, threads)
        out = []
        for value, err in results:
            if err:
                degraded.append(err)
            out.append(value)
        return out

    is_linear = s.family is Family.LINEAR
    omega_star = grid[istar]

    if gap_max < n.sep_tol:
        value = 0.5 * (alpha_mean + beta_mean)
        zero_like = is_linear and abs(value) < n.sep_tol
        if zero_like:
            gamma = guarded(lambda: zero_section_exponent(s, lam, omega_star), "zero_exponent")
        else:
            gamma = guarded(lambda: _track_delimiter(s, lam, omega_star, Side.UPPER), "track_beta")
        label = _classify_exponent(gamma, m)
        role = "single(zero-section)" if zero_like else "single"
        return MinimalSetReport(
            lam, 1, role, (SetInfo(role, value, gamma, label),), pinched,
            gap_min, gap_max, alpha_mean, None, beta_mean,
            None, None, gamma, horizon, tuple(degraded), tuple(notes))

    a_w, b_w = alpha[istar], beta[istar]
    kappa_val = None
    gamma_alpha = gamma_beta = gamma_kappa = None
    alpha_role, kappa_role, beta_role = "lower", "middle", "upper"

    if is_linear and a_w <= -n.sep_tol and b_w >= n.sep_tol:
        kappa_val = 0.0
        kappa_role = "middle(zero-section)"
        gamma_kappa, gamma_alpha, gamma_beta = guarded_all([
            ("zero_exponent", lambda: zero_section_exponent(s, lam, omega_star)),
            ("track_alpha", lambda: _track_delimiter(s, lam, omega_star, Side.LOWER)),
            ("track_beta", lambda: _track_delimiter(s, lam, omega_star, Side.UPPER)),
        ])
    else:
        zero_lower = is_linear and abs(a_w) <= 0.5 * n.sep_tol
        zero_upper = is_linear and abs(b_w) <= 0.5 * n.sep_tol
        if a_w + n.sep_tol < b_w:
            kappa_val = guarded(lambda: bisect_repeller(s, lam, omega_star, a_w, b_w), "bisect")
        jobs = []
        if zero_lower:
            alpha_role = "lower(zero-section)"
            jobs.append(("zero_exponent", lambda: zero_section_exponent(s, lam, omega_star)))
        else:
            jobs.append(("track_alpha", lambda: _track_delimiter(s, lam, omega_star, Side.LOWER)))
        if zero_upper:
            beta_role = "upper(zero-section)"
            jobs.append(("zero_exponent", lambda: zero_section_exponent(s, lam, omega_star)))
        else:
            jobs.append(("track_beta", lambda: _track_delimiter(s, lam, omega_star, Side.UPPER)))
        if kappa_val is not None:
            jobs.append(("track_kappa", lambda: _track_repeller(s, lam, omega_star)))
        results = guarded_all(jobs)
        gamma_alpha, gamma_beta = results[0], results[1]
        if kappa_val is not None:
            gamma_kappa = results[2]

    la = _classify_exponent(gamma_alpha, m)
    lb = _classify_exponent(gamma_beta, m)
    lk = _classify_exponent(gamma_kappa, m)

    pattern = (kappa_val is not None
               and gamma_alpha is not None and gamma_alpha < -m
               and gamma_kappa is not None and gamma_kappa > m
               and gamma_beta is not None and gamma_beta < -m)
    if pattern:
        count = 3
        sets = (SetInfo(alpha_role, alpha_mean, gamma_alpha, la),
                SetInfo(kappa_role, kappa_val, gamma_kappa, lk),
                SetInfo(beta_role, beta_mean, gamma_beta, lb))
        ordering = f"{alpha_role} < {kappa_role} < {beta_role}"
    else:
        count = 2
        if kappa_val is not None:
            notes.append("interior candidate found but exponent pattern (-,+,-) "
                         "not certified at margin; count downgraded")
        sets = (SetInfo(alpha_role, alpha_mean, gamma_alpha, la),
                SetInfo(beta_role, beta_mean, gamma_beta, lb))
        ordering = f"{alpha_role} < {beta_role}"
    return MinimalSetReport(
        lam, count, ordering, sets, pinched, gap_min, gap_max,
        alpha_mean, kappa_val, beta_mean, gamma_alpha, gamma_kappa, gamma_beta,
        horizon, tuple(degraded), tuple(notes))
