"""Scenario files: strict JSON parsing, canonical emission, model validation.

Unknown keys are hard errors everywhere so a typo cannot silently change a
run.  All semantic errors carry the offending key path.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace

from .base_flow import BaseFlowSpec, BaseKind, grid_points
from .errors import ScenarioError
from .model import CubicRhs, DeadzoneRhs, Harmonic, RhsModel, TrigPoly


class Family(enum.Enum):
    ADDITIVE = "additive"
    LINEAR = "linear"


@dataclass(frozen=True)
class SweepSpec:
    lambda_min: float
    lambda_max: float
    steps: int


@dataclass(frozen=True)
class NumericsConfig:
    rtol: float = 1e-9
    atol: float = 1e-12
    pullback_T: float = 64.0
    pullback_tol: float = 1e-9
    grid_n: int = 256
    birkhoff_T: float = 1e4
    sep_tol: float = 1e-3
    pinch_tol: float = 1e-6
    exp_margin: float = 1e-3
    bisect_tol: float = 1e-6


_NUMERICS_FLOAT_KEYS = ("rtol", "atol", "pullback_T", "pullback_tol", "birkhoff_T",
                        "sep_tol", "pinch_tol", "exp_margin", "bisect_tol")
NUMERICS_KEYS = _NUMERICS_FLOAT_KEYS + ("grid_n",)


@dataclass(frozen=True)
class Scenario:
    base: BaseFlowSpec
    rhs: RhsModel
    family: Family
    sweep: SweepSpec
    numerics: NumericsConfig = field(default_factory=NumericsConfig)


def _err(path: str, msg: str):
    raise ScenarioError(f"{path}: {msg}" if path else msg)


def _expect_mapping(obj, path):
    if not isinstance(obj, dict):
        _err(path, "expected an object")
    return obj


def _check_keys(obj, path, required, optional=()):
    for k in obj:
        if k not in required and k not in optional:
            _err(path, f"unknown key '{k}'")
    for k in required:
        if k not in obj:
            _err(path, f"missing required field '{k}'")


def _number(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        _err(path, "expected a number")
    v = float(obj)
    if not math.isfinite(v):
        _err(path, "expected a finite number")
    return v


def _integer(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, int):
        _err(path, "expected an integer")
    return obj


def _parse_base(obj, path="base") -> BaseFlowSpec:
    _expect_mapping(obj, path)
    _check_keys(obj, path, required=("kind",), optional=("frequencies",))
    kind_str = obj["kind"]
    try:
        kind = BaseKind(kind_str)
    except ValueError:
        _err(f"{path}.kind", f"expected one of autonomous/periodic/quasiperiodic, got {kind_str!r}")
    freqs_raw = obj.get("frequencies", [])
    if not isinstance(freqs_raw, list):
        _err(f"{path}.frequencies", "expected a list")
    freqs = tuple(_number(v, f"{path}.frequencies[{i}]") for i, v in enumerate(freqs_raw))
    d = len(freqs)
    if kind is BaseKind.AUTONOMOUS and d != 0:
        _err(f"{path}.frequencies", "autonomous base takes no frequencies")
    if kind is BaseKind.PERIODIC and d != 1:
        _err(f"{path}.frequencies", "periodic base takes exactly one frequency")
    if kind is BaseKind.QUASIPERIODIC and d < 2:
        _err(f"{path}.frequencies", "quasiperiodic base needs at least two frequencies")
    if any(v == 0.0 for v in freqs):
        _err(f"{path}.frequencies", "frequencies must be nonzero")
    return BaseFlowSpec(kind, freqs)


def _parse_trigpoly(obj, path, dim) -> TrigPoly:
    _expect_mapping(obj, path)
    _check_keys(obj, path, required=("mean",), optional=("harmonics",))
    mean = _number(obj["mean"], f"{path}.mean")
    harms = []
    raw = obj.get("harmonics", [])
    if not isinstance(raw, list):
        _err(f"{path}.harmonics", "expected a list")
    for i, h in enumerate(raw):
        hp = f"{path}.harmonics[{i}]"
        _expect_mapping(h, hp)
        _check_keys(h, hp, required=("wave", "amplitude"), optional=("phase",))
        wave_raw = h["wave"]
        if not isinstance(wave_raw, list):
            _err(f"{hp}.wave", "expected a list of integers")
        wave = tuple(_integer(v, f"{hp}.wave[{j}]") for j, v in enumerate(wave_raw))
        if len(wave) != dim:
            _err(f"{hp}.wave", f"wave vector length {len(wave)} does not match base dimension {dim}")
        if all(k == 0 for k in wave):
            _err(f"{hp}.wave", "wave vector must be nonzero")
        amp = _number(h["amplitude"], f"{hp}.amplitude")
        phase = _number(h.get("phase", 0.0), f"{hp}.phase")
        harms.append(Harmonic(wave, amp, phase))
    return TrigPoly(mean, tuple(harms))


def _parse_rhs(obj, path, dim) -> RhsModel:
    _expect_mapping(obj, path)
    if "shape" not in obj:
        _err(path, "missing required field 'shape'")
    shape = obj["shape"]
    if shape == "cubic":
        _check_keys(obj, path, required=("shape", "c0", "c1", "c2", "c3"))
        return CubicRhs(*(_parse_trigpoly(obj[k], f"{path}.{k}", dim)
                          for k in ("c0", "c1", "c2", "c3")))
    if shape == "deadzone":
        _check_keys(obj, path, required=("shape", "w"))
        return DeadzoneRhs(_parse_trigpoly(obj["w"], f"{path}.w", dim))
    _err(f"{path}.shape", f"expected 'cubic' or 'deadzone', got {shape!r}")


def _parse_sweep(obj, path="sweep") -> SweepSpec:
    _expect_mapping(obj, path)
    _check_keys(obj, path, required=("lambda_min", "lambda_max", "steps"))
    lo = _number(obj["lambda_min"], f"{path}.lambda_min")
    hi = _number(obj["lambda_max"], f"{path}.lambda_max")
    steps = _integer(obj["steps"], f"{path}.steps")
    if steps < 2:
        _err(f"{path}.steps", "steps >= 2 required")
    if not lo < hi:
        _err(path, "lambda_min < lambda_max required")
    return SweepSpec(lo, hi, steps)


def _parse_numerics(obj, path="numerics") -> NumericsConfig:
    _expect_mapping(obj, path)
    _check_keys(obj, path, required=(), optional=NUMERICS_KEYS)
    kwargs = {}
    for k in _NUMERICS_FLOAT_KEYS:
        if k in obj:
            kwargs[k] = _number(obj[k], f"{path}.{k}")
    if "grid_n" in obj:
        kwargs["grid_n"] = _integer(obj["grid_n"], f"{path}.grid_n")
    num = NumericsConfig(**kwargs)
    _check_numerics(num, path)
    return num


def _check_numerics(num: NumericsConfig, path="numerics"):
    for k in _NUMERICS_FLOAT_KEYS:
        if getattr(num, k) <= 0.0:
            _err(f"{path}.{k}", "must be strictly positive")
    if num.grid_n < 1:
        _err(f"{path}.grid_n", "must be a positive integer")
    if not num.pinch_tol < num.sep_tol:
        _err(path, "pinch_tol < sep_tol required")


def _scan_min_halfwidth(w: TrigPoly, base: BaseFlowSpec, n=4096):
    best = math.inf
    arg = None
    for p in grid_points(base, n):
        v = w(p.theta)
        if v < best:
            best = v
            arg = p
    return best, arg


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario file; rejects unknown keys and invariant violations."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(
            f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    _expect_mapping(obj, "")
    _check_keys(obj, "", required=("base", "rhs", "family", "sweep"), optional=("numerics",))
    base = _parse_base(obj["base"])
    rhs = _parse_rhs(obj["rhs"], "rhs", base.dim)
    fam_raw = obj["family"]
    try:
        family = Family(str(fam_raw).lower())
    except ValueError:
        _err("family", f"expected 'additive' or 'linear', got {fam_raw!r}")
    sweep = _parse_sweep(obj["sweep"])
    numerics = _parse_numerics(obj["numerics"]) if "numerics" in obj else NumericsConfig()
    if family is Family.LINEAR and isinstance(rhs, CubicRhs) and not rhs.c0.is_zero():
        _err("rhs.c0", "f(.,0)=0 required for Linear family "
                       "(constant-in-x coefficient must be identically zero)")
    if isinstance(rhs, DeadzoneRhs) and rhs.w.lower_bound() < 0.0:
        wmin, warg = _scan_min_halfwidth(rhs.w, base)
        if wmin < 0.0:
            _err("rhs.w", f"halfwidth must be nonnegative; found {wmin:.3g} "
                          f"at theta={tuple(warg.theta)}")
    return Scenario(base, rhs, family, sweep, numerics)


def _tp_json(tp: TrigPoly):
    return {"mean": tp.mean,
            "harmonics": [{"wave": list(h.wave), "amplitude": h.amplitude, "phase": h.phase}
                          for h in tp.harmonics]}


def emit_scenario(s: Scenario) -> str:
    """Canonical serialization; parse(emit(s)) == s for every valid scenario."""
    if isinstance(s.rhs, CubicRhs):
        rhs = {"shape": "cubic", **{k: _tp_json(getattr(s.rhs, k))
                                    for k in ("c0", "c1", "c2", "c3")}}
    else:
        rhs = {"shape": "deadzone", "w": _tp_json(s.rhs.w)}
    obj = {
        "base": {"kind": s.base.kind.value, "frequencies": list(s.base.frequencies)},
        "rhs": rhs,
        "family": s.family.value,
        "sweep": {"lambda_min": s.sweep.lambda_min, "lambda_max": s.sweep.lambda_max,
                  "steps": s.sweep.steps},
        "numerics": {k: getattr(s.numerics, k) for k in NUMERICS_KEYS},
    }
    return json.dumps(obj, indent=2)


def override_numerics(s: Scenario, **kwargs) -> Scenario:
    """Return a copy of s with the given numerics fields replaced."""
    for k in kwargs:
        if k not in NUMERICS_KEYS:
            raise ScenarioError(f"numerics.{k}: unknown key '{k}'")
    num = replace(s.numerics, **{k: (int(v) if k == "grid_n" else float(v))
                                 for k, v in kwargs.items()})
    _check_numerics(num)
    return replace(s, numerics=num)


def with_c2_shift(s: Scenario, xi: float) -> Scenario:
    """Shift the quadratic coefficient mean by xi (cubic shape only).

    Sweeping this shift at lambda = 0 walks the family in which the quadratic
    coefficient, rather than a linear term, carries the parameter.
    """
    if not isinstance(s.rhs, CubicRhs):
        raise ScenarioError("c2 shift applies to the cubic shape only")
    c2 = replace(s.rhs.c2, mean=s.rhs.c2.mean + xi)
    return replace(s, rhs=replace(s.rhs, c2=c2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    decided_by: str          # "l1_bound" | "grid_scan" | "structural" | "analytic"
    witness_theta: tuple[float, ...] | None = None
    witness_x: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self):
        return {"ok": self.ok,
                "checks": [{"name": c.name, "passed": c.passed, "decided_by": c.decided_by,
                            "witness_theta": None if c.witness_theta is None else list(c.witness_theta),
                            "witness_x": c.witness_x, "detail": c.detail}
                           for c in self.checks]}


def _uniform_sign_check(name: str, tp: TrigPoly, base: BaseFlowSpec, strict: bool):
    """Uniform negativity check for a trig polynomial: the coefficient l1
    bound decides when it can; otherwise a 4096-point scan hunts a witness."""
    ub = tp.upper_bound()
    if (ub < 0.0) or (not strict and ub <= 0.0):
        return CheckResult(name, True, "l1_bound",
                           detail=f"upper coefficient bound {ub:.6g}")
    worst = -math.inf
    arg = None
    for p in grid_points(base, 4096):
        v = tp(p.theta)
        if v > worst:
            worst = v
            arg = p
    bad = (worst >= 0.0) if strict else (worst > 0.0)
    if bad:
        return CheckResult(name, False, "grid_scan", witness_theta=arg.theta,
                           detail=f"value {worst:.6g} at witness")
    return CheckResult(name, True, "grid_scan",
                       detail=f"grid maximum {worst:.6g} (l1 bound inconclusive)")


def validate_model(s: Scenario) -> ValidationReport:
    """Report coercivity, d-concavity and the linear-family zero condition.

    Failures are report entries with witnesses, never exceptions; the report
    records whether the coefficient bound or the grid scan decided each check.
    """
    checks = []
    if isinstance(s.rhs, CubicRhs):
        checks.append(_uniform_sign_check("coercive", s.rhs.c3, s.base, strict=True))
        checks.append(_uniform_sign_check("d_concave", s.rhs.c3, s.base, strict=False))
    else:
        checks.append(CheckResult("coercive", True, "structural",
                                  detail="deadzone cubic decays cubically"))
        checks.append(CheckResult("d_concave", True, "structural",
                                  detail="derivative is concave by construction"))
        wmin, warg = _scan_min_halfwidth(s.rhs.w, s.base)
        checks.append(CheckResult(
            "halfwidth_nonnegative", wmin >= 0.0, "grid_scan",
            witness_theta=None if wmin >= 0.0 else warg.theta,
            detail=f"grid minimum {wmin:.6g}"))
    if s.family is Family.LINEAR:
        if isinstance(s.rhs, CubicRhs):
            zero = s.rhs.c0.is_zero()
            checks.append(CheckResult("linear_zero_at_zero", zero, "analytic",
                                      detail="c0 identically zero" if zero
                                      else "c0 not identically zero"))
        else:
            checks.append(CheckResult("linear_zero_at_zero", True, "structural",
                                      detail="deadzone vanishes at 0"))
    return ValidationReport(tuple(checks))
