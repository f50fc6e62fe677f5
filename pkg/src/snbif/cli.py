"""Command-line entry point.

Exit codes: 0 success, 1 runtime degradation (artifacts written with a
"degraded" marker), 2 validation failure (report still written), 64 usage
errors (unreadable file, malformed flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .base_flow import BasePoint
from .bifurcation import (BifurcationDiagram, Observable, estimate_spectrum,
                          locate_bifurcation, sweep)
from .dconcavity import DcInterval, classify_sdc, measure_positive_module
from .equilibria import MinimalSetReport, census
from .errors import DomainError, NonConvergenceError, ScenarioError, TrackingLostError
from .integrate import schwarzian
from .scenario import Scenario, override_numerics, parse_scenario, validate_model

EXIT_OK = 0
EXIT_DEGRADED = 1
EXIT_INVALID = 2
EXIT_USAGE = 64

CSV_COLUMNS = ("lambda", "count", "pinched", "alpha_mean", "kappa_mean", "beta_mean",
               "gamma_alpha", "gamma_kappa", "gamma_beta", "gap_min", "gap_max", "horizon")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    return f"{v:.17g}"


def _row_cells(r: MinimalSetReport):
    return (r.lam, r.count, r.pinched, r.alpha_mean, r.kappa_mean, r.beta_mean,
            r.gamma_alpha, r.gamma_kappa, r.gamma_beta, r.gap_min, r.gap_max, r.horizon)


def diagram_csv(d: BifurcationDiagram) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in d.rows:
        lines.append(",".join(_fmt(c) for c in _row_cells(r)))
    return "\n".join(lines) + "\n"


def _report_dict(r: MinimalSetReport):
    return {
        "lambda": r.lam, "count": r.count, "ordering": r.ordering,
        "sets": [{"role": si.role, "value": si.value, "exponent": si.exponent,
                  "hyperbolicity": si.hyperbolicity.value} for si in r.sets],
        "pinched": r.pinched, "gap_min": r.gap_min, "gap_max": r.gap_max,
        "alpha_mean": r.alpha_mean, "kappa_mean": r.kappa_mean, "beta_mean": r.beta_mean,
        "gamma_alpha": r.gamma_alpha, "gamma_kappa": r.gamma_kappa,
        "gamma_beta": r.gamma_beta, "horizon": r.horizon,
        "degraded": list(r.degraded), "notes": list(r.notes),
    }


def diagram_summary(d: BifurcationDiagram):
    return {
        "family": d.family.value,
        "classification": d.classification.value,
        "points": [{"location": p.location, "width": p.width,
                    "kind": None if p.kind is None else p.kind.value,
                    "degraded": p.degraded} for p in d.points],
        "rows": [_report_dict(r) for r in d.rows],
        "notes": list(d.notes),
        "verdicts": d.verdicts,
        "degraded": list(d.degraded),
    }


def _write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="snbif", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("-s", "--scenario", required=True, help="scenario file (JSON)")
        p.add_argument("-o", "--out", default=None, help="output path")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="numerics override (repeatable)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: hardware parallelism, "
                            "or SNBIF_THREADS)")

    common(sub.add_parser("validate", help="parse and validate a scenario"))

    p = sub.add_parser("census", help="minimal-set census at one lambda")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    common(sub.add_parser("sweep", help="full diagram: CSV rows + summary JSON"))

    p = sub.add_parser("locate", help="bisect a census predicate transition")
    common(p)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--predicate", default="count==3",
                   help="count==N, count>=2, upper, lower")

    p = sub.add_parser("dc", help="d-concavity module measures on an interval")
    common(p)
    p.add_argument("--interval", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--eps-grid", default=None, help="comma-separated eps values")

    p = sub.add_parser("spectrum", help="finite-time spectrum bracket of an observable")
    common(p)
    p.add_argument("--observable", choices=["a2", "fx0"], default="a2")
    p.add_argument("--horizons", default=None, help="comma-separated horizons")

    p = sub.add_parser("schwarzian", help="Schwarzian derivative of the time-t map")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--omega", default="", help="comma-separated torus angles")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--t", type=float, required=True)

    return ap


def _parse_overrides(pairs):
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not KEY=VALUE")
        k, v = item.split("=", 1)
        out[k.strip()] = float(v)
    return out


class _OverrideError(ValueError):
    pass


def _load_scenario(args) -> Scenario:
    text = Path(args.scenario).read_text(encoding="utf-8")
    s = parse_scenario(text)
    try:
        overrides = _parse_overrides(args.overrides)
        if overrides:
            s = override_numerics(s, **overrides)
    except ValueError as e:
        raise _OverrideError(str(e)) from None
    return s


def _out_path(args, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(args.scenario).with_suffix("." + default_name)


def _parse_omega(text: str, dim: int) -> BasePoint:
    if not text.strip():
        return BasePoint((0.0,) * dim)
    vals = tuple(float(v) for v in text.split(","))
    if len(vals) != dim:
        raise ValueError(f"omega needs {dim} angles, got {len(vals)}")
    return BasePoint(vals)


def run(args) -> int:
    try:
        s = _load_scenario(args)
    except OSError as e:
        print(f"snbif: cannot read scenario: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _OverrideError as e:
        print(f"snbif: bad override: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as e:
        _write_json(_out_path(args, "report.json"), {"error": str(e)})
        print(f"snbif: invalid scenario: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        print(f"snbif: {e}", file=sys.stderr)
        return EXIT_USAGE

    validation = validate_model(s)
    if args.subcommand == "validate":
        _write_json(_out_path(args, "report.json"), validation.as_dict())
        return EXIT_OK if validation.ok else EXIT_INVALID
    if not validation.ok:
        _write_json(_out_path(args, "report.json"), validation.as_dict())
        print("snbif: model validation failed; see report", file=sys.stderr)
        return EXIT_INVALID

    try:
        if args.subcommand == "census":
            r = census(s, args.lam, threads=args.threads)
            out = _report_dict(r)
            _write_json(_out_path(args, "census.json"), out)
            return EXIT_DEGRADED if r.degraded else EXIT_OK

        if args.subcommand == "sweep":
            d = sweep(s, threads=args.threads)
            csv_path = _out_path(args, "csv")
            _write_text(csv_path, diagram_csv(d))
            _write_json(csv_path.with_suffix(".summary.json"), diagram_summary(d))
            return EXIT_DEGRADED if d.degraded else EXIT_OK

        if args.subcommand == "locate":
            pt = locate_bifurcation(s, args.lo, args.hi, args.predicate,
                                    threads=args.threads)
            _write_json(_out_path(args, "point.json"),
                        {"location": pt.location, "width": pt.width,
                         "degraded": pt.degraded})
            return EXIT_DEGRADED if pt.degraded else EXIT_OK

        if args.subcommand == "dc":
            J = DcInterval(*args.interval)
            if args.eps_grid:
                grid = [float(v) for v in args.eps_grid.split(",")]
                rep = classify_sdc(s, J, grid)
                _write_json(_out_path(args, "dc.json"), rep.as_dict())
                return EXIT_OK
            if args.eps is None:
                print("snbif: dc needs --eps or --eps-grid", file=sys.stderr)
                return EXIT_USAGE
            measure = measure_positive_module(s, J, args.eps)
            _write_json(_out_path(args, "dc.json"),
                        {"interval": list(args.interval), "eps": args.eps,
                         "measure": measure,
                         "resolution": {"birkhoff_T": s.numerics.birkhoff_T}})
            return EXIT_OK

        if args.subcommand == "spectrum":
            horizons = ([float(v) for v in args.horizons.split(",")] if args.horizons
                        else [s.numerics.birkhoff_T / 100.0,
                              s.numerics.birkhoff_T / 10.0, s.numerics.birkhoff_T])
            obs = Observable.A2_COEFFICIENT if args.observable == "a2" \
                else Observable.FX_AT_ZERO_SECTION
            est = estimate_spectrum(s, obs, horizons)
            _write_json(_out_path(args, "spectrum.json"), est.as_dict())
            return EXIT_OK

        if args.subcommand == "schwarzian":
            omega = _parse_omega(args.omega, s.base.dim)
            value = schwarzian(s, args.lam, omega, args.x0, args.t)
            _write_json(_out_path(args, "schwarzian.json"),
                        {"lambda": args.lam, "x0": args.x0, "t": args.t,
                         "omega": list(omega.theta), "schwarzian": value})
            return EXIT_OK
    except (NonConvergenceError, TrackingLostError) as e:
        _write_json(_out_path(args, "degraded.json"),
                    {"degraded": [str(e)], "subcommand": args.subcommand})
        print(f"snbif: degraded run: {e}", file=sys.stderr)
        return EXIT_DEGRADED
    except DomainError as e:
        print(f"snbif: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(f"snbif: unknown subcommand {args.subcommand!r}", file=sys.stderr)
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return run(args)
    except ValueError as e:
        print(f"snbif: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
