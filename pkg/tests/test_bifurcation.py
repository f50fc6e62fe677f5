import math

import numpy as np
import pytest

from snbif import (DiagramClass, DomainError, Observable, PointKind, census,
                   classify, estimate_spectrum, locate_bifurcation,
                   spectrum_rule_verdict, sweep, sweep_c2_shift, with_c2_shift)
from conftest import load_scenario, make_scenario

LAM_STAR = 2.0 / (3.0 * math.sqrt(3.0))


@pytest.fixture(scope="module")
def double_sn_diagram(cubic_pinned):
    return sweep(cubic_pinned)


def test_double_saddle_node(double_sn_diagram):
    d = double_sn_diagram
    assert d.classification is DiagramClass.DOUBLE_SADDLE_NODE
    kinds = {p.kind for p in d.points}
    assert kinds == {PointKind.SADDLE_NODE_UPPER, PointKind.SADDLE_NODE_LOWER}
    locs = sorted(p.location for p in d.points)
    assert locs[0] == pytest.approx(-LAM_STAR, abs=1e-3)
    assert locs[1] == pytest.approx(LAM_STAR, abs=1e-3)
    for p in d.points:
        assert p.width <= 1e-5
    assert not d.degraded


def test_count_three_strictly_inside(double_sn_diagram, cubic_pinned):
    left = min(p.location for p in double_sn_diagram.points)
    right = max(p.location for p in double_sn_diagram.points)
    off = 10.0 * cubic_pinned.numerics.bisect_tol
    assert census(cubic_pinned, left + off).count == 3
    assert census(cubic_pinned, left - off).count == 1
    assert census(cubic_pinned, right - off).count == 3
    assert census(cubic_pinned, right + off).count == 1


def test_collision_signature_at_left_edge(double_sn_diagram, cubic_pinned):
    # approaching the lower located point from inside, the upper pair pinches
    left = min(p.location for p in double_sn_diagram.points)
    deltas = [0.05, 0.03, 0.02, 0.012, 0.008]
    gaps = []
    for d in deltas:
        r = census(cubic_pinned, left + d)
        assert r.count == 3
        assert r.gamma_beta < -cubic_pinned.numerics.exp_margin
        gaps.append(r.beta_mean - r.kappa_mean)
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))


def test_single_minimal_set_sweep(pure_cubic):
    d = sweep(pure_cubic)
    assert d.classification is DiagramClass.SINGLE_MINIMAL_SET
    assert all(r.count == 1 for r in d.rows)
    assert not d.points


def test_locate_against_discriminant(cubic_pinned):
    pt = locate_bifurcation(cubic_pinned, 0.3, 0.5, "count==3")
    assert pt.location == pytest.approx(LAM_STAR, abs=1e-3)
    assert pt.width <= cubic_pinned.numerics.bisect_tol
    assert not pt.degraded


def test_locate_needs_differing_predicate(cubic_pinned):
    with pytest.raises(DomainError):
        locate_bifurcation(cubic_pinned, 0.0, 0.1, "count==3")


def test_locate_transcritical_branch():
    s = load_scenario("transcritical.json")
    pt = locate_bifurcation(s, -0.4, -0.1, "count>=2")
    assert pt.location == pytest.approx(-0.25, abs=1e-3)


def test_locate_symmetric_pitchfork():
    s = make_scenario(family="linear",
                      sweep={"lambda_min": -0.2, "lambda_max": 0.2, "steps": 5},
                      numerics={"pullback_T": 64, "pullback_tol": 1e-6,
                                "birkhoff_T": 200, "grid_n": 2,
                                "bisect_tol": 2e-3, "sep_tol": 0.02})
    pt = locate_bifurcation(s, -0.2, 0.2, "count==3")
    assert abs(pt.location) <= 5e-3


def test_spectrum_constant_exact():
    s = make_scenario(rhs={"shape": "cubic", "c0": {"mean": 0}, "c1": {"mean": 0},
                           "c2": {"mean": 0.7}, "c3": {"mean": -1.0}})
    est = estimate_spectrum(s, Observable.A2_COEFFICIENT, [10.0, 100.0])
    assert est.low == est.high == 0.7
    assert est.horizon == 100.0


def test_spectrum_mean_zero_brackets_zero():
    s = make_scenario(
        base={"kind": "quasiperiodic", "frequencies": [1.0, 0.6180339887498949]},
        rhs={"shape": "cubic", "c0": {"mean": 0}, "c1": {"mean": 0},
             "c2": {"mean": 0.0, "harmonics": [{"wave": [1, 0], "amplitude": 1.0}]},
             "c3": {"mean": -1.0}})
    est = estimate_spectrum(s, Observable.A2_COEFFICIENT, [100.0, 1000.0, 1e4])
    assert max(abs(est.low), abs(est.high)) < 2e-4
    spreads = [hi - lo for (_, lo, hi) in est.spread_history]
    assert spreads[-1] <= spreads[0]


def test_spectrum_zero_section():
    s = make_scenario(family="linear",
                      rhs={"shape": "cubic", "c0": {"mean": 0.0}, "c1": {"mean": 1.0},
                           "c2": {"mean": 0.0}, "c3": {"mean": -1.0}})
    est = estimate_spectrum(s, Observable.FX_AT_ZERO_SECTION, [1e4])
    assert est.low == pytest.approx(1.0, abs=2e-4)
    assert est.high == pytest.approx(1.0, abs=2e-4)


def test_spectrum_preconditions():
    s_add = make_scenario()
    with pytest.raises(DomainError):
        estimate_spectrum(s_add, Observable.FX_AT_ZERO_SECTION, [10.0])
    dz = load_scenario("deadzone.json")
    with pytest.raises(DomainError):
        estimate_spectrum(dz, Observable.A2_COEFFICIENT, [10.0])


def test_autonomous_pitchfork_sweep():
    s = make_scenario(family="linear",
                      sweep={"lambda_min": -0.48, "lambda_max": 0.5, "steps": 8},
                      numerics={"pullback_T": 64, "pullback_tol": 1e-6,
                                "birkhoff_T": 200, "grid_n": 2,
                                "bisect_tol": 2e-3, "sep_tol": 0.02})
    d = sweep(s)
    assert d.classification is DiagramClass.GLOBAL_PITCHFORK
    (pt,) = d.points
    assert pt.kind is PointKind.PITCHFORK
    assert abs(pt.location) <= 5e-3
    assert d.verdicts == {"sweep": "global_pitchfork", "spectrum_rule": "global_pitchfork"}


def test_transcritical_sweep():
    s = load_scenario("transcritical.json")
    d = sweep(s)
    assert d.classification is DiagramClass.TRANSCRITICAL_PLUS_SADDLE_NODE
    kinds = {p.kind: p for p in d.points}
    assert PointKind.TRANSCRITICAL in kinds and PointKind.SADDLE_NODE_UPPER in kinds
    assert kinds[PointKind.SADDLE_NODE_UPPER].location == pytest.approx(-0.25, abs=1e-3)
    assert not d.degraded


def test_spectrum_rule_verdicts():
    pitch = make_scenario(family="linear")
    assert spectrum_rule_verdict(pitch) is DiagramClass.GLOBAL_PITCHFORK
    trans = load_scenario("transcritical.json")
    assert spectrum_rule_verdict(trans) is DiagramClass.TRANSCRITICAL_PLUS_SADDLE_NODE


def test_classify_matches_sweep(double_sn_diagram, cubic_pinned):
    assert classify(cubic_pinned, double_sn_diagram.rows) is DiagramClass.DOUBLE_SADDLE_NODE


def test_spectrum_rule_cross_check_randomized():
    rng = np.random.default_rng(99)
    means = [-1.0, -0.5, 0.0, 0.5, 1.0] * 2
    agree = 0
    for mean in means:
        amp = rng.uniform(0.05, 0.3)
        phase = rng.uniform(0.0, 2 * math.pi)
        s = make_scenario(
            base={"kind": "periodic", "frequencies": [1.0]},
            family="linear",
            rhs={"shape": "cubic", "c0": {"mean": 0.0}, "c1": {"mean": 0.0},
                 "c2": {"mean": mean, "harmonics": [
                     {"wave": [1], "amplitude": amp, "phase": phase}]},
                 "c3": {"mean": -1.0}},
            sweep={"lambda_min": -0.46, "lambda_max": 0.2525, "steps": 16},
            numerics={"rtol": 1e-8, "atol": 1e-9, "pullback_T": 192,
                      "pullback_tol": 1e-6, "birkhoff_T": 300,
                      "grid_n": 4, "bisect_tol": 5e-3,
                      "sep_tol": 0.02 if mean == 0.0 else 5e-3})
        d = sweep(s)
        rule = spectrum_rule_verdict(s)
        if d.classification is not DiagramClass.UNDETERMINED:
            assert d.classification is rule
            agree += 1
    assert agree >= 8     # the occasional undetermined sweep is tolerated, not a mismatch


def test_c2_shift_sweep_weak_pattern():
    # at the zero shift the attractor pinches algebraically; tolerances sized for it
    s = make_scenario(family="linear",
                      numerics={"pullback_T": 32, "pullback_tol": 2e-3,
                                "birkhoff_T": 100, "grid_n": 2, "sep_tol": 0.012})
    d = sweep_c2_shift(s, [-0.8, -0.4, 0.0, 0.4, 0.8])
    assert d.verdicts.get("pattern") == "weak_generalized_transcritical"
    counts = [r.count for r in d.rows]
    assert counts[0] == 2 and counts[-1] == 2 and min(counts) == 1
    # zero section nonhyperbolic at every shift: its exponent estimate is ~0
    for r, xi in zip(d.rows, [-0.8, -0.4, 0.0, 0.4, 0.8]):
        vals = {si.role: si for si in r.sets}
        zero_roles = [v for k, v in vals.items() if "zero-section" in k]
        assert zero_roles, f"no zero-section set at xi={xi}"
        assert abs(zero_roles[0].exponent) <= s.numerics.exp_margin
