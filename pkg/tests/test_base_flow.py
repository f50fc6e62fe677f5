import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snbif import (BaseFlowSpec, BaseKind, BasePoint, DomainError, TrigPoly,
                   advance, ergodic_average, grid_points)
from snbif.base_flow import GOLDEN_MEAN, finite_time_average, spread_points
from snbif.model import Harmonic

AUTO = BaseFlowSpec(BaseKind.AUTONOMOUS, ())
PER = BaseFlowSpec(BaseKind.PERIODIC, (1.0,))
QP = BaseFlowSpec(BaseKind.QUASIPERIODIC, (1.0, GOLDEN_MEAN))


def test_advance_autonomous_identity():
    p = BasePoint(())
    assert advance(AUTO, p, 123.4) == p


def test_advance_periodic():
    assert advance(PER, BasePoint((0.25,)), 0.5).theta == (0.75,)


def test_advance_quasiperiodic():
    got = advance(QP, BasePoint((0.0, 0.0)), 2.0)
    assert got.theta[0] == pytest.approx(0.0, abs=1e-15)
    assert got.theta[1] == pytest.approx((2.0 * GOLDEN_MEAN) % 1.0, abs=1e-14)


@given(st.floats(-50, 50), st.floats(-50, 50),
       st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True))
@settings(max_examples=200, deadline=None)
def test_flow_property(s, t, th1, th2):
    p = BasePoint((th1, th2))
    one = advance(QP, p, s + t)
    two = advance(QP, advance(QP, p, s), t)
    for a, b in zip(one.theta, two.theta):
        d = abs(a - b)
        assert min(d, 1.0 - d) < 1e-12


def test_invalid_specs():
    with pytest.raises(DomainError):
        BaseFlowSpec(BaseKind.PERIODIC, ())
    with pytest.raises(DomainError):
        BaseFlowSpec(BaseKind.QUASIPERIODIC, (1.0,))
    with pytest.raises(DomainError):
        BaseFlowSpec(BaseKind.PERIODIC, (0.0,))


def test_grid_points_autonomous():
    assert grid_points(AUTO, 5) == [BasePoint(())]


def test_grid_points_periodic():
    pts = grid_points(PER, 4)
    assert [p.theta[0] for p in pts] == [0.0, 0.25, 0.5, 0.75]


def test_grid_points_quasiperiodic_kronecker():
    pts = grid_points(QP, 3)
    expect = [(0.0, 0.0), (0.0, GOLDEN_MEAN), (0.0, (2 * GOLDEN_MEAN) % 1.0)]
    for p, e in zip(pts, expect):
        assert p.theta == pytest.approx(e, abs=1e-14)


def test_spread_points_cover_all_coordinates():
    pts = spread_points(QP, 64)
    arr = np.array([p.theta for p in pts])
    assert arr[:, 0].std() > 0.2
    assert arr[:, 1].std() > 0.2


def test_ergodic_average_constant_exact():
    g = TrigPoly(0.7, ())
    assert ergodic_average(QP, g, BasePoint((0.1, 0.9)), 100.0) == pytest.approx(0.7, abs=1e-12)
    assert ergodic_average(AUTO, lambda p: 3.25, BasePoint(()), 10.0) == pytest.approx(3.25, abs=1e-12)


def test_ergodic_average_cosine_decays():
    g = TrigPoly(0.0, (Harmonic((1, 0), 1.0, 0.0),))
    v = ergodic_average(QP, g, BasePoint((0.2, 0.4)), 1e4)
    assert abs(v) < 2e-4


def test_ergodic_average_trig_mean():
    g = TrigPoly(0.7, (Harmonic((0, 1), 0.3, 0.0),))
    v = ergodic_average(QP, g, BasePoint((0.0, 0.0)), 1e4)
    assert abs(v - 0.7) < 2e-4


def test_ergodic_average_error_bound_and_decay():
    # |(1/T) int cos(a s + p) ds| <= 2/(aT); check the bound and decade decay
    g = TrigPoly(0.0, (Harmonic((0, 1), 1.0, 0.3),))
    a = 2.0 * math.pi * GOLDEN_MEAN
    errs = {}
    for T in (1e2, 1e3, 1e4, 1e5):
        errs[T] = abs(ergodic_average(QP, g, BasePoint((0.0, 0.25)), T))
        assert errs[T] <= 2.0 / (a * T) + 1e-9
    assert errs[1e5] < errs[1e2]


def test_finite_time_average_matches_quadrature():
    g = TrigPoly(0.4, (Harmonic((1, 0), 0.5, 1.0), Harmonic((0, 2), 0.2, -0.3)))
    p = BasePoint((0.3, 0.8))
    for T in (7.0, 431.0):
        exact = finite_time_average(QP, g, p, T)
        quad = ergodic_average(QP, g, p, T)
        assert exact == pytest.approx(quad, abs=1e-9)
