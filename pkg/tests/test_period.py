import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_period_integrals, ellipk, period_closed_form
from se2lines.errors import PreconditionError, SeparatrixError
from se2lines.flow import lift_geodesic
from se2lines.period import (
    displacement_independence_check,
    is_periodic,
    period_data,
    period_displacement,
    periodicity_witness_direct,
    reduced_period,
    theta_period,
)
from se2lines.reduction import HillInterval, IntervalKind, Momentum, ReducedState, hill_intervals, level_p_theta


def test_agm_oracle_reference_value():
    assert abs(ellipk(0.5) - 1.6857503548125958) < 1e-15
    assert ellipk(0.0) == math.pi / 2


@pytest.mark.parametrize("R", [0.0, 0.1, 0.5, 0.9, 0.999, 1.001, 1.5, 2.0, 5.0, 40.0])
def test_theta_period_matches_elliptic_closed_form(R):
    assert abs(theta_period(Momentum(R, 0.3)) - period_closed_form(R)) <= 1e-10 * period_closed_form(R)


@pytest.mark.parametrize("R", [0.25, 0.5, 0.95, 1.2, 2.0, 5.0])
@pytest.mark.parametrize("delta", [0.0, 0.7, 4.0])
def test_displacement_matches_brute_quadrature(R, delta):
    L, dx, dy = brute_period_integrals(R, delta)
    pd = period_data(Momentum(R, delta))
    assert np.allclose([pd.L, pd.dx, pd.dy], [L, dx, dy], atol=1e-11, rtol=1e-11)


@pytest.mark.parametrize("R", [1.2, 3.0])
def test_both_hill_intervals_give_same_displacement(R):
    mu = Momentum(R, 0.8)
    i1, i2 = hill_intervals(mu)
    d1, d2 = period_displacement(mu, i1), period_displacement(mu, i2)
    assert np.allclose(d1, d2, atol=1e-13)
    assert math.isclose(reduced_period(mu, i2), 2 * theta_period(mu, i2))


@settings(max_examples=25)
@given(st.floats(0.01, 6.0), st.floats(0.0, 6.28))
def test_witness_is_positive_and_matches_direct_form(R, delta):
    if abs(R - 1.0) < 1e-3:
        return
    mu = Momentum(R, delta)
    periodic, witness = is_periodic(mu)
    assert not periodic
    assert witness > 0
    assert math.isclose(witness, periodicity_witness_direct(mu), rel_tol=1e-10)


def test_zero_momentum_is_periodic():
    assert is_periodic(Momentum(0.0)) == (True, 0.0)
    assert theta_period(Momentum(0.0)) == 2 * math.pi


def test_displacement_rotates_with_delta():
    # rotating the momentum rotates the period displacement
    a = np.array(period_displacement(Momentum(0.5, 0.0)))
    b = np.array(period_displacement(Momentum(0.5, 1.0)))
    rot = np.array([[math.cos(1.0), -math.sin(1.0)], [math.sin(1.0), math.cos(1.0)]])
    assert np.allclose(rot @ a, b, atol=1e-12)


@pytest.mark.parametrize("R", [0.5, 2.0])
def test_period_displacement_matches_integration(R):
    mu = Momentum(R, 0.4)
    pd = period_data(mu)
    theta0 = pd.interval.lo + 0.37 * pd.interval.width
    r0 = ReducedState(level_p_theta(mu, theta0), theta0)
    arc = lift_geodesic(mu, r0, T=pd.reduced_period, step=1e-3)
    scale = 1 if pd.interval.kind is IntervalKind.FULL_CIRCLE else 2
    assert math.isclose(arc.theta[-1] - theta0, 2 * math.pi if scale == 1 else 0.0, abs_tol=1e-9)
    assert np.allclose([arc.x[-1], arc.y[-1]], [scale * pd.dx, scale * pd.dy], atol=1e-9)


def test_separatrix_and_inconsistent_interval_rejected():
    with pytest.raises(SeparatrixError):
        theta_period(Momentum(1.0))
    with pytest.raises(SeparatrixError):
        theta_period(Momentum(1.0 + 1e-7))
    with pytest.raises(PreconditionError):
        period_data(Momentum(2.0), HillInterval(0.0, 2 * math.pi, IntervalKind.FULL_CIRCLE))


def test_independence_check_rejects_bad_starts():
    mu = Momentum(2.0, 0.0)
    i1, i2 = hill_intervals(mu)
    a = ReducedState(level_p_theta(mu, i1.midpoint), i1.midpoint)
    b = ReducedState(level_p_theta(mu, i2.midpoint), i2.midpoint)
    with pytest.raises(PreconditionError):
        displacement_independence_check(mu, a, b)
    with pytest.raises(PreconditionError):
        displacement_independence_check(mu, a, ReducedState(0.0, i1.lo))
