import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import central_difference
from se2lines.calibration import (
    GlobalSeparatrix,
    LocalEikonal,
    calibration_value,
    differential_in_coframe,
    eikonal_residual,
    horizontal_gradient,
    mane_critical_value,
    mane_critical_value_numeric,
    matching_separatrix_sign,
    verify_calibration,
)
from se2lines.errors import DomainError, SignMismatchError
from se2lines.flow import lift_geodesic
from se2lines.group import Pose, coframe_at, sr_norm
from se2lines.reduction import Momentum, ReducedState, hill_intervals, level_p_theta


def coordinate_gradient(cf, g: Pose) -> np.ndarray:
    return central_difference(lambda z: calibration_value(cf, Pose(*z)), g.as_array(), h=1e-6)


def coframe_gradient(cf, g: Pose) -> np.ndarray:
    """Coordinate components of dS reassembled from its coframe components."""
    comps = differential_in_coframe(cf, g)
    return sum(c * th.components() for c, th in zip(comps, coframe_at(g)))


def hill_pose(mu, frac, x=0.4, y=-1.3):
    iv = hill_intervals(mu)[0]
    return Pose(iv.lo + frac * iv.width, x, y)


@settings(max_examples=30)
@given(st.sampled_from([1, -1]), st.floats(0.0, 6.28), st.floats(-6, 6), st.floats(-5, 5), st.floats(-5, 5))
def test_global_differential_matches_finite_differences(sign, delta, theta, x, y):
    cf = GlobalSeparatrix(delta, sign)
    g = Pose(theta, x, y)
    assert np.allclose(coframe_gradient(cf, g), coordinate_gradient(cf, g), atol=1e-8)
    assert abs(eikonal_residual(cf, g)) < 1e-14


@pytest.mark.parametrize("R", [0.3, 0.8, 1.0, 1.5, 4.0])
@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("frac", [0.1, 0.5, 0.85])
def test_local_differential_matches_finite_differences(R, sign, frac):
    mu = Momentum(R, 0.6)
    cf = LocalEikonal(mu, sign)
    g = hill_pose(mu, frac)
    assert np.allclose(coframe_gradient(cf, g), coordinate_gradient(cf, g), atol=1e-8)
    assert abs(eikonal_residual(cf, g)) < 1e-12
    assert math.isclose(sr_norm(horizontal_gradient(cf, g)), 1.0, rel_tol=1e-12)


def test_local_value_continuous_across_whole_turns():
    cf = LocalEikonal(Momentum(0.5, 0.2), 1)
    lo, hi = Pose(0.2 + 2 * math.pi - 1e-7), Pose(0.2 + 2 * math.pi + 1e-7)
    assert abs(calibration_value(cf, hi) - calibration_value(cf, lo)) < 1e-6


def test_local_agrees_with_global_at_separatrix():
    # for R = 1 the antiderivative of |sin| from delta is 1 - cos on [delta, delta + pi]
    mu = Momentum(1.0, 0.9)
    for theta in np.linspace(0.95, 0.9 + math.pi - 0.05, 7):
        g = Pose(theta, 0.3, -0.2)
        loc = calibration_value(LocalEikonal(mu, 1), g)
        glob = calibration_value(GlobalSeparatrix(0.9, 1), g)
        assert math.isclose(loc - glob, 1.0, abs_tol=1e-12)


def test_local_calibration_outside_hill_region():
    mu = Momentum(2.0, 0.0)
    with pytest.raises(DomainError):
        calibration_value(LocalEikonal(mu, 1), Pose(0.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        differential_in_coframe(LocalEikonal(mu, 1), Pose(0.0, 0.0, 0.0))


def test_heteroclinic_and_line_are_calibrated():
    mu = Momentum(1.0, 0.0)
    for r0 in (ReducedState(1.0, math.pi / 2), ReducedState(-1.0, math.pi / 2), ReducedState(0.0, 0.0)):
        arc = lift_geodesic(mu, r0, T=10.0, step=5e-4)
        sign = matching_separatrix_sign(0.0, r0.theta, r0.p_theta)
        rep = verify_calibration(GlobalSeparatrix(0.0, sign), arc, 2000, seed=3)
        assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("R,sign", [(0.5, 1), (0.5, -1), (2.0, 1)])
def test_local_calibration_along_theta_periodic_arc(R, sign):
    mu = Momentum(R, 0.3)
    iv = hill_intervals(mu)[0]
    theta0 = iv.lo + 0.05 * iv.width if sign > 0 else iv.hi - 0.05 * iv.width
    r0 = ReducedState(level_p_theta(mu, theta0, sign), theta0)
    # R > 1: stop before the turning point where theta_dot changes sign
    T = 0.35 if R > 1 else 5.0
    arc = lift_geodesic(mu, r0, T=T, step=1e-4)
    rep = verify_calibration(LocalEikonal(mu, sign), arc, 500)
    assert rep.passed and not rep.sign_mismatch


def test_sign_mismatch():
    mu = Momentum(1.0, 0.0)
    arc = lift_geodesic(mu, ReducedState(1.0, math.pi / 2), T=2.0)
    with pytest.raises(SignMismatchError):
        verify_calibration(GlobalSeparatrix(0.0, -1), arc)
    rep = verify_calibration(GlobalSeparatrix(0.0, -1), arc, require_sign_match=False)
    assert rep.sign_mismatch and not rep.passed


@pytest.mark.parametrize("R", [0.0, 0.5, 1.0, 2.0, 3.3])
def test_mane_critical_value(R):
    mu = Momentum(R, 1.2)
    assert mane_critical_value(mu) == 0.5 * R * R
    assert abs(mane_critical_value_numeric(mu) - 0.5 * R * R) <= 1e-12
