import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import heteroclinic_theta
from se2lines import integrate
from se2lines.errors import IntegrationError, OffLevelError
from se2lines.flow import (
    CotangentState,
    Dynamical,
    Inflectional,
    classify_geodesic,
    curvature_of_projection,
    full_flow,
    lift_geodesic,
    planar_projection,
)
from se2lines.group import Pose
from se2lines.reduction import Momentum, ReducedState, level_p_theta


def on_level_start(R, delta, theta, sign=1.0):
    mu = Momentum(R, delta)
    return mu, ReducedState(level_p_theta(mu, theta, sign), theta)


def test_rhs_matches_canonical_equations():
    y = np.array([0.3, 0.8, -0.4, 1.1, 2.0, -3.0])
    pu = 0.8 * math.cos(1.1) - 0.4 * math.sin(1.1)
    pv = -0.8 * math.sin(1.1) - 0.4 * math.cos(1.1)
    expected = [-pu * pv, 0.0, 0.0, 0.3, pu * math.cos(1.1), pu * math.sin(1.1)]
    assert np.allclose(integrate.rhs(integrate.FULL, y, np.zeros(2)), expected, atol=1e-15)


def test_rk4_hits_final_time_and_order_four():
    # pendulum-free check on the lift: theta_dot = p, p_dot = 0 when R = 0
    t, y = integrate.rk4_fixed(integrate.LIFT, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0], 1.234, step=0.01)
    assert t[-1] == 1.234
    assert math.isclose(y[-1, 1], 1.234, rel_tol=1e-14)
    mu, r0 = on_level_start(0.7, 0.2, 1.0)
    ref = lift_geodesic(mu, r0, T=3.0, step=1e-4, every=10 ** 6).states[-1]
    errs = [np.max(np.abs(lift_geodesic(mu, r0, T=3.0, step=h, every=10 ** 6).states[-1] - ref))
            for h in (0.04, 0.02)]
    assert 12.0 < errs[0] / errs[1] < 20.0


def test_rk4_rejects_bad_arguments():
    with pytest.raises(ValueError):
        integrate.rk4_fixed(integrate.LIFT, [1, 0, 0, 0], [0, 0], 0.0)
    with pytest.raises(ValueError):
        integrate.rk4_fixed(integrate.LIFT, [math.nan, 0, 0, 0], [0, 0], 1.0)


def test_adaptive_failure_reports_time(monkeypatch):
    from se2lines import integrate as mod

    class Failed:
        status, message, t = -1, "step size too small", np.array([0.0, 0.5])

    monkeypatch.setattr(mod, "solve_ivp", lambda *a, **k: Failed())
    with pytest.raises(IntegrationError) as exc:
        mod.rk45_adaptive(mod.LIFT, [1, 0, 0, 0], [0.5, 0.0], 1.0)
    assert exc.value.achieved_time == 0.5


def test_adaptive_agrees_with_fixed_step():
    mu, r0 = on_level_start(1.7, 0.3, 0.3 + math.pi / 2)
    fixed = lift_geodesic(mu, r0, T=5.0, step=1e-3)
    adaptive = lift_geodesic(mu, r0, T=5.0, adaptive=True, tol=1e-11, every=1)
    assert np.max(np.abs(fixed.states[-1] - adaptive.states[-1])) < 1e-8


@pytest.mark.parametrize("R,theta,p,dyn,infl", [
    (1.0, 0.0, 0.0, Dynamical.LINE, Inflectional.NON_INFLECTION),
    (1.0, math.pi, 0.0, Dynamical.LINE, Inflectional.NON_INFLECTION),
    (1.0, math.pi / 2, 1.0, Dynamical.HETEROCLINIC, Inflectional.NON_INFLECTION),
    (0.5, math.pi / 2, 1.0, Dynamical.THETA_PERIODIC, Inflectional.NON_INFLECTION),
    (0.0, 0.3, -1.0, Dynamical.THETA_PERIODIC, Inflectional.NON_INFLECTION),
    (2.0, math.pi / 2, 1.0, Dynamical.THETA_PERIODIC, Inflectional.INFLECTION),
])
def test_classification_table(R, theta, p, dyn, infl):
    cls = classify_geodesic(Momentum(R, 0.0), ReducedState(p, theta))
    assert (cls.dynamical, cls.inflectional) == (dyn, infl)


def test_off_level_start_is_rejected_not_rescaled():
    with pytest.raises(OffLevelError):
        lift_geodesic(Momentum(0.5), ReducedState(2.0, 0.0), T=1.0)


def test_base_pose_angle_must_match():
    mu, r0 = on_level_start(0.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        lift_geodesic(mu, r0, Pose(2.0, 0.0, 0.0), T=1.0)
    lift_geodesic(mu, r0, Pose(1.0 + 2 * math.pi, 0.0, 0.0), T=0.1)


@settings(max_examples=15)
@given(st.floats(0.0, 3.0), st.floats(0.0, 6.2), st.floats(0.0, 1.0), st.booleans())
def test_lift_agrees_with_full_flow(R, delta, frac, negative):
    if abs(R - 1.0) < 1e-6:
        R = 1.0 + 1e-3
    mu = Momentum(R, delta)
    if R > 1:
        g = math.acos(1 / R)
        theta = mu.delta + g + frac * (math.pi - 2 * g)
    else:
        theta = mu.delta + 2 * math.pi * frac
    r0 = ReducedState(level_p_theta(mu, theta, -1.0 if negative else 1.0), theta)
    lift = lift_geodesic(mu, r0, T=4.0)
    full = full_flow(CotangentState.from_reduced(mu, r0), T=4.0)
    assert np.max(np.abs(lift.poses - full.poses)) < 1e-7
    assert full.max_momentum_drift == 0.0


def test_arc_diagnostics_on_heteroclinic():
    mu = Momentum(1.0, 0.0)
    arc = lift_geodesic(mu, ReducedState(1.0, math.pi / 2), T=8.0, step=5e-4, every=20)
    assert np.max(np.abs(arc.theta - heteroclinic_theta(arc.t))) < 1e-8
    assert np.allclose(arc.speed, 1.0, atol=1e-10)
    assert math.isclose(arc.length(), 8.0, rel_tol=1e-6)
    assert np.max(np.abs(arc.horizontal_defect)) < 1e-14
    assert np.allclose(arc.P_v, -np.sin(arc.theta), atol=1e-15)
    assert planar_projection(arc).shape == (arc.t.size, 3)
    assert arc.duration == 8.0


def test_curvature_of_circle_and_cusp_exclusion():
    # R = 0: theta = t, P_u = 0, the projection is a point: every sample excluded
    arc = lift_geodesic(Momentum(0.0), ReducedState(1.0, 0.0), T=1.0, every=10)
    _, kappa, excluded = curvature_of_projection(arc)
    assert excluded.all() and np.isnan(kappa).all()
    # compare with (x' y'' - y' x'') / |v|^3 from the sampled positions alone
    mu, r0 = on_level_start(0.6, 0.0, 0.4)
    arc = lift_geodesic(mu, r0, T=6.0, step=1e-4, every=10)
    t, kappa, excluded = curvature_of_projection(arc)
    h = t[1] - t[0]
    xd, yd = np.gradient(arc.x, h, edge_order=2), np.gradient(arc.y, h, edge_order=2)
    xdd, ydd = np.gradient(xd, h, edge_order=2), np.gradient(yd, h, edge_order=2)
    oracle = (xd * ydd - yd * xdd) / np.hypot(xd, yd) ** 3
    ok = ~excluded & (np.abs(arc.P_u) > 0.05)
    ok[:3] = ok[-3:] = False
    assert np.max(np.abs(kappa[ok] - oracle[ok]) / np.maximum(1, np.abs(oracle[ok]))) < 1e-3


def test_normalized_energy():
    s = CotangentState(2.0, 1.0, -1.0, 0.3, 0.0, 0.0).normalized_energy()
    assert math.isclose(s.energy, 0.5, rel_tol=1e-14)
    with pytest.raises(ValueError):
        CotangentState(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).normalized_energy()
