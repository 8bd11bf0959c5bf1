import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import central_difference
from se2lines.flow import CotangentState
from se2lines.reduction import (
    IntervalKind,
    Momentum,
    ReducedState,
    Shape,
    classify_level_set,
    hill_interval_of,
    hill_intervals,
    level_p_theta,
    momentum_from_cartesian,
    momentum_map,
    on_level,
    reduced_hamiltonian,
    reduced_vector_field,
    sample_level_set,
)

radii = st.floats(0.0, 5.0, allow_nan=False)
phases = st.floats(-7.0, 7.0, allow_nan=False)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_cartesian_round_trip(a, b):
    mu = momentum_from_cartesian(a, b)
    assert math.isclose(mu.a, a, abs_tol=1e-12)
    assert math.isclose(mu.b, b, abs_tol=1e-12)
    assert 0.0 <= mu.delta < 2 * math.pi


def test_momentum_validation_and_warning():
    with pytest.raises(ValueError):
        Momentum(-0.1, 0.0)
    assert Momentum(0.0, 2.0).delta == 0.0
    with pytest.warns(RuntimeWarning):
        Momentum(1.0 + 1e-11, 0.0)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-7, 7))
def test_reduced_hamiltonian_is_full_hamiltonian_on_momentum_level(pt, px, py, th):
    s = CotangentState(pt, px, py, th, 0.0, 0.0)
    mu = momentum_from_cartesian(*momentum_map(s))
    assert math.isclose(reduced_hamiltonian(mu, s.reduced()), s.energy, rel_tol=1e-12, abs_tol=1e-12)


@given(radii, phases, st.floats(-2, 2), phases)
def test_vector_field_is_hamiltonian(R, delta, p, theta):
    mu = Momentum(R, delta)
    grad = central_difference(lambda z: reduced_hamiltonian(mu, ReducedState(z[0], z[1])),
                              np.array([p, theta]))
    p_dot, theta_dot = reduced_vector_field(mu, ReducedState(p, theta))
    assert math.isclose(theta_dot, grad[0], abs_tol=1e-6)
    assert math.isclose(p_dot, -grad[1], abs_tol=1e-6)


@pytest.mark.parametrize("R,shape,kinds", [
    (0.0, Shape.TWO_NON_CONTRACTIBLE_LOOPS, ["FullCircle"]),
    (0.5, Shape.TWO_NON_CONTRACTIBLE_LOOPS, ["FullCircle"]),
    (1.0, Shape.FIGURE_EIGHT, ["I1", "I2"]),
    (2.0, Shape.TWO_CONTRACTIBLE_OVALS, ["I1", "I2"]),
])
def test_level_set_shapes(R, shape, kinds):
    ls = classify_level_set(Momentum(R, 0.4))
    assert ls.shape is shape
    assert [iv.kind.value for iv in ls.intervals] == kinds


@given(st.floats(1.01, 10.0), phases)
def test_hill_interval_endpoints_are_turning_points(R, delta):
    mu = Momentum(R, delta)
    i1, i2 = hill_intervals(mu)
    for iv in (i1, i2):
        assert 0.0 <= iv.lo < 2 * math.pi
        for end in (iv.lo, iv.hi):
            assert abs((R * math.cos(end - mu.delta)) ** 2 - 1.0) < 1e-10
        assert on_level(mu, ReducedState(level_p_theta(mu, iv.midpoint), iv.midpoint))
    assert math.isclose(i1.width, math.pi - 2 * math.acos(1 / R), rel_tol=1e-12)
    assert math.isclose((i2.lo - i1.lo) % (2 * math.pi), math.pi, abs_tol=1e-12)


@given(st.floats(1.01, 10.0), phases, st.floats(0.0, 2 * math.pi))
def test_hill_membership_matches_potential(R, delta, theta):
    mu = Momentum(R, delta)
    allowed = (R * math.cos(theta - mu.delta)) ** 2 <= 1.0
    try:
        hill_interval_of(mu, theta, tol=0.0)
        found = True
    except ValueError:
        found = False
    margin = abs((R * math.cos(theta - mu.delta)) ** 2 - 1.0)
    if margin > 1e-9:
        assert found == allowed


def test_separatrix_intervals_touch():
    i1, i2 = hill_intervals(Momentum(1.0, 0.3))
    assert math.isclose(i1.hi % (2 * math.pi), i2.lo, abs_tol=1e-12)
    assert i1.kind is IntervalKind.I1 and i2.kind is IntervalKind.I2


@pytest.mark.parametrize("R", [0.0, 0.5, 1.0, 2.5])
def test_sampled_level_set_lies_on_level(R):
    mu = Momentum(R, 1.1)
    branches = sample_level_set(mu, 64)
    assert len(branches) == 2 * len(hill_intervals(mu))
    for br in branches:
        assert np.all(br.sign * br.p_theta >= 0.0)
        for s in br.states():
            assert on_level(mu, s)


def test_sample_level_set_needs_two_points():
    with pytest.raises(ValueError):
        sample_level_set(Momentum(0.5), 1)
