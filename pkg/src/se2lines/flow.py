"""Sub-Riemannian geodesics on SE(2), integrated two independent ways.

``full_flow`` integrates the canonical Hamilton equations of

    H_sR = (P_theta**2 + P_u**2) / 2,   P_u = p_x cos(theta) + p_y sin(theta)

on the six-dimensional cotangent bundle. ``lift_geodesic`` integrates the
reduced pendulum for (p_theta, theta) and lifts it horizontally via

    gamma_dot = theta_dot X_theta + R cos(theta - delta) X_u.

Both return a :class:`GeodesicArc` holding full cotangent states at the samples.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import integrate
from .errors import OffLevelError
from .group import Pose, wrap_angle
from .reduction import (
    ENERGY_LEVEL_TOL,
    Momentum,
    ReducedState,
    energy_residual,
    momentum_from_cartesian,
)

LINE_TOL = 1e-10


@dataclass(frozen=True)
class CotangentState:
    p_theta: float
    p_x: float
    p_y: float
    theta: float
    x: float
    y: float

    @property
    def P_u(self) -> float:
        return self.p_x * math.cos(self.theta) + self.p_y * math.sin(self.theta)

    @property
    def P_v(self) -> float:
        return -self.p_x * math.sin(self.theta) + self.p_y * math.cos(self.theta)

    @property
    def energy(self) -> float:
        return 0.5 * (self.p_theta ** 2 + self.P_u ** 2)

    @property
    def pose(self) -> Pose:
        return Pose(self.theta, self.x, self.y)

    @property
    def momentum(self) -> Momentum:
        return momentum_from_cartesian(self.p_x, self.p_y)

    def reduced(self) -> ReducedState:
        return ReducedState(self.p_theta, self.theta)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_theta, self.p_x, self.p_y, self.theta, self.x, self.y])

    @classmethod
    def from_array(cls, a) -> CotangentState:
        return cls(*(float(v) for v in a))

    @classmethod
    def from_reduced(cls, mu: Momentum, r0: ReducedState, g0: Pose | None = None) -> CotangentState:
        x0, y0 = (0.0, 0.0) if g0 is None else (g0.x, g0.y)
        return cls(r0.p_theta, mu.a, mu.b, r0.theta, x0, y0)

    def normalized_energy(self) -> CotangentState:
        """Rescale the covector so that H = 1/2 (arc-length parametrization)."""
        h = self.energy
        if h <= 0.0:
            raise ValueError("zero covector cannot be normalized")
        c = 1.0 / math.sqrt(2.0 * h)
        return CotangentState(c * self.p_theta, c * self.p_x, c * self.p_y,
                              self.theta, self.x, self.y)


class Dynamical(enum.Enum):
    LINE = "Line"
    HETEROCLINIC = "Heteroclinic"
    THETA_PERIODIC = "ThetaPeriodic"


class Inflectional(enum.Enum):
    INFLECTION = "Inflection"
    NON_INFLECTION = "NonInflection"


@dataclass(frozen=True)
class GeodesicClass:
    dynamical: Dynamical
    inflectional: Inflectional


def check_on_level(mu: Momentum, r0: ReducedState) -> None:
    res = energy_residual(mu, r0)
    if abs(res) > ENERGY_LEVEL_TOL:
        raise OffLevelError(res)


def _is_line_start(mu: Momentum, r0: ReducedState) -> bool:
    if abs(r0.p_theta) >= LINE_TOL:
        return False
    off = wrap_angle(r0.theta - mu.delta)
    return min(abs(off), math.pi - abs(off)) < LINE_TOL


def classify_geodesic(mu: Momentum, r0: ReducedState) -> GeodesicClass:
    check_on_level(mu, r0)
    if mu.R == 1.0:
        dyn = Dynamical.LINE if _is_line_start(mu, r0) else Dynamical.HETEROCLINIC
    else:
        dyn = Dynamical.THETA_PERIODIC
    infl = Inflectional.INFLECTION if mu.R > 1.0 else Inflectional.NON_INFLECTION
    return GeodesicClass(dyn, infl)


@dataclass(frozen=True)
class GeodesicArc:
    """Sampled geodesic: times ``t`` (n,) and cotangent states ``states`` (n, 6).

    State columns are (p_theta, p_x, p_y, theta, x, y).
    """

    t: np.ndarray
    states: np.ndarray
    mu: Momentum
    classification: GeodesicClass | None
    max_energy_drift: float
    max_momentum_drift: float

    @property
    def p_theta(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def theta(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 4]

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 5]

    @property
    def P_u(self) -> np.ndarray:
        s = self.states
        return s[:, 1] * np.cos(s[:, 3]) + s[:, 2] * np.sin(s[:, 3])

    @property
    def P_v(self) -> np.ndarray:
        s = self.states
        return -s[:, 1] * np.sin(s[:, 3]) + s[:, 2] * np.cos(s[:, 3])

    @property
    def energy(self) -> np.ndarray:
        return 0.5 * (self.p_theta ** 2 + self.P_u ** 2)

    @property
    def poses(self) -> np.ndarray:
        """(n, 3) array of (theta, x, y)."""
        return self.states[:, 3:6]

    def pose_at(self, i: int) -> Pose:
        th, x, y = self.states[i, 3:6]
        return Pose(float(th), float(x), float(y))

    def state_at(self, i: int) -> CotangentState:
        return CotangentState.from_array(self.states[i])

    @property
    def velocity(self) -> np.ndarray:
        """(n, 3) coordinate components (theta_dot, x_dot, y_dot) of gamma_dot."""
        pu = self.P_u
        th = self.theta
        return np.column_stack([self.p_theta, pu * np.cos(th), pu * np.sin(th)])

    @property
    def horizontal_defect(self) -> np.ndarray:
        """Theta_v(gamma_dot) at each sample."""
        v = self.velocity
        th = self.theta
        return -np.sin(th) * v[:, 1] + np.cos(th) * v[:, 2]

    @property
    def speed(self) -> np.ndarray:
        """Sub-Riemannian norm of gamma_dot."""
        return np.hypot(self.p_theta, self.P_u)

    def length(self) -> float:
        return float(np.trapezoid(self.speed, self.t))

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


def _drifts(states: np.ndarray) -> tuple[float, float]:
    pu = states[:, 1] * np.cos(states[:, 3]) + states[:, 2] * np.sin(states[:, 3])
    h = 0.5 * (states[:, 0] ** 2 + pu ** 2)
    e_drift = float(np.max(np.abs(h - h[0])))
    m_drift = float(np.max(np.abs(states[:, 1:3] - states[0, 1:3])))
    return e_drift, m_drift


def _integrate(system, y0, params, T, step, every, adaptive, tol, n_steps=None):
    if adaptive:
        return integrate.rk45_adaptive(system, y0, params, T, tol=tol, every=every)
    return integrate.rk4_fixed(system, y0, params, T, step=step, every=every, n_steps=n_steps)


def full_flow(s0: CotangentState, T: float, *, step: float = integrate.DEFAULT_STEP,
              every: int = integrate.DEFAULT_EVERY, adaptive: bool = False,
              tol: float = 1e-10) -> GeodesicArc:
    """Integrate the canonical Hamilton equations of H_sR for time T.

    In fixed-step mode ``tol`` is unused by the integrator; in adaptive mode it
    is passed as both rtol and atol.
    """
    t, ys = _integrate(integrate.FULL, s0.as_array(), np.zeros(2), T, step, every, adaptive, tol)
    mu = momentum_from_cartesian(s0.p_x, s0.p_y)
    r0 = s0.reduced()
    cls = classify_geodesic(mu, r0) if abs(energy_residual(mu, r0)) <= ENERGY_LEVEL_TOL else None
    e_drift, m_drift = _drifts(ys)
    return GeodesicArc(t, ys, mu, cls, e_drift, m_drift)


def _start_pose(r0: ReducedState, g0: Pose | None) -> tuple[float, float]:
    if g0 is None:
        return 0.0, 0.0
    if abs(wrap_angle(g0.theta - r0.theta)) > 1e-12:
        raise ValueError(
            f"base pose angle {g0.theta!r} disagrees with reduced angle {r0.theta!r}"
        )
    return g0.x, g0.y


def lift_states(mu: Momentum, r0: ReducedState, g0: Pose | None, T: float, *,
                step: float = integrate.DEFAULT_STEP, every: int = integrate.DEFAULT_EVERY,
                adaptive: bool = False, tol: float = 1e-10, n_steps: int | None = None):
    """Raw (t, Y) of the lifted system, Y columns (p_theta, theta, x, y). No level check."""
    x0, y0 = _start_pose(r0, g0)
    return _integrate(integrate.LIFT, [r0.p_theta, r0.theta, x0, y0], [mu.R, mu.delta],
                      T, step, every, adaptive, tol, n_steps)


def lift_geodesic(mu: Momentum, r0: ReducedState, g0: Pose | None = None, T: float = 10.0, *,
                  step: float = integrate.DEFAULT_STEP, every: int = integrate.DEFAULT_EVERY,
                  adaptive: bool = False, tol: float = 1e-10,
                  n_steps: int | None = None) -> GeodesicArc:
    """Geodesic with momentum mu through r0, built from the reduced flow and the horizontal lift.

    ``g0`` supplies the starting translation; its angle must agree with
    ``r0.theta`` modulo 2*pi. Off-level initial data is rejected, never rescaled.
    """
    cls = classify_geodesic(mu, r0)
    t, y = lift_states(mu, r0, g0, T, step=step, every=every, adaptive=adaptive,
                       tol=tol, n_steps=n_steps)
    n = t.size
    states = np.column_stack([y[:, 0], np.full(n, mu.a), np.full(n, mu.b), y[:, 1], y[:, 2], y[:, 3]])
    e_drift, m_drift = _drifts(states)
    return GeodesicArc(t, states, mu, cls, e_drift, m_drift)


def planar_projection(arc: GeodesicArc) -> np.ndarray:
    """(n, 3) array of (t, x, y)."""
    return np.column_stack([arc.t, arc.x, arc.y])


def _uniform_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference derivative on a uniform grid."""
    n = f.size
    if n < 5:
        return np.gradient(f, h)
    d = np.empty(n)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def curvature_of_projection(arc: GeodesicArc, min_speed: float = 1e-6):
    """Signed curvature of the planar projection by finite differences of its unit tangent.

    The planar velocity P_u (cos theta, sin theta) gives the unit tangent; its
    direction angle is differentiated in t and divided by the planar speed
    |P_u|. Directions are handled modulo pi so the tangent flip at cusps
    (P_u changing sign) does not register as a jump.

    Returns (t, kappa, excluded) where ``excluded`` marks samples with
    |P_u| < min_speed; kappa is NaN there.
    """
    pu = arc.P_u
    v = arc.velocity[:, 1:]
    excluded = np.abs(pu) < min_speed
    ok = ~excluded
    direction = np.zeros(arc.t.size)
    direction[ok] = np.arctan2(v[ok, 1], v[ok, 0])
    # at excluded samples fall back to the line direction so differences stay smooth
    direction[excluded] = arc.theta[excluded]
    doubled = np.unwrap(2.0 * direction)
    phi = 0.5 * doubled
    dt = np.diff(arc.t)
    if arc.t.size >= 5 and np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        turning = _uniform_derivative(phi, float(dt[0]))
    else:
        turning = np.gradient(phi, arc.t)
    speed = np.hypot(v[:, 0], v[:, 1])
    kappa = np.full(arc.t.size, np.nan)
    kappa[ok] = turning[ok] / speed[ok]
    return arc.t.copy(), kappa, excluded

