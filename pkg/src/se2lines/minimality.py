"""Non-minimality witnesses and the metric-line certifier.

* :func:`cut_witness` integrates the geodesic and its mirror (same start,
  opposite theta_dot) and checks that they meet again after one reduced
  period while staying apart in between.
* :func:`conjugate_point_check` follows J = W1 - gamma_dot along a geodesic
  launched from a Hill endpoint, where W1 is the constant translation field
  equal to gamma_dot(0), and locates the first return of J to zero.
* :func:`certify_metric_line` combines these with the global calibration of
  the R = 1 geodesics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import integrate
from .calibration import CalibrationReport, GlobalSeparatrix, matching_separatrix_sign, verify_calibration
from .errors import PreconditionError
from .flow import GeodesicArc, check_on_level, classify_geodesic, lift_geodesic, lift_states
from .group import TWO_PI, Pose, wrap_angle
from .period import check_not_separatrix, period_data
from .reduction import Momentum, ReducedState, hill_interval_of

TURNING_POINT_TOL = 1e-10
N_MID = 100


def pose_gap(g, h) -> float:
    """max(|angle difference on the circle|, Euclidean translation distance)."""
    return max(abs(wrap_angle(g[0] - h[0])), math.hypot(g[1] - h[1], g[2] - h[2]))


@dataclass
class CutWitness:
    gamma: GeodesicArc = field(repr=False)
    gamma_tilde: GeodesicArc = field(repr=False)
    L: float
    L_hill: float
    endpoint_gap: float
    min_mid_separation: float
    gap_tol: float = 1e-6
    separation_tol: float = 1e-2

    @property
    def valid(self) -> bool:
        return self.endpoint_gap <= self.gap_tol and self.min_mid_separation > self.separation_tol

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "L": self.L,
            "L_hill": self.L_hill,
            "endpoint_gap": self.endpoint_gap,
            "min_mid_separation": self.min_mid_separation,
            "endpoint": [float(v) for v in self.gamma.poses[-1]],
            "endpoint_tilde": [float(v) for v in self.gamma_tilde.poses[-1]],
        }


def cut_witness(mu: Momentum, r0: ReducedState, g0: Pose | None = None, *,
                step: float = integrate.DEFAULT_STEP) -> CutWitness:
    """Two distinct geodesics from the same point meeting after one reduced period.

    The meeting time is the reduced period: L_hill for R < 1 and 2 L_hill for
    R > 1 (a libration must return to its start for the mirror pair to meet).
    Separation is sampled at 100 equispaced interior times.
    """
    check_on_level(mu, r0)
    if mu.R == 0.0:
        raise PreconditionError("R = 0 geodesics are periodic; no cut witness needed")
    check_not_separatrix(mu)
    if mu.R == 1.0:
        raise PreconditionError("R = 1 geodesics are not theta-periodic")
    if abs(r0.p_theta) <= TURNING_POINT_TOL:
        raise PreconditionError("p_theta(0) = 0: use conjugate_point_check for turning-point starts")
    pd = period_data(mu, hill_interval_of(mu, r0.theta))
    L = pd.reduced_period
    m = max(1, math.ceil(L / ((N_MID + 1) * step)))
    n_steps = (N_MID + 1) * m
    mirror = ReducedState(-r0.p_theta, r0.theta)
    gamma = lift_geodesic(mu, r0, g0, L, n_steps=n_steps, every=m)
    gamma_t = lift_geodesic(mu, mirror, g0, L, n_steps=n_steps, every=m)
    pa, pb = gamma.poses, gamma_t.poses
    gaps = np.array([pose_gap(pa[k], pb[k]) for k in range(pa.shape[0])])
    return CutWitness(gamma, gamma_t, L, pd.L, float(gaps[-1]), float(gaps[1:-1].min()))


@dataclass
class ConjugacyReport:
    t_star: float | None
    times: np.ndarray = field(repr=False)
    J_norm: np.ndarray = field(repr=False)
    J_at_zero: float = 0.0
    J_at_t_star: float = math.inf
    J_at_half: float = 0.0
    theta_at_t_star: float = math.nan
    p_theta_at_t_star: float = math.nan
    theta0: float = 0.0
    L_hill: float = math.nan
    threshold: float = 1e-6

    @property
    def found(self) -> bool:
        return self.t_star is not None

    @property
    def midpoint_nonvanishing(self) -> bool:
        return self.J_at_half > 1e-3

    @property
    def valid(self) -> bool:
        return (self.found and self.J_at_zero <= 1e-10 and self.J_at_t_star <= self.threshold
                and self.midpoint_nonvanishing)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "t_star": self.t_star,
            "L_hill": self.L_hill,
            "t_star_over_L_hill": None if self.t_star is None else self.t_star / self.L_hill,
            "J_at_zero": self.J_at_zero,
            "J_at_t_star": self.J_at_t_star,
            "J_at_half": self.J_at_half,
            "theta_at_t_star": self.theta_at_t_star,
            "p_theta_at_t_star": self.p_theta_at_t_star,
        }


def _jacobi(w1: np.ndarray, y: np.ndarray, mu: Momentum) -> np.ndarray:
    """J = W1 - gamma_dot for lift states y = (p_theta, theta, x, y); returns (..., 3)."""
    y = np.atleast_2d(y)
    pu = mu.R * np.cos(y[:, 1] - mu.delta)
    gdot = np.column_stack([y[:, 0], pu * np.cos(y[:, 1]), pu * np.sin(y[:, 1])])
    return w1 - gdot


def conjugate_point_check(mu: Momentum, theta0: float, g0: Pose | None = None, *,
                          step: float = integrate.DEFAULT_STEP,
                          threshold: float = 1e-6) -> ConjugacyReport:
    """Scan t in (0, 2 L_hill + 0.1] for the first zero of J = W1 - gamma_dot.

    The geodesic starts at rest in theta on a Hill endpoint (R > 1). The
    vanishing time is measured, not assumed; local minima of |J| on the sample
    grid are refined with a bounded scalar minimization.
    """
    if not mu.R > 1.0:
        raise PreconditionError("conjugate_point_check needs R > 1")
    check_not_separatrix(mu)
    pu0 = mu.R * math.cos(theta0 - mu.delta)
    if abs(pu0 * pu0 - 1.0) > 1e-10:
        raise PreconditionError(f"theta0={theta0!r} is not a Hill endpoint (R^2 cos^2 - 1 = {pu0 * pu0 - 1:.3e})")
    r0 = ReducedState(0.0, theta0)
    L_hill = period_data(mu, hill_interval_of(mu, theta0, tol=1e-9)).L
    horizon = 2.0 * L_hill + 0.1
    # gamma_dot(0) = P_u(0) X_u(theta0), a constant combination of d/dx and d/dy
    w1 = np.array([0.0, pu0 * math.cos(theta0), pu0 * math.sin(theta0)])
    t, y = lift_states(mu, r0, g0, horizon, step=step, every=1)
    norms = np.linalg.norm(_jacobi(w1, y, mu), axis=1)
    prm = np.array([mu.R, mu.delta])

    def state_at(t_target: float, i0: int) -> np.ndarray:
        dt = t_target - t[i0]
        if dt <= 0.0:
            return y[i0]
        _, ys = integrate.rk4_fixed(integrate.LIFT, y[i0], prm, dt, step=step, every=10 ** 9)
        return ys[-1]

    def jnorm(t_target: float, i0: int) -> float:
        return float(np.linalg.norm(_jacobi(w1, state_at(t_target, i0), mu)))

    report = ConjugacyReport(None, t, norms, J_at_zero=float(norms[0]), theta0=theta0,
                             L_hill=L_hill, threshold=threshold)
    minima = [i for i in range(1, t.size - 1)
              if norms[i] <= norms[i - 1] and norms[i] <= norms[i + 1]]
    for i in minima:
        res = minimize_scalar(lambda s: jnorm(s, i - 1) ** 2, bounds=(t[i - 1], t[i + 1]),
                              method="bounded", options={"xatol": 1e-13})
        ts = float(res.x)
        if jnorm(ts, i - 1) <= threshold:
            ys = state_at(ts, i - 1)
            report.t_star = ts
            report.J_at_t_star = jnorm(ts, i - 1)
            report.theta_at_t_star = float(ys[1])
            report.p_theta_at_t_star = float(ys[0])
            half = ts / 2.0
            i_half = int(np.searchsorted(t, half, side="right")) - 1
            report.J_at_half = jnorm(half, i_half)
            break
    return report


@dataclass
class MetricLineVerdict:
    """Either ``MetricLine`` (R = 1, with calibration evidence) or ``NotMinimizingPast`` L."""

    verdict: str
    reason: str
    L: float | None
    evidence: CalibrationReport | CutWitness | ConjugacyReport | dict

    @property
    def is_metric_line(self) -> bool:
        return self.verdict == "MetricLine"

    @property
    def evidence_ok(self) -> bool:
        ev = self.evidence
        if isinstance(ev, CalibrationReport):
            return ev.passed
        if isinstance(ev, dict):
            return bool(ev.get("valid"))
        return ev.valid

    def to_dict(self) -> dict:
        ev = self.evidence if isinstance(self.evidence, dict) else self.evidence.to_dict()
        return {"verdict": self.verdict, "reason": self.reason, "L": self.L,
                "evidence_ok": self.evidence_ok, "evidence": ev}


def certify_metric_line(mu: Momentum, r0: ReducedState, g0: Pose | None = None, *,
                        T: float = 20.0, step: float = integrate.DEFAULT_STEP,
                        n_random: int = 1000, seed: int = 0) -> MetricLineVerdict:
    """Decide whether the geodesic through r0 is a metric line, with evidence."""
    cls = classify_geodesic(mu, r0)
    if mu.R == 1.0:
        arc = lift_geodesic(mu, r0, g0, T, step=step)
        sign = matching_separatrix_sign(mu.delta, r0.theta, r0.p_theta)
        report = verify_calibration(GlobalSeparatrix(mu.delta, sign), arc, n_random, seed=seed)
        return MetricLineVerdict("MetricLine", cls.dynamical.value, None, report)
    if mu.R == 0.0:
        _, y = lift_states(mu, r0, g0, TWO_PI, step=step, every=10 ** 9)
        closure = pose_gap(y[0, 1:], y[-1, 1:])
        evidence = {"valid": closure <= 1e-8, "closure_gap": closure, "period": TWO_PI}
        return MetricLineVerdict("NotMinimizingPast", "ClosedOrbit", TWO_PI, evidence)
    check_not_separatrix(mu)
    if abs(r0.p_theta) > TURNING_POINT_TOL:
        w = cut_witness(mu, r0, g0, step=step)
        return MetricLineVerdict("NotMinimizingPast", "CutWitness", w.L, w)
    rep = conjugate_point_check(mu, r0.theta, g0, step=step)
    return MetricLineVerdict("NotMinimizingPast", "ConjugatePoint", rep.t_star, rep)
