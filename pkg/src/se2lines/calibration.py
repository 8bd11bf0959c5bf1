"""Eikonal solutions, horizontal gradients and calibration checks.

Separable solutions of the sub-Riemannian eikonal equation

    1 = (dS/dtheta)^2 + (cos(theta) dS/dx + sin(theta) dS/dy)^2

have the form S = f(theta) + R cos(delta) x + R sin(delta) y with
f' = +-sqrt(1 - R^2 cos^2(theta - delta)). For R = 1 the antiderivative is
elementary and gives the global calibrations

    S_delta^{+-} = -+cos(theta - delta) + x cos(delta) + y sin(delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, SignMismatchError
from .flow import GeodesicArc
from .group import TWO_PI, Pose, TangentVector, horizontal_vector
from .reduction import HillInterval, IntervalKind, Momentum, hill_intervals

EIKONAL_TOL = 1e-10
SIGN_TOL = 1e-12


@dataclass(frozen=True)
class LocalEikonal:
    """S_mu^{sign}; defined on Hill(mu) x R^2."""

    mu: Momentum
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def theta_ref(self) -> float:
        """Basepoint of the antiderivative: delta for R <= 1, left end of I1 for R > 1."""
        if self.mu.R <= 1.0:
            return self.mu.delta
        return hill_intervals(self.mu)[0].lo


@dataclass(frozen=True)
class GlobalSeparatrix:
    """S_delta^{sign}, smooth on all of SE(2)."""

    delta: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


CalibrationFunction = LocalEikonal | GlobalSeparatrix


def _root(mu: Momentum, theta: float) -> float:
    c = mu.R * math.cos(theta - mu.delta)
    return math.sqrt(max(0.0, 1.0 - c * c))


def _component(cf: LocalEikonal, theta: float, tol: float = 1e-12) -> HillInterval:
    for iv in hill_intervals(cf.mu):
        if iv.contains(theta, tol):
            return iv
    raise DomainError(
        f"theta={theta!r} lies outside Hill(mu) for R={cf.mu.R!r}; "
        "the local calibration is not defined there"
    )


def _circle_integral(mu: Momentum) -> float:
    """int_0^{2 pi} sqrt(1 - R^2 cos^2) dtheta (only used for R <= 1)."""
    val, _ = quad(lambda s: _root(mu, s), 0.0, TWO_PI, epsabs=1e-13, epsrel=1e-12, limit=200,
                  points=[math.pi / 2, math.pi, 3 * math.pi / 2])
    return val


def _antiderivative_circle(mu: Momentum, a: float, b: float) -> float:
    """int_a^b sqrt(1 - R^2 cos^2(s - delta)) ds for R <= 1 (any real a, b)."""
    span = b - a
    turns = math.floor(abs(span) / TWO_PI)
    sgn = 1.0 if span >= 0 else -1.0
    total = sgn * turns * _circle_integral(mu) if turns else 0.0
    rest_end = b - sgn * turns * TWO_PI
    # kinks of |sin| when R = 1 sit at delta + k pi
    lo, hi = min(a, rest_end), max(a, rest_end)
    if hi == lo:
        return total
    k0 = math.ceil((lo - mu.delta) / math.pi)
    k1 = math.floor((hi - mu.delta) / math.pi)
    pts = [p for p in (mu.delta + k * math.pi for k in range(k0, k1 + 1)) if lo < p < hi]
    val, _ = quad(lambda s: _root(mu, s), lo, hi, epsabs=1e-13, epsrel=1e-12,
                  limit=200, points=pts or None)
    return total + (val if rest_end >= a else -val)


def _antiderivative_hill(mu: Momentum, iv: HillInterval, theta: float) -> float:
    """int_{lo}^{theta} sqrt(1 - R^2 cos^2) for R > 1, in the smooth psi variable.

    With cos(phi) = -sin(psi)/R the integrand becomes cos^2(psi)/sqrt(R^2 - sin^2 psi).
    """
    R = mu.R
    t = min(max(iv.lift(theta), iv.lo), iv.hi)
    phi = t - mu.delta - (0.0 if iv.kind is IntervalKind.I1 else math.pi)
    psi = math.asin(max(-1.0, min(1.0, -R * math.cos(phi))))
    val, _ = quad(lambda p: math.cos(p) ** 2 / math.sqrt(R * R - math.sin(p) ** 2),
                  -math.pi / 2, psi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def local_eikonal_value(cf: LocalEikonal, g: Pose) -> float:
    mu = cf.mu
    if mu.R <= 1.0:
        f = _antiderivative_circle(mu, cf.theta_ref, g.theta)
    else:
        f = _antiderivative_hill(mu, _component(cf, g.theta), g.theta)
    return cf.sign * f + mu.a * g.x + mu.b * g.y


def global_calibration_value(delta: float, sign: int, g: Pose) -> float:
    return -sign * math.cos(g.theta - delta) + g.x * math.cos(delta) + g.y * math.sin(delta)


def calibration_value(cf: CalibrationFunction, g: Pose) -> float:
    if isinstance(cf, GlobalSeparatrix):
        return global_calibration_value(cf.delta, cf.sign, g)
    return local_eikonal_value(cf, g)


def differential_in_coframe(cf: CalibrationFunction, g: Pose) -> tuple[float, float, float]:
    """Components of dS against (Theta_theta, Theta_u, Theta_v).

    The Theta_v component is -R sin(theta - delta): pulling R cos(delta) dx +
    R sin(delta) dy back through dx = cos Theta_u - sin Theta_v,
    dy = sin Theta_u + cos Theta_v.
    """
    if isinstance(cf, GlobalSeparatrix):
        phi = g.theta - cf.delta
        return cf.sign * math.sin(phi), math.cos(phi), -math.sin(phi)
    mu = cf.mu
    if mu.R > 1.0:
        _component(cf, g.theta)
    phi = g.theta - mu.delta
    return cf.sign * _root(mu, g.theta), mu.R * math.cos(phi), -mu.R * math.sin(phi)


def apply_differential(cf: CalibrationFunction, v: TangentVector) -> float:
    """dS(v) for a tangent vector at v.base."""
    c_theta, c_u, c_v = differential_in_coframe(cf, v.base)
    a_theta, a_u, a_v = v.frame_components()
    return c_theta * a_theta + c_u * a_u + c_v * a_v


def horizontal_gradient(cf: CalibrationFunction, g: Pose) -> TangentVector:
    c_theta, c_u, _ = differential_in_coframe(cf, g)
    return horizontal_vector(g, c_theta, c_u)


def eikonal_residual(cf: CalibrationFunction, g: Pose) -> float:
    c_theta, c_u, _ = differential_in_coframe(cf, g)
    return math.hypot(c_theta, c_u) - 1.0


def matching_separatrix_sign(delta: float, theta: float, theta_dot: float) -> int:
    """Sign s making S_delta^s calibrate a geodesic through (theta, theta_dot)."""
    return 1 if theta_dot * math.sin(theta - delta) >= 0.0 else -1


@dataclass
class CalibrationReport:
    max_tangent_defect: float
    max_bound_excess: float
    n_samples: int
    n_random: int
    sign_mismatch: bool = False
    tangent_tol: float = 1e-7
    bound_tol: float = 1e-10
    defects: np.ndarray = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return (self.max_tangent_defect <= self.tangent_tol
                and self.max_bound_excess <= self.bound_tol)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_tangent_defect": self.max_tangent_defect,
            "max_bound_excess": self.max_bound_excess,
            "n_samples": self.n_samples,
            "n_random": self.n_random,
            "sign_mismatch": self.sign_mismatch,
        }


def _sign_mismatch(cf: CalibrationFunction, arc: GeodesicArc) -> bool:
    th, th_dot = arc.theta, arc.p_theta
    if isinstance(cf, GlobalSeparatrix):
        prod = cf.sign * th_dot * np.sin(th - cf.delta)
    else:
        prod = cf.sign * th_dot
    return bool(np.any(prod < -SIGN_TOL))


def verify_calibration(cf: CalibrationFunction, arc: GeodesicArc, n_random: int = 1000, *,
                       seed: int = 0, require_sign_match: bool = True) -> CalibrationReport:
    """Check dS(gamma_dot) = 1 along the arc and |dS(v)| <= 1 on random unit horizontal v.

    A sign mismatch between theta_dot and the calibration root raises
    SignMismatchError unless ``require_sign_match`` is False, in which case the
    (failing) report is returned.
    """
    mismatch = _sign_mismatch(cf, arc)
    if mismatch and require_sign_match:
        raise SignMismatchError("theta_dot has the opposite sign to the calibration root")
    vel = arc.velocity
    defects = np.empty(arc.t.size)
    for i in range(arc.t.size):
        g = arc.pose_at(i)
        v = TangentVector(vel[i, 0], vel[i, 1], vel[i, 2], g)
        defects[i] = apply_differential(cf, v) - 1.0
    rng = np.random.default_rng(seed)
    excess = -np.inf
    if n_random > 0:
        idx = rng.integers(0, arc.t.size, n_random)
        angles = rng.uniform(0.0, TWO_PI, n_random)
        for i, ang in zip(idx, angles):
            g = arc.pose_at(int(i))
            v = horizontal_vector(g, math.cos(ang), math.sin(ang))
            excess = max(excess, abs(apply_differential(cf, v)) - 1.0)
    return CalibrationReport(float(np.max(np.abs(defects))), float(excess), arc.t.size,
                             n_random, mismatch, defects=defects)


def mane_critical_value(mu: Momentum) -> float:
    """c[H_mu] = max of the potential R^2 cos^2(theta - delta)/2, i.e. R^2/2."""
    return 0.5 * mu.R ** 2


def mane_critical_value_numeric(mu: Momentum, n: int = 4096) -> float:
    """Grid maximum of the potential; the grid contains theta = delta exactly."""
    theta = mu.delta + np.arange(n) * (TWO_PI / n)
    return float(np.max(0.5 * (mu.R * np.cos(theta - mu.delta)) ** 2))
