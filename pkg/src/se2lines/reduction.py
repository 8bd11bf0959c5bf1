"""Momentum map, reduced pendulum Hamiltonian on T*SO(2), Hill intervals.

Fixing the conserved momentum (p_x, p_y) = (a, b) = R (cos delta, sin delta)
leaves the one-degree-of-freedom system

    H_mu(p_theta, theta) = (p_theta**2 + R**2 cos(theta - delta)**2) / 2

whose unit-energy level curve alpha_mu carries all arc-length geodesics of
momentum mu.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .group import TWO_PI, normalize_angle

#: |R - 1| below this (but R != 1) triggers an ill-conditioning warning.
SEPARATRIX_WARN_BAND = 1e-9
ENERGY_LEVEL_TOL = 1e-10


@dataclass(frozen=True)
class Momentum:
    """Conserved momentum in polar form; delta is normalized to [0, 2*pi)."""

    R: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.R >= 0.0 and math.isfinite(self.R)):
            raise ValueError(f"R must be finite and nonnegative, got {self.R!r}")
        delta = 0.0 if self.R == 0.0 else normalize_angle(self.delta)
        object.__setattr__(self, "delta", delta)
        if self.R != 1.0 and abs(self.R - 1.0) < SEPARATRIX_WARN_BAND:
            warnings.warn(
                f"R={self.R!r} is within {SEPARATRIX_WARN_BAND:g} of the separatrix; "
                "quadrature there is ill-conditioned",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def a(self) -> float:
        return self.R * math.cos(self.delta)

    @property
    def b(self) -> float:
        return self.R * math.sin(self.delta)

    @classmethod
    def from_cartesian(cls, a: float, b: float) -> Momentum:
        return momentum_from_cartesian(a, b)


def momentum_from_cartesian(a: float, b: float) -> Momentum:
    R = math.hypot(a, b)
    if R == 0.0:
        return Momentum(0.0, 0.0)
    return Momentum(R, normalize_angle(math.atan2(b, a)))


def momentum_map(state) -> tuple[float, float]:
    """J(p, g) = (p_x, p_y) for a CotangentState (or anything with p_x, p_y)."""
    return state.p_x, state.p_y


@dataclass(frozen=True)
class ReducedState:
    p_theta: float
    theta: float


def reduced_hamiltonian(mu: Momentum, s: ReducedState) -> float:
    c = math.cos(s.theta - mu.delta)
    return 0.5 * (s.p_theta ** 2 + mu.R ** 2 * c * c)


def reduced_vector_field(mu: Momentum, s: ReducedState) -> tuple[float, float]:
    """(dp_theta/dt, dtheta/dt) of the reduced Hamilton equations."""
    phi = s.theta - mu.delta
    return mu.R ** 2 * math.cos(phi) * math.sin(phi), s.p_theta


def energy_residual(mu: Momentum, s: ReducedState) -> float:
    return reduced_hamiltonian(mu, s) - 0.5


def on_level(mu: Momentum, s: ReducedState, tol: float = ENERGY_LEVEL_TOL) -> bool:
    return abs(energy_residual(mu, s)) <= tol


def level_p_theta(mu: Momentum, theta, sign: float = 1.0):
    """p_theta on alpha_mu above theta (positive root unless sign < 0)."""
    q = 1.0 - (mu.R * np.cos(np.asarray(theta) - mu.delta)) ** 2
    p = np.sqrt(np.maximum(q, 0.0))
    p = p if sign >= 0 else -p
    return float(p) if np.ndim(p) == 0 else p


class IntervalKind(enum.Enum):
    I1 = "I1"
    I2 = "I2"
    FULL_CIRCLE = "FullCircle"


@dataclass(frozen=True)
class HillInterval:
    """Closed theta-interval [lo, hi] with lo in [0, 2*pi); hi may exceed 2*pi."""

    lo: float
    hi: float
    kind: IntervalKind

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def lift(self, theta: float) -> float:
        """Representative of theta (mod 2*pi) in [lo, lo + 2*pi)."""
        return self.lo + normalize_angle(theta - self.lo)

    def contains(self, theta: float, tol: float = 1e-12) -> bool:
        if self.kind is IntervalKind.FULL_CIRCLE:
            return True
        t = self.lift(theta)
        # a point just below lo wraps to lo + 2*pi
        return t <= self.hi + tol or t >= self.lo + TWO_PI - tol


def hill_intervals(mu: Momentum) -> list[HillInterval]:
    R, d = mu.R, mu.delta
    if R < 1.0:
        return [HillInterval(d, d + TWO_PI, IntervalKind.FULL_CIRCLE)]
    if R == 1.0:
        lo2 = normalize_angle(d + math.pi)
        return [
            HillInterval(d, d + math.pi, IntervalKind.I1),
            HillInterval(lo2, lo2 + math.pi, IntervalKind.I2),
        ]
    half_gap = math.acos(1.0 / R)
    width = math.pi - 2.0 * half_gap
    lo1 = normalize_angle(d + half_gap)
    lo2 = normalize_angle(d + math.pi + half_gap)
    return [
        HillInterval(lo1, lo1 + width, IntervalKind.I1),
        HillInterval(lo2, lo2 + width, IntervalKind.I2),
    ]


def hill_interval_of(mu: Momentum, theta: float, tol: float = 1e-12) -> HillInterval:
    """The Hill interval containing theta (mod 2*pi); ValueError if none does."""
    for iv in hill_intervals(mu):
        if iv.contains(theta, tol):
            return iv
    raise ValueError(f"theta={theta!r} lies outside the Hill region of {mu}")


class Shape(enum.Enum):
    TWO_CONTRACTIBLE_OVALS = "TwoContractibleOvals"
    FIGURE_EIGHT = "FigureEight"
    TWO_NON_CONTRACTIBLE_LOOPS = "TwoNonContractibleLoops"


@dataclass(frozen=True)
class LevelSetShape:
    shape: Shape
    intervals: list[HillInterval] = field(default_factory=list)


def classify_level_set(mu: Momentum) -> LevelSetShape:
    if mu.R > 1.0:
        shape = Shape.TWO_CONTRACTIBLE_OVALS
    elif mu.R == 1.0:
        shape = Shape.FIGURE_EIGHT
    else:
        shape = Shape.TWO_NON_CONTRACTIBLE_LOOPS
    return LevelSetShape(shape, hill_intervals(mu))


@dataclass(frozen=True)
class LevelSetBranch:
    """One signed branch p_theta = sign*sqrt(1 - R^2 cos^2) over a Hill interval."""

    interval: HillInterval
    sign: int
    theta: np.ndarray
    p_theta: np.ndarray

    def states(self) -> list[ReducedState]:
        return [ReducedState(float(p), float(t)) for p, t in zip(self.p_theta, self.theta)]


def sample_level_set(mu: Momentum, n: int) -> list[LevelSetBranch]:
    """n points per branch of alpha_mu, sweeping each Hill interval endpoint to endpoint."""
    if n < 2:
        raise ValueError("need at least two samples per branch")
    branches = []
    for iv in hill_intervals(mu):
        theta = np.linspace(iv.lo, iv.hi, n)
        p = level_p_theta(mu, theta)
        branches.append(LevelSetBranch(iv, +1, theta, p))
        branches.append(LevelSetBranch(iv, -1, theta.copy(), -p))
    return branches
