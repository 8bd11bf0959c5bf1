"""The planar Euclidean group SE(2) with its left-invariant sub-Riemannian frame.

Poses are (theta, x, y) with matrix representation

    [[cos th, -sin th, x],
     [sin th,  cos th, y],
     [0,       0,      1]]

Angles are kept unwrapped; :func:`normalize_angle` maps to [0, 2*pi) on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotHorizontalError

TWO_PI = 2.0 * math.pi
HORIZONTAL_TOL = 1e-10


def normalize_angle(theta: float) -> float:
    """Map an angle to [0, 2*pi)."""
    r = math.fmod(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    return 0.0 if r >= TWO_PI else r


def wrap_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]."""
    r = normalize_angle(theta)
    return r - TWO_PI if r > math.pi else r


@dataclass(frozen=True)
class Pose:
    theta: float = 0.0
    x: float = 0.0
    y: float = 0.0

    def normalized(self) -> Pose:
        return Pose(normalize_angle(self.theta), self.x, self.y)

    def as_matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s, self.x], [s, c, self.y], [0.0, 0.0, 1.0]])

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> Pose:
        return cls(normalize_angle(math.atan2(m[1, 0], m[0, 0])), float(m[0, 2]), float(m[1, 2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.x, self.y])


IDENTITY = Pose()


def compose(g: Pose, h: Pose) -> Pose:
    """Group product g*h; the angle is added without wrapping."""
    c, s = math.cos(g.theta), math.sin(g.theta)
    return Pose(g.theta + h.theta, g.x + c * h.x - s * h.y, g.y + s * h.x + c * h.y)


def inverse(g: Pose) -> Pose:
    c, s = math.cos(g.theta), math.sin(g.theta)
    return Pose(normalize_angle(-g.theta), -c * g.x - s * g.y, s * g.x - c * g.y)


def pose_equal(g: Pose, h: Pose, tol: float = 1e-12) -> bool:
    """Componentwise comparison after angle normalization (angles compared on the circle)."""
    return (
        abs(wrap_angle(g.theta - h.theta)) <= tol
        and abs(g.x - h.x) <= tol
        and abs(g.y - h.y) <= tol
    )


@dataclass(frozen=True)
class TangentVector:
    """Vector c_theta d/dtheta + c_x d/dx + c_y d/dy at ``base``."""

    c_theta: float
    c_x: float
    c_y: float
    base: Pose = IDENTITY

    def components(self) -> np.ndarray:
        return np.array([self.c_theta, self.c_x, self.c_y])

    def __add__(self, other: TangentVector) -> TangentVector:
        return TangentVector(self.c_theta + other.c_theta, self.c_x + other.c_x,
                             self.c_y + other.c_y, self.base)

    def __rmul__(self, a: float) -> TangentVector:
        return TangentVector(a * self.c_theta, a * self.c_x, a * self.c_y, self.base)

    def __sub__(self, other: TangentVector) -> TangentVector:
        return self + (-1.0) * other

    def frame_components(self) -> tuple[float, float, float]:
        """Components against (X_theta, X_u, X_v)."""
        c, s = math.cos(self.base.theta), math.sin(self.base.theta)
        return self.c_theta, c * self.c_x + s * self.c_y, -s * self.c_x + c * self.c_y

    def is_horizontal(self, tol: float = HORIZONTAL_TOL) -> bool:
        return abs(self.frame_components()[2]) <= tol


@dataclass(frozen=True)
class Covector:
    """One-form p_theta dtheta + p_x dx + p_y dy at ``base``."""

    p_theta: float
    p_x: float
    p_y: float
    base: Pose = IDENTITY

    def __call__(self, v: TangentVector) -> float:
        return self.p_theta * v.c_theta + self.p_x * v.c_x + self.p_y * v.c_y

    def components(self) -> np.ndarray:
        return np.array([self.p_theta, self.p_x, self.p_y])


def frame_at(g: Pose) -> tuple[TangentVector, TangentVector, TangentVector]:
    """Left-invariant frame (X_theta, X_u, X_v) at g."""
    c, s = math.cos(g.theta), math.sin(g.theta)
    return (
        TangentVector(1.0, 0.0, 0.0, g),
        TangentVector(0.0, c, s, g),
        TangentVector(0.0, -s, c, g),
    )


def coframe_at(g: Pose) -> tuple[Covector, Covector, Covector]:
    """Dual coframe (Theta_theta, Theta_u, Theta_v) at g."""
    c, s = math.cos(g.theta), math.sin(g.theta)
    return (
        Covector(1.0, 0.0, 0.0, g),
        Covector(0.0, c, s, g),
        Covector(0.0, -s, c, g),
    )


def horizontal_vector(g: Pose, a_theta: float, a_u: float) -> TangentVector:
    """The horizontal vector a_theta X_theta + a_u X_u at g."""
    return TangentVector(a_theta, a_u * math.cos(g.theta), a_u * math.sin(g.theta), g)


def sr_inner(v: TangentVector, w: TangentVector) -> float:
    """Sub-Riemannian inner product declaring (X_theta, X_u) orthonormal.

    Raises NotHorizontalError if either vector leaves the distribution.
    """
    av_theta, av_u, av_v = v.frame_components()
    aw_theta, aw_u, aw_v = w.frame_components()
    if abs(av_v) > HORIZONTAL_TOL or abs(aw_v) > HORIZONTAL_TOL:
        raise NotHorizontalError(
            f"vector outside the distribution: X_v components {av_v:.3e}, {aw_v:.3e}"
        )
    return av_theta * aw_theta + av_u * aw_u


def sr_norm(v: TangentVector) -> float:
    return math.sqrt(sr_inner(v, v))


def left_translate(g: Pose, v: TangentVector) -> TangentVector:
    """Push v forward by left multiplication L_g."""
    c, s = math.cos(g.theta), math.sin(g.theta)
    return TangentVector(v.c_theta, c * v.c_x - s * v.c_y, s * v.c_x + c * v.c_y, compose(g, v.base))
