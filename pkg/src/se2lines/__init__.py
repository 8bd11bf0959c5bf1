"""Geodesics, metric lines and calibrations for the sub-Riemannian structure on SE(2)."""

from .calibration import (
    GlobalSeparatrix,
    LocalEikonal,
    mane_critical_value,
    verify_calibration,
)
from .errors import IntegrationError, PreconditionError
from .flow import CotangentState, classify_geodesic, full_flow, lift_geodesic
from .group import Pose
from .minimality import certify_metric_line, conjugate_point_check, cut_witness
from .period import is_periodic, period_displacement, reduced_period, theta_period
from .reduction import Momentum, ReducedState, classify_level_set, hill_intervals

__version__ = "0.1.0"

__all__ = [
    "CotangentState",
    "GlobalSeparatrix",
    "IntegrationError",
    "LocalEikonal",
    "Momentum",
    "Pose",
    "PreconditionError",
    "ReducedState",
    "certify_metric_line",
    "classify_geodesic",
    "classify_level_set",
    "conjugate_point_check",
    "cut_witness",
    "full_flow",
    "hill_intervals",
    "is_periodic",
    "lift_geodesic",
    "mane_critical_value",
    "period_displacement",
    "reduced_period",
    "theta_period",
    "verify_calibration",
]
