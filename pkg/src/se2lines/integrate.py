"""ODE integration for the two geodesic systems.

Two right-hand sides are compiled with numba:

* ``FULL``: canonical Hamilton equations of H_sR on T*SE(2),
  state ``[p_theta, p_x, p_y, theta, x, y]``.
* ``LIFT``: reduced pendulum flow coupled with the horizontal lift,
  state ``[p_theta, theta, x, y]``, parameters ``[R, delta]``.

The default integrator is fixed-step classical RK4 (bit-reproducible); the
state update uses compensated summation so that rounding does not dominate
the truncation error on long horizons. An adaptive RK45 mode is delegated to
scipy.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy.integrate import solve_ivp

from .errors import IntegrationError

FULL = 0
LIFT = 1

DEFAULT_STEP = 1e-3
DEFAULT_EVERY = 10


@njit(cache=True)
def _rhs(system, y, prm, out):
    if system == 0:
        c = math.cos(y[3])
        s = math.sin(y[3])
        pu = y[1] * c + y[2] * s
        pv = -y[1] * s + y[2] * c
        out[0] = -pu * pv
        out[1] = 0.0
        out[2] = 0.0
        out[3] = y[0]
        out[4] = pu * c
        out[5] = pu * s
    else:
        R = prm[0]
        phi = y[1] - prm[1]
        cphi = math.cos(phi)
        pu = R * cphi
        out[0] = R * pu * math.sin(phi)
        out[1] = y[0]
        out[2] = pu * math.cos(y[1])
        out[3] = pu * math.sin(y[1])


@njit(cache=True)
def _rk4(system, y0, prm, h, n_steps, every):
    d = y0.shape[0]
    n_out = n_steps // every + 1
    if n_steps % every != 0:
        n_out += 1
    ts = np.empty(n_out)
    ys = np.empty((n_out, d))
    y = y0.copy()
    comp = np.zeros(d)
    k1 = np.empty(d)
    k2 = np.empty(d)
    k3 = np.empty(d)
    k4 = np.empty(d)
    tmp = np.empty(d)
    ts[0] = 0.0
    ys[0] = y
    j = 1
    for i in range(1, n_steps + 1):
        _rhs(system, y, prm, k1)
        for q in range(d):
            tmp[q] = y[q] + 0.5 * h * k1[q]
        _rhs(system, tmp, prm, k2)
        for q in range(d):
            tmp[q] = y[q] + 0.5 * h * k2[q]
        _rhs(system, tmp, prm, k3)
        for q in range(d):
            tmp[q] = y[q] + h * k3[q]
        _rhs(system, tmp, prm, k4)
        for q in range(d):
            inc = h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]) - comp[q]
            new = y[q] + inc
            comp[q] = (new - y[q]) - inc
            y[q] = new
        if i % every == 0 or i == n_steps:
            ts[j] = i * h
            ys[j] = y
            j += 1
    return ts, ys


def rhs(system: int, y: np.ndarray, params: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    _rhs(system, np.ascontiguousarray(y, dtype=float), params, out)
    return out


def step_count(T: float, step: float) -> int:
    """Number of uniform steps of size <= step covering [0, T]."""
    return max(1, math.ceil(T / step - 1e-9))


def rk4_fixed(system: int, y0, params, T: float, step: float = DEFAULT_STEP,
              every: int = DEFAULT_EVERY, n_steps: int | None = None):
    """Integrate over [0, T] with uniform steps; returns (t, Y) sampled every ``every`` steps.

    The step is shrunk to T/n so the final time is hit exactly; the final
    state is always included.
    """
    if not T > 0:
        raise ValueError(f"horizon must be positive, got {T!r}")
    if every < 1:
        raise ValueError("every must be >= 1")
    y0 = np.array(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise ValueError("initial state must be finite")
    n = step_count(T, step) if n_steps is None else int(n_steps)
    h = T / n
    ts, ys = _rk4(system, y0, np.asarray(params, dtype=float), h, n, every)
    ts[-1] = T
    if not np.all(np.isfinite(ys[-1])):
        raise IntegrationError("state became non-finite", achieved_time=float(ts[-1]))
    return ts, ys


def rk45_adaptive(system: int, y0, params, T: float, tol: float = 1e-10,
                  every: int = 1):
    """Adaptive Dormand-Prince 4(5) via scipy; samples every ``every`` accepted steps."""
    if not T > 0:
        raise ValueError(f"horizon must be positive, got {T!r}")
    prm = np.asarray(params, dtype=float)
    buf = np.empty(len(y0))

    def f(_t, y):
        _rhs(system, y, prm, buf)
        return buf.copy()

    sol = solve_ivp(f, (0.0, T), np.array(y0, dtype=float), method="RK45",
                    rtol=tol, atol=tol)
    if sol.status != 0:
        raise IntegrationError(f"adaptive integration failed: {sol.message}",
                               achieved_time=float(sol.t[-1]))
    idx = np.arange(0, sol.t.size, every)
    if idx[-1] != sol.t.size - 1:
        idx = np.append(idx, sol.t.size - 1)
    return sol.t[idx], sol.y[:, idx].T
