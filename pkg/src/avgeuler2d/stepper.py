"""Embedded Cash-Karp Runge-Kutta 5(4) adaptive integrator.

Generic over numpy state arrays (real or complex); the PDE solver feeds
spectral coefficient arrays, the vortex integrator feeds flattened blob
positions. The propagated solution is the 5th-order one; the embedded
4th-order result only supplies the error estimate.
"""

from dataclasses import dataclass

import numpy as np

# Cash & Karp (1990) tableau.
CK_C = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
CK_B4 = (2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4)


class DivergenceError(RuntimeError):
    """Non-finite values appeared in the right-hand side."""


class StiffnessError(RuntimeError):
    """Step size collapsed below dt_min; carries the last good state."""

    def __init__(self, message, t, y):
        super().__init__(message)
        self.t = t
        self.y = y


@dataclass
class StepController:
    """Standard error-norm step-size control.

    accepted steps grow by safety * err^(-1/5), rejections shrink by
    safety * err^(-1/4), both clamped to [min_shrink, max_grow].
    """

    rtol: float = 1e-6
    atol: float = 1e-9
    safety: float = 0.9
    min_shrink: float = 0.1
    max_grow: float = 5.0
    dt: float = 1e-3
    dt_min: float = 1e-13

    def __post_init__(self):
        if not (0 < self.min_shrink < 1 < self.max_grow):
            raise ValueError("require 0 < min_shrink < 1 < max_grow")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass
class StepOutcome:
    """Bookkeeping for one attempted step (accepted iff error_estimate <= 1)."""

    t: float
    accepted: bool
    error_estimate: float
    dt_used: float
    dt_next: float


def ck_step(t, y, rhs_fn, dt):
    """One Cash-Karp step: six rhs evaluations.

    Returns (candidate 5th-order state, embedded error field).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    k = []
    for i in range(6):
        yi = y
        if i:
            incr = CK_A[i][0] * k[0]
            for a, kj in zip(CK_A[i][1:], k[1:]):
                if a != 0.0:
                    incr = incr + a * kj
            yi = y + dt * incr
        ki = rhs_fn(t + CK_C[i] * dt, yi)
        if not np.all(np.isfinite(ki)):
            raise DivergenceError(f"non-finite right-hand side at t = {t + CK_C[i] * dt}")
        k.append(ki)
    acc5 = sum(b * ki for b, ki in zip(CK_B5, k) if b != 0.0)
    err = sum((b5 - b4) * ki for b5, b4, ki in zip(CK_B5, CK_B4, k))
    return y + dt * acc5, dt * err


def error_norm(err, y_old, y_new, rtol, atol):
    """Mixed rtol/atol RMS norm; <= 1 means acceptable."""
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def advance(t, y, rhs_fn, controller, t_target, post_accept=None, on_accept=None):
    """Integrate from t to t_target with adaptive Cash-Karp steps.

    The final partial step lands exactly on t_target. post_accept(t, y),
    when given, is applied to the committed state after every accepted step
    (the forcing amplitude projection); it is a constraint, outside the
    error estimate. on_accept(t, y, outcome) observes committed states.

    Returns (y at t_target, list of StepOutcome).
    """
    if t_target <= t:
        raise ValueError("t_target must exceed current time")
    log = []
    while t < t_target - 1e-14 * max(1.0, abs(t_target)):
        dt_try = min(controller.dt, t_target - t)
        if dt_try < controller.dt_min:
            raise StiffnessError(f"step size underflow at t = {t}", t, y)
        y_new, err = ck_step(t, y, rhs_fn, dt_try)
        enorm = error_norm(err, y, y_new, controller.rtol, controller.atol)
        if enorm <= 1.0:
            if enorm == 0.0:
                factor = controller.max_grow
            else:
                factor = min(controller.max_grow, controller.safety * enorm ** (-0.2))
            factor = max(controller.min_shrink, factor)
            controller.dt = dt_try * factor
            t = t + dt_try
            y = y_new
            if post_accept is not None:
                y = post_accept(t, y)
            outcome = StepOutcome(t, True, enorm, dt_try, controller.dt)
            log.append(outcome)
            if on_accept is not None:
                on_accept(t, y, outcome)
        else:
            factor = max(controller.min_shrink, controller.safety * enorm ** (-0.25))
            controller.dt = dt_try * factor
            log.append(StepOutcome(t, False, enorm, dt_try, controller.dt))
    return y, log
