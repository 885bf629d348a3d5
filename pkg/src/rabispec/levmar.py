"""Damped least squares (Levenberg-Marquardt) with numerical Jacobians.

Small, self-contained implementation for the toolkit's fitting needs
(parameter counts of order ten, smooth models).  Jacobians are built by
central differences with a relative step; damping follows the classic
Marquardt diagonal scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

MAX_ITERATIONS = 200
REL_COST_TOL = 1e-10
FD_STEP = 1e-6


@dataclass(frozen=True)
class FitResult:
    x: np.ndarray
    cost: float
    rms: float
    iterations: int
    message: str


def _numerical_jacobian(fun, x, r0_size, step=FD_STEP):
    jac = np.empty((r0_size, x.size))
    for j in range(x.size):
        h = step * max(abs(x[j]), 1.0)
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (fun(xp) - fun(xm)) / (2.0 * h)
    return jac


def least_squares_lm(
    fun,
    x0,
    max_iterations: int = MAX_ITERATIONS,
    rel_cost_tol: float = REL_COST_TOL,
    fd_step: float = FD_STEP,
) -> FitResult:
    """Minimize sum(fun(x)^2) starting from x0.

    ``fun`` maps a parameter vector to a residual vector.  Convergence is
    declared when an accepted step changes the cost by less than
    ``rel_cost_tol`` relative, when the gradient vanishes, or when damping
    can no longer produce a downhill step (a stall at a local minimum,
    reported in the result message rather than raised).  Exceeding
    ``max_iterations`` Jacobian builds raises ConvergenceError.
    """
    x = np.asarray(x0, dtype=float).copy()
    if x.ndim != 1 or x.size == 0:
        raise ValueError("parameter vector must be 1-d and non-empty")
    r = np.asarray(fun(x), dtype=float)
    cost = float(r @ r)
    lam = 1e-3
    for iteration in range(1, max_iterations + 1):
        jac = _numerical_jacobian(fun, x, r.size, fd_step)
        grad = jac.T @ r
        normal = jac.T @ jac
        if np.max(np.abs(grad)) < 1e-14 * max(cost, 1.0):
            return FitResult(x, cost, _rms(cost, r.size), iteration, "gradient vanished")
        diag = np.diag(normal).copy()
        floor = 1e-12 * max(float(diag.max()), 1.0)
        diag = np.maximum(diag, floor)
        accepted = False
        while lam < 1e14:
            try:
                step = np.linalg.solve(normal + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_trial = x + step
            r_trial = np.asarray(fun(x_trial), dtype=float)
            cost_trial = float(r_trial @ r_trial)
            if np.isfinite(cost_trial) and cost_trial < cost:
                accepted = True
                break
            lam *= 4.0
        if not accepted:
            return FitResult(x, cost, _rms(cost, r.size), iteration, "stalled (local minimum)")
        improvement = cost - cost_trial
        x, r, cost = x_trial, r_trial, cost_trial
        lam = max(lam / 3.0, 1e-12)
        if improvement <= rel_cost_tol * max(cost, 1e-300) or cost == 0.0:
            return FitResult(x, cost, _rms(cost, r.size), iteration, "converged")
    raise ConvergenceError(
        f"least-squares fit did not converge within {max_iterations} iterations "
        f"(cost {cost:.6e})"
    )


def _rms(cost: float, size: int) -> float:
    return float(np.sqrt(cost / size))
