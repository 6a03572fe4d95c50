"""Adaptive Dormand-Prince 5(4) integrator with dense output.

Real-valued state vectors only; complex problems integrate a real view of
their amplitudes. Output is produced at caller-supplied times through the
4th-order continuous extension of each accepted step, so the step-size
sequence does not depend on the output grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "IntegrationError",
    "StepSizeUnderflow",
    "TooManySteps",
    "SolveResult",
    "dopri5",
]

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
A = [
    np.array(row)
    for row in (
        [],
        [1 / 5],
        [3 / 40, 9 / 40],
        [44 / 45, -56 / 15, 32 / 9],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    )
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# Difference between the 5th and embedded 4th order weights (7 stages, FSAL).
E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
# Continuous extension: y(t + x h) = y + h K^T P [x, x^2, x^3, x^4].
P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0


class IntegrationError(RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    """The controller asked for a step below floating-point resolution."""


class TooManySteps(IntegrationError):
    """Tolerance not reached within the step budget."""


@dataclass
class SolveResult:
    t: np.ndarray
    y: np.ndarray  # shape (len(t), n)
    n_steps: int
    n_rejected: int
    n_evals: int


def _initial_step(fun, t0, y0, f0, direction, rtol, atol, max_step):
    # Hairer, Norsett & Wanner starting-step heuristic for a 5th-order method.
    scale = atol + rtol * np.abs(y0)
    with np.errstate(over="ignore", invalid="ignore"):
        d0 = np.sqrt(np.mean((y0 / scale) ** 2))
        d1 = np.sqrt(np.mean((f0 / scale) ** 2))
        h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    if not math.isfinite(h0):
        h0 = 1e-6
    h0 = min(h0, max_step)
    y1 = y0 + direction * h0 * f0
    f1 = fun(t0 + direction * h0, y1)
    with np.errstate(over="ignore", invalid="ignore"):
        d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if not (math.isfinite(d1) and math.isfinite(d2)):
        return min(h0, max_step)
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, max_step)


def dopri5(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t_out,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-10,
    max_step: float = math.inf,
    first_step: float | None = None,
    max_steps: int = 1_000_000,
) -> SolveResult:
    """Integrate ``y' = fun(t, y)`` from ``t0`` through every time in ``t_out``.

    ``t_out`` must be monotone in the integration direction and start at or
    after ``t0``. Each accepted step satisfies ``err <= 1`` in the RMS norm
    scaled by ``atol + rtol * max(|y_old|, |y_new|)``.
    """
    y = np.array(y0, dtype=float)
    t_out = np.asarray(t_out, dtype=float)
    if t_out.ndim != 1 or t_out.size == 0:
        raise ValueError("t_out must be a non-empty 1-d array")
    if not (rtol > 0 and atol > 0 and max_step > 0):
        raise ValueError("rtol, atol and max_step must be > 0")
    t_end = t_out[-1]
    direction = 1.0 if t_end >= t0 else -1.0
    steps = np.diff(np.concatenate(([t0], t_out))) * direction
    if np.any(steps < 0):
        raise ValueError("t_out must be monotone in the integration direction from t0")

    out = np.empty((t_out.size, y.size))
    n_evals = 1
    f = fun(t0, y)
    t = t0
    k = 0
    while k < t_out.size and t_out[k] == t0:
        out[k] = y
        k += 1
    if k == t_out.size:
        return SolveResult(t_out, out, 0, 0, n_evals)

    if first_step is None:
        h = _initial_step(fun, t0, y, f, direction, rtol, atol, max_step)
        n_evals += 1
    else:
        h = min(abs(first_step), max_step)

    K = np.empty((7, y.size))
    n_steps = n_rejected = 0
    while k < t_out.size:
        if n_steps + n_rejected >= max_steps:
            raise TooManySteps(f"no convergence within {max_steps} steps (t={t:g})")
        min_step = 10 * np.spacing(max(abs(t), abs(t_end)))
        if h < min_step:
            raise StepSizeUnderflow(f"step size {h:g} underflowed at t={t:g}")
        h = min(h, abs(t_end - t))
        hs = direction * h
        K[0] = f
        for i in range(1, 6):
            K[i] = fun(t + C[i] * hs, y + hs * (A[i] @ K[:i]))
        y_new = y + hs * (B @ K[:6])
        t_new = t + hs
        f_new = fun(t_new, y_new)
        K[6] = f_new
        n_evals += 6

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        with np.errstate(over="ignore", invalid="ignore"):
            err = np.sqrt(np.mean((hs * (E @ K) / scale) ** 2))
        # NaN or inf (overflow, non-finite derivatives) counts as a rejection.
        if not err <= 1.0:
            n_rejected += 1
            h *= MIN_FACTOR if not math.isfinite(err) else max(MIN_FACTOR, SAFETY * err ** (-1 / 5))
            continue

        n_steps += 1
        if t_new == t_end:
            last = t_out.size
        else:
            last = k + int(np.searchsorted(direction * t_out[k:], direction * t_new, side="right"))
        if last > k:
            x = (t_out[k:last] - t) / hs
            powers = np.cumprod(np.repeat(x[:, None], 4, axis=1), axis=1)
            out[k:last] = y + hs * (powers @ (K.T @ P).T)
            if t_new == t_end:
                out[-1] = y_new
            k = last

        t, y, f = t_new, y_new, f_new
        factor = MAX_FACTOR if err == 0 else min(MAX_FACTOR, SAFETY * err ** (-1 / 5))
        h = min(h * factor, max_step)

    return SolveResult(t_out, out, n_steps, n_rejected, n_evals)
