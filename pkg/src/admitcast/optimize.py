"""Derivative-free minimizers shared by the smoothing and ARIMA fitters.

The Nelder-Mead implementation is deliberately self-contained so that runs
are bit-reproducible: deterministic initial simplex, a relative function
-spread stopping rule, and seeded jitter restarts when an attempt stalls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = ["MinimizeResult", "nelder_mead", "minimize", "golden_section"]

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    n_eval: int
    converged: bool


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += step * (1.0 + abs(x0[i]))
    return simplex


def nelder_mead(
    fun: Callable[[np.ndarray], float],
    x0: Sequence[float],
    *,
    step: float = 0.1,
    ftol_rel: float = 1e-8,
    max_eval: int = 5000,
) -> MinimizeResult:
    """Minimize `fun` from `x0`; stops when the simplex function spread falls
    below ftol_rel*(1+|f_best|) or the evaluation budget is exhausted."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    if n == 0:
        return MinimizeResult(x0, float(fun(x0)), 1, True)

    simplex = _initial_simplex(x0, step)
    fvals = np.array([fun(p) for p in simplex], dtype=float)
    n_eval = n + 1

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    converged = False
    while n_eval < max_eval:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        spread = fvals[-1] - fvals[0]
        if spread <= ftol_rel * (1.0 + abs(fvals[0])):
            converged = True
            break

        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + alpha * (centroid - simplex[-1])
        fr = fun(xr)
        n_eval += 1
        if fr < fvals[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = fun(xe)
            n_eval += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + rho * (xr - centroid)
            else:
                xc = centroid + rho * (simplex[-1] - centroid)
            fc = fun(xc)
            n_eval += 1
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    fvals[i] = fun(simplex[i])
                n_eval += n

    best = int(np.argmin(fvals))
    return MinimizeResult(simplex[best].copy(), float(fvals[best]), n_eval, converged)


def minimize(
    fun: Callable[[np.ndarray], float],
    x0: Sequence[float],
    *,
    step: float = 0.1,
    ftol_rel: float = 1e-8,
    max_eval: int = 5000,
    restarts: int = 3,
    seed: int = 0,
) -> MinimizeResult:
    """Nelder-Mead with up to `restarts` seeded jitter restarts on stall."""
    result = nelder_mead(fun, x0, step=step, ftol_rel=ftol_rel, max_eval=max_eval)
    total_eval = result.n_eval
    rng = np.random.default_rng(seed)
    attempt = 0
    while not result.converged and attempt < restarts:
        attempt += 1
        jitter = 0.05 * rng.standard_normal(result.x.size) * (1.0 + np.abs(result.x))
        retry = nelder_mead(
            fun, result.x + jitter, step=step, ftol_rel=ftol_rel, max_eval=max_eval
        )
        total_eval += retry.n_eval
        if retry.fun <= result.fun:
            result = retry
    return MinimizeResult(result.x, result.fun, total_eval, result.converged)


def golden_section(
    fun: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> float:
    """Golden-section search for the minimizer of a unimodal scalar function."""
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return (a + b) / 2.0
