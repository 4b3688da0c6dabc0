"""Compiled inner loops for ARMA filtering, recursion and simulation.

All kernels operate on the fully expanded (seasonal polynomials multiplied
out) AR/MA coefficient vectors with the plus-sign MA convention:

    y_t = phi_1 y_{t-1} + ... + phi_p y_{t-p} + e_t + theta_1 e_{t-1} + ...

numba is optional at runtime: without it the same functions run as plain
Python (slower, identical results).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True, nogil=True)
def kalman_filter(y, phi, theta):
    """Prediction-error decomposition of an ARMA(p, q) series, unit variance.

    Harvey state space: state dim r = max(p, q+1); transition has phi in the
    first column and an identity superdiagonal; innovation loading is
    (1, theta_1, ..., theta_{r-1}).  The initial state covariance solves the
    stationary Lyapunov equation by doubling.  The covariance recursion is
    frozen once converged (steady state), after which each step is O(r).

    Returns (v, F, a_next, ok): innovations, scaled innovation variances
    (actual variance is sigma2 * F), the one-step-ahead predicted state after
    the final observation, and a validity flag (False on numerical failure).
    """
    p = phi.shape[0]
    q = theta.shape[0]
    r = max(p, q + 1)
    n = y.shape[0]

    tphi = np.zeros(r)
    for i in range(p):
        tphi[i] = phi[i]
    rvec = np.zeros(r)
    rvec[0] = 1.0
    for j in range(q):
        rvec[1 + j] = theta[j]

    RR = np.outer(rvec, rvec)
    T = np.zeros((r, r))
    for i in range(r):
        T[i, 0] = tphi[i]
    for i in range(r - 1):
        T[i, i + 1] = 1.0

    v = np.empty(n)
    F = np.empty(n)
    a = np.zeros(r)

    # P = sum_j T^j RR T'^j by doubling: P <- P + A P A', A <- A A.
    P = RR.copy()
    A = T.copy()
    ok = True
    for _ in range(64):
        Pn = P + A @ P @ A.T
        A = A @ A
        diff = np.abs(Pn - P).max()
        P = Pn
        if not np.isfinite(diff):
            ok = False
            break
        if diff < 1e-14 * (1.0 + np.abs(P).max()):
            break
    if not ok or not np.isfinite(P).all():
        return v, F, a, False

    steady = False
    Fcur = 0.0
    K = np.zeros(r)
    M = np.empty(r)
    for t in range(n):
        if not steady:
            Fcur = P[0, 0]
            if not np.isfinite(Fcur) or Fcur <= 0.0:
                return v, F, a, False
            for i in range(r):
                s = tphi[i] * P[0, 0]
                if i + 1 < r:
                    s += P[i + 1, 0]
                M[i] = s
            K = M / Fcur

        vt = y[t] - a[0]
        v[t] = vt
        F[t] = Fcur

        # a <- T a + K v   (ascending index: a[i] reads only a[i+1] and a0)
        a0 = a[0]
        for i in range(r):
            s = tphi[i] * a0
            if i + 1 < r:
                s += a[i + 1]
            a[i] = s + K[i] * vt

        if not steady:
            # P <- T P T' + RR - M M'/F, exploiting the companion structure.
            TP = np.empty((r, r))
            for i in range(r):
                for j in range(r):
                    s = tphi[i] * P[0, j]
                    if i + 1 < r:
                        s += P[i + 1, j]
                    TP[i, j] = s
            Pn = np.empty((r, r))
            for i in range(r):
                for j in range(r):
                    s = TP[i, 0] * tphi[j]
                    if j + 1 < r:
                        s += TP[i, j + 1]
                    Pn[i, j] = s + RR[i, j] - M[i] * M[j] / Fcur
            delta = 0.0
            for i in range(r):
                for j in range(i, r):
                    m = 0.5 * (Pn[i, j] + Pn[j, i])
                    Pn[i, j] = m
                    Pn[j, i] = m
                    d = abs(Pn[i, j] - P[i, j])
                    if d > delta:
                        delta = d
            P = Pn
            if delta < 1e-12 * (1.0 + Fcur):
                steady = True

    return v, F, a, True


@njit(cache=True, nogil=True)
def css_residuals(y, phi, theta):
    """Conditional-sum-of-squares residuals with zero pre-sample values."""
    p = phi.shape[0]
    q = theta.shape[0]
    n = y.shape[0]
    e = np.zeros(n)
    for t in range(n):
        s = y[t]
        for i in range(p):
            if t - 1 - i >= 0:
                s -= phi[i] * y[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                s -= theta[j] * e[t - 1 - j]
        e[t] = s
    return e


@njit(cache=True, nogil=True)
def arma_recursion(e, phi, theta):
    """Generate an ARMA series from a given innovation sequence."""
    p = phi.shape[0]
    q = theta.shape[0]
    n = e.shape[0]
    y = np.zeros(n)
    for t in range(n):
        s = e[t]
        for i in range(p):
            if t - 1 - i >= 0:
                s += phi[i] * y[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                s += theta[j] * e[t - 1 - j]
        y[t] = s
    return y
