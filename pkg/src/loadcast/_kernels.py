"""Compiled inner loops for the sequential recursions.

The exponential-smoothing scan and the conditional-sum-of-squares residual
recursion are inherently sequential and sit inside daily refit loops, so they
are jitted with numba. If numba is unavailable the same functions run as plain
Python with identical semantics, only slower.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def hw_scan_sse(y, season_len, start, alpha, beta, gamma, level0, trend0, seasonal0):
    """One-step-ahead squared-error sum of the smoothing recursion over y[start:].

    Interval t maps to seasonal slot t % season_len, which holds the value
    stored one season earlier. The error is measured against the forecast made
    before consuming y[t].
    """
    seasonal = seasonal0.copy()
    level = level0
    trend = trend0
    sse = 0.0
    for t in range(start, y.size):
        slot = t % season_len
        s_old = seasonal[slot]
        err = y[t] - (level + trend + s_old)
        sse += err * err
        prev_level = level
        prev_trend = trend
        level = alpha * (y[t] - s_old) + (1.0 - alpha) * (prev_level + prev_trend)
        trend = beta * (level - prev_level) + (1.0 - beta) * prev_trend
        seasonal[slot] = gamma * (y[t] - prev_level - prev_trend) + (1.0 - gamma) * s_old
    return sse


@njit(cache=True, parallel=True)
def hw_scan_sse_batch(y, season_len, start, alphas, betas, gammas, level0, trend0, seasonal0):
    out = np.empty(alphas.size)
    for i in prange(alphas.size):
        out[i] = hw_scan_sse(
            y, season_len, start, alphas[i], betas[i], gammas[i], level0, trend0, seasonal0
        )
    return out


@njit(cache=True)
def hw_advance(y, season_len, start_slot, alpha, beta, gamma, level0, trend0, seasonal0):
    """Run the smoothing recursion through y and return the final state."""
    seasonal = seasonal0.copy()
    level = level0
    trend = trend0
    for j in range(y.size):
        slot = (start_slot + j) % season_len
        s_old = seasonal[slot]
        prev_level = level
        prev_trend = trend
        level = alpha * (y[j] - s_old) + (1.0 - alpha) * (prev_level + prev_trend)
        trend = beta * (level - prev_level) + (1.0 - beta) * prev_trend
        seasonal[slot] = gamma * (y[j] - prev_level - prev_trend) + (1.0 - gamma) * s_old
    return level, trend, seasonal


@njit(cache=True)
def css_residuals(w, phi, theta, sphi, stheta, season):
    """Residuals of the multiplicative ARMA recursion on a differenced series.

    The recursion starts once all autoregressive lags are in sample
    (t0 = p + season * P) and residuals before that point are taken as zero.
    """
    n = w.size
    p = phi.size
    q = theta.size
    big_p = sphi.size
    big_q = stheta.size
    t0 = p + season * big_p
    eps = np.zeros(n)
    for t in range(t0, n):
        v = w[t]
        for i in range(p):
            v -= phi[i] * w[t - 1 - i]
        for j in range(big_p):
            v -= sphi[j] * w[t - season * (j + 1)]
            for i in range(p):
                v += phi[i] * sphi[j] * w[t - 1 - i - season * (j + 1)]
        for i in range(q):
            k = t - 1 - i
            if k >= 0:
                v += theta[i] * eps[k]
        for j in range(big_q):
            k = t - season * (j + 1)
            if k >= 0:
                v += stheta[j] * eps[k]
            for i in range(q):
                k2 = t - 1 - i - season * (j + 1)
                if k2 >= 0:
                    v -= theta[i] * stheta[j] * eps[k2]
        eps[t] = v
    return eps
