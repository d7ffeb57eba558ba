"""Seasonal ARIMA fitted by conditional sum of squares.

The model applies r first differences and then R seasonal differences to the
load series and describes the result with multiplicative (AR x seasonal AR)
and (MA x seasonal MA) polynomials, all in the 1-minus-sum convention.
Coefficients are found by minimizing the conditional sum of squared residuals
with a box-constrained simplex; residuals condition on the first p + S*P
differenced values and take pre-sample residuals as zero. Forecasts chain
one-step predictions with future residuals set to zero, then undo the
differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import css_residuals
from .optimize import nelder_mead_box


@dataclass(frozen=True)
class SarimaOrder:
    p: int = 1
    r: int = 1
    q: int = 1
    season_p: int = 1
    season_r: int = 1
    season_q: int = 1
    season: int = 96

    def __post_init__(self) -> None:
        for name in ("p", "r", "q", "season_p", "season_r", "season_q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.season < 1:
            raise ValueError("season must be positive")

    @property
    def n_coeffs(self) -> int:
        return self.p + self.q + self.season_p + self.season_q

    @property
    def css_start(self) -> int:
        """First differenced index with all autoregressive lags in sample."""
        return self.p + self.season * self.season_p

    def label(self) -> str:
        return (
            f"({self.p},{self.r},{self.q})"
            f"({self.season_p},{self.season_r},{self.season_q}){self.season}"
        )


DEFAULT_ORDER = SarimaOrder()


@dataclass(frozen=True)
class SarimaModel:
    order: SarimaOrder
    phi: np.ndarray
    theta: np.ndarray
    season_phi: np.ndarray
    season_theta: np.ndarray
    css: float
    n_eff: int
    converged: bool
    y_tail: np.ndarray
    eps_tail: np.ndarray

    @property
    def sigma2(self) -> float:
        return self.css / self.n_eff

    @property
    def aic(self) -> float:
        mean_css = max(self.css / self.n_eff, 1e-300)
        return self.n_eff * math.log(mean_css) + 2.0 * (self.order.n_coeffs + 1)

    def coefficients(self) -> np.ndarray:
        return np.concatenate([self.phi, self.theta, self.season_phi, self.season_theta])


def seasonal_difference(y: np.ndarray, r: int, season_r: int, season: int) -> np.ndarray:
    """Apply r first differences, then season_r seasonal differences."""
    w = np.asarray(y, dtype=float)
    if w.size <= r + season_r * season:
        raise ValueError("series too short to difference")
    for _ in range(r):
        w = np.diff(w)
    for _ in range(season_r):
        w = w[season:] - w[:-season]
    return w


def _split_coeffs(x: np.ndarray, order: SarimaOrder):
    i = 0
    phi = np.ascontiguousarray(x[i : i + order.p]); i += order.p
    theta = np.ascontiguousarray(x[i : i + order.q]); i += order.q
    sphi = np.ascontiguousarray(x[i : i + order.season_p]); i += order.season_p
    stheta = np.ascontiguousarray(x[i : i + order.season_q])
    return phi, theta, sphi, stheta


def _css_from_w(w: np.ndarray, order: SarimaOrder, phi, theta, sphi, stheta) -> float:
    eps = css_residuals(w, phi, theta, sphi, stheta, order.season)
    tail = eps[order.css_start :]
    return float(tail @ tail)


def css_loss(model: SarimaModel, y: np.ndarray) -> float:
    """Conditional sum of squared residuals of the model on a raw series."""
    w = seasonal_difference(y, model.order.r, model.order.season_r, model.order.season)
    return _css_from_w(
        w, model.order, model.phi, model.theta, model.season_phi, model.season_theta
    )


def _required_context(order: SarimaOrder) -> int:
    diff_span = order.r + order.season_r * order.season
    arma_span = max(
        order.p + order.season * order.season_p,
        order.q + order.season * order.season_q,
        order.season,
        1,
    )
    return diff_span + arma_span + 1


def sarima_fit(
    y: np.ndarray,
    order: SarimaOrder = DEFAULT_ORDER,
    max_iter: int = 500,
    diameter_tol: float = 1e-6,
) -> SarimaModel:
    """Fit coefficients by CSS minimization inside the (-0.99, 0.99) box.

    The simplex starts at 0.1 for every coefficient. The returned model keeps
    the raw and residual tails needed to forecast from the end of the
    training data.
    """
    y = np.asarray(y, dtype=float)
    w = seasonal_difference(y, order.r, order.season_r, order.season)
    n_eff = w.size - order.css_start
    if n_eff < max(32, order.season + 2):
        raise ValueError(f"not enough data to fit {order.label()}")

    dim = order.n_coeffs
    if dim == 0:
        phi, theta, sphi, stheta = _split_coeffs(np.empty(0), order)
        css = _css_from_w(w, order, phi, theta, sphi, stheta)
        converged = True
    else:
        def objective(x: np.ndarray) -> float:
            return _css_from_w(w, order, *_split_coeffs(x, order))

        result = nelder_mead_box(
            objective,
            x0=np.full(dim, 0.1),
            lower=np.full(dim, -0.99),
            upper=np.full(dim, 0.99),
            step=0.1,
            max_iter=max_iter,
            diameter_tol=diameter_tol,
        )
        phi, theta, sphi, stheta = _split_coeffs(result.x, order)
        css = result.fun
        converged = result.converged

    eps = css_residuals(w, phi, theta, sphi, stheta, order.season)
    ctx = _required_context(order)
    return SarimaModel(
        order=order,
        phi=phi,
        theta=theta,
        season_phi=sphi,
        season_theta=stheta,
        css=css,
        n_eff=n_eff,
        converged=converged,
        y_tail=y[-ctx:].copy(),
        eps_tail=eps[-min(eps.size, ctx) :].copy(),
    )


def _forecast_from_context(model: SarimaModel, y_ctx: np.ndarray, eps_ctx: np.ndarray, horizon: int) -> np.ndarray:
    order = model.order
    if y_ctx.size < _required_context(order):
        raise ValueError("not enough trailing context to forecast")

    levels = [np.asarray(y_ctx, dtype=float)]
    steps: list[int] = []
    for _ in range(order.r):
        levels.append(np.diff(levels[-1]))
        steps.append(1)
    for _ in range(order.season_r):
        levels.append(levels[-1][order.season :] - levels[-1][: -order.season])
        steps.append(order.season)

    w = levels[-1]
    eps = np.zeros(w.size)
    m = min(eps_ctx.size, w.size)
    if m:
        eps[-m:] = eps_ctx[-m:]

    ext = [np.concatenate([lv, np.zeros(horizon)]) for lv in levels]
    sizes = [lv.size for lv in levels]
    w_ext = ext[-1]
    eps_ext = np.concatenate([eps, np.zeros(horizon)])
    nw = sizes[-1]

    phi, theta = model.phi, model.theta
    sphi, stheta = model.season_phi, model.season_theta
    s = order.season
    for j in range(horizon):
        t = nw + j
        v = 0.0
        for i, c in enumerate(phi):
            v += c * w_ext[t - 1 - i]
        for jj, sc in enumerate(sphi):
            v += sc * w_ext[t - s * (jj + 1)]
            for i, c in enumerate(phi):
                v -= c * sc * w_ext[t - 1 - i - s * (jj + 1)]
        for i, c in enumerate(theta):
            v -= c * eps_ext[t - 1 - i]
        for jj, sc in enumerate(stheta):
            v -= sc * eps_ext[t - s * (jj + 1)]
            for i, c in enumerate(theta):
                v += c * sc * eps_ext[t - 1 - i - s * (jj + 1)]
        w_ext[t] = v
        for k in range(len(levels) - 2, -1, -1):
            tk = sizes[k] + j
            ext[k][tk] = ext[k + 1][sizes[k + 1] + j] + ext[k][tk - steps[k]]
    return ext[0][sizes[0] :]


def sarima_forecast(model: SarimaModel, horizon: int) -> np.ndarray:
    """Forecast from the end of the training data."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    return _forecast_from_context(model, model.y_tail, model.eps_tail, horizon)


def sarima_forecast_from(model: SarimaModel, history: np.ndarray, horizon: int) -> np.ndarray:
    """Forecast from the end of an explicit history using the fitted coefficients.

    Residuals over the history are recomputed with the stored coefficients, so
    a daily-fitted model can be re-anchored at any later measurement boundary.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    history = np.asarray(history, dtype=float)
    order = model.order
    w = seasonal_difference(history, order.r, order.season_r, order.season)
    eps = css_residuals(w, model.phi, model.theta, model.season_phi, model.season_theta, order.season)
    return _forecast_from_context(model, history, eps, horizon)


def aic_order_search(
    y: np.ndarray, candidates: list[SarimaOrder], max_iter: int = 500
) -> tuple[SarimaOrder, SarimaModel]:
    """Fit every candidate order and pick the lowest AIC.

    Candidate orders must satisfy r + R <= 2 and P + Q <= 2. Ties go to the
    fewest coefficients, then to lexicographic order of (p, r, q, P, R, Q).
    """
    if not candidates:
        raise ValueError("no candidate orders")
    scored = []
    for order in candidates:
        if order.r + order.season_r > 2:
            raise ValueError(f"difference orders too high in {order.label()}")
        if order.season_p + order.season_q > 2:
            raise ValueError(f"seasonal orders too high in {order.label()}")
        model = sarima_fit(y, order, max_iter=max_iter)
        key = (
            model.aic,
            order.n_coeffs,
            (order.p, order.r, order.q, order.season_p, order.season_r, order.season_q),
        )
        scored.append((key, order, model))
    scored.sort(key=lambda item: item[0])
    _, best_order, best_model = scored[0]
    return best_order, best_model


def default_candidate_orders(season: int) -> list[SarimaOrder]:
    """Small search grid with single differencing and orders up to one."""
    out = []
    for p in (0, 1):
        for q in (0, 1):
            for sp in (0, 1):
                for sq in (0, 1):
                    out.append(
                        SarimaOrder(p=p, r=1, q=q, season_p=sp, season_r=1, season_q=sq, season=season)
                    )
    return out
