import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loadcast.sarima import (
    DEFAULT_ORDER,
    SarimaModel,
    SarimaOrder,
    aic_order_search,
    css_loss,
    default_candidate_orders,
    sarima_fit,
    sarima_forecast,
    sarima_forecast_from,
    seasonal_difference,
)

import oracles

SMALL = SarimaOrder(1, 1, 1, 1, 1, 1, season=12)


def integrate(w: np.ndarray, order: SarimaOrder) -> np.ndarray:
    """Invert the differencing: seasonal sums first, then cumulative sums."""
    s = order.season
    u = np.asarray(w, dtype=float)
    for _ in range(order.season_r):
        acc = np.zeros(u.size + s)
        for i in range(u.size):
            acc[s + i] = u[i] + acc[i]
        u = acc
    for _ in range(order.r):
        u = np.concatenate([[0.0], np.cumsum(u)])
    return u


def pure_ar_series(order, phi, sphi, n_w, seed=0):
    """Differenced series driven only by its own past after a random seed span.

    All innovations from css_start onward are exactly zero, which matches the
    estimator's conditioning assumption, so the true-coefficient residuals
    vanish identically.
    """
    rng = np.random.default_rng(seed)
    s = order.season
    t0 = order.css_start
    w = np.zeros(n_w)
    w[:t0] = rng.normal(0.0, 0.3, t0)
    for t in range(t0, n_w):
        w[t] = phi * w[t - 1] + sphi * w[t - s] - phi * sphi * w[t - s - 1]
    return integrate(w, order), w


def arma_series(order, phi, theta, sphi, stheta, n_w, sigma, seed=0):
    """Integrated multiplicative seasonal ARMA with Gaussian innovations."""
    rng = np.random.default_rng(seed)
    s = order.season
    eps = rng.normal(0.0, sigma, n_w)
    w = np.zeros(n_w)
    for t in range(n_w):
        v = eps[t]
        if t >= 1:
            v += phi * w[t - 1] - theta * eps[t - 1]
        if t >= s:
            v += sphi * w[t - s] - stheta * eps[t - s]
        if t >= s + 1:
            v += -phi * sphi * w[t - s - 1] + theta * stheta * eps[t - s - 1]
        w[t] = v
    return integrate(w, order)


def model_with(order, phi, theta, sphi, stheta):
    return SarimaModel(
        order=order,
        phi=np.array([phi], dtype=float),
        theta=np.array([theta], dtype=float),
        season_phi=np.array([sphi], dtype=float),
        season_theta=np.array([stheta], dtype=float),
        css=0.0,
        n_eff=1,
        converged=True,
        y_tail=np.zeros(1),
        eps_tail=np.zeros(1),
    )


class TestDifferencing:
    @given(
        data=st.lists(st.integers(-50, 50), min_size=30, max_size=80),
        r=st.integers(0, 1),
        sr=st.integers(0, 1),
    )
    @settings(max_examples=50, deadline=None)
    def test_matches_oracle(self, data, r, sr):
        y = np.array(data, dtype=float)
        got = seasonal_difference(y, r, sr, season=12)
        expected = oracles.oracle_seasonal_difference(y, r, sr, 12)
        np.testing.assert_array_equal(got, expected)

    def test_lengths(self):
        y = np.arange(40.0)
        assert seasonal_difference(y, 1, 1, 12).size == 40 - 1 - 12
        assert seasonal_difference(y, 0, 0, 12).size == 40

    def test_linear_trend_vanishes(self):
        y = 3.0 + 0.5 * np.arange(60)
        np.testing.assert_allclose(seasonal_difference(y, 1, 1, 12), 0.0, atol=1e-12)

    def test_seasonal_pattern_vanishes(self):
        pattern = np.sin(2 * np.pi * np.arange(12) / 12)
        y = np.tile(pattern, 6)
        np.testing.assert_allclose(seasonal_difference(y, 1, 1, 12), 0.0, atol=1e-12)

    def test_integrate_round_trip(self):
        rng = np.random.default_rng(1)
        w = rng.normal(0.0, 1.0, 50)
        y = integrate(w, SMALL)
        np.testing.assert_allclose(seasonal_difference(y, 1, 1, 12), w, atol=1e-12)


class TestCssResiduals:
    @given(
        phi=st.floats(-0.8, 0.8),
        theta=st.floats(-0.8, 0.8),
        sphi=st.floats(-0.8, 0.8),
        stheta=st.floats(-0.8, 0.8),
    )
    @settings(max_examples=30, deadline=None)
    def test_loss_matches_oracle(self, phi, theta, sphi, stheta):
        rng = np.random.default_rng(5)
        y = rng.uniform(0.0, 2.0, 8 * 12)
        got = css_loss(model_with(SMALL, phi, theta, sphi, stheta), y)
        w = oracles.oracle_seasonal_difference(y, 1, 1, 12)
        eps, t0 = oracles.oracle_css_residuals(w, [phi], [theta], [sphi], [stheta], 12)
        assert got == pytest.approx(float(np.sum(eps[t0:] ** 2)), rel=1e-10)

    def test_zero_coefficients_leave_differenced_series(self):
        rng = np.random.default_rng(6)
        y = rng.uniform(0.0, 2.0, 6 * 12)
        w = oracles.oracle_seasonal_difference(y, 1, 1, 12)
        t0 = SMALL.css_start
        got = css_loss(model_with(SMALL, 0.0, 0.0, 0.0, 0.0), y)
        assert got == pytest.approx(float(np.sum(w[t0:] ** 2)), rel=1e-12)

    def test_exact_model_has_zero_residuals(self):
        y, _ = pure_ar_series(SMALL, 0.9, 0.8, n_w=30 * 12, seed=3)
        assert css_loss(model_with(SMALL, 0.9, 0.3, 0.8, 0.2), y) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_wrong_coefficients_leave_residuals(self):
        y, _ = pure_ar_series(SMALL, 0.9, 0.8, n_w=30 * 12, seed=3)
        assert css_loss(model_with(SMALL, 0.2, 0.3, 0.8, 0.2), y) > 1e-4


class TestFit:
    def test_recovers_coefficients(self):
        y = arma_series(SMALL, 0.5, 0.3, 0.4, 0.2, n_w=60 * 12, sigma=0.2, seed=0)
        model = sarima_fit(y, SMALL)
        assert model.converged
        assert model.phi[0] == pytest.approx(0.5, abs=0.1)
        assert model.theta[0] == pytest.approx(0.3, abs=0.1)
        assert model.season_phi[0] == pytest.approx(0.4, abs=0.1)
        assert model.season_theta[0] == pytest.approx(0.2, abs=0.1)

    def test_needs_enough_data(self):
        with pytest.raises(ValueError):
            sarima_fit(np.ones(3 * 12), SMALL)

    def test_aic_definition(self):
        y = arma_series(SMALL, 0.4, 0.2, 0.3, 0.1, n_w=40 * 12, sigma=0.1, seed=8)
        model = sarima_fit(y, SMALL)
        expected = model.n_eff * np.log(model.css / model.n_eff) + 2 * (4 + 1)
        assert model.aic == pytest.approx(expected, rel=1e-12)

    def test_stores_forecast_context(self):
        y = arma_series(SMALL, 0.4, 0.2, 0.3, 0.1, n_w=40 * 12, sigma=0.1, seed=8)
        model = sarima_fit(y, SMALL)
        np.testing.assert_array_equal(model.y_tail, y[-27:])


class TestForecast:
    def test_zero_coefficients_reduce_to_seasonal_persistence(self):
        rng = np.random.default_rng(9)
        y = rng.uniform(0.5, 1.5, 8 * 12)
        model = model_with(SMALL, 0.0, 0.0, 0.0, 0.0)
        got = sarima_forecast_from(model, y, horizon=1)
        assert got[0] == pytest.approx(y[-1] + y[-12] - y[-13], rel=1e-12)

    def test_zero_coefficient_chaining(self):
        rng = np.random.default_rng(14)
        y = rng.uniform(0.5, 1.5, 8 * 12)
        model = model_with(SMALL, 0.0, 0.0, 0.0, 0.0)
        got = sarima_forecast_from(model, y, horizon=15)
        # chain the recursion by hand, feeding forecasts back in
        ext = list(y)
        for _ in range(15):
            ext.append(ext[-1] + ext[-12] - ext[-13])
        np.testing.assert_allclose(got, ext[-15:], rtol=1e-12)

    def test_forecast_from_training_history_matches_stored_tails(self):
        y = arma_series(SMALL, 0.5, 0.2, 0.3, 0.1, n_w=30 * 12, sigma=0.1, seed=10)
        model = sarima_fit(y, SMALL)
        np.testing.assert_allclose(
            sarima_forecast(model, 24), sarima_forecast_from(model, y, 24), rtol=1e-9
        )

    def test_exact_process_forecast_continues_it(self):
        # innovations past the seed span are zero, so the true-coefficient
        # forecast must reproduce the future of the process exactly
        y, _ = pure_ar_series(SMALL, 0.9, 0.8, n_w=48, seed=11)
        model = model_with(SMALL, 0.9, 0.0, 0.8, 0.0)
        split = 40
        forecast = sarima_forecast_from(model, y[:split], horizon=12)
        np.testing.assert_allclose(forecast, y[split : split + 12], atol=1e-9)

    def test_horizon_shapes(self):
        y = arma_series(SMALL, 0.3, 0.1, 0.2, 0.1, n_w=20 * 12, sigma=0.1, seed=12)
        model = sarima_fit(y, SMALL)
        assert sarima_forecast(model, 5).shape == (5,)
        assert sarima_forecast(model, 30).shape == (30,)

    def test_rejects_empty_horizon(self):
        model = model_with(SMALL, 0.0, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            sarima_forecast(model, 0)


class TestOrderSearch:
    def test_matches_manual_selection_rule(self):
        y = arma_series(SMALL, 0.6, 0.0, 0.3, 0.0, n_w=40 * 12, sigma=0.15, seed=13)
        orders = [
            SarimaOrder(1, 1, 1, 1, 1, 1, season=12),
            SarimaOrder(1, 1, 0, 1, 1, 0, season=12),
        ]
        best_order, best_model = aic_order_search(y, orders)
        fits = {o: sarima_fit(y, o) for o in orders}
        manual = min(
            orders,
            key=lambda o: (
                fits[o].aic,
                o.n_coeffs,
                (o.p, o.r, o.q, o.season_p, o.season_r, o.season_q),
            ),
        )
        assert best_order == manual
        assert best_model.aic == fits[manual].aic

    def test_rejects_excessive_differencing(self):
        y = arma_series(SMALL, 0.3, 0.0, 0.2, 0.0, n_w=30 * 12, sigma=0.1, seed=15)
        with pytest.raises(ValueError):
            aic_order_search(y, [SarimaOrder(1, 2, 1, 1, 1, 1, season=12)])

    def test_default_candidates_bounded(self):
        for order in default_candidate_orders(12):
            assert order.r + order.season_r <= 2
            assert order.season_p + order.season_q <= 2

    def test_label(self):
        assert DEFAULT_ORDER.label() == "(1,1,1)(1,1,1)96"


class TestOrderValidation:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            SarimaOrder(p=-1)

    def test_css_start(self):
        assert SMALL.css_start == 13
        assert DEFAULT_ORDER.css_start == 97
