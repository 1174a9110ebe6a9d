import math

import pytest
from hypothesis import assume, given, strategies as st

from ticketa.classification import Balance, Regime
from ticketa.estimator import EtaEstimate
from ticketa.predictor import (
    TickChange,
    balance_forecast,
    classify_prediction,
    optimal_tick,
    predict_eta,
    predict_with_ci,
)

etas = st.floats(0.0, 1.0, allow_nan=False)
ticks = st.floats(1e-3, 1e5, allow_nan=False)


def test_predict_canon():
    assert predict_eta(0.06, 5, 1) == pytest.approx(0.16 * math.sqrt(5) - 0.1)
    assert round(predict_eta(0.06, 5, 1), 4) == 0.2578


def test_predict_aeon():
    assert round(predict_eta(0.12, 1, 0.5), 4) == 0.2111


@given(etas, ticks)
def test_identity(eta0, alpha):
    assert predict_eta(eta0, alpha, alpha) == eta0


@given(etas, ticks, ticks, st.floats(1e-3, 1e3))
def test_depends_on_ratio_only(eta0, a0, a, k):
    assert predict_eta(eta0, a0, a) == pytest.approx(predict_eta(eta0, a0 * k, a * k), rel=1e-12, abs=1e-12)


@given(etas, ticks, ticks, ticks)
def test_decreasing_in_new_tick(eta0, a0, a1, a2):
    lo, hi = sorted((a1, a2))
    assume(hi > lo * (1 + 1e-9))
    assert predict_eta(eta0, a0, lo) > predict_eta(eta0, a0, hi)


@given(etas, etas, ticks, ticks)
def test_increasing_in_eta0(e1, e2, a0, a):
    lo, hi = sorted((e1, e2))
    assume(hi - lo > 1e-9)
    assert predict_eta(lo, a0, a) < predict_eta(hi, a0, a)


def test_optimal_tick_values():
    assert optimal_tick(0.5, 1.0) == pytest.approx(1.0)
    assert round(optimal_tick(0.06, 5.0), 4) == 0.3556


@given(etas, ticks)
def test_optimal_tick_roundtrip(eta0, a0):
    assert predict_eta(eta0, a0, optimal_tick(eta0, a0)) == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize(
    "eta_p, regime",
    [(0.66, Regime.SMALL_TICK), (0.26, Regime.LARGE_TICK), (0.53, Regime.AMBIGUOUS),
     (0.5, Regime.AMBIGUOUS), (0.55, Regime.SMALL_TICK), (0.4999, Regime.LARGE_TICK)],
)
def test_classify_prediction(eta_p, regime):
    assert classify_prediction(eta_p) is regime


@pytest.mark.parametrize(
    "eta_p, regime, balance",
    [
        (0.66, Regime.SMALL_TICK, Balance.BALANCED),
        (0.26, Regime.LARGE_TICK, Balance.MARKET_MAKER_FAVORABLE),
        (0.46, Regime.LARGE_TICK, Balance.BALANCED),
        (0.53, Regime.AMBIGUOUS, Balance.BALANCED),
    ],
)
def test_balance_forecast(eta_p, regime, balance):
    assert balance_forecast(eta_p, regime) is balance


def test_predict_with_ci_inside():
    p = predict_with_ci(EtaEstimate(0.06, 0.04, 0.08, 30), TickChange(5, 1))
    assert p.eta_p == pytest.approx(0.2578, abs=1e-4)
    assert p.ci == pytest.approx((0.2130, 0.3025), abs=1e-4)
    assert not p.clamped
    assert p.regime_p is Regime.LARGE_TICK
    assert p.balance_p is Balance.MARKET_MAKER_FAVORABLE


@pytest.mark.parametrize("ratio", [1.0, 2.0, 5.0, 10.0])
def test_predict_with_ci_mean_below_q25_clamps(ratio):
    p = predict_with_ci(EtaEstimate(0.04, 0.042, 0.06, 30), TickChange(ratio, 1.0))
    assert p.clamped and p.eta_p == p.ci[0]


def test_predict_with_ci_clamps_to_upper_bound():
    p = predict_with_ci(EtaEstimate(0.08, 0.035, 0.051, 30), TickChange(10, 1))
    assert p.eta_unclamped == pytest.approx(0.4692, abs=1e-4)
    assert p.ci == pytest.approx((0.3269, 0.3775), abs=1e-4)
    assert p.clamped and p.eta_p == p.ci[1]


def test_regime_uses_unclamped_value():
    # raw forecast 0.35 * 2 - 0.1 = 0.6 is small tick; the interval tops out at 0.4
    p = predict_with_ci(EtaEstimate(0.25, 0.10, 0.15, 30), TickChange(4, 1))
    assert p.eta_unclamped == pytest.approx(0.6) and p.eta_p == pytest.approx(0.4)
    assert p.regime_p is Regime.SMALL_TICK
    assert p.balance_p is Balance.BALANCED


def test_predict_with_ci_unavailable():
    assert predict_with_ci(None, TickChange(5, 1)) is None


@given(etas, etas, etas, ticks, ticks)
def test_ci_ordered_and_clamp_consistent(m, q1, q2, a0, a):
    lo, hi = sorted((q1, q2))
    p = predict_with_ci(EtaEstimate(m, lo, hi, 10), TickChange(a0, a))
    assert p.ci[0] <= p.ci[1]
    assert p.ci[0] <= p.eta_p <= p.ci[1]
    if p.clamped:
        assert p.eta_p in p.ci


def test_tick_change_validation():
    with pytest.raises(ValueError):
        TickChange(0, 1)
    assert TickChange(5, 1).ratio == 5
