"""
Ex ante forecast of eta after a tick value change.

The forecast ``(eta0 + 0.1) * sqrt(alpha0 / alpha) - 0.1`` is only meaningful
while the asset stays large tick; above 1/2 it just signals that the spread
will open up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classification import DEFAULT_THRESHOLDS, Balance, Regime, Thresholds
from .estimator import EtaEstimate

SHIFT = 0.1
EFFICIENT_ETA = 0.5


@dataclass(frozen=True)
class TickChange:
    alpha0: float
    alpha: float

    def __post_init__(self):
        if not (self.alpha0 > 0 and self.alpha > 0):
            raise ValueError(f"tick values must be positive, got {self.alpha0} -> {self.alpha}")

    @property
    def ratio(self) -> float:
        return self.alpha0 / self.alpha


@dataclass(frozen=True)
class Prediction:
    eta_p: float
    ci: tuple[float, float]
    regime_p: Regime
    balance_p: Balance
    clamped: bool
    eta_unclamped: float


def predict_eta(eta0: float, alpha0: float, alpha: float) -> float:
    if alpha0 == alpha:
        return eta0
    return (eta0 + SHIFT) * math.sqrt(alpha0 / alpha) - SHIFT


def optimal_tick(eta0: float, alpha0: float) -> float:
    """Tick value at which the forecast eta is exactly 1/2."""
    return ((eta0 + SHIFT) / (EFFICIENT_ETA + SHIFT)) ** 2 * alpha0


def classify_prediction(eta_p: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Regime:
    if eta_p >= thresholds.predicted_small_min:
        return Regime.SMALL_TICK
    if eta_p < thresholds.predicted_large_max:
        return Regime.LARGE_TICK
    return Regime.AMBIGUOUS


def balance_forecast(eta_p: float, regime_p: Regime, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Balance:
    """Forecast balance; a spread expected to open up (small or ambiguous) is balanced."""
    if regime_p is not Regime.LARGE_TICK or eta_p >= thresholds.balanced_min:
        return Balance.BALANCED
    return Balance.MARKET_MAKER_FAVORABLE


def predict_with_ci(
    estimate: EtaEstimate | None,
    change: TickChange,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> Prediction | None:
    """Forecast eta with an interval mapped from the daily-eta quartiles.

    The point forecast comes from the mean daily eta. Since a mean need not
    sit between the quartiles, it is pulled onto the nearest interval bound
    when it falls outside (``clamped``). The regime forecast is taken on the
    unclamped value, the balance forecast on the reported one.
    """
    if estimate is None:
        return None
    lo = predict_eta(estimate.q25, change.alpha0, change.alpha)
    hi = predict_eta(estimate.q75, change.alpha0, change.alpha)
    raw = predict_eta(estimate.eta_mean, change.alpha0, change.alpha)
    eta_p = min(max(raw, lo), hi)
    regime_p = classify_prediction(raw, thresholds)
    balance_p = balance_forecast(eta_p, regime_p, thresholds)
    return Prediction(eta_p, (lo, hi), regime_p, balance_p, eta_p != raw, raw)
