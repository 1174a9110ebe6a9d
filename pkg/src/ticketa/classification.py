"""Average spread in ticks and tick-regime / cost-balance labels."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ingest import TradeRecord


class Regime(enum.Enum):
    LARGE_TICK = "LargeTick"
    SMALL_TICK = "SmallTick"
    AMBIGUOUS = "Ambiguous"


class Balance(enum.Enum):
    BALANCED = "Balanced"
    MARKET_MAKER_FAVORABLE = "MarketMakerFavorable"


@dataclass(frozen=True)
class Thresholds:
    """Classification cut-offs.

    ``large_tick_max``/``small_tick_min`` act on the average spread in ticks,
    ``balanced_min`` on eta, and the ``predicted_*`` pair on forecast eta.
    """

    large_tick_max: float = 1.5
    small_tick_min: float = 1.6
    balanced_min: float = 0.4
    predicted_large_max: float = 0.5
    predicted_small_min: float = 0.55


DEFAULT_THRESHOLDS = Thresholds()


def avg_spread_ticks(trades: Sequence[TradeRecord], tick: float) -> float | None:
    """Average pre-trade bid-ask spread, in ticks.

    Daily means of ``(ask - bid) / tick`` are averaged across days, so every
    day weighs the same whatever its activity. Returns ``None`` for an empty
    input.
    """
    if not trades:
        return None
    by_day = defaultdict(list)
    for r in trades:
        by_day[r.timestamp.date()].append(r.ask - r.bid)
    daily = [np.mean(v) / tick for _, v in sorted(by_day.items())]
    return float(np.mean(daily))


def classify_regime(spread: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Regime:
    if spread <= thresholds.large_tick_max:
        return Regime.LARGE_TICK
    if spread > thresholds.small_tick_min:
        return Regime.SMALL_TICK
    return Regime.AMBIGUOUS


def classify_balance(
    eta: float,
    regime: Regime = Regime.LARGE_TICK,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> Balance:
    """Small tick assets count as balanced; otherwise compare eta to the cut-off.

    Ambiguous-regime assets go through the eta rule like large tick ones.
    """
    if regime is Regime.SMALL_TICK or eta >= thresholds.balanced_min:
        return Balance.BALANCED
    return Balance.MARKET_MAKER_FAVORABLE


def suitable_tick(regime: Regime, eta: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> bool:
    """Large tick and balanced: one-tick spread with near-zero market-order cost."""
    return regime is Regime.LARGE_TICK and classify_balance(eta, regime, thresholds) is Balance.BALANCED
