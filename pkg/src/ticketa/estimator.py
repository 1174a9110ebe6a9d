"""
Estimation of eta from transaction prices.

A one-tick price jump in the same direction as the previous one-tick jump is
a continuation, in the opposite direction an alternation. Daily estimates
``N_c / (2 N_a)`` are averaged over a period.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Callable, Iterable, Sequence

import numpy as np

from .classification import avg_spread_ticks
from .costs import DEFAULT_GRID, realized_vol
from .ingest import TradeRecord

GRID_RTOL = 1e-6


class GridError(ValueError):
    """A price change that is not a whole number of ticks."""


def extract_jumps(prices: Sequence[float], tick: float) -> np.ndarray:
    """Signed jump sizes in ticks between consecutive distinct prices.

    Raises
    ------
    GridError
        If a price change is not an integer multiple of ``tick`` within a
        relative tolerance of 1e-6.
    """
    if not tick > 0:
        raise ValueError(f"tick must be positive, got {tick}")
    p = np.asarray(prices, dtype=float)
    if len(p) < 2:
        return np.zeros(0, dtype=np.int64)
    moves = np.diff(p) / tick
    steps = np.rint(moves)
    off = np.abs(moves - steps) > GRID_RTOL * np.maximum(1.0, np.abs(moves))
    if off.any():
        i = int(np.argmax(off))
        raise GridError(f"non-grid price change {p[i]} -> {p[i + 1]} at tick {tick}")
    steps = steps.astype(np.int64)
    return steps[steps != 0]


def count_transitions(jumps: Sequence[int]) -> tuple[int, int]:
    """Return ``(N_c, N_a)`` over consecutive pairs of one-tick jumps.

    A jump of two ticks or more takes part in no pair, so the jump after it
    has no predecessor.
    """
    j = np.asarray(jumps, dtype=np.int64)
    if len(j) < 2:
        return 0, 0
    one = np.abs(j) == 1
    both = one[:-1] & one[1:]
    same = j[:-1] == j[1:]
    n_c = int(np.count_nonzero(both & same))
    n_a = int(np.count_nonzero(both & ~same))
    return n_c, n_a


def eta_day(n_c: int, n_a: int) -> float | None:
    """``N_c / (2 N_a)``, or ``None`` when there is no alternation."""
    if n_a <= 0:
        return None
    return n_c / (2 * n_a)


@dataclass
class DayStats:
    date: date
    n_c: int = 0
    n_a: int = 0
    eta: float | None = None
    spread: float | None = None
    M: int = 0
    sigma: float | None = None
    tick_values: frozenset = field(default_factory=frozenset)

    def row(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "N_c": self.n_c,
            "N_a": self.n_a,
            "eta": self.eta,
            "S": self.spread,
            "M": self.M,
            "sigma": self.sigma,
        }


@dataclass(frozen=True)
class EtaEstimate:
    eta_mean: float
    q25: float
    q75: float
    n_days: int


def day_stats(
    day: date,
    trades: Sequence[TradeRecord],
    tick_for_price: Callable[[float], float],
    grid: timedelta = DEFAULT_GRID,
) -> DayStats:
    """Statistics of one trading day.

    Counts, eta, spread and volatility are only computed when the whole day
    trades under a single tick value; otherwise just ``tick_values`` and ``M``
    are filled, which is enough for the day to be dropped at selection.
    """
    ticks = frozenset(tick_for_price(r.price) for r in trades)
    stats = DayStats(date=day, M=len(trades), tick_values=ticks)
    if len(ticks) != 1 or not trades:
        return stats
    (tick,) = ticks
    n_c, n_a = count_transitions(extract_jumps([r.price for r in trades], tick))
    stats.n_c, stats.n_a = n_c, n_a
    stats.eta = eta_day(n_c, n_a)
    stats.spread = avg_spread_ticks(trades, tick)
    vol = realized_vol(trades, grid)
    stats.sigma = vol.sigma if vol is not None else None
    return stats


def eta_period(days: Iterable[DayStats]) -> EtaEstimate | None:
    """Mean and 25%/75% quantiles (linear interpolation) of daily eta.

    Days without a defined eta are skipped; ``None`` if none is left.
    """
    values = np.array([d.eta for d in sorted(days, key=lambda d: d.date) if d.eta is not None])
    if values.size == 0:
        return None
    q25, q75 = np.quantile(values, [0.25, 0.75])
    return EtaEstimate(float(values.mean()), float(q25), float(q75), int(values.size))


def eta_hat(prices: Sequence[float], tick: float) -> float | None:
    """Single-window estimate straight from a price path."""
    return eta_day(*count_transitions(extract_jumps(prices, tick)))
