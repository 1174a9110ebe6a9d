"""
Trading-cost quantities of a large tick asset.

Prices are in currency units. All arithmetic is plain operators, so
``Fraction`` or ``Decimal`` inputs stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import timedelta
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .ingest import TradeRecord

DEFAULT_GRID = timedelta(minutes=5)


class VolStat(NamedTuple):
    sigma: float
    M: int


@dataclass(frozen=True)
class CostReport:
    market_order_cost: float
    implicit_spread: float
    vol_per_trade: float | None
    c_hat: float
    mm_edge: float | None
    spread_widening: bool


def market_order_cost(alpha, eta):
    """Average cost of a unit market order relative to the efficient price.

    Negative when ``eta > 1/2``; market makers would then widen the spread
    (see :attr:`CostReport.spread_widening`).
    """
    return alpha / 2 - eta * alpha


def implicit_spread(alpha, eta):
    """Width of the uncertainty zone, ``2 eta alpha``."""
    return 2 * eta * alpha


def realized_vol(trades: Sequence[TradeRecord], grid: timedelta = DEFAULT_GRID) -> VolStat | None:
    """Realized volatility of one day from last-trade prices on a time grid.

    The grid starts at the first trade and steps by ``grid`` up to the last
    trade; each grid point takes the last price at or before it. Returns
    ``None`` when fewer than two grid points fit.
    """
    if not trades:
        return None
    t0 = trades[0].timestamp
    secs = np.array([(r.timestamp - t0).total_seconds() for r in trades])
    prices = np.array([r.price for r in trades], dtype=float)
    step = grid.total_seconds()
    points = np.arange(0.0, secs[-1] + 1e-9, step)
    if len(points) < 2:
        return None
    idx = np.searchsorted(secs, points, side="right") - 1
    sampled = prices[idx]
    sigma = float(np.sqrt(np.sum(np.diff(sampled) ** 2)))
    return VolStat(sigma, len(trades))


def fit_c(observations: Iterable[tuple[float, float]]) -> float | None:
    """Least-squares slope through the origin of ``eta*alpha`` on ``sigma/sqrt(M)``.

    Observations are ``(eta_alpha, vol_per_trade)`` pairs.
    """
    obs = np.asarray(list(observations), dtype=float)
    if obs.ndim != 2 or len(obs) < 2:
        return None
    y, x = obs[:, 0], obs[:, 1]
    sxx = float(np.dot(x, x))
    if sxx == 0.0:
        return None
    return float(np.dot(x, y) / sxx)


def mm_edge(S_ticks, alpha, sigma, M, c=1.0):
    """Market-maker P&L per trade, ``S/2 - c sigma / sqrt(M)`` with S in currency."""
    if M < 1:
        raise ValueError("M must be at least 1")
    return S_ticks * alpha / 2 - c * sigma / math.sqrt(M)


def cost_report(alpha, eta, S_ticks=1.0, vol: VolStat | None = None, c: float = 1.0) -> CostReport:
    vpt = vol.sigma / math.sqrt(vol.M) if vol is not None and vol.M > 0 else None
    edge = mm_edge(S_ticks, alpha, vol.sigma, vol.M, c) if vpt is not None else None
    moc = market_order_cost(alpha, eta)
    return CostReport(
        market_order_cost=moc,
        implicit_spread=implicit_spread(alpha, eta),
        vol_per_trade=vpt,
        c_hat=c,
        mm_edge=edge,
        spread_widening=moc < 0,
    )
