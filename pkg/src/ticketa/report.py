"""
Tick-change study: per-phase statistics, forecasts, scoring and rendering.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classification import (
    DEFAULT_THRESHOLDS,
    Balance,
    Regime,
    Thresholds,
    classify_balance,
    classify_regime,
)
from .costs import DEFAULT_GRID
from .estimator import DayStats, EtaEstimate, day_stats, eta_period
from .ingest import (
    TSE_SESSIONS,
    PhaseWindow,
    SessionSpec,
    TickTable,
    TradeRecord,
    select_days,
    session_filter,
    split_days,
    tick_value,
)
from .predictor import Prediction, TickChange, predict_with_ci

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoreCard:
    stars: int
    ambiguous_stars: int
    relative_error: float | None

    def __post_init__(self):
        if self.stars + self.ambiguous_stars > 2:
            raise ValueError("at most two stars per row")

    @property
    def label(self) -> str:
        return "(*)" * self.ambiguous_stars + "*" * self.stars


def score(
    regime_p: Regime,
    balance_p: Balance,
    regime: Regime,
    balance: Balance,
    eta_p: float | None = None,
    eta: float | None = None,
) -> ScoreCard:
    """Compare forecast labels with realized ones.

    A regime comparison with ``Ambiguous`` on either side counts as correct
    and earns a bracketed star.
    """
    stars = ambiguous = 0
    if Regime.AMBIGUOUS in (regime_p, regime):
        ambiguous += 1
    elif regime_p is regime:
        stars += 1
    if balance_p is balance:
        stars += 1
    err = None
    if eta_p is not None and eta is not None and eta > 0:
        err = abs(eta_p - eta) / eta
    return ScoreCard(stars, ambiguous, err)


def aggregate_error(cards: Iterable[ScoreCard]) -> float | None:
    """Mean relative forecast error over rows where it is defined."""
    errs = [c.relative_error for c in cards if c.relative_error is not None]
    if not errs:
        return None
    return float(np.mean(errs))


@dataclass
class PhaseSummary:
    phase: str
    tick: float
    days: list[DayStats]
    eta: EtaEstimate | None
    spread: float | None
    regime: Regime | None
    balance: Balance | None


@dataclass
class StockPhaseRow:
    stock: str
    a: PhaseSummary
    b: PhaseSummary
    change: TickChange
    prediction: Prediction

    def as_dict(self) -> dict:
        p = self.prediction
        return {
            "stock": self.stock,
            "phase_a": self.a.phase,
            "phase_b": self.b.phase,
            "alpha_a": self.change.alpha0,
            "alpha_b": self.change.alpha,
            "S_a": self.a.spread,
            "eta_a": self.a.eta.eta_mean,
            "S_b": self.b.spread,
            "eta_b": self.b.eta.eta_mean,
            "regime_b": self.b.regime.value,
            "balance_b": self.b.balance.value,
            "eta_p": p.eta_p,
            "ci_low": p.ci[0],
            "ci_high": p.ci[1],
            "regime_p": p.regime_p.value,
            "balance_p": p.balance_p.value,
            "clamped": p.clamped,
        }


@dataclass
class PairEvaluation:
    phase_a: str
    phase_b: str
    results: list[tuple[StockPhaseRow, ScoreCard]] = field(default_factory=list)
    disqualified: dict[str, str] = field(default_factory=dict)

    def aggregate_error(self) -> float | None:
        return aggregate_error(card for _, card in self.results)


class Disqualified(Exception):
    pass


def phase_days(
    trades: Sequence[TradeRecord],
    phase: PhaseWindow,
    table: TickTable,
    sessions: SessionSpec = TSE_SESSIONS,
    grid: timedelta = DEFAULT_GRID,
) -> list[DayStats]:
    """Per-day statistics of the trades falling in ``phase`` after session trimming."""
    inside = [r for r in trades if r.timestamp.date() in phase]
    kept = session_filter(inside, sessions)

    def tick_for(price):
        return tick_value(price, table)

    return [day_stats(d, tr, tick_for, grid) for d, tr in split_days(kept).items()]


def _summary(phase, tick, days, thresholds) -> PhaseSummary:
    est = eta_period(days)
    spreads = [d.spread for d in days if d.spread is not None]
    spread = float(np.mean(spreads)) if spreads else None
    regime = classify_regime(spread, thresholds) if spread is not None else None
    balance = (
        classify_balance(est.eta_mean, regime, thresholds)
        if est is not None and regime is not None
        else None
    )
    return PhaseSummary(phase, tick, days, est, spread, regime, balance)


def evaluate_stock(
    stock: str,
    trades: Sequence[TradeRecord],
    phase_a: PhaseWindow,
    phase_b: PhaseWindow,
    tables: Mapping[str, TickTable],
    sessions: SessionSpec = TSE_SESSIONS,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    min_days: int = 10,
    grid: timedelta = DEFAULT_GRID,
) -> tuple[StockPhaseRow, ScoreCard]:
    """Forecast phase-B eta and labels of one stock from its phase-A data and score them.

    Raises
    ------
    Disqualified
        With the reason the stock does not enter the comparison.
    """
    days_a = phase_days(trades, phase_a, tables[phase_a.label], sessions, grid)
    days_b = phase_days(trades, phase_b, tables[phase_b.label], sessions, grid)
    if not days_a:
        raise Disqualified("no trades in period A")
    if not days_b:
        raise Disqualified("no trades in period B")

    # reference ticks: last trade of A, first trade of B
    last_a = max(days_a, key=lambda d: d.date)
    first_b = min(days_b, key=lambda d: d.date)
    trades_a = [r for r in trades if r.timestamp.date() == last_a.date]
    trades_b = [r for r in trades if r.timestamp.date() == first_b.date]
    trades_a = session_filter(trades_a, sessions)
    trades_b = session_filter(trades_b, sessions)
    ref_a = tick_value(trades_a[-1].price, tables[phase_a.label])
    ref_b = tick_value(trades_b[0].price, tables[phase_b.label])

    sel = select_days(days_a, days_b, (ref_a, ref_b), min_days)
    if not sel.qualifies:
        raise Disqualified(sel.reason)
    if not ref_b < ref_a:
        raise Disqualified("tick value not reduced")

    a = _summary(phase_a.label, ref_a, sel.days_a, thresholds)
    b = _summary(phase_b.label, ref_b, sel.days_b, thresholds)
    if a.eta is None:
        raise Disqualified("eta unavailable in period A")
    if b.eta is None:
        raise Disqualified("eta unavailable in period B")
    if a.regime is not Regime.LARGE_TICK:
        raise Disqualified("not large tick in period A")

    change = TickChange(ref_a, ref_b)
    pred = predict_with_ci(a.eta, change, thresholds)
    card = score(pred.regime_p, pred.balance_p, b.regime, b.balance, pred.eta_p, b.eta.eta_mean)
    return StockPhaseRow(stock, a, b, change, pred), card


def _evaluate_one(args):
    stock, *rest = args
    try:
        return stock, evaluate_stock(stock, *rest), None
    except Disqualified as exc:
        return stock, None, str(exc)


def evaluate_phase_pair(
    stocks: Mapping[str, Sequence[TradeRecord]],
    phase_a: PhaseWindow,
    phase_b: PhaseWindow,
    tables: Mapping[str, TickTable],
    sessions: SessionSpec = TSE_SESSIONS,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    min_days: int = 10,
    grid: timedelta = DEFAULT_GRID,
    max_workers: int | None = None,
) -> PairEvaluation:
    """Run :func:`evaluate_stock` over a data set.

    Stocks are independent; with ``max_workers`` > 1 they are spread over
    processes. Results come back sorted by stock id either way.
    """
    jobs = [
        (s, stocks[s], phase_a, phase_b, tables, sessions, thresholds, min_days, grid)
        for s in sorted(stocks)
    ]
    if max_workers and max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(_evaluate_one, jobs))
    else:
        outcomes = [_evaluate_one(j) for j in jobs]

    out = PairEvaluation(phase_a.label, phase_b.label)
    for stock, result, reason in outcomes:
        if result is None:
            log.info("%s disqualified: %s", stock, reason)
            out.disqualified[stock] = reason
        else:
            out.results.append(result)
    return out


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_YES_NO = {
    Regime.LARGE_TICK.value: "Yes",
    Regime.SMALL_TICK.value: "No",
    Regime.AMBIGUOUS.value: "Ambiguous",
    Balance.BALANCED.value: "Yes",
    Balance.MARKET_MAKER_FAVORABLE.value: "No",
}

PREDICTION_COLUMNS = (
    "stars", "stock", "S_a", "eta_a", "S_b", "eta_b",
    "LTick_b", "Bal_b", "eta_p", "LTick_p", "Bal_p", "rel_err",
)

CLASSIFY_COLUMNS = ("stock", "S", "eta", "LTick", "Bal")


def _fmt2(x) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.2f}"


def format_prediction(eta_p: float, ci: tuple[float, float]) -> str:
    """``"0.26 [0.19,0.27]"`` style cell."""
    return f"{eta_p:.2f} [{ci[0]:.2f},{ci[1]:.2f}]"


def prediction_cells(row: StockPhaseRow, card: ScoreCard) -> dict[str, str]:
    p = row.prediction
    return {
        "stars": card.label,
        "stock": row.stock,
        "S_a": _fmt2(row.a.spread),
        "eta_a": _fmt2(row.a.eta.eta_mean),
        "S_b": _fmt2(row.b.spread),
        "eta_b": _fmt2(row.b.eta.eta_mean),
        "LTick_b": _YES_NO[row.b.regime.value],
        "Bal_b": _YES_NO[row.b.balance.value],
        "eta_p": format_prediction(p.eta_p, p.ci),
        "LTick_p": _YES_NO[p.regime_p.value],
        "Bal_p": _YES_NO[p.balance_p.value],
        "rel_err": _fmt2(card.relative_error),
    }


def classify_cells(stock: str, spread: float | None, eta: float | None,
                   regime: Regime | None, balance: Balance | None) -> dict[str, str]:
    return {
        "stock": stock,
        "S": _fmt2(spread),
        "eta": _fmt2(eta),
        "LTick": _YES_NO[regime.value] if regime else "",
        "Bal": _YES_NO[balance.value] if balance else "",
    }


def _structured(obj):
    if isinstance(obj, (Regime, Balance)):
        return obj.value
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def render(rows: Sequence, fmt: str = "table", columns: Sequence[str] | None = None,
           out=None) -> str | None:
    """Render result rows.

    Parameters
    ----------
    rows : sequence
        ``(StockPhaseRow, ScoreCard)`` pairs, or already formatted dicts.
    fmt : {"table", "csv", "json"}
        Aligned plain text, comma separated, or a JSON array. Pairs are
        rendered with 2-decimal cells in the first two and full precision in
        JSON.
    out : text file object, optional
        Destination; when omitted the rendering is returned as a string.
    """
    if columns is None:
        columns = PREDICTION_COLUMNS
    buf = io.StringIO() if out is None else out

    if fmt == "json":
        objs = []
        for r in rows:
            if isinstance(r, tuple):
                row, card = r
                d = row.as_dict()
                d.update(stars=card.stars, ambiguous_stars=card.ambiguous_stars,
                         relative_error=card.relative_error)
                objs.append({k: _structured(v) for k, v in d.items()})
            else:
                objs.append({k: _structured(v) for k, v in r.items()})
        json.dump(objs, buf, indent=2, ensure_ascii=False)
        buf.write("\n")
    else:
        cells = [prediction_cells(*r) if isinstance(r, tuple) else r for r in rows]
        if fmt == "csv":
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(columns)
            for c in cells:
                w.writerow([c.get(k, "") for k in columns])
        elif fmt == "table":
            widths = [max([len(k)] + [len(str(c.get(k, ""))) for c in cells]) for k in columns]
            buf.write("  ".join(k.ljust(w) for k, w in zip(columns, widths)).rstrip() + "\n")
            for c in cells:
                line = "  ".join(str(c.get(k, "")).ljust(w) for k, w in zip(columns, widths))
                buf.write(line.rstrip() + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue() if out is None else None


def plot_data(row: StockPhaseRow) -> list[tuple[str, float, str]]:
    """``(date, value, series)`` records of daily eta around a tick change.

    Daily estimates of both periods, each period's mean as a two-point
    horizontal line, and the forecast as a line over period B.
    """
    recs: list[tuple[str, float, str]] = []
    for summary in (row.a, row.b):
        days = sorted((d for d in summary.days if d.eta is not None), key=lambda d: d.date)
        for d in days:
            recs.append((d.date.isoformat(), d.eta, f"daily_eta_{summary.phase}"))
        if days:
            for d in (days[0], days[-1]):
                recs.append((d.date.isoformat(), summary.eta.eta_mean, f"mean_eta_{summary.phase}"))
    days_b = sorted((d for d in row.b.days if d.eta is not None), key=lambda d: d.date)
    if days_b:
        for d in (days_b[0], days_b[-1]):
            recs.append((d.date.isoformat(), row.prediction.eta_p, f"forecast_eta_{row.b.phase}"))
    return recs


def render_plot_data(records: Sequence[tuple[str, float, str]], out=None) -> str | None:
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("date", "value", "series"))
    for date_s, value, series in records:
        w.writerow((date_s, repr(float(value)), series))
    return buf.getvalue() if out is None else None
