"""Microstructure analytics for tick-value changes.

Estimate eta from tick-by-tick trades, classify assets by tick regime and
cost balance, and forecast the effect of a tick value change.
"""

__version__ = "0.1.0"

from .classification import (
    Balance,
    Regime,
    Thresholds,
    avg_spread_ticks,
    classify_balance,
    classify_regime,
    suitable_tick,
)
from .costs import cost_report, fit_c, implicit_spread, market_order_cost, mm_edge, realized_vol
from .estimator import (
    DayStats,
    EtaEstimate,
    count_transitions,
    day_stats,
    eta_day,
    eta_hat,
    eta_period,
    extract_jumps,
)
from .ingest import (
    TSE_PHASES,
    TSE_SESSIONS,
    TSE_TICK_TABLES,
    CsvFormat,
    PhaseWindow,
    SessionSpec,
    TickTable,
    TradeRecord,
    load_directory,
    parse_trades,
    select_days,
    session_filter,
    split_days,
    tick_value,
)
from .predictor import (
    Prediction,
    TickChange,
    balance_forecast,
    classify_prediction,
    optimal_tick,
    predict_eta,
    predict_with_ci,
)
from .report import ScoreCard, aggregate_error, evaluate_phase_pair, render, score
from .simulate import SimConfig, continuation_prob, export_trades, sigma_for_rate, simulate
