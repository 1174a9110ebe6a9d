import sys
from datetime import date, datetime, timedelta

import pytest

from ticketa.ingest import TradeRecord
from ticketa.simulate import SimConfig, sigma_for_rate, simulate


def make_trades(prices, start=datetime(2014, 3, 3, 10, 0), step=timedelta(seconds=1), tick=1.0):
    """Trades at the given prices with a one-tick quote below/at each price."""
    return [
        TradeRecord(start + i * step, float(p), float(p) - tick, float(p))
        for i, p in enumerate(prices)
    ]


@pytest.fixture(scope="session")
def small_path():
    cfg = SimConfig(eta=0.25, alpha=1.0, sigma=sigma_for_rate(0.25, 1.0, 500),
                    initial_price=1000.0, n_changes=5000, trades_between=2.0, seed=7)
    return simulate(cfg)


def two_phase_stock(eta_a, eta_b, *, alpha_a=10.0, alpha_b=1.0, price_a=12000.0, price_b=7500.0,
                    days_a=30, days_b=30, changes_per_day=1000, trades_between=1.0, seed=0,
                    start_a=date(2013, 11, 25), start_b=date(2014, 1, 14)):
    """Trades of one synthetic stock: a phase-0 stretch then a phase-1 stretch.

    Defaults put the stock in the tick-10 band of the phase-0 table and the
    tick-1 band of the phase-1 table, a tick ratio of 10.
    """
    parts = []
    for k, (eta, alpha, price, days, start) in enumerate(
        ((eta_a, alpha_a, price_a, days_a, start_a), (eta_b, alpha_b, price_b, days_b, start_b))
    ):
        cfg = SimConfig(eta=eta, alpha=alpha, sigma=sigma_for_rate(eta, alpha, changes_per_day),
                        initial_price=price, n_changes=days * changes_per_day,
                        trades_between=trades_between, seed=seed * 2 + k, start_date=start)
        parts.extend(simulate(cfg).trades)
    return parts


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
