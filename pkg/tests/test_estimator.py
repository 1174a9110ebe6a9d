from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ticketa.estimator import (
    DayStats,
    GridError,
    count_transitions,
    day_stats,
    eta_day,
    eta_hat,
    eta_period,
    extract_jumps,
)
from ticketa.ingest import split_days
from ticketa.simulate import SimConfig, sigma_for_rate, simulate

from conftest import make_trades


def test_extract_jumps_collapses_equal_prices():
    assert extract_jumps([100, 100, 101, 100], 1).tolist() == [1, -1]


def test_extract_jumps_multi_tick():
    assert extract_jumps([100, 102], 1).tolist() == [2]


def test_extract_jumps_off_grid():
    with pytest.raises(GridError, match="non-grid price change"):
        extract_jumps([100, 100.5], 1)


def test_extract_jumps_sub_unit_tick():
    prices = [2500.0, 2500.5, 2501.0, 2500.5, 2500.5, 2500.0]
    assert extract_jumps(prices, 0.5).tolist() == [1, 1, -1, -1]
    assert extract_jumps([1000.1, 1000.2, 1000.1], 0.1).tolist() == [1, -1]


@pytest.mark.parametrize(
    "jumps, expected",
    [
        ([1, -1, 1, -1], (0, 3)),
        ([1, 1, -1, -1], (2, 1)),
        ([1, 2, 1, 1], (1, 0)),
        ([-2, -1, -1], (1, 0)),
        ([1], (0, 0)),
        ([], (0, 0)),
    ],
)
def test_count_transitions(jumps, expected):
    assert count_transitions(jumps) == expected


@pytest.mark.parametrize("n_c, n_a, expected", [(0, 5, 0.0), (10, 10, 0.5), (3, 0, None), (0, 0, None)])
def test_eta_day(n_c, n_a, expected):
    assert eta_day(n_c, n_a) == expected


def _days_with(etas):
    return [DayStats(date=date(2014, 1, 6) + timedelta(days=i), eta=e) for i, e in enumerate(etas)]


def test_eta_period_constant():
    est = eta_period(_days_with([0.2, 0.2, 0.2]))
    assert est.eta_mean == pytest.approx(0.2)
    assert est.q25 == pytest.approx(0.2) and est.q75 == pytest.approx(0.2)
    assert est.n_days == 3


def test_eta_period_linear_quantiles():
    # order statistics 0.1..0.4 at positions 0..3; q25 sits at 0.75, q75 at 2.25
    est = eta_period(_days_with([0.4, 0.1, 0.3, 0.2]))
    assert est.eta_mean == pytest.approx(0.25)
    assert est.q25 == pytest.approx(0.175)
    assert est.q75 == pytest.approx(0.325)


def test_eta_period_skips_undefined_days():
    est = eta_period(_days_with([None, 0.3, None, 0.1]))
    assert est.n_days == 2 and est.eta_mean == pytest.approx(0.2)
    assert eta_period(_days_with([None, None])) is None
    assert eta_period([]) is None


one_tick_jumps = st.lists(st.sampled_from([-1, 1]), min_size=2, max_size=300)
any_jumps = st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), max_size=300)


@given(one_tick_jumps)
def test_counts_cover_all_pairs(jumps):
    n_c, n_a = count_transitions(jumps)
    assert n_c + n_a == len(jumps) - 1


@given(any_jumps)
def test_reversal_invariance(jumps):
    assert count_transitions(jumps) == count_transitions(jumps[::-1])
    assert count_transitions(jumps) == count_transitions([-j for j in jumps[::-1]])


@given(any_jumps)
def test_counts_match_brute_force(jumps):
    n_c = n_a = 0
    prev = None
    for j in jumps:
        if abs(j) != 1:
            prev = None
            continue
        if prev is not None:
            if j == prev:
                n_c += 1
            else:
                n_a += 1
        prev = j
    assert count_transitions(jumps) == (n_c, n_a)


@given(
    st.lists(st.integers(-2, 2), min_size=3, max_size=200),
    st.sampled_from([0.1, 0.5, 1.0, 5.0, 10.0]),
    st.sampled_from([0.1, 0.5, 3.0, 7.0, 1000.0]),
)
def test_scale_invariance(steps, tick, scale):
    base = 10_000
    prices = [round((base + s) * tick, 10) for s in np.cumsum(steps)]
    scaled = [p * scale for p in prices]
    assert eta_hat(prices, tick) == eta_hat(scaled, tick * scale)


def test_day_stats_single_tick_day():
    trades = make_trades([100, 101, 100, 101, 102, 102, 101])
    ds = day_stats(date(2014, 3, 3), trades, lambda p: 1.0)
    assert (ds.n_c, ds.n_a) == (1, 3)
    assert ds.eta == pytest.approx(1 / 6)
    assert ds.spread == 1.0
    assert ds.M == 7


def test_day_stats_multi_tick_day_not_estimated():
    trades = make_trades([4995, 5000, 5010])
    ds = day_stats(date(2014, 3, 3), trades, lambda p: 5.0 if p < 5000 else 10.0)
    assert ds.tick_values == frozenset({5.0, 10.0})
    assert ds.eta is None and ds.n_c == 0


def test_simulated_fifty_days():
    cfg = SimConfig(eta=0.30, alpha=1.0, sigma=sigma_for_rate(0.30, 1.0, 2000), initial_price=1000.0,
                    n_changes=100_000, trades_between=1.0, seed=3)
    days = split_days(simulate(cfg).trades)
    assert len(days) >= 50
    est = eta_period(day_stats(d, tr, lambda p: 1.0) for d, tr in days.items())
    assert abs(est.eta_mean - 0.30) <= 0.02
