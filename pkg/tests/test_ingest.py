import io
from datetime import date, datetime, time, timedelta

import pytest
from hypothesis import given, strategies as st

from ticketa.estimator import DayStats
from ticketa.ingest import (
    TSE_SESSIONS,
    TSE_TICK_TABLES,
    ConfigError,
    CsvFormat,
    PhaseWindow,
    SessionSpec,
    TickTable,
    TooManyRowErrors,
    TradeRecord,
    load_directory,
    parse_trades,
    select_days,
    session_filter,
    split_days,
    tick_value,
    write_trades,
)
from ticketa.simulate import SimConfig, export_trades, sigma_for_rate, simulate

GOOD = b"""timestamp,price,bid,ask
2014-03-03T10:00:00.123,4000,3995,4000
2014-03-03T10:00:01.500,3995,3995,4000
2014-03-03T10:00:02.000,4000,3995,4000
"""


def test_parse_three_rows():
    res = parse_trades(GOOD)
    assert len(res.records) == 3
    assert res.errors == []
    assert res.records[0] == TradeRecord(datetime(2014, 3, 3, 10, 0, 0, 123000), 4000.0, 3995.0, 4000.0)


def test_crossed_quote_is_row_error():
    data = GOOD + b"2014-03-03T10:00:03,4000,4005,4000\n"
    res = parse_trades(data, max_error_rate=1.0)
    assert len(res.records) == 3
    assert [(e.line, e.reason) for e in res.errors] == [(5, "crossed quote")]


def test_error_cap_rejects_file():
    data = GOOD + b"not-a-time,1,1,1\n"
    with pytest.raises(TooManyRowErrors) as exc:
        parse_trades(data)
    assert exc.value.errors[0].line == 5


def test_error_cap_tolerates_rare_glitch():
    rows = [f"2014-03-03T10:{i // 60:02d}:{i % 60:02d},100,99,100" for i in range(2000)]
    rows[1000] = "2014-03-03T10:16:40,abc,99,100"
    data = ("timestamp,price,bid,ask\n" + "\n".join(rows) + "\n").encode()
    res = parse_trades(data)
    assert len(res.records) == 1999
    assert res.errors[0].line == 1002
    assert res.errors[0].reason == "unparseable decimal"


def test_missing_column_is_fatal():
    with pytest.raises(ConfigError, match="ask"):
        parse_trades(b"timestamp,price,bid\n2014-03-03T10:00:00,1,1\n")


def test_custom_format_and_sorting():
    fmt = CsvFormat(timestamp="time", price="px", bid="b", ask="a", delimiter=";",
                    timestamp_format="%Y%m%d %H:%M:%S.%f")
    data = b"time;px;b;a\n20140303 10:00:02.000000;101;100;101\n20140303 10:00:01.000000;100;100;101\n"
    recs = parse_trades(data, fmt).records
    assert [r.price for r in recs] == [100.0, 101.0]


def test_roundtrip_custom_format():
    fmt = CsvFormat(delimiter="\t", timestamp_format="%Y-%m-%d %H:%M:%S.%f")
    recs = [TradeRecord(datetime(2014, 1, 6, 10, 0, 0, 1), 0.1 * 3, 0.2, 0.30000000000000004)]
    buf = io.StringIO()
    write_trades(recs, buf, fmt)
    assert parse_trades(io.StringIO(buf.getvalue()), fmt).records == recs


def test_million_row_roundtrip():
    cfg = SimConfig(eta=0.2, alpha=0.5, sigma=sigma_for_rate(0.2, 0.5, 3000), initial_price=2500.0,
                    n_changes=200_000, trades_between=4.0, seed=11)
    path = simulate(cfg)
    assert len(path.trades) >= 1_000_000
    back = parse_trades(export_trades(path)).records
    assert back == path.trades


# -- sessions ---------------------------------------------------------------

def _at(h, m, s=0, us=0):
    return TradeRecord(datetime(2014, 3, 3, h, m, s, us), 100.0, 99.0, 100.0)


def test_session_filter_trims_first_and_last_hour():
    trades = [_at(9, 30), _at(10, 30), _at(12, 0), _at(12, 45), _at(14, 30)]
    kept = session_filter(trades, TSE_SESSIONS)
    assert [r.timestamp.time() for r in kept] == [time(10, 30), time(12, 45)]


def test_session_filter_boundaries():
    trades = [_at(10, 0), _at(13, 59, 59, 999999), _at(14, 0)]
    kept = session_filter(trades, TSE_SESSIONS)
    assert [r.timestamp.time() for r in kept] == [time(10, 0), time(13, 59, 59, 999999)]


def test_session_filter_no_trim_keeps_session_trades():
    spec = SessionSpec(TSE_SESSIONS.sessions)
    trades = [_at(9, 0), _at(10, 30), _at(12, 30), _at(14, 59)]
    assert session_filter(trades, spec) == trades


@given(st.lists(st.integers(0, 24 * 3600 - 1), max_size=50))
def test_session_filter_idempotent(secs):
    trades = sorted(
        (TradeRecord(datetime(2014, 3, 3) + timedelta(seconds=s), 1.0, 1.0, 1.0) for s in secs),
        key=lambda r: r.timestamp,
    )
    once = session_filter(trades, TSE_SESSIONS)
    assert session_filter(once, TSE_SESSIONS) == once
    assert all(r in trades for r in once)


def test_session_spec_validation():
    with pytest.raises(ConfigError):
        SessionSpec(((time(12, 0), time(11, 0)),))
    with pytest.raises(ConfigError):
        SessionSpec(((time(9, 0), time(11, 0)), (time(10, 0), time(12, 0))))
    with pytest.raises(ConfigError):
        SessionSpec(((time(9, 0), time(10, 0)),), trim_head=timedelta(hours=1))


def test_phase_window():
    p = PhaseWindow("1", date(2014, 1, 14), date(2014, 7, 21))
    assert date(2014, 1, 14) in p and date(2014, 7, 21) in p
    assert date(2014, 7, 22) not in p
    with pytest.raises(ConfigError):
        PhaseWindow("x", date(2014, 2, 1), date(2014, 1, 1))


# -- tick tables ------------------------------------------------------------

@pytest.mark.parametrize("phase, expected", [("0", 5.0), ("1", 1.0), ("2", 0.5)])
def test_tick_value_at_4000(phase, expected):
    assert tick_value(4000, TSE_TICK_TABLES[phase]) == expected


@pytest.mark.parametrize(
    "price, ticks",
    [
        (999, (1, 1, 0.1)),
        (1000, (1, 1, 0.5)),
        (5000, (10, 1, 1)),
        (9999, (10, 1, 1)),
        (10000, (10, 5, 5)),
        (30000, (50, 5, 5)),
        (60_000_000, (100000, 10000, 10000)),
    ],
)
def test_tick_table_bands(price, ticks):
    assert tuple(tick_value(price, TSE_TICK_TABLES[p]) for p in "012") == ticks


@given(st.floats(0.01, 1e8), st.floats(0.01, 1e8), st.sampled_from("012"))
def test_tick_value_monotone(p1, p2, phase):
    lo, hi = sorted((p1, p2))
    t = TSE_TICK_TABLES[phase]
    assert tick_value(lo, t) <= tick_value(hi, t)


def test_tick_table_validation():
    with pytest.raises(ConfigError):
        TickTable(((100, 1), (50, 2), (float("inf"), 5)))
    with pytest.raises(ConfigError):
        TickTable(((100, 1), (200, 2)))
    with pytest.raises(ConfigError):
        TickTable(((100, 5), (float("inf"), 1)))


# -- day selection ----------------------------------------------------------

def _days(n, tick, start=date(2013, 9, 2)):
    return [DayStats(date=start + timedelta(days=i), tick_values=frozenset({tick})) for i in range(n)]


def test_select_days_qualifies():
    sel = select_days(_days(40, 5.0), _days(30, 1.0, date(2014, 2, 3)), (5.0, 1.0))
    assert sel.qualifies and len(sel.days_a) == 40 and len(sel.days_b) == 30


def test_select_days_too_few():
    sel = select_days(_days(8, 5.0), _days(30, 1.0, date(2014, 2, 3)), (5.0, 1.0))
    assert not sel.qualifies
    assert sel.reason == "period A count ≤ 10"


def test_select_days_boundary_is_strict():
    sel = select_days(_days(11, 5.0), _days(10, 1.0, date(2014, 2, 3)), (5.0, 1.0))
    assert not sel.qualifies and sel.reason == "period B count ≤ 10"


def test_select_days_drops_multi_tick_and_off_reference():
    a = _days(20, 5.0)
    a[3] = DayStats(date=a[3].date, tick_values=frozenset({5.0, 1.0}))
    a[4] = DayStats(date=a[4].date, tick_values=frozenset({10.0}))
    sel = select_days(a, _days(20, 1.0, date(2014, 2, 3)), (5.0, 1.0))
    reasons = dict(sel.excluded)
    assert reasons[a[3].date] == "multiple tick values"
    assert reasons[a[4].date] == "tick differs from reference"
    assert len(sel.days_a) == 18


@given(st.permutations(list(range(25))))
def test_select_days_order_invariant(perm):
    a = _days(25, 5.0)
    a[2] = DayStats(date=a[2].date, tick_values=frozenset({5.0, 10.0}))
    b = _days(12, 1.0, date(2014, 2, 3))
    base = select_days(a, b, (5.0, 1.0))
    shuffled = select_days([a[i] for i in perm], b, (5.0, 1.0))
    assert {d.date for d in shuffled.days_a} == {d.date for d in base.days_a}
    assert {d.date for d in base.days_a} <= {d.date for d in a}


def test_split_days_and_load_directory(tmp_path, small_path):
    export_trades(small_path, tmp_path / "SIM.csv")
    sub = tmp_path / "OTHER"
    sub.mkdir()
    export_trades(small_path.trades[:100], sub / "part1.csv")
    export_trades(small_path.trades[100:200], sub / "part2.csv")
    stocks = load_directory(tmp_path)
    assert sorted(stocks) == ["OTHER", "SIM"]
    assert stocks["SIM"] == small_path.trades
    assert stocks["OTHER"] == small_path.trades[:200]
    days = split_days(stocks["SIM"])
    assert sum(len(v) for v in days.values()) == len(small_path.trades)
    assert list(days) == sorted(days)
