"""
Tick-by-tick trade ingestion.

Parsing of delimiter-separated trade files, trading-session filtering,
tick-table lookup and the day-selection rules applied before any
estimation is run on a pair of tick regimes.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from typing import IO, Iterable, NamedTuple, Sequence


class ConfigError(ValueError):
    """Fatal configuration problem (missing column, invalid table...)."""


class TooManyRowErrors(ValueError):
    """Raised when the share of malformed rows exceeds the configured cap."""

    def __init__(self, errors, n_rows, cap):
        self.errors = errors
        self.n_rows = n_rows
        self.cap = cap
        first = "; ".join(str(e) for e in errors[:3])
        super().__init__(
            f"{len(errors)} malformed rows out of {n_rows} exceeds cap "
            f"{cap:.4%} (first: {first})"
        )


class TradeRecord(NamedTuple):
    """One transaction with the best quotes right before it."""

    timestamp: datetime
    price: float
    bid: float
    ask: float


class RowError(NamedTuple):
    line: int
    reason: str

    def __str__(self):
        return f"line {self.line}: {self.reason}"


class ParseResult(NamedTuple):
    records: list[TradeRecord]
    errors: list[RowError]


@dataclass(frozen=True)
class CsvFormat:
    """Column mapping for trade files.

    ``timestamp_format`` is a ``strptime`` pattern; ``None`` means ISO 8601.
    """

    timestamp: str = "timestamp"
    price: str = "price"
    bid: str = "bid"
    ask: str = "ask"
    delimiter: str = ","
    timestamp_format: str | None = None

    def format_timestamp(self, ts: datetime) -> str:
        if self.timestamp_format is None:
            return ts.isoformat(timespec="microseconds")
        return ts.strftime(self.timestamp_format)

    def parse_timestamp(self, text: str) -> datetime:
        if self.timestamp_format is None:
            return datetime.fromisoformat(text)
        return datetime.strptime(text, self.timestamp_format)


DEFAULT_FORMAT = CsvFormat()
DEFAULT_MAX_ERROR_RATE = 0.001


def _open_text(source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, newline="", encoding="utf-8"), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"), newline=""), False
    if isinstance(source, io.TextIOBase):
        return source, False
    # binary file object
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def parse_trades(
    source,
    fmt: CsvFormat = DEFAULT_FORMAT,
    *,
    max_error_rate: float = DEFAULT_MAX_ERROR_RATE,
) -> ParseResult:
    """Parse a delimiter-separated trade file.

    Parameters
    ----------
    source : path, bytes, or text/binary file object
        File with a header row.
    fmt : CsvFormat
        Column mapping, delimiter and timestamp format.
    max_error_rate : float
        Largest tolerated fraction of malformed rows. Above it the whole
        file is rejected with :class:`TooManyRowErrors`.

    Returns
    -------
    ParseResult
        ``records`` sorted by timestamp (stable, so ties keep file order)
        and the collected per-row ``errors`` with 1-based line numbers.
    """
    fh, owned = _open_text(source)
    try:
        reader = csv.reader(fh, delimiter=fmt.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError("empty trade file (no header row)") from None
        header = [h.strip() for h in header]
        try:
            i_ts, i_px, i_bid, i_ask = (
                header.index(c) for c in (fmt.timestamp, fmt.price, fmt.bid, fmt.ask)
            )
        except ValueError:
            missing = [
                c for c in (fmt.timestamp, fmt.price, fmt.bid, fmt.ask) if c not in header
            ]
            raise ConfigError(f"missing column(s) {missing} in header {header}") from None
        width = max(i_ts, i_px, i_bid, i_ask) + 1

        records: list[TradeRecord] = []
        errors: list[RowError] = []
        parse_ts = fmt.parse_timestamp
        n_rows = 0
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            n_rows += 1
            if len(row) < width:
                errors.append(RowError(line, "too few fields"))
                continue
            try:
                ts = parse_ts(row[i_ts])
            except ValueError:
                errors.append(RowError(line, f"unparseable timestamp {row[i_ts]!r}"))
                continue
            try:
                price = float(row[i_px])
                bid = float(row[i_bid])
                ask = float(row[i_ask])
            except ValueError:
                errors.append(RowError(line, "unparseable decimal"))
                continue
            if not (math.isfinite(price) and math.isfinite(bid) and math.isfinite(ask)):
                errors.append(RowError(line, "non-finite decimal"))
            elif ask < bid:
                errors.append(RowError(line, "crossed quote"))
            elif price <= 0 or bid <= 0:
                errors.append(RowError(line, "non-positive price"))
            else:
                records.append(TradeRecord(ts, price, bid, ask))
    finally:
        if owned:
            fh.close()

    if errors and len(errors) > max_error_rate * n_rows:
        raise TooManyRowErrors(errors, n_rows, max_error_rate)
    if any(records[i].timestamp > records[i + 1].timestamp for i in range(len(records) - 1)):
        records.sort(key=lambda r: r.timestamp)
    return ParseResult(records, errors)


def write_trades(records: Iterable[TradeRecord], out, fmt: CsvFormat = DEFAULT_FORMAT) -> None:
    """Write records in the format :func:`parse_trades` reads back.

    Floats are written with ``repr`` so that parsing recovers them bit for bit.
    """
    writer = csv.writer(out, delimiter=fmt.delimiter, lineterminator="\n")
    writer.writerow([fmt.timestamp, fmt.price, fmt.bid, fmt.ask])
    fmt_ts = fmt.format_timestamp
    writer.writerows((fmt_ts(r.timestamp), repr(r.price), repr(r.bid), repr(r.ask)) for r in records)


# ---------------------------------------------------------------------------
# Sessions and phases
# ---------------------------------------------------------------------------


def _as_time(value) -> time:
    if isinstance(value, time):
        return value
    return time.fromisoformat(str(value))


def _seconds(t: time) -> float:
    return t.hour * 3600 + t.minute * 60 + t.second + t.microsecond / 1e6


@dataclass(frozen=True)
class SessionSpec:
    """Intraday trading sessions plus the head/tail trims applied to them.

    The head trim cuts the start of the first session, the tail trim the end
    of the last one. The kept window is ``[open + head, close - tail)``.
    """

    sessions: tuple[tuple[time, time], ...]
    trim_head: timedelta = timedelta(0)
    trim_tail: timedelta = timedelta(0)

    def __post_init__(self):
        sessions = tuple((_as_time(o), _as_time(c)) for o, c in self.sessions)
        object.__setattr__(self, "sessions", sessions)
        if not sessions:
            raise ConfigError("at least one session is required")
        for (o, c) in sessions:
            if not o < c:
                raise ConfigError(f"session open {o} must precede close {c}")
        for (_, c0), (o1, _) in zip(sessions, sessions[1:]):
            if not c0 <= o1:
                raise ConfigError("sessions must be ordered and non-overlapping")
        if self.trim_head < timedelta(0) or self.trim_tail < timedelta(0):
            raise ConfigError("trims must be non-negative")
        first_len = _seconds(sessions[0][1]) - _seconds(sessions[0][0])
        last_len = _seconds(sessions[-1][1]) - _seconds(sessions[-1][0])
        if self.trim_head.total_seconds() >= first_len or self.trim_tail.total_seconds() >= last_len:
            raise ConfigError("trims must be shorter than the session they cut")

    def kept_intervals(self) -> list[tuple[float, float]]:
        """Kept intraday windows as (start, end) seconds after midnight."""
        out = []
        n = len(self.sessions)
        for i, (o, c) in enumerate(self.sessions):
            lo, hi = _seconds(o), _seconds(c)
            if i == 0:
                lo += self.trim_head.total_seconds()
            if i == n - 1:
                hi -= self.trim_tail.total_seconds()
            if lo < hi:
                out.append((lo, hi))
        return out

    def contains(self, ts: datetime) -> bool:
        s = ts.hour * 3600 + ts.minute * 60 + ts.second + ts.microsecond / 1e6
        return any(lo <= s < hi for lo, hi in self.kept_intervals())


TSE_SESSIONS = SessionSpec(
    sessions=((time(9, 0), time(11, 30)), (time(12, 30), time(15, 0))),
    trim_head=timedelta(hours=1),
    trim_tail=timedelta(hours=1),
)


def session_filter(trades: Sequence[TradeRecord], spec: SessionSpec) -> list[TradeRecord]:
    """Keep trades inside the trimmed sessions, order preserved."""
    windows = spec.kept_intervals()
    out = []
    for r in trades:
        ts = r.timestamp
        s = ts.hour * 3600 + ts.minute * 60 + ts.second + ts.microsecond / 1e6
        for lo, hi in windows:
            if lo <= s < hi:
                out.append(r)
                break
    return out


@dataclass(frozen=True)
class PhaseWindow:
    label: str
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ConfigError(f"phase {self.label}: start {self.start} after end {self.end}")

    def __contains__(self, day: date) -> bool:
        if isinstance(day, datetime):
            day = day.date()
        return self.start <= day <= self.end


TSE_PHASES = (
    PhaseWindow("0", date(2013, 6, 3), date(2014, 1, 13)),
    PhaseWindow("1", date(2014, 1, 14), date(2014, 7, 21)),
    PhaseWindow("2", date(2014, 7, 22), date(2014, 12, 30)),
)


def check_phases(phases: Sequence[PhaseWindow]) -> None:
    ordered = sorted(phases, key=lambda p: p.start)
    for a, b in zip(ordered, ordered[1:]):
        if b.start <= a.end:
            raise ConfigError(f"phases {a.label} and {b.label} overlap")


def phase_of(day: date, phases: Sequence[PhaseWindow]) -> PhaseWindow | None:
    for p in phases:
        if day in p:
            return p
    return None


def split_days(trades: Iterable[TradeRecord]) -> dict[date, list[TradeRecord]]:
    """Group trades by calendar date; days without trades are simply absent."""
    days: dict[date, list[TradeRecord]] = defaultdict(list)
    for r in trades:
        days[r.timestamp.date()].append(r)
    return dict(sorted(days.items()))


# ---------------------------------------------------------------------------
# Tick tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TickTable:
    """Piecewise-constant price -> tick value map.

    ``bands`` holds ``(upper_bound_exclusive, tick)`` pairs; the final upper
    bound must be ``inf``.
    """

    bands: tuple[tuple[float, float], ...]
    _uppers: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bands = tuple((float(u), float(t)) for u, t in self.bands)
        object.__setattr__(self, "bands", bands)
        if not bands:
            raise ConfigError("empty tick table")
        uppers = [u for u, _ in bands]
        ticks = [t for _, t in bands]
        if any(b <= a for a, b in zip(uppers, uppers[1:])):
            raise ConfigError("tick table upper bounds must be strictly increasing")
        if not math.isinf(uppers[-1]):
            raise ConfigError("final tick band must be unbounded")
        if any(t <= 0 for t in ticks):
            raise ConfigError("tick values must be positive")
        if any(b < a for a, b in zip(ticks, ticks[1:])):
            raise ConfigError("tick values must be non-decreasing in price")
        object.__setattr__(self, "_uppers", tuple(uppers))

    def tick_value(self, price: float) -> float:
        return tick_value(price, self)


def tick_value(price: float, table: TickTable) -> float:
    """Tick of the first band whose upper bound strictly exceeds ``price``."""
    if not price > 0:
        raise ValueError(f"price must be positive, got {price}")
    return table.bands[bisect.bisect_right(table._uppers, price)][1]


def _tse_table(ticks):
    uppers = [1e3, 3e3, 5e3, 1e4, 3e4, 5e4, 1e5, 3e5, 5e5, 1e6, 3e6, 5e6, 1e7, 3e7, 5e7, math.inf]
    return TickTable(tuple(zip(uppers, ticks)))


TSE_TICK_TABLES = {
    "0": _tse_table([1, 1, 5, 10, 10, 50, 100, 100, 500, 1000, 1000, 5000, 10000, 10000, 50000, 100000]),
    "1": _tse_table([1, 1, 1, 1, 5, 5, 10, 50, 50, 100, 500, 500, 1000, 5000, 5000, 10000]),
    "2": _tse_table([0.1, 0.5, 0.5, 1, 5, 5, 10, 50, 50, 100, 500, 500, 1000, 5000, 5000, 10000]),
}

TICK_TABLE_PRESETS = {"tse": TSE_TICK_TABLES}


# ---------------------------------------------------------------------------
# Day selection
# ---------------------------------------------------------------------------


@dataclass
class DaySelection:
    """Outcome of :func:`select_days` for one pair of periods."""

    days_a: list
    days_b: list
    excluded: list[tuple[date, str]]
    min_days: int

    @property
    def qualifies(self) -> bool:
        return len(self.days_a) > self.min_days and len(self.days_b) > self.min_days

    @property
    def reason(self) -> str | None:
        if len(self.days_a) <= self.min_days:
            return f"period A count ≤ {self.min_days}"
        if len(self.days_b) <= self.min_days:
            return f"period B count ≤ {self.min_days}"
        return None


def _filter_days(days, reference, excluded):
    kept = []
    for d in days:
        ticks = set(d.tick_values)
        if len(ticks) > 1:
            excluded.append((d.date, "multiple tick values"))
        elif not ticks or not math.isclose(next(iter(ticks)), reference, rel_tol=1e-9):
            excluded.append((d.date, "tick differs from reference"))
        else:
            kept.append(d)
    return kept


def select_days(days_a, days_b, reference_ticks: tuple[float, float], min_days: int = 10) -> DaySelection:
    """Keep single-tick days at each period's reference tick value.

    ``days_a``/``days_b`` are sequences of objects with ``date`` and
    ``tick_values`` attributes (typically :class:`~ticketa.estimator.DayStats`).
    The pair qualifies only when both kept counts exceed ``min_days``;
    disqualification is reported on the result, never raised.
    """
    excluded: list[tuple[date, str]] = []
    kept_a = _filter_days(days_a, reference_ticks[0], excluded)
    kept_b = _filter_days(days_b, reference_ticks[1], excluded)
    return DaySelection(kept_a, kept_b, excluded, min_days)


def load_directory(
    data_dir,
    fmt: CsvFormat = DEFAULT_FORMAT,
    *,
    pattern: str = "*.csv",
    max_error_rate: float = DEFAULT_MAX_ERROR_RATE,
) -> dict[str, list[TradeRecord]]:
    """Load one instrument per file (stem = id) or per sub-directory (name = id)."""
    from pathlib import Path

    root = Path(data_dir)
    if not root.is_dir():
        raise ConfigError(f"data directory {root} does not exist")
    stocks: dict[str, list[TradeRecord]] = {}
    for path in sorted(root.iterdir()):
        if path.is_dir():
            files = sorted(path.glob(pattern))
            if not files:
                continue
            recs = []
            for f in files:
                recs.extend(parse_trades(f, fmt, max_error_rate=max_error_rate).records)
            recs.sort(key=lambda r: r.timestamp)
            stocks[path.name] = recs
        elif path.match(pattern):
            stocks[path.stem] = parse_trades(path, fmt, max_error_rate=max_error_rate).records
    return stocks
