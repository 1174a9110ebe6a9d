"""
Study configuration read from a YAML file.

Example::

    csv:
      delimiter: ","
      timestamp: time
      price: price
      bid: bid
      ask: ask
      timestamp_format: null      # ISO 8601
    sessions:
      hours: [["09:00", "11:30"], ["12:30", "15:00"]]
      trim_head_minutes: 60
      trim_tail_minutes: 60
    phases:
      - {label: "0", start: 2013-06-03, end: 2014-01-13}
      - {label: "1", start: 2014-01-14, end: 2014-07-21}
    tick_tables: tse              # preset name, or {label: [[upper, tick], ...]}
    thresholds: {large_tick_max: 1.5, small_tick_min: 1.6, balanced_min: 0.4}
    min_days: 10
    max_error_rate: 0.001
    grid_minutes: 5

Every key is optional; missing ones fall back to the TSE defaults.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from datetime import date, timedelta

import yaml

from .classification import DEFAULT_THRESHOLDS, Thresholds
from .costs import DEFAULT_GRID
from .ingest import (
    DEFAULT_FORMAT,
    DEFAULT_MAX_ERROR_RATE,
    TICK_TABLE_PRESETS,
    TSE_PHASES,
    TSE_SESSIONS,
    TSE_TICK_TABLES,
    ConfigError,
    CsvFormat,
    PhaseWindow,
    SessionSpec,
    TickTable,
    check_phases,
)


@dataclass
class StudyConfig:
    csv: CsvFormat = DEFAULT_FORMAT
    sessions: SessionSpec = TSE_SESSIONS
    phases: tuple[PhaseWindow, ...] = TSE_PHASES
    tick_tables: dict = field(default_factory=lambda: dict(TSE_TICK_TABLES))
    thresholds: Thresholds = DEFAULT_THRESHOLDS
    min_days: int = 10
    max_error_rate: float = DEFAULT_MAX_ERROR_RATE
    grid: timedelta = DEFAULT_GRID

    def phase(self, label: str) -> PhaseWindow:
        for p in self.phases:
            if p.label == str(label):
                return p
        raise ConfigError(f"unknown phase {label!r}; known: {[p.label for p in self.phases]}")


def _date(v) -> date:
    return v if isinstance(v, date) else date.fromisoformat(str(v))


def _tables(spec) -> dict[str, TickTable]:
    if isinstance(spec, str):
        try:
            return dict(TICK_TABLE_PRESETS[spec])
        except KeyError:
            raise ConfigError(f"unknown tick-table preset {spec!r}") from None
    tables = {}
    for label, bands in spec.items():
        parsed = []
        for upper, tick in bands:
            upper = math.inf if upper in (None, "inf", "Infinity") else float(upper)
            parsed.append((upper, float(tick)))
        tables[str(label)] = TickTable(tuple(parsed))
    return tables


def _known(cls, d: dict, what: str) -> dict:
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ConfigError(f"unknown {what} keys: {sorted(unknown)}")
    return d


def config_from_dict(raw: dict) -> StudyConfig:
    raw = dict(raw or {})
    cfg = StudyConfig()
    if "csv" in raw:
        cfg.csv = CsvFormat(**_known(CsvFormat, raw.pop("csv"), "csv"))
    if "sessions" in raw:
        s = raw.pop("sessions")
        cfg.sessions = SessionSpec(
            sessions=tuple(tuple(h) for h in s.get("hours", [(o.isoformat(), c.isoformat()) for o, c in TSE_SESSIONS.sessions])),
            trim_head=timedelta(minutes=s.get("trim_head_minutes", 60)),
            trim_tail=timedelta(minutes=s.get("trim_tail_minutes", 60)),
        )
    if "phases" in raw:
        cfg.phases = tuple(
            PhaseWindow(str(p["label"]), _date(p["start"]), _date(p["end"])) for p in raw.pop("phases")
        )
        check_phases(cfg.phases)
    if "tick_tables" in raw:
        cfg.tick_tables = _tables(raw.pop("tick_tables"))
    if "thresholds" in raw:
        cfg.thresholds = Thresholds(**_known(Thresholds, raw.pop("thresholds"), "thresholds"))
    if "min_days" in raw:
        cfg.min_days = int(raw.pop("min_days"))
    if "max_error_rate" in raw:
        cfg.max_error_rate = float(raw.pop("max_error_rate"))
    if "grid_minutes" in raw:
        cfg.grid = timedelta(minutes=float(raw.pop("grid_minutes")))
    if raw:
        raise ConfigError(f"unknown config keys: {sorted(raw)}")
    missing = [p.label for p in cfg.phases if p.label not in cfg.tick_tables]
    if missing:
        raise ConfigError(f"no tick table for phase(s) {missing}")
    return cfg


def load_config(path=None) -> StudyConfig:
    if path is None:
        return StudyConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if raw is not None and not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    return config_from_dict(raw)
