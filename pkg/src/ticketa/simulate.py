"""
Simulator of the model with uncertainty zones.

The efficient price is a driftless Brownian motion. After the transaction
price moved to a new grid level in some direction, the next move goes the
same way once the efficient price has travelled ``alpha`` further, and turns
back once it has retreated ``2 * eta * alpha``. Price changes therefore form
a two-state chain whose continuation probability is ``2 eta / (1 + 2 eta)``.

Exit times and sides are sampled exactly with a walk on spheres: from a
point inside the barriers, jump to the boundary of the largest symmetric
interval that fits, drawing its exit time from the tabulated law of the
exit time of ``[-1, 1]``. Each jump lands on a barrier with probability 1/2.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from datetime import date, datetime
from functools import lru_cache

import numpy as np
from scipy.special import erfc

from .ingest import DEFAULT_FORMAT, TSE_SESSIONS, CsvFormat, SessionSpec, TradeRecord, write_trades


def continuation_prob(eta: float) -> float:
    """Probability that a price change continues the previous direction."""
    if not 0 < eta <= 0.5:
        raise ValueError(f"eta must lie in (0, 1/2], got {eta}")
    return 2 * eta / (1 + 2 * eta)


def sigma_for_rate(eta: float, alpha: float, changes_per_day: float) -> float:
    """Daily volatility giving on average ``changes_per_day`` price changes.

    The mean time between changes is ``alpha * 2 eta alpha / sigma**2``.
    """
    return float(np.sqrt(changes_per_day * 2 * eta * alpha * alpha))


@lru_cache(maxsize=1)
def _exit_time_table(n: int = 6000) -> tuple[np.ndarray, np.ndarray]:
    """CDF of the exit time of [-1, 1] for standard Brownian motion from 0."""
    t = np.geomspace(2e-3, 60.0, n)
    k = np.arange(60)[:, None]
    small = 2 * np.sum((-1.0) ** k * erfc((2 * k + 1) / np.sqrt(2 * t[t < 1])), axis=0)
    tl = t[t >= 1]
    large = 1 - 4 / np.pi * np.sum(
        (-1.0) ** k / (2 * k + 1) * np.exp(-((2 * k + 1) ** 2) * np.pi**2 * tl / 8), axis=0
    )
    cdf = np.concatenate([small, large])
    cdf = np.maximum.accumulate(np.clip(cdf, 0.0, 1.0))
    t = np.concatenate([[0.0], t])
    cdf = np.concatenate([[0.0], cdf])
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    return cdf[keep], t[keep]


def sample_unit_exit_times(rng: np.random.Generator, size: int) -> np.ndarray:
    """Exit times of [-1, 1] for a standard Brownian motion started at 0."""
    cdf, t = _exit_time_table()
    return np.interp(rng.random(size), cdf, t)


def sample_barrier_exits(
    rng: np.random.Generator, up: float, down: float, sigma: float, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """First exits of ``sigma * W`` from ``(-down, up)`` started at 0.

    Returns
    -------
    hit_up : bool array
        Whether the upper barrier was reached first.
    times : float array
        Exit times, in the time unit of ``sigma``.
    """
    x = np.zeros(size)
    times = np.zeros(size)
    hit_up = np.zeros(size, dtype=bool)
    active = np.arange(size)
    while active.size:
        xa = x[active]
        to_up = up - xa
        to_down = xa + down
        r = np.minimum(to_up, to_down)
        times[active] += (r / sigma) ** 2 * sample_unit_exit_times(rng, active.size)
        step_up = rng.random(active.size) < 0.5
        near_up = to_up <= to_down
        done = step_up == near_up
        hit_up[active[done]] = near_up[done]
        cont = ~done
        x[active[cont]] = xa[cont] + np.where(step_up[cont], r[cont], -r[cont])
        active = active[cont]
    return hit_up, times


@dataclass(frozen=True)
class SimConfig:
    eta: float
    alpha: float = 1.0
    sigma: float = 40.0
    initial_price: float = 1000.0
    n_changes: int = 10_000
    trades_between: float = 4.0
    seed: int = 0
    start_date: date = date(2013, 6, 3)
    sessions: SessionSpec = TSE_SESSIONS

    def __post_init__(self):
        if not 0 < self.eta <= 0.5:
            raise ValueError(f"eta must lie in (0, 1/2], got {self.eta}")
        if not (self.alpha > 0 and self.sigma > 0 and self.initial_price > 0):
            raise ValueError("alpha, sigma and initial_price must be positive")
        if self.n_changes < 0 or self.trades_between < 0:
            raise ValueError("n_changes and trades_between must be non-negative")
        ratio = self.initial_price / self.alpha
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError("initial_price must lie on the tick grid")


@dataclass
class SimPath:
    trades: list[TradeRecord]
    eta: float
    alpha: float
    directions: np.ndarray
    change_times: np.ndarray
    continuations: np.ndarray = field(repr=False)

    @property
    def continuation_frequency(self) -> float:
        return float(self.continuations.mean()) if self.continuations.size else float("nan")


def _trading_clock(sessions: SessionSpec) -> tuple[np.ndarray, np.ndarray]:
    """Session start offsets in trading seconds and in wall-clock seconds."""
    opens = np.array([o.hour * 3600 + o.minute * 60 + o.second for o, _ in sessions.sessions], float)
    closes = np.array([c.hour * 3600 + c.minute * 60 + c.second for _, c in sessions.sessions], float)
    lengths = closes - opens
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    return cum, opens


def _wall_clock(t_days: np.ndarray, start: date, sessions: SessionSpec) -> np.ndarray:
    """Map diffusion time (in trading days) to datetime64[us] stamps.

    Trading days are consecutive business days from ``start``; the fraction
    of a day is spread over the sessions back to back.
    """
    cum, opens = _trading_clock(sessions)
    day_len = cum[-1]
    day = np.floor(t_days).astype(np.int64)
    offset = (t_days - day) * day_len
    s = np.clip(np.searchsorted(cum, offset, side="right") - 1, 0, len(opens) - 1)
    secs = opens[s] + (offset - cum[s])
    dates = np.busday_offset(np.datetime64(start, "D"), day, roll="forward")
    # rounding down keeps the stamps inside the session and in order
    micros = np.floor(secs * 1e6).astype(np.int64)
    return dates.astype("datetime64[us]") + micros.astype("timedelta64[us]")


def simulate(config: SimConfig) -> SimPath:
    """Generate a synthetic trade path with a known eta.

    The path has exactly ``config.n_changes`` one-tick price changes. After
    each change a Poisson number (mean ``trades_between``) of extra trades at
    the same price is scattered uniformly until the next change. Quotes are a
    one-tick straddle whose touched side is the trade price.
    """
    rng = np.random.default_rng(config.seed)
    n = config.n_changes
    a, eta, sigma = config.alpha, config.eta, config.sigma

    first_dir = 1 if rng.random() < 0.5 else -1
    continuing, waits = sample_barrier_exits(rng, a, 2 * eta * a, sigma, n)
    # direction of change i is the previous one flipped at every alternation
    flips = np.where(continuing, 1, -1)
    directions = (first_dir * np.cumprod(flips)).astype(np.int8)
    change_times = np.cumsum(waits)

    event_times = np.concatenate([[0.0], change_times])
    event_dirs = np.concatenate([[first_dir], directions]).astype(np.int64)
    levels = np.concatenate([[0], np.cumsum(directions, dtype=np.int64)])

    counts = rng.poisson(config.trades_between, size=n) if n else np.zeros(0, np.int64)
    owner = np.repeat(np.arange(n), counts)
    u = np.sort(owner + rng.random(owner.size))
    frac = u - owner
    deco_times = event_times[owner] + frac * (event_times[owner + 1] - event_times[owner])

    # interleave each event with its decorations
    all_owner = np.concatenate([np.arange(n + 1), owner])
    all_times = np.concatenate([event_times, deco_times])
    order = np.lexsort((all_times, all_owner))
    all_owner = all_owner[order]
    all_times = all_times[order]

    p0_ticks = round(config.initial_price / a)
    ticks = p0_ticks + levels[all_owner]
    dirs = event_dirs[all_owner]
    price = np.round(ticks * a, 10)
    bid = np.round(np.where(dirs > 0, ticks - 1, ticks) * a, 10)
    ask = np.round(np.where(dirs > 0, ticks, ticks + 1) * a, 10)
    stamps = _wall_clock(all_times, config.start_date, config.sessions).astype(object)

    trades = [
        TradeRecord(ts, p, b, k)
        for ts, p, b, k in zip(stamps, price.tolist(), bid.tolist(), ask.tolist())
    ]
    return SimPath(
        trades=trades,
        eta=eta,
        alpha=a,
        directions=directions,
        change_times=change_times,
        continuations=continuing[1:] if n else continuing,
    )


def export_trades(path, out=None, fmt: CsvFormat = DEFAULT_FORMAT):
    """Write a simulated path as a trade file.

    ``path`` is a :class:`SimPath` or a plain list of records. With ``out``
    omitted the file content is returned as bytes.
    """
    records = path.trades if isinstance(path, SimPath) else path
    if out is None:
        buf = io.StringIO()
        write_trades(records, buf, fmt)
        return buf.getvalue().encode("utf-8")
    if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
        try:
            with open(out, "w", newline="", encoding="utf-8") as fh:
                write_trades(records, fh, fmt)
        except OSError as exc:
            raise OSError(f"cannot write simulated trades to {out}: {exc}") from exc
        return None
    write_trades(records, out, fmt)
    return None
