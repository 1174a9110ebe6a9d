"""
Published statistics of the 2014 TSE tick-value pilot program.

Three tables ship with the package:

``phase0``
    Average spread, eta and labels of the 55 pilot stocks before the program.
``phase0_1`` / ``phase1_2``
    For the stocks selected around each tick reduction: spread and eta
    before and after, realized labels, the published forecast with its
    interval, forecast labels and the star annotation. ``price`` is a
    representative quote inside the stock's price band, from which the tick
    ratio follows through :data:`~ticketa.ingest.TSE_TICK_TABLES`.

Values are the two-decimal figures as published.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .classification import Balance, Regime
from .ingest import TSE_TICK_TABLES, tick_value

_REGIME = {"Yes": Regime.LARGE_TICK, "No": Regime.SMALL_TICK, "Ambiguous": Regime.AMBIGUOUS}
_BALANCE = {"Yes": Balance.BALANCED, "No": Balance.MARKET_MAKER_FAVORABLE}


@dataclass(frozen=True)
class ClassifiedStock:
    stock: str
    spread: float
    eta: float
    regime: Regime
    balance: Balance


@dataclass(frozen=True)
class PublishedForecast:
    stock: str
    stars: str
    spread_a: float
    eta_a: float
    spread_b: float
    eta_b: float
    regime_b: Regime
    balance_b: Balance
    eta_p: float
    ci: tuple[float, float]
    regime_p: Regime
    balance_p: Balance
    price: float
    phase_a: str
    phase_b: str

    @property
    def alpha_a(self) -> float:
        return tick_value(self.price, TSE_TICK_TABLES[self.phase_a])

    @property
    def alpha_b(self) -> float:
        return tick_value(self.price, TSE_TICK_TABLES[self.phase_b])

    @property
    def n_stars(self) -> int:
        return self.stars.replace("(*)", "").count("*")

    @property
    def n_ambiguous_stars(self) -> int:
        return self.stars.count("(*)")


def _rows(name):
    with resources.files(__package__).joinpath("data", name).open(encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def load_phase0() -> list[ClassifiedStock]:
    return [
        ClassifiedStock(r["stock"], float(r["S"]), float(r["eta"]), _REGIME[r["LTick"]], _BALANCE[r["Bal"]])
        for r in _rows("tse_phase0.csv")
    ]


def load_forecasts(pair: str) -> list[PublishedForecast]:
    """Published forecast table for ``pair`` in ``{"0-1", "1-2"}``."""
    phase_a, phase_b = pair.split("-")
    out = []
    for r in _rows(f"tse_phase{phase_a}_{phase_b}.csv"):
        out.append(
            PublishedForecast(
                stock=r["stock"],
                stars=r["stars"],
                spread_a=float(r["S_a"]),
                eta_a=float(r["eta_a"]),
                spread_b=float(r["S_b"]),
                eta_b=float(r["eta_b"]),
                regime_b=_REGIME[r["LTick_b"]],
                balance_b=_BALANCE[r["Bal_b"]],
                eta_p=float(r["eta_p"]),
                ci=(float(r["ci_low"]), float(r["ci_high"])),
                regime_p=_REGIME[r["LTick_p"]],
                balance_p=_BALANCE[r["Bal_p"]],
                price=float(r["price"]),
                phase_a=phase_a,
                phase_b=phase_b,
            )
        )
    return out
