# %% [markdown]
# # Closed loop: simulate, export, ingest, evaluate
#
# A synthetic stock trades with a 10-yen tick in phase 0 and a 1-yen tick in
# phase 1. Its phase-1 data is generated at exactly the forecast eta, so a
# sound pipeline must report a small forecast error and two stars.

# %%
import tempfile
from datetime import date
from pathlib import Path

from ticketa import (
    TSE_PHASES,
    TSE_TICK_TABLES,
    SimConfig,
    evaluate_phase_pair,
    export_trades,
    load_directory,
    predict_eta,
    render,
    sigma_for_rate,
    simulate,
)

p0, p1 = TSE_PHASES[0], TSE_PHASES[1]
eta_a, cpd, days = 0.05, 2000, 60
price_a, price_b = 12000.0, 7500.0
alpha_a = TSE_TICK_TABLES["0"].tick_value(price_a)
alpha_b = TSE_TICK_TABLES["1"].tick_value(price_b)
eta_b = predict_eta(eta_a, alpha_a, alpha_b)
print(f"tick {alpha_a:g} -> {alpha_b:g}, eta {eta_a} -> forecast {eta_b:.4f}")


def phase(eta, alpha, price, start, seed):
    cfg = SimConfig(eta=eta, alpha=alpha, sigma=sigma_for_rate(eta, alpha, cpd),
                    initial_price=price, n_changes=days * cpd, seed=seed, start_date=start)
    return simulate(cfg).trades


trades = phase(eta_a, alpha_a, price_a, date(2013, 10, 7), 1) + phase(eta_b, alpha_b, price_b, p1.start, 2)

# %% [markdown]
# Write one file per stock, then read the directory back as a user would
# with `ticketa report --data-dir DIR --phase 0 --phase 1`.

# %%
with tempfile.TemporaryDirectory() as tmp:
    export_trades(trades, Path(tmp) / "9999.csv")
    stocks = load_directory(tmp)

ev = evaluate_phase_pair(stocks, p0, p1, TSE_TICK_TABLES)
print(render(ev.results))
print("mean relative error:", round(ev.aggregate_error(), 4))
