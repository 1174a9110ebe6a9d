# %% [markdown]
# # Estimating eta from trades
#
# A large tick asset trades on a coarse grid, and its transaction price
# bounces between neighbouring levels. The model with uncertainty zones
# summarises this bounce with one number, eta. The estimator compares how
# often a one-tick move continues the previous one (N_c) with how often it
# turns back (N_a):
#
#     eta_hat = N_c / (2 N_a)
#
# We check this on synthetic data where the true value is known.

# %%
import numpy as np

from ticketa import SimConfig, continuation_prob, eta_hat, simulate

cfg = SimConfig(eta=0.2, alpha=1.0, n_changes=50_000, seed=1)
path = simulate(cfg)
prices = [r.price for r in path.trades]
print(f"{len(prices)} trades, {cfg.n_changes} price changes")
print("eta_hat over the whole path:", round(eta_hat(prices, 1.0), 4))

# %% [markdown]
# The continuation frequency itself is 2 eta / (1 + 2 eta), so eta = 0.2
# gives 2/7.

# %%
print("continuation frequency:", round(path.continuation_frequency, 4),
      "expected:", round(continuation_prob(0.2), 4))

# %% [markdown]
# ## Daily estimates
#
# Studies of real data estimate eta day by day and average the daily
# values; the quartiles of the daily values give a rough interval.

# %%
from ticketa import day_stats, eta_period, split_days

days = [day_stats(d, tr, lambda price: 1.0) for d, tr in split_days(path.trades).items()]
est = eta_period(days)
print(f"{est.n_days} days, mean {est.eta_mean:.4f}, quartiles [{est.q25:.4f}, {est.q75:.4f}]")
print("first days:", [round(d.eta, 3) for d in days[:5]])

# %% [markdown]
# ## Across the admissible range

# %%
for eta in (0.05, 0.15, 0.30, 0.45):
    p = simulate(SimConfig(eta=eta, n_changes=100_000, trades_between=0, seed=2))
    e = eta_hat([r.price for r in p.trades], 1.0)
    print(f"true {eta:.2f}  estimated {e:.4f}  error {e - eta:+.4f}")
