# %% [markdown]
# # Trading costs of a large tick stock
#
# For a large tick stock the spread is one tick, so it says little about
# costs. The model gives two better measures:
#
# * the market-order cost relative to the efficient price, alpha/2 - eta*alpha
# * the implicit spread, 2*eta*alpha
#
# A market maker earns about S/2 - c*sigma/sqrt(M) per trade. The constant c
# is fitted on a cross-section of stocks.

# %%
import numpy as np

from ticketa import (
    SimConfig,
    cost_report,
    day_stats,
    eta_period,
    fit_c,
    optimal_tick,
    predict_eta,
    simulate,
    split_days,
)

# %% [markdown]
# ## A cross-section of synthetic stocks

# %%
obs = []
for k, eta in enumerate((0.1, 0.2, 0.3, 0.4)):
    path = simulate(SimConfig(eta=eta, n_changes=20_000, trades_between=9, seed=k))
    days = [day_stats(d, tr, lambda p: 1.0) for d, tr in split_days(path.trades).items()]
    est = eta_period(days)
    vpt = np.median([d.sigma / np.sqrt(d.M) for d in days if d.sigma])
    obs.append((est.eta_mean * 1.0, vpt))
    print(f"eta {eta:.1f}: estimated {est.eta_mean:.3f}, sigma/sqrt(M) {vpt:.3f}")
c = fit_c(obs)
print("fitted c:", round(c, 3))

# %% [markdown]
# ## Costs before and after a tick reduction

# %%
eta0, alpha0, alpha = 0.06, 5.0, 1.0
for a, e in ((alpha0, eta0), (alpha, predict_eta(eta0, alpha0, alpha))):
    rep = cost_report(a, e, c=c)
    print(f"tick {a:g}: eta {e:.3f}, market-order cost {rep.market_order_cost:.3f}, "
          f"implicit spread {rep.implicit_spread:.3f}")

# %% [markdown]
# The tick that brings the forecast to eta = 1/2 makes the market-order
# cost vanish while the stock stays large tick.

# %%
star = optimal_tick(eta0, alpha0)
print(f"optimal tick {star:.3f}; forecast there {predict_eta(eta0, alpha0, star):.3f}")
