# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Transient climate response from a bivariate VAR
#
# CO2 concentration is converted to forcing with `5.35 ln(C / C_1850)`.  A
# Bayesian VAR(4) with a Minnesota prior is fit to (forcing, temperature);
# the overall tightness is picked on a grid by marginal likelihood.  For each
# posterior draw, the cumulative temperature response to a forcing shock is
# divided by the cumulative forcing response and scaled to a doubling.

# %%
import numpy as np

from ifvar import datasets
from ifvar.analysis import FORCING_FIRST, TEMP_FIRST
from ifvar.bayes import fit_bayes, optimize_hyperparameters
from ifvar.tcr import tcr_at
from ifvar.var import VarSpec

pair = datasets.load_pair("co2_rf", "1850-2005")
print(pair.years[0], pair.years[-1], pair.x.values[:3])

# %%
posts = {}
for trend in (False, True):
    spec = VarSpec(p=4, trend=trend)
    prior = optimize_hyperparameters(pair, spec)
    print("trend" if trend else "no trend", "lambda =", prior.lambda_overall)
    posts[trend] = fit_bayes(pair, spec, prior, n_draws=2000, seed=0)

# %%
for name, ordering in (("co2 first", FORCING_FIRST), ("gmta first", TEMP_FIRST)):
    for trend, post in posts.items():
        est = [tcr_at(post, ordering, h) for h in (20, 70)]
        print(f"{name:10s} trend={trend!s:5s} " +
              "  ".join(f"TCR{e.h} {e.median:.2f} [{e.lower:.2f}, {e.upper:.2f}]" for e in est))

# %% [markdown]
# The ordering matters at short horizons: with temperature ordered first,
# the forcing shock has no impact effect on temperature.  Draws whose
# cumulative forcing response is numerically zero are dropped and counted.

# %%
est = tcr_at(posts[False], FORCING_FIRST, 20)
print(est.discarded, est.unreliable, est.low_precision)
print(np.round([est.lower, est.median, est.upper], 3))
