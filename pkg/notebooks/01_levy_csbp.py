# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Stable paths and the 3/2-stable CSBP
#
# Spectrally positive 3/2-stable increments, the Lamperti time change and
# closed-form checks of the branching process.

# %%
import math

import numpy as np

from qlesim import levy
from qlesim.levy import StableLaw
from qlesim.rng import stream

law = StableLaw()
print(law, "rho =", law.rho, "sigma =", law.sigma)

# %% [markdown]
# Exact increments satisfy E[exp(-lam X_1)] = exp(lam^{3/2}).

# %%
x = levy.stable_increments(law, np.ones(200_000), stream(0, "nb"))
v = np.exp(-x)
print("E[exp(-X_1)] =", v.mean(), "+-", v.std() / math.sqrt(v.size), " target", math.e)

# %% [markdown]
# ## CSBP from a Levy path

# %%
path = levy.sample_csbp_path(law, 1.0, 2.0, seed=1)
print("grid points:", len(path.path), " extinction time:", path.zeta)

# %% [markdown]
# Laplace transform at t = 0.5 against exp(-u_t(lam)).

# %%
ens = levy.csbp_ensemble(law, 1.0, 20_000, seed=2, t_eval=[0.5], csbp_horizon=0.5)
y = ens.y_at[:, 0]
est = np.exp(-2.0 * y)
print("MC", est.mean(), "+-", est.std() / math.sqrt(y.size), " exact", math.exp(-levy.u_t(2.0, 0.5, law)))

# %% [markdown]
# Extinction probability P[zeta <= t] = exp(-4 y0 / t^2).

# %%
for y0 in (0.01, 0.1):
    z = levy.extinction_time(law, np.full(20_000, y0), stream(3, "ext", y0))
    for t in (1.0, 2.0, 4.0):
        print(f"y0={y0:<5} t={t}: {np.mean(z <= t):.4f} vs {math.exp(-4 * y0 / t ** 2):.4f}")

# %% [markdown]
# ## Semigroup identity for u_t

# %%
lam, s, t = 1.3, 0.4, 0.7
print(levy.u_t(levy.u_t(lam, s, law), t, law), levy.u_t(lam, s + t, law))
