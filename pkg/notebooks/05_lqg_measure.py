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
# # Discrete GFF, circle averages and the coordinate change
#
# Field values on a 512 grid of [-1, 1]^2, gamma = sqrt(8/3).

# %%
import math

import numpy as np

from qlesim import lqg

p = lqg.LqgParams(math.sqrt(8 / 3))
print("Q =", p.q)
for n in (64, 128, 256, 512):
    print(n, "G(c, c) =", lqg.green_center(n))

# %% [markdown]
# Circle-average variance drops by log(2)/(2 pi) per doubling of eps.

# %%
for eps in (2.0, 4.0, 8.0, 16.0):
    w = lqg.circle_average_weights(256, 0j, eps)
    print(eps, lqg.dgff_variance(256, w))

# %% [markdown]
# ## Area of a disk at two regularisation radii

# %%
f = lqg.lqg_field(512, seed=0)
for eps in (4.0, 8.0, 16.0):
    print(eps, lqg.lqg_area(f, p, eps, lqg.Disk(0j, 0.5)))

# %% [markdown]
# ## Coordinate change under a Mobius map

# %%
phi = lqg.Mobius(0.3)
print("gamma=0:", lqg.coord_change_check(f, lqg.LqgParams(0.0), phi))
d = [lqg.coord_change_check(lqg.lqg_field(512, s), p, phi) for s in range(10)]
print("gamma=sqrt(8/3): median", np.median(d), "quartiles", np.quantile(d, [0.25, 0.75]))
