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
# # Excursion encoding of doubly-marked spheres
#
# A normalised excursion from the conditioned skip-free walk, its bubble
# ledger and the quantum distance between the marked points.

# %%
import numpy as np

from qlesim import levy, sphere
from qlesim.levy import StableLaw

law = StableLaw()
e = levy.sample_normalized_excursion(law, 400, seed=0)
s = sphere.encode_sphere(e, seed=0)
print("T =", s.T, " e* =", round(s.e_star, 4), " bubbles:", len(s.bubbles))
print("D =", sphere.quantum_distance(s), " reversed:", sphere.quantum_distance(s.reversed()))

# %% [markdown]
# Largest bubbles in swallow order.

# %%
big = sorted(s.bubbles_by_swallow_time(), key=lambda b: -b.length)[:5]
for b in big:
    print(f"t={b.time:.4f} length={b.length:.4f} orient={b.orientation} mark={b.marked_point:.3f}")

# %% [markdown]
# ## Tail exponents under the restricted Ito measure

# %%
ens = sphere.sphere_ensemble(law, 50_000, 100, 1e-6, 1e6, seed=1, eps=0.01)
for name, vals, dec, want in (("D", ens.D, (3, 30), -2), ("e*", ens.e_star, (0.1, 1), -1),
                              ("T", ens.T, (1, 10), -2 / 3)):
    fit = sphere.fit_tail_exponent(vals, ens.weight, decade=dec)
    print(f"{name:>2}: slope {fit.slope:+.3f} +- {fit.stderr:.3f} (expected {want:+.3f}), "
          f"nonlinearity {fit.nonlinearity:.3f}")

# %% [markdown]
# ## Quantum natural time from bubble counts

# %%
p = levy.sample_stable_path(law, 2.0, 2e-6, seed=3, jump_threshold=np.exp(-8))
for j in range(2, 7):
    print(j, sphere.quantum_natural_clock_from_jumps(list(p.jumps[:, 1]), j))
