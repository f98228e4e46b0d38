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
# # Boundary-length view of the delta-approximation
#
# Tip resampling at multiples of delta, the distance clock and the
# complement bookkeeping.

# %%
import numpy as np

from qlesim import levy, qle
from qlesim.levy import StableLaw

law = StableLaw()
e = levy.walk_to_excursion(law, levy.sample_normalized_excursions(law, 300, 1, 0)[0], 3.0)
for delta in (0.05, 0.5, 5.0):
    rec = qle.qle_delta_run(e, qle.QleConfig(delta, law, seed=1))
    print(f"delta={delta}: {len(rec.states)} reshuffles, {len(rec.bubbles)} bubbles, D={rec.total_distance:.6f}")

# %% [markdown]
# The distance clock s(t).

# %%
rec = qle.qle_delta_run(e, qle.QleConfig(0.25, law))
for t in np.linspace(0, e.lifetime, 7):
    print(f"t={t:.2f}  s(t)={qle.distance_clock(rec, t):.5f}")

# %% [markdown]
# ## Complement lemma

# %%
print(qle.check_complement_lemma(lambda d: 1 - d, D=1.0))
print(qle.check_complement_lemma(lambda d: 1 - d * d, D=1.0))

# %% [markdown]
# ## Meeting bookkeeping and the hitting rule

# %%
m = qle.MeetingConfig.from_uniform(0.3, rec.total_distance)
print(qle.meeting_bookkeeping(rec, m), rec.total_distance)
print([qle.hitting_probability(2.0, eps) for eps in (0.0, 0.5, 1.0, 2.0, 3.0)])
