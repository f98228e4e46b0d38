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
# # Peeling explorations on small sphere triangulations
#
# Exact laws of Eden and percolation explorations for both triangulation
# classes, in rational arithmetic.

# %%
from qlesim import maps
from qlesim.maps import MULTI_EDGE, SIMPLE

for cls in (MULTI_EDGE, SIMPLE):
    print(cls, [len(maps.enumerate_triangulations(n, cls)) for n in range(3, 7)])

# %% [markdown]
# Peeling counts against brute-force gluing.

# %%
for m in range(2, 6):
    print(m, [maps.count_disk_triangulations(m, n) for n in range(4)],
          [maps.count_disk_triangulations(m, n, SIMPLE) for n in range(4)])

# %% [markdown]
# ## Eden vs percolation
#
# Total-variation distances between the two exploration laws.  The loopless
# class is exact; the simplicial class is not.

# %%
for cls, n in ((MULTI_EDGE, 4), (SIMPLE, 4), (SIMPLE, 5)):
    for row in maps.compare_explorations(n, cls):
        print(cls, n, row.statistic, row.tv)

# %% [markdown]
# ## One map, one exploration

# %%
tri = maps.universe(5, MULTI_EDGE)[17]
tr = maps.eden_exploration(tri, seed=0)
print(tr.chain)
for nk in tr.necklaces:
    print(nk.kind, nk.inner_length, "->", nk.outer_length)
new, tr2 = maps.reshuffle_necklaces(maps.percolation_exploration(tri, seed=0), seed=1)
print(maps.dumps(new))
