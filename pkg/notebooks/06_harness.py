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
# # Running experiments and building a report

# %%
import tempfile

from qlesim.harness import REGISTRY, ExperimentConfig, report, report_text, run_experiment

for e in sorted(REGISTRY.values(), key=lambda e: e.criterion):
    print(f"{e.criterion:2d} {e.id:<28} {e.claim}")

# %%
out = tempfile.mkdtemp()
recs = [run_experiment(ExperimentConfig(eid, 0, out=out))
        for eid in ("levy.u_identities", "qle.hitting_rule", "qle.complement_lemma")]
print(report_text(report(recs)))
