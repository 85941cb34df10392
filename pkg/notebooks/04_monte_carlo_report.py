# %% [markdown]
# # Rates and bounds
#
# Reading, detection and honest-acceptance rates from seeded trials,
# next to the quantum-seal upper bounds at p = 0.5.

# %%
from certdel.experiments import (
    estimate_forge_curve, forge_acceptance_closed_form, seal_bounds, table1_report,
)

seal_bounds(0.5, 1e6)

# %%
report = table1_report(trials=2000, seed=0)
print(report.to_csv())
for note in report.notes:
    print("-", note)

# %%
for e, est in estimate_forge_curve("bch-31-16-7", [0, 1, 2, 3], 2000, seed=1):
    print(e, round(est.value, 3), round(forge_acceptance_closed_form(e), 3), 2.0 ** -e)
