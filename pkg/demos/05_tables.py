"""
Reproducing the tables
======================

Each table shows the envelope energy and pair-distance moments for
phi = 2, phi_DOS and phi_GS, with relative errors against the oracle.
The same output is available from the ``envtheory`` command.
"""
#%%
from envtheory.reporting import format_report, hierarchy_check, reproduce_table

#%%
# Step 1. Envelope columns only (fast)
# ------------------------------------
print(format_report(reproduce_table("lin4", oracle=False)))

#%%
# Step 2. With the variational reference
# --------------------------------------
report = reproduce_table("gauss2", diagnostics=True)
print(format_report(report))

#%%
# Step 3. Level ordering
# ----------------------
res = hierarchy_check(qstar_max=12)
print("same ordering:", res["ok"])
