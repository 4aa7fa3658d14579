"""
Pair-distance observables
=========================

With the oscillator scale fixed by the envelope solution, moments of the
pair distance follow from one-particle radial moments weighted by the
squared symmetrization coefficients.
"""
#%%
from envtheory import (
    MixedQ0,
    StateSpec,
    envelope_state,
    linear_system,
    observable_approx,
    observable_report,
    observable_rk,
)

#%%
# Step 1. Ground state of the linear force
# ----------------------------------------
system = linear_system()
state, sol = envelope_state(system, StateSpec.ground(3), L=0)
for k in (1, 2, -1):
    print(f"<r^{k}> = {observable_rk(state, k):.4f}   rho0^{k} = {observable_approx(sol.rho0, k):.4f}")

#%%
# Step 2. The second moment is exact
# ----------------------------------
# For phi = 2 the mean-radius guess reproduces <r^2> exactly.
print(observable_rk(state, 2) - sol.rho0**2)

#%%
# Step 3. Mixed Q0
# ----------------
# The symmetric 1- state of band 3 mixes components of different Q0. A
# modified phi has no unique meaning there, so the exact moment is withheld.
odd = StateSpec(((0, 0), (1, 1)), L=1)
state, sol = envelope_state(system, odd, L=1, phi=1.8)
try:
    observable_rk(state, 1, phi=1.8)
except MixedQ0 as exc:
    print("MixedQ0:", exc)
print(observable_report(state, sol.rho0, 1, phi=1.8))
