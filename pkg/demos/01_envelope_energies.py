"""
Envelope energies of three-body systems
=======================================

The envelope equations replace the many-body problem by three coupled
equations in a mean radius ``rho0``. This script solves them for the three
reference forces, compares with the closed forms and shows how the
effective quantum number responds to ``phi``.
"""
#%%
import math

import numpy as np

from envtheory import (
    StateSpec,
    calibrate_phi,
    coulomb_system,
    dos_phi,
    effective_Q,
    gaussian_system,
    lambert_w0,
    linear_system,
    powerlaw_solution,
    solve_et,
    variational_character,
)

#%%
# Step 1. The ground state with the original prescription phi = 2
# ---------------------------------------------------------------
gs = StateSpec.ground(3)
for name, system in (("linear", linear_system()), ("coulomb", coulomb_system()),
                     ("gaussian", gaussian_system())):
    Q = effective_Q(gs, 3, 2.0)
    sol = solve_et(system, Q)
    print(f"{name:9s} Q={Q:.1f}  E={sol.E:+.4f}  rho0={sol.rho0:.4f}  "
          f"bound: {variational_character(system).name}")

#%%
# Step 2. Closed forms
# --------------------
# Power laws have an explicit solution; the numeric root agrees to round-off.
E, rho0 = powerlaw_solution(F=0.5, alpha=2, a=0.5, b=1, N=3, K=3, D=3, Q=3.0)
print("closed form", E, rho0)
print("numeric    ", solve_et(linear_system(), 3.0).E)

# The exponential well goes through the principal Lambert branch.
x = np.array([-1 / math.e, -0.2, 0.0, 1.0, 10.0])
print("W0:", [f"{lambert_w0(v):.6f}" for v in x])

#%%
# Step 3. Changing phi
# --------------------
# phi_DOS follows from the local stiffness of the potential; phi_GS is
# tuned so that the ground state hits a known energy.
excited = StateSpec(((1, 0), (0, 0)), L=0)
for phi in (2.0, dos_phi(linear_system(), excited), calibrate_phi(linear_system(), gs, 2.753)):
    Q = effective_Q(excited, 3, phi)
    print(f"phi={phi:.4f}  Q_phi={Q:.4f}  E={solve_et(linear_system(), Q, phi).E:.4f}")
