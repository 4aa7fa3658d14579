"""
Variational reference energies
==============================

The oracle diagonalises the Hamiltonian in a symmetry-adapted oscillator
basis, truncated at ``Q*_max`` quanta, and optimises the scale ``z``.
"""
#%%
from envtheory import (
    OracleConfig,
    coulomb_system,
    gaussian_system,
    linear_system,
    solve_oracle,
    truncated_diagnostics,
)

#%%
# Step 1. Convergence with the basis size
# ---------------------------------------
for qmax in (0, 4, 8, 12, 18):
    sol = solve_oracle(linear_system(), OracleConfig(Qstar_max=qmax))
    print(f"Q*max={qmax:2d}  E={sol.E_acc:.6f}  z={sol.z_opt:.4f}")

#%%
# Step 2. Excited states and band weights
# ---------------------------------------
sol = solve_oracle(gaussian_system(), OracleConfig(L=0, level=1, Qstar_max=18, et_band=2))
print("second 0+ of the Gaussian well:", sol.E_acc)
print({b: round(w, 4) for b, w in sol.band_weights.items() if w > 1e-4})

#%%
# Step 3. 1- and 3- are degenerate
# --------------------------------
for L in (1, 3):
    print(L, solve_oracle(linear_system(), OracleConfig(L=L, parity=-1, Qstar_max=17)).E_acc)

#%%
# Step 4. Size diagnostics in a small basis
# -----------------------------------------
# The optimum of z is shallow in a large basis. A basis cut at ten quanta
# gives a well-defined scale to compare with the envelope one.
d = truncated_diagnostics(coulomb_system(), OracleConfig(Qstar_max=30, et_band=0))
print({k: round(v, 3) for k, v in d.items()})
