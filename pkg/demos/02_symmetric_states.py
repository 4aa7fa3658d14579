"""
Symmetric oscillator states of three identical particles
========================================================

Eigenstates of the auxiliary oscillator live in bands of fixed ``Q*``.
Inside a band, Talmi-Moshinsky rotations mix the Jacobi coordinates and a
permutation projector keeps the completely (anti)symmetric combinations.
"""
#%%
import math

import numpy as np

from envtheory import band_rotation, enumerate_band, permutation_matrices, symmetrize

#%%
# Step 1. Band content
# --------------------
for Q in range(4):
    for L in range(Q + 1):
        print(Q, L, len(enumerate_band(Q, L)), "coupled states")

#%%
# Step 2. Brackets are rotations
# ------------------------------
U = band_rotation(4, 2, math.pi / 3)
print("orthogonality defect:", np.abs(U @ U.T - np.eye(len(U))).max())
P12, P13, P23 = permutation_matrices(4, 2)
print("P13 == P12 P23 P12:", np.allclose(P13, P12 @ P23 @ P12))

#%%
# Step 3. Lowest symmetric states
# -------------------------------
# Some (Q*, L) pairs admit no symmetric state at all, e.g. (1, 1) and (3, 0).
for Q, L in ((0, 0), (2, 0), (2, 2), (3, 1), (3, 3), (1, 1), (3, 0)):
    states = symmetrize(Q, L, sigma=1)
    if not states:
        print(f"|1;{Q};{L}> forbidden")
        continue
    for st in states:
        print(st.label(), {k[:4]: round(c, 4) for k, c in st.components})
