"""
A short tour of polyzero
========================

Run with ``python3 demos/tour.py``. Each block below can also be pasted
into an interactive session.
"""

# %% Build a polynomial from the two coordinate symbols
import numpy as np
from polyzero import PolyPoly, bounds_report, degrees, finiteness_certificate, zero_atlas

Z, ZB = PolyPoly.z(), PolyPoly.zbar()
P = Z**5 + 2 * ZB          # analytic part dominates at infinity
print(P)
print(degrees(P))

# %% Which finiteness certificate applies, and how far out can zeros sit?
print(finiteness_certificate(P))
rep = bounds_report(P)
print(f"r0={rep.r0:.6f}  r1={rep.r1:.6f}  r2={rep.r2:.6f}")

# %% Find every zero in a disc that contains all of them
census = zero_atlas(P, 1.25 * rep.r0 + 0.5)
print(f"{len(census)} zeros, certified={census.certified}, index sum={census.index_sum}")
for c in census.zeros:
    print(f"  {c.z.real:+.12f} {c.z.imag:+.12f}i  index={c.index:+d}")

# %% The nonzero zeros all lie on one circle
radii = np.abs(census.points[np.abs(census.points) > 1e-9])
print("radii:", np.round(radii, 12), " 2**0.25 =", 2**0.25)
