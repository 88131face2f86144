"""
Many zeros from a staged construction
=====================================

Builds degree-n polynomials with n**2 zeros, checks them, and writes a phase
plot of the degree-10 case to ``extremal10.ppm`` in the working directory.
"""

# %% Schedules for small n
import time

import numpy as np
from polyzero.extremal import EXAMPLE_COEFFS, extremal_coefficients, extremal_poly, verify_extremal
from polyzero.render import inverse_contraction, render_phase, write_ppm

for n in range(1, 9):
    t = time.perf_counter()
    s = extremal_coefficients(n)
    census, worst = verify_extremal(s)
    print(f"n={n}: {len(census):3d} zeros  worst residual {worst:.1e}  ({time.perf_counter() - t:.2f}s)")

# %% The hand-picked ten-stage schedule
s10 = extremal_coefficients(10, EXAMPLE_COEFFS)
census, worst = verify_extremal(s10)
print(f"degree 10: {len(census)} zeros, residual {worst:.2e}")
print("stage radii:", np.array(s10.r))

# %% Zeros span many orders of magnitude, so squeeze the plane before plotting
pre = np.array([inverse_contraction(z) for z in census.points])
img = render_phase(extremal_poly(s10), (-5.5, 5.5, -5.5, 5.5), 600, 600, "contraction", pre)
write_ppm(img, "extremal10.ppm")
print("wrote extremal10.ppm; overflow pixels:", img.overflow)
