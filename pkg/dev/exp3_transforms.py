"""Dev experiment: end-to-end transform accuracy against closed forms."""
import itertools
import math
import time

import numpy as np

from negspec.kernels import (SpacetimeSeparation, ThermalState, em_corr_values,
                             em_corr, scalar_corr, scalar_ft_kernel, em_ft_kernel,
                             thermal_power, temporal_power)
from negspec.spectra import forward_spatial_ft, inverse_spatial_ft, temporal_ft
from negspec.thermal import thermal_corr_imagesum

PI = math.pi

# --- thermal correlator sanity: r = 0 closed value
st = ThermalState(beta=1.0)
v = thermal_corr_imagesum(0.0, st)
print(f"C_T(0) = {v:.15e}  vs pi^4/1575 = {PI**4/1575:.15e}  rel "
      f"{abs(v/(PI**4/1575)-1):.2e}")

# --- forward FT of image sum vs closed-form thermal power
t0 = time.time()
worst = 0.0
for k in (0.5, 1.0, 2.0, 5.0):
    res = forward_spatial_ft(lambda u: thermal_corr_imagesum(u, st), k)
    exact = thermal_power(k, st)
    rel = abs(res.value / exact - 1.0)
    worst = max(worst, rel)
    print(f"k={k}: fwd {res.value:.10e} exact {exact:.10e} rel {rel:.2e} "
          f"err_est {res.error_estimate:.1e} evals {res.evaluations}")
print(f"worst rel {worst:.2e}  ({time.time()-t0:.1f}s)")

# --- inverse FT acceptance grids (scalar 1e-4, EM 1e-3)
grid = [0.5, 0.8, 1.2, 1.6, 2.0]
t0 = time.time()
worst_s = worst_e = 0.0
for tau, r in itertools.product(grid, grid):
    if abs(r - tau) < 0.2:
        continue
    sep = SpacetimeSeparation(tau=tau, r=r)
    rs = inverse_spatial_ft(scalar_ft_kernel, sep)
    rel_s = abs(rs.value / scalar_corr(sep) - 1.0)
    re_ = inverse_spatial_ft(em_ft_kernel, sep)
    rel_e = abs(re_.value / em_corr(sep) - 1.0)
    worst_s, worst_e = max(worst_s, rel_s), max(worst_e, rel_e)
print(f"inverse grid: worst scalar {worst_s:.2e}  worst EM {worst_e:.2e} "
      f"({time.time()-t0:.1f}s)")

# --- temporal FT: em corr at r=0 is 3/(pi^4 z^8)
def em_r0(z):
    z = np.asarray(z)
    return 3.0 / (PI**4 * z**8)

t0 = time.time()
vals = []
for w in (1.0, 1.5, 2.0, 3.0, 4.0):
    res = temporal_ft(em_r0, w)
    vals.append((w, res.value))
    pred = w**7 / (840.0 * PI**3)
    print(f"omega={w}: {res.value:.6e}  pred w^7/(840 pi^3)={pred:.6e} "
          f"rel {abs(res.value/pred-1):.2e} err_est {res.error_estimate:.1e}")
lw = np.log([v[0] for v in vals]); lp = np.log([v[1] for v in vals])
slope, intercept = np.polyfit(lw, lp, 1)
print(f"slope {slope:.4f}  coeff {math.exp(intercept):.6e} "
      f"(1/(840 pi^3) = {1/(840*PI**3):.6e}, table value 1/(560 pi^2) = {1/(560*PI**2):.6e})")
res0 = temporal_ft(em_r0, 0.0)
print(f"omega=0: {res0.value:.3e} err_est {res0.error_estimate:.1e} ({time.time()-t0:.1f}s)")
