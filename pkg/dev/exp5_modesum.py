"""Dev experiment: mode-sum module cross-checks.

1. Damped closed form vs the production kernel at alpha -> 0.
2. Numerical 1-d reduction (continuum_pair_limit) vs closed forms.
3. Lattice sum -> continuum convergence in box size at fixed damping.
4. Order-of-limits report: static slope, divergence flag, small-tau
   limit against -k/(64 pi^5).
"""
import math
import time

import numpy as np

from negspec.kernels import scalar_ft_kernel, SCALAR_SPECTRUM_NORM
from negspec.modesum import (ModeSumConfig, mode_pair_sum,
                             continuum_pair_integral, continuum_pair_limit,
                             cutoff_scan, cutoff_divergence_slope,
                             order_of_limits_report)
from negspec.regquad import RegulatorSchedule, abel_limit

PI = math.pi

print("== closed form vs production kernel (alpha -> 0 by extrapolation) ==")
for tau, k in [(0.7, 1.0), (0.3, 2.0), (1.3, 0.5)]:
    sched = RegulatorSchedule(tuple(tau * 0.5 ** i for i in range(6)), 5)
    lookup = {a: continuum_pair_integral(tau, k, a) for a in sched.values}
    lim = abel_limit(lambda a: lookup[a], sched, power=1.0)
    exact = scalar_ft_kernel(tau, k)
    print(f"tau={tau} k={k}: closed-extrap {lim.value:+.9e} "
          f"kernel {exact:+.9e} rel {abs(lim.value/exact-1):.2e}")

print("== numerical 1-d reduction vs production kernel ==")
t0 = time.time()
for tau, k in [(0.7, 1.0), (0.3, 2.0), (1.3, 0.5), (0.1, 1.0), (0.05, 1.0)]:
    res = continuum_pair_limit(tau, k)
    exact = scalar_ft_kernel(tau, k)
    print(f"tau={tau} k={k}: numeric {res.value:+.9e} kernel {exact:+.9e} "
          f"rel {abs(res.value/exact-1):.2e} err_est {res.error_estimate:.1e} "
          f"ev {res.evaluations}")
print(f"({time.time()-t0:.1f}s)")

print("== lattice -> continuum at fixed damping ==")
t0 = time.time()
tau, m, alpha = 0.4, 2, 0.5
for L in (8.0, 16.0, 32.0, 64.0):
    cfg = ModeSumConfig(box_size=L, mode_index=m,
                        max_index=int(30 / alpha / (2 * PI / L)) + 8,
                        damping_alpha=alpha)
    k = cfg.wavenumber
    lat = mode_pair_sum(tau, cfg)
    cont = continuum_pair_integral(tau, k, alpha)
    print(f"L={L:5.1f} N={cfg.max_index:4d} k={k:.4f}: lattice {lat:+.9e} "
          f"continuum {cont:+.9e} rel {abs(lat/cont-1):.2e}")
print(f"({time.time()-t0:.1f}s)")

print("== fixed k across boxes (scale m with L) ==")
t0 = time.time()
tau, alpha = 0.4, 0.5
for L, m in ((8.0, 1), (16.0, 2), (32.0, 4), (64.0, 8)):
    cfg = ModeSumConfig(box_size=L, mode_index=m,
                        max_index=int(30 / alpha / (2 * PI / L)) + 8,
                        damping_alpha=alpha)
    k = cfg.wavenumber
    lat = mode_pair_sum(tau, cfg)
    cont = continuum_pair_integral(tau, k, alpha)
    print(f"L={L:5.1f} m={m} N={cfg.max_index:4d}: lattice {lat:+.9e} "
          f"continuum {cont:+.9e} rel {abs(lat/cont-1):.2e}")
print(f"({time.time()-t0:.1f}s)")

print("== order-of-limits report ==")
t0 = time.time()
cfg = ModeSumConfig(box_size=16.0, mode_index=2, max_index=8)
rep = order_of_limits_report(cfg)
print(f"k = {rep.wavenumber:.6f}")
for c, v in zip(rep.static_cutoffs, rep.static_values):
    print(f"  cutoff {c:8.3f}: static value {v:+.6e}")
print(f"static slope {rep.static_slope:.4f} (want 1.0 +- 0.1)")
print(f"static diverged flag: {rep.static_diverged}")
for t, v in zip(rep.oscillating_taus, rep.oscillating_values):
    print(f"  tau {t:7.4f}: oscillating value {v:+.9e}")
print(f"small-tau limit {rep.small_tau_limit:+.9e} "
      f"reference {rep.reference:+.9e} "
      f"rel {abs(rep.small_tau_limit/rep.reference-1):.2e}")
print(f"({time.time()-t0:.1f}s)")
