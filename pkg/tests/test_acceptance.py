"""Acceptance battery: ten gated criteria, one printed verdict line each.

Each test measures against the stated tolerance and budget, prints its
verdict through the capture bypass so the line is visible in any pytest
run, and only then asserts.
"""

import math
import time

import numpy as np
import pytest

from negspec.kernels import (SpacetimeSeparation, ThermalState, em_corr,
                             em_ft_kernel, scalar_corr, scalar_ft_kernel,
                             thermal_power)
from negspec.modesum import (ModeSumConfig, continuum_pair_limit,
                             order_of_limits_report)
from negspec.smeared import (DEFAULT_SMEARING, TestFunctionSpec,
                             ell_invariance_scan, smeared_K, smeared_K_direct)
from negspec.spectra import (BandLimit, band_limited_corr,
                             extremum_interchange_report, forward_spatial_ft,
                             inverse_spatial_ft, temporal_ft)
from negspec.thermal import (crossover_temperature, fig1_table,
                             thermal_corr_imagesum)
from negspec.verify import invariant_checks

PI = math.pi
SEED = 20260816

GRID_AXIS = (0.5, 0.8, 1.2, 1.6, 2.0)
GRID = [(t, r) for t in GRID_AXIS for r in GRID_AXIS if abs(r - t) >= 0.2]


def report(capsys, num, ok, detail, elapsed, budget):
    verdict = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"criterion {num:2d} {verdict}: {detail} "
              f"[{elapsed:.1f}s of {budget:.0f}s]")


def test_criterion_01_crossover(capsys):
    t0 = time.perf_counter()
    dev = max(abs(crossover_temperature(k) / k - 1.0390)
              for k in (0.5, 1.0, 2.0))
    dt = time.perf_counter() - t0
    ok = dev < 1e-3 and dt < 1.0
    report(capsys, 1, ok,
           f"crossover ratio 1.0390 +- 0.001, max dev {dev:.1e}", dt, 1)
    assert ok


def test_criterion_02_fig1_shape(capsys):
    t0 = time.perf_counter()
    k = 1.0
    Ts = np.linspace(0.2, 3.0, 200)
    table = fig1_table(k, Ts)
    vac = np.array(table.column("vacuum")[1])
    th = np.array(table.column("thermal")[1])
    tot = np.array(table.column("total")[1])
    flips = np.flatnonzero(np.sign(tot[:-1]) != np.sign(tot[1:]))
    if len(flips) == 1:
        i = flips[0]
        t_cross = Ts[i] + (Ts[i + 1] - Ts[i]) * tot[i] / (tot[i] - tot[i + 1])
    else:
        t_cross = math.nan
    dt = time.perf_counter() - t0
    ok = (np.all(vac < 0) and np.all(th > 0) and len(flips) == 1
          and 1.03 <= t_cross / k <= 1.05 and dt < 1.0)
    report(capsys, 2, ok,
           f"vacuum<0, thermal>0, single sign change at T/k={t_cross:.4f}",
           dt, 1)
    assert ok


def test_criterion_03_inverse_transform_scalar(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for tau, r in GRID:
        sep = SpacetimeSeparation(tau, r)
        num = inverse_spatial_ft(scalar_ft_kernel, sep).value
        ref = scalar_corr(sep)
        worst = max(worst, abs(num - ref) / abs(ref))
    dt = time.perf_counter() - t0
    ok = worst < 1e-4 and dt < 60.0
    report(capsys, 3, ok,
           f"scalar inverse transform on {len(GRID)} points, "
           f"worst rel {worst:.1e} (tol 1e-4)", dt, 60)
    assert ok


def test_criterion_04_inverse_transform_em(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for tau, r in GRID:
        sep = SpacetimeSeparation(tau, r)
        num = inverse_spatial_ft(em_ft_kernel, sep).value
        ref = em_corr(sep)
        worst = max(worst, abs(num - ref) / abs(ref))
    dt = time.perf_counter() - t0
    ok = worst < 1e-3 and dt < 60.0
    report(capsys, 4, ok,
           f"quadratic-field inverse transform on {len(GRID)} points, "
           f"worst rel {worst:.1e} (tol 1e-3)", dt, 60)
    assert ok


def test_criterion_05_wiener_khinchine_thermal(capsys):
    t0 = time.perf_counter()
    state = ThermalState(1.0)
    corr = lambda r: thermal_corr_imagesum(r, state)
    worst = max(abs(forward_spatial_ft(corr, k).value
                    - thermal_power(k, state)) / thermal_power(k, state)
                for k in (0.5, 1.0, 2.0, 5.0))
    transformed = [forward_spatial_ft(corr, k).value
                   for k in np.linspace(0.05, 10.0, 100)]
    smallest = min(transformed)
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and smallest > 0 and dt < 120.0
    report(capsys, 5, ok,
           f"thermal spectrum closed form rel {worst:.1e} (tol 1e-6), "
           f"min over 100-point grid {smallest:.1e} > 0", dt, 120)
    assert ok


def test_criterion_06_order_of_limits(capsys):
    t0 = time.perf_counter()
    cfg = ModeSumConfig(box_size=2 * PI, mode_index=1, max_index=16)
    rep = order_of_limits_report(cfg, cutoff_indices=(10, 20, 40, 80))
    slope_ok = abs(rep.static_slope - 1.0) < 0.1 and rep.static_diverged
    match = max(abs(continuum_pair_limit(tau, 1.0).value
                    + math.sin(tau) / (64 * PI**5 * tau))
                / (math.sin(tau) / (64 * PI**5 * tau))
                for tau in (0.5, 1.0))
    limit_rel = abs(rep.small_tau_limit - rep.reference) / abs(rep.reference)
    dt = time.perf_counter() - t0
    ok = slope_ok and match < 1e-3 and limit_rel < 1e-3 and dt < 120.0
    report(capsys, 6, ok,
           f"static slope {rep.static_slope:.3f} (1.0 +- 0.1), continuum "
           f"match rel {match:.1e}, small-offset limit rel {limit_rel:.1e}",
           dt, 120)
    assert ok


def test_criterion_07_smeared_observable(capsys):
    t0 = time.perf_counter()
    gauss = TestFunctionSpec(kind="gaussian", temporal_width=0.5,
                             spatial_width=1.0)
    scan = ell_invariance_scan(gauss, gauss, DEFAULT_SMEARING, (1.0, 2.0, 5.0))
    bump_l = TestFunctionSpec(kind="compact_bump", center=(0.0, -3.0, 0.0, 0.0),
                              temporal_width=0.2, spatial_width=0.5)
    bump_r = TestFunctionSpec(kind="compact_bump", center=(0.0, 3.0, 0.0, 0.0),
                              temporal_width=0.2, spatial_width=0.5)
    paired = smeared_K(bump_l, bump_r).value
    direct = smeared_K_direct(bump_l, bump_r).value
    rel = abs(paired - direct) / abs(direct)
    dt = time.perf_counter() - t0
    ok = (scan.max_pairwise_rel_deviation < 1e-2 and rel < 1e-2
          and dt < 300.0)
    report(capsys, 7, ok,
           f"scale scan deviation {scan.max_pairwise_rel_deviation:.1e} "
           f"(tol 1e-2), disjoint-support pairing vs direct rel {rel:.1e} "
           f"(tol 1e-2)", dt, 300)
    assert ok


def test_criterion_08_temporal_spectrum(capsys):
    t0 = time.perf_counter()
    corr = lambda z: 3.0 / (PI**4 * z**8)
    omegas = np.array([1.0, 1.5, 2.0, 3.0, 4.0])
    values = np.array([temporal_ft(corr, w).value for w in omegas])
    positive = np.all(values > 0)
    slope, intercept = np.polyfit(np.log(omegas), np.log(np.abs(values)), 1)
    coeff = math.exp(intercept)
    ratio = coeff * 560 * PI**2  # reported, not gated
    dt = time.perf_counter() - t0
    ok = positive and abs(slope - 7.0) < 0.05 and dt < 60.0
    report(capsys, 8, ok,
           f"exponent {slope:.3f} (7.00 +- 0.05), coefficient {coeff:.3e} "
           f"> 0, ratio to 1/(560 pi^2) = {ratio:.4f} (reported only)",
           dt, 60)
    assert ok


def test_criterion_09_band_limit_properties(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    anti_exact = True
    for _ in range(20):
        a, b, c = rng.uniform(-2, 2, size=3)
        k0 = rng.uniform(0.1, 2.0)
        band = BandLimit(k0, k0 + rng.uniform(0.5, 3.0))
        r = rng.uniform(0.0, 10.0)
        P = lambda k: a * k + b * np.sin(c * k)
        plus = band_limited_corr(P, band, r)
        minus = band_limited_corr(lambda k: -P(k), band, r)
        anti_exact = anti_exact and (minus == -plus)
    band = BandLimit(1.0, 2.0)
    r_grid = np.linspace(0.1, 20.0, 400)
    P_em = lambda k: em_ft_kernel(0.0, k)
    plus = extremum_interchange_report(P_em, band, r_grid)
    minus = extremum_interchange_report(lambda k: -P_em(k), band, r_grid)
    swap = {"min": "max", "max": "min"}
    interchanged = (len(plus) == len(minus) > 0 and
                    all(m.kind == swap[p.kind] for p, m in zip(plus, minus)))
    dt = time.perf_counter() - t0
    ok = anti_exact and interchanged and dt < 10.0
    report(capsys, 9, ok,
           f"antisymmetry exact on 20 random inputs, {len(plus)} extrema "
           f"interchange on the band (1, 2)", dt, 10)
    assert ok


def test_criterion_10_invariant_suites(capsys):
    t0 = time.perf_counter()
    checks = invariant_checks(quick=True, seed=SEED)
    n_pass = sum(c.passed for c in checks)
    dt = time.perf_counter() - t0
    ok = n_pass == len(checks) and dt < 60.0
    report(capsys, 10, ok,
           f"module invariants {n_pass}/{len(checks)} on seeded grids",
           dt, 60)
    assert ok
    for c in checks:
        assert c.passed, c.name
