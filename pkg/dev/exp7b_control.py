"""Variance structure of the smeared-pair Monte Carlo.

The raw estimator of int int g1 g2 ln^2(s/ell^2) is hopeless for
disjoint supports: g = lap box S kills everything below the 4th-order
joint curvature of the kernel, so the per-sample signal-to-noise is
~1e-10.  Since lap box annihilates cubics, subtracting per-sample
Taylor polynomials (degree <= 3 in either point's offset from its
center) is an exactly unbiased control variate.  This experiment
measures how far one-sided and two-sided subtraction go, and searches
for a Gaussian geometry that makes the ell-scan criterion achievable.
"""

import math
import time

import numpy as np
import sympy as sp

from negspec.smeared import (
    SmearingConfig, TestFunctionSpec, _draw_image_weighted,
    _draw_uniform_support, _log_sq, _bump, BUMP_SUPPORT_SIGMAS,
    LOG_REP_NORM, smeared_K_direct,
)

PI = math.pi


def mink(a, b):
    """Minkowski dot with signature (-,+,+,+), 4-vectors in last axis."""
    return (a[..., 1:] * b[..., 1:]).sum(axis=-1) - a[..., 0] * b[..., 0]


def check_a_derivs():
    m, ell = sp.symbols("m ell", positive=True)
    a = sp.log(m / ell ** 2) ** 2
    L = sp.log(m / ell ** 2)
    want = [L ** 2, 2 * L / m, (2 - 2 * L) / m ** 2, (4 * L - 6) / m ** 3,
            (22 - 12 * L) / m ** 4, (48 * L - 100) / m ** 5,
            (548 - 240 * L) / m ** 6]
    ok = all(sp.simplify(sp.diff(a, m, k) - want[k]) == 0 for k in range(7))
    print(f"log-squared derivative ladder correct: {ok}")


def a_derivs(m, ell):
    L = np.log(m / ell ** 2)
    return (L * L, 2 * L / m, (2 - 2 * L) / m ** 2, (4 * L - 6) / m ** 3,
            (22 - 12 * L) / m ** 4, (48 * L - 100) / m ** 5,
            (548 - 240 * L) / m ** 6)


def p3_taylor(m0, h1, h2, ell):
    """Degree-3 Taylor of ln^2((m0+h1+h2)/ell^2) in the offset, where
    h1 is the degree-1 and h2 the degree-2 increment piece."""
    a0, a1, a2, a3, _, _, _ = a_derivs(m0, ell)
    return (a0 + a1 * (h1 + h2) + 0.5 * a2 * (h1 * h1 + 2.0 * h1 * h2)
            + a3 / 6.0 * h1 ** 3)


def build_cross():
    """Joint double-Taylor (degree <= 3 in each offset) of the kernel
    around the center separation, generated symbolically."""
    u10, u01, u20, u11, u02, m, L, dy, dp = sp.symbols(
        "u10 u01 u20 u11 u02 m L dy dp")
    a = [L ** 2, 2 * L / m, (2 - 2 * L) / m ** 2, (4 * L - 6) / m ** 3,
         (22 - 12 * L) / m ** 4, (48 * L - 100) / m ** 5,
         (548 - 240 * L) / m ** 6]
    U = u10 * dy + u01 * dp + u20 * dy ** 2 + u11 * dy * dp + u02 * dp ** 2
    expr = sp.expand(sum(a[k] / sp.factorial(k) * U ** k for k in range(7)))
    keep = sp.S.Zero
    for term in expr.as_ordered_terms():
        if sp.degree(term, dy) <= 3 and sp.degree(term, dp) <= 3:
            keep += term
    keep = keep.subs({dy: 1, dp: 1})
    n_terms = len(keep.as_ordered_terms())
    print(f"cross-term polynomial: {n_terms} terms")
    fn = sp.lambdify((m, L, u10, u01, u20, u11, u02), keep, "numpy")
    return fn


CROSS = None


def residual_order_test():
    """F - P3_y - P3_y' + C must vanish at 4th order as offsets shrink."""
    rng = np.random.default_rng(5)
    ell = 1.0
    delta = np.array([0.3, 5.0, 0.4, -0.2])
    y0 = rng.standard_normal(4) * 0.3
    yp0 = rng.standard_normal(4) * 0.3
    print("residual scaling (want stable R/eps^4):")
    for eps in (0.4, 0.2, 0.1, 0.05):
        y = eps * y0
        yp = eps * yp0
        v = delta + y - yp
        mfull = mink(v, v)
        F = np.log(mfull / ell ** 2) ** 2
        v0 = delta - yp
        m0 = mink(v0, v0)
        h1 = 2.0 * mink(v0, y)
        h2 = mink(y, y)
        p3y = p3_taylor(m0, h1, h2, ell)
        v0p = delta + y
        m0p = mink(v0p, v0p)
        h1p = -2.0 * mink(v0p, yp)
        h2p = mink(yp, yp)
        p3yp = p3_taylor(m0p, h1p, h2p, ell)
        mbar = mink(delta, delta)
        c = CROSS(mbar, math.log(mbar / ell ** 2),
                  2.0 * mink(delta, y), -2.0 * mink(delta, yp),
                  mink(y, y), -2.0 * mink(y, yp), mink(yp, yp))
        r = F - p3y - p3yp + c
        print(f"  eps={eps:5.2f}: R={r: .3e}  R/eps^4={r / eps ** 4: .4e}")


def disjoint_stats(d, sig_t, sig_x, n, ell=1.0, seed=31):
    """Per-sample statistics of raw / one-sided / two-sided estimators
    for a disjoint bump pair at center distance d."""
    c1 = np.array([0.0, -d / 2, 0.0, 0.0])
    c2 = np.array([0.0, d / 2, 0.0, 0.0])
    s1 = TestFunctionSpec(kind="compact_bump", center=tuple(c1),
                          temporal_width=sig_t, spatial_width=sig_x)
    s2 = TestFunctionSpec(kind="compact_bump", center=tuple(c2),
                          temporal_width=sig_t, spatial_width=sig_x)
    gap = d - 2 * BUMP_SUPPORT_SIGMAS * sig_x
    span = 2 * BUMP_SUPPORT_SIGMAS * sig_t
    print(f"\nd={d} sig_t={sig_t} sig_x={sig_x}: gap {gap:.2f} "
          f"vs span {span:.2f}")
    if gap <= span:
        print("  not disjoint, skipped")
        return
    cfg = SmearingConfig(mc_samples=max(n, 160_000), seed=seed)
    direct = smeared_K_direct(s1, s2, cfg)
    e_direct = direct.value * (-LOG_REP_NORM)
    print(f"  direct K {direct.value:.6e} +- {direct.error_estimate:.1e} "
          f"(rel {direct.error_estimate / abs(direct.value):.1e})")

    rng = np.random.default_rng(seed)
    delta = c1 - c2
    mbar = float(mink(delta, delta))
    lbar = math.log(mbar / ell ** 2)
    stats = {k: [] for k in ("raw", "one", "two")}
    left = n
    while left > 0:
        mchunk = min(1 << 17, left)
        t1, x1, w1 = _draw_image_weighted(s1, rng, mchunk)
        t2, x2, w2 = _draw_image_weighted(s2, rng, mchunk)
        p1 = np.concatenate([t1[:, None], x1], axis=1)
        p2 = np.concatenate([t2[:, None], x2], axis=1)
        y = p1 - c1
        yp = p2 - c2
        v = p1 - p2
        mfull = mink(v, v)
        F = np.log(mfull / ell ** 2) ** 2
        ww = w1 * w2
        v0 = c1 - p2
        m0 = mink(v0, v0)
        h1 = 2.0 * mink(v0, y)
        h2 = mink(y, y)
        p3y = p3_taylor(m0, h1, h2, ell)
        v0p = p1 - c2
        m0p = mink(v0p, v0p)
        h1p = -2.0 * mink(v0p, yp)
        h2p = mink(yp, yp)
        p3yp = p3_taylor(m0p, h1p, h2p, ell)
        c = CROSS(mbar, lbar, 2.0 * mink(delta, y),
                  -2.0 * mink(delta, yp), mink(y, y),
                  -2.0 * mink(y, yp), mink(yp, yp))
        stats["raw"].append(ww * F)
        stats["one"].append(ww * (F - p3y))
        stats["two"].append(ww * (F - p3y - p3yp + c))
        left -= mchunk
    for name, chunks in stats.items():
        vals = np.concatenate(chunks)
        mean = vals.mean()
        std = vals.std()
        rel = abs(mean / e_direct - 1.0)
        n_req = (std / (0.003 * abs(e_direct))) ** 2
        print(f"  {name:4s}: mean {mean: .4e} (direct {e_direct: .4e}, "
              f"rel diff {rel:.2e})  std {std:.2e}  "
              f"N for 0.3% = {n_req:.1e}")


def gaussian_scan_geometry(sig_t, sig_x, off_t, off_x, n, seed=17):
    s1 = TestFunctionSpec(kind="gaussian", center=(0.0, 0.0, 0.0, 0.0),
                          temporal_width=sig_t, spatial_width=sig_x)
    s2 = TestFunctionSpec(kind="gaussian", center=(off_t, off_x, 0.0, 0.0),
                          temporal_width=sig_t, spatial_width=sig_x)
    rng = np.random.default_rng(seed)
    ells = (1.0, 2.0, 5.0)
    sums = np.zeros((3, 16))
    bs = n // 16
    for ib in range(16):
        left = bs
        acc = np.zeros(3)
        while left > 0:
            m = min(1 << 17, left)
            t1, x1, w1 = _draw_image_weighted(s1, rng, m)
            t2, x2, w2 = _draw_image_weighted(s2, rng, m)
            tau = t1 - t2
            r = np.sqrt(((x1 - x2) ** 2).sum(axis=-1))
            ww = w1 * w2
            for j, e in enumerate(ells):
                acc[j] += (ww * _log_sq(tau, r, e, 0.0)).sum()
            left -= m
        sums[:, ib] = acc / bs
    k = -sums.mean(axis=1) / LOG_REP_NORM
    se = sums.std(axis=1, ddof=1) / 4.0 / LOG_REP_NORM
    d12 = sums[0] - sums[1]
    d15 = sums[0] - sums[2]
    d25 = sums[1] - sums[2]
    dev_se = max(np.std(d, ddof=1) / 4.0 / LOG_REP_NORM
                 for d in (d12, d15, d25))
    kmag = abs(k).max()
    print(f"sig_t={sig_t} off=({off_t},{off_x}) n={n:.0e}: "
          f"K(ell=1) {k[0]: .4e} +- {se[0]:.1e}")
    print(f"   max dev SE {dev_se:.2e}  -> 3*devSE/|K| at 1e6: "
          f"{3 * dev_se * math.sqrt(n / 1e6) / kmag:.3f}")


if __name__ == "__main__":
    check_a_derivs()
    CROSS = build_cross()
    residual_order_test()
    t0 = time.time()
    disjoint_stats(6.0, 0.2, 0.5, 1 << 20)
    disjoint_stats(5.0, 0.1, 0.5, 1 << 20)
    disjoint_stats(10.0, 0.4, 1.0, 1 << 20)
    print(f"\n[disjoint stats took {time.time() - t0:.0f} s]")
    for args in ((1.0, 1.0, 0.0, 0.0), (0.5, 1.0, 0.0, 0.0),
                 (1.0, 1.0, 0.0, 1.0), (0.5, 1.0, 0.3, 0.8)):
        gaussian_scan_geometry(*args, n=320_000)
