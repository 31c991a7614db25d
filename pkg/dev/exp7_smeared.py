"""Oracle experiments for the smeared module.

1. Bump fourth-derivative image vs exact symbolic differentiation.
2. Gaussian image center value vs the frozen closed form.
3. log_kernel trivial values and timelike branch offset.
4. epsilon > 0 vs the epsilon = 0 boundary value away from the cone.
5. Total-derivative property: E[w] = int g = 0 for both kinds.
6. ell-invariance scan with Gaussians at 1e6 samples, factors {1,2,5}.
7. Disjoint-support oracle: log route vs direct correlator pairing.
8. Deviation scaling 1e4 -> 1e6 samples.
"""

import math
import time

import numpy as np
import sympy as sp

from negspec.smeared import (
    DEFAULT_SMEARING, SmearingConfig, TestFunctionSpec, _draw_image_weighted,
    _log_sq, _unit_image, ell_invariance_scan, log_kernel,
    smeared_K, smeared_K_direct, smeared_operator_image,
)

PI = math.pi


def exact_bump_image(wt, wx):
    t, rho = sp.symbols("t rho", real=True)
    prof = sp.exp(-1 / (1 - (t / wt) ** 2)) * sp.exp(-1 / (1 - (rho / wx) ** 2))

    def lap(f):
        return sp.diff(rho ** 2 * sp.diff(f, rho), rho) / rho ** 2

    box = sp.diff(prof, t, 2) - lap(prof)
    img = sp.simplify(lap(box))
    return sp.lambdify((t, rho), img, "numpy")


def check_bump_image():
    spec = TestFunctionSpec(kind="compact_bump", temporal_width=0.3,
                            spatial_width=0.7)
    wt = 4 * 0.3
    wx = 4 * 0.7
    exact = exact_bump_image(wt, wx)
    rng = np.random.default_rng(7)
    th = wt * (2 * rng.random(400) - 1) * 0.92
    rho = wx * rng.random(400) * 0.92 + 0.02 * wx
    got = _unit_image(spec, th, rho)
    want = exact(th, rho)
    scale = np.abs(want).max()
    err = np.abs(got - want).max() / scale
    print(f"bump image vs symbolic: max err {err:.3e} (rel to peak)")
    # axis branch
    got0 = _unit_image(spec, np.array([0.1]), np.array([0.0]))
    want0 = exact(0.1, 1e-7)
    print(f"bump image on axis: got {got0[0]:.10e} want {want0:.10e} "
          f"rel {abs(got0[0] / want0 - 1):.3e}")
    # near support edge, absolute scale
    the = np.array([0.99 * wt])
    rhoe = np.array([0.99 * wx])
    ge = _unit_image(spec, the, rhoe)
    we = exact(the, rhoe)
    print(f"bump image near edge: got {ge[0]:.6e} want {we[0]:.6e} "
          f"abs err/peak {abs(ge[0] - we[0]) / scale:.3e}")


def check_gaussian_center():
    st, sx = 0.8, 1.3
    spec = TestFunctionSpec(kind="gaussian", center=(0.5, 1.0, -2.0, 0.25),
                            temporal_width=st, spatial_width=sx, amplitude=3.0)
    img = smeared_operator_image(spec)
    got = img(np.array(spec.center))
    want = 3.0 * (3.0 / (st ** 2 * sx ** 2) - 15.0 / sx ** 4)
    print(f"gaussian center image: got {got:.12e} want {want:.12e} "
          f"rel {abs(got / want - 1):.3e}")


def check_log_kernel():
    cfg = SmearingConfig(ell=2.0)
    e = math.e
    # spacelike with s = ell^2 -> 0; s = e^2 ell^2 -> 4
    x = np.array([0.0, 2.0, 0.0, 0.0])
    o = np.zeros(4)
    print(f"log_kernel s=ell^2: {log_kernel(x, o, cfg):.3e} (want 0)")
    x2 = np.array([0.0, 2.0 * e, 0.0, 0.0])
    print(f"log_kernel s=e^2 ell^2: {log_kernel(x2, o, cfg):.12f} (want 4)")
    xt = np.array([math.sqrt(4.0 + 0.25), 0.5, 0.0, 0.0])
    got = log_kernel(xt, o, cfg)
    print(f"log_kernel timelike s=-ell^2: {got:.12f} (want {-PI**2:.12f})")
    # epsilon path approaches the boundary value
    rng = np.random.default_rng(3)
    tau = 2 * rng.random(50) - 1
    r = 2 * rng.random(50) + 1.2
    base = _log_sq(tau, r, 1.0, 0.0)
    for eps in (1e-4, 1e-6, 1e-8):
        d = np.abs(_log_sq(tau, r, 1.0, eps) - base).max()
        print(f"  eps={eps:.0e}: max |diff| {d:.3e}")


def check_zero_integral():
    for spec in (TestFunctionSpec(kind="gaussian", temporal_width=0.7,
                                  spatial_width=1.1),
                 TestFunctionSpec(kind="compact_bump", temporal_width=0.7,
                                  spatial_width=1.1)):
        rng = np.random.default_rng(11)
        tot, n = 0.0, 0
        for _ in range(40):
            _, _, w = _draw_image_weighted(spec, rng, 1 << 15)
            tot += w.sum()
            n += w.size
            se_scale = np.std(w)
        mean = tot / n
        print(f"int image d4x ({spec.kind}): {mean:.3e} "
              f"(SE ~ {se_scale / math.sqrt(n):.3e})")


def run_scan(samples, seed=20260816):
    s1 = TestFunctionSpec(kind="gaussian", center=(0.0, 0.0, 0.0, 0.0),
                          temporal_width=1.0, spatial_width=1.0)
    s2 = TestFunctionSpec(kind="gaussian", center=(0.4, 1.2, 0.0, 0.0),
                          temporal_width=1.0, spatial_width=1.0)
    cfg = SmearingConfig(mc_samples=samples, seed=seed)
    t0 = time.time()
    rep = ell_invariance_scan(s1, s2, cfg, (1.0, 2.0, 5.0))
    dt = time.time() - t0
    print(f"scan n={samples:.0e}: dev {rep.max_pairwise_rel_deviation:.3e} "
          f"({dt:.1f} s)")
    for f, v, e in zip(rep.factors, rep.values, rep.errors):
        print(f"  ell x{f:g}: K = {v: .6e} +- {e:.1e} "
              f"(rel SE {e / abs(v):.2e})")
    return rep


def check_disjoint(samples):
    s1 = TestFunctionSpec(kind="compact_bump", center=(0.0, -3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
    s2 = TestFunctionSpec(kind="compact_bump", center=(0.0, 3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
    cfg = SmearingConfig(mc_samples=samples, seed=99)
    t0 = time.time()
    direct = smeared_K_direct(s1, s2, cfg)
    t1 = time.time()
    logroute = smeared_K(s1, s2, cfg)
    t2 = time.time()
    rel = abs(logroute.value / direct.value - 1.0)
    print(f"disjoint n={samples:.0e}: direct {direct.value:.6e} "
          f"+- {direct.error_estimate:.1e} ({t1 - t0:.1f} s)")
    print(f"  log route {logroute.value:.6e} +- {logroute.error_estimate:.1e} "
          f"({t2 - t1:.1f} s)  rel diff {rel:.3e}")


def check_symmetry_translation():
    s1 = TestFunctionSpec(kind="gaussian", center=(0.0, 0.0, 0.0, 0.0))
    s2 = TestFunctionSpec(kind="gaussian", center=(0.4, 1.2, 0.0, 0.0))
    cfg = SmearingConfig(mc_samples=40_000)
    a = smeared_K(s1, s2, cfg)
    b = smeared_K(s2, s1, cfg)
    print(f"swap symmetry: bitwise equal {a.value == b.value}")
    shift = (0.7, -0.3, 0.2, 1.0)
    s1s = TestFunctionSpec(kind="gaussian",
                           center=tuple(c + d for c, d in zip(s1.center, shift)))
    s2s = TestFunctionSpec(kind="gaussian",
                           center=tuple(c + d for c, d in zip(s2.center, shift)))
    c = smeared_K(s1s, s2s, cfg)
    print(f"translation: {a.value:.6e} vs {c.value:.6e} "
          f"(diff {abs(a.value - c.value):.1e}, SE {a.error_estimate:.1e})")
    # amplitude bilinearity, exact
    s1a = TestFunctionSpec(kind="gaussian", center=s1.center, amplitude=2.0)
    d = smeared_K(s1a, s2, cfg)
    print(f"bilinearity: 2*K == K(2S1) exactly: {d.value == 2.0 * a.value}")


if __name__ == "__main__":
    check_bump_image()
    check_gaussian_center()
    check_log_kernel()
    check_zero_integral()
    check_symmetry_translation()
    run_scan(10_000)
    run_scan(100_000)
    run_scan(1_000_000)
    check_disjoint(1_000_000)
    check_disjoint(4_000_000)
