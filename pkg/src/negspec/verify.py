"""Named verification suites behind the command-line front end.

Each suite bundles the keystone identities of one module family with
its randomized invariant checks (fixed seed, so a suite is a pure
function of its arguments).  Checks report a measured number, the
expected value, and the tolerance that gates PASS, so a failure
message carries enough to diagnose without rerunning.

quick=True shrinks grids and sample counts to fit every suite in well
under a minute combined; tolerances that depend on sample counts are
widened accordingly and never silently reused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExtrapolationDiverged
from .kernels import (InflationParams, SpacetimeSeparation, ThermalState,
                      em_corr, em_corr_values, em_ft_kernel, em_power_total,
                      scalar_corr, scalar_ft_kernel, scalar_corr_values,
                      thermal_power)
from .modesum import (ModeSumConfig, continuum_pair_integral,
                      continuum_pair_limit, mode_pair_sum,
                      order_of_limits_report)
from .regquad import (OscillatoryIntegrand, RegulatorSchedule, abel_limit,
                      finite_panel_integral, mc_integrate,
                      oscillatory_integral)
from .smeared import (LOG_REP_NORM, SmearingConfig, TestFunctionSpec,
                      _bipolar_pairing, _log_sq, ell_invariance_scan,
                      smeared_K, smeared_K_direct)
from .spectra import (BandLimit, band_limited_corr,
                      extremum_interchange_report, forward_spatial_ft,
                      inverse_spatial_ft, temporal_ft)
from .thermal import (crossover_ratio_closed_form, crossover_temperature,
                      fig1_table, thermal_corr_imagesum, thermal_image_term,
                      thermal_power_image_decomposition)

PI = math.pi

_DEFAULT_SEED = 20260816

# both deterministic reductions of the concentric Gaussian pair
# (sigma_t = 0.5, sigma_x = 1.0, unit amplitudes) agree on the pairing
# integral to 6e-12; this is the strongest fixed point for the
# stratified estimator
_GAUSS_PAIR_ORACLE_K = 4.1763023802286e3 / LOG_REP_NORM

# separation grid for the inverse-transform identities: off-cone points
# with |r - tau| >= 0.3, both coordinates in [0.5, 2]
_ROUNDTRIP_AXIS = (0.5, 0.8, 1.2, 1.6, 2.0)

SUITE_NAMES = ("transforms", "modesum", "thermal", "smeared")


@dataclass(frozen=True)
class CheckResult:
    """One named verification outcome.

    measured / expected / tolerance are what the gate compared; their
    meaning (deviation, value, count) is spelled out in detail.
    """

    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""


def format_check(c: CheckResult) -> str:
    status = "PASS" if c.passed else "FAIL"
    line = (f"{status} {c.name}: measured={c.measured:.6g} "
            f"expected={c.expected:.6g} tol={c.tolerance:.3g}")
    if c.detail:
        line += f" ({c.detail})"
    return line


def _dev_check(name, measured, tol, detail="") -> CheckResult:
    """Gate a deviation-type measurement against zero."""
    return CheckResult(name=name, passed=bool(measured <= tol),
                       measured=float(measured), expected=0.0,
                       tolerance=float(tol), detail=detail)


def _roundtrip_grid(quick: bool):
    if quick:
        return ((0.5, 1.2), (0.8, 2.0), (1.6, 0.5), (2.0, 1.2))
    pts = []
    for tau in _ROUNDTRIP_AXIS:
        for r in _ROUNDTRIP_AXIS:
            if abs(r - tau) >= 0.2:
                pts.append((tau, r))
    return tuple(pts)


def _check_inverse_roundtrip(kernel, corr, name, tol, quick) -> CheckResult:
    worst = 0.0
    pts = _roundtrip_grid(quick)
    for tau, r in pts:
        sep = SpacetimeSeparation(tau, r)
        got = inverse_spatial_ft(kernel, sep).value
        ref = corr(sep)
        worst = max(worst, abs(got - ref) / abs(ref))
    return _dev_check(name, worst, tol,
                      f"max rel deviation over {len(pts)} separations")


def _em_corr_r0_complex(z):
    """EM correlator at coincident position, continued to complex time."""
    z = np.asarray(z)
    return 3.0 / (PI**4 * z**8)


def _checks_temporal(quick) -> list:
    omegas = (1.0, 2.0, 4.0) if quick else (1.0, 1.5, 2.0, 3.0, 4.0)
    vals = np.array([temporal_ft(_em_corr_r0_complex, w).value
                     for w in omegas])
    slope, logc = np.polyfit(np.log(omegas), np.log(np.abs(vals)), 1)
    coeff = math.exp(logc) * math.copysign(1.0, vals[0])
    ref_coeff = 1.0 / (560.0 * PI**2)
    out = [CheckResult(
        name="transforms.temporal_exponent", passed=abs(slope - 7.0) <= 0.05,
        measured=float(slope), expected=7.0, tolerance=0.05,
        detail=f"log-log fit over omega={omegas}")]
    out.append(CheckResult(
        name="transforms.temporal_positive",
        passed=bool(coeff > 0.0 and (vals > 0.0).all()),
        measured=float(coeff), expected=ref_coeff, tolerance=math.inf,
        detail="sign gate only; measured coefficient reported against the "
               f"undamped-path value, ratio {coeff / ref_coeff:.4f}"))
    return out


def _checks_band(rng, quick) -> list:
    out = []
    band = BandLimit(1.0, 2.0)

    def spectrum_family(c):
        return lambda k: c[0] * k + c[1] * np.sin(k) + c[2] * k**2 * np.exp(-k)

    worst_odd = 0.0
    worst_lin = 0.0
    n_fam = 3 if quick else 6
    rs = np.concatenate(([1e-9], rng.uniform(0.05, 15.0, 4 if quick else 8)))
    for _ in range(n_fam):
        c1 = rng.standard_normal(3)
        c2 = rng.standard_normal(3)
        P = spectrum_family(c1)
        Q = spectrum_family(c2)
        a, b = rng.uniform(-2.0, 2.0, 2)
        for r in rs:
            plus = band_limited_corr(P, band, float(r))
            minus = band_limited_corr(lambda k: -P(k), band, float(r))
            worst_odd = max(worst_odd, abs(plus + minus))
            combo = band_limited_corr(
                lambda k: a * P(k) + b * Q(k), band, float(r))
            parts = a * plus + b * band_limited_corr(Q, band, float(r))
            scale = max(abs(combo), abs(parts), 1e-30)
            worst_lin = max(worst_lin, abs(combo - parts) / scale)
    out.append(_dev_check("transforms.band_antisymmetry", worst_odd, 0.0,
                          "exact oddness under spectrum negation"))
    out.append(_dev_check("transforms.band_linearity", worst_lin, 1e-8,
                          "rel deviation from linear combination"))

    P = spectrum_family(np.array([0.5, 1.0, -0.3]))
    r_switch = 1e-6 / band.k1
    lo = band_limited_corr(P, band, 0.5 * r_switch)
    hi = band_limited_corr(P, band, 2.0 * r_switch)
    out.append(_dev_check("transforms.band_r0_continuity",
                          abs(lo - hi) / max(abs(lo), 1e-30), 1e-8,
                          "limit branch vs quadrature branch at the switch"))

    r_grid = np.linspace(0.1, 20.0, 150 if quick else 400)
    em_band = BandLimit(1.0, 2.0)

    def em_power(k):
        return em_ft_kernel(0.0, np.asarray(k, dtype=float))

    rec_p = extremum_interchange_report(em_power, em_band, r_grid)
    rec_m = extremum_interchange_report(
        lambda k: -em_power(k), em_band, r_grid)
    swap = {"min": "max", "max": "min"}
    mismatches = sum(
        1 for a, b in zip(rec_p, rec_m)
        if not (abs(a.r - b.r) <= 1e-12 and swap[a.kind] == b.kind))
    mismatches += abs(len(rec_p) - len(rec_m))
    out.append(_dev_check("transforms.extremum_interchange",
                          float(mismatches), 0.0,
                          f"{len(rec_p)} extrema relabel under negation"))
    return out


def _checks_kernel_invariants(rng, quick) -> list:
    out = []
    n = 6 if quick else 12
    tau = rng.uniform(-2.0, 2.0, n)
    r = rng.uniform(0.2, 2.5, n)
    keep = np.abs(r - np.abs(tau)) > 0.15
    tau, r = tau[keep], r[keep]
    lam = rng.uniform(0.5, 2.0, 4)

    worst = 0.0
    for lv in lam:
        s = scalar_corr_values(lv * tau, lv * r) * lv**4
        e = em_corr_values(lv * tau, lv * r) * lv**8
        worst = max(worst,
                    np.max(np.abs(s / scalar_corr_values(tau, r) - 1.0)),
                    np.max(np.abs(e / em_corr_values(tau, r) - 1.0)))
    out.append(_dev_check("transforms.kernel_scaling", worst, 1e-12,
                          "lambda^-4 and lambda^-8 coordinate scaling"))

    k = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    parity = max(
        np.max(np.abs(scalar_corr_values(-tau, r)
                      - scalar_corr_values(tau, r))),
        np.max(np.abs(em_corr_values(-tau, r) - em_corr_values(tau, r))),
        np.max(np.abs(scalar_ft_kernel(-tau, 1.3)
                      - scalar_ft_kernel(tau, 1.3))),
        np.max(np.abs(em_ft_kernel(-tau, 1.3) - em_ft_kernel(tau, 1.3))))
    out.append(_dev_check("transforms.kernel_parity", parity, 0.0,
                          "evenness in the time offset, values and kernels"))

    neg = max(float(np.max(scalar_ft_kernel(0.0, k))),
              float(np.max(em_ft_kernel(0.0, k))))
    out.append(CheckResult(
        name="transforms.kernel_negativity", passed=bool(neg < 0.0),
        measured=neg, expected=-math.inf, tolerance=0.0,
        detail="largest equal-time kernel value over the k grid"))

    worst = 0.0
    for lv in lam:
        worst = max(
            worst,
            np.max(np.abs(scalar_ft_kernel(0.0, lv * k)
                          / (lv * scalar_ft_kernel(0.0, k)) - 1.0)),
            np.max(np.abs(em_ft_kernel(0.0, lv * k)
                          / (lv**5 * em_ft_kernel(0.0, k)) - 1.0)))
    out.append(_dev_check("transforms.kernel_spectral_scaling", worst, 1e-12,
                          "lambda^1 scalar and lambda^5 field-strength laws"))

    worst = 0.0
    for lv in lam:
        a = thermal_power(lv * 1.7, ThermalState(beta=0.9 / lv))
        b = lv**5 * thermal_power(1.7, ThermalState(beta=0.9))
        worst = max(worst, abs(a / b - 1.0))
    out.append(_dev_check("transforms.thermal_scaling", worst, 1e-12,
                          "thermal_power(lambda k, beta/lambda) law"))

    eps = 1e-9
    cont = max(
        float(np.max(np.abs(scalar_ft_kernel(eps, k)
                            / scalar_ft_kernel(0.0, k) - 1.0))),
        float(np.max(np.abs(em_ft_kernel(eps, k)
                            / em_ft_kernel(0.0, k) - 1.0))))
    out.append(_dev_check("transforms.kernel_smalltau_continuity", cont,
                          1e-10, "kernels continuous into the tau=0 line"))
    return out


def _checks_quadrature_engine(rng, quick) -> list:
    out = []
    sched = RegulatorSchedule((0.2, 0.1, 0.05, 0.025, 0.0125), 4)
    worst = 0.0
    for _ in range(3 if quick else 6):
        coef = rng.standard_normal(sched.extrapolation_order + 1)

        def poly(alpha):
            return float(np.polyval(coef[::-1], alpha))

        got = abel_limit(poly, sched).value
        worst = max(worst, abs(got - coef[0]) / max(1.0, abs(coef[0])))
    out.append(_dev_check("transforms.abel_polynomial_exact", worst, 1e-11,
                          "zero-regulator limit of polynomial families"))

    worst = 0.0
    alpha = 0.3
    for _ in range(2 if quick else 4):
        a0, a1 = rng.uniform(0.5, 2.0, 2)
        freq = rng.uniform(0.8, 3.0)
        kind = "sin" if rng.random() < 0.5 else "cos"

        def amp(q):
            return a0 / (1.0 + a1 * np.asarray(q) ** 2)

        g = OscillatoryIntegrand(amplitude=amp, phase_frequency=freq,
                                 kind=kind)
        fast = oscillatory_integral(g, alpha=alpha)
        trig = np.sin if kind == "sin" else np.cos

        def full(q):
            q = np.asarray(q)
            return amp(q) * trig(freq * q) * np.exp(-alpha * q)

        dense = finite_panel_integral(full, 0.0, 50.0 / alpha).value
        bound = max(3.0 * fast.error_estimate, 1e-9 * abs(dense))
        worst = max(worst, abs(fast.value - dense) / bound)
    out.append(_dev_check("transforms.oscillatory_vs_dense", worst, 1.0,
                          "deviation over stated error bound, damped family"))

    def blob(pts):
        return np.cos(3.0 * pts[:, 0]) * pts[:, 1] ** 2

    n0 = 20_000
    r1 = mc_integrate(blob, ((0.0, 1.0), (0.0, 1.0)), n0, seed=7)
    r2 = mc_integrate(blob, ((0.0, 1.0), (0.0, 1.0)), 10 * n0, seed=7)
    ratio = (r1.error_estimate / r2.error_estimate) / math.sqrt(10.0)
    out.append(CheckResult(
        name="transforms.mc_error_scaling",
        passed=bool(0.5 <= ratio <= 2.0), measured=float(ratio),
        expected=1.0, tolerance=2.0,
        detail="standard-error ratio across a 10x sample increase"))

    r1b = mc_integrate(blob, ((0.0, 1.0), (0.0, 1.0)), n0, seed=7)
    out.append(_dev_check("transforms.mc_determinism",
                          abs(r1.value - r1b.value), 0.0,
                          "identical value for identical seed"))
    return out


def suite_transforms(quick: bool = False, seed: int = _DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed)
    out = [
        _check_inverse_roundtrip(scalar_ft_kernel, scalar_corr,
                                 "transforms.scalar_inverse_roundtrip",
                                 1e-4, quick),
        _check_inverse_roundtrip(em_ft_kernel, em_corr,
                                 "transforms.em_inverse_roundtrip",
                                 1e-3, quick),
    ]
    out += _checks_temporal(quick)
    out += _checks_band(rng, quick)
    out += _checks_kernel_invariants(rng, quick)
    out += _checks_quadrature_engine(rng, quick)
    return out


def suite_modesum(quick: bool = False, seed: int = _DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed)
    out = []
    cfg = ModeSumConfig(box_size=2.0 * PI, mode_index=1, max_index=16)
    rep = order_of_limits_report(cfg, cutoff_indices=(10, 20, 40, 80),
                                 tau_ladder=(0.4, 0.2, 0.1))
    out.append(CheckResult(
        name="modesum.static_divergence_slope",
        passed=abs(rep.static_slope - 1.0) <= 0.1,
        measured=rep.static_slope, expected=1.0, tolerance=0.1,
        detail="log-log growth of the frozen-time sum over cutoff doublings"))
    out.append(CheckResult(
        name="modesum.static_divergence_flag",
        passed=bool(rep.static_diverged), measured=float(rep.static_diverged),
        expected=1.0, tolerance=0.0,
        detail="cutoff extrapolation must refuse to converge"))

    worst = 0.0
    for tau in (0.5, 1.0):
        got = continuum_pair_limit(tau, 1.0).value
        ref = -math.sin(tau) / (64.0 * PI**5 * tau)
        worst = max(worst, abs(got - ref) / abs(ref))
    out.append(_dev_check("modesum.continuum_pair_match", worst, 1e-3,
                          "cutoff-free pair integral vs the closed kernel"))

    rel = abs(rep.small_tau_limit - rep.reference) / abs(rep.reference)
    out.append(_dev_check("modesum.small_tau_limit", rel, 1e-3,
                          "offset-to-zero limit vs -1/(64 pi^5)"))

    out += _checks_modesum_invariants(rng, quick)
    return out


def _checks_modesum_invariants(rng, quick) -> list:
    out = []
    vals = []
    for _ in range(2 if quick else 4):
        c = ModeSumConfig(box_size=float(rng.uniform(3.0, 9.0)),
                          mode_index=int(rng.integers(1, 4)),
                          max_index=int(rng.integers(4, 12)))
        vals.append(mode_pair_sum(0.0, c))
    out.append(CheckResult(
        name="modesum.lattice_positivity",
        passed=bool(min(vals) > 0.0), measured=float(min(vals)),
        expected=math.inf, tolerance=0.0,
        detail="every frozen-time lattice sum is a sum of positive terms"))

    c = ModeSumConfig(box_size=5.0, mode_index=2, max_index=10)
    tau = float(rng.uniform(0.1, 1.5))
    parity = abs(mode_pair_sum(-tau, c) - mode_pair_sum(tau, c))
    out.append(_dev_check("modesum.lattice_time_parity", parity, 0.0,
                          "cosine pair phases are even in the offset"))
    vp = mode_pair_sum(tau, c)
    vm = mode_pair_sum(tau, ModeSumConfig(5.0, -2, 10))
    # the paired terms match exactly but accumulate in opposite order
    out.append(_dev_check("modesum.mode_relabel_symmetry",
                          abs(vp - vm) / abs(vp), 1e-13,
                          "probe index and its negative give the same sum"))

    # a sharp cutoff leaves a nondecaying oscillatory truncation term,
    # so the box-size ladder is compared through the shared damping
    tau, alpha = 0.8, 0.5
    ref = continuum_pair_integral(tau, 1.0, alpha)
    errs = []
    for scale in (1, 2, 4):
        c = ModeSumConfig(box_size=2.0 * PI * scale, mode_index=scale,
                          max_index=16 * scale, damping_alpha=alpha)
        errs.append(abs(mode_pair_sum(tau, c) - ref))
    monotone = errs[0] > errs[1] > errs[2]
    out.append(CheckResult(
        name="modesum.volume_convergence", passed=bool(monotone),
        measured=errs[2] / errs[0], expected=0.0, tolerance=1.0,
        detail="damped error vs continuum shrinks through box doublings "
               f"({errs[0]:.2e} -> {errs[1]:.2e} -> {errs[2]:.2e})"))
    return out


def suite_thermal(quick: bool = False, seed: int = _DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed)
    out = []
    ratio_ref = 1.0 / crossover_ratio_closed_form()
    worst = max(abs(crossover_temperature(k) / k - ratio_ref)
                for k in (0.5, 1.0, 2.0))
    out.append(CheckResult(
        name="thermal.crossover_ratio", passed=worst <= 1e-3,
        measured=ratio_ref + worst, expected=ratio_ref, tolerance=1e-3,
        detail="root-finder crossover vs the golden-ratio closed form, "
               "k in {0.5, 1, 2}"))

    Ts = np.linspace(0.2, 3.0, 100 if quick else 200)
    table = fig1_table(1.0, Ts)
    by = {ch: np.array([v for _, v, c in table.rows if c == ch])
          for ch in table.channels()}
    tot = by["total"]
    flips = np.flatnonzero(np.sign(tot[:-1]) != np.sign(tot[1:]))
    if flips.size:
        i = flips[0]
        # interpolate inside the flip interval; the grid edge itself can
        # sit well away from the zero at coarse spacing
        t_cross = float(Ts[i] + (Ts[i + 1] - Ts[i])
                        * tot[i] / (tot[i] - tot[i + 1]))
    else:
        t_cross = math.nan
    ok = (bool((by["vacuum"] < 0.0).all()) and bool((by["thermal"] > 0.0).all())
          and flips.size == 1 and 1.03 <= t_cross <= 1.05)
    out.append(CheckResult(
        name="thermal.fig1_shape", passed=ok, measured=t_cross,
        expected=ratio_ref, tolerance=0.01,
        detail="negative vacuum, positive thermal, single total sign change"))

    state = ThermalState(beta=1.0)

    def corr_T(u):
        return thermal_corr_imagesum(u, state)

    worst = 0.0
    for k in ((1.0, 2.0) if quick else (0.5, 1.0, 2.0, 5.0)):
        got = forward_spatial_ft(corr_T, k).value
        ref = thermal_power(k, state)
        worst = max(worst, abs(got - ref) / abs(ref))
    out.append(_dev_check("thermal.wiener_khinchine_closed_form", worst,
                          1e-6, "transform of the image sum vs closed form"))

    ks = np.linspace(0.05, 10.0, 25 if quick else 100)
    mn = min(forward_spatial_ft(corr_T, float(k)).value for k in ks)
    out.append(CheckResult(
        name="thermal.wiener_khinchine_positivity",
        passed=bool(mn > 0.0), measured=float(mn), expected=math.inf,
        tolerance=0.0,
        detail=f"smallest transformed value over {ks.size} wavenumbers"))

    r0 = thermal_corr_imagesum(0.0, state)
    ref = PI**4 / 1575.0
    out.append(_dev_check("thermal.coincident_point_value",
                          abs(r0 - ref) / ref, 1e-10,
                          "image sum at zero separation vs pi^4/1575"))

    out += _checks_thermal_invariants(rng, quick)
    return out


def _checks_thermal_invariants(rng, quick) -> list:
    out = []
    worst_final = 0.0
    ok_pos = True
    for _ in range(2 if quick else 4):
        k = float(np.exp(rng.uniform(np.log(0.3), np.log(3.0))))
        st = ThermalState(beta=float(rng.uniform(0.5, 2.0)))
        # terms fall off like e^{-n beta k}; size the sum so the tail
        # sits below the closed form by ~e^{-30}
        n_terms = max(60, int(math.ceil(30.0 / (st.beta * k))))
        terms = thermal_power_image_decomposition(k, st, n_terms)
        partial = np.cumsum(terms)
        ok_pos &= bool((terms > 0.0).all())
        worst_final = max(worst_final,
                          abs(partial[-1] / thermal_power(k, st) - 1.0))
    out.append(CheckResult(
        name="thermal.image_decomposition_positive",
        passed=bool(ok_pos and worst_final <= 1e-12),
        measured=worst_final, expected=0.0, tolerance=1e-12,
        detail="all per-image terms positive; their sum matches the "
               "closed form"))

    ok_mono = True
    for k in (0.1, 1.0, 10.0):
        Tg = np.linspace(0.1, 10.0, 10)
        kj = k * float(rng.uniform(0.9, 1.1))
        pv = [thermal_power(kj, ThermalState(beta=1.0 / T)) for T in Tg]
        ok_mono &= bool(np.all(np.diff(pv) > 0.0))
    out.append(CheckResult(
        name="thermal.monotone_in_temperature", passed=ok_mono,
        measured=float(ok_mono), expected=1.0, tolerance=0.0,
        detail="thermal channel strictly grows with temperature"))

    k = float(rng.uniform(0.5, 2.0))
    Tg = np.linspace(0.5 * k, 2.0 * k, 1000)
    tv = np.array([em_power_total(k, ThermalState(beta=1.0 / T))
                   for T in Tg])
    changes = int(np.count_nonzero(np.sign(tv[:-1]) != np.sign(tv[1:])))
    out.append(CheckResult(
        name="thermal.single_sign_change", passed=changes == 1,
        measured=float(changes), expected=1.0, tolerance=0.0,
        detail=f"total channel over T in [0.5k, 2k] at k={k:.3f}"))

    # the controlled sum guarantees its tail relative to the r = 0
    # scale, so the termwise comparison is normalized the same way
    state = ThermalState(beta=1.0)
    r = float(rng.uniform(0.0, 2.0))
    partial = sum(thermal_image_term(r, n, state) for n in range(1, 201))
    full = thermal_corr_imagesum(r, state)
    scale = PI**4 / 1575.0
    out.append(_dev_check("thermal.image_sum_termwise",
                          abs(partial - full) / scale, 1e-11,
                          "termwise partial sum matches the controlled sum"))
    return out


def suite_smeared(quick: bool = False, seed: int = _DEFAULT_SEED) -> list:
    out = []
    ga = TestFunctionSpec("gaussian", temporal_width=0.5, spatial_width=1.0)
    gb = TestFunctionSpec("gaussian", temporal_width=0.5, spatial_width=1.0)
    samples = 200_000 if quick else 1_000_000
    tol = 3e-2 if quick else 1e-2
    cfg = SmearingConfig(mc_samples=samples, seed=seed)
    rep = ell_invariance_scan(ga, gb, cfg, (1.0, 2.0, 5.0))
    out.append(_dev_check("smeared.ell_invariance",
                          rep.max_pairwise_rel_deviation, tol,
                          f"shared-sample scan over scale factors (1, 2, 5), "
                          f"{samples} samples"))

    res = smeared_K(ga, gb, cfg)
    pull = abs(res.value - _GAUSS_PAIR_ORACLE_K) / res.error_estimate
    out.append(CheckResult(
        name="smeared.gaussian_pair_oracle", passed=pull <= 4.0,
        measured=float(pull), expected=0.0, tolerance=4.0,
        detail="standardized deviation from the deterministic reduction "
               "of the concentric pair"))

    b1 = TestFunctionSpec("compact_bump", center=(0.0, -3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
    b2 = TestFunctionSpec("compact_bump", center=(0.0, 3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
    if quick:
        v_log, _ = _bipolar_pairing(b1, b2, 1.0, 24, "log")
        v_dir, _ = _bipolar_pairing(b1, b2, 1.0, 16, "direct")
        k_log = -v_log / LOG_REP_NORM
        rel = abs(k_log - v_dir) / abs(v_dir)
        out.append(_dev_check("smeared.disjoint_support_oracle", rel, 1e-2,
                              "reduced-resolution quadratures, both routes"))
    else:
        k_log = smeared_K(b1, b2, SmearingConfig()).value
        direct = smeared_K_direct(b1, b2, SmearingConfig(mc_samples=4_000_000,
                                                         seed=seed))
        rel = abs(k_log - direct.value) / abs(direct.value)
        out.append(_dev_check("smeared.disjoint_support_oracle", rel, 1e-2,
                              "by-parts route vs the unintegrated pairing "
                              "on spacelike-separated bumps"))

    out += _checks_smeared_invariants(seed)
    return out


def _checks_smeared_invariants(seed) -> list:
    out = []
    ga = TestFunctionSpec("gaussian", temporal_width=0.5, spatial_width=1.0)
    b1 = TestFunctionSpec("compact_bump", center=(0.0, -3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
    small = SmearingConfig(mc_samples=100_000, seed=seed)
    gc = TestFunctionSpec("gaussian", center=(0.2, 0.7, 0.0, 0.0),
                          temporal_width=0.6, spatial_width=0.9,
                          amplitude=2.0)
    r1 = smeared_K(ga, gc, small)
    r2 = smeared_K(gc, ga, small)
    mixed1 = smeared_K(ga, b1, small)
    mixed2 = smeared_K(b1, ga, small)
    swap = max(abs(r1.value - r2.value), abs(mixed1.value - mixed2.value))
    out.append(_dev_check("smeared.swap_symmetry", swap, 0.0,
                          "argument order cannot change a bit, any route"))

    gc3 = TestFunctionSpec("gaussian", center=(0.2, 0.7, 0.0, 0.0),
                           temporal_width=0.6, spatial_width=0.9,
                           amplitude=-3.0)
    r3 = smeared_K(ga, gc3, small)
    out.append(_dev_check("smeared.amplitude_bilinearity",
                          abs(r3.value - r1.value * (-1.5)), 0.0,
                          "amplitudes factor out of the estimate exactly"))

    shift = (0.4, -1.1, 0.3, 2.0)
    gas = TestFunctionSpec("gaussian",
                           center=tuple(np.add(ga.center, shift)),
                           temporal_width=0.5, spatial_width=1.0)
    gcs = TestFunctionSpec("gaussian",
                           center=tuple(np.add(gc.center, shift)),
                           temporal_width=0.6, spatial_width=0.9,
                           amplitude=2.0)
    r4 = smeared_K(gas, gcs, small)
    out.append(_dev_check("smeared.translation_invariance",
                          abs(r4.value / r1.value - 1.0), 1e-10,
                          "common center shift leaves the estimate fixed"))

    taus = np.array([0.3, 1.2, -0.8])
    rr = np.array([1.0, 0.4, 2.2])
    branch = float(np.max(np.abs(_log_sq(taus, rr, 1.0, 1e-9)
                                 / _log_sq(taus, rr, 1.0, 0.0) - 1.0)))
    out.append(_dev_check("smeared.branch_boundary_value", branch, 1e-6,
                          "regulated kernel approaches the closed branch"))
    return out


_SUITES = {
    "transforms": suite_transforms,
    "modesum": suite_modesum,
    "thermal": suite_thermal,
    "smeared": suite_smeared,
}


def run_suite(name: str, quick: bool = False,
              seed: int = _DEFAULT_SEED) -> list:
    """Run one named suite, or all of them, returning CheckResults."""
    if name == "all":
        out = []
        for n in SUITE_NAMES:
            out += _SUITES[n](quick=quick, seed=seed)
        return out
    if name not in _SUITES:
        raise KeyError(name)
    return _SUITES[name](quick=quick, seed=seed)


def invariant_checks(quick: bool = True, seed: int = _DEFAULT_SEED) -> list:
    """The randomized-invariant subset across every module.

    This is the bundle behind the blanket invariant acceptance gate;
    identity checks with their own criteria are excluded to keep the
    bundle fast and orthogonal.
    """
    rng = np.random.default_rng(seed)
    out = []
    out += _checks_kernel_invariants(rng, quick)
    out += _checks_quadrature_engine(rng, quick)
    out += _checks_band(rng, quick)
    out += _checks_modesum_invariants(rng, quick)
    out += _checks_thermal_invariants(rng, quick)
    out += _checks_smeared_invariants(seed)
    return out
