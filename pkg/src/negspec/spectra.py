"""Spatial and temporal transforms connecting correlators and power spectra.

Radial conventions (fixed package-wide, forward carries the 1/(2 pi)^3):

    forward:  P(k)      = 1/(2 pi^2 k) * int_0^inf du u sin(k u) corr(u)
    inverse:  C(tau, r) = 4 pi / r     * int_0^inf dk k sin(k r) kernel(tau, k)

Both integrals converge only as Abel limits for the vacuum kernels: the
engine damps with exp(-alpha u) and extrapolates alpha -> 0.  The
regulated product-of-sines integrals are even functions of the regulator
(write sin(kr) sin(k tau) as cosines; the surviving moments
int k^n cos(bk) e^{-ak} dk with n odd are even in a), so the inverse
transform extrapolates in alpha^2 by default.  Pass regulator_power=1.0
for a user kernel without that symmetry.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .regquad import (OscillatoryIntegrand, QuadratureResult,
                      RegulatorSchedule, abel_limit, finite_panel_integral,
                      oscillatory_integral)

PI = math.pi

#: Forward transforms act on absolutely integrable correlators, so the
#: regulator only needs to be small, not extrapolated from afar.
FORWARD_SCHEDULE = RegulatorSchedule((0.05, 0.025, 0.0125, 0.00625, 0.003125), 4)

# Neville extrapolation amplifies per-point quadrature noise by roughly the
# sum |l_i(0)| of Lagrange weights; 16 is a safe cap for the geometric
# schedules used here, folded into propagated error estimates.
_NEVILLE_NOISE_AMP = 16.0

# temporal_ft returns exactly zero when no damped value rises this far
# above the quadrature noise floor
_TEMPORAL_NOISE_GATE = 8.0

# Below r = _SMALL_R_FRAC / k1 the band-limited inverse transform switches
# to its exact r = 0 form.
_SMALL_R_FRAC = 1e-6


@dataclass(frozen=True)
class BandLimit:
    """Wavenumber band 0 <= k0 < k1."""

    k0: float
    k1: float

    def __post_init__(self):
        if not (math.isfinite(self.k0) and math.isfinite(self.k1)):
            raise DomainError("band edges must be finite")
        if self.k0 < 0.0 or self.k1 <= self.k0:
            raise DomainError("band must satisfy 0 <= k0 < k1")


def inverse_spatial_ft(kernel: Callable, sep, schedule: RegulatorSchedule = None,
                       regulator_power: float = 2.0,
                       abs_tol: float = 1e-12, rel_tol: float = 1e-11) -> QuadratureResult:
    """Reconstruct a correlator value from its spatial Fourier kernel.

    kernel(tau, k) must be vectorized in k.  sep is a SpacetimeSeparation
    with r > 0 and no imaginary shift.  Each regulator value produces one
    oscillatory half-line integral; the alpha -> 0 limit is then
    extrapolated.  Returns the reconstructed C(tau, r).

    The default regulator schedule is scaled to the light-cone distance
    |r - tau|: the damped integral is analytic in alpha^2 with radius of
    convergence (r - tau)^2, so putting the largest node at that radius
    keeps extrapolation truncation uniform over the (tau, r) plane, while
    the larger alphas at far-from-cone points kill the roundoff noise of
    steeply growing kernels (amplitude up to k^6 before damping).
    """
    if sep.im_shift != 0.0:
        raise DomainError("inverse transform is defined on the real-tau path")
    if sep.r <= 0.0:
        raise DomainError("need r > 0 for the radial inverse transform")
    if schedule is None:
        d = abs(sep.r - abs(sep.tau))
        if d <= 0.0:
            raise DomainError("on-cone separation needs an explicit schedule")
        schedule = RegulatorSchedule(
            tuple(d * 0.5 ** i for i in range(6)), extrapolation_order=5)
    tau = sep.tau
    quad_errs = []
    evals = [0]

    def damped(alpha: float) -> float:
        g = OscillatoryIntegrand(
            amplitude=lambda k: k * np.asarray(kernel(tau, k), dtype=float),
            phase_frequency=sep.r, kind="sin")
        res = oscillatory_integral(g, alpha=alpha, abs_tol=abs_tol, rel_tol=rel_tol)
        quad_errs.append(res.error_estimate)
        evals[0] += res.evaluations
        return res.value

    lim = abel_limit(damped, schedule, power=regulator_power)
    pref = 4.0 * PI / sep.r
    err = abs(pref) * (lim.error_estimate + _NEVILLE_NOISE_AMP * max(quad_errs))
    return QuadratureResult(value=pref * lim.value, error_estimate=err,
                            evaluations=evals[0])


def forward_spatial_ft(corr: Callable, k: float, schedule: RegulatorSchedule = None,
                       regulator_power: float = 1.0,
                       abs_tol: float = 1e-13, rel_tol: float = 1e-11) -> QuadratureResult:
    """Power spectrum value at wavenumber k > 0 from an isotropic correlator.

    corr(u) must be vectorized over the radial separation u.  Uses the
    1/(2 pi)^3 forward convention reduced to a radial sine transform, with
    the same regulate-and-extrapolate scheme as the inverse direction.
    """
    if k <= 0.0:
        raise DomainError("need k > 0")
    schedule = schedule or FORWARD_SCHEDULE
    quad_errs = []
    evals = [0]

    def damped(alpha: float) -> float:
        g = OscillatoryIntegrand(
            amplitude=lambda u: u * np.asarray(corr(u), dtype=float),
            phase_frequency=k, kind="sin")
        res = oscillatory_integral(g, alpha=alpha, abs_tol=abs_tol, rel_tol=rel_tol)
        quad_errs.append(res.error_estimate)
        evals[0] += res.evaluations
        return res.value

    lim = abel_limit(damped, schedule, power=regulator_power)
    pref = 1.0 / (2.0 * PI**2 * k)
    err = pref * (lim.error_estimate + _NEVILLE_NOISE_AMP * max(quad_errs))
    return QuadratureResult(value=pref * lim.value, error_estimate=err,
                            evaluations=evals[0])


def _temporal_single(corr: Callable, omega: float, eps: float,
                     abs_tol: float) -> QuadratureResult:
    """One fixed-regulator temporal transform.

    Computes int dt e^{i omega t} corr(t - i eps) over the whole line,
    folded onto [0, inf) using corr(-z) = corr(z) and real coefficients:
    2 int_0^inf [cos(wt) Re - sin(wt) Im] corr(t - i eps) dt.
    """
    def re_part(u):
        return np.asarray(corr(np.asarray(u, dtype=float) - 1j * eps)).real

    def im_part(u):
        return -np.asarray(corr(np.asarray(u, dtype=float) - 1j * eps)).imag

    if omega == 0.0:
        window = max(60.0, 400.0 * eps)
        res = finite_panel_integral(re_part, 0.0, window, abs_tol=abs_tol)
        tail = abs(re_part(np.asarray([window]))[0]) * window / 7.0
        return QuadratureResult(2.0 * res.value,
                                2.0 * (res.error_estimate + tail),
                                res.evaluations)

    gc = OscillatoryIntegrand(amplitude=re_part, phase_frequency=omega, kind="cos")
    gs = OscillatoryIntegrand(amplitude=im_part, phase_frequency=omega, kind="sin")
    rc = oscillatory_integral(gc, abs_tol=abs_tol, rel_tol=1e-11)
    rs = oscillatory_integral(gs, abs_tol=abs_tol, rel_tol=1e-11)
    return QuadratureResult(2.0 * (rc.value + rs.value),
                            2.0 * (rc.error_estimate + rs.error_estimate),
                            rc.evaluations + rs.evaluations)


def temporal_ft(corr: Callable, omega: float,
                epsilons: RegulatorSchedule = None) -> QuadratureResult:
    """Temporal power spectrum of an equal-position correlator.

    corr must accept complex arrays and satisfy corr(-z) = corr(z) with
    real Taylor coefficients (both package correlators do at r = 0).  The
    correlator is evaluated on the lower-half-plane path tau - i eps and
    paired with e^{+i omega tau}, which is the prescription that puts the
    spectrum's support at positive frequencies; see README (Conventions).
    The eps -> 0 limit is extrapolated over the given schedule, whose
    values scale like 1/omega by default.
    """
    if omega < 0.0:
        raise DomainError("need omega >= 0")
    scale = 1.0 / omega if omega > 0.0 else 1.0
    if epsilons is None:
        epsilons = RegulatorSchedule(
            tuple(c * scale for c in (1.0, 0.5, 0.25, 0.125)), 3)
    # absolute tolerance tied to the peak integrand so the cancellation
    # plateau is resolved without chasing noise
    probe = abs(complex(np.asarray(corr(np.asarray([-1j * epsilons.values[-1]]))).ravel()[0]))
    abs_tol = max(1e-300, 1e-13 * probe * epsilons.values[-1])

    quad_errs = []
    evals = [0]

    def damped(eps: float) -> float:
        res = _temporal_single(corr, omega, eps, abs_tol)
        quad_errs.append(res.error_estimate)
        evals[0] += res.evaluations
        return res.value

    vals = {eps: damped(eps) for eps in epsilons.values}
    noise = max(max(quad_errs), abs_tol)
    peak = max(abs(v) for v in vals.values())
    if peak <= _TEMPORAL_NOISE_GATE * noise:
        # every damped value sits at the quadrature noise floor, so the
        # transform is zero within noise; extrapolating the floor would
        # misread its 1/eps growth as divergence
        return QuadratureResult(value=0.0, error_estimate=max(peak, noise),
                                evaluations=evals[0])
    lim = abel_limit(lambda eps: vals[eps], epsilons)
    err = lim.error_estimate + _NEVILLE_NOISE_AMP * max(quad_errs)
    return QuadratureResult(value=lim.value, error_estimate=err,
                            evaluations=evals[0])


def band_limited_corr(P: Callable, band: BandLimit, r: float) -> float:
    """Equal-time correlator from a spectrum restricted to a wavenumber band.

    C(0, r) = 4 pi / r * int_{k0}^{k1} dk k sin(k r) P(k); at r below
    1e-6/k1 this switches to the exact r = 0 reduction 4 pi int k^2 P dk.
    P must be vectorized.  Exactly odd under P -> -P.
    """
    if r < 0.0:
        raise DomainError("need r >= 0")
    probe_k = np.linspace(band.k0 if band.k0 > 0 else band.k1 * 1e-12, band.k1, 33)
    scale = float(np.max(np.abs(probe_k * np.asarray(P(probe_k))))) * (band.k1 - band.k0)
    tol = 1e-13 * max(scale, 1e-290)
    if r < _SMALL_R_FRAC / band.k1:
        res = finite_panel_integral(
            lambda k: k * k * np.asarray(P(k), dtype=float),
            band.k0, band.k1, abs_tol=tol)
        return 4.0 * PI * res.value
    res = finite_panel_integral(
        lambda k: k * np.sin(k * r) * np.asarray(P(k), dtype=float),
        band.k0, band.k1, abs_tol=tol * max(1.0, r))
    return 4.0 * PI / r * res.value


@dataclass(frozen=True)
class ExtremumRecord:
    """One interior extremum of a band-limited correlator scan."""

    r: float
    value: float
    kind: str  # "min" or "max"


def extremum_interchange_report(P: Callable, band: BandLimit,
                                r_grid: Sequence) -> list:
    """Locate interior extrema of r -> band_limited_corr(P, band, r).

    Detection is by sign change of the discrete derivative on r_grid, with
    one parabolic refinement through the bracketing triple.  Negating P
    swaps every "min" label for "max" at identical abscissae, since the
    whole computation is exactly odd in P.
    """
    rs = np.asarray(list(r_grid), dtype=float)
    if rs.size < 3 or np.any(np.diff(rs) <= 0.0):
        raise DomainError("r_grid must be increasing with at least 3 points")
    vals = np.array([band_limited_corr(P, band, r) for r in rs])
    records = []
    for i in range(1, rs.size - 1):
        d1 = vals[i] - vals[i - 1]
        d2 = vals[i + 1] - vals[i]
        if d1 > 0.0 and d2 < 0.0:
            kind = "max"
        elif d1 < 0.0 and d2 > 0.0:
            kind = "min"
        else:
            continue
        denom = vals[i - 1] - 2.0 * vals[i] + vals[i + 1]
        if denom != 0.0:
            off = 0.5 * (vals[i - 1] - vals[i + 1]) / denom
            # clamp: the vertex must stay inside the bracketing triple
            off = min(max(off, -1.0), 1.0)
            r_star = rs[i] + off * 0.5 * (rs[i + 1] - rs[i - 1])
            v_star = vals[i] - 0.125 * (vals[i - 1] - vals[i + 1])**2 / denom
        else:
            r_star, v_star = rs[i], vals[i]
        records.append(ExtremumRecord(r=float(r_star), value=float(v_star), kind=kind))
    return records


@dataclass(frozen=True)
class SpectrumTable:
    """Long-format spectrum samples: rows of (x, value, channel).

    x is the wavenumber for spectra ("k") or the temperature for thermal
    sweeps ("T"); x must be strictly increasing within each channel.
    """

    rows: tuple
    x_name: str = "k"

    def __post_init__(self):
        norm = tuple((float(x), float(v), str(c)) for x, v, c in self.rows)
        object.__setattr__(self, "rows", norm)
        seen = {}
        for x, _, c in norm:
            if c in seen and x <= seen[c]:
                raise DomainError(
                    f"{self.x_name} must increase strictly within channel {c!r}")
            seen[c] = x

    def channels(self) -> tuple:
        out = []
        for _, _, c in self.rows:
            if c not in out:
                out.append(c)
        return tuple(out)

    def column(self, channel: str):
        xs = [x for x, _, c in self.rows if c == channel]
        vs = [v for _, v, c in self.rows if c == channel]
        return np.asarray(xs), np.asarray(vs)

    def to_csv(self, stream=None, metadata: dict = None) -> str:
        """Serialize: '#' metadata lines, then a header row, then data.

        Floats are written with 17 significant digits so they round-trip
        through IEEE-754 doubles exactly.
        """
        buf = io.StringIO()
        for key, val in (metadata or {}).items():
            buf.write(f"# {key}: {val}\n")
        buf.write(f"{self.x_name},value,channel\n")
        for x, v, c in self.rows:
            buf.write(f"{x:.17g},{v:.17g},{c}\n")
        text = buf.getvalue()
        if stream is not None:
            stream.write(text)
        return text
