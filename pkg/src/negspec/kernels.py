"""Closed-form correlators and power spectra for quadratic field observables.

Natural units throughout (hbar = c = k_B = 1).  Conventions, fixed once for
the whole package:

* forward spatial transform carries 1/(2 pi)^3, the inverse carries none;
* a power spectrum is the coefficient of delta^3(k - k') in the transform
  of the corresponding two-point correlation.

Both coordinate-space correlators are singular on the light cone r = |tau|.
Evaluation there raises LightConeSingularity rather than returning an
overflowed float.  The Fourier-side kernels are entire in tau; a short
Taylor series stabilizes sin(k tau)/tau near tau = 0 so the equal-time
spectra come out exact instead of 0/0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LightConeSingularity

PI = math.pi

# Relative light-cone proximity threshold, in units of max(r, |tau|).
LIGHTCONE_TOL = 1e-12

# |x| below which sin(x)/x switches to its Taylor series.
SERIES_TOL = 1e-3

SCALAR_CORR_NORM = 8.0 * PI**4        # corr = 1/(8 pi^4 (r^2 - tau^2)^2)
SCALAR_SPECTRUM_NORM = 64.0 * PI**5   # P(k) = -k/(64 pi^5)
EM_SPECTRUM_NORM = 960.0 * PI**5      # P0(k) = -k^5/(960 pi^5)
THERMAL_SPECTRUM_NORM = 480.0 * PI**5
TEMPORAL_SPECTRUM_NORM = 560.0 * PI**2  # P(omega) = omega^7/(560 pi^2)

# Normalization of the density-perturbation spectrum.  The denominator is
# fixed to 30*pi^2 by convention here; see README ("Conventions") for why
# this reading is adopted and flagged.
INFLATION_SPECTRUM_NORM = 30.0 * PI**2


@dataclass(frozen=True)
class SpacetimeSeparation:
    """Separation between two events: time difference tau, spatial distance r.

    im_shift is an optional imaginary part added to tau, used for
    complex-path evaluation (thermal image sums live at tau = i n beta).
    """

    tau: float
    r: float
    im_shift: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and math.isfinite(self.r)
                and math.isfinite(self.im_shift)):
            raise DomainError("separation components must be finite")
        if self.r < 0.0:
            raise DomainError(f"spatial separation must be >= 0, got {self.r}")

    def on_light_cone(self) -> bool:
        """True when r = |tau| to within LIGHTCONE_TOL (real path only)."""
        if self.im_shift != 0.0:
            return False
        scale = max(self.r, abs(self.tau))
        return abs(self.r - abs(self.tau)) <= LIGHTCONE_TOL * scale


@dataclass(frozen=True)
class ThermalState:
    """Equilibrium state at inverse temperature beta = 1/T."""

    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"inverse temperature must be positive, got {self.beta}")

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta


@dataclass(frozen=True)
class InflationParams:
    """Parameters of the expansion-era density-perturbation spectrum.

    lP: Planck length, H: expansion rate, S: scale factor ratio since the
    end of the expansion phase.  All strictly positive.
    """

    lP: float
    H: float
    S: float

    def __post_init__(self):
        for name in ("lP", "H", "S"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be positive, got {v}")


def _sinc(x):
    """sin(x)/x with a 4-term Taylor branch for |x| < SERIES_TOL.

    Accepts scalars or arrays; the two branches agree to ~1e-27 absolute
    at the switch point, far below float64 resolution.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_TOL
    safe = np.where(small, 1.0, x)
    direct = np.sin(safe) / safe
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def _check_off_cone(tau, r):
    """Raise LightConeSingularity if any (tau, r) pair sits on r = |tau|."""
    dist = np.abs(r - np.abs(tau))
    scale = np.maximum(r, np.abs(tau))
    if np.any(dist <= LIGHTCONE_TOL * scale):
        raise LightConeSingularity(
            "correlator evaluated on the light cone r = |tau|")


def scalar_corr_values(tau, r):
    """Vacuum :phi^2: correlator 1/(8 pi^4 (r^2 - tau^2)^2), array-friendly.

    tau and r broadcast; r must be >= 0.  Raises off the light cone.
    """
    tau = np.asarray(tau, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("spatial separation must be >= 0")
    _check_off_cone(tau, r)
    interval = (r - tau) * (r + tau)   # r^2 - tau^2, factored for conditioning
    out = 1.0 / (SCALAR_CORR_NORM * interval * interval)
    return out if out.ndim else float(out)


def scalar_corr(sep: SpacetimeSeparation) -> float:
    """Vacuum :phi^2: correlator at a single separation.

    For im_shift != 0 this is the real part of the complex-path value;
    use scalar_corr_complex for the full complex number.
    """
    if sep.im_shift != 0.0:
        return scalar_corr_complex(sep).real
    return scalar_corr_values(sep.tau, sep.r)


def scalar_corr_complex(sep: SpacetimeSeparation) -> complex:
    """Complex-path evaluation of the :phi^2: correlator at tau + i*im_shift."""
    if sep.im_shift == 0.0:
        _check_off_cone(sep.tau, sep.r)
    tau_c = complex(sep.tau, sep.im_shift)
    interval = (sep.r - tau_c) * (sep.r + tau_c)
    if interval == 0.0:
        raise LightConeSingularity("complex interval vanished")
    return 1.0 / (SCALAR_CORR_NORM * interval * interval)


def em_corr_values(tau, r):
    """Electromagnetic energy-density correlator, array-friendly.

    (tau^2 + 3 r^2)(r^2 + 3 tau^2) / (pi^4 (r^2 - tau^2)^6).
    """
    tau = np.asarray(tau, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("spatial separation must be >= 0")
    _check_off_cone(tau, r)
    t2 = tau * tau
    r2 = r * r
    interval = (r - tau) * (r + tau)
    out = (t2 + 3.0 * r2) * (r2 + 3.0 * t2) / (PI**4 * interval**6)
    return out if out.ndim else float(out)


def em_corr(sep: SpacetimeSeparation) -> float:
    """EM energy-density correlator at a single separation (real part)."""
    if sep.im_shift != 0.0:
        return em_corr_complex(sep).real
    return em_corr_values(sep.tau, sep.r)


def em_corr_complex(sep: SpacetimeSeparation) -> complex:
    """Complex-path EM energy-density correlator at tau + i*im_shift."""
    if sep.im_shift == 0.0:
        _check_off_cone(sep.tau, sep.r)
    tau_c = complex(sep.tau, sep.im_shift)
    r2 = sep.r * sep.r
    t2 = tau_c * tau_c
    interval = (sep.r - tau_c) * (sep.r + tau_c)
    if interval == 0.0:
        raise LightConeSingularity("complex interval vanished")
    return (t2 + 3.0 * r2) * (r2 + 3.0 * t2) / (PI**4 * interval**6)


def _require_nonnegative_k(k):
    if np.any(np.asarray(k) < 0.0):
        raise DomainError("wavenumber must be >= 0")


def _require_positive_k(k):
    if np.any(np.asarray(k) <= 0.0):
        raise DomainError("wavenumber must be > 0")


def scalar_ft_kernel(tau, k):
    """Spatial Fourier kernel of the :phi^2: correlator: -sin(k tau)/(64 pi^5 tau).

    Entire in tau; at tau = 0 it reduces to the power spectrum -k/(64 pi^5),
    negative for every k > 0.  k must be >= 0.  Broadcasts over arrays.
    """
    _require_nonnegative_k(k)
    tau = np.asarray(tau, dtype=float)
    k = np.asarray(k, dtype=float)
    out = -k * _sinc(k * tau) / SCALAR_SPECTRUM_NORM
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def em_ft_kernel(tau, k):
    """Spatial Fourier kernel of the EM energy-density correlator.

    -k^4 sin(k tau)/(960 pi^5 tau); equals -k^5/(960 pi^5) at tau = 0.
    """
    _require_nonnegative_k(k)
    tau = np.asarray(tau, dtype=float)
    k = np.asarray(k, dtype=float)
    out = -(k**5) * _sinc(k * tau) / EM_SPECTRUM_NORM
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def thermal_power(k, state: ThermalState):
    """Thermal photon-gas power spectrum -k^4 ln(1 - e^{-beta k})/(480 pi^5 beta).

    Strictly positive for all k > 0; requires k > 0.
    """
    _require_positive_k(k)
    k = np.asarray(k, dtype=float)
    b = state.beta
    out = -(k**4) * np.log1p(-np.exp(-b * k)) / (THERMAL_SPECTRUM_NORM * b)
    return out if out.ndim else float(out)


def em_power_total(k, state: ThermalState):
    """Vacuum plus thermal EM energy-density power spectrum at wavenumber k."""
    return em_ft_kernel(0.0, k) + thermal_power(k, state)


def temporal_power(omega):
    """Temporal power spectrum omega^7/(560 pi^2) of the EM energy density.

    Positive for omega > 0, as the ordinary (single-point, time-domain)
    Wiener-Khinchine theorem requires.  omega must be >= 0.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise DomainError("angular frequency must be >= 0")
    out = omega**7 / TEMPORAL_SPECTRUM_NORM
    return out if out.ndim else float(out)


def inflation_power(k, params: InflationParams):
    """Density-perturbation spectrum lP H S^2/(30 pi^2) (-S + 4 pi H/(5 k)).

    Positive below sign_change_wavenumber(params) and negative above it;
    tends to the constant -lP H S^3/(30 pi^2) as k -> infinity.  k > 0.
    """
    _require_positive_k(k)
    k = np.asarray(k, dtype=float)
    p = params
    out = (p.lP * p.H * p.S**2 / INFLATION_SPECTRUM_NORM) \
        * (-p.S + 4.0 * PI * p.H / (5.0 * k))
    return out if out.ndim else float(out)


def sign_change_wavenumber(params: InflationParams) -> float:
    """Wavenumber 4 pi H/(5 S) where inflation_power crosses zero."""
    return 4.0 * PI * params.H / (5.0 * params.S)
