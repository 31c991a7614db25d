"""Mode-pair sums behind the quadratic-operator spatial spectrum.

The spectrum of the normal-ordered square is built from pairs of field
modes whose wavevectors add up to the probe wavenumber.  In a periodic
box the pair sum is finite at any momentum cutoff, and the cutoff
behavior exposes an order-of-limits trap: freezing the time offset to
zero first leaves a positive sum that diverges linearly with the
cutoff, while keeping the oscillating time factor and removing the
cutoff first (in the Abel sense) leaves a finite value that goes
NEGATIVE as the time offset shrinks.  This module provides the lattice
sum, the reduced continuum integral it converges to, and a report
contrasting the two limit orders.

Conventions match spectra: the forward spatial transform carries
1/(2 pi)^3, so the continuum pair integral is
(1/(2 (2 pi)^6)) int d^3q cos((w_q + w_p) tau) / (w_q w_p) with
p = k - q and massless w = |q|, damped by exp(-alpha (w_q + w_p)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, ExtrapolationDiverged
from .kernels import SCALAR_SPECTRUM_NORM
from .regquad import (OscillatoryIntegrand, QuadratureResult,
                      RegulatorSchedule, abel_limit, finite_panel_integral,
                      oscillatory_integral)

PI = math.pi

# chunk of nz planes processed per vectorized pass of the lattice sum
_NZ_BLOCK = 32

# default tau ladder (units of 1/k) for the small-offset extrapolation
_SMALL_TAU_LADDER = (0.4, 0.2, 0.1)

# default cutoff-index ladder for the static divergence scan
_CUTOFF_LADDER = (8, 16, 32, 64, 128)


@dataclass(frozen=True)
class ModeSumConfig:
    """Periodic-box mode sum parameters.

    box_size: side length L of the cubic box.
    mode_index: nonzero integer m; the probe wavenumber is 2 pi m / L
        along a lattice axis.  The lattice is inversion symmetric, so
        m and -m give identical sums (relabeling q -> -q - k).
    max_index: cutoff N; the sum runs over integer vectors with
        0 < |n| <= N (the summed mode, not its partner, is cut off).
    damping_alpha: optional exp(-alpha (w_q + w_p)) factor shared with
        the continuum integral, for cutoff-free comparisons.
    """

    box_size: float
    mode_index: int
    max_index: int
    damping_alpha: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.box_size) and self.box_size > 0.0):
            raise DomainError("box_size must be finite and positive")
        if self.mode_index == 0:
            raise DomainError("mode_index must be a nonzero integer")
        if self.max_index < 1:
            raise DomainError("max_index must be a positive integer")
        if not (math.isfinite(self.damping_alpha)
                and self.damping_alpha >= 0.0):
            raise DomainError("damping_alpha must be finite and >= 0")

    @property
    def wavenumber(self) -> float:
        return 2.0 * PI * self.mode_index / self.box_size


def _ring_counts(n_max: int) -> np.ndarray:
    """counts[s] = number of integer pairs (nx, ny) with nx^2+ny^2 = s."""
    ax = np.arange(-n_max, n_max + 1)
    s = (ax[:, None] ** 2 + ax[None, :] ** 2).ravel()
    return np.bincount(s)


def mode_pair_sum(tau: float, cfg: ModeSumConfig) -> float:
    """Lattice mode-pair spectrum value at time offset tau.

    Sums cos((w_q + w_p) tau) exp(-alpha (w_q + w_p)) / (w_q w_p) over
    lattice modes q = 2 pi n / L with 0 < |n| <= max_index and partner
    p = k - q, k along the z axis.  The two assignments with a vanishing
    frequency (n = 0 and n = m e_z) are absent: a box this size carries
    no zero mode.  Normalization 1/(2 (2 pi)^3 L^3) makes the infinite-
    box limit the continuum pair integral.
    """
    if not math.isfinite(tau):
        raise DomainError("tau must be finite")
    base = 2.0 * PI / cfg.box_size
    n = cfg.max_index
    m = cfg.mode_index
    counts = _ring_counts(n)
    # rings with s > N^2 can never satisfy s + nz^2 <= N^2
    counts = counts[:n * n + 1]
    s = np.arange(counts.size, dtype=float)[None, :]
    total = 0.0
    nz_all = np.arange(-n, n + 1)
    for start in range(0, nz_all.size, _NZ_BLOCK):
        nz = nz_all[start:start + _NZ_BLOCK].astype(float)[:, None]
        n2 = s + nz * nz
        p2 = s + (nz - m) ** 2
        keep = (n2 > 0.5) & (p2 > 0.5) & (n2 <= n * n + 0.5)
        w_q = base * np.sqrt(np.where(keep, n2, 1.0))
        w_p = base * np.sqrt(np.where(keep, p2, 1.0))
        freq = w_q + w_p
        term = np.cos(freq * tau) / (w_q * w_p)
        if cfg.damping_alpha > 0.0:
            term = term * np.exp(-cfg.damping_alpha * freq)
        total += float((np.where(keep, term, 0.0) * counts[None, :]).sum())
    return total / (2.0 * (2.0 * PI) ** 3 * cfg.box_size ** 3)


def continuum_pair_integral(tau: float, k: float, alpha: float) -> float:
    """Closed form of the damped continuum pair integral.

    The angular reduction collapses the damped 3-d integral to
    -Re[e^{k z} / z] / (64 pi^5) with z = i tau - alpha; alpha > 0 keeps
    it absolutely convergent.  Its alpha -> 0 limit is the production
    spectral kernel -sin(k tau)/(64 pi^5 tau).
    """
    if k <= 0.0:
        raise DomainError("need k > 0")
    if alpha <= 0.0:
        raise DomainError("need alpha > 0 for the damped closed form")
    z = complex(-alpha, tau)
    return -(np.exp(k * z) / z).real / SCALAR_SPECTRUM_NORM


def continuum_pair_limit(tau: float, k: float,
                         schedule: RegulatorSchedule = None) -> QuadratureResult:
    """Numerical continuum pair integral with the cutoff removed first.

    Independently of the closed form, integrates the angular-reduced
    1-d representation: a finite piece over [0, k] plus a conditionally
    convergent oscillatory tail handled by damping and extrapolation.
    Requires tau > 0; the tau -> 0 limit is taken by the caller (see
    order_of_limits_report).
    """
    if tau <= 0.0:
        raise DomainError("need tau > 0; the static limit diverges")
    if k <= 0.0:
        raise DomainError("need k > 0")
    if schedule is None:
        # the damped tail is analytic in alpha with radius 2 tau, so the
        # nodes must shrink with tau; this damping is not even in alpha,
        # hence plain power-1 extrapolation below
        schedule = RegulatorSchedule(
            tuple(tau * 0.5 ** i for i in range(6)),
            extrapolation_order=5)

    fin = finite_panel_integral(
        lambda q: (np.sin((2.0 * q + k) * tau) - math.sin(k * tau)) / tau,
        0.0, k)

    g = OscillatoryIntegrand(
        amplitude=lambda q: np.ones_like(np.asarray(q, dtype=float)),
        phase_frequency=2.0 * tau, domain_start=k, kind="cos")
    quad_errs = [fin.error_estimate]
    evals = [fin.evaluations]

    def damped(alpha: float) -> float:
        res = oscillatory_integral(g, alpha=alpha, abs_tol=1e-12, rel_tol=1e-11)
        quad_errs.append(res.error_estimate)
        evals[0] += res.evaluations
        return res.value

    lim = abel_limit(damped, schedule, power=1.0)
    osc = 2.0 * math.sin(k * tau) / tau * lim.value
    bracket = fin.value + osc
    pref = 2.0 * PI / (2.0 * (2.0 * PI) ** 6 * k)
    err = abs(pref) * (abs(2.0 * math.sin(k * tau) / tau)
                       * lim.error_estimate + 16.0 * max(quad_errs))
    return QuadratureResult(value=pref * bracket, error_estimate=err,
                            evaluations=evals[0])


def cutoff_scan(tau: float, cfg: ModeSumConfig,
                indices=_CUTOFF_LADDER):
    """Lattice sum versus cutoff at fixed tau.

    Returns (cutoffs, values): the physical cutoffs 2 pi N / L and the
    mode_pair_sum values at max_index = N for each N in indices.
    """
    if len(indices) < 2 or any(b <= a for a, b in zip(indices, indices[1:])):
        raise DomainError("indices must be strictly increasing, length >= 2")
    cutoffs = []
    values = []
    for n in indices:
        c = replace(cfg, max_index=int(n))
        cutoffs.append(2.0 * PI * n / cfg.box_size)
        values.append(mode_pair_sum(tau, c))
    return tuple(cutoffs), tuple(values)


def cutoff_divergence_slope(cutoffs, values) -> float:
    """Log-log growth rate of a positive scan; 1.0 means linear."""
    c = np.asarray(cutoffs, dtype=float)
    v = np.asarray(values, dtype=float)
    if c.size < 2:
        raise DomainError("need at least two scan points")
    if (v <= 0.0).any():
        raise DomainError("log-log slope needs positive values")
    return float(np.polyfit(np.log(c), np.log(v), 1)[0])


@dataclass(frozen=True)
class OrderOfLimitsReport:
    """Contrast of the two limit orders for one probe wavenumber.

    static_*: time offset frozen to zero first, then the cutoff grown;
    the value rises like cutoff**static_slope and the attempted
    cutoff -> infinity extrapolation flags divergence.
    oscillating_*: cutoff removed first (damped, extrapolated) at small
    nonzero offsets, then the offset sent to zero; the limit is finite
    and matches reference = -k/(64 pi^5), the negative spectrum value.
    """

    wavenumber: float
    static_cutoffs: tuple
    static_values: tuple
    static_slope: float
    static_diverged: bool
    oscillating_taus: tuple
    oscillating_values: tuple
    small_tau_limit: float
    reference: float


def order_of_limits_report(cfg: ModeSumConfig,
                           cutoff_indices=_CUTOFF_LADDER,
                           tau_ladder=_SMALL_TAU_LADDER) -> OrderOfLimitsReport:
    """Run both limit orders for the configured probe wavenumber."""
    k = abs(cfg.wavenumber)
    cutoffs, values = cutoff_scan(0.0, cfg, cutoff_indices)
    slope = cutoff_divergence_slope(cutoffs, values)

    inv = tuple(1.0 / c for c in cutoffs)
    sched = RegulatorSchedule(inv, extrapolation_order=min(3, len(inv) - 1))
    lookup = dict(zip(inv, values))
    try:
        abel_limit(lambda x: lookup[x], sched)
        diverged = False
    except ExtrapolationDiverged:
        diverged = True

    taus = tuple(t / k for t in tau_ladder)
    osc_vals = tuple(continuum_pair_limit(t, k).value for t in taus)
    tau_sched = RegulatorSchedule(taus, extrapolation_order=len(taus) - 1)
    tau_lookup = dict(zip(taus, osc_vals))
    lim = abel_limit(lambda t: tau_lookup[t], tau_sched, power=2.0)

    return OrderOfLimitsReport(
        wavenumber=k,
        static_cutoffs=cutoffs,
        static_values=values,
        static_slope=slope,
        static_diverged=diverged,
        oscillating_taus=taus,
        oscillating_values=osc_vals,
        small_tau_limit=lim.value,
        reference=-k / SCALAR_SPECTRUM_NORM,
    )
