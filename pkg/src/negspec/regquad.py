"""Regulated quadrature engine.

Three tools used everywhere else in the package:

* abel_limit       -- polynomial (Richardson/Neville) extrapolation of a
                      regulated quantity f(alpha) to alpha = 0;
* oscillatory_integral -- half-line integrals of amplitude(u) * sin/cos(f u)
                      * exp(-alpha u), by half-period panels, an embedded
                      Gauss pair per panel, and Euler (iterated averaging)
                      acceleration of the panel series;
* mc_integrate     -- seeded plain Monte Carlo over a box, with a standard
                      error estimate and bit-reproducible batching.

The conditionally convergent integrals in this package exist only as Abel
limits: damp with exp(-alpha u), integrate, extrapolate alpha -> 0.  The
engine never guesses a limit it did not compute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ExtrapolationDiverged, NonConvergence

# Embedded Gauss pair per panel: value from the 15-point rule, error from
# the difference against the 7-point rule (Gauss-Kronrod-style estimate,
# nodes from numpy's Legendre tables rather than hand-copied constants).
_X15, _W15 = np.polynomial.legendre.leggauss(15)
_X7, _W7 = np.polynomial.legendre.leggauss(7)

# A divergent family (f ~ alpha^-p) shows extrapolants that grow
# monotonically overall by more than _DIVERGENCE_GROWTH and are *still*
# growing at the last step by more than _DIVERGENCE_FINAL_RATIO; a
# convergent family that merely starts from a poor first estimate settles
# to a final step ratio of ~1.
_DIVERGENCE_GROWTH = 10.0
_DIVERGENCE_FINAL_RATIO = 1.2

_EULER_DEPTH = 12          # iterated-averaging depth for the panel series
_DEFAULT_MAX_PANELS = 10_000
_MIN_PANELS = 16
_PANEL_SPLIT_DEPTH = 16    # max bisection depth inside one panel
_PANEL_REL_FLOOR = 4e-15   # pair-disagreement floor relative to int |f|

_MC_MIN_SAMPLES = 10_000
_MC_BATCH = 1 << 17        # fixed batch layout => bit-reproducible results


@dataclass(frozen=True)
class RegulatorSchedule:
    """Strictly decreasing positive regulator values plus extrapolation order.

    The schedule must contain at least extrapolation_order + 1 values; the
    extrapolant of that order is anchored at the smallest (last) values.
    """

    values: tuple
    extrapolation_order: int

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) == 0:
            raise DomainError("empty regulator schedule")
        if any(not (math.isfinite(v) and v > 0.0) for v in vals):
            raise DomainError("regulator values must be positive and finite")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise DomainError("regulator values must be strictly decreasing")
        if self.extrapolation_order < 1:
            raise DomainError("extrapolation_order must be >= 1")
        if len(vals) < self.extrapolation_order + 1:
            raise DomainError("need at least extrapolation_order + 1 regulator values")


#: Default Abel-regulator schedule: geometric, order 4.
DEFAULT_SCHEDULE = RegulatorSchedule((0.2, 0.1, 0.05, 0.025, 0.0125), 4)


@dataclass(frozen=True)
class QuadratureResult:
    """Value, error estimate, and evaluation count of a numerical integral."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise DomainError("error_estimate must be >= 0")
        if self.evaluations <= 0:
            raise DomainError("evaluations must be > 0")


@dataclass(frozen=True)
class OscillatoryIntegrand:
    """Half-line integrand amplitude(u) * phase(phase_frequency * u).

    amplitude must be vectorized (ndarray in, ndarray out).  kind selects
    the phase factor: "sin" or "cos".  Panels are cut at consecutive zeros
    of the phase, spacing pi/phase_frequency, starting at domain_start.
    """

    amplitude: Callable
    phase_frequency: float
    domain_start: float = 0.0
    kind: str = "sin"

    def __post_init__(self):
        if not (math.isfinite(self.phase_frequency) and self.phase_frequency > 0.0):
            raise DomainError("phase_frequency must be positive")
        if self.kind not in ("sin", "cos"):
            raise DomainError(f"kind must be 'sin' or 'cos', got {self.kind!r}")
        if not math.isfinite(self.domain_start) or self.domain_start < 0.0:
            raise DomainError("domain_start must be finite and >= 0")


def abel_limit(f: Callable[[float], float], schedule: RegulatorSchedule,
               power: float = 1.0) -> QuadratureResult:
    """Extrapolate f(alpha) to alpha = 0 by Neville's algorithm.

    Polynomial extrapolation in alpha**power through the schedule values,
    capped at schedule.extrapolation_order; exact on polynomial families in
    alpha**power of degree <= extrapolation_order.  power=2 is for
    regulated integrals known to be even in the regulator (the
    product-of-sines transforms in this package are); the default power=1
    assumes nothing.

    error_estimate is the difference between the last two extrapolation
    orders.  Raises ExtrapolationDiverged when the successive extrapolants
    grow monotonically in magnitude by more than a factor of 10 overall,
    which is how a genuinely divergent family (f ~ 1/alpha) presents.
    """
    order = schedule.extrapolation_order
    xs = [v**power for v in schedule.values]
    fs = [float(f(v)) for v in schedule.values]
    m = len(xs) - 1

    # Neville tableau for the value at 0, column-capped at `order`.
    tab = [fs[0:1]]
    for i in range(1, m + 1):
        row = [fs[i]]
        for j in range(1, min(i, order) + 1):
            num = xs[i - j] * row[j - 1] - xs[i] * tab[i - 1][j - 1]
            row.append(num / (xs[i - j] - xs[i]))
        tab.append(row)

    extrapolants = [tab[i][min(i, order)] for i in range(m + 1)]
    mags = [abs(e) for e in extrapolants]
    if m >= 1 and all(b > a for a, b in zip(mags, mags[1:])) \
            and mags[-1] > _DIVERGENCE_GROWTH * mags[0] \
            and mags[-1] > _DIVERGENCE_FINAL_RATIO * mags[-2]:
        raise ExtrapolationDiverged(
            f"extrapolants grew monotonically from {extrapolants[0]:.6g} "
            f"to {extrapolants[-1]:.6g} without settling")

    value = tab[m][min(m, order)]
    err = abs(tab[m][order] - tab[m][order - 1])
    return QuadratureResult(value=value, error_estimate=err, evaluations=len(xs))


def _panel_batch(fn, lo, hi):
    """Fixed 15-point Gauss values and embedded 7-point errors per interval.

    lo, hi: 1-d arrays of interval ends.  Returns (values, errors,
    abs_masses, nevals) where abs_masses is the 15-point estimate of
    int |f|, the scale of unavoidable roundoff in the panel value.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts15 = mid[:, None] + half[:, None] * _X15[None, :]
    f15 = np.asarray(fn(pts15.ravel()), dtype=float).reshape(pts15.shape)
    v15 = (f15 * _W15[None, :]).sum(axis=1) * half
    a15 = (np.abs(f15) * _W15[None, :]).sum(axis=1) * half
    pts7 = mid[:, None] + half[:, None] * _X7[None, :]
    f7 = np.asarray(fn(pts7.ravel()), dtype=float).reshape(pts7.shape)
    v7 = (f7 * _W7[None, :]).sum(axis=1) * half
    return v15, np.abs(v15 - v7), a15, lo.size * 22


def _adaptive_panel(fn, lo, hi, tol):
    """Integrate fn over each [lo_i, hi_i], bisecting where the Gauss pair
    disagrees by more than the acceptance threshold.

    The threshold is tol (absolute, per original panel) plus a small
    multiple of the ORIGINAL panel's absolute mass: once the pair
    disagreement reaches the roundoff floor of the parent panel value,
    further splitting cannot improve the sum and only burns memory.  The
    floor must be the parent's, not the subinterval's: near a zero of the
    integrand the local mass vanishes while argument-rounding noise does
    not, and a shrinking floor would chase that noise to the depth cap.

    Returns (values, error_sums, nevals) aligned with the input intervals.
    """
    n = lo.size
    values = np.zeros(n)
    errors = np.zeros(n)
    idx = np.arange(n)
    depth = np.zeros(n, dtype=int)
    am0 = np.zeros(n)
    nevals = 0
    work_lo, work_hi, work_idx, work_depth = lo, hi, idx, depth
    first = True
    while work_lo.size:
        v, e, am, ne = _panel_batch(fn, work_lo, work_hi)
        nevals += ne
        if first:
            am0 = am
            first = False
        done = (e <= tol + _PANEL_REL_FLOOR * am0[work_idx]) \
            | (work_depth >= _PANEL_SPLIT_DEPTH)
        np.add.at(values, work_idx[done], v[done])
        np.add.at(errors, work_idx[done], e[done])
        split = ~done
        if not split.any():
            break
        slo, shi = work_lo[split], work_hi[split]
        smid = 0.5 * (slo + shi)
        work_lo = np.concatenate([slo, smid])
        work_hi = np.concatenate([smid, shi])
        work_idx = np.concatenate([work_idx[split]] * 2)
        work_depth = np.concatenate([work_depth[split] + 1] * 2)
    return values, errors, nevals


def _euler_accelerate(partial_sums: np.ndarray, depth: int = _EULER_DEPTH):
    """Iterated averaging of a partial-sum sequence.

    Returns (best, previous_level_last): the accelerated limit estimate and
    the last entry one level up, whose difference serves as the error
    estimate.  Regular: if the partial sums converge, so does this.
    """
    window = min(partial_sums.size, 2 * depth + 8)
    arr = partial_sums[-window:].astype(float)
    prev_last = arr[-1]
    levels = min(depth, arr.size - 1)
    for _ in range(levels):
        prev_last = arr[-1]
        arr = 0.5 * (arr[1:] + arr[:-1])
    return arr[-1], prev_last


def oscillatory_integral(g: OscillatoryIntegrand, alpha: float = 0.0,
                         abs_tol: float = 1e-10, rel_tol: float = 1e-8,
                         max_panels: int = _DEFAULT_MAX_PANELS) -> QuadratureResult:
    """Integrate amplitude(u) * phase(f u) * exp(-alpha u) over [domain_start, inf).

    The half-line is partitioned at consecutive zeros of the phase factor
    (spacing pi/f).  Each panel goes through the embedded Gauss pair with
    local bisection; the alternating panel series is Euler-accelerated.
    Stops when the acceleration stabilizes below tolerance; raises
    NonConvergence after max_panels panels.
    """
    if alpha < 0.0:
        raise DomainError("Abel regulator alpha must be >= 0")
    f = g.phase_frequency
    halfp = math.pi / f
    # first phase zero strictly beyond domain_start
    if g.kind == "sin":
        n0 = math.floor(g.domain_start / halfp) + 1
        first_zero = n0 * halfp
        phase = np.sin
    else:
        n0 = math.floor((g.domain_start - 0.5 * halfp) / halfp) + 1
        first_zero = (n0 + 0.5) * halfp
        phase = np.cos
    if first_zero <= g.domain_start:
        first_zero += halfp

    if alpha == 0.0:
        def integrand(u):
            return np.asarray(g.amplitude(u), dtype=float) * phase(f * u)
    else:
        def integrand(u):
            u = np.asarray(u, dtype=float)
            return np.asarray(g.amplitude(u), dtype=float) * phase(f * u) \
                * np.exp(-alpha * u)

    panel_tol = abs_tol / 64.0
    panels = np.empty(0)
    panel_errs = np.empty(0)
    nevals = 0
    edge = g.domain_start
    next_edge = first_zero
    block = 32
    best = math.nan
    total_err = math.inf

    while panels.size < max_panels:
        count = min(block, max_panels - panels.size)
        los = next_edge + halfp * np.arange(count)
        his = los + halfp
        if panels.size == 0:
            # prepend the (possibly short) leading panel
            los = np.concatenate([[edge], los[:-1]])
            his = np.concatenate([[next_edge], his[:-1]])
        v, e, ne = _adaptive_panel(integrand, los, his, panel_tol)
        nevals += ne
        panels = np.concatenate([panels, v])
        panel_errs = np.concatenate([panel_errs, e])
        next_edge = his[-1]
        block = min(2 * block, 512)

        if panels.size < _MIN_PANELS:
            continue
        sums = np.cumsum(panels)
        accel, prev = _euler_accelerate(sums)
        tail_err = abs(accel - prev)
        total_err = tail_err + panel_errs.sum()
        tol = max(abs_tol, rel_tol * abs(accel))
        mags = np.abs(panels)
        recent = mags[-4:].max()
        earlier = mags[-8:-4].max()
        enveloped = recent <= 1.05 * earlier
        deep_decay = mags[-4:].sum() < 0.01 * abs_tol
        if (tail_err <= tol and enveloped) or deep_decay:
            best = accel
            break
    else:
        raise NonConvergence(
            f"oscillatory series not converged after {panels.size} panels "
            f"(last accel error {total_err:.3g})")

    if math.isnan(best):
        raise NonConvergence("panel budget exhausted before first estimate")
    return QuadratureResult(value=float(best), error_estimate=float(total_err),
                            evaluations=int(nevals))


def finite_panel_integral(fn: Callable, lo: float, hi: float,
                          abs_tol: float = 1e-12) -> QuadratureResult:
    """Adaptive embedded-Gauss integral of a smooth vectorized fn on [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise DomainError("need finite hi > lo")
    v, e, ne = _adaptive_panel(fn, np.array([lo]), np.array([hi]), abs_tol)
    return QuadratureResult(value=float(v[0]), error_estimate=float(e[0]),
                            evaluations=int(ne))


def mc_integrate(fn: Callable, bounds: Sequence, samples: int,
                 seed: int) -> QuadratureResult:
    """Plain Monte Carlo of a vectorized fn over a box.

    bounds: sequence of (lo, hi) pairs, one per dimension.  fn takes an
    (n, d) array and returns n values.  Same seed and sample count give
    bit-identical results (fixed batch layout, numpy pairwise sums).
    value = volume * mean, error_estimate = volume * std/sqrt(n).
    """
    bounds = np.asarray(bounds, dtype=float)
    if bounds.ndim != 2 or bounds.shape[1] != 2:
        raise DomainError("bounds must be a sequence of (lo, hi) pairs")
    if np.any(bounds[:, 1] <= bounds[:, 0]):
        raise DomainError("each bound must satisfy hi > lo")
    if samples < _MC_MIN_SAMPLES:
        raise DomainError(f"samples must be >= {_MC_MIN_SAMPLES}")
    dim = bounds.shape[0]
    widths = bounds[:, 1] - bounds[:, 0]
    volume = float(np.prod(widths))
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        n = min(_MC_BATCH, samples - done)
        pts = bounds[:, 0] + widths * rng.random((n, dim))
        vals = np.asarray(fn(pts), dtype=float)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += n
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples)
    return QuadratureResult(value=volume * mean,
                            error_estimate=volume * stderr,
                            evaluations=samples)
