"""Smeared quadratic-operator expectations via the log-kernel form.

The field-strength correlator equals -lap^2 box^2 ln^2(s/ell^2) times
1/(3840 pi^4), with s = r^2 - tau^2, for ANY positive scale ell: the
eight derivatives annihilate the ln(s) and constant pieces that carry
the scale.  Pairing two smearing functions with the correlator and
integrating by parts (all derivative blocks are even order, so no
signs appear) turns the doubly smeared expectation into

    K = -1/(3840 pi^4) int int g1(x) g2(x') Re ln^2(s/ell^2),

where g = lap box S is the fourth-derivative image of each smearing
function and the pairing now has only an integrable logarithmic
singularity on the light cone.  K must come out independent of ell;
scanning several ell values at a common seed is an end-to-end check of
the whole construction, and for compact supports that stay spacelike
separated the same number is reachable by pairing the smearing
functions directly with the (there regular) correlator.

The integral hides heavy cancellation: the images oscillate, and the
value is orders of magnitude below the mass of |g1 g2 ln^2|.  Three
evaluation routes keep that cancellation affordable:

* Two Gaussians (epsilon = 0).  The pairing depends only on v = x - x',
  and the cross-correlation of two Gaussian images is the eighth-order
  image of the combined Gaussian (widths add in quadrature), a closed
  form.  The direction average of the kernel over the sphere |v - d|
  = rho is also closed form, via the primitive of ln^2 in m = y^2 -
  tau^2.  What remains is a 2D expectation over (tau, rho), importance
  sampled from slightly widened Gaussian factors (the widening bounds
  the polynomial weight) on a jittered-stratified grid with antithetic
  pairs: still seeded Monte Carlo, with per-sample weights, but with
  the center-of-mass and angular noise integrated out exactly.

* Two compact bumps with spacelike-separated supports (epsilon = 0).
  Every sample route is hopeless here (the cancellation reaches nine
  digits), but the bipolar reduction makes the integral a chain of
  smooth 1D quadratures: exact direction average around one center,
  one Gauss panel over the polar angle of the other, composite panels
  over the radial profiles.  Deterministic, converged to a few times
  1e-4 relative.

* Anything else (mixed kinds, overlapping bumps, epsilon > 0): plain
  two-point Monte Carlo, each factor importance sampled from its own
  profile.  Correct but noisy; quoted errors say so.

Monte Carlo conventions: a run is 16 equal batches derived from one
seeded generator in a canonical spec order, so results are
reproducible bit for bit and symmetric under swapping the two smearing
functions.  Amplitudes multiply the estimate outside the sample mean,
making K exactly bilinear in them at fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincinv, ndtri

from .errors import CoincidentPoints, DomainError
from .kernels import em_corr_values
from .regquad import QuadratureResult

PI = math.pi

# normalization of the log-kernel representation (symbolically exact)
LOG_REP_NORM = 3840.0 * PI**4

# compact bump support is exactly this many width parameters
BUMP_SUPPORT_SIGMAS = 4.0

# finite-difference step for bump images, as a fraction of the width
_FD_STEP_FRAC = 0.01

# below this radius (in FD steps) the radial Laplacian uses its
# rho -> 0 limit 3 h'' instead of h'' + 2 h'/rho
_AXIS_STEPS = 0.5

# fixed batch layout: mc_samples split into this many equal batches
_N_BATCHES = 16

# upper bound on array length per Monte Carlo chunk
_MC_CHUNK = 1 << 17

# |s| clamp keeping exact cone hits finite (they carry zero measure)
_TINY = 1e-300

# proposal widths for the stratified Gaussian-pair route are the
# combined widths times this factor; the induced exponential damping
# is what keeps the eighth-degree polynomial weight bounded
_WIDEN = 1.3

# Gauss points per panel for the disjoint-support quadrature, the
# coarser companion run that sets its error bar, and the polar rule
_QUAD_N_PER = 32
_QUAD_N_ERR = 24
_QUAD_NC = 32

# radial panels accumulate toward the support edge where the bump
# image develops its layers; time panels toward both ends
_SPLITS = (0.0, 0.5, 0.75, 0.875, 0.95, 1.0)

_KINDS = ("gaussian", "compact_bump")


@dataclass(frozen=True)
class TestFunctionSpec:
    """One smearing function: amplitude times separable temporal and
    radial profiles around a spacetime center (t, x, y, z).

    gaussian: exp(-t^2/2 sigma_t^2) exp(-rho^2/2 sigma_x^2), unbounded
    but with superexponentially vanishing surface terms.
    compact_bump: exp(-1/(1-u^2)) profiles with u = t/(4 sigma_t) and
    u = rho/(4 sigma_x); identically zero outside four widths.
    """

    __test__ = False  # not a pytest case, despite the Test* name

    kind: str
    center: tuple = (0.0, 0.0, 0.0, 0.0)
    temporal_width: float = 1.0
    spatial_width: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}")
        if len(self.center) != 4:
            raise DomainError("center must have four components")
        if not all(math.isfinite(c) for c in self.center):
            raise DomainError("center components must be finite")
        for w in (self.temporal_width, self.spatial_width):
            if not (math.isfinite(w) and w > 0.0):
                raise DomainError("widths must be finite and positive")
        if not math.isfinite(self.amplitude):
            raise DomainError("amplitude must be finite")

    @property
    def t_center(self) -> float:
        return float(self.center[0])

    @property
    def x_center(self):
        return np.asarray(self.center[1:], dtype=float)

    @property
    def temporal_half_support(self) -> float:
        return BUMP_SUPPORT_SIGMAS * self.temporal_width

    @property
    def spatial_support_radius(self) -> float:
        return BUMP_SUPPORT_SIGMAS * self.spatial_width

    def _sort_key(self):
        # amplitude last: it is factored out of the sampling weights, so
        # rescaling it must not reshuffle the draw stream (exact
        # bilinearity); when everything else ties the streams coincide
        # and the order cannot matter either.
        return (self.kind, tuple(self.center), self.temporal_width,
                self.spatial_width, self.amplitude)


@dataclass(frozen=True)
class SmearingConfig:
    """Scale, light-cone regulator, and Monte Carlo controls."""

    ell: float = 1.0
    epsilon: float = 0.0
    mc_samples: int = 1_000_000
    seed: int = 20260816

    def __post_init__(self):
        if not (math.isfinite(self.ell) and self.ell > 0.0):
            raise DomainError("ell must be finite and positive")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise DomainError("epsilon must be finite and nonnegative")
        if self.mc_samples < 10_000:
            raise DomainError("mc_samples must be at least 10000")

    @property
    def batch_size(self) -> int:
        return -(-self.mc_samples // _N_BATCHES)


DEFAULT_SMEARING = SmearingConfig()


def _log_sq(tau, r, ell: float, epsilon: float):
    """Re ln^2((r^2 - (tau - i epsilon)^2)/ell^2), vectorized.

    epsilon = 0 takes the boundary value of the principal branch in
    closed form: spacelike separations give a plain squared log, and on
    the timelike side the argument sits under the cut, ln picks up
    +-i pi, and the real part of its square is ln^2|s| - pi^2.
    """
    tau = np.asarray(tau, dtype=float)
    r = np.asarray(r, dtype=float)
    if epsilon > 0.0:
        z = (r * r - (tau - 1j * epsilon) ** 2) / (ell * ell)
        w = np.log(z)
        return (w * w).real
    s = (r - tau) * (r + tau) / (ell * ell)
    mag = np.abs(s)
    # exact cone hits carry zero measure; keep them large but finite
    mag = np.where(mag < _TINY, _TINY, mag)
    logs = np.log(mag)
    return logs * logs - np.where(s < 0.0, PI * PI, 0.0)


def log_kernel(x, xp, cfg: SmearingConfig):
    """Squared-log pairing kernel between 4-points x and xp.

    Accepts arrays of shape (..., 4) ordered (t, x, y, z).  With
    epsilon = 0 coincident points have no finite value and raise; the
    light cone itself is an integrable logarithmic singularity.
    """
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    if x.shape[-1] != 4 or xp.shape[-1] != 4:
        raise DomainError("points must have four components")
    d = x - xp
    tau = d[..., 0]
    r = np.sqrt((d[..., 1:] ** 2).sum(axis=-1))
    if cfg.epsilon == 0.0 and np.any((tau == 0.0) & (r == 0.0)):
        raise CoincidentPoints("coincident points need epsilon > 0")
    return _log_sq(tau, r, cfg.ell, cfg.epsilon)


def _bump(u):
    """exp(-1/(1-u^2)) on |u| < 1, zero outside, C-infinity."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    den = np.where(inside, 1.0 - u * u, 1.0)
    return np.where(inside, np.exp(-1.0 / den), 0.0)


def _fd_d1(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) \
        / (12.0 * h)


def _fd_d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x)
            + 16 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h)


def _radial_lap(f, rho, h):
    """h'' + 2 h'/rho for an even profile, with the limit 3 h'' used
    inside half a step of the axis."""
    rho = np.asarray(rho, dtype=float)
    d2 = _fd_d2(f, rho, h)
    on_axis = np.abs(rho) < _AXIS_STEPS * h
    safe = np.where(on_axis, 1.0, rho)
    d1 = _fd_d1(f, rho, h)
    return np.where(on_axis, 3.0 * d2, d2 + 2.0 * d1 / safe)


def _poly_image4(th, rho, st, sx):
    """lap box (Gt Gx) / (Gt Gx): the fourth-order polynomial factor."""
    st2 = st * st
    sx2 = sx * sx
    return ((th * th / st2 - 1.0) / st2 * ((rho * rho / sx2 - 3.0) / sx2)
            - (rho ** 4 / sx2 ** 2 - 10.0 * rho ** 2 / sx2 + 15.0) / sx2 ** 2)


def _poly_image8(th, rho, st, sx):
    """lap^2 box^2 (Gt Gx) / (Gt Gx): the eighth-order factor, built
    from the Hermite ladders of the two profiles."""
    st2 = st * st
    sx2 = sx * sx
    h2 = (th * th / st2 - 1.0) / st2
    h4 = (th ** 4 / st2 ** 2 - 6.0 * th ** 2 / st2 + 3.0) / st2 ** 2
    r2 = rho * rho
    l2 = (r2 * r2 / sx2 ** 2 - 10.0 * r2 / sx2 + 15.0) / sx2 ** 2
    l3 = (r2 ** 3 / sx2 ** 3 - 21.0 * r2 * r2 / sx2 ** 2
          + 105.0 * r2 / sx2 - 105.0) / sx2 ** 3
    l4 = (r2 ** 4 / sx2 ** 4 - 36.0 * r2 ** 3 / sx2 ** 3
          + 378.0 * r2 * r2 / sx2 ** 2 - 1260.0 * r2 / sx2
          + 945.0) / sx2 ** 4
    return h4 * l2 - 2.0 * h2 * l3 + l4


def _unit_image(spec: TestFunctionSpec, th, rho):
    """lap box of the unit-amplitude profile at centered coordinates.

    Gaussians use the closed form (a Hermite-type polynomial times the
    Gaussian itself).  Bumps nest fourth-order centered differences
    with step width/100; the profiles are even, so negative stencil
    arguments near the axis are legitimate evaluations.
    """
    if spec.kind == "gaussian":
        st = spec.temporal_width
        sx = spec.spatial_width
        gt = np.exp(-th * th / (2.0 * st * st))
        gx = np.exp(-rho * rho / (2.0 * sx * sx))
        return gt * gx * _poly_image4(th, rho, st, sx)
    wt = BUMP_SUPPORT_SIGMAS * spec.temporal_width
    wx = BUMP_SUPPORT_SIGMAS * spec.spatial_width
    ht = _FD_STEP_FRAC * spec.temporal_width
    hx = _FD_STEP_FRAC * spec.spatial_width

    def ft(u):
        return _bump(u / wt)

    def fx(u):
        return _bump(u / wx)

    def lap_fx(u):
        return _radial_lap(fx, u, hx)

    d2t = _fd_d2(ft, th, ht)
    lx = lap_fx(rho)
    llx = _radial_lap(lap_fx, rho, hx)
    # box S = S_tt - lap S, so lap box S = f''(t) lap g - f(t) lap lap g
    return d2t * lx - ft(th) * llx


def smeared_operator_image(spec: TestFunctionSpec):
    """Return the function x -> (lap box S)(x) for 4-points x.

    The amplitude is included.  The returned callable accepts arrays of
    shape (..., 4) ordered (t, x, y, z).
    """
    c = np.asarray(spec.center, dtype=float)

    def image(points):
        p = np.asarray(points, dtype=float)
        if p.shape[-1] != 4:
            raise DomainError("points must have four components")
        th = p[..., 0] - c[0]
        rho = np.sqrt(((p[..., 1:] - c[1:]) ** 2).sum(axis=-1))
        return spec.amplitude * _unit_image(spec, th, rho)

    return image


def _pp_log(m, ell):
    """Primitive in m of Re ln^2(m/ell^2) on the principal branch.

    The timelike side (m < 0) contributes ln^2|m/ell^2| - pi^2, and
    the primitive stays continuous through m = 0.
    """
    am = np.maximum(np.abs(m), _TINY)
    ll = np.log(am / (ell * ell))
    return m * (ll * ll - 2.0 * ll + 2.0) - np.where(
        m < 0.0, PI * PI * m, 0.0)


def _a_of_m(m, ell):
    am = np.maximum(np.abs(m), _TINY)
    ll = np.log(am / (ell * ell))
    return ll * ll - np.where(m < 0.0, PI * PI, 0.0)


def _ang_avg_log(tfull, rho, dist, ell):
    """Average of Re ln^2((|d + rho n|^2 - tfull^2)/ell^2) over unit
    directions n, |d| = dist, in closed form.

    In m = y^2 - tfull^2 the average is a primitive difference over
    [(dist-rho)^2 - tfull^2, (dist+rho)^2 - tfull^2].  When that
    window is narrow relative to its endpoints the difference loses
    digits, and the midpoint value is the better evaluation (their
    crossover error is ~1e-10 relative).
    """
    t2 = tfull * tfull
    mp = (dist + rho) ** 2 - t2
    mm = (dist - rho) ** 2 - t2
    width = mp - mm
    big = np.maximum(np.abs(mp), np.abs(mm))
    use = width > 1e-5 * big
    safe = np.where(use, width, 1.0)
    exact = (_pp_log(mp, ell) - _pp_log(mm, ell)) / safe
    mid = _a_of_m(dist * dist + rho * rho - t2, ell)
    return np.where(use, exact, mid)


def _pc_corr(m, t2):
    """Primitive in m = y^2 - tau^2 of y * C0 dy for the correlator."""
    return -(1.0 / (2.0 * PI ** 4)) * (1.0 / m ** 3 + 4.0 * t2 / m ** 4
                                       + 3.2 * t2 * t2 / m ** 5)


def _ang_avg_corr(tfull, rho, dist):
    """Direction average of the field-strength correlator; valid only
    strictly spacelike (dist - rho > |tfull| > is never touched)."""
    t2 = tfull * tfull
    mp = (dist + rho) ** 2 - t2
    mm = (dist - rho) ** 2 - t2
    width = mp - mm
    big = np.maximum(np.abs(mp), np.abs(mm))
    use = width > 1e-5 * big
    safe = np.where(use, width, 1.0)
    exact = 2.0 * (_pc_corr(mp, t2) - _pc_corr(mm, t2)) / safe
    mmid = dist * dist + rho * rho - t2
    mid = (3.0 * mmid ** 2 + 16.0 * t2 * mmid + 16.0 * t2 * t2) \
        / (PI ** 4 * mmid ** 6)
    return np.where(use, exact, mid)


def _both_gaussian(spec1, spec2) -> bool:
    return spec1.kind == "gaussian" and spec2.kind == "gaussian"


def _spacelike_disjoint(spec1, spec2) -> bool:
    """True when no point of one support can be null or timelike
    separated from any point of the other."""
    if spec1.kind != "compact_bump" or spec2.kind != "compact_bump":
        return False
    gap = (float(np.linalg.norm(spec1.x_center - spec2.x_center))
           - spec1.spatial_support_radius - spec2.spatial_support_radius)
    t_span = (abs(spec1.t_center - spec2.t_center)
              + spec1.temporal_half_support + spec2.temporal_half_support)
    return gap > t_span


def _strat_pair_means(spec1, spec2, cfg, ells):
    """Per-batch means of the stratified conditional estimator for two
    Gaussians, one row per scale in ells, sharing every draw.

    Returns (means array of shape (n_ells, _N_BATCHES), samples used).
    The estimator integrates over the difference variable only: the
    combined eighth-order image polynomial is the exact
    cross-correlation of the two fourth-order images, and the kernel
    enters through its exact direction average.  Draws come from
    Gaussian factors widened by _WIDEN (density ratio folded into the
    weight), laid out on a jittered-stratified grid with antithetic
    pairs, 16 independent grids as batches.
    """
    a, b = sorted((spec1, spec2), key=lambda s: s._sort_key())
    sbt = math.hypot(a.temporal_width, b.temporal_width)
    sbx = math.hypot(a.spatial_width, b.spatial_width)
    dt = a.t_center - b.t_center
    dist = float(np.linalg.norm(a.x_center - b.x_center))
    zfac = ((2.0 * PI) ** 4 * a.temporal_width * b.temporal_width
            * (a.spatial_width * b.spatial_width) ** 3)
    kap = _WIDEN
    damp = 1.0 - 1.0 / (kap * kap)
    m = max(int(math.ceil(math.sqrt(cfg.batch_size / 2))), 2)
    rng = np.random.default_rng(cfg.seed)
    grid = np.arange(m) / m
    means = np.zeros((len(ells), _N_BATCHES))
    lo = 2.0 ** -64
    hi = 1.0 - 2.0 ** -53
    for ib in range(_N_BATCHES):
        x1 = rng.random((m, m))
        x2 = rng.random((m, m))
        acc = np.zeros(len(ells))
        count = 0
        for r1, r2 in ((x1, x2), (1.0 - x1, 1.0 - x2)):
            u1 = np.clip((grid[:, None] + r1 / m).ravel(), lo, hi)
            u2 = np.clip((grid[None, :] + r2 / m).ravel(), lo, hi)
            th = kap * sbt * ndtri(u1)
            rho = kap * sbx * np.sqrt(2.0 * gammaincinv(1.5, u2))
            w = (zfac * _poly_image8(th, rho, sbt, sbx)
                 * kap ** 4 * np.exp(-damp * (
                     th * th / (2.0 * sbt * sbt)
                     + rho * rho / (2.0 * sbx * sbx))))
            tfull = dt + th
            for j, ell in enumerate(ells):
                acc[j] += (w * _ang_avg_log(tfull, rho, dist, ell)).sum()
            count += u1.size
        means[:, ib] = acc / count
    return means, _N_BATCHES * count


@lru_cache(maxsize=64)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _gauss_nodes(a, b, n):
    x, w = _leggauss(n)
    return 0.5 * (b + a) + 0.5 * (b - a) * x, 0.5 * (b - a) * w


def _composite_nodes(a, b, n_per, splits):
    xs = []
    ws = []
    edges = [a + (b - a) * f for f in splits]
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = _gauss_nodes(lo, hi, n_per)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _sym_splits():
    half = [0.5 + 0.5 * f for f in _SPLITS]
    low = [1.0 - f for f in half[::-1]]
    return tuple(low[:-1] + half)


def _bipolar_pairing(spec1, spec2, ell, n_per, route):
    """Deterministic pairing integral for spacelike disjoint bumps,
    per unit amplitude.

    route "log": the images against the squared-log kernel, the value
    of int int g1 g2 Re ln^2.  route "direct": the profiles against
    the correlator, the value of int int S1 S2 C0.  Both collapse to
    chains of smooth 1D quadratures because the direction average
    around the second center is a closed form and the polar angle of
    the first enters analytically.
    """
    # the pairing is symmetric; fix the node layout in canonical order
    # so swapped arguments give the identical result bit for bit
    spec1, spec2 = sorted((spec1, spec2), key=lambda s: s._sort_key())
    wt1 = BUMP_SUPPORT_SIGMAS * spec1.temporal_width
    wt2 = BUMP_SUPPORT_SIGMAS * spec2.temporal_width
    wx1 = BUMP_SUPPORT_SIGMAS * spec1.spatial_width
    wx2 = BUMP_SUPPORT_SIGMAS * spec2.spatial_width
    ht1 = _FD_STEP_FRAC * spec1.temporal_width
    ht2 = _FD_STEP_FRAC * spec2.temporal_width
    hx1 = _FD_STEP_FRAC * spec1.spatial_width
    hx2 = _FD_STEP_FRAC * spec2.spatial_width
    dist = float(np.linalg.norm(spec1.x_center - spec2.x_center))
    dt = spec1.t_center - spec2.t_center

    def f1t(u):
        return _bump(u / wt1)

    def f2t(u):
        return _bump(u / wt2)

    def f1x(u):
        return _bump(u / wx1)

    def f2x(u):
        return _bump(u / wx2)

    if route == "log":
        def lap1_1(u):
            return _radial_lap(f1x, u, hx1)

        def lap2_1(u):
            return _radial_lap(lap1_1, u, hx1)

        def lap1_2(u):
            return _radial_lap(f2x, u, hx2)

        def lap2_2(u):
            return _radial_lap(lap1_2, u, hx2)

        tpieces1 = ((lambda t: _fd_d2(f1t, t, ht1)), f1t)
        tpieces2 = ((lambda t: _fd_d2(f2t, t, ht2)), f2t)
        rpieces1 = (lap1_1, lap2_1)
        rpieces2 = (lap1_2, lap2_2)
        # image = f''(t) lap g - f(t) lap lap g per factor; expanding
        # the product of two such images gives these four signed terms
        terms = ((0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 1.0))
    else:
        tpieces1 = (f1t,)
        tpieces2 = (f2t,)
        rpieces1 = (f1x,)
        rpieces2 = (f2x,)
        terms = ((0, 0, 1.0),)

    sym = _sym_splits()
    taun, tauw = _composite_nodes(-(wt1 + wt2), wt1 + wt2, n_per, sym)
    tn, tw = _composite_nodes(-wt1, wt1, n_per, sym)
    tcorr = {}
    for a, fa in enumerate(tpieces1):
        fav = fa(tn) * tw
        for b, fb in enumerate(tpieces2):
            tcorr[(a, b)] = fb(tn[None, :] - taun[:, None]) @ fav

    rn1, rw1 = _composite_nodes(0.0, wx1, n_per, _SPLITS)
    rn2, rw2 = _composite_nodes(0.0, wx2, n_per, _SPLITS)
    w1 = [g(rn1) * rn1 ** 2 * rw1 for g in rpieces1]
    w2 = [g(rn2) * rn2 ** 2 * rw2 for g in rpieces2]
    cn, cw = _gauss_nodes(-1.0, 1.0, _QUAD_NC)
    bgrid = np.sqrt(dist * dist + rn1[:, None] ** 2
                    + 2.0 * dist * rn1[:, None] * cn[None, :])

    total = 0.0
    pref = (4.0 * PI) ** 2
    evals = 0
    for it, tau in enumerate(taun):
        tfull = dt + tau
        if route == "log":
            a1 = _ang_avg_log(tfull, rn2[None, None, :],
                              bgrid[:, :, None], ell)
        else:
            a1 = _ang_avg_corr(tfull, rn2[None, None, :],
                               bgrid[:, :, None])
        evals += a1.size
        a2 = np.tensordot(cw, a1, axes=(0, 1)) * 0.5
        for a, b, sg in terms:
            total += (tauw[it] * sg * tcorr[(a, b)][it]
                      * pref * (w1[a] @ a2 @ w2[b]))
    return total, evals


def _spread(batch_means):
    return batch_means.std(ddof=1) / math.sqrt(_N_BATCHES)


def _draw_image_weighted(spec: TestFunctionSpec, rng, n):
    """n points from the spec's sampling density plus weights w such
    that E[w1 w2 F(x1 - x2)] estimates int int g1 g2 F for
    unit-amplitude images g.

    Gaussians are importance sampled from their own Gaussian factors,
    which turns the weight into the image's polynomial part times the
    normalization (2 pi)^2 sigma_t sigma_x^3.  Bumps are sampled
    uniformly over their exact support cylinder, weight volume times
    image.
    """
    if spec.kind == "gaussian":
        st = spec.temporal_width
        sx = spec.spatial_width
        t = spec.t_center + st * rng.standard_normal(n)
        x = spec.x_center + sx * rng.standard_normal((n, 3))
        th = t - spec.t_center
        rho = np.sqrt(((x - spec.x_center) ** 2).sum(axis=-1))
        w = (2.0 * PI) ** 2 * st * sx ** 3 * _poly_image4(th, rho, st, sx)
        return t, x, w
    t, x, th, rho, vol = _draw_uniform_support(spec, rng, n)
    return t, x, vol * _unit_image(spec, th, rho)


def _draw_uniform_support(spec: TestFunctionSpec, rng, n):
    """Uniform samples over a bump's support: a time interval times a
    ball.  Returns (t, x, centered t, centered radius, volume)."""
    wt = BUMP_SUPPORT_SIGMAS * spec.temporal_width
    wx = BUMP_SUPPORT_SIGMAS * spec.spatial_width
    t = spec.t_center + wt * (2.0 * rng.random(n) - 1.0)
    direc = rng.standard_normal((n, 3))
    direc /= np.linalg.norm(direc, axis=1, keepdims=True)
    rad = wx * rng.random(n) ** (1.0 / 3.0)
    x = spec.x_center + rad[:, None] * direc
    vol = 2.0 * wt * (4.0 / 3.0) * PI * wx ** 3
    return t, x, t - spec.t_center, rad, vol


def _batched_pair_means(spec1, spec2, cfg, pair_fns, draw):
    """Per-batch means of w1 w2 f(tau, r) for each f in pair_fns.

    One generator, canonical spec order, fixed chunk length: the sample
    stream depends only on (specs, seed, mc_samples), so swapping the
    spec arguments cannot change a single bit of the result.
    """
    a, b = sorted((spec1, spec2), key=lambda s: s._sort_key())
    rng = np.random.default_rng(cfg.seed)
    bs = cfg.batch_size
    means = np.zeros((len(pair_fns), _N_BATCHES))
    for ib in range(_N_BATCHES):
        acc = np.zeros(len(pair_fns))
        done = 0
        while done < bs:
            k = min(_MC_CHUNK, bs - done)
            ta, xa, wa = draw(a, rng, k)
            tb, xb, wb = draw(b, rng, k)
            tau = ta - tb
            r = np.sqrt(((xa - xb) ** 2).sum(axis=-1))
            ww = wa * wb
            for j, f in enumerate(pair_fns):
                acc[j] += (ww * f(tau, r)).sum()
            done += k
        means[:, ib] = acc / bs
    return means


def smeared_K(spec1: TestFunctionSpec, spec2: TestFunctionSpec,
              cfg: SmearingConfig = DEFAULT_SMEARING) -> QuadratureResult:
    """Doubly smeared quadratic-operator expectation, log-kernel route.

    The returned value is independent of cfg.ell up to the quoted
    error; rerunning at several scales with the same seed isolates the
    scale-dependent pairings, whose expectation is exactly zero.

    Route selection: two Gaussians at epsilon = 0 use the stratified
    conditional estimator; two compact bumps with spacelike-separated
    supports at epsilon = 0 use the deterministic bipolar quadrature
    (the error bar is the shift under a coarser rule); every other
    combination falls back to two-point Monte Carlo.
    """
    # the amplitude product scales a unit-amplitude estimate as the very
    # last operation, so rescaling an amplitude rescales K with no other
    # change (bilinearity down to the final rounding)
    amps = spec1.amplitude * spec2.amplitude
    if cfg.epsilon == 0.0 and _both_gaussian(spec1, spec2):
        means, count = _strat_pair_means(spec1, spec2, cfg, (cfg.ell,))
        base = -(means[0].mean() / LOG_REP_NORM)
        err = _spread(means[0]) / LOG_REP_NORM
        return QuadratureResult(value=amps * base,
                                error_estimate=abs(amps) * err,
                                evaluations=count)
    if cfg.epsilon == 0.0 and _spacelike_disjoint(spec1, spec2):
        val, ev1 = _bipolar_pairing(spec1, spec2, cfg.ell,
                                    _QUAD_N_PER, "log")
        coarse, ev2 = _bipolar_pairing(spec1, spec2, cfg.ell,
                                       _QUAD_N_ERR, "log")
        base = -(val / LOG_REP_NORM)
        err = abs(val - coarse) / LOG_REP_NORM
        return QuadratureResult(value=amps * base,
                                error_estimate=abs(amps) * err,
                                evaluations=ev1 + ev2)

    def pair(tau, r):
        return _log_sq(tau, r, cfg.ell, cfg.epsilon)

    means = _batched_pair_means(spec1, spec2, cfg, (pair,),
                                _draw_image_weighted)[0]
    base = -(means.mean() / LOG_REP_NORM)
    return QuadratureResult(value=amps * base,
                            error_estimate=abs(amps) * (_spread(means)
                                                        / LOG_REP_NORM),
                            evaluations=_N_BATCHES * cfg.batch_size)


def smeared_K_direct(spec1: TestFunctionSpec, spec2: TestFunctionSpec,
                     cfg: SmearingConfig = DEFAULT_SMEARING) -> QuadratureResult:
    """Same expectation by pairing the smearing functions directly with
    the correlator, with no integration by parts.

    Valid only when no sample pair can be null separated, so both specs
    must be compact bumps and the gap between the support balls must
    exceed the largest possible time offset.  Serves as the strongest
    cross-check of the log-kernel route.
    """
    if spec1.kind != "compact_bump" or spec2.kind != "compact_bump":
        raise DomainError("direct pairing needs compact_bump supports")
    if not _spacelike_disjoint(spec1, spec2):
        gap = (float(np.linalg.norm(spec1.x_center - spec2.x_center))
               - spec1.spatial_support_radius
               - spec2.spatial_support_radius)
        t_span = (abs(spec1.t_center - spec2.t_center)
                  + spec1.temporal_half_support
                  + spec2.temporal_half_support)
        raise DomainError(
            "supports must stay spacelike separated: spatial gap "
            f"{gap:.3g} does not exceed the time span {t_span:.3g}")

    def draw(spec, rng, n):
        t, x, th, rho, vol = _draw_uniform_support(spec, rng, n)
        wt = BUMP_SUPPORT_SIGMAS * spec.temporal_width
        wx = BUMP_SUPPORT_SIGMAS * spec.spatial_width
        return t, x, vol * _bump(th / wt) * _bump(rho / wx)

    means = _batched_pair_means(spec1, spec2, cfg, (em_corr_values,),
                                draw)[0]
    amps = spec1.amplitude * spec2.amplitude
    return QuadratureResult(value=amps * means.mean(),
                            error_estimate=abs(amps) * _spread(means),
                            evaluations=_N_BATCHES * cfg.batch_size)


@dataclass(frozen=True)
class EllScanReport:
    """smeared_K at several scales, estimated from shared samples."""

    factors: tuple
    scales: tuple
    values: tuple
    errors: tuple
    max_pairwise_rel_deviation: float
    evaluations: int


def ell_invariance_scan(spec1: TestFunctionSpec, spec2: TestFunctionSpec,
                        cfg: SmearingConfig, ell_factors) -> EllScanReport:
    """Evaluate smeared_K at cfg.ell times each factor, all scales
    sharing one sample stream.

    Sharing removes the common Monte Carlo noise from the differences,
    so the pairwise deviations probe the scale-invariance identity
    itself: what remains of a difference is the sampled version of the
    ln-linear pairing, whose expectation vanishes.  The deviation is
    reported relative to the largest |K| in the scan.  On the
    deterministic disjoint-support route the scales are evaluated
    independently and the deviation reflects quadrature error alone.
    """
    factors = tuple(float(f) for f in ell_factors)
    if not factors:
        raise DomainError("need at least one scale factor")
    if any(not (math.isfinite(f) and f > 0.0) for f in factors):
        raise DomainError("scale factors must be finite and positive")
    scales = tuple(cfg.ell * f for f in factors)
    amps = spec1.amplitude * spec2.amplitude

    if cfg.epsilon == 0.0 and _both_gaussian(spec1, spec2):
        means, count = _strat_pair_means(spec1, spec2, cfg, scales)
        values = tuple(amps * -(m.mean() / LOG_REP_NORM) for m in means)
        errors = tuple(abs(amps) * (_spread(m) / LOG_REP_NORM)
                       for m in means)
        evaluations = count
    elif cfg.epsilon == 0.0 and _spacelike_disjoint(spec1, spec2):
        vals = []
        errs = []
        evaluations = 0
        for ell in scales:
            v, e1 = _bipolar_pairing(spec1, spec2, ell, _QUAD_N_PER, "log")
            c, e2 = _bipolar_pairing(spec1, spec2, ell, _QUAD_N_ERR, "log")
            vals.append(amps * -(v / LOG_REP_NORM))
            errs.append(abs(amps) * (abs(v - c) / LOG_REP_NORM))
            evaluations += e1 + e2
        values = tuple(vals)
        errors = tuple(errs)
    else:
        def make_pair(ell):
            return lambda tau, r: _log_sq(tau, r, ell, cfg.epsilon)

        means = _batched_pair_means(spec1, spec2, cfg,
                                    tuple(make_pair(e) for e in scales),
                                    _draw_image_weighted)
        values = tuple(amps * -(m.mean() / LOG_REP_NORM) for m in means)
        errors = tuple(abs(amps) * (_spread(m) / LOG_REP_NORM)
                       for m in means)
        evaluations = _N_BATCHES * cfg.batch_size

    dev = 0.0
    if len(values) > 1:
        widest = max(values) - min(values)
        scale = max(abs(v) for v in values)
        dev = widest / scale if scale > 0.0 else 0.0
    return EllScanReport(factors=factors, scales=scales, values=values,
                         errors=errors, max_pairwise_rel_deviation=dev,
                         evaluations=evaluations)
