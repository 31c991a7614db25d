"""Smeared pairing: frozen oracles, route agreement, exact symmetries."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.errors import CoincidentPoints, DomainError
from negspec.smeared import (DEFAULT_SMEARING, SmearingConfig,
                             TestFunctionSpec, _bipolar_pairing,
                             ell_invariance_scan, log_kernel, smeared_K,
                             smeared_K_direct, smeared_operator_image)

PI = math.pi
LOG_REP_NORM = 3840 * PI**4

GAUSS = TestFunctionSpec(kind="gaussian", temporal_width=0.5, spatial_width=1.0)
BUMP_L = TestFunctionSpec(kind="compact_bump", center=(0.0, -3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)
BUMP_R = TestFunctionSpec(kind="compact_bump", center=(0.0, 3.0, 0.0, 0.0),
                          temporal_width=0.2, spatial_width=0.5)

# frozen regression values (default config, seed 20260816)
K_GAUSS_FROZEN = 0.011141753452384674
K_GAUSS_ERR_FROZEN = 6.62293561223972e-05
# separable closed-form reduction of the same pairing, evaluated by a
# deterministic 2d quadrature during development (independent of the MC)
K_GAUSS_ORACLE = 4.1763023802286e3 / LOG_REP_NORM
# deterministic bipolar quadrature for the disjoint-bump pair
K_BUMP_DIRECT_N16 = 7.280949342641907e-08


def test_spec_validation():
    with pytest.raises(DomainError):
        TestFunctionSpec(kind="lorentzian")
    with pytest.raises(DomainError):
        TestFunctionSpec(kind="gaussian", temporal_width=0.0)
    with pytest.raises(DomainError):
        TestFunctionSpec(kind="gaussian", spatial_width=-1.0)
    with pytest.raises(DomainError):
        TestFunctionSpec(kind="gaussian", center=(0.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        SmearingConfig(mc_samples=100)
    with pytest.raises(DomainError):
        SmearingConfig(ell=0.0)
    with pytest.raises(DomainError):
        SmearingConfig(epsilon=-1e-6)


def test_log_kernel_branches():
    cfg = SmearingConfig(epsilon=1e-6)
    x = np.array([[0.0, 0.0, 0.0, 0.0]])
    xp = np.array([[0.5, 2.0, 0.0, 0.0]])
    assert np.isfinite(log_kernel(x, xp, cfg)).all()
    with pytest.raises(CoincidentPoints):
        log_kernel(x, x, SmearingConfig(epsilon=0.0))


def test_gaussian_pairing_frozen_value():
    res = smeared_K(GAUSS, GAUSS)
    assert res.value == pytest.approx(K_GAUSS_FROZEN, rel=1e-12)
    assert res.error_estimate == pytest.approx(K_GAUSS_ERR_FROZEN, rel=1e-9)
    assert res.evaluations >= DEFAULT_SMEARING.mc_samples


def test_gaussian_pairing_against_oracle():
    res = smeared_K(GAUSS, GAUSS)
    pull = (res.value - K_GAUSS_ORACLE) / res.error_estimate
    assert abs(pull) < 4.0


def test_pairing_deterministic():
    a = smeared_K(GAUSS, GAUSS)
    b = smeared_K(GAUSS, GAUSS)
    assert a.value == b.value and a.error_estimate == b.error_estimate


def test_swap_symmetry_bitwise():
    other = TestFunctionSpec(kind="gaussian", center=(0.2, 0.5, -0.3, 1.0),
                             temporal_width=0.7, spatial_width=1.4)
    assert smeared_K(GAUSS, other).value == smeared_K(other, GAUSS).value
    # quadrature route, deliberately asymmetric widths
    wide = TestFunctionSpec(kind="compact_bump", center=(0.0, 3.0, 0.0, 0.0),
                            temporal_width=0.35, spatial_width=0.9)
    va, _ = _bipolar_pairing(BUMP_L, wide, 1.0, 8, "log")
    vb, _ = _bipolar_pairing(wide, BUMP_L, 1.0, 8, "log")
    assert va == vb


@given(a1=st.sampled_from([-3.0, -1.5, -0.5, 2.0, 4.0]),
       a2=st.sampled_from([-2.0, 0.5, 1.0, 3.0]))
@settings(max_examples=10, deadline=None)
def test_amplitude_bilinearity_exact(a1, a2):
    cfg = SmearingConfig(mc_samples=20000, seed=42)
    base = smeared_K(GAUSS, GAUSS, cfg)
    scaled = smeared_K(
        TestFunctionSpec(kind="gaussian", temporal_width=0.5,
                         spatial_width=1.0, amplitude=a1),
        TestFunctionSpec(kind="gaussian", temporal_width=0.5,
                         spatial_width=1.0, amplitude=a2), cfg)
    assert scaled.value == a1 * a2 * base.value
    assert scaled.error_estimate == abs(a1 * a2) * base.error_estimate


def test_translation_invariance():
    shift = (0.4, -1.1, 0.3, 2.0)
    moved = TestFunctionSpec(kind="gaussian", center=shift,
                             temporal_width=0.5, spatial_width=1.0)
    a = smeared_K(GAUSS, GAUSS)
    b = smeared_K(moved, moved)
    assert b.value == pytest.approx(a.value, rel=1e-10)


def test_disjoint_bump_routes_agree():
    # log-representation quadrature against the direct correlator pairing
    raw, _ = _bipolar_pairing(BUMP_L, BUMP_R, 1.0, 24, "log")
    k_log = -raw / LOG_REP_NORM
    direct, _ = _bipolar_pairing(BUMP_L, BUMP_R, 1.0, 16, "direct")
    assert direct == pytest.approx(K_BUMP_DIRECT_N16, rel=1e-12)
    assert k_log == pytest.approx(direct, rel=1e-2)
    assert k_log > 0  # spacelike pair of like test functions correlates


def test_direct_route_requires_disjoint_bumps():
    with pytest.raises(DomainError):
        smeared_K_direct(GAUSS, GAUSS)
    near = TestFunctionSpec(kind="compact_bump", center=(0.0, -2.6, 0.0, 0.0),
                            temporal_width=0.2, spatial_width=0.5)
    with pytest.raises(DomainError):
        smeared_K_direct(BUMP_L, near)


def test_ell_scan_gaussian():
    cfg = SmearingConfig(mc_samples=200000, seed=DEFAULT_SMEARING.seed)
    rep = ell_invariance_scan(GAUSS, GAUSS, cfg, (1.0, 2.0, 5.0))
    assert rep.factors == (1.0, 2.0, 5.0)
    assert rep.scales == tuple(f * cfg.ell for f in rep.factors)
    assert rep.max_pairwise_rel_deviation < 3e-2
    assert len(rep.values) == len(rep.errors) == 3
    assert rep.evaluations >= cfg.mc_samples


def test_ell_scan_validation():
    with pytest.raises(DomainError):
        ell_invariance_scan(GAUSS, GAUSS, DEFAULT_SMEARING, ())
    with pytest.raises(DomainError):
        ell_invariance_scan(GAUSS, GAUSS, DEFAULT_SMEARING, (1.0, -2.0))


def test_operator_image_even_in_time():
    img = smeared_operator_image(GAUSS)
    pts = np.array([[0.3, 0.2, -0.1, 0.4], [-0.3, 0.2, -0.1, 0.4]])
    vals = img(pts)
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
