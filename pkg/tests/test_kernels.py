"""Closed-form spot checks and invariants for the correlator kernels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.errors import DomainError, LightConeSingularity
from negspec.kernels import (InflationParams, SpacetimeSeparation,
                             ThermalState, em_corr, em_corr_values,
                             em_ft_kernel, em_power_total, inflation_power,
                             scalar_corr, scalar_corr_values,
                             scalar_ft_kernel, sign_change_wavenumber,
                             temporal_power, thermal_power)

PI = math.pi

finite_floats = st.floats(min_value=0.05, max_value=50.0,
                          allow_nan=False, allow_infinity=False)


def test_scalar_corr_closed_form():
    # 1 / (8 pi^4 (r^2 - tau^2)^2) at (tau, r) = (1, 3)
    assert scalar_corr(SpacetimeSeparation(1.0, 3.0)) == pytest.approx(
        1.0 / (8 * PI**4 * 64.0), rel=1e-14)


def test_em_corr_closed_form():
    # (tau^2 + 3 r^2)(r^2 + 3 tau^2) / (pi^4 (r^2 - tau^2)^6) at (1, 3)
    ref = (1 + 27.0) * (9 + 3.0) / (PI**4 * 8.0**6)
    assert em_corr(SpacetimeSeparation(1.0, 3.0)) == pytest.approx(ref, rel=1e-14)


def test_em_corr_axes():
    assert em_corr(SpacetimeSeparation(1.3, 0.0)) == pytest.approx(
        3.0 / (PI**4 * 1.3**8), rel=1e-13)
    assert em_corr(SpacetimeSeparation(0.0, 1.3)) == pytest.approx(
        3.0 / (PI**4 * 1.3**8), rel=1e-13)


def test_light_cone_raises():
    with pytest.raises(LightConeSingularity):
        scalar_corr(SpacetimeSeparation(1.0, 1.0))
    with pytest.raises(LightConeSingularity):
        em_corr_values(np.array([0.5, 2.0]), np.array([0.5, 1.0]))


def test_negative_radius_rejected():
    with pytest.raises(DomainError):
        scalar_corr_values(np.array([1.0]), np.array([-0.5]))
    with pytest.raises(DomainError):
        em_corr_values(np.array([1.0]), np.array([-0.5]))


def test_scalar_ft_kernel_closed_form():
    tau, k = 0.7, 1.9
    ref = -math.sin(k * tau) / (64 * PI**5 * tau)
    assert scalar_ft_kernel(tau, k) == pytest.approx(ref, rel=1e-13)
    # tau -> 0 limit is -k / (64 pi^5), reached continuously
    assert scalar_ft_kernel(0.0, k) == pytest.approx(-k / (64 * PI**5), rel=1e-14)
    assert scalar_ft_kernel(1e-12, k) == pytest.approx(
        scalar_ft_kernel(0.0, k), rel=1e-10)


def test_em_ft_kernel_closed_form():
    tau, k = 0.4, 2.3
    ref = -k**5 * math.sin(k * tau) / (k * tau) / (960 * PI**5)
    assert em_ft_kernel(tau, k) == pytest.approx(ref, rel=1e-13)
    assert em_ft_kernel(0.0, 1.0) == pytest.approx(-1.0 / (960 * PI**5), rel=1e-14)
    # sinc zero at k tau = pi
    assert em_ft_kernel(PI / 2.3, 2.3) == pytest.approx(0.0, abs=1e-20)


@given(tau=finite_floats, k=finite_floats)
@settings(max_examples=60, deadline=None)
def test_equal_time_kernels_negative(tau, k):
    assert scalar_ft_kernel(0.0, k) < 0
    assert em_ft_kernel(0.0, k) < 0
    # tau-parity is exact: both kernels are even in the time offset
    assert scalar_ft_kernel(tau, k) == scalar_ft_kernel(-tau, k)
    assert em_ft_kernel(tau, k) == em_ft_kernel(-tau, k)


@given(tau=finite_floats, r=finite_floats, lam=st.floats(0.5, 4.0))
@settings(max_examples=60, deadline=None)
def test_corr_scaling_laws(tau, r, lam):
    # scalar correlator has mass dimension 4, the quadratic-field one 8
    if abs(r - tau) < 1e-3 * max(r, tau):
        return
    s = SpacetimeSeparation(tau, r)
    ss = SpacetimeSeparation(lam * tau, lam * r)
    assert scalar_corr(ss) == pytest.approx(scalar_corr(s) / lam**4, rel=1e-11)
    assert em_corr(ss) == pytest.approx(em_corr(s) / lam**8, rel=1e-11)


def test_temporal_power_closed_form():
    for omega in (0.5, 1.0, 3.0):
        assert temporal_power(omega) == pytest.approx(
            omega**7 / (560 * PI**2), rel=1e-14)
    with pytest.raises(DomainError):
        temporal_power(-1.0)


def test_thermal_power_closed_form():
    k, beta = 1.7, 0.9
    ref = -k**4 * math.log1p(-math.exp(-beta * k)) / (480 * PI**5 * beta)
    assert thermal_power(k, ThermalState(beta)) == pytest.approx(ref, rel=1e-13)
    assert thermal_power(k, ThermalState(beta)) > 0


@given(k=finite_floats, beta=st.floats(0.2, 5.0), lam=st.floats(0.5, 4.0))
@settings(max_examples=60, deadline=None)
def test_thermal_power_scaling(k, beta, lam):
    # (k, beta) -> (lam k, beta / lam) rescales the power by lam^5
    a = thermal_power(lam * k, ThermalState(beta / lam))
    b = thermal_power(k, ThermalState(beta))
    assert a == pytest.approx(lam**5 * b, rel=1e-12)


def test_total_is_vacuum_plus_thermal():
    k, state = 1.3, ThermalState(0.8)
    assert em_power_total(k, state) == pytest.approx(
        em_ft_kernel(0.0, k) + thermal_power(k, state), rel=1e-15)


def test_inflation_sign_change():
    params = InflationParams(lP=0.1, H=2.0, S=3.0)
    kc = sign_change_wavenumber(params)
    assert kc == pytest.approx(4 * PI * params.H / (5 * params.S), rel=1e-14)
    assert inflation_power(0.9 * kc, params) > 0
    assert inflation_power(1.1 * kc, params) < 0


def test_state_validation():
    with pytest.raises(DomainError):
        ThermalState(0.0)
    with pytest.raises(DomainError):
        ThermalState(-1.0)
    with pytest.raises(DomainError):
        InflationParams(lP=-0.1, H=1.0, S=1.0)
    with pytest.raises(DomainError):
        SpacetimeSeparation(0.0, -1.0)
