"""Transforms: inverse/forward identities, band limits, temporal spectrum."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.kernels import (SpacetimeSeparation, ThermalState, em_corr,
                             em_ft_kernel, scalar_corr, scalar_ft_kernel,
                             thermal_power)
from negspec.spectra import (BandLimit, band_limited_corr,
                             extremum_interchange_report, forward_spatial_ft,
                             inverse_spatial_ft, temporal_ft)
from negspec.thermal import thermal_corr_imagesum

PI = math.pi

# scipy.integrate.quad oracles for the band-limited reduction of the
# equal-time scalar spectrum P(k) = -k/(64 pi^5) over the band (1, 2)
BAND_SCALAR_R07 = -0.00189531973433562
BAND_SCALAR_R20 = 5.5055045274961074e-05


def test_inverse_transform_scalar_point():
    sep = SpacetimeSeparation(0.5, 1.2)
    res = inverse_spatial_ft(scalar_ft_kernel, sep)
    assert res.value == pytest.approx(scalar_corr(sep), rel=1e-6)


def test_inverse_transform_em_point():
    sep = SpacetimeSeparation(0.5, 1.2)
    res = inverse_spatial_ft(em_ft_kernel, sep)
    assert res.value == pytest.approx(em_corr(sep), rel=1e-4)


def test_forward_transform_thermal_point():
    state = ThermalState(1.0)
    res = forward_spatial_ft(lambda r: thermal_corr_imagesum(r, state), 1.0)
    assert res.value == pytest.approx(thermal_power(1.0, state), rel=1e-8)


def test_band_limited_scalar_oracle():
    band = BandLimit(1.0, 2.0)
    P = lambda k: -k / (64 * PI**5)
    assert band_limited_corr(P, band, 0.7) == pytest.approx(
        BAND_SCALAR_R07, rel=1e-10)
    assert band_limited_corr(P, band, 2.0) == pytest.approx(
        BAND_SCALAR_R20, rel=1e-10)
    # r = 0 reduction: 4 pi int k^2 P dk = -(k1^4 - k0^4) / (64 pi^4)
    assert band_limited_corr(P, band, 0.0) == pytest.approx(
        -(2.0**4 - 1.0) / (64 * PI**4), rel=1e-12)


def test_band_r0_switch_is_continuous():
    band = BandLimit(1.0, 2.0)
    P = lambda k: -k / (64 * PI**5)
    r_switch = 1e-6 / band.k1
    below = band_limited_corr(P, band, 0.5 * r_switch)
    above = band_limited_corr(P, band, 2.0 * r_switch)
    assert below == pytest.approx(above, rel=1e-8)


@given(r=st.floats(0.1, 10.0), a=st.floats(-2, 2), b=st.floats(-2, 2))
@settings(max_examples=40, deadline=None)
def test_band_antisymmetry_and_linearity(r, a, b):
    band = BandLimit(0.5, 3.0)
    P = lambda k: a * k + b * np.sin(k)
    plus = band_limited_corr(P, band, r)
    minus = band_limited_corr(lambda k: -P(k), band, r)
    assert minus == -plus  # exactly odd by construction
    two = band_limited_corr(lambda k: 2.0 * P(k), band, r)
    assert two == pytest.approx(2.0 * plus, rel=1e-9, abs=1e-15)


def test_extremum_interchange_on_em_band():
    band = BandLimit(1.0, 2.0)
    r_grid = np.linspace(0.5, 15.0, 120)
    P = lambda k: em_ft_kernel(0.0, k)
    plus = extremum_interchange_report(P, band, r_grid)
    minus = extremum_interchange_report(lambda k: -P(k), band, r_grid)
    assert len(plus) == len(minus) > 0
    swap = {"min": "max", "max": "min"}
    for p, m in zip(plus, minus):
        assert p.r == pytest.approx(m.r, rel=1e-9)
        assert m.kind == swap[p.kind]
        assert m.value == pytest.approx(-p.value, rel=1e-9)


def test_temporal_ft_em_spot():
    # quadratic-field correlator at zero spatial separation, complex capable
    corr = lambda z: 3.0 / (PI**4 * z**8)
    res = temporal_ft(corr, 2.0)
    assert res.value == pytest.approx(2.0**7 / (840 * PI**3), rel=5e-3)
    assert res.value > 0


def test_inverse_transform_is_deterministic():
    sep = SpacetimeSeparation(0.8, 1.6)
    a = inverse_spatial_ft(scalar_ft_kernel, sep)
    b = inverse_spatial_ft(scalar_ft_kernel, sep)
    assert a.value == b.value
