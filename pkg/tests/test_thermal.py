"""Image sums, the thermal spectrum, and the sign-crossover locator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.errors import BracketFailure, DomainError, TailNotConverged
from negspec.kernels import ThermalState
from negspec.thermal import (ImageSumControl, crossover_ratio_closed_form,
                             crossover_temperature, em_power_total,
                             fig1_table, thermal_corr_imagesum,
                             thermal_image_term, thermal_power,
                             thermal_power_image_decomposition)

PI = math.pi
GOLDEN = (1 + math.sqrt(5)) / 2


def test_crossover_closed_form_constant():
    assert crossover_ratio_closed_form() == pytest.approx(
        2 * math.log(GOLDEN), rel=1e-15)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_crossover_ratio(k):
    ratio = crossover_temperature(k) / k
    assert ratio == pytest.approx(1 / (2 * math.log(GOLDEN)), rel=1e-10)
    assert abs(ratio - 1.0390) < 1e-3


def test_crossover_bracket_failure():
    with pytest.raises(BracketFailure):
        crossover_temperature(1.0, bracket=(5.0, 6.0))


@given(r=st.floats(0.0, 5.0), n=st.integers(1, 6), beta=st.floats(0.3, 3.0))
@settings(max_examples=60, deadline=None)
def test_image_term_closed_form(r, n, beta):
    nb2 = (n * beta) ** 2
    r2 = r * r
    ref = (2.0 / PI**4) * (3.0 * r2 - nb2) * (r2 - 3.0 * nb2) / (r2 + nb2) ** 6
    assert thermal_image_term(r, n, ThermalState(beta)) == ref


def test_imagesum_coincident_point():
    # sum over images at r = 0, beta = 1 has the closed value pi^4 / 1575
    val = thermal_corr_imagesum(0.0, ThermalState(1.0))
    assert val == pytest.approx(PI**4 / 1575, rel=1e-12)


def test_imagesum_tail_control():
    with pytest.raises(TailNotConverged):
        thermal_corr_imagesum(0.0, ThermalState(1.0),
                              ImageSumControl(max_terms=2, tail_tol=1e-12))
    with pytest.raises(DomainError):
        ImageSumControl(max_terms=0, tail_tol=1e-12)


def test_imagesum_decays():
    state = ThermalState(1.0)
    near = abs(thermal_corr_imagesum(0.5, state))
    far = abs(thermal_corr_imagesum(8.0, state))
    assert far < 1e-4 * near


def test_power_decomposition_positive_and_sums():
    k, state = 1.0, ThermalState(1.0)
    terms = thermal_power_image_decomposition(k, state, 80)
    assert np.all(terms > 0)
    assert terms.sum() == pytest.approx(thermal_power(k, state), rel=1e-12)


@given(k=st.floats(0.3, 5.0), t_lo=st.floats(0.3, 1.0), step=st.floats(0.1, 2.0))
@settings(max_examples=40, deadline=None)
def test_thermal_power_monotone_in_temperature(k, t_lo, step):
    lo = thermal_power(k, ThermalState(1.0 / t_lo))
    hi = thermal_power(k, ThermalState(1.0 / (t_lo + step)))
    assert 0 < lo < hi


def test_total_changes_sign_at_crossover():
    k = 1.4
    tc = crossover_temperature(k)
    assert em_power_total(k, ThermalState(1.0 / (0.98 * tc))) < 0
    assert em_power_total(k, ThermalState(1.0 / (1.02 * tc))) > 0


def test_fig1_table_shape():
    Ts = np.linspace(0.2, 3.0, 40)
    table = fig1_table(1.0, Ts)
    assert table.x_name == "T"
    assert table.channels() == ("vacuum", "thermal", "total")
    xs, vac = (np.array(c) for c in table.column("vacuum"))
    _, th = (np.array(c) for c in table.column("thermal"))
    _, tot = (np.array(c) for c in table.column("total"))
    assert np.allclose(xs, Ts) and vac.shape == (40,)
    assert np.all(vac < 0) and np.ptp(vac) == 0.0  # vacuum ignores T
    assert np.all(th > 0) and np.all(np.diff(th) > 0)
    assert np.allclose(tot, vac + th, rtol=1e-14)
