"""Quadrature engine: panel integrals, oscillatory tails, Abel limits, MC."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.errors import DomainError, ExtrapolationDiverged, NonConvergence
from negspec.regquad import (DEFAULT_SCHEDULE, OscillatoryIntegrand,
                             QuadratureResult, RegulatorSchedule, abel_limit,
                             finite_panel_integral, mc_integrate,
                             oscillatory_integral)

PI = math.pi


def test_finite_panel_polynomial():
    res = finite_panel_integral(lambda x: x**3, 0.0, 1.0)
    assert res.value == pytest.approx(0.25, abs=1e-13)
    res = finite_panel_integral(np.sin, 0.0, PI)
    assert res.value == pytest.approx(2.0, rel=1e-12)
    assert res.error_estimate < 1e-10


def test_oscillatory_sine_integral():
    # int_0^inf sin(u)/u du = pi/2
    g = OscillatoryIntegrand(amplitude=lambda u: 1.0 / u, phase_frequency=1.0)
    res = oscillatory_integral(g)
    assert res.value == pytest.approx(PI / 2, rel=1e-12)


def test_oscillatory_damped_closed_forms():
    # int_0^inf e^{-a u} sin(f u) du = f / (f^2 + a^2)
    g = OscillatoryIntegrand(amplitude=lambda u: np.ones_like(u),
                             phase_frequency=2.0)
    res = oscillatory_integral(g, alpha=0.3)
    assert res.value == pytest.approx(2.0 / (4.0 + 0.09), rel=1e-12)
    # int_0^inf e^{-a u} cos(u) du = a / (1 + a^2)
    g = OscillatoryIntegrand(amplitude=lambda u: np.ones_like(u),
                             phase_frequency=1.0, kind="cos")
    res = oscillatory_integral(g, alpha=0.5)
    assert res.value == pytest.approx(0.5 / 1.25, rel=1e-11)


def test_oscillatory_max_panels():
    g = OscillatoryIntegrand(amplitude=lambda u: 1.0 / u, phase_frequency=1.0)
    with pytest.raises(NonConvergence):
        oscillatory_integral(g, max_panels=3)


def test_integrand_validation():
    with pytest.raises(DomainError):
        OscillatoryIntegrand(amplitude=abs, phase_frequency=0.0)
    with pytest.raises(DomainError):
        OscillatoryIntegrand(amplitude=abs, phase_frequency=1.0, kind="tan")
    with pytest.raises(DomainError):
        RegulatorSchedule(values=(), extrapolation_order=3)
    with pytest.raises(DomainError):
        RegulatorSchedule(values=(0.1, 0.2), extrapolation_order=3)
    with pytest.raises(DomainError):
        RegulatorSchedule(values=(0.2, 0.1), extrapolation_order=0)


@given(c0=st.floats(-3, 3), c1=st.floats(-3, 3), c2=st.floats(-3, 3))
@settings(max_examples=50, deadline=None)
def test_abel_limit_exact_on_even_polynomials(c0, c1, c2):
    # even regulator families are what power=2 is for; degree <= order
    sched = RegulatorSchedule(values=(0.4, 0.2, 0.1, 0.05), extrapolation_order=3)
    res = abel_limit(lambda a: c0 + c1 * a**2 + c2 * a**4, sched, power=2.0)
    assert res.value == pytest.approx(c0, abs=1e-10 * (1 + abs(c0)))


def test_abel_limit_default_schedule():
    # the family is even in alpha, so power=2 sees a smooth polynomial
    res = abel_limit(lambda a: 1.0 / (1.0 + a * a), DEFAULT_SCHEDULE, power=2.0)
    assert res.value == pytest.approx(1.0, rel=1e-11)
    res = abel_limit(lambda a: 1.0 / (1.0 + a * a), DEFAULT_SCHEDULE)
    assert res.value == pytest.approx(1.0, rel=1e-6)
    assert abs(res.value - 1.0) < 10 * res.error_estimate


def test_abel_limit_divergence_detected():
    sched = RegulatorSchedule(values=(0.4, 0.2, 0.1, 0.05, 0.025),
                              extrapolation_order=4)
    with pytest.raises(ExtrapolationDiverged):
        abel_limit(lambda a: 1.0 / a, sched)


def test_mc_deterministic_and_correct():
    fn = lambda x: x[:, 0] * x[:, 1]
    a = mc_integrate(fn, [(0.0, 1.0), (0.0, 1.0)], samples=40000, seed=11)
    b = mc_integrate(fn, [(0.0, 1.0), (0.0, 1.0)], samples=40000, seed=11)
    assert a.value == b.value and a.error_estimate == b.error_estimate
    assert abs(a.value - 0.25) < 5 * a.error_estimate
    assert a.evaluations == 40000


def test_mc_constant_is_volume_exact():
    fn = lambda x: np.ones(len(x))
    res = mc_integrate(fn, [(0.0, 2.0), (-1.0, 3.0)], samples=10000, seed=3)
    assert res.value == pytest.approx(8.0, rel=1e-15)
    assert res.error_estimate == 0.0


def test_mc_error_shrinks_with_samples():
    fn = lambda x: np.exp(x[:, 0])
    small = mc_integrate(fn, [(0.0, 1.0)], samples=20000, seed=5)
    big = mc_integrate(fn, [(0.0, 1.0)], samples=200000, seed=5)
    ratio = small.error_estimate / big.error_estimate
    assert 0.5 * math.sqrt(10) < ratio < 2.0 * math.sqrt(10)


def test_quadrature_result_fields():
    res = finite_panel_integral(lambda x: np.ones_like(x), 0.0, 1.0)
    assert isinstance(res, QuadratureResult)
    assert res.evaluations > 0
