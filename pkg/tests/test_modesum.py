"""Finite-box mode sums and the order-of-limits demonstration."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negspec.errors import DomainError
from negspec.modesum import (ModeSumConfig, continuum_pair_integral,
                             continuum_pair_limit, cutoff_divergence_slope,
                             cutoff_scan, mode_pair_sum,
                             order_of_limits_report)

PI = math.pi


def test_config_validation():
    with pytest.raises(DomainError):
        ModeSumConfig(box_size=0.0, mode_index=1, max_index=8)
    with pytest.raises(DomainError):
        ModeSumConfig(box_size=1.0, mode_index=0, max_index=8)
    with pytest.raises(DomainError):
        ModeSumConfig(box_size=1.0, mode_index=1, max_index=0)
    with pytest.raises(DomainError):
        ModeSumConfig(box_size=1.0, mode_index=1, max_index=8,
                      damping_alpha=-0.1)


@given(idx=st.integers(1, 4), box=st.floats(2.0, 12.0))
@settings(max_examples=25, deadline=None)
def test_static_sum_positive_and_time_even(idx, box):
    cfg = ModeSumConfig(box_size=box, mode_index=idx, max_index=10)
    assert mode_pair_sum(0.0, cfg) > 0
    assert mode_pair_sum(0.7, cfg) == mode_pair_sum(-0.7, cfg)


def test_mode_relabel_symmetry():
    cfg_p = ModeSumConfig(box_size=2 * PI, mode_index=3, max_index=12)
    cfg_m = ModeSumConfig(box_size=2 * PI, mode_index=-3, max_index=12)
    a, b = mode_pair_sum(0.5, cfg_p), mode_pair_sum(0.5, cfg_m)
    assert a == pytest.approx(b, rel=1e-13)


def test_divergence_slope_exact_on_linear_data():
    cutoffs = np.array([10.0, 20.0, 40.0, 80.0])
    assert cutoff_divergence_slope(cutoffs, 0.3 * cutoffs) == pytest.approx(
        1.0, abs=1e-12)
    assert cutoff_divergence_slope(cutoffs, 5.0 / cutoffs) == pytest.approx(
        -1.0, abs=1e-12)


def test_cutoff_scan_grows_linearly():
    cfg = ModeSumConfig(box_size=2 * PI, mode_index=1, max_index=16)
    cutoffs, values = cutoff_scan(0.0, cfg, indices=(10, 20, 40))
    assert len(cutoffs) == len(values) == 3
    assert values[1] > 1.8 * values[0]  # roughly doubles with the cutoff


def test_continuum_pair_integral_closed_form():
    tau, k, alpha = 0.8, 1.0, 0.5
    z = complex(-alpha, tau)
    ref = -(cmath.exp(k * z) / z).real / (64 * PI**5)
    assert continuum_pair_integral(tau, k, alpha) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("tau", [0.5, 1.0])
def test_continuum_limit_matches_transform_kernel(tau):
    res = continuum_pair_limit(tau, 1.0)
    ref = -math.sin(tau) / (64 * PI**5 * tau)
    assert res.value == pytest.approx(ref, rel=1e-4)


def test_order_of_limits_report():
    cfg = ModeSumConfig(box_size=2 * PI, mode_index=1, max_index=16)
    rep = order_of_limits_report(cfg, cutoff_indices=(10, 20, 40, 80))
    assert rep.static_diverged
    assert rep.static_slope == pytest.approx(1.0, abs=0.1)
    assert rep.reference == pytest.approx(-1.0 / (64 * PI**5), rel=1e-14)
    assert rep.small_tau_limit == pytest.approx(rep.reference, rel=1e-3)
    # oscillating values settle toward the reference as the offset shrinks
    devs = [abs(v - rep.reference) for v in rep.oscillating_values]
    assert devs[-1] < devs[0]


def test_damped_sum_approaches_continuum():
    # with a shared regulator the box sum converges to the continuum
    # integral as the box grows; sharp cutoffs would not (criterion above)
    alpha, tau = 0.5, 0.8
    continuum = continuum_pair_integral(tau, 1.0, alpha)
    errs = []
    for scale in (1, 2, 4):
        cfg = ModeSumConfig(box_size=2 * PI * scale, mode_index=scale,
                            max_index=16 * scale, damping_alpha=alpha)
        errs.append(abs(mode_pair_sum(tau, cfg) - continuum))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.2 * abs(continuum)
