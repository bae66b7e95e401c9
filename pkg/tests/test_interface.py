import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scw_interface.interface import (
    DetectorSpec,
    FilterSpec,
    ModulationParams,
    MultimodeCoherentState,
    alpha0_for_peak_rate,
    choose_truncation,
    click_rate,
    expected_clicks,
    interface_transform,
    make_scw_state,
    mean_sideband_photons,
    polarization_amplitudes,
    polarization_from_ports,
)

from oracles import bessel_series

IDEAL = FilterSpec(r=1.0, rho=0.0)


def scw(alpha0, beta, phi=0.0, S=8):
    return make_scw_state(alpha0, ModulationParams(beta, phi=phi), S)


def ports(beta, phi_in, phi_lo=0.0, filt=IDEAL, alpha0=1.0, S=8, **kw):
    return interface_transform(scw(alpha0, beta, phi_in, S), filt, ModulationParams(beta, phi=phi_lo), **kw)


# -- types ------------------------------------------------------------------


def test_modulation_phase_reduced():
    assert ModulationParams(0.1, phi=2 * math.pi + 0.5).phi == pytest.approx(0.5)
    assert ModulationParams(0.1, phi=-0.5).phi == pytest.approx(2 * math.pi - 0.5)
    with pytest.raises(ValueError):
        ModulationParams(-0.1)


@pytest.mark.parametrize("kw", [dict(r=1.1), dict(rho=-0.1)])
def test_filter_validation(kw):
    with pytest.raises(ValueError):
        FilterSpec(**kw)


@pytest.mark.parametrize("kw", [dict(epsilon=1.5), dict(gamma=-1), dict(dt=0), dict(T=-1)])
def test_detector_validation(kw):
    with pytest.raises(ValueError):
        DetectorSpec(**kw)


def test_state_length_checked():
    with pytest.raises(ValueError):
        MultimodeCoherentState(1.0, 2, np.zeros(4))
    with pytest.raises(ValueError):
        MultimodeCoherentState(1.0, 1, [0, np.nan, 0])


# -- make_scw_state ---------------------------------------------------------


def test_unmodulated_state_is_carrier_only():
    s = scw(1.0, 0.0, phi=1.234, S=3)
    assert s.amp(0) == 1
    assert all(s.amp(m) == 0 for m in (-3, -2, -1, 1, 2, 3))


def test_first_sideband_value():
    s = scw(1.0, 0.3, S=5)
    assert s.amp(1).real == pytest.approx(bessel_series(1, 0.3), abs=1e-14)
    assert s.amp(1).real == pytest.approx(0.148319, abs=1e-6)


def test_pi_phase_sign_pattern():
    a, b = scw(1.0, 0.3, 0.0, 5), scw(1.0, 0.3, math.pi, 5)
    assert b.amp(1) == pytest.approx(-a.amp(1), abs=1e-15)
    assert b.amp(2) == pytest.approx(a.amp(2), abs=1e-15)


def test_truncation_must_be_positive():
    with pytest.raises(ValueError):
        scw(1.0, 0.3, S=0)


# -- choose_truncation ------------------------------------------------------


def test_choose_truncation():
    assert choose_truncation(0.0, 1e-3) == 5
    s_small = choose_truncation(0.15, 1e-12)
    assert s_small <= 8
    tail = 2 * sum(bessel_series(k, 0.15) ** 2 for k in range(s_small + 1, s_small + 30))
    assert tail < 1e-12
    assert choose_truncation(1.5, 1e-12) > s_small


# -- interface_transform ----------------------------------------------------


def test_minus_port_dark_in_ideal_small_beta_limit():
    out = ports(1e-4, 0.0)
    sb = [abs(out.minus.amp(m)) for m in (-2, -1, 1, 2)]
    assert max(sb) < 1e-12


def test_pi_shift_exits_other_port():
    out = ports(0.3, math.pi)
    assert abs(out.minus.amp(1)) > 10 * abs(out.plus.amp(1))
    J0 = bessel_series(0, 0.3)
    J1 = bessel_series(1, 0.3)
    assert out.plus.amp(1) == pytest.approx(J1 * (-1 + J0) / math.sqrt(2), abs=1e-14)
    assert out.minus.amp(1) == pytest.approx(J1 * (-1 - J0) / math.sqrt(2), abs=1e-14)


def test_plus_port_first_sideband_hand_value():
    # hand evaluation with series Bessel values: J1(1 - rho)(1 + r J0)/sqrt2, squared
    out = ports(0.15, 0.0, filt=FilterSpec(0.99, 1e-4))
    assert abs(out.plus.amp(1)) ** 2 == pytest.approx(0.01101126350804213, rel=1e-12)


def test_carrier_term_matches_closed_form():
    filt = FilterSpec(0.9, 0.01)
    out = ports(0.4, 0.7, filt=filt, alpha0=2.0)
    J0 = bessel_series(0, 0.4)
    for port, sign in ((out.plus, 1), (out.minus, -1)):
        expected = 2.0 * J0 * ((1 - 0.9) + sign * J0 * 0.9 * (1 - 0.9)) / math.sqrt(2)
        assert port.amp(0) == pytest.approx(expected, abs=1e-14)


def test_physical_mode_uses_root_coefficients():
    filt = FilterSpec(0.81, 0.19)
    out = ports(0.2, 0.0, filt=filt, physical=True)
    J0, J1 = bessel_series(0, 0.2), bessel_series(1, 0.2)
    assert out.plus.amp(1) == pytest.approx(J1 * 0.9 * (1 + 0.9 * J0) / math.sqrt(2), abs=1e-14)


def test_mismatched_beta_rejected():
    with pytest.raises(ValueError):
        interface_transform(scw(1.0, 0.3), IDEAL, ModulationParams(0.31))


@settings(max_examples=60, deadline=None)
@given(
    beta=st.floats(0, 1.5),
    phi_in=st.floats(0, 2 * math.pi),
    phi_lo=st.floats(0, 2 * math.pi),
    r=st.floats(0, 1),
    rho=st.floats(0, 1),
)
def test_splitter_conserves_energy_per_sideband(beta, phi_in, phi_lo, r, rho):
    S = 8
    out = ports(beta, phi_in, phi_lo, filt=FilterSpec(r, rho), S=S)
    J0 = bessel_series(0, beta)
    for m in range(-S, S + 1):
        if m == 0:
            continue
        x = bessel_series(m, beta) * (1 - rho) * np.exp(1j * m * phi_in)
        y = bessel_series(m, beta) * (1 - rho) * np.exp(1j * m * phi_lo) * r * J0
        before = abs(x) ** 2 + abs(y) ** 2
        after = abs(out.plus.amp(m)) ** 2 + abs(out.minus.amp(m)) ** 2
        assert after == pytest.approx(before, rel=1e-12, abs=1e-300)


@given(st.floats(0, 2 * math.pi), st.floats(0.001, 1.5))
def test_port_swap_under_pi_shift(dphi, beta):
    a = ports(beta, dphi)
    b = ports(beta, dphi + math.pi)
    for m in (-1, 1):
        assert abs(b.plus.amp(m)) ** 2 == pytest.approx(abs(a.minus.amp(m)) ** 2, rel=1e-10, abs=1e-15)
        assert abs(b.minus.amp(m)) ** 2 == pytest.approx(abs(a.plus.amp(m)) ** 2, rel=1e-10, abs=1e-15)


# -- polarization amplitudes ------------------------------------------------


@pytest.mark.parametrize(
    "dphi, m, expected",
    [
        (0.0, 1, (1, 0)),
        (math.pi, 1, (0, 1)),
        (math.pi / 2, 1, (1 / math.sqrt(2), 1 / math.sqrt(2))),
        (math.pi / 2, -1, (1 / math.sqrt(2), -1 / math.sqrt(2))),
    ],
)
def test_polarization_table(dphi, m, expected):
    cH, cV = polarization_amplitudes(dphi, m)
    assert cH == pytest.approx(expected[0], abs=1e-15)
    assert cV == pytest.approx(expected[1], abs=1e-15)


def test_polarization_bad_sideband():
    with pytest.raises(ValueError):
        polarization_amplitudes(0.0, 2)


@given(st.floats(-10, 10), st.sampled_from([-1, 1]))
def test_polarization_normalized(dphi, m):
    cH, cV = polarization_amplitudes(dphi, m)
    assert abs(cH) ** 2 + abs(cV) ** 2 == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0, 2 * math.pi), st.floats(0.001, 0.2))
def test_port_ratio_matches_polarization_map(dphi, beta):
    out = ports(beta, dphi)
    p, q = abs(out.plus.amp(1)) ** 2, abs(out.minus.amp(1)) ** 2
    assert q / (p + q) == pytest.approx(math.sin(dphi / 2) ** 2, abs=1e-3)


@pytest.mark.parametrize("dphi", [0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 1.0])
@pytest.mark.parametrize("m", [-1, 1])
def test_ports_with_path_phase_give_polarization_state(dphi, m):
    # small beta so r J0 ~ 1; states agree up to global phase
    cH, cV = polarization_from_ports(ports(1e-4, dphi), m)
    eH, eV = polarization_amplitudes(dphi, m)
    overlap = abs(np.conj(eH) * cH + np.conj(eV) * cV)
    assert overlap == pytest.approx(1.0, abs=1e-7)


# -- photon numbers and clicks ----------------------------------------------


def test_mean_sideband_photons():
    assert mean_sideband_photons(scw(1.0, 0.0)) == 0.0
    J0 = bessel_series(0, 0.3)
    assert mean_sideband_photons(scw(1.0, 0.3, S=10)) == pytest.approx(1 - J0**2, abs=1e-14)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 1.5))
def test_mean_photons_scale_quadratically(re, im, beta):
    c = complex(re, im)
    base = mean_sideband_photons(scw(1.0, beta))
    assert mean_sideband_photons(scw(c, beta)) == pytest.approx(abs(c) ** 2 * base, rel=1e-12, abs=1e-300)


def test_dark_counts_only():
    det = DetectorSpec(gamma=100.0)
    assert expected_clicks(scw(1.0, 0.0), det, 10.0) == pytest.approx(1000.0)


def test_clicks_linear_in_duration():
    det = DetectorSpec()
    s = scw(0.15, 0.15)
    assert expected_clicks(s, det, 2.0) == pytest.approx(2 * expected_clicks(s, det, 1.0))
    with pytest.raises(ValueError):
        expected_clicks(s, det, 0.0)


def test_experiment_count_rate_scale():
    # alpha0 ~ 0.15 at beta = 0.15 gives ~1e4 cps (order of magnitude)
    det = DetectorSpec(epsilon=0.1, gamma=100.0, dt=3.3e-9)
    out = ports(0.15, 0.0, filt=FilterSpec(0.99, 1e-4), alpha0=0.15)
    rate = click_rate(out.plus, det)
    assert 1e3 < rate < 1e5


@given(
    g=st.floats(0, 1e3), dg=st.floats(0, 1e3),
    e=st.floats(0, 0.5), de=st.floats(0, 0.5),
    a=st.floats(0, 3), da=st.floats(0, 3),
)
def test_clicks_monotone(g, dg, e, de, a, da):
    base = expected_clicks(scw(a, 0.3), DetectorSpec(epsilon=e, gamma=g), 1.0)
    assert expected_clicks(scw(a, 0.3), DetectorSpec(epsilon=e, gamma=g + dg), 1.0) >= base
    assert expected_clicks(scw(a, 0.3), DetectorSpec(epsilon=e + de, gamma=g), 1.0) >= base
    assert expected_clicks(scw(a + da, 0.3), DetectorSpec(epsilon=e, gamma=g), 1.0) >= base * (1 - 1e-12)


def test_alpha0_for_peak_rate_hits_target():
    filt, det = FilterSpec(0.99, 1e-4), DetectorSpec(gamma=100.0)
    a = alpha0_for_peak_rate(0.15, 1e4, filt, det)
    out = ports(0.15, 0.0, filt=filt, alpha0=a, S=choose_truncation(0.15))
    assert click_rate(out.plus, det, sidebands=[1]) == pytest.approx(1e4, rel=1e-12)
