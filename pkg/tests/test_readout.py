import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rydsense.eit import AtomSystem, OpticalMedium, absorption, central_difference, transmittance
from rydsense.errors import ConfigurationError, UnresolvableParameterError
from rydsense.estimation import PhotonBudget, fi_stark_shift
from rydsense.readout import (
    FieldSpec,
    NoiseSpec,
    SensorConfig,
    baseline_slope,
    dc_retrieve_biased,
    dc_retrieve_unbiased,
    de_min_scan,
    demodulate,
    dominant_frequency,
    fi_ac,
    fi_ac_numeric,
    fi_dc_biased,
    min_detectable_field,
    sense_timeseries,
    synthesize_field,
    two_point_signal,
)
from rydsense.sigproc import TimeSeries, dft

CFG = SensorConfig()
REF_FIELD = FieldSpec(a=0.1, f_ac=50.0, harmonics=((2, 0.03, 0.0), (3, 0.015, 0.0)), drift=(0.02, 2.0, 0.0))
REF_NOISE = NoiseSpec(m_i=0.02, f_i=2.0, sigma_i=0.003, additive_rms_frac=0.4, seed=0)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SensorConfig(delta=0.0)
    with pytest.raises(ConfigurationError):
        SensorConfig(e_bias=np.inf)
    with pytest.raises(ConfigurationError):
        FieldSpec(f_ac=0.0)
    with pytest.raises(ConfigurationError):
        FieldSpec(harmonics=((2, 0.1),))
    with pytest.raises(ConfigurationError):
        NoiseSpec(sigma_i=-1.0)
    assert CFG.alpha == pytest.approx(4.32e-4, rel=1e-14)


def test_two_point_signal_basics():
    assert two_point_signal(CFG, 0.0) == 0.0
    for e in (1e-3, 0.3, 5.0):
        assert two_point_signal(CFG, e) == two_point_signal(CFG, -e)
    ratio = two_point_signal(CFG, 2e-3) / two_point_signal(CFG, 1e-3)
    assert abs(ratio - 4.0) < 1e-4


def test_two_point_signal_uses_exact_line_shape():
    e = 30.0  # V/m, shift 0.194 MHz
    s = 0.5 * CFG.alpha * e**2
    exact = absorption(CFG.sys, CFG.delta - s) - absorption(CFG.sys, -CFG.delta - s)
    assert two_point_signal(CFG, e) == exact
    assert two_point_signal(CFG, e) != pytest.approx(-2 * s * baseline_slope(CFG), rel=1e-6)


def test_unbiased_retrieval():
    assert dc_retrieve_unbiased(CFG, 0.0) == 0.0
    e = 5.0  # V/m = 0.05 V/cm, shift/delta ~ 2.5e-3
    assert dc_retrieve_unbiased(CFG, two_point_signal(CFG, e)) == pytest.approx(e, rel=1e-3)
    vals = dc_retrieve_unbiased(CFG, np.array([1e-6, 1e-5, 1e-4]))
    assert np.all(np.diff(vals) > 0)


def test_unbiased_retrieval_large_field_leaves_linear_regime():
    e = 500.0  # 5 V/cm: shift 54 MHz >> delta
    assert abs(dc_retrieve_unbiased(CFG, two_point_signal(CFG, e)) / e - 1) > 0.01


def test_zero_slope_rejected():
    # a flat line shape (no coupling) has zero slope everywhere
    flat = SensorConfig(sys=AtomSystem(omega_c=0.0), delta=2.0)
    assert baseline_slope(flat) == 0.0
    with pytest.raises(ConfigurationError):
        dc_retrieve_unbiased(flat, 1e-3)
    with pytest.raises(ConfigurationError):
        dc_retrieve_biased(dataclasses.replace(CFG, e_bias=0.0), 0.1)


def test_biased_retrieval_grid():
    e = np.logspace(-5, 0, 50)
    rho, e_hat = dc_retrieve_biased(CFG, e)
    assert np.max(np.abs(e_hat - e) / e) <= 1e-6
    zero_rho, zero_hat = dc_retrieve_biased(CFG, 0.0)
    assert zero_rho == 0.0 and zero_hat == 0.0


def test_biased_signal_odd_and_estimate_even():
    for e in (1e-3, 0.01, 0.1):
        rp, ep = dc_retrieve_biased(CFG, e)
        rm, em = dc_retrieve_biased(CFG, -e)
        assert abs(rp + rm) < 1e-9 * abs(rp)
        assert ep == pytest.approx(em, rel=1e-9)


def test_fi_dc_properties():
    assert fi_dc_biased(dataclasses.replace(CFG, e_bias=0.0)) == 0.0
    assert fi_dc_biased(dataclasses.replace(CFG, e_bias=2.0)) == pytest.approx(4 * fi_dc_biased(CFG), rel=1e-10)
    # chain rule: single window FI on the shift times (d shift / dE)^2 = (alpha E0)^2, four windows
    single = fi_stark_shift(CFG.sys, CFG.med, CFG.budget, CFG.delta) * (CFG.alpha * CFG.e_bias) ** 2
    assert fi_dc_biased(CFG) == pytest.approx(4 * single, rel=1e-12)


def test_min_detectable_field():
    assert min_detectable_field(CFG) == pytest.approx(1e-4, rel=0.1)
    half = dataclasses.replace(CFG, budget=PhotonBudget(CFG.budget.n0 / 2))
    assert min_detectable_field(half) == pytest.approx(np.sqrt(2) * min_detectable_field(CFG), rel=1e-12)
    scan = de_min_scan(CFG, np.array([-2.184, 0.0, 2.184]))
    assert np.isinf(scan[1])
    assert scan[0] == pytest.approx(scan[2], rel=1e-10)
    flat = SensorConfig(sys=AtomSystem(omega_c=0.0), delta=2.0)
    with pytest.raises(UnresolvableParameterError):
        min_detectable_field(flat)


def test_min_detectable_field_optimum_location():
    x = np.linspace(0.5, 10.0, 19001)
    scan = de_min_scan(CFG, x)
    assert x[np.argmin(scan)] == pytest.approx(2.18, abs=0.01)


def test_synthesize_field():
    flat = synthesize_field(FieldSpec(a=0.0), 1.0, 100.0, e_bias=1.5)
    assert np.all(flat.samples == 1.5) and len(flat) == 100
    pure = synthesize_field(FieldSpec(a=0.1, f_ac=50.0), 10.0, 1000.0)
    assert np.ptp(pure.samples) == pytest.approx(0.2, abs=1e-6)
    with pytest.raises(ConfigurationError):
        synthesize_field(FieldSpec(), 1e-3, 1000.0)


def test_common_mode_rejection_and_zero_field():
    field = synthesize_field(FieldSpec(a=0.0), 2.0, 500.0)
    _, _, ab = sense_timeseries(CFG, field)
    assert np.all(ab.samples == 0.0)
    noise = NoiseSpec(m_i=0.05, f_i=3.0, sigma_i=0.01, additive_rms_frac=0.0, seed=4)
    a, b, ab = sense_timeseries(CFG, field, noise)
    assert np.all(ab.samples == 0.0)
    assert np.ptp(a.samples) > 0


def test_seeded_noise_reproducible():
    field = synthesize_field(REF_FIELD, 1.0, 1000.0, 1.0)
    first = sense_timeseries(CFG, field, REF_NOISE)
    second = sense_timeseries(CFG, field, REF_NOISE)
    for x, y in zip(first, second):
        assert np.array_equal(x.samples, y.samples)
    other = sense_timeseries(CFG, field, dataclasses.replace(REF_NOISE, seed=1))
    assert not np.array_equal(first[2].samples, other[2].samples)


def test_additive_noise_rms_matches_rule():
    field = synthesize_field(FieldSpec(), 10.0, 1000.0, 1.0)
    _, _, ideal = sense_timeseries(CFG, field)
    noisy = sense_timeseries(CFG, field, NoiseSpec(additive_rms_frac=0.4, seed=7))[2]
    per_channel = 0.4 * 0.5 * np.ptp(ideal.samples)
    assert np.std(noisy.samples - ideal.samples) == pytest.approx(np.sqrt(2) * per_channel, rel=0.03)


def test_demodulate_noiseless_fundamental():
    field = synthesize_field(FieldSpec(a=0.1), 10.0, 1000.0, 1.0)
    a_hat, spec = demodulate(sense_timeseries(CFG, field)[2], 50.0, CFG)
    assert a_hat == pytest.approx(0.1, rel=5e-3)
    assert spec.resolution == pytest.approx(0.1)


def test_demodulate_errors():
    rho = sense_timeseries(CFG, synthesize_field(FieldSpec(), 1.0, 200.0, 1.0))[2]
    with pytest.raises(ConfigurationError):
        demodulate(rho, 150.0, CFG)
    with pytest.raises(ConfigurationError):
        demodulate(rho, 50.0, dataclasses.replace(CFG, e_bias=0.0))
    short = TimeSeries(1000.0, np.zeros(30))
    with pytest.raises(ConfigurationError):
        demodulate(short, 50.0, CFG)


def test_unbiased_spectrum_has_only_dc_and_second_harmonic():
    field = synthesize_field(FieldSpec(a=0.1), 10.0, 1000.0, 0.0)
    spec = dft(sense_timeseries(dataclasses.replace(CFG, e_bias=0.0), field)[2])
    m = spec.magnitudes
    assert m[spec.bin_of(50.0)] < 1e-12 * m[spec.bin_of(100.0)]
    assert m[0] > 0 and m[spec.bin_of(100.0)] > 0


def test_reference_biased_spectrum_lines():
    field = synthesize_field(REF_FIELD, 10.0, 1000.0, 1.0)
    _, _, ab = sense_timeseries(CFG, field, REF_NOISE)
    a_hat, spec = demodulate(ab, 50.0, CFG)
    assert a_hat == pytest.approx(0.1, rel=0.1)
    assert dominant_frequency(ab, 0.5, 500.0) == pytest.approx(50.0, abs=0.05)


def test_fi_ac_closed_form_vs_numeric_and_dc_relation():
    for dur in (0.1, 1.0, 2.5):
        assert fi_ac_numeric(CFG, 50.0, dur, phi=0.7) == pytest.approx(fi_ac(CFG, 50.0, dur), rel=1e-6)
    assert fi_ac(CFG, 50.0, 2.0) == pytest.approx(2 * fi_ac(CFG, 50.0, 1.0), rel=1e-14)
    # the time-averaged cos^2 halves the two-channel information relative to the four DC windows
    dur = 3.0
    assert 4 * fi_ac(CFG, 50.0, dur) == pytest.approx(fi_dc_biased(CFG) * dur, rel=1e-10)
    with pytest.raises(ConfigurationError):
        fi_ac(CFG, 50.0, 0.0)


def test_fi_ac_prefactor_is_transmittance_weighted():
    slope = central_difference(lambda x: absorption(CFG.sys, x), CFG.delta)
    expected = CFG.budget.n0 * transmittance(CFG.sys, CFG.med, CFG.delta) * (
        CFG.med.beta * CFG.alpha * CFG.e_bias * slope) ** 2
    assert fi_ac(CFG, 50.0, 1.0) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=20)
@given(st.floats(0.01, 0.3))
def test_demodulation_linear_in_amplitude(a):
    field = synthesize_field(FieldSpec(a=a), 10.0, 1000.0, 1.0)
    a_hat, _ = demodulate(sense_timeseries(CFG, field)[2], 50.0, CFG)
    assert a_hat / a == pytest.approx(1.0, abs=5e-3)


@settings(max_examples=30)
@given(st.floats(1e-5, 1.0), st.sampled_from([0.5, 1.0, 2.0]), st.floats(0.5, 6.0))
def test_biased_retrieval_scale_consistent(e, e_bias, delta):
    cfg = SensorConfig(delta=delta, e_bias=e_bias, med=OpticalMedium())
    _, e_hat = dc_retrieve_biased(cfg, e)
    assert e_hat == pytest.approx(e, rel=1e-5)
