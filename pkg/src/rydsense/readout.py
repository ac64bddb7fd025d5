"""DC-biased two-point differential readout for static and low-frequency fields.

Fields in this module are in V/m (the polarizability is converted once via
``StarkState.alpha_v_per_m``). The forward model always uses the exact
rigid-translation line shape; the linearised relations appear only in the
retrieval formulas, which is what makes the retrieval error measurable.

Demodulation note: with the single-sided spectrum of :mod:`rydsense.sigproc`,
the first-harmonic line of the biased differential signal reads
``2 * alpha * |rho0'(delta)| * E0 * A``. The amplitude estimate therefore
divides by ``2 * alpha * |rho0'| * E0``, which is the same as dividing the
two-sided coefficient by ``alpha * |rho0'| * E0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eit import AtomSystem, OpticalMedium, absorption, central_difference, transmittance
from .errors import ConfigurationError, UnresolvableParameterError
from .estimation import PhotonBudget
from .sigproc import Spectrum, TimeSeries, dft, peak_pick
from .stark import StarkState

__all__ = [
    "SensorConfig", "FieldSpec", "NoiseSpec", "TimeSeries",
    "baseline_slope", "two_point_signal", "dc_retrieve_unbiased", "dc_retrieve_biased",
    "fi_dc_biased", "min_detectable_field", "de_min_scan", "synthesize_field",
    "sense_timeseries", "demodulate", "fi_ac", "fi_ac_numeric", "dominant_frequency",
]


@dataclass(frozen=True)
class SensorConfig:
    sys: AtomSystem = field(default_factory=AtomSystem)
    med: OpticalMedium = field(default_factory=OpticalMedium)
    state: StarkState = field(default_factory=StarkState)
    budget: PhotonBudget = field(default_factory=PhotonBudget)
    delta: float = 2.184  # MHz
    e_bias: float = 1.0  # V/m

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigurationError(f"delta must be > 0, got {self.delta}")
        if not np.isfinite(self.e_bias):
            raise ConfigurationError("e_bias must be finite")

    @property
    def alpha(self) -> float:
        """Polarizability in MHz/(V/m)^2."""
        return self.state.alpha_v_per_m

    def shift(self, e_field):
        return 0.5 * self.alpha * np.asarray(e_field, dtype=float) ** 2


@dataclass(frozen=True)
class FieldSpec:
    a: float = 0.1
    f_ac: float = 50.0
    phi: float = 0.0
    harmonics: tuple = ()  # ((k, A_k, phi_k), ...)
    drift: tuple = (0.0, 0.0, 0.0)  # (A_d, f_d, phi_d)

    def __post_init__(self):
        if not self.f_ac > 0 or self.a < 0:
            raise ConfigurationError("need f_ac > 0 and a >= 0")
        object.__setattr__(self, "harmonics", tuple(tuple(h) for h in self.harmonics))
        object.__setattr__(self, "drift", tuple(self.drift))
        if any(len(h) != 3 for h in self.harmonics) or len(self.drift) != 3:
            raise ConfigurationError("harmonics entries and drift must be 3-tuples")


@dataclass(frozen=True)
class NoiseSpec:
    m_i: float = 0.0
    f_i: float = 0.0
    phi_i: float = 0.0
    sigma_i: float = 0.0
    additive_rms_frac: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if min(self.m_i, self.f_i, self.sigma_i, self.additive_rms_frac) < 0:
            raise ConfigurationError("noise magnitudes must be >= 0")


def baseline_slope(cfg: SensorConfig) -> float:
    """rho0'(delta): slope of the zero-field absorption at the operating point, 1/MHz."""
    return float(central_difference(lambda x: absorption(cfg.sys, x), cfg.delta))


def _require_slope(cfg) -> float:
    slope = baseline_slope(cfg)
    if slope == 0:
        raise ConfigurationError(f"absorption slope vanishes at delta={cfg.delta}")
    return slope


def _require_bias(cfg):
    if cfg.e_bias == 0:
        raise ConfigurationError("this readout needs a non-zero bias field")


def _channels(cfg, e_field):
    s = cfg.shift(e_field)
    return absorption(cfg.sys, cfg.delta - s), absorption(cfg.sys, -cfg.delta - s)


def two_point_signal(cfg: SensorConfig, e_field):
    """rho(+delta, E) - rho(-delta, E) with the exact shifted line shape."""
    a, b = _channels(cfg, e_field)
    return a - b


def dc_retrieve_unbiased(cfg: SensorConfig, measured_rho_ab):
    slope = _require_slope(cfg)
    return np.sqrt(np.abs(measured_rho_ab) / (cfg.alpha * abs(slope)))


def dc_retrieve_biased(cfg: SensorConfig, e_field_true):
    """Bias-reversal readout: returns (rho_AB(E0+E) - rho_AB(-E0+E), E_hat)."""
    _require_bias(cfg)
    slope = _require_slope(cfg)
    e = np.asarray(e_field_true, dtype=float)
    rho_delta = two_point_signal(cfg, cfg.e_bias + e) - two_point_signal(cfg, -cfg.e_bias + e)
    e_hat = np.abs(rho_delta) / (4.0 * cfg.alpha * abs(slope) * abs(cfg.e_bias))
    return rho_delta, e_hat


def fi_dc_biased(cfg: SensorConfig) -> float:
    """Fisher information on E for the four-window bias-reversal readout, (V/m)^-2."""
    eta = transmittance(cfg.sys, cfg.med, cfg.delta)
    drho = -baseline_slope(cfg)  # d rho(delta) / d dS under rigid translation
    return float(4.0 * cfg.budget.n0 * eta * (cfg.med.beta * cfg.alpha * cfg.e_bias * drho) ** 2)


def min_detectable_field(cfg: SensorConfig) -> float:
    """CRLB-limited field resolution, V/m per sqrt(Hz)."""
    fi = fi_dc_biased(cfg)
    if fi <= 0:
        raise UnresolvableParameterError(f"zero Fisher information at delta={cfg.delta}")
    return 1.0 / np.sqrt(fi)


def de_min_scan(cfg: SensorConfig, delta_c_values) -> np.ndarray:
    """min_detectable_field over detunings of either sign; inf where FI vanishes."""
    dc = np.asarray(delta_c_values, dtype=float)
    eta = transmittance(cfg.sys, cfg.med, dc)
    slope = central_difference(lambda x: absorption(cfg.sys, x), dc)
    fi = 4.0 * cfg.budget.n0 * eta * (cfg.med.beta * cfg.alpha * cfg.e_bias * slope) ** 2
    with np.errstate(divide="ignore"):
        return np.where(fi > 0, 1.0 / np.sqrt(fi), np.inf)


def synthesize_field(spec: FieldSpec, duration: float, sample_rate: float,
                     e_bias: float = 0.0, t0: float = 0.0) -> TimeSeries:
    n = int(round(duration * sample_rate))
    if not (duration > 0 and sample_rate > 0) or n < 2:
        raise ConfigurationError("duration * sample_rate must give >= 2 samples")
    t = t0 + np.arange(n) / sample_rate
    w = 2 * np.pi * spec.f_ac
    e = e_bias + spec.a * np.cos(w * t + spec.phi)
    for k, amp, ph in spec.harmonics:
        e = e + amp * np.cos(k * w * t + ph)
    a_d, f_d, ph_d = spec.drift
    e = e + a_d * np.cos(2 * np.pi * f_d * t + ph_d)
    return TimeSeries(sample_rate, e, t0)


def sense_timeseries(cfg: SensorConfig, field: TimeSeries, noise: NoiseSpec | None = None):
    """Quasi-static channel signals at +-delta for a sampled field (V/m).

    Noise model: a common-mode multiplicative factor (1 + eps_I(t)) on both
    channels, plus independent additive Gaussian noise per channel whose RMS is
    ``additive_rms_frac`` times the ideal differential amplitude (half its
    peak-to-peak).
    """
    a, b = _channels(cfg, field.samples)
    if noise is not None:
        rng = np.random.default_rng(noise.seed)
        t = field.times
        eps = noise.m_i * np.sin(2 * np.pi * noise.f_i * t + noise.phi_i)
        eps = eps + noise.sigma_i * rng.standard_normal(t.size)
        rms = noise.additive_rms_frac * 0.5 * np.ptp(a - b)
        a = (1 + eps) * a + rms * rng.standard_normal(t.size)
        b = (1 + eps) * b + rms * rng.standard_normal(t.size)
    mk = lambda y: TimeSeries(field.sample_rate, y, field.t0)  # noqa: E731
    return mk(a), mk(b), mk(a - b)


def demodulate(rho_ab: TimeSeries, f_ac: float, cfg: SensorConfig) -> tuple[float, Spectrum]:
    """Amplitude of the field component at ``f_ac`` from the differential signal."""
    _require_bias(cfg)
    nyquist = 0.5 * rho_ab.sample_rate
    if not 0 < f_ac <= nyquist:
        raise ConfigurationError(f"f_ac={f_ac} Hz outside (0, {nyquist}] Hz")
    if len(rho_ab) / rho_ab.sample_rate < 2.0 / f_ac:
        raise ConfigurationError("series shorter than two periods of f_ac")
    slope = _require_slope(cfg)
    spec = dft(rho_ab)
    line = spec.magnitudes[spec.bin_of(f_ac)]
    return float(line / (2.0 * cfg.alpha * abs(slope) * abs(cfg.e_bias))), spec


def dominant_frequency(series: TimeSeries, f_min: float, f_max: float) -> float:
    """Strongest spectral line in a band, for use when f_ac is not known."""
    return peak_pick(dft(series), f_min, f_max, 1)[0][0]


def _fi_ac_prefactor(cfg):
    eta = transmittance(cfg.sys, cfg.med, cfg.delta)
    return eta * (cfg.med.beta * cfg.alpha * cfg.e_bias * baseline_slope(cfg)) ** 2


def fi_ac(cfg: SensorConfig, f_ac: float, duration: float) -> float:
    """Fisher information on the AC amplitude accumulated over ``duration`` seconds."""
    if not duration > 0:
        raise ConfigurationError("duration must be > 0")
    return float(cfg.budget.n0 * duration * _fi_ac_prefactor(cfg))


def fi_ac_numeric(cfg: SensorConfig, f_ac: float, duration: float, phi: float = 0.0,
                  points_per_period: int = 64) -> float:
    """Time integral of the instantaneous two-channel FI (trapezoid rule)."""
    if not duration > 0:
        raise ConfigurationError("duration must be > 0")
    n = max(int(np.ceil(duration * f_ac * points_per_period)), 2)
    t = np.linspace(0.0, duration, n + 1)
    integrand = 2.0 * cfg.budget.n0 * _fi_ac_prefactor(cfg) * np.cos(2 * np.pi * f_ac * t + phi) ** 2
    return float(np.trapezoid(integrand, t))
