"""Fabry-Perot cavity around the vapour cell and its gain over single-pass readout.

The susceptibility is scaled so that ``k_p * l * Im(chi) = beta * Im(rho_ge)``
(and the same factor for the real part). With that choice the single-pass
amplitude factor ``kappa**0.5`` is exactly the free-space transmittance and the
cell/cavity lengths drop out of the lineshape; they still set the free
spectral range that the probe-cavity detuning is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .eit import (
    AtomSystem,
    OpticalMedium,
    SpectrumGrid,
    central_difference,
    fwhm,
    steady_state_coherence,
    transmittance,
)
from .errors import ConfigurationError, ModelError
from .estimation import PhotonBudget
from .stark import StarkState

SPEED_OF_LIGHT = 299_792_458.0  # m/s
MHZ = 1e6


@dataclass(frozen=True)
class CavityConfig:
    r: float = 0.9
    cav_length: float = 0.5  # m
    cell_length: float = 0.05  # m
    probe_cavity_detuning: float = 0.0  # MHz, offset from the locked resonance
    wavelength: float = 780e-9  # m

    def __post_init__(self):
        if not 0 <= self.r < 1:
            raise ConfigurationError(f"r must lie in [0, 1), got {self.r}")
        if not 0 < self.cell_length <= self.cav_length:
            raise ConfigurationError("need 0 < cell_length <= cav_length")
        if not self.wavelength > 0:
            raise ConfigurationError("wavelength must be > 0")

    @property
    def k_probe(self) -> float:
        return 2 * np.pi / self.wavelength

    @property
    def fsr_mhz(self) -> float:
        return SPEED_OF_LIGHT / (2 * self.cav_length) / MHZ


class CavityMetrics(NamedTuple):
    fwhm: float  # MHz
    max_slope: float  # 1/MHz, d(transmission)/d(delta_c)
    peak_fi: float  # (V/m)^-2 per 1 s window


def susceptibility(cfg: CavityConfig, sys: AtomSystem, med: OpticalMedium, delta_c):
    """Complex chi with the calibrated-beta scaling described in the module notes."""
    return med.beta * steady_state_coherence(sys, delta_c) / (cfg.k_probe * cfg.cell_length)


def round_trip_phase(cfg: CavityConfig, sys, med, delta_c):
    """Round-trip phase with the empty-cavity term locked to the line-centre dispersion."""
    chi = susceptibility(cfg, sys, med, delta_c)
    chi0 = susceptibility(cfg, sys, med, 0.0)
    dispersive = cfg.k_probe * cfg.cell_length * (np.real(chi) - np.real(chi0))
    detuning = 2 * np.pi * cfg.probe_cavity_detuning / cfg.fsr_mhz
    return detuning + dispersive


def cavity_transmission(cfg: CavityConfig, sys: AtomSystem, med: OpticalMedium, delta_c):
    chi = susceptibility(cfg, sys, med, delta_c)
    kappa = np.exp(-2 * cfg.k_probe * cfg.cell_length * np.imag(chi))
    phase = round_trip_phase(cfg, sys, med, delta_c)
    r, t = cfg.r, 1.0 - cfg.r
    s = t**2 * np.sqrt(kappa) / (1 + r**2 * kappa**2 - 2 * r * kappa * np.cos(phase))
    return med.eta0 * s


def _line_metrics(line: Callable, scan_range, n_points: int, budget: PhotonBudget,
                  state: StarkState, e_bias: float) -> CavityMetrics:
    lo, hi = map(float, scan_range)
    if n_points < 3 or not hi > lo:
        raise ConfigurationError(f"invalid scan: range={scan_range}, n_points={n_points}")
    x = np.linspace(lo, hi, int(n_points))
    y = line(x)
    width = fwhm(SpectrumGrid(x, y))
    if x[1] - x[0] > width / 20:
        raise ModelError(f"scan step {x[1] - x[0]:.3g} MHz under-resolves a {width:.3g} MHz feature")
    slope = central_difference(line, x)
    dshift_de = state.alpha_v_per_m * e_bias
    # four bias-reversed windows as in the free-space readout
    fi = 4.0 * budget.n0 * (slope * dshift_de) ** 2 / y
    return CavityMetrics(width, float(np.max(np.abs(slope))), float(np.max(fi)))


def cavity_metrics(cfg: CavityConfig, sys: AtomSystem, med: OpticalMedium,
                   budget: PhotonBudget = PhotonBudget(), state: StarkState = StarkState(),
                   e_bias: float = 1.0, scan_range=(-2.0, 2.0), n_points: int = 20001) -> CavityMetrics:
    return _line_metrics(lambda x: cavity_transmission(cfg, sys, med, x),
                         scan_range, n_points, budget, state, e_bias)


def free_space_metrics(sys: AtomSystem, med: OpticalMedium,
                       budget: PhotonBudget = PhotonBudget(), state: StarkState = StarkState(),
                       e_bias: float = 1.0, scan_range=(-40.0, 40.0), n_points: int = 40001) -> CavityMetrics:
    return _line_metrics(lambda x: transmittance(sys, med, x), scan_range, n_points, budget, state, e_bias)


@dataclass(frozen=True)
class EnhancementReport:
    free: CavityMetrics
    cavity: CavityMetrics

    @property
    def inverse_linewidth(self) -> float:
        return self.free.fwhm / self.cavity.fwhm

    @property
    def slope(self) -> float:
        return self.cavity.max_slope / self.free.max_slope

    @property
    def fisher(self) -> float:
        return self.cavity.peak_fi / self.free.peak_fi

    @property
    def sensitivity(self) -> float:
        return float(np.sqrt(self.fisher))

    def factors(self) -> tuple[float, float, float, float]:
        return (self.inverse_linewidth, self.slope, self.fisher, self.sensitivity)

    def to_dict(self) -> dict:
        return {
            "free": self.free._asdict(),
            "cavity": self.cavity._asdict(),
            "factors": dict(zip(("inverse_linewidth", "max_slope", "peak_fi", "sensitivity"), self.factors())),
        }


def enhancement_report(cfg: CavityConfig, sys: AtomSystem, med: OpticalMedium,
                       budget: PhotonBudget = PhotonBudget(), state: StarkState = StarkState(),
                       e_bias: float = 1.0, cavity_scan=((-2.0, 2.0), 20001),
                       free_scan=((-40.0, 40.0), 40001)) -> EnhancementReport:
    free = free_space_metrics(sys, med, budget, state, e_bias, *free_scan)
    cav = cavity_metrics(cfg, sys, med, budget, state, e_bias, *cavity_scan)
    return EnhancementReport(free, cav)
