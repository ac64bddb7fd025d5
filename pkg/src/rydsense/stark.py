"""Quadratic Stark transduction between a static field and the EIT line position.

Fields are in V/cm here, matching the units of the polarizability. The
field-shifted spectrum is modelled as a rigid translation of the zero-field
line shape along the coupling-detuning axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eit import AtomSystem, absorption
from .errors import ConfigurationError

V_PER_M_TO_V_PER_CM = 0.01


@dataclass(frozen=True)
class StarkState:
    alpha: float = 4.32  # MHz / (V/cm)^2
    label: str = "Rb 35S1/2"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")

    @property
    def alpha_v_per_m(self) -> float:
        """Polarizability in MHz / (V/m)^2."""
        return self.alpha * V_PER_M_TO_V_PER_CM**2


def stark_shift(state: StarkState, e_field):
    """Resonance shift in MHz for a field in V/cm."""
    e_field = np.asarray(e_field, dtype=float)
    return np.asarray(0.5 * state.alpha * e_field**2)[()]


def field_from_shift(state: StarkState, shift):
    shift = np.asarray(shift, dtype=float)
    if np.any(shift < 0):
        raise ConfigurationError("Stark shift must be >= 0")
    return np.asarray(np.sqrt(2.0 * shift / state.alpha))[()]


def shifted_absorption(sys: AtomSystem, state: StarkState, delta_c, e_field):
    return absorption(sys, np.asarray(delta_c, dtype=float) - stark_shift(state, e_field))


def peak_shift_threshold(state: StarkState, fwhm: float) -> float:
    """Field whose Stark shift equals one linewidth (direct peak tracking limit)."""
    if fwhm < 0:
        raise ConfigurationError("fwhm must be >= 0")
    return float(np.sqrt(2.0 * fwhm / state.alpha))
