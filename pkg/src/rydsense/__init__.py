"""Rydberg-atom EIT electrometry: line shapes, Fisher bounds, differential readout, cavity gain."""

from .cavity import CavityConfig, cavity_transmission, enhancement_report
from .eit import AtomSystem, OpticalMedium, absorption, steady_state_coherence, transmittance
from .errors import ConfigurationError, ModelError
from .estimation import PhotonBudget, fi_stark_shift, optimal_operating_point
from .readout import FieldSpec, NoiseSpec, SensorConfig
from .stark import StarkState, stark_shift

__all__ = [
    "AtomSystem", "CavityConfig", "ConfigurationError", "FieldSpec", "ModelError", "NoiseSpec",
    "OpticalMedium", "PhotonBudget", "SensorConfig", "StarkState", "absorption",
    "cavity_transmission", "enhancement_report", "fi_stark_shift", "optimal_operating_point",
    "stark_shift", "steady_state_coherence", "transmittance",
]
