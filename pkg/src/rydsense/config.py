"""TOML scenario files: one table per model object plus per-command run settings.

Every table is optional and falls back to the dataclass defaults. Unknown
tables or keys are rejected so that typos cannot silently select a default.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .cavity import CavityConfig
from .eit import AtomSystem, OpticalMedium, calibrate_beta
from .errors import ConfigurationError
from .estimation import PhotonBudget
from .readout import FieldSpec, NoiseSpec, SensorConfig
from .stark import StarkState


@dataclass(frozen=True)
class MediumSettings:
    beta: float | None = None  # None -> library default
    eta0: float = 1.0
    target_fwhm: float | None = None  # MHz; if set, beta is calibrated to it


@dataclass(frozen=True)
class SensorSettings:
    delta: float = 2.184
    e_bias: float = 1.0


@dataclass(frozen=True)
class SpectrumSettings:
    delta_c_min: float = -40.0
    delta_c_max: float = 40.0
    points: int = 4001
    observable: str = "transmittance"
    e_fields_v_per_cm: tuple = (0.0,)


@dataclass(frozen=True)
class FisherSettings:
    delta_c_min: float = -20.0
    delta_c_max: float = 20.0
    points: int = 801
    omega_c_min: float = 5.0
    omega_c_max: float = 25.0
    omega_c_points: int = 41
    tolerance: float = 0.05
    dds_window: float = 5.0  # MHz, half-width for the min-sqrt(CRLB) search


@dataclass(frozen=True)
class DcSettings:
    e_min: float = 1e-5
    e_max: float = 1.0
    e_points: int = 50
    delta_c_min: float = -10.0
    delta_c_max: float = 10.0
    points: int = 2001


@dataclass(frozen=True)
class AcSettings:
    duration: float = 10.0
    sample_rate: float = 1000.0
    n_peaks: int = 4
    floor_factor: float = 3.0


@dataclass(frozen=True)
class CavityScanSettings:
    cavity_min: float = -2.0
    cavity_max: float = 2.0
    points: int = 20001
    free_min: float = -40.0
    free_max: float = 40.0
    free_points: int = 40001


@dataclass(frozen=True)
class OutputSettings:
    dir: str = "out"


@dataclass(frozen=True)
class Scenario:
    sys: AtomSystem = field(default_factory=AtomSystem)
    med: OpticalMedium = field(default_factory=OpticalMedium)
    state: StarkState = field(default_factory=StarkState)
    budget: PhotonBudget = field(default_factory=PhotonBudget)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    cavity: CavityConfig = field(default_factory=CavityConfig)
    field_spec: FieldSpec = field(default_factory=FieldSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    spectrum: SpectrumSettings = field(default_factory=SpectrumSettings)
    fisher: FisherSettings = field(default_factory=FisherSettings)
    dc: DcSettings = field(default_factory=DcSettings)
    ac: AcSettings = field(default_factory=AcSettings)
    cavity_scan: CavityScanSettings = field(default_factory=CavityScanSettings)
    output: OutputSettings = field(default_factory=OutputSettings)


_TABLES = {
    "atom": AtomSystem,
    "medium": MediumSettings,
    "stark": StarkState,
    "budget": PhotonBudget,
    "sensor": SensorSettings,
    "cavity": CavityConfig,
    "field": FieldSpec,
    "noise": NoiseSpec,
    "spectrum": SpectrumSettings,
    "fisher": FisherSettings,
    "dc": DcSettings,
    "ac": AcSettings,
    "cavity_scan": CavityScanSettings,
    "output": OutputSettings,
}


def _build(name: str, cls, table) -> object:
    if not isinstance(table, dict):
        raise ConfigurationError(f"[{name}] must be a table")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(table) - known)
    if unknown:
        raise ConfigurationError(f"[{name}] unknown keys: {', '.join(unknown)}")
    for key, value in table.items():
        if isinstance(value, dict):
            raise ConfigurationError(f"[{name}].{key} must not be a table")
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in table.items()}
    try:
        return cls(**kwargs)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"[{name}] {exc}") from exc


def _check_types(name: str, obj) -> None:
    for f in dataclasses.fields(obj):
        v = getattr(obj, f.name)
        if isinstance(v, bool) or isinstance(v, str) and f.type not in ("str", str):
            raise ConfigurationError(f"[{name}].{f.name} has the wrong type: {v!r}")


def scenario_from_dict(doc: dict) -> Scenario:
    unknown = sorted(set(doc) - set(_TABLES))
    if unknown:
        raise ConfigurationError(f"unknown tables: {', '.join(unknown)}")
    parts = {name: _build(name, cls, doc.get(name, {})) for name, cls in _TABLES.items()}
    for name, obj in parts.items():
        _check_types(name, obj)

    sys = parts["atom"]
    ms = parts["medium"]
    if ms.target_fwhm is not None:
        if ms.beta is not None:
            raise ConfigurationError("[medium] set either beta or target_fwhm, not both")
        beta = calibrate_beta(sys, ms.target_fwhm)
        med = OpticalMedium(beta=beta, eta0=ms.eta0)
    elif ms.beta is not None:
        med = OpticalMedium(beta=ms.beta, eta0=ms.eta0)
    else:
        med = OpticalMedium(eta0=ms.eta0)

    ss = parts["sensor"]
    sensor = SensorConfig(sys=sys, med=med, state=parts["stark"], budget=parts["budget"],
                          delta=ss.delta, e_bias=ss.e_bias)
    return Scenario(
        sys=sys, med=med, state=parts["stark"], budget=parts["budget"], sensor=sensor,
        cavity=parts["cavity"], field_spec=parts["field"], noise=parts["noise"],
        spectrum=parts["spectrum"], fisher=parts["fisher"], dc=parts["dc"], ac=parts["ac"],
        cavity_scan=parts["cavity_scan"], output=parts["output"],
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        doc = tomli.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config not found: {path}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from exc
    return scenario_from_dict(doc)
