"""CSV/JSON emitters with full double-precision round trip."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .sigproc import Spectrum, TimeSeries

FLOAT_FORMAT = ".17g"


def _fmt(v) -> str:
    return format(float(v), FLOAT_FORMAT)


def write_csv(path, header, columns) -> Path:
    cols = [np.asarray(c).ravel() for c in columns]
    if len(header) != len(cols) or len({c.size for c in cols}) > 1:
        raise ConfigurationError("header and columns must match in count and length")
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_timeseries_csv(path, series: TimeSeries) -> Path:
    return write_csv(path, ["t_s", "value"], [series.times, series.samples])


def read_timeseries_csv(path) -> TimeSeries:
    d = read_csv(path)
    t = d["t_s"]
    if t.size < 2:
        raise ConfigurationError("time series needs at least two samples")
    rate = (t.size - 1) / (t[-1] - t[0])
    return TimeSeries(rate, d["value"], float(t[0]))


def write_spectrum_csv(path, spec: Spectrum) -> Path:
    return write_csv(path, ["f_hz", "magnitude", "phase_rad"], [spec.freqs, spec.magnitudes, spec.phases])


def read_spectrum_csv(path) -> Spectrum:
    d = read_csv(path)
    return Spectrum(d["f_hz"], d["magnitude"], d["phase_rad"])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path
