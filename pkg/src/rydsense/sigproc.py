"""Single-sided amplitude spectra and peak picking for uniformly sampled signals.

Normalisation: a cosine of amplitude ``a`` at a bin frequency reads ``a`` at
that bin; a constant ``c`` reads ``c`` at 0 Hz.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ModelError


@dataclass(frozen=True)
class TimeSeries:
    sample_rate: float
    samples: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if not self.sample_rate > 0:
            raise ConfigurationError("sample_rate must be > 0")
        if s.ndim != 1 or not np.all(np.isfinite(s)):
            raise ConfigurationError("samples must be a finite 1-D array")
        object.__setattr__(self, "samples", s)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.samples.size) / self.sample_rate

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class Spectrum:
    freqs: np.ndarray
    magnitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        arrs = [np.asarray(a, dtype=float) for a in (self.freqs, self.magnitudes, self.phases)]
        if any(a.ndim != 1 for a in arrs) or len({a.size for a in arrs}) != 1 or arrs[0].size < 2:
            raise ConfigurationError("spectrum arrays must be 1-D, equal length, >= 2 bins")
        if arrs[0][0] < 0 or np.any(np.diff(arrs[0]) <= 0):
            raise ConfigurationError("freqs must be non-negative and strictly increasing")
        for name, a in zip(("freqs", "magnitudes", "phases"), arrs):
            object.__setattr__(self, name, a)

    @property
    def resolution(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def bin_of(self, f: float) -> int:
        return int(round(f / self.resolution))


def dft(series: TimeSeries, window: str | None = None) -> Spectrum:
    """Single-sided spectrum of a real series (no window unless ``window="hann"``)."""
    x = series.samples
    n = x.size
    if n < 2:
        raise ConfigurationError("need at least two samples")
    if window == "hann":
        w = np.hanning(n)
        x = x * w / w.mean()
    elif window is not None:
        raise ConfigurationError(f"unknown window {window!r}")
    coeffs = np.fft.rfft(x)
    mags = np.abs(coeffs) / n
    mags[1:] *= 2.0
    if n % 2 == 0:
        mags[-1] /= 2.0  # Nyquist bin has no mirror partner
    phases = np.angle(coeffs)
    # real input: DC and Nyquist are real; pin their phase to {0, pi}
    edge = [0, -1] if n % 2 == 0 else [0]
    phases[edge] = np.where(coeffs[edge].real < 0, np.pi, 0.0)
    freqs = np.arange(coeffs.size) * series.sample_rate / n
    return Spectrum(freqs, mags, phases)


def peak_pick(spec: Spectrum, f_min: float, f_max: float, n_peaks: int = 1) -> list[tuple[float, float]]:
    """Largest local maxima in [f_min, f_max], refined by 3-point parabolic interpolation."""
    m = spec.magnitudes
    idx = np.nonzero((spec.freqs >= f_min) & (spec.freqs <= f_max))[0]
    idx = idx[(idx > 0) & (idx < m.size - 1)]
    if idx.size == 0:
        raise ConfigurationError(f"band [{f_min}, {f_max}] Hz has no interior bins")
    is_max = (m[idx] > m[idx - 1]) & (m[idx] >= m[idx + 1])
    cands = idx[is_max]
    if cands.size == 0:
        raise ModelError(f"no local maximum in [{f_min}, {f_max}] Hz")
    cands = cands[np.argsort(m[cands])[::-1]][:n_peaks]
    df = spec.resolution
    out = []
    for k in cands:
        a, b, c = m[k - 1], m[k], m[k + 1]
        denom = a - 2 * b + c
        p = 0.0 if denom == 0 else 0.5 * (a - c) / denom
        out.append((float(spec.freqs[k] + p * df), float(b - 0.25 * (a - c) * p)))
    return sorted(out, key=lambda fm: fm[1], reverse=True)


def spectral_floor(spec: Spectrum, f_min: float = 0.0, f_max: float | None = None) -> float:
    """Median magnitude over (f_min, f_max], DC excluded."""
    f_max = spec.freqs[-1] if f_max is None else f_max
    sel = (spec.freqs > max(f_min, 0.0)) & (spec.freqs <= f_max)
    return float(np.median(spec.magnitudes[sel]))
