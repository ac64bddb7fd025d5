"""Steady-state optical response of a cascade three-level EIT system.

Unit convention: every rate, Rabi frequency and detuning is a /2pi value in
MHz (gamma_e = 6.066 means gamma_e/2pi = 6.066 MHz) and is substituted into the
closed-form coherence as-is. No 2pi factors are added anywhere.

Sign convention: the optical depth is ``OD = beta * Im(rho_ge)`` with
``beta > 0`` and the transmittance is ``eta = eta0 * exp(-OD)``. The textbook
susceptibility carries a minus sign relative to rho_ge; that sign is folded
into beta so that absorption is positive and the EIT window shows up as a
transmission peak.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ConfigurationError, DegenerateParametersError, NotAPeakError

Observable = Literal["absorption", "transmittance"]

SLOPE_STEP_MHZ = 1e-4
_DENOMINATOR_FLOOR = 1e-30

# Scan used to measure the free-space EIT linewidth when calibrating beta.
CALIBRATION_SPAN_MHZ = 40.0
CALIBRATION_POINTS = 16001

# calibrate_beta(AtomSystem(omega_p=2, omega_c=15), 3.7) on the scan above.
DEFAULT_BETA = 213.4490823928773


@dataclass(frozen=True)
class AtomSystem:
    omega_p: float = 2.0
    omega_c: float = 15.0
    delta_p: float = 0.0
    gamma_e: float = 6.066
    gamma_r: float = 0.004

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ConfigurationError(f"omega_p must be > 0, got {self.omega_p}")
        if not self.omega_c >= 0:
            raise ConfigurationError(f"omega_c must be >= 0, got {self.omega_c}")
        if not (self.gamma_e > 0 and self.gamma_r > 0):
            raise ConfigurationError("gamma_e and gamma_r must be > 0")
        if not np.isfinite(self.delta_p):
            raise ConfigurationError("delta_p must be finite")
        if self.omega_p >= self.gamma_e:
            warnings.warn(
                f"omega_p={self.omega_p} >= gamma_e={self.gamma_e}: outside the weak-probe regime",
                stacklevel=2,
            )


@dataclass(frozen=True)
class OpticalMedium:
    """Prefactor bundle mapping Im(rho_ge) to optical depth."""

    beta: float = DEFAULT_BETA
    eta0: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0 and self.eta0 > 0):
            raise ConfigurationError("beta and eta0 must be > 0")


@dataclass(frozen=True)
class SpectrumGrid:
    delta_c_values: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.delta_c_values, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise ConfigurationError("grid arrays must be 1-D, equal length, >= 2 points")
        if np.any(np.diff(x) <= 0):
            raise ConfigurationError("delta_c_values must be strictly increasing")
        object.__setattr__(self, "delta_c_values", x)
        object.__setattr__(self, "values", y)


def steady_state_coherence(sys: AtomSystem, delta_c):
    """Weak-probe steady-state rho_ge at coupling detuning ``delta_c`` (MHz).

    Accepts scalars or arrays; returns complex of the same shape.
    """
    delta_c = np.asarray(delta_c, dtype=float)
    two_photon = sys.gamma_r + 2j * (sys.delta_p + delta_c)
    den = (sys.gamma_e + 2j * sys.delta_p) * two_photon + sys.omega_c**2
    if np.any(np.abs(den) < _DENOMINATOR_FLOOR):
        raise DegenerateParametersError("coherence denominator vanishes")
    return np.asarray(1j * sys.omega_p * two_photon / den)[()]


def absorption(sys: AtomSystem, delta_c):
    return np.imag(steady_state_coherence(sys, delta_c))


def transmittance(sys: AtomSystem, med: OpticalMedium, delta_c):
    return med.eta0 * np.exp(-med.beta * absorption(sys, delta_c))


def _observable_fn(sys, med, observable) -> Callable:
    if observable == "absorption":
        return lambda x: absorption(sys, x)
    if observable == "transmittance":
        if med is None:
            raise ConfigurationError("transmittance needs an OpticalMedium")
        return lambda x: transmittance(sys, med, x)
    raise ConfigurationError(f"unknown observable {observable!r}")


def scan_spectrum(sys, med, delta_c_range, n_points, observable: Observable = "transmittance"):
    lo, hi = map(float, delta_c_range)
    if n_points < 2 or not hi > lo:
        raise ConfigurationError(f"invalid scan: range={delta_c_range}, n_points={n_points}")
    x = np.linspace(lo, hi, int(n_points))
    return SpectrumGrid(x, _observable_fn(sys, med, observable)(x))


def central_difference(fn: Callable, x, step: float = SLOPE_STEP_MHZ):
    x = np.asarray(x, dtype=float)
    return (fn(x + step) - fn(x - step)) / (2 * step)


def spectral_slope(sys, med, delta_c, observable: Observable = "transmittance", step=SLOPE_STEP_MHZ):
    """d(observable)/d(delta_c) in 1/MHz by central difference."""
    return central_difference(_observable_fn(sys, med, observable), delta_c, step)


def fwhm(grid: SpectrumGrid) -> float:
    """Full width at half maximum of the dominant peak above the boundary baseline.

    The baseline is the mean of the two end values. Crossings are located by
    walking outward from the maximum and interpolating linearly.
    """
    x, y = grid.delta_c_values, grid.values
    baseline = 0.5 * (y[0] + y[-1])
    i_pk = int(np.argmax(y))
    half = 0.5 * (y[i_pk] + baseline)
    if not y[i_pk] > baseline:
        raise NotAPeakError("no peak above the boundary baseline")

    right = np.nonzero(y[i_pk:] < half)[0]
    left = np.nonzero(y[: i_pk + 1] < half)[0]
    if right.size == 0 or left.size == 0:
        raise NotAPeakError("half-maximum crossing missing on one side")
    j = i_pk + right[0]  # first point below half on the right
    k = left[-1]  # last point below half on the left

    def cross(a, b):
        return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a])

    return float(cross(j - 1, j) - cross(k, k + 1))


def ats_field_amplitude(delta_f: float, mu_s: float) -> float:
    """Field from an Autler-Townes peak separation, hbar folded into ``mu_s``."""
    if mu_s <= 0:
        raise ConfigurationError("mu_s must be > 0")
    if delta_f < 0:
        raise ConfigurationError("delta_f must be >= 0")
    return delta_f / (np.sqrt(2.0) * mu_s)


def calibration_fwhm(sys: AtomSystem, beta: float,
                     span=CALIBRATION_SPAN_MHZ, n_points=CALIBRATION_POINTS) -> float:
    grid = scan_spectrum(sys, OpticalMedium(beta=beta), (-span, span), n_points)
    return fwhm(grid)


def calibrate_beta(sys: AtomSystem, target_fwhm: float, bracket=(1e-3, 1e5),
                   span=CALIBRATION_SPAN_MHZ, n_points=CALIBRATION_POINTS) -> float:
    """Find beta such that the transmittance linewidth equals ``target_fwhm``.

    The linewidth shrinks monotonically with beta, so a sign change of
    ``fwhm(beta) - target`` over ``bracket`` is required.
    """
    if not target_fwhm > 0:
        raise ConfigurationError("target_fwhm must be > 0")
    lo, hi = bracket

    def resid(b):
        return calibration_fwhm(sys, b, span, n_points) - target_fwhm

    r_lo, r_hi = resid(lo), resid(hi)
    if r_lo < 0:
        raise BracketError(f"target {target_fwhm} MHz exceeds the low-beta linewidth {r_lo + target_fwhm:.4g}")
    if r_hi > 0:
        raise BracketError(f"target {target_fwhm} MHz below the high-beta linewidth {r_hi + target_fwhm:.4g}")
    return float(brentq(resid, lo, hi, xtol=1e-10, rtol=1e-12))


# --- full steady-state density matrix (finite probe power) -------------------

def _liouvillian(sys: AtomSystem, delta_c: float) -> np.ndarray:
    # basis g, e, r; row-major vec: vec(A X B) = kron(A, B.T) vec(X)
    h = 0.5 * np.array(
        [
            [0, sys.omega_p, 0],
            [sys.omega_p, -2 * sys.delta_p, sys.omega_c],
            [0, sys.omega_c, -2 * (sys.delta_p + delta_c)],
        ],
        dtype=complex,
    )
    eye = np.eye(3)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    jumps = []
    for rate, (i, j) in ((sys.gamma_e, (0, 1)), (sys.gamma_r, (1, 2))):
        op = np.zeros((3, 3))
        op[i, j] = np.sqrt(rate)
        jumps.append(op)
    for c in jumps:
        cdc = c.T @ c
        lv += np.kron(c, c) - 0.5 * np.kron(cdc, eye) - 0.5 * np.kron(eye, cdc.T)
    return lv


def steady_state_density_matrix(sys: AtomSystem, delta_c: float) -> np.ndarray:
    """Stationary 3x3 density matrix of the Lindblad equation.

    Spontaneous decay e->g at gamma_e and r->e at gamma_r. Unlike
    :func:`steady_state_coherence` this keeps all orders in omega_p, so it
    includes power broadening; the two agree as omega_p -> 0.
    """
    lv = _liouvillian(sys, float(delta_c))
    lv[0, :] = 0.0
    lv[0, [0, 4, 8]] = 1.0  # trace condition replaces one redundant equation
    rhs = np.zeros(9, dtype=complex)
    rhs[0] = 1.0
    return np.linalg.solve(lv, rhs).reshape(3, 3)


def lindblad_absorption(sys: AtomSystem, delta_c):
    xs = np.atleast_1d(np.asarray(delta_c, dtype=float))
    out = np.array([steady_state_density_matrix(sys, x)[0, 1].imag for x in xs])
    return out[0] if np.ndim(delta_c) == 0 else out.reshape(np.shape(delta_c))
