"""Fisher information and Cramer-Rao bounds for Poisson photon-counting readout.

The estimated parameter is the Stark shift ``theta = dS`` (MHz). Under the
rigid-translation model the transmitted mean count at coupling detuning x is
``n0 * eta(x - dS)``, hence d/d(dS) = -d/dx. ``n0`` is read as the incident
photon number in a 1 s window, so ``sqrt(crlb)`` comes out per sqrt(Hz).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .eit import (
    SLOPE_STEP_MHZ,
    AtomSystem,
    OpticalMedium,
    absorption,
    central_difference,
    lindblad_absorption,
    transmittance,
)
from .errors import BracketError, ConfigurationError, ModelError, UnresolvableParameterError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PhotonBudget:
    n0: float = 4.7e14

    def __post_init__(self):
        if not self.n0 > 0:
            raise ConfigurationError(f"n0 must be > 0, got {self.n0}")


@dataclass(frozen=True)
class FisherMap:
    delta_c_axis: np.ndarray
    omega_c_axis: np.ndarray
    fi: np.ndarray  # shape (len(omega_c_axis), len(delta_c_axis)), MHz^-2


@dataclass(frozen=True)
class OperatingPoint:
    delta: float
    fi_at_delta: float


class RangeResult(NamedTuple):
    r_ds: float
    degenerate: bool


class TradeoffRow(NamedTuple):
    omega_c: float
    delta: float
    f_max: float
    r_ds: float


class McValidation(NamedTuple):
    sample_variance: float
    crlb: float
    mean_estimate: float


def poisson_fisher(mean_fn: Callable[[float], float], theta, step: float = SLOPE_STEP_MHZ):
    """F(theta) = (dn/dtheta)^2 / n for a Poisson count with mean n(theta)."""
    if not step > 0:
        raise ConfigurationError("step must be > 0")
    n = np.asarray(mean_fn(theta), dtype=float)
    if np.any(n <= 0):
        raise ModelError("Poisson mean must be positive")
    dn = central_difference(mean_fn, theta, step)
    return dn**2 / n


def fi_stark_shift(sys: AtomSystem, med: OpticalMedium, budget: PhotonBudget, delta_c):
    """Fisher information on the Stark shift at zero field, MHz^-2 per 1 s window."""
    eta = transmittance(sys, med, delta_c)
    dlog = med.beta * central_difference(lambda x: absorption(sys, x), delta_c)
    return budget.n0 * eta * dlog**2


def crlb(fi_value):
    fi_value = np.asarray(fi_value, dtype=float)
    if np.any(fi_value <= 0):
        raise UnresolvableParameterError("Fisher information is zero: parameter not resolvable")
    return np.asarray(1.0 / fi_value)[()]


def fisher_map(sys_template: AtomSystem, med, budget, delta_c_axis, omega_c_axis) -> FisherMap:
    dc = np.asarray(delta_c_axis, dtype=float)
    oc = np.asarray(omega_c_axis, dtype=float)
    for name, ax in (("delta_c_axis", dc), ("omega_c_axis", oc)):
        if ax.ndim != 1 or ax.size == 0 or np.any(np.diff(ax) <= 0):
            raise ConfigurationError(f"{name} must be non-empty and strictly increasing")
    rows = [fi_stark_shift(replace(sys_template, omega_c=w), med, budget, dc) for w in oc]
    return FisherMap(dc, oc, np.vstack(rows))


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-9) -> float:
    """Maximiser of a unimodal ``f`` on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _grid_then_golden(f: Callable, search_range, n_coarse: int, tol: float) -> float:
    lo, hi = map(float, search_range)
    if not (0 < lo < hi):
        raise ConfigurationError(f"search range must lie in (0, inf) and be non-empty: {search_range}")
    x = np.linspace(lo, hi, n_coarse)
    v = f(x)
    if np.ptp(v) == 0:
        raise ModelError("objective is flat over the search range")
    i = int(np.argmax(v))
    a, b = x[max(i - 1, 0)], x[min(i + 1, n_coarse - 1)]
    return golden_section_max(lambda z: float(f(z)), a, b, tol)


def optimal_operating_point(sys, med, budget, search_range=(1e-3, 20.0),
                            n_coarse: int = 2001, tol: float = 1e-7) -> OperatingPoint:
    """FI-optimal positive detuning; the mirror point -delta is equivalent at delta_p = 0."""
    delta = _grid_then_golden(lambda x: fi_stark_shift(sys, med, budget, x), search_range, n_coarse, tol)
    return OperatingPoint(delta, float(fi_stark_shift(sys, med, budget, delta)))


def max_slope_detuning(sys: AtomSystem, search_range=(1e-3, 20.0), model: str = "weak_probe",
                       med: OpticalMedium | None = None, n_coarse: int = 2001, tol: float = 1e-7) -> float:
    """Positive detuning of steepest absorption (or transmittance, if ``med`` is given).

    ``model="lindblad"`` uses the full steady-state density matrix, which keeps
    the probe power broadening the weak-probe closed form drops.
    """
    if model == "weak_probe":
        line = (lambda x: absorption(sys, x)) if med is None else (lambda x: transmittance(sys, med, x))
    elif model == "lindblad":
        if med is None:
            line = lambda x: lindblad_absorption(sys, x)  # noqa: E731
        else:
            line = lambda x: med.eta0 * np.exp(-med.beta * lindblad_absorption(sys, x))  # noqa: E731
    else:
        raise ConfigurationError(f"unknown model {model!r}")
    if model == "lindblad":
        n_coarse = min(n_coarse, 401)
    return _grid_then_golden(lambda x: np.abs(central_difference(line, x)), search_range, n_coarse, tol)


def _line_shape_fn(line_shape) -> Callable:
    if isinstance(line_shape, AtomSystem):
        return lambda x: absorption(line_shape, x)
    if callable(line_shape):
        return line_shape
    raise ConfigurationError("line_shape must be an AtomSystem or a callable")


def relative_nonlinearity(line_shape, delta: float, shifts):
    """|rho_AB - rho_AB_lin| / |rho_AB_lin| for the two-point signal at +-delta."""
    rho0 = _line_shape_fn(line_shape)
    s = np.asarray(shifts, dtype=float)
    exact = rho0(delta - s) - rho0(-delta - s)
    lin = -2.0 * s * central_difference(rho0, delta)
    return np.abs(exact - lin) / np.abs(lin)


def usable_range(line_shape, delta: float, tolerance: float = 0.05,
                 step: float = 1e-3, max_shift: float = 200.0) -> RangeResult:
    """Largest Stark shift up to which the relative nonlinearity stays within tolerance.

    First-crossing rule: the scan stops at the first violation, so the result
    is conservative when the nonlinearity is not monotone. Returns the scan
    ceiling when no violation is found.
    """
    if not delta > 0:
        raise ConfigurationError("delta must be > 0")
    if not 0 < tolerance < 1:
        raise ConfigurationError("tolerance must lie in (0, 1)")
    n_total = int(round(max_shift / step))
    chunk = 20000
    for start in range(1, n_total + 1, chunk):
        k = np.arange(start, min(start + chunk, n_total + 1))
        eps = relative_nonlinearity(line_shape, delta, k * step)
        bad = np.nonzero(~(eps <= tolerance))[0]
        if bad.size:
            first = int(k[bad[0]])
            if first == 1:
                return RangeResult(0.0, True)
            return RangeResult((first - 1) * step, False)
    return RangeResult(n_total * step, False)


def tradeoff_sweep(sys_template: AtomSystem, med, budget, omega_c_axis,
                   tolerance: float = 0.05) -> list[TradeoffRow]:
    """Peak FI and usable Stark-shift range at the FI optimum, per coupling Rabi frequency."""
    rows = []
    for w in np.atleast_1d(np.asarray(omega_c_axis, dtype=float)):
        sys = replace(sys_template, omega_c=float(w))
        op = optimal_operating_point(sys, med, budget, search_range=(1e-3, 3.0 * w + 10.0))
        rows.append(TradeoffRow(float(w), op.delta, op.fi_at_delta, usable_range(sys, op.delta, tolerance).r_ds))
    return rows


def mc_estimator_validation(sys, med, budget, delta: float, true_shift: float,
                            n_trials: int, seed: int, bracket_halfwidth: float | None = None) -> McValidation:
    """Monte-Carlo ML estimation of the Stark shift from counts at +-delta.

    Each trial draws two Poisson counts and solves the score equation by
    vectorised bisection. Returns the sample variance of the estimates and
    the CRLB ``1 / (F_A + F_B)`` at the true shift.
    """
    if n_trials < 1000:
        raise ConfigurationError("n_trials must be >= 1000")
    points = np.array([delta, -delta])

    def means(theta):
        theta = np.asarray(theta, dtype=float)[..., None]
        return budget.n0 * transmittance(sys, med, points - theta)

    def dmeans(theta):
        return central_difference(means, theta)

    mu_true = means(true_shift)
    fi_total = float(np.sum(dmeans(true_shift) ** 2 / mu_true))
    bound = float(crlb(fi_total))

    rng = np.random.default_rng(seed)
    counts = rng.poisson(mu_true, size=(n_trials, 2)).astype(float)

    def score(theta):
        mu, dmu = means(theta), dmeans(theta)
        return np.sum((counts / mu - 1.0) * dmu, axis=-1)

    w = 0.5 * delta if bracket_halfwidth is None else bracket_halfwidth
    lo = np.full(n_trials, true_shift - w)
    hi = np.full(n_trials, true_shift + w)
    s_lo, s_hi = score(lo), score(hi)
    if not (np.all(s_lo > 0) and np.all(s_hi < 0)):
        raise BracketError("likelihood maximum not bracketed for every trial")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        up = score(mid) > 0
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    est = 0.5 * (lo + hi)
    return McValidation(float(np.var(est, ddof=1)), bound, float(np.mean(est)))
