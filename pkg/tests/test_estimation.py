import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson

from rydsense.eit import AtomSystem, OpticalMedium, absorption, transmittance
from rydsense.errors import BracketError, ConfigurationError, ModelError, UnresolvableParameterError
from rydsense.estimation import (
    PhotonBudget,
    crlb,
    fi_stark_shift,
    fisher_map,
    _grid_then_golden,
    golden_section_max,
    max_slope_detuning,
    mc_estimator_validation,
    optimal_operating_point,
    poisson_fisher,
    relative_nonlinearity,
    tradeoff_sweep,
    usable_range,
)

SYS = AtomSystem(omega_p=2.0, omega_c=15.0)
MED = OpticalMedium()
BUDGET = PhotonBudget()

# Frozen from this implementation after cross-checking against a 1e5-point brute-force grid.
DELTA_OPT = 2.179714
FI_MAX = 1.34616e14


def test_poisson_fisher_oracles():
    assert poisson_fisher(lambda t: np.full_like(np.asarray(t, float), 7.0), 3.0) == 0.0
    assert poisson_fisher(lambda t: t, 4.0) == pytest.approx(0.25, rel=1e-10)
    with pytest.raises(ModelError):
        poisson_fisher(lambda t: t - 10.0, 4.0)
    with pytest.raises(ConfigurationError):
        poisson_fisher(lambda t: t, 4.0, step=0.0)


def test_generic_fisher_equals_log_form_on_random_points():
    x = np.random.default_rng(1).uniform(-20, 20, 100)
    direct = poisson_fisher(lambda d: BUDGET.n0 * transmittance(SYS, MED, -d), -x)
    assert np.allclose(direct, fi_stark_shift(SYS, MED, BUDGET, x), rtol=1e-6)


def test_fi_zero_at_centre_and_even():
    assert fi_stark_shift(SYS, MED, BUDGET, 0.0) == 0.0
    x = np.linspace(0.1, 20, 50)
    assert np.allclose(fi_stark_shift(SYS, MED, BUDGET, x), fi_stark_shift(SYS, MED, BUDGET, -x), rtol=1e-10)


def test_crlb():
    assert crlb(4.0) == 0.25
    with pytest.raises(UnresolvableParameterError):
        crlb(0.0)


def test_operating_point_frozen_and_brute_force():
    op = optimal_operating_point(SYS, MED, BUDGET)
    assert op.delta == pytest.approx(DELTA_OPT, abs=1e-5)
    assert op.fi_at_delta == pytest.approx(FI_MAX, rel=1e-5)
    assert float(fi_stark_shift(SYS, MED, BUDGET, -op.delta)) == pytest.approx(op.fi_at_delta, rel=1e-10)
    x = np.linspace(1e-3, 20, 100_000)
    brute = x[np.argmax(fi_stark_shift(SYS, MED, BUDGET, x))]
    assert abs(brute - op.delta) <= x[1] - x[0]


def test_operating_point_errors():
    with pytest.raises(ConfigurationError):
        optimal_operating_point(SYS, MED, BUDGET, search_range=(-1.0, 2.0))
    with pytest.raises(ConfigurationError):
        optimal_operating_point(SYS, MED, BUDGET, search_range=(2.0, 2.0))
    with pytest.raises(ModelError):
        _grid_then_golden(lambda x: np.zeros_like(x), (1.0, 2.0), 11, 1e-6)


def test_fi_optimum_beats_max_slope_point():
    op = optimal_operating_point(SYS, MED, BUDGET)
    for model in ("weak_probe", "lindblad"):
        slope_point = max_slope_detuning(SYS, model=model)  # steepest absorption
        assert op.fi_at_delta > 100 * fi_stark_shift(SYS, MED, BUDGET, slope_point)
        assert abs(slope_point - op.delta) > 5.0


def test_golden_section_on_parabola():
    assert golden_section_max(lambda x: -(x - 1.234) ** 2, 0.0, 3.0, 1e-10) == pytest.approx(1.234, abs=1e-9)


def test_fisher_map_properties():
    dc = np.linspace(-20, 20, 201)
    oc = np.linspace(5, 25, 11)
    fm = fisher_map(SYS, MED, BUDGET, dc, oc)
    assert fm.fi.shape == (11, 201)
    assert np.all(fm.fi >= 0)
    assert np.allclose(fm.fi, fm.fi[:, ::-1], rtol=1e-10)
    with pytest.raises(ConfigurationError):
        fisher_map(SYS, MED, BUDGET, dc, np.array([]))


def test_usable_range_quadratic_line_shape_never_violates():
    res = usable_range(lambda x: x**2, 1.0, max_shift=5.0)
    assert res == (5.0, False)


def test_usable_range_positive_for_eit_line():
    res = usable_range(SYS, DELTA_OPT)
    assert res.r_ds == pytest.approx(3.05, abs=2e-3)
    assert not res.degenerate
    eps = relative_nonlinearity(SYS, DELTA_OPT, np.array([res.r_ds, res.r_ds + 1e-3]))
    assert eps[0] <= 0.05 < eps[1]


def test_usable_range_degenerate_flag():
    # a tolerance violated already at the first scan step
    res = usable_range(lambda x: np.exp(50 * x), 1.0, tolerance=1e-6, step=0.1, max_shift=1.0)
    assert res == (0.0, True)
    with pytest.raises(ConfigurationError):
        usable_range(SYS, 1.0, tolerance=1.5)


def test_tradeoff_trends():
    rows = tradeoff_sweep(SYS, MED, BUDGET, [5.0, 10.0, 15.0, 20.0, 25.0])
    f = [r.f_max for r in rows]
    r = [r.r_ds for r in rows]
    assert np.all(np.diff(f) < 0)
    assert np.all(np.diff(r) > 0)
    assert len(tradeoff_sweep(SYS, MED, BUDGET, [15.0])) == 1


def test_score_zero_mean_by_truncated_sum():
    for mean in (0.5, 7.0, 50.0):
        n = np.arange(0, 400)
        assert abs(np.sum(poisson.pmf(n, mean) * (n - mean) / mean)) < 1e-8


def test_mc_validation_deterministic_and_guarded():
    budget = PhotonBudget(1e6)
    a = mc_estimator_validation(SYS, MED, budget, DELTA_OPT, 0.0, 2000, seed=3)
    b = mc_estimator_validation(SYS, MED, budget, DELTA_OPT, 0.0, 2000, seed=3)
    assert a == b
    with pytest.raises(ConfigurationError):
        mc_estimator_validation(SYS, MED, budget, DELTA_OPT, 0.0, 10, seed=0)
    with pytest.raises(BracketError):
        mc_estimator_validation(SYS, MED, PhotonBudget(10.0), DELTA_OPT, 0.0, 1000, seed=0,
                                bracket_halfwidth=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_mc_variance_respects_cramer_rao(seed):
    n = 10_000
    res = mc_estimator_validation(SYS, MED, PhotonBudget(1e6), DELTA_OPT, 0.0, n, seed)
    assert res.sample_variance >= res.crlb * (1 - 3 / np.sqrt(n))
    assert abs(res.mean_estimate) < 5 * np.sqrt(res.crlb / n)


@settings(max_examples=50, deadline=None)
@given(st.floats(5.0, 30.0), st.floats(0.5, 20.0), st.floats(1.0, 400.0))
def test_fi_identity_randomised(omega_c, x, beta):
    sys = AtomSystem(omega_p=1.0, omega_c=omega_c)
    med = OpticalMedium(beta=beta)
    budget = PhotonBudget(1e10)
    mean = lambda d: budget.n0 * transmittance(sys, med, x - d)  # noqa: E731
    general = poisson_fisher(mean, 0.0)
    closed = fi_stark_shift(sys, med, budget, x)
    assert general == pytest.approx(closed, rel=1e-6, abs=1e-300)
    assert np.isfinite(absorption(sys, x))
