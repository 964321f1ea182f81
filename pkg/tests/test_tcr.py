import numpy as np
import pytest

from ifvar import datasets
from ifvar.analysis import FORCING_FIRST, TEMP_FIRST
from ifvar.bayes import MinnesotaPrior, draw_responses, fit_bayes, optimize_hyperparameters
from ifvar.errors import ValidationError
from ifvar.series import PairedSample, TimeSeries
from ifvar.sim import DgpSpec
from ifvar.svar import IrfResult, cholesky_identify, impulse_responses, irf
from ifvar.tcr import (
    DOUBLING_FORCING,
    MEDIAN_IRF,
    TcrEstimate,
    cumulative_response,
    tcr_at,
    tcr_from_responses,
    tcr_point,
)
from ifvar.var import VarSpec, fit_ols


def test_cumulative_response_trivial_cases():
    b = np.array([[1.0, 0.0], [0.3, 0.8]])
    ir = IrfResult(impulse_responses(np.zeros((1, 2, 2)), b, 6))
    for h in range(7):
        assert cumulative_response(ir, 1, 0, h) == 0.3
    scalar = IrfResult(impulse_responses(np.full((1, 1, 1), 0.5), np.ones((1, 1)), 4))
    assert cumulative_response(scalar, 0, 0, 2) == pytest.approx(1.75, abs=1e-15)
    with pytest.raises(ValidationError):
        cumulative_response(scalar, 0, 0, 5)
    with pytest.raises(ValidationError):
        cumulative_response(scalar, 0, 0, -1)


def test_cumulative_response_matches_monte_carlo_on_dgp1():
    dgp = DgpSpec.reference(1, 0.4)
    b, horizon, n = dgp.b, 20, 20_000
    rng = np.random.default_rng(12)
    base = rng.standard_normal((n, 2)) + dgp.mean
    shocked = base.copy()
    cum = np.zeros((n, 2))
    for h in range(horizon + 1):
        eps = rng.standard_normal((n, 2))
        kick = np.zeros((n, 2))
        if h == 0:
            kick[:, 0] = 1.0
        base = dgp.c + base @ dgp.a.T + eps @ b.T
        shocked = dgp.c + shocked @ dgp.a.T + (eps + kick) @ b.T
        cum += shocked - base
    mc = cum.mean(axis=0)
    theta = impulse_responses(dgp.a[None], b, horizon)
    for target in range(2):
        assert cumulative_response(theta, target, 0, horizon) == pytest.approx(mc[target], abs=0.01)


def test_tcr_formula_and_discard():
    theta = np.zeros((3, 3, 2, 2))
    theta[:, :, 0, 0] = [[1.0, 0.5, 0.25], [1e-9, 0.0, 0.0], [2.0, 0.0, 0.0]]
    theta[:, :, 1, 0] = [[0.1, 0.2, 0.3], [1.0, 1.0, 1.0], [0.4, 0.0, 0.0]]
    tcr, keep = tcr_from_responses(theta, 2)
    assert keep.tolist() == [True, False, True]
    assert tcr[0] == pytest.approx(0.6 / 1.75 * DOUBLING_FORCING)
    assert tcr[2] == pytest.approx(0.2 * DOUBLING_FORCING)
    assert DOUBLING_FORCING == pytest.approx(5.35 * np.log(2))


def test_estimate_flags():
    est = TcrEstimate(20, (0, 1), False, 2.0, 1.5, 2.5, draws=500, discarded=60)
    assert est.unreliable and est.low_precision
    ok = TcrEstimate(20, (0, 1), False, 2.0, 1.5, 2.5, draws=5000, discarded=100)
    assert not ok.unreliable and not ok.low_precision
    assert ok.as_dict()["ordering"] == [0, 1]


@pytest.fixture(scope="module")
def co2_pair():
    return datasets.load_pair("co2_rf", "1850-2005")


def test_forcing_units_cancel_per_draw(co2_pair):
    # forcing in units c times smaller: the doubling forcing is c times larger in
    # those units, so per-draw TCR times c must reproduce the original exactly
    spec = VarSpec(p=4)
    c = 37.0
    scaled = PairedSample(co2_pair.x.replace(values=co2_pair.x.values * c), co2_pair.y)
    prior = optimize_hyperparameters(co2_pair, spec)
    prior_s = optimize_hyperparameters(scaled, spec)
    assert prior.lambda_overall == prior_s.lambda_overall
    a = fit_bayes(co2_pair, spec, prior, 400, seed=5)
    b = fit_bayes(scaled, spec, prior_s, 400, seed=5)
    for ordering in (FORCING_FIRST, TEMP_FIRST):
        ta, _ = tcr_from_responses(draw_responses(a, ordering, 70), 70)
        tb, _ = tcr_from_responses(draw_responses(b, ordering, 70), 70)
        np.testing.assert_allclose(tb * c, ta, rtol=1e-7)


def test_shock_size_cancels(co2_pair):
    fit = fit_ols(co2_pair, VarSpec(p=4))
    b = cholesky_identify(fit.sigma_u, FORCING_FIRST).b
    for h in (0, 20, 70):
        one = tcr_point(impulse_responses(fit.phi, b, h), h)
        big = tcr_point(impulse_responses(fit.phi, 3.7 * b, h), h)
        assert big == pytest.approx(one, rel=1e-12)


def test_tcr_continuous_in_h(co2_pair):
    fit = fit_ols(co2_pair, VarSpec(p=4))
    theta = irf(fit, cholesky_identify(fit.sigma_u, FORCING_FIRST), 80).theta
    xi_rf = np.cumsum(theta[:, 0, 0])
    xi_t = np.cumsum(theta[:, 1, 0])
    for h in range(80):
        step = abs(tcr_point(theta, h + 1) - tcr_point(theta, h))
        bound = DOUBLING_FORCING * (
            abs(theta[h + 1, 1, 0]) / abs(xi_rf[h + 1])
            + abs(xi_t[h]) * abs(theta[h + 1, 0, 0]) / abs(xi_rf[h] * xi_rf[h + 1])
        )
        assert step <= bound * (1 + 1e-9)


def test_modes_and_interval(co2_pair):
    spec = VarSpec(p=4)
    post = fit_bayes(co2_pair, spec, MinnesotaPrior(0.5), 2000, seed=1)
    per = tcr_at(post, FORCING_FIRST, 20)
    med = tcr_at(post, FORCING_FIRST, 20, mode=MEDIAN_IRF)
    assert per.lower <= per.median <= per.upper
    assert med.lower is None and med.mode == MEDIAN_IRF
    assert abs(per.median - med.median) < 0.3
    assert per.draws == 2000 and per.discarded == 0
    with pytest.raises(ValidationError):
        tcr_at(post, FORCING_FIRST, 20, mode="other")


def test_ordering_sensitivity_at_short_horizon(co2_pair):
    spec = VarSpec(p=4)
    post = fit_bayes(co2_pair, spec, optimize_hyperparameters(co2_pair, spec), 2000, seed=0)
    assert tcr_at(post, FORCING_FIRST, 20).median > tcr_at(post, TEMP_FIRST, 20).median
