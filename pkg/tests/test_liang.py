import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import regression_flow
from ifvar.errors import NumericalError, SingularityError, ValidationError
from ifvar.liang import (
    MomentSet,
    aux_regression,
    info_flow,
    normalized_info_flow,
    pair_info_flow,
    sample_moments,
)
from ifvar.series import PairedSample, TimeSeries
from ifvar.sim import DgpSpec, analytic_moments, fevd_shares, simulate_path


def make_pair(x, y):
    years = np.arange(len(x))
    return PairedSample(TimeSeries("x", years, x), TimeSeries("y", years, y))


def random_pair(seed, n=300, coupling=0.4):
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((n, 2))
    x = np.zeros(n)
    y = np.zeros(n)
    for t in range(1, n):
        x[t] = 0.6 * x[t - 1] + coupling * y[t - 1] + e[t, 0]
        y[t] = 0.3 * y[t - 1] + e[t, 1]
    return make_pair(x, y)


@st.composite
def moment_sets(draw, zero_cov=False):
    """Moments of (X_i, X_j, dX_i, dX_j) from a random positive-definite covariance."""
    rows = draw(st.lists(st.floats(-3, 3), min_size=16, max_size=16))
    m = np.array(rows).reshape(4, 4)
    if zero_cov:
        m[1] -= m[0] * (m[0] @ m[1]) / max(m[0] @ m[0], 1e-12)
    cov = m @ m.T + 0.1 * np.eye(4)
    if zero_cov:
        cov[0, 1] = cov[1, 0] = 0.0
    return MomentSet.from_covariance(cov)


@pytest.mark.parametrize("seed", range(5))
def test_flow_matches_regression_oracle(seed):
    pair = random_pair(seed)
    res = pair_info_flow(pair)
    t_yx, tau_yx = regression_flow(pair.x.values, pair.y.values)
    t_xy, tau_xy = regression_flow(pair.y.values, pair.x.values)
    assert res.t_j_to_i == pytest.approx(t_yx, rel=1e-9)
    assert res.tau_j_to_i == pytest.approx(tau_yx, rel=1e-9)
    assert res.t_i_to_j == pytest.approx(t_xy, rel=1e-9, abs=1e-12)
    assert res.tau_i_to_j == pytest.approx(tau_xy, rel=1e-9, abs=1e-12)


@given(moment_sets(zero_cov=True))
def test_zero_covariance_gives_zero_flow(m):
    res = normalized_info_flow(m)
    assert res.t_j_to_i == 0.0 and res.t_i_to_j == 0.0
    assert res.tau_j_to_i == 0.0 and res.tau_i_to_j == 0.0


@given(moment_sets())
def test_normalized_flow_bounded_with_sign_of_raw(m):
    res = normalized_info_flow(m)
    for t, tau in ((res.t_j_to_i, res.tau_j_to_i), (res.t_i_to_j, res.tau_i_to_j)):
        assert abs(tau) <= 1.0
        assert np.sign(tau) == np.sign(t)


@given(st.integers(0, 10_000), st.floats(0.01, 100), st.floats(0.01, 100))
def test_scale_invariance(seed, ci, cj):
    pair = random_pair(seed, n=80)
    base = pair_info_flow(pair)
    scaled = pair_info_flow(make_pair(ci * pair.x.values, cj * pair.y.values))
    assert np.sign(scaled.t_j_to_i) == np.sign(base.t_j_to_i)
    assert np.sign(scaled.tau_i_to_j) == np.sign(base.tau_i_to_j)
    assert scaled.tau_j_to_i == pytest.approx(base.tau_j_to_i, rel=1e-6, abs=1e-12)


def test_identical_series_self_covariance_and_singularity():
    x = np.sin(np.arange(40.0)) + 0.1 * np.arange(40)
    m = sample_moments(make_pair(x, x))
    assert m.sigma_ij == pytest.approx(m.sigma_ii)
    with pytest.raises(SingularityError):
        info_flow(m)


def test_constant_series_rejected():
    with pytest.raises(NumericalError):
        sample_moments(make_pair(np.arange(30.0), np.full(30, 2.0)))


def test_iid_pair_has_small_covariance():
    rng = np.random.default_rng(1)
    n = 100_000
    z = rng.standard_normal((n, 2))
    m = sample_moments(make_pair(z[:, 0], z[:, 1]))
    assert abs(m.sigma_ij) < 3 / np.sqrt(n)


def test_moment_invariants():
    with pytest.raises(NumericalError):
        MomentSet(0.0, 1, 0, 0, 0, 0, 0, 1, 1)
    with pytest.raises(ValidationError):
        MomentSet(1.0, 1.0, 1.5, 0, 0, 0, 0, 1, 1)


def test_dgp1_flow_runs_from_x2_to_x1():
    # a12 = 0.5 makes X2 drive X1; with diagonal shocks the FEVD ranking agrees
    m = analytic_moments(DgpSpec.reference(1, 0.0))
    res = normalized_info_flow(m)
    assert res.t_j_to_i > 0
    assert abs(res.tau_j_to_i) > abs(res.tau_i_to_j)
    y12, y21 = fevd_shares(DgpSpec.reference(1).a, np.eye(2), 10)
    assert y21 > y12


def test_dominant_noise_gives_small_tau():
    rng = np.random.default_rng(3)
    n = 20_000
    x = np.zeros(n)
    y = rng.standard_normal(n).cumsum() * 0.01
    for t in range(1, n):
        x[t] = 0.999 * x[t - 1] + 0.001 * y[t - 1] + 10.0 * rng.standard_normal()
    res = pair_info_flow(make_pair(x, y))
    assert abs(res.tau_j_to_i) < 0.05


def test_aux_regression_recovers_coefficients():
    rng = np.random.default_rng(5)
    n = 50_000
    x = np.zeros(n)
    y = rng.standard_normal(n)
    for t in range(1, n):
        x[t] = 0.7 * x[t - 1] + 0.2 * y[t - 1] + rng.standard_normal()
    aux = aux_regression(sample_moments(make_pair(x, y)))
    assert aux.self_coef == pytest.approx(-0.3, abs=0.02)
    assert aux.cross_coef == pytest.approx(0.2, abs=0.02)
    assert aux.resid_var == pytest.approx(1.0, abs=0.05)


def test_simulated_path_flow_matches_population():
    dgp = DgpSpec.reference(3, 0.3)
    pop = normalized_info_flow(analytic_moments(dgp))
    mc = pair_info_flow(simulate_path(dgp, 400_000, seed=2))
    assert mc.tau_i_to_j == pytest.approx(pop.tau_i_to_j, abs=0.01)
    assert mc.tau_j_to_i == pytest.approx(pop.tau_j_to_i, abs=0.01)
