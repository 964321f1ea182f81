"""Bayesian VAR with a natural-conjugate Minnesota prior.

The prior is normal-inverse-Wishart: ``vec(B) | Sigma ~ N(vec(B0), Sigma (x) Omega0)``
and ``Sigma ~ IW(nu0, S0)``.  The posterior is of the same family, so draws
are exact and i.i.d. and the marginal likelihood is available in closed form,
which is what the hyperparameter search maximizes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg, stats
from scipy.special import multigammaln

from .errors import FactorizationError, InsufficientDataError, LowDrawCountWarning, ValidationError
from .series import PairedSample
from .svar import Ordering, impulse_responses
from .var import VarSpec, fit_ols, lag_design

DEFAULT_LAMBDA_GRID = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0)
DETERMINISTIC_SCALE = 100.0
MIN_BAND_DRAWS = 100


@dataclass(frozen=True)
class MinnesotaPrior:
    """Minnesota hyperparameters.

    The prior standard deviation of the coefficient on lag ``l`` of variable
    ``j`` in equation ``i`` is ``lambda_overall * sigma_i / (l**lag_decay * sigma_j)``.
    ``scales`` holds the ``sigma_j``; leave it as ``None`` to take AR(1)
    residual standard deviations from the data being fitted.
    A natural-conjugate prior ties every equation to one covariance pattern,
    so cross-variable tightness other than one cannot be represented.
    """

    lambda_overall: float = 0.2
    lambda_cross: float = 1.0
    lag_decay: float = 1.0
    own_lag_mean: float = 1.0
    scales: tuple | None = None

    def __post_init__(self):
        if not self.lambda_overall > 0:
            raise ValidationError("lambda_overall must be positive")
        if self.lambda_cross != 1.0:
            raise ValidationError(
                "the natural-conjugate prior requires lambda_cross = 1 "
                "(Kronecker-structured prior covariance)"
            )
        if self.lag_decay < 0:
            raise ValidationError("lag_decay must be non-negative")
        if self.scales is not None:
            scales = tuple(float(s) for s in self.scales)
            if any(not s > 0 for s in scales):
                raise ValidationError("residual scales must be positive")
            object.__setattr__(self, "scales", scales)

    def with_scales(self, data) -> "MinnesotaPrior":
        if self.scales is not None:
            return self
        return replace(self, scales=tuple(ar1_residual_scales(data)))


def ar1_residual_scales(data) -> np.ndarray:
    """Residual standard deviation of a univariate AR(1) with intercept, per column."""
    data = np.asarray(data, dtype=float)
    out = []
    for col in data.T:
        x = np.column_stack([np.ones(col.size - 1), col[:-1]])
        coef, *_ = np.linalg.lstsq(x, col[1:], rcond=None)
        resid = col[1:] - x @ coef
        out.append(np.sqrt(resid @ resid / (resid.size - 2)))
    return np.array(out)


@dataclass(frozen=True, eq=False)
class NiwParams:
    """Normal-inverse-Wishart parameters ``(B, Omega, S, nu)``."""

    b: np.ndarray
    omega: np.ndarray
    s: np.ndarray
    nu: float


def prior_params(spec: VarSpec, prior: MinnesotaPrior) -> NiwParams:
    if prior.scales is None or len(prior.scales) != spec.m:
        raise ValidationError("prior needs one residual scale per variable")
    m, d = spec.m, spec.n_deterministic
    sig = np.asarray(prior.scales)
    lam = prior.lambda_overall
    w = [(DETERMINISTIC_SCALE * lam) ** 2] * d
    for lag in range(1, spec.p + 1):
        w.extend((lam / (lag**prior.lag_decay * sig)) ** 2)
    b0 = np.zeros((spec.n_regressors, m))
    b0[d : d + m] = prior.own_lag_mean * np.eye(m)
    nu0 = m + 2.0
    s0 = np.diag(sig**2) * (nu0 - m - 1)
    return NiwParams(b0, np.diag(w), s0, nu0)


def posterior_params(x, y, prior: NiwParams) -> NiwParams:
    """Conjugate update of a prior given regressors ``x`` and targets ``y``."""
    omega0_inv = np.diag(1.0 / np.diag(prior.omega))
    precision = omega0_inv + x.T @ x
    try:
        chol = linalg.cho_factor(precision, lower=True)
    except linalg.LinAlgError as exc:
        raise FactorizationError("posterior precision not positive definite") from exc
    b_bar = linalg.cho_solve(chol, omega0_inv @ prior.b + x.T @ y)
    omega_bar = linalg.cho_solve(chol, np.eye(precision.shape[0]))
    resid = y - x @ b_bar
    dev = b_bar - prior.b
    s_bar = prior.s + resid.T @ resid + dev.T @ omega0_inv @ dev
    return NiwParams(
        b_bar, (omega_bar + omega_bar.T) / 2, (s_bar + s_bar.T) / 2, prior.nu + y.shape[0]
    )


def _logdet(a) -> float:
    sign, val = np.linalg.slogdet(a)
    if sign <= 0:
        raise FactorizationError("matrix is not positive definite")
    return val


def _regression_data(pair_or_data, spec: VarSpec):
    data = pair_or_data.matrix() if isinstance(pair_or_data, PairedSample) else pair_or_data
    data = np.asarray(data, dtype=float)
    if data.shape[0] < spec.m * spec.p + spec.p + 5:
        raise InsufficientDataError(f"{data.shape[0]} observations too few for a VAR({spec.p})")
    return data, *lag_design(data, spec.p, spec.trend)


def log_marginal_likelihood(pair_or_data, spec: VarSpec, prior: MinnesotaPrior) -> float:
    """Closed-form log density of the targets given the initial lags."""
    data, x, y = _regression_data(pair_or_data, spec)
    prior = prior.with_scales(data)
    p0 = prior_params(spec, prior)
    post = posterior_params(x, y, p0)
    t, m = y.shape
    return float(
        -0.5 * m * t * np.log(np.pi)
        + multigammaln(post.nu / 2, m)
        - multigammaln(p0.nu / 2, m)
        - 0.5 * m * _logdet(p0.omega)
        + 0.5 * m * _logdet(post.omega)
        + 0.5 * p0.nu * _logdet(p0.s)
        - 0.5 * post.nu * _logdet(post.s)
    )


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    """I.i.d. posterior draws.

    ``coef[n]`` is a ``k x m`` coefficient matrix in the design column order
    ``[1, (trend), y_{t-1}, ..., y_{t-p}]``; ``sigma[n]`` the matching
    residual covariance.
    """

    spec: VarSpec
    prior: MinnesotaPrior
    coef: np.ndarray
    sigma: np.ndarray
    posterior: NiwParams
    seed: int

    @property
    def count(self) -> int:
        return self.coef.shape[0]

    @property
    def phi(self) -> np.ndarray:
        """Lag matrices per draw, shape ``(n, p, m, m)``."""
        n, m, d = self.count, self.spec.m, self.spec.n_deterministic
        return self.coef[:, d:, :].reshape(n, self.spec.p, m, m).transpose(0, 1, 3, 2)

    @property
    def mean_coef(self) -> np.ndarray:
        """Exact posterior mean of the coefficients."""
        return self.posterior.b

    @property
    def mean_phi(self) -> np.ndarray:
        m, d = self.spec.m, self.spec.n_deterministic
        return self.posterior.b[d:].reshape(self.spec.p, m, m).transpose(0, 2, 1)


def fit_bayes(pair_or_data, spec: VarSpec, prior: MinnesotaPrior | None = None,
              n_draws: int = 10_000, seed: int = 0) -> PosteriorDraws:
    """Posterior draws ``Sigma ~ IW(nu, S)``, then ``B | Sigma ~ MN(B_bar, Omega_bar, Sigma)``."""
    if n_draws < 1:
        raise ValidationError("n_draws must be at least 1")
    prior = prior or MinnesotaPrior()
    data, x, y = _regression_data(pair_or_data, spec)
    prior = prior.with_scales(data)
    post = posterior_params(x, y, prior_params(spec, prior))
    rng = np.random.default_rng(seed)
    sigma = stats.invwishart.rvs(df=post.nu, scale=post.s, size=n_draws, random_state=rng)
    sigma = np.asarray(sigma).reshape(n_draws, spec.m, spec.m)
    sigma = (sigma + sigma.transpose(0, 2, 1)) / 2
    z = rng.standard_normal((n_draws, spec.n_regressors, spec.m))
    l_omega = np.linalg.cholesky(post.omega)
    try:
        l_sigma = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("non-positive-definite covariance draw") from exc
    coef = post.b + l_omega @ z @ l_sigma.transpose(0, 2, 1)
    return PosteriorDraws(spec, prior, coef, sigma, post, seed)


def optimize_hyperparameters(pair_or_data, spec: VarSpec, grid=DEFAULT_LAMBDA_GRID,
                             base: MinnesotaPrior | None = None) -> MinnesotaPrior:
    """Overall tightness maximizing the marginal likelihood; other settings from ``base``.

    Ties keep the first grid point.
    """
    grid = list(grid)
    if not grid:
        raise ValidationError("empty hyperparameter grid")
    base = base or MinnesotaPrior()
    candidates = [replace(base, lambda_overall=float(lam)) for lam in grid]
    scores = [log_marginal_likelihood(pair_or_data, spec, c) for c in candidates]
    best = candidates[int(np.argmax(scores))]
    data = pair_or_data.matrix() if isinstance(pair_or_data, PairedSample) else pair_or_data
    return best.with_scales(np.asarray(data, dtype=float))


@dataclass(frozen=True, eq=False)
class IrfBands:
    """Pointwise posterior quantiles of structural responses, each ``(H + 1, m, m)``."""

    median: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    band: float
    count: int

    @property
    def horizon(self) -> int:
        return self.median.shape[0] - 1


def draw_impacts(sigma, ordering: Ordering) -> np.ndarray:
    """Cholesky impact matrix of every covariance draw, in the original variable basis."""
    p = ordering.matrix()
    try:
        low = np.linalg.cholesky(p @ sigma @ p.T)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("non-positive-definite covariance draw") from exc
    return p.T @ low @ p


def draw_responses(draws: PosteriorDraws, ordering: Ordering, horizon: int) -> np.ndarray:
    """Structural responses for every draw, shape ``(n, H + 1, m, m)``."""
    return impulse_responses(draws.phi, draw_impacts(draws.sigma, ordering), horizon)


def posterior_irf_bands(draws: PosteriorDraws, ordering: Ordering, horizon: int,
                        band: float = 0.68) -> IrfBands:
    """Median and central ``band`` interval of the draw-wise responses."""
    if draws.count < 1:
        raise ValidationError("no posterior draws")
    if not 0 <= band < 1:
        raise ValidationError("band must lie in [0, 1)")
    if draws.count < MIN_BAND_DRAWS:
        warnings.warn(
            f"credible bands from only {draws.count} draws", LowDrawCountWarning, stacklevel=2
        )
    theta = draw_responses(draws, ordering, horizon)
    q = np.quantile(theta, [(1 - band) / 2, 0.5, (1 + band) / 2], axis=0)
    return IrfBands(median=q[1], lower=q[0], upper=q[2], band=band, count=draws.count)


def posterior_mean_ols_gap(pair_or_data, spec: VarSpec, prior: MinnesotaPrior) -> float:
    """Largest absolute difference between posterior-mean and OLS coefficients."""
    data, x, y = _regression_data(pair_or_data, spec)
    post = posterior_params(x, y, prior_params(spec, prior.with_scales(data)))
    return float(np.max(np.abs(post.b - fit_ols(data, spec).coef)))
