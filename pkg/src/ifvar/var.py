"""Reduced-form VAR: least-squares fits, BIC lag choice, residual diagnostics.

Also home to the population moments of a stationary VAR(1), used as an
analytic oracle by the simulation module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import (
    InsufficientDataError,
    NonStationaryError,
    NumericalError,
    SingularityError,
    ValidationError,
)
from .series import PairedSample

DEFAULT_P_MAX = 8
STAR_LEVELS = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


@dataclass(frozen=True)
class VarSpec:
    """Lag order and deterministic terms. An intercept is always included."""

    p: int = 1
    trend: bool = False
    m: int = 2

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValidationError(f"lag order must be a positive integer, got {self.p}")
        if self.m != 2:
            raise ValidationError("only bivariate systems are supported")

    @property
    def n_deterministic(self) -> int:
        return 1 + int(self.trend)

    @property
    def n_regressors(self) -> int:
        """Regressors per equation."""
        return self.n_deterministic + self.m * self.p


@dataclass(frozen=True, eq=False)
class VarFit:
    """Equation-by-equation least-squares estimates.

    ``phi[l]`` is the coefficient matrix on lag ``l + 1``; ``design`` and
    ``targets`` hold the regression data in the column order
    ``[1, (trend), y_{t-1}, ..., y_{t-p}]``.
    """

    spec: VarSpec
    c: np.ndarray
    phi: np.ndarray
    trend_coef: np.ndarray | None
    residuals: np.ndarray
    sigma_u: np.ndarray
    t_eff: int
    design: np.ndarray = field(repr=False)
    targets: np.ndarray = field(repr=False)

    @property
    def coef(self) -> np.ndarray:
        """Stacked ``k x m`` coefficient matrix matching ``design`` columns."""
        rows = [self.c[None, :]]
        if self.trend_coef is not None:
            rows.append(self.trend_coef[None, :])
        rows.extend(self.phi[l].T for l in range(self.spec.p))
        return np.vstack(rows)

    def companion(self) -> np.ndarray:
        return companion_matrix(self.phi)


@dataclass(frozen=True)
class ResidualCorrTest:
    rho_u: float
    t_stat: float
    p_value: float
    df: int

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)


def significance_stars(p_value: float) -> str:
    for level, mark in STAR_LEVELS:
        if p_value < level:
            return mark
    return ""


def lag_design(data, p: int, trend: bool = False, start: int | None = None):
    """Regressor and target matrices for a VAR(p).

    ``start`` is the first row of ``data`` used as a target (defaults to
    ``p``); a larger value trims the sample, as needed when comparing lag
    orders on a common sample.  The trend is centred over the rows used.
    """
    data = np.asarray(data, dtype=float)
    n, m = data.shape
    start = p if start is None else start
    if start < p:
        raise ValidationError("start must be at least p")
    rows = n - start
    cols = [np.ones(rows)]
    if trend:
        t = np.arange(start, n, dtype=float)
        cols.append(t - t.mean())
    for lag in range(1, p + 1):
        cols.extend(data[start - lag : n - lag].T)
    return np.column_stack(cols), data[start:]


def _ols(x, y):
    rank = np.linalg.matrix_rank(x)
    if rank < x.shape[1]:
        raise SingularityError(f"design matrix rank {rank} < {x.shape[1]} columns")
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    return coef


def fit_ols(pair_or_data, spec: VarSpec, start: int | None = None) -> VarFit:
    """Least squares on each equation with a common regressor set.

    ``pair_or_data`` is a :class:`PairedSample` (variables ``x, y``) or an
    ``n x 2`` array.  The residual covariance uses divisor ``t_eff``.
    """
    data = pair_or_data.matrix() if isinstance(pair_or_data, PairedSample) else pair_or_data
    data = np.asarray(data, dtype=float)
    n, m = data.shape
    if m != spec.m:
        raise ValidationError(f"data has {m} columns, spec expects {spec.m}")
    if n < m * spec.p + spec.p + 5:
        raise InsufficientDataError(f"{n} observations too few for a VAR({spec.p})")
    x, y = lag_design(data, spec.p, spec.trend, start)
    coef = _ols(x, y)
    resid = y - x @ coef
    t_eff = resid.shape[0]
    sigma = resid.T @ resid / t_eff
    d = spec.n_deterministic
    phi = np.stack([coef[d + m * l : d + m * (l + 1)].T for l in range(spec.p)])
    return VarFit(
        spec=spec,
        c=coef[0].copy(),
        phi=phi,
        trend_coef=coef[1].copy() if spec.trend else None,
        residuals=resid,
        sigma_u=(sigma + sigma.T) / 2,
        t_eff=t_eff,
        design=x,
        targets=y,
    )


def bic_values(pair_or_data, p_max: int = DEFAULT_P_MAX, trend: bool = False) -> np.ndarray:
    """BIC for ``p = 1..p_max``, every candidate fit on the sample trimmed by ``p_max``.

    ``BIC(p) = ln det Sigma_u(p) + ln(T)/T * m * k(p)`` with ``k(p)`` the number
    of regressors per equation, deterministic terms included.
    """
    if p_max < 1:
        raise ValidationError("p_max must be at least 1")
    data = pair_or_data.matrix() if isinstance(pair_or_data, PairedSample) else pair_or_data
    out = np.empty(p_max)
    for p in range(1, p_max + 1):
        spec = VarSpec(p=p, trend=trend)
        fit = fit_ols(data, spec, start=p_max)
        t = fit.t_eff
        sign, logdet = np.linalg.slogdet(fit.sigma_u)
        if sign <= 0:
            raise SingularityError(f"residual covariance singular at p={p}")
        out[p - 1] = logdet + np.log(t) / t * spec.m * spec.n_regressors
    return out


def select_lags_bic(pair_or_data, p_max: int = DEFAULT_P_MAX, trend: bool = False) -> int:
    """Lag order minimizing BIC; ties go to the smaller order."""
    return int(np.argmin(bic_values(pair_or_data, p_max, trend))) + 1


def residual_corr_test(fit: VarFit) -> ResidualCorrTest:
    """Two-sided t-test of zero correlation between the two residual series.

    ``t = r sqrt(df) / sqrt(1 - r^2)`` with ``df = t_eff - k``, ``k`` the number
    of regressors per equation.
    """
    u = fit.residuals
    df = fit.t_eff - fit.spec.n_regressors
    if df <= 2:
        raise InsufficientDataError("too few residual degrees of freedom")
    uc = u - u.mean(axis=0)
    r = float(uc[:, 0] @ uc[:, 1] / np.sqrt((uc[:, 0] @ uc[:, 0]) * (uc[:, 1] @ uc[:, 1])))
    if abs(r) >= 1.0 - 1e-12:
        raise NumericalError("residuals perfectly correlated")
    t = r * np.sqrt(df) / np.sqrt(1.0 - r * r)
    p = float(2.0 * stats.t.sf(abs(t), df))
    return ResidualCorrTest(rho_u=r, t_stat=float(t), p_value=p, df=int(df))


def companion_matrix(phi) -> np.ndarray:
    """Companion form of lag matrices ``phi`` with shape ``(p, m, m)``."""
    phi = np.asarray(phi, dtype=float)
    p, m, _ = phi.shape
    comp = np.zeros((m * p, m * p))
    comp[:m] = np.hstack(list(phi))
    comp[m:, :-m] = np.eye(m * (p - 1))
    return comp


def spectral_radius(a) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(a, dtype=float)))))


def stationary_autocov(a, sigma):
    """Population autocovariances ``(Gamma0, Gamma1)`` of ``X_t = a X_{t-1} + u_t``.

    ``Gamma0`` solves ``G = a G a' + sigma`` (direct vectorized solve) and
    ``Gamma1[r, s] = cov(X_{r,t+1}, X_{s,t}) = (a Gamma0)[r, s]``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    if spectral_radius(a) >= 1.0 - 1e-8:
        raise NonStationaryError(f"spectral radius {spectral_radius(a):.6g} >= 1")
    m = a.shape[0]
    lhs = np.eye(m * m) - np.kron(a, a)
    vec = np.linalg.solve(lhs, sigma.reshape(-1))
    g0 = vec.reshape(m, m)
    g0 = (g0 + g0.T) / 2
    return g0, a @ g0
