"""Liang-Kleeman information flow between two series, raw and normalized.

Notation follows the bivariate linear estimator: for a target ``i`` and a
source ``j``, the rate of information flowing from ``j`` into ``i`` is built
from the covariance of the levels and of ``i``'s forward difference.  The
normalized flow divides by the sum of the magnitudes of every contribution to
the entropy change of ``i``: the flow itself, ``i``'s own phase-space
expansion and the stochastic (noise) term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, NumericalError, SingularityError, ValidationError
from .series import PairedSample

CORR_TOL = 1e-10


@dataclass(frozen=True)
class MomentSet:
    """Second moments of a pair ``(i, j)`` and their forward differences.

    ``sigma_i_di`` is cov(X_i, dX_i), ``sigma_j_di`` is cov(X_j, dX_i), and so on.
    The difference variances feed the noise term of the normalizer only.
    """

    sigma_ii: float
    sigma_jj: float
    sigma_ij: float
    sigma_i_di: float
    sigma_j_di: float
    sigma_i_dj: float
    sigma_j_dj: float
    sigma_di_di: float
    sigma_dj_dj: float
    n: float = np.inf

    def __post_init__(self):
        if not (self.sigma_ii > 0 and self.sigma_jj > 0):
            raise NumericalError("variances must be strictly positive")
        bound = np.sqrt(self.sigma_ii * self.sigma_jj)
        if abs(self.sigma_ij) > bound * (1 + 1e-12):
            raise ValidationError("|sigma_ij| exceeds sqrt(sigma_ii * sigma_jj)")

    @property
    def corr(self) -> float:
        return self.sigma_ij / np.sqrt(self.sigma_ii * self.sigma_jj)

    def swapped(self) -> "MomentSet":
        """The same moments with the roles of ``i`` and ``j`` exchanged."""
        return MomentSet(
            sigma_ii=self.sigma_jj,
            sigma_jj=self.sigma_ii,
            sigma_ij=self.sigma_ij,
            sigma_i_di=self.sigma_j_dj,
            sigma_j_di=self.sigma_i_dj,
            sigma_i_dj=self.sigma_j_di,
            sigma_j_dj=self.sigma_i_di,
            sigma_di_di=self.sigma_dj_dj,
            sigma_dj_dj=self.sigma_di_di,
            n=self.n,
        )

    @classmethod
    def from_covariance(cls, cov, n=np.inf) -> "MomentSet":
        """Build from the 4x4 covariance of ``(X_i, X_j, dX_i, dX_j)``."""
        c = np.asarray(cov, dtype=float)
        return cls(
            sigma_ii=c[0, 0],
            sigma_jj=c[1, 1],
            sigma_ij=c[0, 1],
            sigma_i_di=c[0, 2],
            sigma_j_di=c[1, 2],
            sigma_i_dj=c[0, 3],
            sigma_j_dj=c[1, 3],
            sigma_di_di=c[2, 2],
            sigma_dj_dj=c[3, 3],
            n=n,
        )


@dataclass(frozen=True)
class IfResult:
    """Information flows in both directions of a pair ``(i, j)``.

    Raw flows are in nats per unit time; normalized flows are dimensionless
    and bounded by one in magnitude.
    """

    t_j_to_i: float
    t_i_to_j: float
    tau_j_to_i: float
    tau_i_to_j: float
    k: int = 1


@dataclass(frozen=True)
class AuxRegression:
    """Least-squares fit of ``dX_i`` on ``(1, X_i, X_j)`` in population form."""

    self_coef: float
    cross_coef: float
    resid_var: float


def sample_moments(pair: PairedSample, k: int = 1, dt: float = 1.0) -> MomentSet:
    """Population (1/n) moments of the pair and its ``k``-th forward differences.

    Levels are taken at the first year of each difference so that every
    covariance is computed over the same ``n - k`` years.  ``i`` is ``pair.x``
    and ``j`` is ``pair.y``.
    """
    if k < 1:
        raise ValidationError(f"difference order must be positive, got {k}")
    n = len(pair)
    if n <= k + 2:
        raise InsufficientDataError(f"{n} observations too few for k={k}")
    z = pair.matrix()
    levels = z[:-k]
    diffs = (z[k:] - z[:-k]) / (k * dt)
    stacked = np.column_stack([levels, diffs])
    cov = np.cov(stacked, rowvar=False, bias=True)
    if cov[0, 0] <= 0 or cov[1, 1] <= 0:
        raise NumericalError(f"zero-variance series in pair {pair.names}")
    return MomentSet.from_covariance(cov, n=n - k)


def _check_not_collinear(m: MomentSet):
    if abs(abs(m.corr) - 1.0) < CORR_TOL:
        raise SingularityError("perfectly correlated series: information flow undefined")


def info_flow(m: MomentSet) -> float:
    """Rate of information flowing from ``j`` into ``i``.

    ``(s_ii s_ij s_j,di - s_ij^2 s_i,di) / (s_ii^2 s_jj - s_ii s_ij^2)``;
    use ``info_flow(m.swapped())`` for the reverse direction.
    """
    _check_not_collinear(m)
    if m.sigma_ij == 0.0:
        return 0.0
    num = m.sigma_ii * m.sigma_ij * m.sigma_j_di - m.sigma_ij**2 * m.sigma_i_di
    den = m.sigma_ii**2 * m.sigma_jj - m.sigma_ii * m.sigma_ij**2
    return num / den


def aux_regression(m: MomentSet) -> AuxRegression:
    """Coefficients and residual variance of ``dX_i ~ 1 + X_i + X_j``."""
    _check_not_collinear(m)
    det = m.sigma_ii * m.sigma_jj - m.sigma_ij**2
    a_ii = (m.sigma_jj * m.sigma_i_di - m.sigma_ij * m.sigma_j_di) / det
    a_ij = (m.sigma_ii * m.sigma_j_di - m.sigma_ij * m.sigma_i_di) / det
    resid = m.sigma_di_di - a_ii * m.sigma_i_di - a_ij * m.sigma_j_di
    return AuxRegression(a_ii, a_ij, max(resid, 0.0))


def _normalized(m: MomentSet, dt: float) -> tuple[float, float]:
    t = info_flow(m)
    aux = aux_regression(m)
    noise = dt * aux.resid_var / (2.0 * m.sigma_ii)
    z = abs(t) + abs(aux.self_coef) + abs(noise)
    if z == 0.0:
        raise NumericalError("normalizer is zero")
    return t, t / z


def normalized_info_flow(m: MomentSet, k: int = 1, dt: float = 1.0) -> IfResult:
    """Raw and normalized flows in both directions.

    The auxiliary single-equation estimates (own coefficient and residual
    variance of the difference regression) are recovered from the moments
    themselves, which is exactly the least-squares fit with an intercept.
    """
    t_ji, tau_ji = _normalized(m, dt)
    t_ij, tau_ij = _normalized(m.swapped(), dt)
    return IfResult(t_j_to_i=t_ji, t_i_to_j=t_ij, tau_j_to_i=tau_ji, tau_i_to_j=tau_ij, k=k)


def pair_info_flow(pair: PairedSample, k: int = 1, dt: float = 1.0) -> IfResult:
    """Information flows for ``pair`` with ``i = pair.x`` and ``j = pair.y``."""
    return normalized_info_flow(sample_moments(pair, k, dt), k=k, dt=dt)
