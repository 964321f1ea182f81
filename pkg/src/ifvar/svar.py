"""Recursive (Cholesky) identification, impulse responses and FEVD.

Structural shocks are indexed by the variable they belong to, in the original
variable order, whatever the causal ordering used to identify them.  So
``theta[h, r, s]`` is the response of variable ``r`` at horizon ``h`` to a
one-standard-deviation shock of variable ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FactorizationError, NumericalError, ValidationError
from .var import VarFit

OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class Ordering:
    """Causal ordering: ``perm[0]`` may affect ``perm[1]`` within the period, not vice versa."""

    perm: tuple

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValidationError(f"{self.perm} is not a permutation of 0..{len(perm) - 1}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def first(cls, var: int, m: int = 2) -> "Ordering":
        rest = [v for v in range(m) if v != var]
        return cls((var, *rest))

    @property
    def m(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        """Permutation matrix ``P`` with ``(P x)[k] = x[perm[k]]``."""
        return np.eye(self.m)[list(self.perm)]


@dataclass(frozen=True, eq=False)
class StructuralFactor:
    """Impact matrix ``b`` with ``sigma_u = b b'``.

    ``b`` is stored in the original variable basis; it is lower triangular once
    rows and columns are permuted into ``ordering``.
    """

    b: np.ndarray
    ordering: Ordering

    def ordered(self) -> np.ndarray:
        p = self.ordering.matrix()
        return p @ self.b @ p.T


@dataclass(frozen=True, eq=False)
class IrfResult:
    theta: np.ndarray  # (H + 1, m, m)

    @property
    def horizon(self) -> int:
        return self.theta.shape[0] - 1

    def response(self, target: int, shock: int) -> np.ndarray:
        return self.theta[:, target, shock]


@dataclass(frozen=True, eq=False)
class FevdResult:
    """``shares[h - 1, r, s]``: share of shock ``s`` in the h-step forecast error variance of ``r``."""

    shares: np.ndarray  # (H, m, m)

    @property
    def horizon(self) -> int:
        return self.shares.shape[0]

    def share(self, target: int, shock: int, h: int | None = None) -> float:
        h = self.horizon if h is None else h
        if not 1 <= h <= self.horizon:
            raise ValidationError(f"horizon {h} outside 1..{self.horizon}")
        return float(self.shares[h - 1, target, shock])


def cholesky_identify(sigma_u, ordering: Ordering) -> StructuralFactor:
    sigma_u = np.asarray(sigma_u, dtype=float)
    if sigma_u.shape != (ordering.m, ordering.m):
        raise ValidationError(f"covariance shape {sigma_u.shape} does not match ordering")
    p = ordering.matrix()
    try:
        low = np.linalg.cholesky(p @ sigma_u @ p.T)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("residual covariance is not positive definite") from exc
    return StructuralFactor(b=p.T @ low @ p, ordering=ordering)


def impulse_responses(phi, b, horizon: int) -> np.ndarray:
    """Structural responses ``Theta_0..Theta_H`` from lag matrices and an impact matrix.

    Works on a single system (``phi`` of shape ``(p, m, m)``) or a batch
    (``(n, p, m, m)`` with ``b`` of shape ``(n, m, m)``), using the MA
    recursion ``Psi_h = sum_l Phi_l Psi_{h-l}`` and ``Theta_h = Psi_h b``.
    """
    if horizon < 0:
        raise ValidationError("horizon must be non-negative")
    phi = np.asarray(phi, dtype=float)
    b = np.asarray(b, dtype=float)
    p, m = phi.shape[-3], phi.shape[-1]
    batch = phi.shape[:-3]
    psi = np.zeros(batch + (horizon + 1, m, m))
    psi[..., 0, :, :] = np.eye(m)
    with np.errstate(over="ignore", invalid="ignore"):
        for h in range(1, horizon + 1):
            acc = np.zeros(batch + (m, m))
            for lag in range(1, min(h, p) + 1):
                acc += phi[..., lag - 1, :, :] @ psi[..., h - lag, :, :]
            psi[..., h, :, :] = acc
        theta = psi @ b[..., None, :, :]
    if not np.all(np.isfinite(theta)) or np.abs(theta).max() > OVERFLOW_LIMIT:
        raise NumericalError("impulse responses overflow (explosive system)")
    return theta


def irf(fit: VarFit, factor: StructuralFactor, horizon: int) -> IrfResult:
    """Responses to one-standard-deviation structural shocks; deterministic terms drop out."""
    return IrfResult(impulse_responses(fit.phi, factor.b, horizon))


def fevd_from_theta(theta, horizon: int) -> np.ndarray:
    """Cumulative squared-response shares for horizons ``1..horizon``.

    The h-step share sums ``Theta_0..Theta_{h-1}``.
    """
    theta = np.asarray(theta, dtype=float)
    if horizon < 1:
        raise ValidationError("FEVD horizon must be at least 1")
    if theta.shape[-3] < horizon:
        raise ValidationError("not enough response horizons for the requested FEVD")
    contrib = np.cumsum(theta[..., :horizon, :, :] ** 2, axis=-3)
    mspe = contrib.sum(axis=-1, keepdims=True)
    if np.any(mspe <= 0):
        raise NumericalError("zero forecast error variance")
    return contrib / mspe


def fevd(fit: VarFit, factor: StructuralFactor, horizon: int) -> FevdResult:
    theta = impulse_responses(fit.phi, factor.b, horizon - 1 if horizon >= 1 else 0)
    return FevdResult(fevd_from_theta(theta, horizon))
