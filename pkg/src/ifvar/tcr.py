"""Transient climate response from bivariate (CO2 forcing, temperature) VARs.

A one-standard-deviation CO2 forcing shock raises both forcing and
temperature over the following years.  Summing the responses up to horizon
``h`` and rescaling the forcing total to the forcing of a CO2 doubling gives
the warming attributable to that doubling.  The shock size cancels in the
ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bayes import PosteriorDraws, draw_responses
from .errors import ValidationError
from .series import CO2_FORCING_COEF
from .svar import IrfResult, Ordering

DOUBLING_FORCING = CO2_FORCING_COEF * math.log(2.0)
MIN_DENOMINATOR = 1e-8
MAX_DISCARD_FRACTION = 0.10
LOW_PRECISION_DRAWS = 1000
PER_DRAW, MEDIAN_IRF = "per_draw", "median_irf"


def cumulative_response(irf, target: int, shock: int, h: int) -> float:
    """Sum of the responses of ``target`` to ``shock`` over horizons ``0..h``."""
    theta = irf.theta if isinstance(irf, IrfResult) else np.asarray(irf)
    if not 0 <= h < theta.shape[-3]:
        raise ValidationError(f"horizon {h} outside 0..{theta.shape[-3] - 1}")
    return theta[..., : h + 1, target, shock].sum(axis=-1)


@dataclass(frozen=True)
class TcrEstimate:
    h: int
    ordering: tuple
    trend: bool
    median: float
    lower: float | None
    upper: float | None
    draws: int
    discarded: int
    mode: str = PER_DRAW

    @property
    def unreliable(self) -> bool:
        return self.discarded > MAX_DISCARD_FRACTION * self.draws

    @property
    def low_precision(self) -> bool:
        return self.draws < LOW_PRECISION_DRAWS

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "ordering": list(self.ordering),
            "trend": self.trend,
            "median": self.median,
            "lower": self.lower,
            "upper": self.upper,
            "draws": self.draws,
            "discarded": self.discarded,
            "mode": self.mode,
            "unreliable": self.unreliable,
            "low_precision": self.low_precision,
        }


def tcr_from_responses(theta, h: int, forcing: int = 0, temperature: int = 1):
    """Per-draw TCR and a mask of draws kept (forcing total away from zero)."""
    xi_rf = cumulative_response(theta, forcing, forcing, h)
    xi_t = cumulative_response(theta, temperature, forcing, h)
    keep = np.abs(xi_rf) >= MIN_DENOMINATOR
    tcr = np.full(np.shape(xi_rf), np.nan)
    np.divide(xi_t * DOUBLING_FORCING, xi_rf, out=tcr, where=keep)
    return tcr, keep


def tcr_at(draws: PosteriorDraws, ordering: Ordering, h: int, mode: str = PER_DRAW,
           forcing: int = 0, temperature: int = 1, band: float = 0.68) -> TcrEstimate:
    """TCR at horizon ``h`` from a posterior with the forcing series as variable ``forcing``.

    ``mode="per_draw"`` takes the median of draw-wise ratios and reports a
    central ``band`` interval; ``mode="median_irf"`` forms the ratio of the
    pointwise median cumulative responses and has no interval.
    """
    if h < 0:
        raise ValidationError("horizon must be non-negative")
    theta = draw_responses(draws, ordering, h)
    if mode == PER_DRAW:
        tcr, keep = tcr_from_responses(theta, h, forcing, temperature)
        kept = tcr[keep]
        if kept.size == 0:
            raise ValidationError("every draw has a vanishing cumulative forcing response")
        lo, med, hi = np.quantile(kept, [(1 - band) / 2, 0.5, (1 + band) / 2])
        return TcrEstimate(
            h, ordering.perm, draws.spec.trend, float(med), float(lo), float(hi),
            draws.count, int((~keep).sum()), mode,
        )
    if mode == MEDIAN_IRF:
        xi_rf = np.median(cumulative_response(theta, forcing, forcing, h))
        xi_t = np.median(cumulative_response(theta, temperature, forcing, h))
        if abs(xi_rf) < MIN_DENOMINATOR:
            raise ValidationError("median cumulative forcing response vanishes")
        return TcrEstimate(
            h, ordering.perm, draws.spec.trend, float(xi_t * DOUBLING_FORCING / xi_rf),
            None, None, draws.count, 0, mode,
        )
    raise ValidationError(f"unknown TCR mode {mode!r}")


def tcr_point(theta, h: int, forcing: int = 0, temperature: int = 1) -> float:
    """TCR from a single set of responses (for example an OLS fit)."""
    tcr, keep = tcr_from_responses(np.asarray(theta), h, forcing, temperature)
    if not keep:
        raise ValidationError("cumulative forcing response vanishes")
    return float(tcr)
