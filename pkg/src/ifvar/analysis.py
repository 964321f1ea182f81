"""Per-pair causality summaries: information flows next to VAR-based FEVD shares.

Each forcing ``i`` is paired with temperature.  Flows use the first-order
estimator; the FEVD columns come from a VAR at the BIC lag order and at one
lag, under both Cholesky orderings.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .liang import pair_info_flow
from .series import PairedSample
from .svar import Ordering, cholesky_identify, fevd
from .var import DEFAULT_P_MAX, VarSpec, fit_ols, residual_corr_test, select_lags_bic

FORCING, TEMP = 0, 1
FORCING_FIRST = Ordering((FORCING, TEMP))
TEMP_FIRST = Ordering((TEMP, FORCING))
DEFAULT_FEVD_HORIZON = 15


@dataclass(frozen=True)
class VarRow:
    """VAR-based columns for one lag order; shares are in percent."""

    lags: int
    bic_choice: bool
    rho_u: float
    p_value: float
    stars: str
    fevd_i_to_g_ifirst: float
    fevd_g_to_i_ifirst: float
    fevd_i_to_g_gfirst: float
    fevd_g_to_i_gfirst: float


@dataclass(frozen=True)
class PairReport:
    pair: str
    start: int
    end: int
    correlation: float
    nif_i_to_g: float  # normalized flow x 100
    nif_g_to_i: float
    if_i_to_g: float  # raw flow x 100
    if_g_to_i: float
    rows: tuple

    def records(self) -> list[dict]:
        """Flat rows, one per lag order, with the dominant direction of each measure."""
        base = {k: v for k, v in asdict(self).items() if k != "rows"}
        base["nif_dominant"] = _dominant(self.nif_i_to_g, self.nif_g_to_i)
        out = []
        for row in self.rows:
            rec = dict(base, **asdict(row))
            rec["fevd_dominant_ifirst"] = _dominant(row.fevd_i_to_g_ifirst, row.fevd_g_to_i_ifirst)
            rec["fevd_dominant_gfirst"] = _dominant(row.fevd_i_to_g_gfirst, row.fevd_g_to_i_gfirst)
            out.append(rec)
        return out


def _dominant(i_to_g: float, g_to_i: float) -> str:
    a, b = abs(i_to_g), abs(g_to_i)
    if a == b:
        return "tie"
    return "i_to_gmta" if a > b else "gmta_to_i"


def var_row(pair: PairedSample, p: int, h: int, bic_choice: bool = False,
            trend: bool = False) -> VarRow:
    fit = fit_ols(pair, VarSpec(p=p, trend=trend))
    test = residual_corr_test(fit)
    shares = {}
    for tag, ordering in (("i", FORCING_FIRST), ("g", TEMP_FIRST)):
        dec = fevd(fit, cholesky_identify(fit.sigma_u, ordering), h)
        shares[tag] = (100 * dec.share(TEMP, FORCING), 100 * dec.share(FORCING, TEMP))
    return VarRow(
        lags=p,
        bic_choice=bic_choice,
        rho_u=test.rho_u,
        p_value=test.p_value,
        stars=test.stars,
        fevd_i_to_g_ifirst=shares["i"][0],
        fevd_g_to_i_ifirst=shares["i"][1],
        fevd_i_to_g_gfirst=shares["g"][0],
        fevd_g_to_i_gfirst=shares["g"][1],
    )


def analyze_pair(pair: PairedSample, h: int = DEFAULT_FEVD_HORIZON,
                 p_max: int = DEFAULT_P_MAX, lags: int | None = None,
                 trend: bool = False) -> PairReport:
    """Flows plus VAR rows at the chosen lag order (BIC unless ``lags`` is given) and at one lag."""
    flows = pair_info_flow(pair)
    p_star = select_lags_bic(pair, p_max, trend) if lags is None else lags
    rows = [var_row(pair, p_star, h, bic_choice=lags is None, trend=trend)]
    rows.append(var_row(pair, 1, h, trend=trend))
    return PairReport(
        pair=pair.x.name,
        start=int(pair.years[0]),
        end=int(pair.years[-1]),
        correlation=float(np.corrcoef(pair.matrix(), rowvar=False)[0, 1]),
        nif_i_to_g=100 * flows.tau_i_to_j,
        nif_g_to_i=100 * flows.tau_j_to_i,
        if_i_to_g=100 * flows.t_i_to_j,
        if_g_to_i=100 * flows.t_j_to_i,
        rows=tuple(rows),
    )
