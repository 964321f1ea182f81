"""Information flows versus structural VARs for bivariate climate time series."""

__version__ = "0.1.0"

from .errors import (
    DataError,
    FactorizationError,
    IfvarError,
    InsufficientDataError,
    LowDrawCountWarning,
    NonStationaryError,
    NumericalError,
    SingularityError,
    ValidationError,
)
from .series import CsvSchema, PairedSample, TimeSeries, align_pair, first_difference, load_csv, ppm_to_rf
from .liang import IfResult, MomentSet, info_flow, normalized_info_flow, pair_info_flow, sample_moments
from .var import (
    VarFit,
    VarSpec,
    bic_values,
    fit_ols,
    residual_corr_test,
    select_lags_bic,
    stationary_autocov,
)
from .svar import FevdResult, IrfResult, Ordering, StructuralFactor, cholesky_identify, fevd, irf
from .bayes import (
    MinnesotaPrior,
    PosteriorDraws,
    fit_bayes,
    log_marginal_likelihood,
    optimize_hyperparameters,
    posterior_irf_bands,
)
from .sim import DgpSpec, SweepResult, analytic_moments, build_b, classify, simulate_path, sweep
from .tcr import TcrEstimate, cumulative_response, tcr_at
