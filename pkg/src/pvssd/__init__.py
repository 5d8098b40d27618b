"""Bayesian sample-size determination from the posterior variance.

Two criteria are provided for conjugate models: the average posterior
variance criterion (APVC) and its variation-aware extension (VPVC), which
adds ``k`` prior-predictive standard deviations of the posterior variance.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticSummary,
    Region,
    ThresholdReport,
    asymptotic_sample_size,
    gamma_coefficient,
    k_star,
    k_star_upper_bound,
    prior_region,
)
from .errors import (
    BudgetExceededError,
    DataFormatError,
    DegeneratePriorError,
    DomainError,
    InfeasibleMomentsError,
    InsufficientDataError,
    InvalidInputError,
    SSDError,
)
from .evaluation import (
    Axis,
    DataSource,
    EvaluationReport,
    GridSweep,
    coverage_probability,
    epsilon_sweep,
    exceedance_curve,
    success_rate,
)
from .ingest import Dataset, empirical_truth, load_csv, make_surrogate, write_csv
from .models import (
    BernoulliTruth,
    BetaBernoulli,
    NormalNIG,
    NormalTruth,
    PoissonGamma,
    PoissonTruth,
    fisher_inverse,
    hyper_from_marginal_moments,
    posterior_variance,
)
from .moments import MomentPair, criterion_lhs, expected_posterior_variance, moment_pair, sd_posterior_variance
from .ssd import CriterionSpec, SsdResult, apvc_sample_size, vpvc_sample_size
