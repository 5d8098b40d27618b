"""Small-epsilon behaviour: coefficient of variation of the asymptotic posterior
variance, asymptotic VPVC sample size, and the phase-transition threshold k*.

All quantities are driven by the first two prior moments of the inverse
Fisher information of the parameter of interest, which each model exposes via
``inv_fisher_prior_moments``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegeneratePriorError, DomainError
from .models import BetaBernoulli, NormalNIG, PoissonGamma, TrueParameter


@dataclass(frozen=True)
class AsymptoticSummary:
    gamma: float
    e_pi_inv_fisher: float
    s_infinity: float
    n_asymptotic: float
    epsilon: float
    k: float


@dataclass(frozen=True)
class ThresholdReport:
    k_star: float
    rho: float
    numerator: float
    denominator: float
    inv_fisher_true: float


def _prior_moments(model) -> tuple[float, float]:
    mean, var = model.inv_fisher_prior_moments()
    if not (var > 0 and math.isfinite(var)):
        raise DegeneratePriorError(f"prior variance of the inverse Fisher information is {var!r}")
    return mean, var


def gamma_coefficient(model) -> float:
    """sd / mean of the inverse Fisher information under the prior."""
    mean, var = _prior_moments(model)
    return math.sqrt(var) / mean


def asymptotic_sample_size(model, epsilon: float, k: float) -> AsymptoticSummary:
    """``eps^-2 * (1 + k*gamma) * E_prior[I^-1]``, the small-epsilon VPVC size."""
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise DomainError(f"epsilon must be > 0, got {epsilon!r}")
    if not (k >= 0 and math.isfinite(k)):
        raise DomainError(f"k must be >= 0, got {k!r}")
    mean, var = model.inv_fisher_prior_moments()
    gamma = math.sqrt(var) / mean if var > 0 else 0.0
    s_inf = (1.0 + k * gamma) * mean
    return AsymptoticSummary(
        gamma=gamma,
        e_pi_inv_fisher=mean,
        s_infinity=s_inf,
        n_asymptotic=s_inf / epsilon**2,
        epsilon=epsilon,
        k=k,
    )


def k_star(model, truth: TrueParameter) -> ThresholdReport:
    mean, var = _prior_moments(model)
    inv_true = model.inv_fisher_at(truth)
    numerator = max(inv_true - mean, 0.0)
    denominator = math.sqrt(var)
    return ThresholdReport(
        k_star=numerator / denominator,
        rho=inv_true / mean - 1.0,
        numerator=numerator,
        denominator=denominator,
        inv_fisher_true=inv_true,
    )


@dataclass(frozen=True)
class Region:
    """Interval for the parameter that drives the inverse Fisher information
    (theta, sigma2 or p). A bound equal to the domain boundary is treated as
    open."""

    lo: float
    hi: float


def prior_region(model, width: float = 1.0) -> Region:
    """Prior marginal mean +- ``width`` sd, intersected with the domain."""
    mm = model.marginal_moments()
    if isinstance(model, NormalNIG):
        mean, sd = mm["mean_s2"], mm["sd_s2"]
    else:
        mean, sd = mm["mean"], mm["sd"]
    lo, hi = mean - width * sd, mean + width * sd
    lo = max(lo, 0.0)
    if isinstance(model, BetaBernoulli):
        hi = min(hi, 1.0)
    return Region(lo, hi)


def k_star_upper_bound(model, region: Optional[Region] = None, width: float = 1.0) -> float:
    """Supremum of k* over ``region`` (default: prior mean +- ``width`` sd).

    k* grows with the inverse Fisher information at the truth, so the
    supremum sits where that quantity is largest on the region.
    """
    if region is None:
        region = prior_region(model, width)
    lo, hi = region.lo, region.hi
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"region [{lo}, {hi}] is empty or not finite")
    if lo < 0:
        raise DomainError(f"region lower bound {lo} lies outside the parameter domain")
    mean, var = _prior_moments(model)
    if isinstance(model, (PoissonGamma, NormalNIG)):
        inv_max = hi
    else:
        if hi > 1:
            raise DomainError(f"region upper bound {hi} lies outside (0, 1)")
        p = min(max(0.5, lo), hi)
        inv_max = p * (1.0 - p)
    return max(inv_max - mean, 0.0) / math.sqrt(var)
