"""Prior-predictive mean and standard deviation of the posterior variance.

Poisson-Gamma and normal-inverse-gamma have closed forms. Beta-Bernoulli is
computed by exact summation over the Beta-Binomial law of the success count,
which is O(n) per call. ``mc_moment_oracle`` provides an independent
Monte-Carlo estimate with jackknife standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch

import numpy as np
from scipy.special import betaln, gammaln

from .errors import InvalidInputError
from .models import BetaBernoulli, NormalNIG, PoissonGamma


@dataclass(frozen=True)
class MomentPair:
    """Mean and sd of the posterior variance under the prior predictive."""

    mean_u2: float
    sd_u2: float
    n: int

    def __post_init__(self):
        if not self.mean_u2 > 0:
            raise InvalidInputError(f"mean_u2 must be > 0, got {self.mean_u2!r}")
        if not self.sd_u2 >= 0:
            raise InvalidInputError(f"sd_u2 must be >= 0, got {self.sd_u2!r}")

    def lhs(self, k: float) -> float:
        return self.mean_u2 + k * self.sd_u2


def _check_n(n) -> None:
    if np.any(np.asarray(n) < 1):
        raise InvalidInputError(f"n must be >= 1, got {n!r}")


# ---------------------------------------------------------------------------
# mean
# ---------------------------------------------------------------------------


@singledispatch
def expected_posterior_variance(model, n):
    """Prior-predictive mean of the posterior variance at sample size ``n``."""
    raise TypeError(f"unsupported model {type(model).__name__}")


@expected_posterior_variance.register
def _(model: PoissonGamma, n):
    _check_n(n)
    return (model.alpha / model.beta) / (np.asarray(n, dtype=float) + model.beta)


@expected_posterior_variance.register
def _(model: NormalNIG, n):
    _check_n(n)
    n_lam = np.asarray(n, dtype=float) + 1.0 / model.lam
    return model.beta / (n_lam * (model.alpha - 1.0))


@expected_posterior_variance.register
def _(model: BetaBernoulli, n):
    _check_n(n)
    if np.ndim(n):
        return np.array([_bernoulli_exact(model, int(m))[0] for m in np.ravel(n)]).reshape(np.shape(n))
    return _bernoulli_exact(model, int(n))[0]


# ---------------------------------------------------------------------------
# standard deviation
# ---------------------------------------------------------------------------


@singledispatch
def sd_posterior_variance(model, n):
    """Prior-predictive standard deviation of the posterior variance."""
    raise TypeError(f"unsupported model {type(model).__name__}")


@sd_posterior_variance.register
def _(model: PoissonGamma, n):
    _check_n(n)
    n = np.asarray(n, dtype=float)
    nb = n + model.beta
    # sqrt(n/(n+beta)) / (n+beta) keeps every factor O(1/n)
    return (np.sqrt(model.alpha) / model.beta) * np.sqrt(n / nb) / nb


@sd_posterior_variance.register
def _(model: NormalNIG, n):
    _check_n(n)
    n = np.asarray(n, dtype=float)
    mean = expected_posterior_variance(model, n)
    return mean / np.sqrt(model.alpha - 2.0) * np.sqrt(n / (n + 2.0 * model.alpha - 2.0))


@sd_posterior_variance.register
def _(model: BetaBernoulli, n):
    _check_n(n)
    if np.ndim(n):
        return np.array([_bernoulli_exact(model, int(m))[1] for m in np.ravel(n)]).reshape(np.shape(n))
    return _bernoulli_exact(model, int(n))[1]


def _bernoulli_exact(model: BetaBernoulli, n: int) -> tuple[float, float]:
    s = np.arange(n + 1, dtype=float)
    log_pmf = (
        gammaln(n + 1.0)
        - gammaln(s + 1.0)
        - gammaln(n - s + 1.0)
        + betaln(s + model.a, n - s + model.b)
        - betaln(model.a, model.b)
    )
    pmf = np.exp(log_pmf)
    pmf /= pmf.sum()
    u2 = model.posterior_variance_stats(n, s)
    mean = float(np.dot(pmf, u2))
    var = float(np.dot(pmf, (u2 - mean) ** 2))
    return mean, float(np.sqrt(var))


def moment_pair(model, n: int) -> MomentPair:
    if isinstance(model, BetaBernoulli):
        _check_n(n)
        mean, sd = _bernoulli_exact(model, int(n))
    else:
        mean = float(expected_posterior_variance(model, n))
        sd = float(sd_posterior_variance(model, n))
    return MomentPair(mean_u2=mean, sd_u2=sd, n=int(n))


def criterion_lhs(model, n, k: float):
    """``mean + k * sd`` of the posterior variance; vectorised over ``n``."""
    if isinstance(model, BetaBernoulli) and np.ndim(n) == 0:
        mean, sd = _bernoulli_exact(model, int(n))
        return mean + k * sd
    return expected_posterior_variance(model, n) + k * sd_posterior_variance(model, n)


# ---------------------------------------------------------------------------
# Monte-Carlo oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MCMoments:
    mean_u2: float
    sd_u2: float
    mean_se: float
    sd_se: float
    n: int
    replicates: int


def jackknife_sd(y: np.ndarray) -> tuple[float, float]:
    """Sample sd of ``y`` and its delete-one jackknife standard error."""
    y = np.asarray(y, dtype=float)
    m = y.size
    if m < 3:
        raise InvalidInputError("jackknife needs at least 3 points")
    d = y - y.mean()
    s1, s2 = d.sum(), np.dot(d, d)
    loo_mean = (s1 - d) / (m - 1)
    loo_var = (s2 - d * d - (m - 1) * loo_mean**2) / (m - 2)
    loo_sd = np.sqrt(np.maximum(loo_var, 0.0))
    se = np.sqrt((m - 1) / m * np.sum((loo_sd - loo_sd.mean()) ** 2))
    return float(np.sqrt(s2 / (m - 1))), float(se)


def mc_moment_oracle(
    model, n: int, replicates: int, rng: np.random.Generator, max_block: int = 2_000_000
) -> MCMoments:
    """Estimate the moments by drawing full datasets from the prior predictive.

    Datasets are generated observation by observation (not through sufficient
    statistics) so the estimate shares no code path with the closed forms
    beyond the posterior-variance formula itself.
    """
    if replicates < 100:
        raise InvalidInputError(f"replicates must be >= 100, got {replicates}")
    _check_n(n)
    rows = max(1, max_block // n)
    u2 = np.empty(replicates)
    for start in range(0, replicates, rows):
        size = min(rows, replicates - start)
        params = model.sample_prior(rng, size)
        data = model.simulate_data(n, params, rng)
        u2[start : start + size] = model.posterior_variance_stats(n, *model.batch_stats(data))
    sd, sd_se = jackknife_sd(u2)
    return MCMoments(
        mean_u2=float(u2.mean()),
        sd_u2=sd,
        mean_se=sd / np.sqrt(replicates),
        sd_se=sd_se,
        n=int(n),
        replicates=int(replicates),
    )
