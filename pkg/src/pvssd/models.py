"""Conjugate families: priors, posterior variance of the parameter of interest,
prior-predictive and sampling draws, and inverse Fisher information.

Three families are supported:

- ``PoissonGamma``: Poisson counts with a Gamma(shape ``alpha``, rate ``beta``)
  prior on the mean.
- ``NormalNIG``: normal data with a normal-inverse-gamma prior
  ``N(mu | mu0, lambda * sigma2) * IG(sigma2 | alpha, beta)``; the mean is the
  parameter of interest and ``sigma2`` a nuisance parameter.
- ``BetaBernoulli``: binary data with a Beta(``a``, ``b``) prior.

Every model reduces a dataset to sufficient statistics, and all vectorised
routines work on arrays of those statistics so that Monte-Carlo code never has
to materialise full datasets when the sampling law is parametric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, InfeasibleMomentsError, InvalidInputError

FAMILIES = ("poisson", "normal", "bernoulli")


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def _integral(values: np.ndarray, family: str) -> np.ndarray:
    if values.size and not np.all(np.isfinite(values)):
        raise InvalidInputError(f"{family} data must be finite")
    if values.size and not np.all(values == np.round(values)):
        bad = values[values != np.round(values)][0]
        raise InvalidInputError(f"{family} data must be integers, got {bad!r}")
    return values.astype(np.int64)


# ---------------------------------------------------------------------------
# true parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoissonTruth:
    theta: float

    family = "poisson"

    def __post_init__(self):
        _positive("theta", self.theta)

    @property
    def inv_fisher(self) -> float:
        return self.theta


@dataclass(frozen=True)
class NormalTruth:
    mu: float
    sigma2: float

    family = "normal"

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}")
        _positive("sigma2", self.sigma2)

    @property
    def inv_fisher(self) -> float:
        return self.sigma2


@dataclass(frozen=True)
class BernoulliTruth:
    p: float

    family = "bernoulli"

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in the open interval (0, 1), got {self.p!r}")

    @property
    def inv_fisher(self) -> float:
        return self.p * (1.0 - self.p)


TrueParameter = Union[PoissonTruth, NormalTruth, BernoulliTruth]


def fisher_inverse(family: str, theta) -> float:
    """Inverse of the Fisher information entry of the parameter of interest
    for a single observation.

    ``theta`` is the Poisson mean, the Bernoulli probability, or for the
    normal family either ``sigma2`` or a ``(mu, sigma2)`` pair. The (mu, mu)
    entry of the normal information matrix is ``1 / sigma2``.
    """
    if family == "poisson":
        return PoissonTruth(float(theta)).inv_fisher
    if family == "normal":
        if isinstance(theta, (tuple, list)):
            return NormalTruth(float(theta[0]), float(theta[1])).inv_fisher
        return NormalTruth(0.0, float(theta)).inv_fisher
    if family == "bernoulli":
        return BernoulliTruth(float(theta)).inv_fisher
    raise InvalidInputError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# conjugate models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoissonGamma:
    """Poisson sampling model with a Gamma(alpha, beta) prior, beta a rate."""

    alpha: float
    beta: float

    family = "poisson"

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("beta", self.beta)

    @classmethod
    def from_marginal_moments(cls, mean: float, sd: float) -> "PoissonGamma":
        if not (mean > 0 and math.isfinite(mean)):
            raise InfeasibleMomentsError(f"prior mean must be > 0, got {mean!r}")
        if not (sd > 0 and math.isfinite(sd)):
            raise InfeasibleMomentsError(f"prior sd must be > 0, got {sd!r}")
        return cls(alpha=(mean / sd) ** 2, beta=mean / sd**2)

    def marginal_moments(self) -> dict:
        return {"mean": self.alpha / self.beta, "sd": math.sqrt(self.alpha) / self.beta}

    # data -------------------------------------------------------------
    def validate(self, values) -> np.ndarray:
        x = _integral(np.asarray(values, dtype=float).ravel(), "poisson")
        if x.size and x.min() < 0:
            raise InvalidInputError(f"poisson data must be >= 0, got {x.min()}")
        return x

    def stats(self, values) -> tuple:
        x = self.validate(values)
        return (x.size, (float(x.sum()),))

    def posterior_variance_stats(self, n, s):
        return (self.alpha + s) / (n + self.beta) ** 2

    def posterior_variance(self, values) -> float:
        n, st = self.stats(values)
        return float(self.posterior_variance_stats(n, *st))

    # sampling ---------------------------------------------------------
    def sample_prior(self, rng: np.random.Generator, size: int) -> tuple:
        return (rng.gamma(self.alpha, 1.0 / self.beta, size),)

    def simulate_stats(self, n: int, params: tuple, rng: np.random.Generator) -> tuple:
        (theta,) = params
        return (rng.poisson(n * theta).astype(float),)

    def simulate_data(self, n: int, params: tuple, rng: np.random.Generator) -> np.ndarray:
        (theta,) = params
        return rng.poisson(theta[:, None], (theta.size, n))

    def truth_params(self, truth: PoissonTruth, size: int) -> tuple:
        _check_truth(self, truth)
        return (np.full(size, truth.theta),)

    def batch_stats(self, data: np.ndarray) -> tuple:
        return (data.sum(axis=1).astype(float),)

    # prior moments of the inverse Fisher information --------------------
    def inv_fisher_prior_moments(self) -> tuple[float, float]:
        return self.alpha / self.beta, self.alpha / self.beta**2

    def inv_fisher_at(self, truth: PoissonTruth) -> float:
        _check_truth(self, truth)
        return truth.inv_fisher


@dataclass(frozen=True)
class NormalNIG:
    """Normal data with a normal-inverse-gamma prior on (mu, sigma2).

    ``lam`` scales the conditional prior variance of ``mu``; ``alpha > 2`` is
    required so that the spread of the posterior variance is finite.
    """

    mu0: float
    lam: float
    alpha: float
    beta: float

    family = "normal"

    def __post_init__(self):
        if not math.isfinite(self.mu0):
            raise DomainError(f"mu0 must be finite, got {self.mu0!r}")
        _positive("lambda", self.lam)
        _positive("beta", self.beta)
        if not (math.isfinite(self.alpha) and self.alpha > 2):
            raise DomainError(f"alpha must be > 2, got {self.alpha!r}")

    @classmethod
    def from_marginal_moments(
        cls, mean_s2: float, sd_s2: float, sd_mu: float, mean_mu: float = 0.0
    ) -> "NormalNIG":
        for name, v in (("mean_s2", mean_s2), ("sd_s2", sd_s2), ("sd_mu", sd_mu)):
            if not (v > 0 and math.isfinite(v)):
                raise InfeasibleMomentsError(f"{name} must be > 0, got {v!r}")
        alpha = 2.0 + (mean_s2 / sd_s2) ** 2
        if not alpha > 2:
            raise InfeasibleMomentsError(
                f"implied alpha = {alpha!r} violates alpha > 2 (sd_s2 too large for mean_s2)"
            )
        beta = mean_s2 * (alpha - 1.0)
        return cls(mu0=float(mean_mu), lam=sd_mu**2 / mean_s2, alpha=alpha, beta=beta)

    def marginal_moments(self) -> dict:
        mean_s2 = self.beta / (self.alpha - 1.0)
        return {
            "mean_mu": self.mu0,
            "sd_mu": math.sqrt(self.lam * mean_s2),
            "mean_s2": mean_s2,
            "sd_s2": mean_s2 / math.sqrt(self.alpha - 2.0),
        }

    def validate(self, values) -> np.ndarray:
        x = np.asarray(values, dtype=float).ravel()
        if x.size and not np.all(np.isfinite(x)):
            raise InvalidInputError("normal data must be finite")
        return x

    def stats(self, values) -> tuple:
        x = self.validate(values)
        if x.size == 0:
            return (0, (0.0, 0.0))
        xbar = float(x.mean())
        return (x.size, (xbar, float(((x - xbar) ** 2).sum())))

    def posterior_variance_stats(self, n, xbar, ss):
        n_lam = n + 1.0 / self.lam
        shrink = np.divide(n, self.lam * n_lam)
        num = 2.0 * self.beta + ss + shrink * (xbar - self.mu0) ** 2
        return num / (n_lam * (n + 2.0 * self.alpha - 2.0))

    def posterior_variance(self, values) -> float:
        n, st = self.stats(values)
        return float(self.posterior_variance_stats(n, *st))

    def sample_prior(self, rng: np.random.Generator, size: int) -> tuple:
        sigma2 = self.beta / rng.gamma(self.alpha, 1.0, size)
        mu = rng.normal(self.mu0, np.sqrt(self.lam * sigma2))
        return (mu, sigma2)

    def simulate_stats(self, n: int, params: tuple, rng: np.random.Generator) -> tuple:
        mu, sigma2 = params
        xbar = rng.normal(mu, np.sqrt(sigma2 / n))
        ss = sigma2 * rng.chisquare(n - 1, mu.size) if n > 1 else np.zeros(mu.size)
        return (xbar, ss)

    def simulate_data(self, n: int, params: tuple, rng: np.random.Generator) -> np.ndarray:
        mu, sigma2 = params
        return rng.normal(mu[:, None], np.sqrt(sigma2)[:, None], (mu.size, n))

    def truth_params(self, truth: NormalTruth, size: int) -> tuple:
        _check_truth(self, truth)
        return (np.full(size, truth.mu), np.full(size, truth.sigma2))

    def batch_stats(self, data: np.ndarray) -> tuple:
        xbar = data.mean(axis=1)
        return (xbar, ((data - xbar[:, None]) ** 2).sum(axis=1))

    def inv_fisher_prior_moments(self) -> tuple[float, float]:
        am1 = self.alpha - 1.0
        mean = self.beta / am1
        return mean, mean**2 / (self.alpha - 2.0)

    def inv_fisher_at(self, truth: NormalTruth) -> float:
        _check_truth(self, truth)
        return truth.inv_fisher


@dataclass(frozen=True)
class BetaBernoulli:
    """Bernoulli data with a Beta(a, b) prior on the success probability."""

    a: float
    b: float

    family = "bernoulli"

    def __post_init__(self):
        _positive("a", self.a)
        _positive("b", self.b)

    @classmethod
    def from_marginal_moments(cls, mean: float, sd: float) -> "BetaBernoulli":
        if not (0 < mean < 1):
            raise InfeasibleMomentsError(f"prior mean must lie in (0, 1), got {mean!r}")
        if not (sd > 0 and math.isfinite(sd)):
            raise InfeasibleMomentsError(f"prior sd must be > 0, got {sd!r}")
        bound = mean * (1.0 - mean)
        if not sd**2 < bound:
            raise InfeasibleMomentsError(
                f"sd^2 = {sd**2:.6g} must be < mean*(1-mean) = {bound:.6g} for a Beta prior"
            )
        total = bound / sd**2 - 1.0
        return cls(a=mean * total, b=(1.0 - mean) * total)

    def marginal_moments(self) -> dict:
        t = self.a + self.b
        return {"mean": self.a / t, "sd": math.sqrt(self.a * self.b / (t * t * (t + 1.0)))}

    def validate(self, values) -> np.ndarray:
        x = _integral(np.asarray(values, dtype=float).ravel(), "bernoulli")
        if x.size and not np.all((x == 0) | (x == 1)):
            raise InvalidInputError("bernoulli data must be 0 or 1")
        return x

    def stats(self, values) -> tuple:
        x = self.validate(values)
        return (x.size, (float(x.sum()),))

    def posterior_variance_stats(self, n, s):
        a_post = self.a + s
        b_post = self.b + n - s
        t = self.a + self.b + n
        return a_post * b_post / (t * t * (t + 1.0))

    def posterior_variance(self, values) -> float:
        n, st = self.stats(values)
        return float(self.posterior_variance_stats(n, *st))

    def sample_prior(self, rng: np.random.Generator, size: int) -> tuple:
        return (rng.beta(self.a, self.b, size),)

    def simulate_stats(self, n: int, params: tuple, rng: np.random.Generator) -> tuple:
        (p,) = params
        return (rng.binomial(n, p).astype(float),)

    def simulate_data(self, n: int, params: tuple, rng: np.random.Generator) -> np.ndarray:
        (p,) = params
        return (rng.random((p.size, n)) < p[:, None]).astype(np.int64)

    def truth_params(self, truth: BernoulliTruth, size: int) -> tuple:
        _check_truth(self, truth)
        return (np.full(size, truth.p),)

    def batch_stats(self, data: np.ndarray) -> tuple:
        return (data.sum(axis=1).astype(float),)

    def inv_fisher_prior_moments(self) -> tuple[float, float]:
        m1, m2, m3, m4 = beta_raw_moments(self.a, self.b, 4)
        mean = m1 - m2
        second = m2 - 2.0 * m3 + m4
        return mean, second - mean**2

    def inv_fisher_at(self, truth: BernoulliTruth) -> float:
        _check_truth(self, truth)
        return truth.inv_fisher


ConjugateModel = Union[PoissonGamma, NormalNIG, BetaBernoulli]


def beta_raw_moments(a: float, b: float, order: int) -> list[float]:
    """``E[p^m]`` for ``m = 1..order`` under Beta(a, b)."""
    out, acc = [], 1.0
    for i in range(order):
        acc *= (a + i) / (a + b + i)
        out.append(acc)
    return out


def _check_truth(model, truth) -> None:
    if getattr(truth, "family", None) != model.family:
        raise InvalidInputError(
            f"truth of family {getattr(truth, 'family', type(truth).__name__)!r} "
            f"does not match model family {model.family!r}"
        )


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------


def posterior_variance(model: ConjugateModel, data: Sequence[float]) -> float:
    """Posterior variance of the parameter of interest given ``data``."""
    return model.posterior_variance(data)


def prior_predictive_sample(model: ConjugateModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """One dataset of size ``n`` from the prior predictive: draw the
    parameter from the prior, then ``n`` i.i.d. observations given it."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    params = model.sample_prior(rng, 1)
    return model.simulate_data(n, params, rng)[0]


def sampling_draw(model: ConjugateModel, truth: TrueParameter, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. observations at a fixed true parameter."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    return model.simulate_data(n, model.truth_params(truth, 1), rng)[0]


def hyper_from_marginal_moments(family: str, **moments) -> ConjugateModel:
    """Build a model from marginal prior moments.

    Keywords: ``mean``/``sd`` for poisson and bernoulli; ``mean_s2``,
    ``sd_s2``, ``sd_mu`` and optional ``mean_mu`` for normal.
    """
    if family == "poisson":
        return PoissonGamma.from_marginal_moments(**moments)
    if family == "normal":
        return NormalNIG.from_marginal_moments(**moments)
    if family == "bernoulli":
        return BetaBernoulli.from_marginal_moments(**moments)
    raise InvalidInputError(f"unknown family {family!r}")


def make_truth(family: str, *values: float) -> TrueParameter:
    if family == "poisson":
        return PoissonTruth(*values)
    if family == "normal":
        return NormalTruth(*values)
    if family == "bernoulli":
        return BernoulliTruth(*values)
    raise InvalidInputError(f"unknown family {family!r}")
