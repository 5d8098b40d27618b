"""Smallest sample size satisfying the average (APVC) or variation (VPVC)
posterior variance criterion.

The VPVC left-hand side ``mean + k*sd`` is not monotone in ``n`` in general,
so the solver scans upward. The scan starts at the first ``n`` whose mean
alone drops below ``eps^2``: the mean is decreasing in ``n`` for every family
and bounds the left-hand side from below, so no smaller ``n`` can qualify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asymptotics import asymptotic_sample_size
from .errors import BudgetExceededError, DomainError
from .models import BetaBernoulli, NormalNIG, PoissonGamma
from .moments import criterion_lhs, expected_posterior_variance

MIN_CAP = 1_000_000
_BLOCK = 4096


@dataclass(frozen=True)
class CriterionSpec:
    epsilon: float
    k: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainError(f"epsilon must be finite and > 0, got {self.epsilon!r}")
        if not (math.isfinite(self.k) and self.k >= 0):
            raise DomainError(f"k must be finite and >= 0, got {self.k!r}")


@dataclass(frozen=True)
class SsdResult:
    n: int
    lhs_at_n: float
    lhs_at_n_minus_1: Optional[float]
    evaluations: int
    epsilon: float
    k: float


def search_cap(model, spec: CriterionSpec) -> int:
    est = asymptotic_sample_size(model, spec.epsilon, spec.k).n_asymptotic
    return max(MIN_CAP, 10 * math.ceil(est))


def _mean_lower_start(model, eps2: float, cap: int) -> int:
    """Smallest n >= 1 with mean(n) < eps2, found by bisection on the
    decreasing mean; ``cap + 1`` if none up to ``cap``."""
    mean = lambda m: float(expected_posterior_variance(model, m))  # noqa: E731
    if mean(1) < eps2:
        return 1
    if isinstance(model, BetaBernoulli):
        # exact summation is O(n); use the closed-form mean for the bracket
        t = model.a + model.b
        c = model.a * model.b / (t * (t + 1.0))
        mean = lambda m: c / (t + m)  # noqa: E731
    if mean(cap) >= eps2:
        return cap + 1
    lo, hi = 1, cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mean(mid) < eps2:
            hi = mid
        else:
            lo = mid
    if isinstance(model, BetaBernoulli):
        # summation and closed form may round differently at the boundary
        while hi > 1 and float(expected_posterior_variance(model, hi - 1)) < eps2:
            hi -= 1
    return hi


def vpvc_sample_size(model, spec: CriterionSpec, cap: Optional[int] = None) -> SsdResult:
    """Smallest ``n >= 1`` with ``mean_n + k*sd_n < eps^2`` (strict)."""
    eps2 = spec.epsilon**2
    cap = search_cap(model, spec) if cap is None else cap
    start = _mean_lower_start(model, eps2, cap)
    if start > cap:
        raise BudgetExceededError(cap, float(criterion_lhs(model, cap, spec.k)), eps2)

    evaluations = 0
    if isinstance(model, BetaBernoulli):
        for n in range(start, cap + 1):
            value = criterion_lhs(model, n, spec.k)
            evaluations += 1
            if value < eps2:
                return _result(model, spec, n, value, evaluations)
        raise BudgetExceededError(cap, float(value), eps2)

    lo = start
    while lo <= cap:
        ns = np.arange(lo, min(lo + _BLOCK, cap + 1))
        values = criterion_lhs(model, ns, spec.k)
        hits = np.flatnonzero(values < eps2)
        if hits.size:
            i = hits[0]
            evaluations += int(i) + 1
            return _result(model, spec, int(ns[i]), float(values[i]), evaluations)
        evaluations += ns.size
        lo = int(ns[-1]) + 1
    raise BudgetExceededError(cap, float(values[-1]), eps2)


def _result(model, spec, n, value, evaluations) -> SsdResult:
    prev = None if n == 1 else float(criterion_lhs(model, n - 1, spec.k))
    return SsdResult(
        n=int(n),
        lhs_at_n=float(value),
        lhs_at_n_minus_1=prev,
        evaluations=evaluations,
        epsilon=spec.epsilon,
        k=spec.k,
    )


def apvc_sample_size(model, epsilon: float, cap: Optional[int] = None) -> SsdResult:
    """Smallest ``n >= 1`` with ``mean_n < eps^2`` (the k = 0 criterion)."""
    return vpvc_sample_size(model, CriterionSpec(epsilon, 0.0), cap=cap)


def apvc_closed_form(model, epsilon: float) -> int:
    """Closed-form APVC size for Poisson-Gamma and normal-inverse-gamma:
    the smallest integer ``n >= 1`` strictly above the root of mean(n) = eps^2."""
    eps2 = epsilon**2
    if isinstance(model, PoissonGamma):
        root = (model.alpha / model.beta) / eps2 - model.beta
    elif isinstance(model, NormalNIG):
        root = model.beta / ((model.alpha - 1.0) * eps2) - 1.0 / model.lam
    else:
        raise TypeError(f"no closed form for {type(model).__name__}")
    return max(1, math.floor(root) + 1)
