import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvssd.errors import DomainError, InfeasibleMomentsError, InvalidInputError
from pvssd.models import (
    BernoulliTruth,
    BetaBernoulli,
    NormalNIG,
    NormalTruth,
    PoissonGamma,
    PoissonTruth,
    fisher_inverse,
    hyper_from_marginal_moments,
    posterior_variance,
    prior_predictive_sample,
    sampling_draw,
)

from oracles import quad_bernoulli, quad_normal, quad_poisson


class TestPosteriorVariance:
    def test_poisson_prior_only(self):
        assert posterior_variance(PoissonGamma(1, 1), []) == 1.0

    def test_poisson_single_observation(self):
        m = PoissonGamma(2, 1)
        assert posterior_variance(m, [3]) == pytest.approx(1.25, rel=1e-15)
        assert quad_poisson(2, 1, [3]) == pytest.approx(1.25, rel=1e-9)

    def test_normal_prior_only(self):
        m = NormalNIG(mu0=3.5, lam=1 / 3, alpha=6, beta=15)
        assert posterior_variance(m, []) == pytest.approx(1.0, rel=1e-15)
        assert quad_normal(3.5, 1 / 3, 6, 15, []) == pytest.approx(1.0, rel=1e-9)

    def test_normal_single_observation_has_no_spread_term(self):
        m = NormalNIG(0.0, 1.0, 3.0, 2.0)
        # n_lam = 2, n + 2a - 2 = 5, shrink = 1/2
        assert posterior_variance(m, [2.0]) == pytest.approx((4.0 + 0.5 * 4.0) / 10.0, rel=1e-15)

    def test_bernoulli(self):
        assert posterior_variance(BetaBernoulli(1, 1), [1, 0]) == pytest.approx(0.05, rel=1e-15)

    @pytest.mark.parametrize("seed", range(8))
    def test_poisson_matches_quadrature(self, seed):
        rng = np.random.default_rng(seed)
        alpha, beta = rng.uniform(0.3, 8), rng.uniform(0.2, 5)
        data = rng.poisson(rng.uniform(0.5, 5), rng.integers(0, 11))
        got = PoissonGamma(alpha, beta).posterior_variance(data)
        assert got == pytest.approx(quad_poisson(alpha, beta, data), rel=1e-6)

    @pytest.mark.parametrize("seed", range(8))
    def test_bernoulli_matches_quadrature(self, seed):
        rng = np.random.default_rng(100 + seed)
        a, b = rng.uniform(0.3, 6, 2)
        data = (rng.random(rng.integers(0, 11)) < rng.random()).astype(int)
        got = BetaBernoulli(a, b).posterior_variance(data)
        assert got == pytest.approx(quad_bernoulli(a, b, data), rel=1e-6)

    @pytest.mark.parametrize("seed", range(6))
    def test_normal_matches_quadrature(self, seed):
        rng = np.random.default_rng(200 + seed)
        mu0, lam = rng.normal(0, 3), rng.uniform(0.2, 3)
        alpha, beta = rng.uniform(3, 8), rng.uniform(0.5, 10)
        data = rng.normal(rng.normal(mu0, 2), rng.uniform(0.5, 3), rng.integers(0, 11))
        got = NormalNIG(mu0, lam, alpha, beta).posterior_variance(data)
        assert got == pytest.approx(quad_normal(mu0, lam, alpha, beta, data), rel=1e-6)

    @given(st.lists(st.integers(0, 20), max_size=12), st.randoms(use_true_random=False))
    def test_permutation_invariance(self, data, rnd):
        shuffled = list(data)
        rnd.shuffle(shuffled)
        for m in (PoissonGamma(2.0, 0.7), NormalNIG(1.0, 0.5, 3.5, 2.0)):
            assert m.posterior_variance(shuffled) == pytest.approx(m.posterior_variance(data), rel=1e-12)
        bits = [x % 2 for x in data]
        rnd.shuffle(shuffled)
        m = BetaBernoulli(0.7, 1.3)
        assert m.posterior_variance([x % 2 for x in shuffled]) == pytest.approx(m.posterior_variance(bits), rel=1e-12)

    def test_depends_only_on_sufficient_statistic(self):
        m = PoissonGamma(3.0, 1.5)
        assert m.posterior_variance([0, 6, 0]) == m.posterior_variance([2, 2, 2])
        b = BetaBernoulli(2.0, 5.0)
        assert b.posterior_variance([1, 0, 0, 1]) == b.posterior_variance([0, 1, 1, 0])

    @given(
        st.lists(st.floats(-50, 50), min_size=1, max_size=10),
        st.floats(-1e3, 1e3),
    )
    def test_normal_joint_shift_invariance(self, data, c):
        m = NormalNIG(2.0, 0.8, 4.0, 3.0)
        shifted = NormalNIG(2.0 + c, 0.8, 4.0, 3.0)
        got = shifted.posterior_variance(np.asarray(data) + c)
        assert got == pytest.approx(m.posterior_variance(data), rel=1e-8)

    @pytest.mark.parametrize(
        "model, data",
        [
            (PoissonGamma(1, 1), [1, -1]),
            (PoissonGamma(1, 1), [1.5]),
            (BetaBernoulli(1, 1), [0, 2]),
            (BetaBernoulli(1, 1), [0.5]),
            (NormalNIG(0, 1, 3, 1), [1.0, float("nan")]),
        ],
    )
    def test_domain_violations(self, model, data):
        with pytest.raises(InvalidInputError):
            model.posterior_variance(data)


class TestConstruction:
    @pytest.mark.parametrize(
        "build",
        [
            lambda: PoissonGamma(0, 1),
            lambda: PoissonGamma(1, -1),
            lambda: NormalNIG(0, 1, 2.0, 1),
            lambda: NormalNIG(0, 0, 3, 1),
            lambda: BetaBernoulli(0, 1),
            lambda: PoissonTruth(0.0),
            lambda: NormalTruth(1.0, 0.0),
            lambda: BernoulliTruth(0.0),
            lambda: BernoulliTruth(1.0),
        ],
    )
    def test_boundary_values_rejected(self, build):
        with pytest.raises(DomainError):
            build()

    def test_poisson_from_marginal(self):
        m = hyper_from_marginal_moments("poisson", mean=2.5, sd=1.0)
        assert (m.alpha, m.beta) == pytest.approx((6.25, 2.5), rel=1e-15)

    def test_normal_from_marginal(self):
        m = hyper_from_marginal_moments("normal", mean_s2=3.0, sd_s2=1.5, sd_mu=1.0, mean_mu=3.5)
        assert m.alpha == pytest.approx(6.0, rel=1e-15)
        assert m.beta == pytest.approx(15.0, rel=1e-15)
        assert m.lam == pytest.approx(1 / 3, rel=1e-15)
        assert m.mu0 == 3.5

    def test_bernoulli_from_marginal(self):
        m = hyper_from_marginal_moments("bernoulli", mean=0.5, sd=math.sqrt(1 / 12))
        assert (m.a, m.b) == pytest.approx((1.0, 1.0), rel=1e-12)

    @pytest.mark.parametrize(
        "family, kw",
        [
            ("poisson", dict(mean=2.5, sd=0.0)),
            ("poisson", dict(mean=-1.0, sd=1.0)),
            ("bernoulli", dict(mean=0.5, sd=0.5)),
            ("bernoulli", dict(mean=1.2, sd=0.1)),
            ("normal", dict(mean_s2=3.0, sd_s2=0.0, sd_mu=1.0)),
        ],
    )
    def test_infeasible_moments(self, family, kw):
        with pytest.raises(InfeasibleMomentsError):
            hyper_from_marginal_moments(family, **kw)

    @settings(max_examples=200)
    @given(st.floats(0.01, 100), st.floats(0.01, 100))
    def test_poisson_round_trip(self, mean, sd):
        mm = PoissonGamma.from_marginal_moments(mean, sd).marginal_moments()
        assert mm["mean"] == pytest.approx(mean, rel=1e-12)
        assert mm["sd"] == pytest.approx(sd, rel=1e-12)

    @settings(max_examples=200)
    @given(st.floats(0.01, 100), st.floats(0.01, 10), st.floats(0.01, 10), st.floats(-10, 10))
    def test_normal_round_trip(self, mean_s2, cv, sd_mu, mean_mu):
        # alpha - 2 = (mean/sd)^2 cancels against 2 when cv is huge; cap cv at 10
        sd_s2 = cv * mean_s2
        mm = NormalNIG.from_marginal_moments(mean_s2, sd_s2, sd_mu, mean_mu).marginal_moments()
        assert mm["mean_s2"] == pytest.approx(mean_s2, rel=1e-12)
        assert mm["sd_s2"] == pytest.approx(sd_s2, rel=1e-12)
        assert mm["sd_mu"] == pytest.approx(sd_mu, rel=1e-12)
        assert mm["mean_mu"] == mean_mu

    @settings(max_examples=200)
    @given(st.floats(0.02, 0.98), st.floats(0.01, 0.99))
    def test_bernoulli_round_trip(self, mean, frac):
        sd = frac * math.sqrt(mean * (1 - mean))
        mm = BetaBernoulli.from_marginal_moments(mean, sd).marginal_moments()
        assert mm["mean"] == pytest.approx(mean, rel=1e-12)
        assert mm["sd"] == pytest.approx(sd, rel=1e-12)


class TestSampling:
    def test_poisson_prior_predictive_mean(self):
        rng = np.random.default_rng(1)
        m = PoissonGamma(6.25, 2.5)
        x = np.array([prior_predictive_sample(m, 1, rng)[0] for _ in range(20000)])
        # prior-predictive sd of x1: sqrt(mean + var_theta) = sqrt(3.5)
        assert abs(x.mean() - 2.5) < 4 * math.sqrt(3.5 / 20000)

    def test_normal_prior_predictive_mean(self):
        rng = np.random.default_rng(2)
        m = NormalNIG(-1.3, 0.5, 6.0, 15.0)
        x = m.simulate_data(1, m.sample_prior(rng, 50000), rng)[:, 0]
        sd = math.sqrt((1 + 0.5) * 15.0 / 5.0)
        assert abs(x.mean() + 1.3) < 4 * sd / math.sqrt(50000)

    def test_bernoulli_prior_predictive_symmetry(self):
        rng = np.random.default_rng(3)
        m = BetaBernoulli(1, 1)
        x = m.simulate_data(1, m.sample_prior(rng, 40000), rng)[:, 0]
        assert abs(x.mean() - 0.5) < 4 * 0.5 / math.sqrt(40000)

    def test_sampling_draw_poisson(self):
        x = sampling_draw(PoissonGamma(1, 1), PoissonTruth(2.71), 50000, np.random.default_rng(4))
        assert abs(x.mean() - 2.71) < 4 * math.sqrt(2.71 / 50000)

    def test_sampling_draw_normal(self):
        x = sampling_draw(NormalNIG(3.5, 1 / 3, 6, 15), NormalTruth(4.17, 4.05), 50000, np.random.default_rng(5))
        assert abs(x.mean() - 4.17) < 4 * math.sqrt(4.05 / 50000)

    def test_degenerate_bernoulli_truth_rejected(self):
        with pytest.raises(DomainError):
            sampling_draw(BetaBernoulli(1, 1), BernoulliTruth(0.0), 10, np.random.default_rng(0))

    def test_family_mismatch(self):
        with pytest.raises(InvalidInputError):
            sampling_draw(BetaBernoulli(1, 1), PoissonTruth(1.0), 10, np.random.default_rng(0))

    def test_sufficient_statistic_simulation_matches_full_data(self):
        # same law whether we simulate sufficient statistics or whole datasets
        m = NormalNIG(0.0, 1.0, 5.0, 4.0)
        rng = np.random.default_rng(6)
        params = m.sample_prior(rng, 40000)
        a = m.posterior_variance_stats(7, *m.simulate_stats(7, params, rng))
        b = m.posterior_variance_stats(7, *m.batch_stats(m.simulate_data(7, params, rng)))
        se = math.sqrt(a.var() / a.size + b.var() / b.size)
        assert abs(a.mean() - b.mean()) < 4 * se


class TestFisher:
    def test_values(self):
        assert fisher_inverse("poisson", 2.71) == 2.71
        assert fisher_inverse("normal", 3.0) == 3.0
        assert fisher_inverse("normal", (5.0, 3.0)) == 3.0
        assert fisher_inverse("bernoulli", 0.5) == 0.25

    def test_poisson_matches_numerical_information(self):
        # negative expected second derivative of the log-likelihood, by finite differences
        theta, h = 2.71, 1e-4
        xs = np.arange(0, 60)
        from scipy.stats import poisson

        ll = lambda t: poisson.logpmf(xs, t)  # noqa: E731
        d2 = (ll(theta + h) - 2 * ll(theta) + ll(theta - h)) / h**2
        info = -np.dot(poisson.pmf(xs, theta), d2)
        assert 1 / info == pytest.approx(fisher_inverse("poisson", theta), rel=1e-5)

    @given(st.floats(0.001, 1000))
    def test_poisson_linear(self, t):
        assert fisher_inverse("poisson", 2 * t) == pytest.approx(2 * fisher_inverse("poisson", t))

    @given(st.floats(0.001, 0.499))
    def test_bernoulli_symmetric(self, p):
        assert fisher_inverse("bernoulli", p) == pytest.approx(fisher_inverse("bernoulli", 1 - p), rel=1e-12)

    @pytest.mark.parametrize("family, theta", [("poisson", 0.0), ("bernoulli", 1.0), ("normal", 0.0)])
    def test_boundary(self, family, theta):
        with pytest.raises(DomainError):
            fisher_inverse(family, theta)
