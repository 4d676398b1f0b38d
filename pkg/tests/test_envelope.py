import math

import numpy as np
import pytest

from modelrisk.dist import AffineOf, StandardNormal, StudentT, TwoPoint
from modelrisk.envelope import (
    EnvelopePair,
    StopLossMaximal,
    chebyshev_markov_envelope,
    extremal_quantiles,
    kolmogorov_ball_envelope,
    levy_ball_envelope,
    mixture_class_envelope,
    step_envelope,
    stop_loss_extremals,
)
from modelrisk.errors import AlphaOutOfRange, DomainError, MomentError, NonInvertibleEnvelope
from modelrisk.riskmeasure import expected_shortfall

import oracles

N = StandardNormal()
T3 = StudentT(3.0, standardized=True)
X = np.linspace(-30, 30, 10_000)


def _envelopes():
    return {
        "cm": chebyshev_markov_envelope(),
        "kolmogorov-normal": kolmogorov_ball_envelope(N, 0.01),
        "kolmogorov-t3": kolmogorov_ball_envelope(T3, 0.05),
        "levy-normal": levy_ball_envelope(N, 0.01),
        "levy-t3": levy_ball_envelope(T3, 0.2),
        "mixture-normal": mixture_class_envelope(N, 0.1),
        "mixture-t3": mixture_class_envelope(T3, 0.3),
        "step": step_envelope(0.05),
    }


ENVELOPES = _envelopes()


class TestChebyshevMarkov:
    def test_values(self):
        e = chebyshev_markov_envelope()
        assert e.Fmax(-1.0) == 0.5
        assert e.Fmax(0.0) == 1.0 and e.Fmax(3.0) == 1.0
        assert e.Fmin(-3.0) == 0.0 and e.Fmin(0.0) == 0.0
        assert e.Fmin(1.0) == 0.5
        assert (e.low_limit, e.high_limit) == (0.0, 1.0)

    def test_extremal_quantiles_median(self):
        lo, hi = extremal_quantiles(chebyshev_markov_envelope(), 0.5)
        assert lo == pytest.approx(-1.0, abs=1e-15) and hi == pytest.approx(1.0, abs=1e-15)

    def test_extremal_quantiles_one_percent(self):
        lo, hi = extremal_quantiles(chebyshev_markov_envelope(), 0.01)
        assert lo == pytest.approx(-9.949874, abs=1e-6)
        assert hi == pytest.approx(0.100504, abs=1e-6)
        assert lo == pytest.approx(-math.sqrt(99.0), rel=1e-15)
        assert hi == pytest.approx(math.sqrt(1.0 / 99.0), rel=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.2])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(AlphaOutOfRange):
            extremal_quantiles(chebyshev_markov_envelope(), alpha)

    @pytest.mark.parametrize("d", [N, T3, TwoPoint(-3.0, 1.0 / 3.0, 0.1),
                                   AffineOf(StudentT(5.0), 0.0, math.sqrt(3.0 / 5.0))], ids=repr)
    def test_dominance_sandwich(self, d):
        e = chebyshev_markov_envelope()
        F = d.cdf(X)
        assert np.all(e.Fmin(X) <= F + 1e-15)
        assert np.all(F <= e.Fmax(X) + 1e-15)


class TestBalls:
    def test_kolmogorov_vanishing_radius(self):
        e = kolmogorov_ball_envelope(N, 1e-12)
        x = np.linspace(-5, 5, 101)
        assert np.allclose(e.Fmax(x), N.cdf(x), atol=2e-12)
        assert np.allclose(e.Fmin(x), N.cdf(x), atol=2e-12)

    def test_kolmogorov_inverse(self):
        lo, hi = extremal_quantiles(kolmogorov_ball_envelope(N, 0.005), 0.01)
        assert lo == pytest.approx(-2.575829, abs=1e-5)
        assert lo == pytest.approx(oracles.normal_quantile(0.005), abs=1e-12)
        assert hi == pytest.approx(oracles.normal_quantile(0.015), abs=1e-12)

    def test_kolmogorov_clamp(self):
        e = kolmogorov_ball_envelope(N, 0.05)
        x = X[N.cdf(X) <= 0.05]
        assert np.all(e.Fmin(x) == 0.0)
        assert np.all(e.Fmax(X[N.cdf(X) >= 0.95]) == 1.0)

    @pytest.mark.parametrize("alpha", [0.01, 0.05])
    def test_lemma_consistency(self, alpha):
        eps = 0.004
        lo, hi = extremal_quantiles(kolmogorov_ball_envelope(N, eps), alpha)
        assert lo == pytest.approx(oracles.normal_quantile(alpha - eps), abs=1e-8)
        assert hi == pytest.approx(oracles.normal_quantile(alpha + eps), abs=1e-8)

    def test_levy_vanishing_radius(self):
        e = levy_ball_envelope(N, 1e-12)
        x = np.linspace(-5, 5, 101)
        assert np.allclose(e.Fmax(x), N.cdf(x), atol=3e-12)
        assert np.allclose(e.Fmin(x), N.cdf(x), atol=3e-12)

    def test_levy_inverse(self):
        lo, hi = extremal_quantiles(levy_ball_envelope(N, 0.005), 0.01)
        assert lo == pytest.approx(-2.580829, abs=1e-5)
        assert lo == pytest.approx(oracles.normal_quantile(0.005) - 0.005, abs=1e-12)
        assert hi == pytest.approx(oracles.normal_quantile(0.015) + 0.005, abs=1e-12)

    def test_levy_upper_clamp_is_one(self):
        e = levy_ball_envelope(N, 0.1)
        assert e.Fmax(10.0) == 1.0
        assert np.all(e.Fmax(X) <= 1.0)

    @pytest.mark.parametrize("F0", [N, T3], ids=repr)
    def test_levy_contains_kolmogorov(self, F0):
        for eps in (0.001, 0.01, 0.1):
            k, lv = kolmogorov_ball_envelope(F0, eps), levy_ball_envelope(F0, eps)
            assert np.all(lv.Fmax(X) >= k.Fmax(X))
            assert np.all(lv.Fmin(X) <= k.Fmin(X))

    @pytest.mark.parametrize("make", [kolmogorov_ball_envelope, levy_ball_envelope])
    def test_radius_positive(self, make):
        with pytest.raises(DomainError):
            make(N, 0.0)
        with pytest.raises(DomainError):
            make(N, -0.1)

    def test_atomic_centre_not_invertible(self):
        with pytest.raises(NonInvertibleEnvelope):
            extremal_quantiles(kolmogorov_ball_envelope(TwoPoint(-1.0, 1.0, 0.5), 0.01), 0.3)


class TestMixtureEnvelope:
    def test_zero_radius(self):
        e = mixture_class_envelope(N, 0.0)
        assert np.array_equal(e.Fmax(X), N.cdf(X))
        assert np.array_equal(e.Fmin(X), N.cdf(X))

    def test_at_zero(self):
        for eps in (0.05, 0.1, 0.5):
            e = mixture_class_envelope(N, eps)
            assert e.Fmax(0.0) == pytest.approx((1 - eps) * N.cdf(0.0) + eps, abs=1e-15)

    def test_value(self):
        v = mixture_class_envelope(N, 0.1).Fmax(-1.0)
        assert v == pytest.approx(0.192790, abs=1e-6)
        assert v == pytest.approx(0.9 * float(oracles.normal_cdf(-1.0)) + 0.1 * 0.5, abs=1e-15)

    def test_needs_standard_centre(self):
        with pytest.raises(MomentError):
            mixture_class_envelope(StudentT(3.0), 0.1)
        with pytest.raises(DomainError):
            mixture_class_envelope(N, 1.0)


class TestExtremalQuantiles:
    @pytest.mark.parametrize("name", [k for k in ENVELOPES if k != "step"])
    def test_monotone_and_ordered(self, name):
        e = ENVELOPES[name]
        hi, lo = e.Fmax(X), e.Fmin(X)
        assert np.all(np.diff(hi) >= 0)
        assert np.all(np.diff(lo) >= 0)
        assert np.all(hi >= lo)
        assert e.Fmax(1e300) == 1.0 and e.Fmin(-1e300) == 0.0

    def test_step_envelope_shape(self):
        e = ENVELOPES["step"]
        assert np.all(np.diff(e.Fmax(X)) >= 0) and np.all(e.Fmax(X) >= e.Fmin(X))

    @pytest.mark.parametrize("name", ["cm", "kolmogorov-normal", "kolmogorov-t3", "levy-normal", "levy-t3"])
    def test_bisection_matches_analytic(self, name):
        e = ENVELOPES[name]
        for a in np.linspace(e.low_limit, e.high_limit, 23)[1:-1]:
            auto = extremal_quantiles(e, a)
            bis = extremal_quantiles(e, a, method="bisect")
            assert bis == pytest.approx(auto, abs=1e-8)

    def test_mixture_inverse_inverts(self):
        e = ENVELOPES["mixture-normal"]
        for a in (0.01, 0.2, 0.6):
            lo, hi = extremal_quantiles(e, a)
            assert e.Fmax(lo) >= a > e.Fmax(lo - 1e-9)
            assert e.Fmin(hi) >= a > e.Fmin(hi - 1e-9)

    def test_step_envelope_raises(self):
        with pytest.raises(NonInvertibleEnvelope):
            extremal_quantiles(step_envelope(0.05), 0.05)

    def test_counterexample(self):
        # X_n with mass alpha - 1/n at 0 has q_alpha = 1 for every n, yet the
        # maximal function reaches alpha only at x = 0
        alpha = 0.05
        for n in (100, 1000, 10_000):
            assert TwoPoint(0.0, 1.0, alpha - 1.0 / n).quantile(alpha) == 1.0
        fmax = step_envelope(alpha).Fmax
        assert fmax(0.0) == alpha and fmax(0.999) == alpha

    def test_envelope_limits_validated(self):
        with pytest.raises(DomainError):
            EnvelopePair(lambda x: x, lambda x: x, 0.5, 0.5)

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            extremal_quantiles(chebyshev_markov_envelope(), 0.1, method="newton")


class TestStopLoss:
    def test_values(self):
        sl = stop_loss_extremals()
        assert sl.Pi_max(0.0) == 0.5
        assert sl.Fmax_SL.cdf(0.0) == 0.5
        assert sl.Pi_min(-2.0) == 2.0 and sl.Pi_min(3.0) == 0.0
        assert sl.Fmin_SL.cdf(-1e-12) == 0.0 and sl.Fmin_SL.cdf(0.0) == 1.0

    def test_closed_forms(self):
        sl = stop_loss_extremals()
        x = np.linspace(-20, 20, 401)
        assert np.allclose(sl.Pi_max(x), (np.sqrt(x * x + 1) - x) / 2, rtol=1e-14)
        assert np.allclose(sl.Fmax_SL.cdf(x), 0.5 * (1 + x / np.sqrt(x * x + 1)), atol=1e-15)

    def test_cdf_is_derivative_of_transform(self):
        # F = 1 + Pi' for Pi(x) = E(x - X)^+ ... here Pi(x) = E(X - x)^+ so F = 1 + Pi'
        sl = stop_loss_extremals()
        h = 1e-5
        for x in (-5.0, -1.0, 0.3, 4.0):
            dmax = (sl.Pi_max(x + h) - sl.Pi_max(x - h)) / (2 * h)
            assert 1 + dmax == pytest.approx(sl.Fmax_SL.cdf(x), abs=1e-9)
            dmin = (sl.Pi_min(x + h) - sl.Pi_min(x - h)) / (2 * h)
            assert 1 + dmin == pytest.approx(sl.Fmin_SL.cdf(x), abs=1e-9)

    def test_quantile_formula(self):
        d = StopLossMaximal()
        for a in (0.001, 0.01, 0.3, 0.5, 0.9):
            assert d.quantile(a) == pytest.approx((2 * a - 1) / (2 * math.sqrt(a * (1 - a))), rel=1e-13, abs=1e-15)

    def test_es_of_maximal_law(self):
        assert expected_shortfall(stop_loss_extremals().Fmax_SL, 0.01) == pytest.approx(9.949874, abs=1e-4)
        assert expected_shortfall(StopLossMaximal(), 0.01, method="quadrature") == pytest.approx(
            math.sqrt(99.0), rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.001, 0.01, 0.2, 0.5, 0.99])
    def test_es_of_minimal_law(self, alpha):
        assert expected_shortfall(stop_loss_extremals().Fmin_SL, alpha) == 0.0

    def test_pi_max_dominates(self):
        # the maximal transform bounds E(X - x)^+ for members of L_{0,1}
        sl = stop_loss_extremals()
        p = 0.1
        a, b = -math.sqrt((1 - p) / p), math.sqrt(p / (1 - p))
        x = np.linspace(-5, 5, 101)
        member = p * np.maximum(a - x, 0) + (1 - p) * np.maximum(b - x, 0)
        assert np.all(member <= sl.Pi_max(x) + 1e-12)
        assert np.all(member >= sl.Pi_min(x) - 1e-12)
