import math

import numpy as np
import pytest
from scipy import integrate, special

from cellcov3d.analytic import (
    DEFAULT_QUADRATURE,
    DensityConfig,
    QuadratureSettings,
    activity_probability,
    ball_volume,
    coverage_bounds,
    integrate_semi_infinite,
    interference_laplace,
    link_los_prob,
    link_los_prob_quadrature,
    mean_interference_beyond,
    nth_nearest_cdf,
    nth_nearest_pdf,
)
from cellcov3d.channel import ChannelParams, LosModel
from cellcov3d.errors import ConfigurationError, NumericalError


def test_ball_volume():
    assert ball_volume(1.0) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)
    assert ball_volume(2.0) == pytest.approx(32.0 * math.pi / 3.0, rel=1e-15)


class TestDensityConfig:
    def test_activity_at_equal_densities(self):
        cfg = DensityConfig(1e-2, 1e-2)
        assert cfg.activity == pytest.approx(0.5981224279835391, rel=1e-14)
        assert activity_probability(cfg) == cfg.activity

    def test_activity_depends_only_on_ratio(self):
        assert DensityConfig(1e-3, 1e-4).activity == pytest.approx(
            DensityConfig(1e-1, 1e-2).activity, rel=1e-15
        )

    def test_lambda_active(self):
        cfg = DensityConfig(2e-3, 2e-3)
        assert cfg.lambda_active == pytest.approx(cfg.activity * 2e-3, rel=1e-15)

    def test_small_ratio_expansion(self):
        # q = x - 0.6 x^2 + O(x^3) for light loading
        x = 1e-4
        q = DensityConfig(1.0, x).activity
        assert q == pytest.approx(x - 0.6 * x * x, rel=1e-6)

    def test_saturation(self):
        assert DensityConfig(1e-6, 1.0).activity == pytest.approx(1.0, abs=1e-12)

    def test_no_users_means_no_activity(self):
        assert DensityConfig(1e-3, 0.0).activity == 0.0

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            DensityConfig(0.0, 1e-3)
        with pytest.raises(ConfigurationError):
            DensityConfig(1e-3, -1.0)
        with pytest.raises(ConfigurationError):
            DensityConfig(math.inf, 1e-3)


def test_quadrature_settings_validation():
    with pytest.raises(ConfigurationError):
        QuadratureSettings(relative_tolerance=0.1)
    with pytest.raises(ConfigurationError):
        QuadratureSettings(absolute_tolerance=-1.0)
    with pytest.raises(ConfigurationError):
        QuadratureSettings(max_subdivisions=2)
    with pytest.raises(ConfigurationError):
        QuadratureSettings(tail_cutoff_epsilon=0.9)


def test_integrate_semi_infinite_known_values():
    value, err = integrate_semi_infinite(lambda x: math.exp(-x), 0.0)
    assert value == pytest.approx(1.0, rel=1e-10)
    assert err < 1e-8

    value, _ = integrate_semi_infinite(lambda x: x * math.exp(-x * x), 0.0, split=1.0)
    assert value == pytest.approx(0.5, rel=1e-10)

    # Gaussian mass from 2 onward against the complementary error function
    value, _ = integrate_semi_infinite(lambda x: math.exp(-x * x), 2.0)
    assert value == pytest.approx(math.sqrt(math.pi) / 2.0 * special.erfc(2.0), rel=1e-10)


def test_integrate_semi_infinite_split_matches_unsplit():
    f = lambda x: math.exp(-0.3 * x) / (1.0 + x)
    whole, _ = integrate_semi_infinite(f, 0.0)
    split, _ = integrate_semi_infinite(f, 0.0, split=7.0)
    assert split == pytest.approx(whole, rel=1e-9)


def test_integrate_semi_infinite_failure_carries_estimate():
    with pytest.raises(NumericalError) as exc_info:
        integrate_semi_infinite(lambda x: math.sin(x**3) * x * x, 0.0)
    assert exc_info.value.error_estimate > 0.0


class TestNearestDistanceLaws:
    @pytest.mark.parametrize("n", [1, 2, 5])
    @pytest.mark.parametrize("lam", [1e-6, 1e-2])
    def test_pdf_normalizes(self, n, lam):
        mode = ((n + 5.0) * 3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0)
        value, _ = integrate_semi_infinite(lambda r: nth_nearest_pdf(n, r, lam), 0.0, split=mode)
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_mean_distances(self):
        # E[R_n] = Gamma(n + 1/3) / Gamma(n) * ((4/3) pi lam)^(-1/3)
        lam = 1e-3
        expected = {1: 5.5396027836509, 2: 7.386137044867869, 5: 10.37250726979901}
        for n, target in expected.items():
            mean, _ = integrate_semi_infinite(
                lambda r: r * nth_nearest_pdf(n, r, lam),
                0.0,
                split=((n + 5.0) * 3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0),
            )
            assert mean == pytest.approx(target, rel=1e-9)

    def test_cdf_integrates_pdf(self):
        lam, n = 1e-4, 2
        for r in (5.0, 15.0, 40.0):
            by_quad, _ = integrate.quad(lambda x: nth_nearest_pdf(n, x, lam), 0.0, r)
            assert nth_nearest_cdf(n, r, lam) == pytest.approx(by_quad, rel=1e-9)

    def test_cdf_limits(self):
        assert nth_nearest_cdf(1, 0.0, 1e-3) == 0.0
        assert nth_nearest_cdf(1, 1e4, 1e-3) == pytest.approx(1.0, abs=1e-12)

    def test_pdf_vectorized(self):
        rs = np.linspace(0.1, 30.0, 7)
        vals = nth_nearest_pdf(1, rs, 1e-3)
        assert vals.shape == rs.shape
        assert np.all(vals >= 0.0)

    def test_domain_errors(self):
        with pytest.raises(ConfigurationError):
            nth_nearest_pdf(0, 1.0, 1e-3)
        with pytest.raises(ConfigurationError):
            nth_nearest_pdf(1, -1.0, 1e-3)
        with pytest.raises(ConfigurationError):
            nth_nearest_cdf(1, 1.0, 0.0)


class TestLinkLosProb:
    def test_half_power_point(self):
        # With 4 pi lam L^3 = 3 the n-th neighbor is LOS with probability 2^-n.
        lam_star = 3.0 / (4.0 * math.pi * 82.5**3)
        assert lam_star == pytest.approx(4.251572066900952e-07, rel=1e-12)
        for n in (1, 2, 3):
            assert link_los_prob(n, lam_star) == pytest.approx(0.5**n, rel=1e-12)

    def test_frozen_point(self):
        assert link_los_prob(1, 2e-6) == pytest.approx(0.8246888055268142, rel=1e-12)
        assert link_los_prob(3, 2e-6) == pytest.approx(0.5608804444388774, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_quadrature(self, n):
        for lam in np.logspace(-9.0, -1.0, 5):
            closed = link_los_prob(n, float(lam))
            numeric = link_los_prob_quadrature(n, float(lam))
            assert numeric == pytest.approx(closed, rel=1e-9, abs=1e-300)

    def test_limits(self):
        assert link_los_prob(1, 1e-15) == pytest.approx(0.0, abs=1e-8)
        assert link_los_prob(1, 10.0) == pytest.approx(1.0, abs=1e-7)
        assert link_los_prob(2, 1e-5) < link_los_prob(1, 1e-5)

    def test_scale_parameter(self):
        # halving the decay length is the same as an 8x thinner process
        assert link_los_prob(2, 8e-6, los_scale_m=41.25) == pytest.approx(
            link_los_prob(2, 1e-6, los_scale_m=82.5), rel=1e-12
        )


class TestInterferenceLaplace:
    def test_at_zero(self):
        params = ChannelParams()
        assert interference_laplace(0.0, 10.0, 1e-4, params) == 1.0

    def test_monotone_in_s(self):
        params = ChannelParams()
        values = [
            interference_laplace(s, 12.0, 5e-5, params)
            for s in np.logspace(2.0, 9.0, 9)
        ]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_larger_guard_means_less_interference(self):
        params = ChannelParams()
        s = 1e6
        near = interference_laplace(s, 5.0, 5e-5, params)
        far = interference_laplace(s, 25.0, 5e-5, params)
        assert far > near

    def test_pure_nlos_against_direct_integral(self):
        # A vanishing LOS decay length turns every interferer NLOS, where the
        # exponential-fading transform has a one-dimensional integral form
        # that we can evaluate straight from its definition.
        params = ChannelParams(los_model=LosModel.CUBIC_EXPONENTIAL, los_scale_m=1e-9)
        lam, serving, s = 8e-5, 9.0, 2.5e6
        k, alpha = params.k_nlos, params.alpha_nlos

        def weight(t):
            # substitution x = 1/t keeps the domain finite
            x = 1.0 / t
            return (s / (s + k * x**alpha)) * t**-4.0

        tail, _ = integrate.quad(weight, 1e-12, 1.0 / serving, limit=400)
        expected = math.exp(-4.0 * math.pi * lam * tail)
        got = interference_laplace(s, serving, lam, params)
        assert got == pytest.approx(expected, rel=1e-7)

    def test_window_truncation(self):
        # The truncated transform upper-bounds the full one and approaches
        # it slowly: the discarded exponent mass falls off only like
        # R^(3 - alpha_nlos), so even hundreds of meters are not enough.
        params = ChannelParams()
        s, serving, lam = 5e6, 10.0, 1e-4
        full = interference_laplace(s, serving, lam, params)
        windowed = interference_laplace(s, serving, lam, params, upper_limit=60.0)
        wider = interference_laplace(s, serving, lam, params, upper_limit=400.0)
        huge = interference_laplace(s, serving, lam, params, upper_limit=1e5)
        assert windowed > wider > huge > full
        assert wider > full * 1.02
        assert huge == pytest.approx(full, rel=2e-3)

    def test_domain(self):
        params = ChannelParams()
        with pytest.raises(ConfigurationError):
            interference_laplace(-1.0, 10.0, 1e-4, params)
        with pytest.raises(ConfigurationError):
            interference_laplace(1.0, 0.0, 1e-4, params)


def _rayleigh_coverage_reference(theta, lam, params):
    """Coverage under pure NLOS, written from scratch for cross-checking.

    Uses the substitution u = (4/3) pi lam r^3, under which the serving
    distance law becomes Exp(1), and an inverse-distance substitution for
    the interference exponent.
    """
    k, alpha = params.k_nlos, params.alpha_nlos

    def exponent(r):
        s = theta * k * r**alpha

        def weight(t):
            x = 1.0 / t
            return (s / (s + k * x**alpha)) * t**-4.0

        tail, _ = integrate.quad(weight, 1e-14, 1.0 / r, limit=400)
        return 4.0 * math.pi * lam * tail

    factor = (3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0)

    def integrand(u):
        r = factor * u ** (1.0 / 3.0)
        return math.exp(-u - exponent(r))

    value, _ = integrate.quad(integrand, 0.0, 40.0, limit=400)
    return value


class TestCoverageBounds:
    def test_bracket_and_error_reporting(self):
        params = ChannelParams()
        for lam_ap in (1e-4, 1e-2):
            for theta in (0.1, 1.0):
                bounds = coverage_bounds(theta, DensityConfig(lam_ap, 1e-2), params)
                assert 0.0 <= bounds.lower <= bounds.upper <= 1.0
                assert bounds.lower_error < 1e-6
                assert bounds.upper_error < 1e-6

    def test_decreasing_in_threshold(self):
        params = ChannelParams()
        cfg = DensityConfig(1e-3, 1e-2)
        thetas = (0.01, 0.1, 1.0, 10.0)
        results = [coverage_bounds(t, cfg, params) for t in thetas]
        for a, b in zip(results, results[1:]):
            assert a.lower >= b.lower
            assert a.upper >= b.upper

    def test_shape_one_collapses(self):
        params = ChannelParams(nakagami_shape=1)
        for lam_ap in (1e-4, 1e-3):
            bounds = coverage_bounds(0.1, DensityConfig(lam_ap, 1e-2), params)
            assert bounds.upper == bounds.lower

    def test_pure_nlos_matches_reference(self):
        params = ChannelParams(los_model=LosModel.CUBIC_EXPONENTIAL, los_scale_m=1e-6)
        cfg = DensityConfig(1e-3, 1e-1)
        theta = 0.1
        bounds = coverage_bounds(theta, cfg, params)
        reference = _rayleigh_coverage_reference(theta, cfg.lambda_active, params)
        assert bounds.upper == pytest.approx(bounds.lower, abs=1e-12)
        assert bounds.lower == pytest.approx(reference, abs=2e-6)

    def test_validation(self):
        params = ChannelParams()
        with pytest.raises(ConfigurationError):
            coverage_bounds(0.0, DensityConfig(1e-3, 1e-2), params)
        with pytest.raises(ConfigurationError):
            coverage_bounds(0.1, DensityConfig(1e-3, 0.0), params)


def _upper_gamma(a, x):
    if a > 0.0:
        return special.gammaincc(a, x) * special.gamma(a)
    return (_upper_gamma(a + 1.0, x) - x**a * math.exp(-x)) / a


class TestMeanInterferenceBeyond:
    def test_cubic_profile_closed_form(self):
        # With the cubic-exponential LOS curve the Campbell integral reduces
        # to upper incomplete gamma functions, solved here independently.
        params = ChannelParams(los_model=LosModel.CUBIC_EXPONENTIAL)
        lam, radius = 5e-5, 40.0
        scale = params.los_scale_m
        z = (radius / scale) ** 3
        a_l, a_n = params.alpha_los, params.alpha_nlos
        los = scale ** (3.0 - a_l) / 3.0 * _upper_gamma((3.0 - a_l) / 3.0, z) / params.k_los
        nlos = radius ** (3.0 - a_n) / (a_n - 3.0) / params.k_nlos
        nlos -= scale ** (3.0 - a_n) / 3.0 * _upper_gamma((3.0 - a_n) / 3.0, z) / params.k_nlos
        expected = 4.0 * math.pi * lam * (los + nlos)
        got = mean_interference_beyond(radius, lam, params, DEFAULT_QUADRATURE)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_exact_profile_against_split_quadrature(self):
        params = ChannelParams()
        lam, radius = 5e-5, 40.0
        from cellcov3d.channel import exact_los_prob

        def integrand(x):
            p = exact_los_prob(x)
            los = p / (params.k_los * x**params.alpha_los)
            nlos = (1.0 - p) / (params.k_nlos * x**params.alpha_nlos)
            return (los + nlos) * x * x

        near, _ = integrate.quad(integrand, radius, 1000.0, limit=400, epsabs=1e-16, epsrel=1e-12)
        far = 1000.0 ** (3.0 - params.alpha_nlos) / (params.alpha_nlos - 3.0) / params.k_nlos
        expected = 4.0 * math.pi * lam * (near + far)
        got = mean_interference_beyond(radius, lam, params, DEFAULT_QUADRATURE)
        assert got == pytest.approx(expected, rel=1e-8)

    def test_linear_in_intensity_and_decreasing_in_radius(self):
        params = ChannelParams()
        one = mean_interference_beyond(30.0, 1e-5, params, DEFAULT_QUADRATURE)
        two = mean_interference_beyond(30.0, 2e-5, params, DEFAULT_QUADRATURE)
        farther = mean_interference_beyond(90.0, 1e-5, params, DEFAULT_QUADRATURE)
        assert two == pytest.approx(2.0 * one, rel=1e-12)
        assert farther < one

    def test_needs_supercritical_nlos_exponent(self):
        params = ChannelParams(alpha_nlos=2.9, alpha_los=2.09)
        with pytest.raises(ConfigurationError):
            mean_interference_beyond(30.0, 1e-5, params, DEFAULT_QUADRATURE)
