"""Closed forms and quadrature: activity, distance laws, interference, coverage.

Everything here treats the transmitting-AP field as a homogeneous Poisson
process at the thinned intensity ``DensityConfig.lambda_active``; the
residual correlation of real activity patterns is a model-level
approximation quantified by the simulator, not something this module tries
to correct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import ChannelParams, LosModel, approx_los_prob, exact_los_prob
from .errors import ConfigurationError, NumericalError
from .specfun import binomial, log_factorial, regularized_lower_gamma

BALL_VOLUME_FACTOR = 4.0 * math.pi / 3.0

# Shape of the gamma law fitted to the relative volume of a 3-D Voronoi cell.
_CELL_VOLUME_SHAPE = 5.0


def ball_volume(radius: float) -> float:
    """Volume of a ball of the given radius."""
    return BALL_VOLUME_FACTOR * radius ** 3


def _activity_from_ratio(ratio: float) -> float:
    # 1 - (1 + ratio/shape)^(-shape), evaluated stably for tiny ratios.
    return -math.expm1(-_CELL_VOLUME_SHAPE * math.log1p(ratio / _CELL_VOLUME_SHAPE))


@dataclass(frozen=True)
class DensityConfig:
    """Access-point and user densities, per cubic meter."""

    lambda_ap: float
    lambda_ue: float

    def __post_init__(self) -> None:
        if not (isinstance(self.lambda_ap, (int, float)) and math.isfinite(self.lambda_ap) and self.lambda_ap > 0):
            raise ConfigurationError(f"lambda_ap must be positive and finite, got {self.lambda_ap!r}")
        if not (isinstance(self.lambda_ue, (int, float)) and math.isfinite(self.lambda_ue) and self.lambda_ue >= 0):
            raise ConfigurationError(f"lambda_ue must be nonnegative and finite, got {self.lambda_ue!r}")

    @property
    def activity(self) -> float:
        """Fraction of access points expected to serve at least one user."""
        return _activity_from_ratio(self.lambda_ue / self.lambda_ap)

    @property
    def lambda_active(self) -> float:
        """Intensity of the transmitting-AP process under independent thinning."""
        return self.activity * self.lambda_ap


def activity_probability(densities: DensityConfig) -> float:
    """Probability that an access point serves at least one user.

    A cell's relative volume is well approximated by a gamma law with shape
    parameter 5 in three dimensions; mixing the user process's void
    probability over that law gives 1 - (1 + ratio/5)^(-5) with
    ratio = lambda_ue / lambda_ap.
    """
    return densities.activity


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and cutoffs for the adaptive integrals.

    ``tail_cutoff_epsilon`` sets where the serving-distance integral stops:
    the discarded probability mass equals that epsilon exactly.
    """

    relative_tolerance: float = 1e-8
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 200
    tail_cutoff_epsilon: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("relative_tolerance", "absolute_tolerance", "tail_cutoff_epsilon"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")
        if self.relative_tolerance >= 1e-3:
            raise ConfigurationError(
                f"relative_tolerance must be below 1e-3, got {self.relative_tolerance!r}"
            )
        if self.tail_cutoff_epsilon >= 0.5:
            raise ConfigurationError(
                f"tail_cutoff_epsilon must be below 0.5, got {self.tail_cutoff_epsilon!r}"
            )
        if not isinstance(self.max_subdivisions, int) or self.max_subdivisions < 10:
            raise ConfigurationError(
                f"max_subdivisions must be an integer >= 10, got {self.max_subdivisions!r}"
            )


DEFAULT_QUADRATURE = QuadratureSettings()


def _quad(func, lower: float, upper: float, settings: QuadratureSettings, interior_points=None):
    kwargs = {}
    if interior_points:
        inside = [p for p in interior_points if lower < p < upper]
        if inside:
            kwargs["points"] = inside
    result = integrate.quad(
        func,
        lower,
        upper,
        epsabs=settings.absolute_tolerance,
        epsrel=settings.relative_tolerance,
        limit=settings.max_subdivisions,
        full_output=True,
        **kwargs,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        # Roundoff warnings whose error estimate still lands within a small
        # multiple of the requested tolerance are converged for our purposes;
        # anything worse is a genuine failure.
        tolerated = 10.0 * max(
            settings.absolute_tolerance, settings.relative_tolerance * abs(value)
        )
        if not abserr <= tolerated:
            raise NumericalError(
                f"quadrature did not converge on [{lower:.6g}, {upper:.6g}]: {result[3]}",
                error_estimate=abserr,
            )
    return value, abserr


def _tail_quad(func, start: float, settings: QuadratureSettings):
    # Map [start, inf) onto [0, 1) via x = start + t/(1-t).
    def mapped(t: float) -> float:
        if t >= 1.0:
            return 0.0
        w = 1.0 - t
        return func(start + t / w) / (w * w)

    return _quad(mapped, 0.0, 1.0, settings)


def integrate_semi_infinite(func, lower: float, settings: QuadratureSettings = DEFAULT_QUADRATURE, split: float | None = None):
    """Adaptive integral of ``func`` over [lower, infinity).

    The far tail is folded onto a finite interval with the substitution
    x = a + t/(1-t), which keeps endpoint singularities mild for integrands
    decaying at any polynomial rate above x^-1. An optional split point
    separates a structured near region from the tail.

    Returns:
        (value, error_estimate) pair.

    Raises:
        NumericalError: When the quadrature reports non-convergence.
    """
    start = float(lower)
    if split is not None and split > start:
        head, head_err = _quad(func, start, float(split), settings)
        tail, tail_err = _tail_quad(func, float(split), settings)
        return head + tail, head_err + tail_err
    return _tail_quad(func, start, settings)


def _check_order(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigurationError(f"order n must be an integer >= 1, got {n!r}")


def _check_intensity(value: float, name: str = "intensity") -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")


def nth_nearest_pdf(n: int, r, intensity: float):
    """Density of the distance to the n-th nearest point of a Poisson field.

    The scaled ball volume u = (4/3) pi intensity r^3 swept out while
    reaching the n-th point is gamma(n, 1) distributed; transforming back to
    the radial coordinate gives 3 u^n exp(-u) / (r Gamma(n)). The n = 1 case
    reduces to 4 pi intensity r^2 exp(-u), the nearest-point law.

    Args:
        n: Neighbor order, >= 1.
        r: Radius in meters, >= 0; scalar or array.
        intensity: Field intensity per cubic meter, > 0.
    """
    _check_order(n)
    _check_intensity(intensity)
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ConfigurationError("radii must be finite and >= 0")
    out = np.zeros(arr.shape)
    positive = arr > 0.0
    if np.any(positive):
        rp = arr[positive]
        u = BALL_VOLUME_FACTOR * intensity * rp ** 3
        log_pdf = n * np.log(u) - u - log_factorial(n - 1) + math.log(3.0) - np.log(rp)
        out[positive] = np.exp(log_pdf)
    if np.ndim(r) == 0:
        return float(out[0])
    return out.reshape(np.shape(r))


def nth_nearest_cdf(n: int, r, intensity: float):
    """Distribution function companion of :func:`nth_nearest_pdf`."""
    _check_order(n)
    _check_intensity(intensity)
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ConfigurationError("radii must be finite and >= 0")
    out = np.array([
        regularized_lower_gamma(float(n), BALL_VOLUME_FACTOR * intensity * v ** 3)
        for v in arr
    ])
    if np.ndim(r) == 0:
        return float(out[0])
    return out.reshape(np.shape(r))


def link_los_prob(n: int, lambda_active: float, los_scale_m: float = 82.5) -> float:
    """Probability that the link to the n-th nearest transmitting AP is LOS.

    Closed form under the cubic-exponential LOS curve: with
    c = 4 pi lambda_active scale^3, each successive neighbor is LOS with an
    extra factor c / (3 + c), so the n-th gets (c / (3 + c))^n.
    """
    _check_order(n)
    _check_intensity(lambda_active, "lambda_active")
    _check_intensity(los_scale_m, "los_scale_m")
    c = 4.0 * math.pi * lambda_active * los_scale_m ** 3
    return (c / (3.0 + c)) ** n


def link_los_prob_quadrature(
    n: int,
    lambda_active: float,
    los_scale_m: float = 82.5,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Same quantity as :func:`link_los_prob`, by direct quadrature.

    Integrates the cubic-exponential curve against the n-th nearest distance
    density; serves as the independent cross-check of the closed form.
    """
    _check_order(n)
    _check_intensity(lambda_active, "lambda_active")
    _check_intensity(los_scale_m, "los_scale_m")
    # The scaled volume is gamma(n, 1); beyond u_max the remaining mass is
    # far below the requested tolerances.
    u_max = n + 40.0 * math.sqrt(n) + 40.0
    r_max = (u_max / (BALL_VOLUME_FACTOR * lambda_active)) ** (1.0 / 3.0)

    def integrand(r: float) -> float:
        return approx_los_prob(r, los_scale_m) * nth_nearest_pdf(n, r, lambda_active)

    value, _ = _quad(integrand, 0.0, r_max, settings)
    return value


def interference_laplace(
    s: float,
    serving_distance: float,
    lambda_active: float,
    params: ChannelParams,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    upper_limit: float | None = None,
) -> float:
    """Laplace transform of the aggregate interference power at the origin.

    Interferers form a homogeneous Poisson field of transmitting APs outside
    the serving distance. Each link is LOS with the cubic-exponential
    probability (the curve the closed forms are built on; the empirical
    curve stays a simulation-side option), fades exponentially when NLOS and
    with a unit-mean gamma of integer shape when LOS. The product
    expectation over the field collapses to an exponential of two radial
    integrals: an all-NLOS baseline plus a LOS correction weighted by the
    LOS curve, which is what makes the otherwise divergent LOS far field
    integrable.

    Args:
        s: Transform argument, >= 0.
        serving_distance: Exclusion radius in meters, > 0.
        lambda_active: Transmitting-AP intensity per cubic meter, > 0.
        params: Channel constants.
        settings: Quadrature tolerances.
        upper_limit: When given, the interferer field is truncated at this
            radius instead of extending to infinity; used to compare against
            finite-window Monte-Carlo sums.

    Returns:
        Value in (0, 1].

    Raises:
        ConfigurationError: On domain violations, including
            alpha_nlos <= 3 with an unbounded field, which diverges.
        NumericalError: When quadrature cannot reach tolerance.
    """
    if not (isinstance(s, (int, float)) and math.isfinite(s) and s >= 0):
        raise ConfigurationError(f"transform argument must be finite and >= 0, got {s!r}")
    if not (isinstance(serving_distance, (int, float)) and math.isfinite(serving_distance) and serving_distance > 0):
        raise ConfigurationError(f"serving_distance must be positive and finite, got {serving_distance!r}")
    _check_intensity(lambda_active, "lambda_active")
    if upper_limit is None:
        if params.alpha_nlos <= 3.0:
            raise ConfigurationError(
                "alpha_nlos must exceed 3 for the unbounded interference field to converge"
            )
    else:
        if not (math.isfinite(upper_limit) and upper_limit > serving_distance):
            raise ConfigurationError(
                f"upper_limit must exceed serving_distance, got {upper_limit!r} vs {serving_distance!r}"
            )
    if s == 0.0:
        return 1.0

    k_nlos, a_nlos = params.k_nlos, params.alpha_nlos
    k_los, a_los = params.k_los, params.alpha_los
    shape = params.nakagami_shape
    scale = params.los_scale_m

    def nlos_weight(x: float) -> float:
        # (1 - E[exp(-s h / PL_NLOS(x))]) x^2 for exponential h.
        return s * x * x / (s + k_nlos * x ** a_nlos)

    def los_correction(x: float) -> float:
        # (E[exp(-s h/PL_NLOS)] - E[exp(-s h/PL_LOS)]) p(x) x^2, arranged so
        # the MGF difference never cancels catastrophically when both sit
        # near 1: with a = s/(k_NL x^a_NL) and (1+b)^N the LOS denominator,
        # the difference equals (expm1(N log1p(b)) - a) / ((1+a)(1+b)^N).
        p = math.exp(-((x / scale) ** 3))
        if p == 0.0:
            return 0.0
        a = s / (k_nlos * x ** a_nlos)
        log_den = shape * math.log1p(s / (shape * k_los * x ** a_los))
        if log_den > 600.0:
            diff = 1.0 / (1.0 + a)
        else:
            diff = (math.expm1(log_den) - a) / ((1.0 + a) * math.exp(log_den))
        return p * diff * x * x

    start = float(serving_distance)
    split = 3.0 * scale if 3.0 * scale > start else None
    if upper_limit is None:
        nlos_part, _ = integrate_semi_infinite(nlos_weight, start, settings, split=split)
        los_part, _ = integrate_semi_infinite(los_correction, start, settings, split=split)
    else:
        stop = float(upper_limit)
        pts = (split,) if split is not None and split < stop else None
        nlos_part, _ = _quad(nlos_weight, start, stop, settings, interior_points=pts)
        los_part, _ = _quad(los_correction, start, stop, settings, interior_points=pts)
    exponent = 4.0 * math.pi * lambda_active * (nlos_part + los_part)
    return math.exp(-exponent)


@dataclass(frozen=True)
class CoverageBounds:
    """Two-sided analytic coverage bracket at one operating point."""

    lower: float
    upper: float
    theta: float
    densities: DensityConfig
    params: ChannelParams
    lower_error: float
    upper_error: float

    def __post_init__(self) -> None:
        if not (-1e-9 <= self.lower <= self.upper + 1e-9 and self.upper <= 1.0 + 1e-9):
            raise NumericalError(
                f"coverage bracket violated: lower={self.lower!r}, upper={self.upper!r}",
                error_estimate=max(self.lower_error, self.upper_error),
            )


def coverage_bounds(
    theta: float,
    densities: DensityConfig,
    params: ChannelParams,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> CoverageBounds:
    """Lower and upper bounds on P(SIR >= theta) for the user at the origin.

    The serving link goes to the nearest transmitting AP, whose distance
    follows the nearest-point law at the thinned intensity. Conditioned on
    that distance, the LOS/NLOS mixture is expanded and the gamma fading
    tail is replaced by its two-sided exponential sandwich, turning each
    side into a finite alternating sum of interference Laplace transforms.
    The sandwich constant is the integer shape itself on the lower side and
    shape * (shape!)^(-1/shape) on the upper side, which collapses the
    bracket to a single value at shape 1.

    Args:
        theta: Linear SIR threshold, > 0 (CLI layers convert from dB).
        densities: Operating point; lambda_ue must be positive so the
            transmitting intensity is nonzero.
        params: Channel constants.
        settings: Quadrature tolerances.

    Raises:
        ConfigurationError: On domain violations.
        NumericalError: On quadrature failure or a violated bracket.
    """
    if not (isinstance(theta, (int, float)) and math.isfinite(theta) and theta > 0):
        raise ConfigurationError(f"theta must be positive and finite, got {theta!r}")
    lam = densities.lambda_active
    if lam <= 0.0:
        raise ConfigurationError(
            "coverage bounds need lambda_ue > 0 so that some AP transmits"
        )
    shape = params.nakagami_shape
    scale_lower = float(shape)
    scale_upper = shape * math.exp(-log_factorial(shape) / shape)
    r_max = (3.0 * math.log(1.0 / settings.tail_cutoff_epsilon) / (4.0 * math.pi * lam)) ** (1.0 / 3.0)
    coefficients = tuple(
        (-1.0) ** (l + 1) * binomial(shape, l) for l in range(1, shape + 1)
    )

    def bound_value(fading_scale: float):
        def integrand(r: float) -> float:
            if r <= 0.0:
                return 0.0
            u = BALL_VOLUME_FACTOR * lam * r ** 3
            pdf = 3.0 * u / r * math.exp(-u)
            if pdf == 0.0:
                return 0.0
            p_los = math.exp(-((r / params.los_scale_m) ** 3))
            s_nlos = theta * params.k_nlos * r ** params.alpha_nlos
            value = (1.0 - p_los) * interference_laplace(s_nlos, r, lam, params, settings)
            if p_los > 0.0:
                base = fading_scale * theta * params.k_los * r ** params.alpha_los
                total = 0.0
                for l, coeff in enumerate(coefficients, start=1):
                    total += coeff * interference_laplace(base * l, r, lam, params, settings)
                value += p_los * total
            return value * pdf

        return _quad(integrand, 0.0, r_max, settings)

    lower, lower_err = bound_value(scale_lower)
    if scale_upper == scale_lower:
        upper, upper_err = lower, lower_err
    else:
        upper, upper_err = bound_value(scale_upper)
    return CoverageBounds(lower, upper, float(theta), densities, params, lower_err, upper_err)


def mean_interference_beyond(
    radius: float,
    lambda_active: float,
    params: ChannelParams,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Mean interference power from transmitting APs beyond a radius.

    Campbell's theorem turns the field sum into
    4 pi lambda integral of x^2 E[1/PL(x)] dx, with the LOS/NLOS mix taken
    from the LOS curve configured in ``params`` (the empirical curve by
    default, matching what simulation would have sampled out there). Unit
    transmit power, unit-mean fading.
    """
    _check_intensity(radius, "radius")
    _check_intensity(lambda_active, "lambda_active")
    if params.alpha_nlos <= 3.0:
        raise ConfigurationError("mean far-field interference needs alpha_nlos > 3")
    use_cubic = params.los_model is LosModel.CUBIC_EXPONENTIAL

    def integrand(x: float) -> float:
        if use_cubic:
            p = float(approx_los_prob(x, params.los_scale_m))
        else:
            p = float(exact_los_prob(x))
        los_term = p / (params.k_los * x ** params.alpha_los)
        nlos_term = (1.0 - p) / (params.k_nlos * x ** params.alpha_nlos)
        return (los_term + nlos_term) * x * x

    split = 3.0 * params.los_scale_m
    value, _ = integrate_semi_infinite(
        integrand, float(radius), settings, split=split if split > radius else None
    )
    return 4.0 * math.pi * lambda_active * value
