"""Scalar special functions backing the analytic engine.

The lower incomplete gamma function is implemented here directly, with a
power series below the ridge x = s + 1 and a Lentz-style continued fraction
above it, because downstream code needs a building block with a known
relative-error budget (1e-12). Everything with an exact stdlib counterpart
defers to :mod:`math`.
"""

from __future__ import annotations

import math

from .errors import ConfigurationError, NumericalError

_MAX_ITERATIONS = 600
_CONVERGENCE_EPS = 1e-16
_TINY = 1e-300


def gamma(x: float) -> float:
    """Gamma function on the positive real axis.

    Args:
        x: Argument, must be finite and > 0.

    Raises:
        ConfigurationError: If x is outside the supported domain.
    """
    if not (math.isfinite(x) and x > 0.0):
        raise ConfigurationError(f"gamma requires finite x > 0, got {x!r}")
    return math.gamma(x)


def log_factorial(n: int) -> float:
    """Natural logarithm of n! for integer n >= 0."""
    if n < 0:
        raise ConfigurationError(f"log_factorial requires n >= 0, got {n!r}")
    return math.lgamma(n + 1.0)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with exact integer arithmetic."""
    if n < 0 or k < 0 or k > n:
        raise ConfigurationError(f"binomial requires 0 <= k <= n, got n={n!r}, k={k!r}")
    return math.comb(n, k)


def _lower_series(s: float, x: float) -> float:
    # Ascending series for the regularized P(s, x); fast for x < s + 1.
    term = 1.0 / s
    total = term
    for k in range(1, _MAX_ITERATIONS):
        term *= x / (s + k)
        total += term
        if abs(term) < abs(total) * _CONVERGENCE_EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise NumericalError(
        f"lower incomplete gamma series stalled at s={s!r}, x={x!r}",
        error_estimate=abs(term),
    )


def _upper_continued_fraction(s: float, x: float) -> float:
    # Modified Lentz evaluation of the regularized Q(s, x); for x >= s + 1.
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for k in range(1, _MAX_ITERATIONS):
        a = -k * (k - s)
        b += 2.0
        d = a * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + a / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CONVERGENCE_EPS:
            return h * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise NumericalError(
        f"incomplete gamma continued fraction stalled at s={s!r}, x={x!r}",
        error_estimate=abs(h),
    )


def regularized_lower_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x), valued in [0, 1].

    Args:
        s: Shape parameter, finite and > 0.
        x: Integration limit, finite and >= 0.

    Returns:
        P(s, x) with relative error at most about 1e-12.

    Raises:
        ConfigurationError: On domain violations.
        NumericalError: If neither expansion converges (not reachable for
            sane arguments; kept as a hard stop rather than a silent loss
            of precision).
    """
    if not (math.isfinite(s) and s > 0.0):
        raise ConfigurationError(f"shape must be finite and > 0, got {s!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise ConfigurationError(f"limit must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return min(_lower_series(s, x), 1.0)
    return max(1.0 - _upper_continued_fraction(s, x), 0.0)


def lower_incomplete_gamma(s: float, x: float) -> float:
    """Unnormalized lower incomplete gamma integral from 0 to x of t^(s-1) e^(-t)."""
    return regularized_lower_gamma(s, x) * math.gamma(s)
