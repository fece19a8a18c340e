"""Link propagation model: LOS state probabilities, path loss, fading samplers.

Distances are meters everywhere. The empirical LOS curve keeps its
kilometer-scale constants internally and converts on entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .errors import ConfigurationError

_KM_PER_M = 1e-3
_NEAR_SCALE_KM = 0.156
_FAR_SCALE_KM = 0.03


class LosModel(Enum):
    """Which distance-to-LOS-probability curve link classification uses."""

    EXACT_3GPP = "exact_3gpp"
    CUBIC_EXPONENTIAL = "cubic_exponential"


class LinkState(Enum):
    """Propagation state of a single link."""

    LOS = "los"
    NLOS = "nlos"

    @property
    def is_los(self) -> bool:
        return self is LinkState.LOS


@dataclass(frozen=True)
class ChannelParams:
    """Constants of the two-slope LOS/NLOS channel.

    Defaults describe a dense-urban small-cell deployment with path loss
    referenced to 1 m, so ``k_los`` and ``k_nlos`` are the linear
    attenuations at unit distance and the carrier frequency is already
    folded into them.

    Attributes:
        k_los: Linear path loss at 1 m for LOS links.
        k_nlos: Linear path loss at 1 m for NLOS links.
        alpha_los: LOS path-loss exponent; at least 2 and below alpha_nlos.
        alpha_nlos: NLOS path-loss exponent.
        nakagami_shape: Integer shape of the LOS power-fading law; NLOS
            fading is always unit-mean exponential.
        los_scale_m: Decay length of the cubic-exponential LOS curve.
        los_model: Curve used when simulation draws link states.
    """

    k_los: float = 10.0 ** 4.11
    k_nlos: float = 10.0 ** 3.29
    alpha_los: float = 2.09
    alpha_nlos: float = 3.75
    nakagami_shape: int = 3
    los_scale_m: float = 82.5
    los_model: LosModel = LosModel.EXACT_3GPP

    def __post_init__(self) -> None:
        for name in ("k_los", "k_nlos", "los_scale_m"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.alpha_los) and math.isfinite(self.alpha_nlos)):
            raise ConfigurationError("path-loss exponents must be finite")
        if not 2.0 <= self.alpha_los < self.alpha_nlos:
            raise ConfigurationError(
                "exponents must satisfy 2 <= alpha_los < alpha_nlos, got "
                f"alpha_los={self.alpha_los!r}, alpha_nlos={self.alpha_nlos!r}"
            )
        if not isinstance(self.nakagami_shape, int) or isinstance(self.nakagami_shape, bool):
            raise ConfigurationError(f"nakagami_shape must be an integer, got {self.nakagami_shape!r}")
        if self.nakagami_shape < 1:
            raise ConfigurationError(f"nakagami_shape must be >= 1, got {self.nakagami_shape!r}")
        if not isinstance(self.los_model, LosModel):
            raise ConfigurationError(f"los_model must be a LosModel member, got {self.los_model!r}")


def _distances(value: Any, strictly_positive: bool) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("distances must be finite")
    if strictly_positive:
        if np.any(arr <= 0.0):
            raise ConfigurationError("distances must be > 0 m")
    elif np.any(arr < 0.0):
        raise ConfigurationError("distances must be >= 0 m")
    return arr


def exact_los_prob(distance_m):
    """LOS probability under the empirical urban curve.

    Args:
        distance_m: Link distance in meters; scalar or array, strictly
            positive.

    Returns:
        Probability in [0, 1]; a float for scalar input, else an array of
        the input shape.
    """
    arr = _distances(distance_m, strictly_positive=True)
    d_km = arr * _KM_PER_M
    near = np.minimum(0.5, 5.0 * np.exp(-_NEAR_SCALE_KM / d_km))
    far = np.minimum(0.5, 5.0 * np.exp(-d_km / _FAR_SCALE_KM))
    prob = 0.5 - near + far
    if np.ndim(distance_m) == 0:
        return float(prob)
    return prob


def approx_los_prob(distance_m, scale_m: float = 82.5):
    """LOS probability under the cubic-exponential curve exp(-(d/scale)^3).

    This is the curve the closed forms integrate against; it is strictly
    decreasing and analytically convenient where the empirical curve is
    piecewise.

    Args:
        distance_m: Link distance in meters; scalar or array, nonnegative.
        scale_m: Decay length, > 0.
    """
    if not (isinstance(scale_m, (int, float)) and math.isfinite(scale_m) and scale_m > 0):
        raise ConfigurationError(f"scale_m must be positive and finite, got {scale_m!r}")
    arr = _distances(distance_m, strictly_positive=False)
    with np.errstate(over="ignore"):
        prob = np.exp(-((arr / scale_m) ** 3))
    if np.ndim(distance_m) == 0:
        return float(prob)
    return prob


def los_probability(distance_m, params: ChannelParams):
    """LOS probability under the curve selected by ``params.los_model``."""
    if params.los_model is LosModel.CUBIC_EXPONENTIAL:
        return approx_los_prob(distance_m, params.los_scale_m)
    return exact_los_prob(distance_m)


def path_loss(distance_m, state: LinkState, params: ChannelParams):
    """Linear attenuation K * d^alpha of one link state.

    Received power is fading divided by this value.

    Args:
        distance_m: Link distance in meters, > 0; scalar or array.
        state: LOS or NLOS.
        params: Channel constants.
    """
    arr = _distances(distance_m, strictly_positive=True)
    if state.is_los:
        loss = params.k_los * arr ** params.alpha_los
    else:
        loss = params.k_nlos * arr ** params.alpha_nlos
    if np.ndim(distance_m) == 0:
        return float(loss)
    return loss


def sample_fading(state: LinkState, params: ChannelParams, rng: np.random.Generator, size=None):
    """Draw unit-mean power fading for one link state.

    NLOS links fade exponentially. LOS links use a unit-mean gamma with
    integer shape, realized as a scaled sum of exponentials so no rejection
    step is involved and shape 1 reduces to the NLOS law exactly.

    Args:
        state: Link state to sample for.
        params: Channel constants (``nakagami_shape`` is the LOS shape).
        rng: Source of randomness.
        size: None for a scalar draw, else a numpy-style shape.
    """
    if not state.is_los:
        draw = rng.standard_exponential(size)
        return float(draw) if size is None else draw
    shape = params.nakagami_shape
    if size is None:
        return float(rng.standard_exponential(shape).sum() / shape)
    dims = (size,) if isinstance(size, int) else tuple(size)
    return rng.standard_exponential(dims + (shape,)).sum(axis=-1) / shape


def fading_laplace(s: float, state: LinkState, params: ChannelParams) -> float:
    """Closed-form E[exp(-s h)] for the fading h of one link state."""
    if s < 0.0:
        raise ConfigurationError(f"transform argument must be >= 0, got {s!r}")
    if state.is_los:
        shape = params.nakagami_shape
        return (1.0 + s / shape) ** (-shape)
    return 1.0 / (1.0 + s)
