"""Poisson fields in balls, nearest-neighbor queries, network realizations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .analytic import BALL_VOLUME_FACTOR, DensityConfig, ball_volume
from .errors import ConfigurationError, DegenerateGeometryError


def mean_nearest_distance(intensity: float) -> float:
    """Expected distance from a fixed location to the nearest field point."""
    if not (math.isfinite(intensity) and intensity > 0):
        raise ConfigurationError(f"intensity must be positive and finite, got {intensity!r}")
    return math.gamma(4.0 / 3.0) * (BALL_VOLUME_FACTOR * intensity) ** (-1.0 / 3.0)


def default_guard_margin(intensity: float) -> float:
    """Guard width used around sampling regions: three mean nearest spacings."""
    return 3.0 * mean_nearest_distance(intensity)


@dataclass(frozen=True)
class Point3:
    """A location in 3-D space, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ConfigurationError(
                f"coordinates must be finite, got ({self.x!r}, {self.y!r}, {self.z!r})"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True, eq=False)
class PppRealization:
    """One draw of a homogeneous Poisson field inside a ball at the origin.

    ``intensity`` may be zero, which models a deliberately empty process
    (no users configured); the sampler itself never produces points then.
    """

    intensity: float
    region_radius: float
    points: np.ndarray

    def __post_init__(self) -> None:
        if not (math.isfinite(self.intensity) and self.intensity >= 0):
            raise ConfigurationError(f"intensity must be nonnegative and finite, got {self.intensity!r}")
        if not (math.isfinite(self.region_radius) and self.region_radius > 0):
            raise ConfigurationError(f"region_radius must be positive and finite, got {self.region_radius!r}")
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise ConfigurationError(f"points must have shape (n, 3), got {self.points.shape!r}")
        if self.points.size:
            norms = np.linalg.norm(self.points, axis=1)
            if float(norms.max()) > self.region_radius * (1.0 + 1e-12):
                raise ConfigurationError("every point must lie within the region ball")

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


def uniform_ball_points(count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform points in a ball: isotropic directions, cube-root radii."""
    if count == 0:
        return np.empty((0, 3))
    directions = rng.standard_normal((count, 3))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * np.cbrt(rng.random((count, 1)))
    return directions * (radii / norms)


def sample_ppp_ball(
    intensity: float,
    radius: float,
    rng: np.random.Generator,
    max_expected_points: float = 1.0e7,
) -> PppRealization:
    """Sample a homogeneous Poisson field in a ball around the origin.

    The count is Poisson with mean intensity * volume; locations are exact
    uniform draws (no rejection).

    Raises:
        ConfigurationError: On domain violations or when the expected count
            exceeds ``max_expected_points``.
    """
    if not (isinstance(intensity, (int, float)) and math.isfinite(intensity) and intensity >= 0):
        raise ConfigurationError(f"intensity must be nonnegative and finite, got {intensity!r}")
    if not (isinstance(radius, (int, float)) and math.isfinite(radius) and radius > 0):
        raise ConfigurationError(f"radius must be positive and finite, got {radius!r}")
    expected = intensity * ball_volume(radius)
    if expected > max_expected_points:
        raise ConfigurationError(
            f"expected point count {expected:.4g} exceeds the cap {max_expected_points:.4g} "
            f"(intensity={intensity:.4g}, radius={radius:.4g})"
        )
    count = int(rng.poisson(expected)) if expected > 0 else 0
    return PppRealization(float(intensity), float(radius), uniform_ball_points(count, radius, rng))


@dataclass(frozen=True)
class NearestResult:
    """Nearest-neighbor query result; pairs are (index, distance), nondecreasing."""

    pairs: tuple[tuple[int, float], ...]
    truncated: bool


def _points_as_array(points) -> np.ndarray:
    if isinstance(points, PppRealization):
        return points.points
    if isinstance(points, np.ndarray):
        return points.reshape(-1, 3)
    rows = [p.as_array() if isinstance(p, Point3) else np.asarray(p, dtype=float) for p in points]
    if not rows:
        return np.empty((0, 3))
    return np.vstack(rows)


def nearest_indices(points, query, k: int = 1) -> NearestResult:
    """Indices and distances of the k points nearest to a query location.

    Exhaustive scan with a stable sort, so equal distances resolve to the
    lower index. Asking for more neighbors than there are points returns
    everything, marked truncated.

    Args:
        points: PppRealization, (n, 3) array, or sequence of Point3/triples.
        query: Point3 or length-3 coordinate.
        k: Number of neighbors, >= 1.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ConfigurationError(f"k must be an integer >= 1, got {k!r}")
    array = _points_as_array(points)
    if array.shape[0] == 0:
        raise ConfigurationError("points must be non-empty")
    target = query.as_array() if isinstance(query, Point3) else np.asarray(query, dtype=float)
    distances = np.linalg.norm(array - target, axis=1)
    order = np.argsort(distances, kind="stable")[:k]
    pairs = tuple((int(i), float(distances[i])) for i in order)
    return NearestResult(pairs=pairs, truncated=k > distances.size)


@dataclass(frozen=True)
class SimGeometry:
    """Region sizing and sampling controls for network simulation.

    None radii mean automatic sizing: the AP ball grows until it holds
    ``min_expected_aps`` points in expectation, and coverage runs also grow
    their interferer window until it holds ``min_expected_active``
    transmitting APs. The guard margin defaults to three mean nearest-AP
    spacings, wide enough that activity statistics inside the guarded core
    are unbiased by the region boundary. Interference from beyond the
    sampled window is restored in the mean when ``tail_completion`` is on,
    so window size controls fluctuation fidelity rather than the
    interference budget; ``all_active_ratio`` is the user-to-AP density
    ratio beyond which cells are so saturated that per-user association is
    skipped and every AP transmits.
    """

    ap_region_radius: float | None = None
    ue_guard_margin: float | None = None
    min_expected_aps: int = 2000
    min_expected_active: int = 1000
    max_expected_points: float = 1.0e7
    max_expected_ues: float = 5.0e6
    redraw_limit: int = 100
    all_active_ratio: float = 50.0
    tail_completion: bool = True

    def __post_init__(self) -> None:
        for name in ("ap_region_radius", "ue_guard_margin"):
            value = getattr(self, name)
            if value is not None and not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive or None, got {value!r}")
        for name in ("min_expected_aps", "min_expected_active", "redraw_limit"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigurationError(f"{name} must be an integer >= 1, got {value!r}")
        for name in ("max_expected_points", "max_expected_ues", "all_active_ratio"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ConfigurationError(f"{name} must be positive, got {value!r}")

    def resolve_ap_radius(self, lambda_ap: float) -> float:
        """AP sampling radius: explicit value, or sized for min_expected_aps."""
        if self.ap_region_radius is not None:
            return self.ap_region_radius
        return radius_for_expected_count(self.min_expected_aps, lambda_ap)

    def resolve_guard_margin(self, lambda_ap: float) -> float:
        if self.ue_guard_margin is not None:
            return self.ue_guard_margin
        return default_guard_margin(lambda_ap)


def radius_for_expected_count(count: float, intensity: float) -> float:
    """Radius of the ball holding ``count`` expected points at ``intensity``."""
    if count <= 0:
        raise ConfigurationError(f"count must be positive, got {count!r}")
    if not (math.isfinite(intensity) and intensity > 0):
        raise ConfigurationError(f"intensity must be positive and finite, got {intensity!r}")
    return (count / (BALL_VOLUME_FACTOR * intensity)) ** (1.0 / 3.0)


@dataclass(frozen=True, eq=False)
class NetworkRealization:
    """A sampled network with activity flags and the origin's serving AP.

    ``serving_index`` is always the AP nearest to the origin. When the
    realization was built with the typical user included, that AP is active
    by construction; without the typical user the flags describe the
    unconditioned network and the serving AP may be silent.
    """

    aps: PppRealization
    ues: PppRealization
    active: np.ndarray
    serving_index: int
    includes_typical_ue: bool
    redraws: int

    def __post_init__(self) -> None:
        if self.active.shape != (self.aps.count,):
            raise ConfigurationError("activity flags must align with the AP list")
        if not 0 <= self.serving_index < self.aps.count:
            raise ConfigurationError(f"serving_index {self.serving_index!r} out of range")
        if self.includes_typical_ue and not bool(self.active[self.serving_index]):
            raise ConfigurationError("the serving AP must be active when the typical user is present")
        if self.ues.region_radius < self.aps.region_radius:
            raise ConfigurationError("the user region must contain the AP region")

    @property
    def ue_region_radius(self) -> float:
        return self.ues.region_radius

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active))

    def ap_distances(self) -> np.ndarray:
        """Distances of every AP from the origin."""
        return np.linalg.norm(self.aps.points, axis=1)


def realize_network(
    densities: DensityConfig,
    geometry: SimGeometry,
    rng: np.random.Generator,
    include_typical_ue: bool = True,
) -> NetworkRealization:
    """Sample APs and users, associate each user with its nearest AP, flag activity.

    Users are drawn in a ball one guard margin wider than the AP ball so
    APs near the AP-region boundary can still be activated by users just
    outside it. The typical user at the origin joins association when
    ``include_typical_ue`` is set (the conditioning used for coverage);
    disable it to measure unconditioned activity statistics.

    Raises:
        ConfigurationError: When expected counts exceed the configured caps.
        DegenerateGeometryError: When every permitted redraw yields zero APs.
    """
    ap_radius = geometry.resolve_ap_radius(densities.lambda_ap)
    margin = geometry.resolve_guard_margin(densities.lambda_ap)
    ue_radius = ap_radius + margin
    expected_ues = densities.lambda_ue * ball_volume(ue_radius)
    if expected_ues > geometry.max_expected_ues:
        raise ConfigurationError(
            f"expected user count {expected_ues:.4g} exceeds max_expected_ues "
            f"{geometry.max_expected_ues:.4g}; shrink the region or the user density"
        )
    aps = None
    redraws = 0
    for _ in range(geometry.redraw_limit):
        candidate = sample_ppp_ball(densities.lambda_ap, ap_radius, rng, geometry.max_expected_points)
        if candidate.count > 0:
            aps = candidate
            break
        redraws += 1
    if aps is None:
        raise DegenerateGeometryError(
            f"zero APs in {geometry.redraw_limit} draws "
            f"(expected {densities.lambda_ap * ball_volume(ap_radius):.3g} per draw)"
        )
    ues = sample_ppp_ball(densities.lambda_ue, ue_radius, rng, geometry.max_expected_points)
    active = np.zeros(aps.count, dtype=bool)
    if ues.count:
        tree = cKDTree(aps.points)
        _, owners = tree.query(ues.points, workers=1)
        active[owners] = True
    serving_index = int(np.argmin(np.linalg.norm(aps.points, axis=1)))
    if include_typical_ue:
        active[serving_index] = True
    return NetworkRealization(
        aps=aps,
        ues=ues,
        active=active,
        serving_index=serving_index,
        includes_typical_ue=include_typical_ue,
        redraws=redraws,
    )
