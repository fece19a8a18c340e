"""Monte-Carlo estimators for coverage, activity, and link LOS statistics.

Determinism contract: every trial (or draw) derives its own random stream
from (seed, stream id, trial index) and results aggregate in trial order,
so estimates are bit-identical regardless of worker count. Worker processes
receive small frozen plan objects; nothing here mutates shared state.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .analytic import DensityConfig, QuadratureSettings, ball_volume, mean_interference_beyond
from .channel import ChannelParams, approx_los_prob, los_probability
from .errors import ConfigurationError, DegenerateGeometryError
from .geometry import (
    NetworkRealization,
    SimGeometry,
    radius_for_expected_count,
    uniform_ball_points,
)

_COVERAGE_STREAM = 101
_ACTIVITY_STREAM = 202
_LINK_STREAM = 303

# Users are associated in bounded batches so dense configurations cannot
# exhaust memory; the constant batch size keeps draw order deterministic.
_UE_BATCH = 1_000_000

_Z95 = 1.96

ASSOCIATION_RULES = ("nearest_active", "nearest")


def db_to_linear(value_db: float) -> float:
    """Convert a dB quantity to its linear ratio."""
    return 10.0 ** (value_db / 10.0)


def proportion_ci_halfwidth(successes: int, trials: int) -> float:
    """95% halfwidth for a binomial proportion.

    Normal approximation in the interior; Wilson interval when fewer than
    five successes or failures remain, where the normal width collapses.
    """
    if trials <= 0:
        raise ConfigurationError(f"trials must be positive, got {trials!r}")
    if not 0 <= successes <= trials:
        raise ConfigurationError(f"successes {successes!r} outside [0, {trials}]")
    p = successes / trials
    if successes < 5 or successes > trials - 5:
        z2 = _Z95 * _Z95
        denominator = 1.0 + z2 / trials
        return _Z95 * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denominator
    return _Z95 * math.sqrt(p * (1.0 - p) / trials)


@dataclass(frozen=True, eq=False)
class CoverageEstimate:
    """Monte-Carlo coverage estimate with a 95% confidence halfwidth."""

    p_hat: float
    ci_halfwidth: float
    trials: int
    covered_count: int
    seed: int
    theta_db: float
    diagnostics: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ActivityEstimate:
    """Pooled activity fraction over network draws, with a 95% halfwidth."""

    p_hat: float
    ci_halfwidth: float
    draws: int
    cells: int
    seed: int


@dataclass(frozen=True, eq=False)
class LinkLosEstimate:
    """Empirical LOS probability of the n-th nearest transmitting AP."""

    p_hat: float
    ci_halfwidth: float
    order: int
    draws: int
    rejected: int
    seed: int


def _run_indexed(chunk_fn, plan, total: int, threads: int) -> np.ndarray:
    """Evaluate per-index work in fixed order, optionally across processes.

    Chunk boundaries influence only scheduling: each index owns its random
    stream, and chunks are concatenated in index order.
    """
    if threads <= 1:
        return chunk_fn(plan, 0, total)
    edges = np.unique(np.linspace(0, total, threads * 4 + 1).astype(int))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(chunk_fn, plan, int(a), int(b))
            for a, b in zip(edges[:-1], edges[1:])
            if b > a
        ]
        pieces = [f.result() for f in futures]
    return np.concatenate(pieces)


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _CoveragePlan:
    seed: int
    lambda_ap: float
    lambda_ue: float
    params: ChannelParams
    association: str
    all_active: bool
    window_radius: float
    ap_radius: float
    ue_radius: float
    expected_aps: float
    expected_ues: float
    redraw_limit: int
    tail_unit: float


def _los_probabilities(distances, params: ChannelParams):
    return los_probability(distances, params)


def _sir_sample(
    serving_distance: float,
    interferer_distances: np.ndarray,
    params: ChannelParams,
    rng: np.random.Generator,
    tail_interference: float = 0.0,
) -> float:
    """One SIR draw given link geometry; fading and LOS states are sampled here."""
    shape = params.nakagami_shape
    serving_los = rng.random() < _los_probabilities(serving_distance, params)
    if serving_los:
        gain = rng.standard_exponential(shape).sum() / shape
        attenuation = params.k_los * serving_distance ** params.alpha_los
    else:
        gain = rng.standard_exponential()
        attenuation = params.k_nlos * serving_distance ** params.alpha_nlos
    signal = gain / attenuation
    interference = float(tail_interference)
    count = int(interferer_distances.size)
    if count:
        is_los = rng.random(count) < _los_probabilities(interferer_distances, params)
        gains = np.empty(count)
        n_los = int(np.count_nonzero(is_los))
        if n_los:
            gains[is_los] = rng.standard_exponential((n_los, shape)).sum(axis=1) / shape
        if n_los < count:
            gains[~is_los] = rng.standard_exponential(count - n_los)
        losses = np.where(
            is_los,
            params.k_los * interferer_distances ** params.alpha_los,
            params.k_nlos * interferer_distances ** params.alpha_nlos,
        )
        interference += float((gains / losses).sum())
    if interference <= 0.0:
        return math.inf
    return signal / interference


def compute_sir(
    net: NetworkRealization,
    params: ChannelParams,
    rng: np.random.Generator,
    tail_interference: float = 0.0,
) -> float:
    """SIR of the typical user at the origin for one realization.

    The serving link is ``net.serving_index``; interference sums fading over
    every other active AP, each link drawing its own LOS state from the
    configured curve. With no active interferer and no tail term the result
    is positive infinity: covered at any finite threshold.
    """
    distances = net.ap_distances()
    mask = net.active.copy()
    mask[net.serving_index] = False
    return _sir_sample(
        float(distances[net.serving_index]),
        distances[mask],
        params,
        rng,
        tail_interference,
    )


def _mark_active(aps: np.ndarray, ue_count: int, ue_radius: float, rng: np.random.Generator) -> np.ndarray:
    active = np.zeros(aps.shape[0], dtype=bool)
    if ue_count == 0:
        return active
    tree = cKDTree(aps)
    remaining = ue_count
    while remaining > 0:
        batch = min(remaining, _UE_BATCH)
        users = uniform_ball_points(batch, ue_radius, rng)
        _, owners = tree.query(users, workers=1)
        active[owners] = True
        remaining -= batch
    return active


def _coverage_trial(plan: _CoveragePlan, index: int) -> float:
    rng = np.random.default_rng([plan.seed, _COVERAGE_STREAM, index])
    for _ in range(plan.redraw_limit):
        count = int(rng.poisson(plan.expected_aps))
        if count == 0:
            continue
        aps = uniform_ball_points(count, plan.ap_radius, rng)
        distances = np.linalg.norm(aps, axis=1)
        if plan.all_active:
            active = np.ones(count, dtype=bool)
        else:
            ue_count = int(rng.poisson(plan.expected_ues))
            active = _mark_active(aps, ue_count, plan.ue_radius, rng)
        if plan.association == "nearest":
            serving = int(np.argmin(distances))
            active[serving] = True
        else:
            if not active.any():
                continue
            candidates = np.flatnonzero(active)
            serving = int(candidates[np.argmin(distances[candidates])])
        serving_distance = float(distances[serving])
        if serving_distance > plan.window_radius:
            continue
        in_window = distances <= plan.window_radius
        if plan.all_active:
            activity_fraction = 1.0
        else:
            window_count = int(np.count_nonzero(in_window))
            if window_count == 0:
                continue
            activity_fraction = float(np.count_nonzero(active & in_window)) / window_count
        interferers = active & in_window
        interferers[serving] = False
        tail = plan.tail_unit * plan.lambda_ap * activity_fraction
        return _sir_sample(serving_distance, distances[interferers], plan.params, rng, tail)
    raise DegenerateGeometryError(
        f"no usable draw in {plan.redraw_limit} attempts at "
        f"lambda_ap={plan.lambda_ap:.4g}, lambda_ue={plan.lambda_ue:.4g}"
    )


def _coverage_chunk(plan: _CoveragePlan, start: int, stop: int) -> np.ndarray:
    out = np.empty(stop - start)
    for i in range(start, stop):
        out[i - start] = _coverage_trial(plan, i)
    return out


def _plan_coverage(
    densities: DensityConfig,
    params: ChannelParams,
    geom: SimGeometry,
    seed: int,
    association: str,
    quadrature: QuadratureSettings | None,
) -> _CoveragePlan:
    lambda_ap = densities.lambda_ap
    lambda_active = densities.lambda_active
    if lambda_active <= 0.0:
        raise ConfigurationError("coverage needs lambda_ue > 0 so that some AP transmits")
    margin = geom.resolve_guard_margin(lambda_ap)
    if geom.ap_region_radius is not None:
        ap_radius = geom.ap_region_radius
        if margin >= ap_radius:
            raise ConfigurationError(
                f"guard margin {margin:.4g} m swallows the region radius {ap_radius:.4g} m"
            )
        window = ap_radius - margin
    else:
        window = max(
            radius_for_expected_count(geom.min_expected_active, lambda_active),
            radius_for_expected_count(geom.min_expected_aps, lambda_ap),
        )
        ap_radius = window + margin
    # Users one margin past the window give every window AP its true
    # activity; the belt APs beyond the window never interfere, so their
    # flags need no guard of their own.
    ue_radius = ap_radius
    ratio = densities.lambda_ue / lambda_ap
    all_active = ratio >= geom.all_active_ratio
    expected_aps = lambda_ap * ball_volume(ap_radius)
    expected_ues = 0.0 if all_active else densities.lambda_ue * ball_volume(ue_radius)
    if expected_aps > geom.max_expected_points:
        raise ConfigurationError(
            f"expected AP count {expected_aps:.4g} exceeds max_expected_points "
            f"{geom.max_expected_points:.4g}"
        )
    if expected_ues > geom.max_expected_ues:
        raise ConfigurationError(
            f"expected user count {expected_ues:.4g} exceeds max_expected_ues "
            f"{geom.max_expected_ues:.4g}"
        )
    tail_unit = 0.0
    if geom.tail_completion:
        settings = quadrature if quadrature is not None else QuadratureSettings()
        tail_unit = mean_interference_beyond(window, 1.0, params, settings)
    return _CoveragePlan(
        seed=seed,
        lambda_ap=lambda_ap,
        lambda_ue=densities.lambda_ue,
        params=params,
        association=association,
        all_active=all_active,
        window_radius=window,
        ap_radius=ap_radius,
        ue_radius=ue_radius,
        expected_aps=expected_aps,
        expected_ues=expected_ues,
        redraw_limit=geom.redraw_limit,
        tail_unit=tail_unit,
    )


def simulate_coverage(
    theta_db: float,
    densities: DensityConfig,
    params: ChannelParams | None = None,
    geom: SimGeometry | None = None,
    trials: int = 20_000,
    seed: int = 0,
    threads: int = 1,
    association: str = "nearest_active",
    quadrature: QuadratureSettings | None = None,
    return_sirs: bool = False,
):
    """Estimate P(SIR >= theta) over independent network realizations.

    Association rules: "nearest_active" serves the typical user from the
    nearest transmitting AP, with activity decided by the other users; this
    matches the serving-distance law the analytic bounds integrate over.
    "nearest" serves from the nearest AP outright, activating it on behalf
    of the typical user, which overweights short serving links wherever
    most cells are silent. At user-to-AP ratios past
    ``geom.all_active_ratio`` the two rules coincide and per-user
    association is skipped.

    Args:
        theta_db: SIR threshold in dB.
        densities: Operating point; lambda_ue must be positive.
        params: Channel constants; defaults to the stock channel.
        geom: Region controls; defaults to automatic sizing.
        trials: Number of realizations, >= 100.
        seed: Base seed; each trial derives stream (seed, tag, index).
        threads: Worker processes; never affects the estimate.
        association: One of ASSOCIATION_RULES.
        quadrature: Tolerances for the mean-tail integral.
        return_sirs: When set, also return the per-trial SIR array so
            threshold sweeps can reuse one simulation.

    Returns:
        CoverageEstimate, or (CoverageEstimate, sirs) with ``return_sirs``.
    """
    params = params if params is not None else ChannelParams()
    geom = geom if geom is not None else SimGeometry()
    if not isinstance(trials, int) or trials < 100:
        raise ConfigurationError(f"trials must be an integer >= 100, got {trials!r}")
    if association not in ASSOCIATION_RULES:
        raise ConfigurationError(
            f"association must be one of {ASSOCIATION_RULES}, got {association!r}"
        )
    if not isinstance(threads, int) or threads < 1:
        raise ConfigurationError(f"threads must be an integer >= 1, got {threads!r}")
    plan = _plan_coverage(densities, params, geom, seed, association, quadrature)
    sirs = _run_indexed(_coverage_chunk, plan, trials, threads)
    theta = db_to_linear(theta_db)
    covered = int(np.count_nonzero(sirs >= theta))
    estimate = CoverageEstimate(
        p_hat=covered / trials,
        ci_halfwidth=proportion_ci_halfwidth(covered, trials),
        trials=trials,
        covered_count=covered,
        seed=seed,
        theta_db=float(theta_db),
        diagnostics=_coverage_diagnostics(plan, densities, params, quadrature),
    )
    if return_sirs:
        return estimate, sirs
    return estimate


def _coverage_diagnostics(
    plan: _CoveragePlan,
    densities: DensityConfig,
    params: ChannelParams,
    quadrature: QuadratureSettings | None,
) -> dict[str, float]:
    diag = {
        "window_radius_m": plan.window_radius,
        "ap_region_radius_m": plan.ap_radius,
        "ue_region_radius_m": plan.ue_radius,
        "expected_aps": plan.expected_aps,
        "expected_ues": plan.expected_ues,
        "all_active": float(plan.all_active),
        "tail_mean_interference": plan.tail_unit * densities.lambda_active,
    }
    if plan.tail_unit > 0.0:
        # Share of the mean interference budget carried by the completion
        # term, referenced to a serving link at the mean nearest distance.
        settings = quadrature if quadrature is not None else QuadratureSettings()
        reference = math.gamma(4.0 / 3.0) * (
            4.0 * math.pi / 3.0 * densities.lambda_active
        ) ** (-1.0 / 3.0)
        total = mean_interference_beyond(reference, densities.lambda_active, params, settings)
        if total > 0.0:
            diag["tail_fraction"] = diag["tail_mean_interference"] / total
    return diag


def coverage_curve(sirs: np.ndarray, theta_dbs: Sequence[float]) -> np.ndarray:
    """Coverage fractions at several thresholds over one stored SIR sample.

    Reusing the sample makes the curve nonincreasing by construction.
    """
    values = np.asarray(sirs, dtype=float)
    if values.size == 0:
        raise ConfigurationError("sirs must be non-empty")
    thetas = tuple(theta_dbs)
    if not thetas:
        raise ConfigurationError("theta_dbs must be non-empty")
    return np.array([float(np.mean(values >= db_to_linear(t))) for t in thetas])


# ---------------------------------------------------------------------------
# activity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _ActivityPlan:
    seed: int
    expected_aps: float
    expected_ues: float
    ap_radius: float
    ue_radius: float
    stat_radius: float
    include_typical: bool
    redraw_limit: int


def _activity_chunk(plan: _ActivityPlan, start: int, stop: int) -> np.ndarray:
    out = np.zeros((stop - start, 2), dtype=np.int64)
    for i in range(start, stop):
        rng = np.random.default_rng([plan.seed, _ACTIVITY_STREAM, i])
        count = 0
        for _ in range(plan.redraw_limit):
            count = int(rng.poisson(plan.expected_aps))
            if count:
                break
        else:
            raise DegenerateGeometryError(
                f"zero APs in {plan.redraw_limit} draws (expected {plan.expected_aps:.3g})"
            )
        aps = uniform_ball_points(count, plan.ap_radius, rng)
        ue_count = int(rng.poisson(plan.expected_ues)) if plan.expected_ues > 0 else 0
        active = _mark_active(aps, ue_count, plan.ue_radius, rng)
        distances = np.linalg.norm(aps, axis=1)
        if plan.include_typical:
            active[int(np.argmin(distances))] = True
        inner = distances <= plan.stat_radius
        out[i - start, 0] = int(np.count_nonzero(active & inner))
        out[i - start, 1] = int(np.count_nonzero(inner))
    return out


def empirical_activity_probability(
    densities: DensityConfig,
    geom: SimGeometry | None = None,
    draws: int = 200,
    seed: int = 0,
    threads: int = 1,
    include_typical_ue: bool = False,
) -> ActivityEstimate:
    """Fraction of APs serving at least one user, pooled over network draws.

    Only APs inside the guard-corrected core (one guard margin in from the
    AP-region boundary) are counted, so edge cells cannot bias the
    statistic. The typical user is excluded by default because activity is
    a property of the unconditioned network; include it to measure the
    conditioned variant instead.

    The halfwidth uses the ratio-estimator variance across draws, which
    absorbs the within-draw correlation of neighboring cells.
    """
    geom = geom if geom is not None else SimGeometry()
    if not isinstance(draws, int) or draws < 1:
        raise ConfigurationError(f"draws must be an integer >= 1, got {draws!r}")
    if not isinstance(threads, int) or threads < 1:
        raise ConfigurationError(f"threads must be an integer >= 1, got {threads!r}")
    ap_radius = geom.resolve_ap_radius(densities.lambda_ap)
    margin = geom.resolve_guard_margin(densities.lambda_ap)
    stat_radius = ap_radius - margin
    if stat_radius <= 0.0:
        raise ConfigurationError(
            f"guard margin {margin:.4g} m swallows the AP region {ap_radius:.4g} m; "
            "raise min_expected_aps or set ap_region_radius"
        )
    ue_radius = ap_radius
    expected_aps = densities.lambda_ap * ball_volume(ap_radius)
    expected_ues = densities.lambda_ue * ball_volume(ue_radius)
    if expected_aps > geom.max_expected_points:
        raise ConfigurationError(
            f"expected AP count {expected_aps:.4g} exceeds max_expected_points "
            f"{geom.max_expected_points:.4g}"
        )
    if expected_ues > geom.max_expected_ues:
        raise ConfigurationError(
            f"expected user count {expected_ues:.4g} exceeds max_expected_ues "
            f"{geom.max_expected_ues:.4g}"
        )
    plan = _ActivityPlan(
        seed=seed,
        expected_aps=expected_aps,
        expected_ues=expected_ues,
        ap_radius=ap_radius,
        ue_radius=ue_radius,
        stat_radius=stat_radius,
        include_typical=include_typical_ue,
        redraw_limit=geom.redraw_limit,
    )
    counts = _run_indexed(_activity_chunk, plan, draws, threads)
    active_total = int(counts[:, 0].sum())
    cell_total = int(counts[:, 1].sum())
    if cell_total == 0:
        raise DegenerateGeometryError("no AP ever landed inside the guarded core")
    p_hat = active_total / cell_total
    if draws > 1:
        residuals = counts[:, 0] - p_hat * counts[:, 1]
        se = math.sqrt(float(np.sum(residuals ** 2)) * draws / (draws - 1)) / cell_total
        halfwidth = _Z95 * se
    else:
        halfwidth = proportion_ci_halfwidth(active_total, cell_total)
    return ActivityEstimate(
        p_hat=p_hat,
        ci_halfwidth=halfwidth,
        draws=draws,
        cells=cell_total,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# link LOS
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _LinkPlan:
    seed: int
    orders: tuple[int, ...]
    los_scale_m: float
    all_active: bool
    expected_aps: float
    expected_ues: float
    ap_radius: float
    ue_radius: float
    stat_radius: float
    redraw_limit: int


def _link_chunk(plan: _LinkPlan, start: int, stop: int) -> np.ndarray:
    max_order = max(plan.orders)
    out = np.zeros((stop - start, 1 + len(plan.orders)), dtype=np.int64)
    for i in range(start, stop):
        rng = np.random.default_rng([plan.seed, _LINK_STREAM, i])
        count = 0
        for _ in range(plan.redraw_limit):
            count = int(rng.poisson(plan.expected_aps))
            if count:
                break
        else:
            raise DegenerateGeometryError(
                f"zero APs in {plan.redraw_limit} draws (expected {plan.expected_aps:.3g})"
            )
        aps = uniform_ball_points(count, plan.ap_radius, rng)
        if plan.all_active:
            active = np.ones(count, dtype=bool)
        else:
            ue_count = int(rng.poisson(plan.expected_ues)) if plan.expected_ues > 0 else 0
            active = _mark_active(aps, ue_count, plan.ue_radius, rng)
        distances = np.linalg.norm(aps, axis=1)
        trusted = np.sort(distances[active & (distances <= plan.stat_radius)])
        if trusted.size < max_order:
            continue
        out[i - start, 0] = 1
        for j, order in enumerate(plan.orders):
            p = approx_los_prob(float(trusted[order - 1]), plan.los_scale_m)
            out[i - start, 1 + j] = int(rng.random() < p)
    return out


def empirical_link_los_probs(
    orders: Sequence[int],
    densities: DensityConfig,
    params: ChannelParams | None = None,
    geom: SimGeometry | None = None,
    draws: int = 2000,
    seed: int = 0,
    threads: int = 1,
) -> tuple[LinkLosEstimate, ...]:
    """LOS fractions for several neighbor orders from one shared set of draws.

    Each draw realizes the network without the typical user, finds the
    n-th nearest transmitting AP to the origin, and flips a LOS coin from
    the cubic-exponential curve at that distance, matching the quantity the
    closed form describes. Draws whose guarded core holds fewer than
    max(orders) transmitting APs are rejected and counted; the region is
    sized so that this is vanishingly rare at sane settings.
    """
    params = params if params is not None else ChannelParams()
    geom = geom if geom is not None else SimGeometry()
    orders = tuple(orders)
    if not orders:
        raise ConfigurationError("orders must be non-empty")
    for n in orders:
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ConfigurationError(f"orders must be integers >= 1, got {n!r}")
    if not isinstance(draws, int) or draws < 1:
        raise ConfigurationError(f"draws must be an integer >= 1, got {draws!r}")
    lambda_active = densities.lambda_active
    if lambda_active <= 0.0:
        raise ConfigurationError("link statistics need lambda_ue > 0 so that some AP transmits")
    margin = geom.resolve_guard_margin(densities.lambda_ap)
    if geom.ap_region_radius is not None:
        ap_radius = geom.ap_region_radius
        if margin >= ap_radius:
            raise ConfigurationError(
                f"guard margin {margin:.4g} m swallows the region radius {ap_radius:.4g} m"
            )
        stat_radius = ap_radius - margin
    else:
        stat_radius = radius_for_expected_count(
            max(geom.min_expected_active, 4 * max(orders)), lambda_active
        )
        ap_radius = stat_radius + margin
    ue_radius = ap_radius
    all_active = densities.lambda_ue / densities.lambda_ap >= geom.all_active_ratio
    expected_aps = densities.lambda_ap * ball_volume(ap_radius)
    expected_ues = 0.0 if all_active else densities.lambda_ue * ball_volume(ue_radius)
    if expected_aps > geom.max_expected_points:
        raise ConfigurationError(
            f"expected AP count {expected_aps:.4g} exceeds max_expected_points "
            f"{geom.max_expected_points:.4g}"
        )
    if expected_ues > geom.max_expected_ues:
        raise ConfigurationError(
            f"expected user count {expected_ues:.4g} exceeds max_expected_ues "
            f"{geom.max_expected_ues:.4g}"
        )
    plan = _LinkPlan(
        seed=seed,
        orders=orders,
        los_scale_m=params.los_scale_m,
        all_active=all_active,
        expected_aps=expected_aps,
        expected_ues=expected_ues,
        ap_radius=ap_radius,
        ue_radius=ue_radius,
        stat_radius=stat_radius,
        redraw_limit=geom.redraw_limit,
    )
    rows = _run_indexed(_link_chunk, plan, draws, threads)
    valid = rows[:, 0] == 1
    accepted = int(np.count_nonzero(valid))
    rejected = draws - accepted
    if accepted == 0:
        raise DegenerateGeometryError(
            f"every draw was rejected; the region never held {max(orders)} transmitting APs"
        )
    estimates = []
    for j, order in enumerate(orders):
        successes = int(rows[valid, 1 + j].sum())
        estimates.append(
            LinkLosEstimate(
                p_hat=successes / accepted,
                ci_halfwidth=proportion_ci_halfwidth(successes, accepted),
                order=order,
                draws=draws,
                rejected=rejected,
                seed=seed,
            )
        )
    return tuple(estimates)


def empirical_link_los_prob(
    n: int,
    densities: DensityConfig,
    params: ChannelParams | None = None,
    geom: SimGeometry | None = None,
    draws: int = 2000,
    seed: int = 0,
    threads: int = 1,
) -> LinkLosEstimate:
    """Single-order convenience wrapper around :func:`empirical_link_los_probs`."""
    return empirical_link_los_probs((n,), densities, params, geom, draws, seed, threads)[0]
