"""Self-contained acceptance suite: one named check per shipped guarantee.

Each criterion prints a single PASS/FAIL line with its key numbers. The
A-checks pin the stock channel and their own operating points so they
verify the shipped model regardless of user configuration; the
channel-sanity check inspects the configured channel, so a tampered
constant fails fast with a named reason.
"""

from __future__ import annotations

import dataclasses
import math
import sys
import time
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np
from scipy.integrate import quad as _scipy_quad
from scipy.stats import kstest

from .analytic import (
    DensityConfig,
    QuadratureSettings,
    ball_volume,
    coverage_bounds,
    interference_laplace,
    link_los_prob,
    link_los_prob_quadrature,
    nth_nearest_cdf,
    nth_nearest_pdf,
    integrate_semi_infinite,
)
from .channel import ChannelParams, LinkState, LosModel, approx_los_prob, path_loss
from .errors import ConfigurationError
from .geometry import SimGeometry
from .runner import ExperimentConfig, run_fig1, run_fig2, run_fig3
from .simulate import (
    db_to_linear,
    empirical_activity_probability,
    empirical_link_los_probs,
    simulate_coverage,
)

_ACCEPT_SEED = 20260816


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed_s: float


def _check_channel_sanity(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = config.channel
    crossover = (params.k_los / params.k_nlos) ** (1.0 / (params.alpha_nlos - params.alpha_los))
    problems = []
    if not crossover <= 10.0:
        problems.append(
            f"LOS/NLOS path-loss crossover at {crossover:.3g} m (must be <= 10 m); "
            f"check k_los={params.k_los:.4g} against k_nlos={params.k_nlos:.4g}"
        )
    distances = np.logspace(1.0, 3.0, 40)
    nlos = path_loss(distances, LinkState.NLOS, params)
    los = path_loss(distances, LinkState.LOS, params)
    if not np.all(nlos > los):
        problems.append("NLOS path loss does not exceed LOS on [10, 1000] m")
    full = np.logspace(-1.0, 4.0, 60)
    from .channel import exact_los_prob

    for name, curve in (("exact", exact_los_prob(full)), ("approx", approx_los_prob(full, params.los_scale_m))):
        if not (np.all(curve >= 0.0) and np.all(curve <= 1.0)):
            problems.append(f"{name} LOS curve leaves [0, 1]")
    if problems:
        return False, "; ".join(problems)
    return True, f"path-loss crossover {crossover:.3g} m, ordering and LOS ranges hold"


def _check_a1(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    started = time.perf_counter()
    geom = SimGeometry(min_expected_aps=6000, max_expected_ues=2e7)
    worst = 0.0
    min_cells = math.inf
    for lambda_ap in (1e-3, 1e-2, 1e-1):
        for lambda_ue in (1e-4, 1e-2, 1.0):
            densities = DensityConfig(lambda_ap, lambda_ue)
            est = empirical_activity_probability(
                densities, geom, draws=3, seed=_ACCEPT_SEED, threads=threads
            )
            worst = max(worst, abs(densities.activity - est.p_hat))
            min_cells = min(min_cells, est.cells)
    elapsed = time.perf_counter() - started
    passed = worst <= 0.02 and min_cells >= 10_000 and elapsed <= 120.0
    return passed, (
        f"max|q-q_hat|={worst:.4f} (tol 0.02), min pooled cells {int(min_cells)} "
        f"(need 1e4), {elapsed:.0f}s (limit 120)"
    )


def _check_a2(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = ChannelParams()
    grid = np.logspace(-9.0, -1.0, 6)
    worst_rel = 0.0
    for n in (1, 2, 3):
        for lam in grid:
            closed = link_los_prob(n, float(lam), params.los_scale_m)
            numeric = link_los_prob_quadrature(n, float(lam), params.los_scale_m)
            worst_rel = max(worst_rel, abs(closed - numeric) / max(closed, 1e-300))
    geom = SimGeometry(min_expected_active=150)
    worst_abs = 0.0
    for lam in grid:
        # Saturated loading keeps every AP transmitting, so the realized
        # transmitter set has exactly the nearest-neighbor law the closed
        # form integrates over. Lighter loads fold cell-occupancy
        # correlation into the comparison; fig2 charts that regime.
        densities = DensityConfig(float(lam), 100.0 * float(lam))
        estimates = empirical_link_los_probs(
            (1, 2, 3), densities, params, geom, draws=10_000, seed=_ACCEPT_SEED, threads=threads
        )
        for est in estimates:
            closed = link_los_prob(est.order, float(lam), params.los_scale_m)
            worst_abs = max(worst_abs, abs(closed - est.p_hat))
    passed = worst_rel <= 1e-4 and worst_abs <= 0.02
    return passed, (
        f"closed-vs-quadrature rel {worst_rel:.2e} (tol 1e-4), "
        f"closed-vs-empirical {worst_abs:.4f} (tol 0.02)"
    )


def _check_a3(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    started = time.perf_counter()
    params = ChannelParams()
    geom = SimGeometry(min_expected_aps=700, min_expected_active=400)
    theta = db_to_linear(-10.0)
    bracket_ok = True
    worst_gap = 0.0
    for lambda_ap in (1e-5, 1e-4, 1e-3, 1e-2, 1e-1):
        densities = DensityConfig(lambda_ap, 1e-2)
        bounds = coverage_bounds(theta, densities, params)
        est = simulate_coverage(
            -10.0, densities, params, geom, trials=20_000, seed=_ACCEPT_SEED, threads=threads
        )
        sigma = est.ci_halfwidth / 1.96
        if not (bounds.lower - 3.0 * sigma <= est.p_hat <= bounds.upper + 3.0 * sigma):
            bracket_ok = False
        worst_gap = max(worst_gap, abs(bounds.upper - est.p_hat))
    elapsed = time.perf_counter() - started
    passed = bracket_ok and worst_gap <= 0.05 and elapsed <= 900.0
    return passed, (
        f"bracket {'holds' if bracket_ok else 'VIOLATED'}, max|upper-sim|={worst_gap:.4f} "
        f"(tol 0.05), {elapsed:.0f}s (limit 900)"
    )


def _check_a4(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = ChannelParams(nakagami_shape=1)
    worst = 0.0
    for lambda_ap in (1e-4, 1e-3, 1e-2):
        for theta_db in (-15.0, -10.0, -5.0):
            densities = DensityConfig(lambda_ap, 1e-2)
            bounds = coverage_bounds(db_to_linear(theta_db), densities, params)
            worst = max(worst, abs(bounds.upper - bounds.lower))
    return worst <= 1e-9, f"max|upper-lower|={worst:.2e} (tol 1e-9) on the 3x3 grid"


def _rayleigh_coverage_oracle(theta: float, lam: float, k_nlos: float, alpha: float) -> float:
    """Exact single-slope Rayleigh coverage via an independent double quadrature."""

    def outer(r: float) -> float:
        s = theta * k_nlos * r**alpha

        def mapped(t: float) -> float:
            # x = r/t maps (0, 1] onto [r, inf)
            x = r / t
            return (s * x * x / (s + k_nlos * x**alpha)) * r / (t * t)

        inner, _ = _scipy_quad(mapped, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
        u = (4.0 / 3.0) * math.pi * lam * r**3
        return 3.0 * u / r * math.exp(-u) * math.exp(-4.0 * math.pi * lam * inner)

    r_max = (36.0 * 3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0)
    value, _ = _scipy_quad(outer, 0.0, r_max, epsabs=1e-12, epsrel=1e-10, limit=200)
    return value


def _check_a5(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = ChannelParams(los_scale_m=1e-6, los_model=LosModel.CUBIC_EXPONENTIAL)
    geom = SimGeometry(min_expected_aps=700, min_expected_active=400)
    theta = db_to_linear(-10.0)
    worst_collapse = 0.0
    worst_oracle = 0.0
    mc_ok = True
    mc_note = []
    for lambda_ap, lambda_ue in ((1e-4, 1e-2), (1e-3, 1e-1), (1e-2, 1.0)):
        densities = DensityConfig(lambda_ap, lambda_ue)
        bounds = coverage_bounds(theta, densities, params)
        worst_collapse = max(worst_collapse, abs(bounds.upper - bounds.lower))
        oracle = _rayleigh_coverage_oracle(
            theta, densities.lambda_active, params.k_nlos, params.alpha_nlos
        )
        worst_oracle = max(worst_oracle, abs(bounds.lower - oracle))
        est = simulate_coverage(
            -10.0, densities, params, geom, trials=10_000, seed=_ACCEPT_SEED, threads=threads
        )
        sigma = est.ci_halfwidth / 1.96
        if abs(est.p_hat - bounds.lower) > 3.0 * sigma:
            mc_ok = False
        mc_note.append(f"{abs(est.p_hat - bounds.lower) / max(sigma, 1e-300):.1f}sigma")
    passed = worst_collapse <= 1e-12 and worst_oracle <= 1e-6 and mc_ok
    return passed, (
        f"bound collapse {worst_collapse:.1e}, vs Rayleigh oracle {worst_oracle:.2e} "
        f"(tol 1e-6), MC deviations {'/'.join(mc_note)} (3sigma each)"
    )


def _mc_interference_laplace(
    s_values: np.ndarray,
    serving: float,
    window: float,
    lam: float,
    params: ChannelParams,
    draws: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([seed, 606])
    mean_count = lam * (ball_volume(window) - ball_volume(serving))
    counts = rng.poisson(mean_count, draws)
    total = int(counts.sum())
    u = rng.random(total)
    radii = (serving**3 + u * (window**3 - serving**3)) ** (1.0 / 3.0)
    is_los = rng.random(total) < approx_los_prob(radii, params.los_scale_m)
    shape = params.nakagami_shape
    gains = np.empty(total)
    n_los = int(np.count_nonzero(is_los))
    if n_los:
        gains[is_los] = rng.standard_exponential((n_los, shape)).sum(axis=1) / shape
    if n_los < total:
        gains[~is_los] = rng.standard_exponential(total - n_los)
    losses = np.where(
        is_los,
        params.k_los * radii**params.alpha_los,
        params.k_nlos * radii**params.alpha_nlos,
    )
    prefix = np.concatenate(([0.0], np.cumsum(gains / losses)))
    offsets = np.concatenate(([0], np.cumsum(counts)))
    interference = prefix[offsets[1:]] - prefix[offsets[:-1]]
    means = np.empty(s_values.size)
    sigmas = np.empty(s_values.size)
    for i, s in enumerate(s_values):
        vals = np.exp(-s * interference)
        means[i] = vals.mean()
        sigmas[i] = vals.std(ddof=1) / math.sqrt(draws)
    return means, sigmas


def _check_a6(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = ChannelParams()
    lam = 1e-4
    serving = 15.0
    window = 60.0
    base = db_to_linear(-10.0) * params.k_nlos * serving**params.alpha_nlos
    grid = base * np.power(10.0, np.arange(-3.0, 4.0))
    at_zero = interference_laplace(0.0, serving, lam, params)
    zero_ok = abs(at_zero - 1.0) <= 1e-10
    values = np.array([interference_laplace(float(s), serving, lam, params) for s in grid])
    mono_ok = bool(np.all(np.diff(values) <= 1e-12))
    analytic = np.array(
        [interference_laplace(float(s), serving, lam, params, upper_limit=window) for s in grid]
    )
    # Transform values far below 1/sqrt(draws) sit under the Monte-Carlo
    # noise floor (every exp(-s I) sample rounds to zero), so the agreement
    # check runs on the resolvable part of the grid.
    resolvable = analytic >= 1e-3
    means, sigmas = _mc_interference_laplace(
        grid[resolvable], serving, window, lam, params, draws=100_000, seed=_ACCEPT_SEED
    )
    deviations = np.abs(analytic[resolvable] - means)
    floors = np.maximum(sigmas, 1e-12)
    mc_ok = bool(np.all(deviations <= 3.0 * floors))
    worst = float(np.max(deviations / floors))
    passed = zero_ok and mono_ok and mc_ok
    return passed, (
        f"|L(0)-1|={abs(at_zero - 1.0):.1e}, monotone={'yes' if mono_ok else 'NO'}, "
        f"worst MC deviation {worst:.1f}sigma over {int(resolvable.sum())} "
        f"resolvable s (limit 3)"
    )


def _check_a7(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    worst_norm = 0.0
    for n in (1, 2, 5):
        for lam in (1e-6, 1e-2):
            mode = ((n + 5.0) * 3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0)
            value, _ = integrate_semi_infinite(
                lambda r: nth_nearest_pdf(n, r, lam), 0.0, split=mode
            )
            worst_norm = max(worst_norm, abs(value - 1.0))
    lam = 1e-3
    target_mean = 30.0
    region = (target_mean * 3.0 / (4.0 * math.pi * lam)) ** (1.0 / 3.0)
    rng = np.random.default_rng([_ACCEPT_SEED, 707])
    samples = np.empty(10_000)
    for i in range(samples.size):
        count = int(rng.poisson(target_mean))
        while count == 0:
            count = int(rng.poisson(target_mean))
        samples[i] = float(np.min(region * np.cbrt(rng.random(count))))
    result = kstest(samples, lambda r: nth_nearest_cdf(1, r, lam))
    passed = worst_norm <= 1e-8 and result.pvalue >= 0.01
    return passed, (
        f"max|norm-1|={worst_norm:.1e} (tol 1e-8), KS p={result.pvalue:.3f} (need >= 0.01)"
    )


def _check_a8(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    params = ChannelParams()
    geom = SimGeometry(min_expected_aps=700, min_expected_active=400)

    def run(lambda_ap: float, lambda_ue: float) -> tuple[float, float]:
        est = simulate_coverage(
            -10.0,
            DensityConfig(lambda_ap, lambda_ue),
            params,
            geom,
            trials=3000,
            seed=_ACCEPT_SEED,
            threads=threads,
        )
        return est.p_hat, est.ci_halfwidth / 1.96

    # The low end reaches into the all-NLOS regime so the climb toward the
    # LOS-serving sweet spot is visible; past 1e-1 the active density has
    # saturated at the user density and the curve goes flat.
    shape_grid = (1e-7, 1e-6, 6e-6, 1e-4, 1e-2, 1e-1, 1.0)
    shape = [run(lap, 1e-2) for lap in shape_grid]
    cov = [c for c, _ in shape]
    sig = [s for _, s in shape]
    peak = int(np.argmax(cov))

    def sdiff(i: int, j: int) -> float:
        return math.hypot(sig[i], sig[j])

    rise_ok = cov[peak] - cov[0] > 3.0 * sdiff(peak, 0)
    fall_ok = cov[peak] - cov[-1] > 3.0 * sdiff(peak, -1)
    flat_ok = abs(cov[-1] - cov[-2]) < 3.0 * sdiff(-1, -2)

    ue_grid = (1e-4, 1e-2, 1.0)
    dense = [run(1e-3, lue) for lue in ue_grid]
    cov2 = [c for c, _ in dense]
    sig2 = [s for _, s in dense]
    drop_ok = cov2[0] - cov2[-1] > 3.0 * math.hypot(sig2[0], sig2[-1])
    no_rise_ok = all(
        cov2[i + 1] - cov2[i] < 3.0 * math.hypot(sig2[i], sig2[i + 1]) for i in range(2)
    )
    passed = rise_ok and fall_ok and flat_ok and drop_ok and no_rise_ok
    curve = "/".join(f"{c:.3f}" for c in cov)
    return passed, (
        f"shape curve {curve} peak@{shape_grid[peak]:.0e} "
        f"(rise {'ok' if rise_ok else 'NO'}, fall {'ok' if fall_ok else 'NO'}, "
        f"flat {'ok' if flat_ok else 'NO'}); user-density drop "
        f"{cov2[0]:.3f}->{cov2[1]:.3f}->{cov2[2]:.3f} "
        f"({'ok' if drop_ok and no_rise_ok else 'NO'})"
    )


def _check_a9(config: ExperimentConfig, threads: int) -> tuple[bool, str]:
    base = ExperimentConfig(
        geometry=SimGeometry(min_expected_aps=500, min_expected_active=200),
        lambda_ap_grid=(1e-3, 1e-2),
        lambda_ue_values=(1e-2,),
        lambda_active_grid=(1e-5, 1e-3),
        link_orders=(1, 2),
        trials=300,
        activity_draws=4,
        link_draws=400,
        seed=7,
        threads=1,
    )
    multi = dataclasses.replace(base, threads=8)
    mismatches = []
    for name, fn in (("fig1", run_fig1), ("fig2", run_fig2), ("fig3", run_fig3)):
        single_text = fn(base).to_csv_text()
        multi_text = fn(multi).to_csv_text()
        if single_text != multi_text:
            mismatches.append(name)
    if mismatches:
        return False, f"CSV bytes differ between 1 and 8 workers for: {', '.join(mismatches)}"
    return True, "fig1/fig2/fig3 CSVs byte-identical at 1 vs 8 workers"


_CHECKS: tuple[tuple[str, str, Callable[[ExperimentConfig, int], tuple[bool, str]]], ...] = (
    (
        "channel-sanity",
        "path-loss ordering and LOS-curve ranges for the configured channel",
        _check_channel_sanity,
    ),
    ("A1", "activity probability: closed form vs pooled empirical on a 3x3 grid", _check_a1),
    ("A2", "link LOS probability: closed form vs quadrature vs empirical", _check_a2),
    ("A3", "coverage bounds bracket the simulation; upper bound tight to 0.05", _check_a3),
    ("A4", "bounds coincide when the LOS fading shape is 1", _check_a4),
    ("A5", "vanishing LOS scale reduces both bounds to exact Rayleigh coverage", _check_a5),
    ("A6", "interference Laplace: L(0)=1, monotone in s, Monte-Carlo match", _check_a6),
    ("A7", "nearest-AP distance laws: normalization and KS test", _check_a7),
    ("A8", "coverage shape: rise-fall-flatten in AP density, decreasing in user density", _check_a8),
    ("A9", "byte-identical CSVs for 1 vs 8 workers", _check_a9),
)


def list_criteria() -> tuple[tuple[str, str], ...]:
    """(name, description) pairs in execution order."""
    return tuple((name, desc) for name, desc, _ in _CHECKS)


def run_criterion(
    name: str,
    config: ExperimentConfig | None = None,
    threads: int = 1,
    stream: TextIO | None = None,
) -> CriterionResult:
    """Run one named criterion, print its PASS/FAIL line, return the result."""
    stream = stream if stream is not None else sys.stdout
    config = config if config is not None else ExperimentConfig()
    for check_name, _, fn in _CHECKS:
        if check_name == name:
            break
    else:
        known = ", ".join(n for n, _, _ in _CHECKS)
        raise ConfigurationError(f"unknown criterion {name!r}; known: {known}")
    started = time.perf_counter()
    passed, detail = fn(config, threads)
    elapsed = time.perf_counter() - started
    verdict = "PASS" if passed else "FAIL"
    print(f"{name:<15}{verdict}  {elapsed:7.1f}s  {detail}", file=stream, flush=True)
    return CriterionResult(name=name, passed=passed, detail=detail, elapsed_s=elapsed)


def run_acceptance(
    names: list[str] | None = None,
    config: ExperimentConfig | None = None,
    threads: int = 1,
    stream: TextIO | None = None,
) -> bool:
    """Run the selected criteria (all by default); True iff every one passed."""
    stream = stream if stream is not None else sys.stdout
    if names:
        known = {n for n, _, _ in _CHECKS}
        for name in names:
            if name not in known:
                raise ConfigurationError(
                    f"unknown criterion {name!r}; known: {', '.join(sorted(known))}"
                )
        selected = [n for n, _, _ in _CHECKS if n in set(names)]
    else:
        selected = [n for n, _, _ in _CHECKS]
    results = [run_criterion(n, config=config, threads=threads, stream=stream) for n in selected]
    passed = sum(1 for r in results if r.passed)
    print(f"{passed}/{len(results)} criteria passed", file=stream, flush=True)
    return passed == len(results)
