"""Experiment configuration, parameter sweeps, and CSV persistence.

CSV outputs are reproducible byte-for-byte for a fixed seed and config:
rows are emitted in sweep order, floats are formatted locale-independently,
and the metadata comment line carries no timestamp. The config hash in that
line covers everything except execution parallelism, so runs that differ
only in worker count produce identical files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

from ._version import VERSION
from .analytic import (
    DensityConfig,
    QuadratureSettings,
    coverage_bounds,
    link_los_prob,
)
from .channel import ChannelParams, LosModel
from .errors import ConfigurationError, NumericalError
from .geometry import SimGeometry
from .simulate import (
    ASSOCIATION_RULES,
    _plan_coverage,
    db_to_linear,
    empirical_activity_probability,
    empirical_link_los_probs,
    simulate_coverage,
)

_DEFAULT_AP_GRID = tuple(float(x) for x in np.logspace(-6.0, 2.0, 12))
_DEFAULT_UE_VALUES = (1e-4, 1e-2, 1.0)
_DEFAULT_ACTIVE_GRID = tuple(float(x) for x in np.logspace(-9.0, -1.0, 9))


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a sweep run; defaults reproduce the stock setup.

    ``threads`` is an execution knob, not part of the experiment identity:
    it is excluded from :func:`config_hash` so outputs stay byte-identical
    across worker counts.
    """

    channel: ChannelParams = ChannelParams()
    quadrature: QuadratureSettings = QuadratureSettings()
    geometry: SimGeometry = SimGeometry()
    lambda_ap_grid: tuple[float, ...] = _DEFAULT_AP_GRID
    lambda_ue_values: tuple[float, ...] = _DEFAULT_UE_VALUES
    lambda_active_grid: tuple[float, ...] = _DEFAULT_ACTIVE_GRID
    link_orders: tuple[int, ...] = (1, 2, 3)
    link_ue_ap_ratio: float = 1.0
    theta_db: float = -10.0
    trials: int = 20_000
    activity_draws: int = 12
    link_draws: int = 6000
    seed: int = 7
    threads: int = 1
    association: str = "nearest_active"
    max_sim_expected_aps: float = 3e4

    def __post_init__(self):
        for name in ("lambda_ap_grid", "lambda_active_grid"):
            values = getattr(self, name)
            if not values:
                raise ConfigurationError(f"{name} must be non-empty")
            for v in values:
                if not (isinstance(v, (int, float)) and v > 0 and np.isfinite(v)):
                    raise ConfigurationError(f"{name} entries must be positive, got {v!r}")
        if not self.lambda_ue_values:
            raise ConfigurationError("lambda_ue_values must be non-empty")
        for v in self.lambda_ue_values:
            if not (isinstance(v, (int, float)) and v >= 0 and np.isfinite(v)):
                raise ConfigurationError(f"lambda_ue_values entries must be >= 0, got {v!r}")
        if not self.link_orders:
            raise ConfigurationError("link_orders must be non-empty")
        for n in self.link_orders:
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ConfigurationError(f"link_orders entries must be integers >= 1, got {n!r}")
        if not (self.link_ue_ap_ratio > 0 and np.isfinite(self.link_ue_ap_ratio)):
            raise ConfigurationError(
                f"link_ue_ap_ratio must be positive, got {self.link_ue_ap_ratio!r}"
            )
        if not np.isfinite(self.theta_db):
            raise ConfigurationError(f"theta_db must be finite, got {self.theta_db!r}")
        if not isinstance(self.trials, int) or self.trials < 100:
            raise ConfigurationError(f"trials must be an integer >= 100, got {self.trials!r}")
        for name in ("activity_draws", "link_draws"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} must be an integer >= 1, got {value!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigurationError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigurationError(f"threads must be an integer >= 1, got {self.threads!r}")
        if self.association not in ASSOCIATION_RULES:
            raise ConfigurationError(
                f"association must be one of {ASSOCIATION_RULES}, got {self.association!r}"
            )
        if not (self.max_sim_expected_aps > 0):
            raise ConfigurationError(
                f"max_sim_expected_aps must be positive, got {self.max_sim_expected_aps!r}"
            )


_CHANNEL_KEYS = {
    "k_los": float,
    "k_nlos": float,
    "alpha_los": float,
    "alpha_nlos": float,
    "nakagami_shape": int,
    "los_scale_m": float,
    "los_model": str,
}
_QUAD_KEYS = {
    "relative_tolerance": float,
    "absolute_tolerance": float,
    "max_subdivisions": int,
    "tail_cutoff_epsilon": float,
}
_GEOM_KEYS = {
    "ap_region_radius": "radius",
    "ue_guard_margin": "radius",
    "min_expected_aps": int,
    "min_expected_active": int,
    "max_expected_points": float,
    "max_expected_ues": float,
    "redraw_limit": int,
    "all_active_ratio": float,
    "tail_completion": bool,
}
_SWEEP_KEYS = {
    "lambda_ap": ("lambda_ap_grid", "float_list"),
    "lambda_ue": ("lambda_ue_values", "float_list"),
    "lambda_active": ("lambda_active_grid", "float_list"),
    "n_values": ("link_orders", "int_list"),
    "ue_ap_ratio": ("link_ue_ap_ratio", float),
}
_RUN_KEYS = {
    "theta_db": float,
    "trials": int,
    "activity_draws": int,
    "link_draws": int,
    "seed": int,
    "threads": int,
    "association": str,
    "max_sim_expected_aps": float,
}


def _coerce(dotted: str, value, kind):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{dotted} must be a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"{dotted} must be an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"{dotted} must be a boolean, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"{dotted} must be a string, got {value!r}")
        return value
    if kind == "radius":
        if isinstance(value, str):
            if value != "auto":
                raise ConfigurationError(f'{dotted} must be a number or "auto", got {value!r}')
            return None
        return _coerce(dotted, value, float)
    if kind == "float_list":
        if not isinstance(value, list) or not value:
            raise ConfigurationError(f"{dotted} must be a non-empty list of numbers")
        return tuple(_coerce(dotted, v, float) for v in value)
    if kind == "int_list":
        if not isinstance(value, list) or not value:
            raise ConfigurationError(f"{dotted} must be a non-empty list of integers")
        return tuple(_coerce(dotted, v, int) for v in value)
    raise AssertionError(kind)


def _section(data: dict, name: str, keys: dict) -> dict:
    table = data.get(name, {})
    out = {}
    for key, value in table.items():
        if key not in keys:
            raise ConfigurationError(f"unknown config key {name}.{key}")
        out[key] = _coerce(f"{name}.{key}", value, keys[key])
    return out


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Build an ExperimentConfig from an optional TOML file plus overrides.

    Sections: [channel], [quadrature], [geometry], [sweep], [run]. Every key
    has a default, so an empty (or absent) file yields the stock setup.
    Unknown sections or keys fail with the dotted name rather than being
    ignored. ``overrides`` maps top-level ExperimentConfig field names to
    values and is applied last; the CLI uses it for flag overrides.
    """
    data = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = _toml.loads(text)
        except _toml.TOMLDecodeError as exc:
            raise ConfigurationError(f"invalid config file {path}: {exc}") from None
    for name in data:
        if name not in ("channel", "quadrature", "geometry", "sweep", "run"):
            raise ConfigurationError(f"unknown config section [{name}]")

    channel_kwargs = _section(data, "channel", _CHANNEL_KEYS)
    if "los_model" in channel_kwargs:
        raw = channel_kwargs["los_model"]
        try:
            channel_kwargs["los_model"] = LosModel(raw)
        except ValueError:
            choices = ", ".join(m.value for m in LosModel)
            raise ConfigurationError(
                f"channel.los_model must be one of: {choices}; got {raw!r}"
            ) from None
    quad_kwargs = _section(data, "quadrature", _QUAD_KEYS)
    geom_kwargs = _section(data, "geometry", _GEOM_KEYS)

    kwargs: dict = {
        "channel": ChannelParams(**channel_kwargs),
        "quadrature": QuadratureSettings(**quad_kwargs),
        "geometry": SimGeometry(**geom_kwargs),
    }
    for key, value in _section(data, "sweep", {k: v[1] for k, v in _SWEEP_KEYS.items()}).items():
        kwargs[_SWEEP_KEYS[key][0]] = value
    kwargs.update(_section(data, "run", _RUN_KEYS))
    if overrides:
        kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def _canonical(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _canonical(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (tuple, list)):
        return [_canonical(v) for v in value]
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def config_hash(config: ExperimentConfig) -> str:
    """Short stable digest of the experiment identity (worker count excluded)."""
    payload = _canonical(config)
    payload.pop("threads", None)
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value.replace(",", ";").replace("\n", " ")
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Sweep output: fixed column schema, rows in sweep order, metadata line."""

    kind: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    metadata: dict[str, str]

    def to_csv_text(self) -> str:
        lines = ["# " + " ".join(f"{k}={v}" for k, v in self.metadata.items())]
        lines.append(",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ConfigurationError(
                    f"row width {len(row)} does not match {len(self.columns)} columns"
                )
            lines.append(",".join(_format_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_csv_text(), encoding="utf-8", newline="\n")
        return path


def _metadata(kind: str, config: ExperimentConfig, **extra: str) -> dict[str, str]:
    meta = {
        "tool": "cellcov3d",
        "version": VERSION,
        "kind": kind,
        "config": config_hash(config),
        "seed": str(config.seed),
    }
    meta.update(extra)
    return meta


def run_fig1(config: ExperimentConfig) -> SweepResult:
    """Activity probability vs AP density: closed form plus empirical estimate.

    Sweep points whose automatic region would exceed the configured point
    caps keep their analytic value and leave the simulated cells blank with
    draws=0; the closed form has no such limit.
    """
    rows = []
    for lambda_ue in config.lambda_ue_values:
        for lambda_ap in config.lambda_ap_grid:
            densities = DensityConfig(lambda_ap, lambda_ue)
            q = densities.activity
            try:
                est = empirical_activity_probability(
                    densities,
                    config.geometry,
                    draws=config.activity_draws,
                    seed=config.seed,
                    threads=config.threads,
                )
            except ConfigurationError:
                rows.append((lambda_ap, lambda_ue, q, None, None, 0))
            else:
                rows.append((lambda_ap, lambda_ue, q, est.p_hat, est.ci_halfwidth, est.draws))
    return SweepResult(
        kind="fig1",
        columns=("lambda_ap", "lambda_ue", "q_analytic", "q_sim", "ci", "draws"),
        rows=tuple(rows),
        metadata=_metadata("fig1", config),
    )


def run_fig2(config: ExperimentConfig) -> SweepResult:
    """Link LOS probability vs transmitting-AP density, per neighbor order.

    Each grid value is the target transmitting density; the underlying AP
    and user densities are derived from it at the configured user-to-AP
    ratio, so the empirical network realizes the requested density exactly.
    """
    ratio = config.link_ue_ap_ratio
    q = DensityConfig(1.0, ratio).activity
    rows = []
    for lam_active in config.lambda_active_grid:
        lambda_ap = lam_active / q
        densities = DensityConfig(lambda_ap, lambda_ap * ratio)
        estimates = empirical_link_los_probs(
            config.link_orders,
            densities,
            config.channel,
            config.geometry,
            draws=config.link_draws,
            seed=config.seed,
            threads=config.threads,
        )
        for est in estimates:
            analytic = link_los_prob(est.order, lam_active, config.channel.los_scale_m)
            rows.append(
                (
                    lam_active,
                    est.order,
                    analytic,
                    est.p_hat,
                    est.ci_halfwidth,
                    est.draws,
                    est.rejected,
                )
            )
    return SweepResult(
        kind="fig2",
        columns=("lambda_active", "n", "p_analytic", "p_sim", "ci", "draws", "rejected"),
        rows=tuple(rows),
        metadata=_metadata("fig2", config),
    )


def _sim_feasible(densities: DensityConfig, config: ExperimentConfig) -> bool:
    try:
        plan = _plan_coverage(
            densities,
            config.channel,
            dataclasses.replace(config.geometry, tail_completion=False),
            config.seed,
            config.association,
            config.quadrature,
        )
    except ConfigurationError:
        return False
    return plan.expected_aps <= config.max_sim_expected_aps


def run_fig3(config: ExperimentConfig) -> SweepResult:
    """Coverage bounds and simulated coverage vs AP density, per user density.

    Every row keeps its analytic bounds; points too dense to simulate under
    the configured caps are flagged analytic_only, and quadrature failures
    are flagged per-row with the message while the row is retained.
    Progress goes to stderr, one line per point.
    """
    for v in config.lambda_ue_values:
        if v <= 0:
            raise ConfigurationError("fig3 requires positive lambda_ue values")
    theta = db_to_linear(config.theta_db)
    total = len(config.lambda_ue_values) * len(config.lambda_ap_grid)
    done = 0
    rows = []
    for lambda_ue in config.lambda_ue_values:
        for lambda_ap in config.lambda_ap_grid:
            done += 1
            started = time.perf_counter()
            densities = DensityConfig(lambda_ap, lambda_ue)
            status = "ok"
            lower = upper = None
            try:
                bounds = coverage_bounds(theta, densities, config.channel, config.quadrature)
                lower, upper = bounds.lower, bounds.upper
            except NumericalError as exc:
                status = f"numerical_error: {exc}"
            sim = ci = None
            trials_used = 0
            if _sim_feasible(densities, config):
                est = simulate_coverage(
                    config.theta_db,
                    densities,
                    config.channel,
                    config.geometry,
                    trials=config.trials,
                    seed=config.seed,
                    threads=config.threads,
                    association=config.association,
                    quadrature=config.quadrature,
                )
                sim, ci, trials_used = est.p_hat, est.ci_halfwidth, est.trials
            elif status == "ok":
                status = "analytic_only"
            rows.append(
                (
                    lambda_ap,
                    lambda_ue,
                    config.theta_db,
                    lower,
                    upper,
                    sim,
                    ci,
                    trials_used,
                    config.seed,
                    status,
                )
            )
            elapsed = time.perf_counter() - started
            print(
                f"fig3 [{done}/{total}] lambda_ap={lambda_ap:.3g} lambda_ue={lambda_ue:.3g} "
                f"lower={_format_cell(lower) or 'n/a'} upper={_format_cell(upper) or 'n/a'} "
                f"sim={_format_cell(sim) or 'n/a'} status={status} ({elapsed:.1f}s)",
                file=sys.stderr,
                flush=True,
            )
    return SweepResult(
        kind="fig3",
        columns=(
            "lambda_ap",
            "lambda_ue",
            "theta_db",
            "cov_lower",
            "cov_upper",
            "cov_sim",
            "ci",
            "trials",
            "seed",
            "status",
        ),
        rows=tuple(rows),
        metadata=_metadata("fig3", config),
    )
