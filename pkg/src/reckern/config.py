"""Plain-text experiment configuration with dotted keys.

Format: one ``key = value`` pair per line, ``#`` comments, blank lines
ignored.  Example::

    dim = 1
    kernel = gaussian
    bandwidth.c = 0.9
    bandwidth.nu = 0.25
    estimator.ell = 1.0
    estimator.m = identity
    estimator.truncation.delta = 10.0
    estimator.truncation.theta = 1.0
    grid = 0.0, 1.0
    model.name = ar1
    model.rho_ar = 0.5
    model.noise_sd = 0.5
    model.regression = quadratic
    seed = 20260809
    mc.n = 10000
    mc.replicates = 2000
    mc.statistics = bias_f, bias_phi, var_f
    mc.zero_bias = false
    out = results

Grid syntax: comma-separated coordinates for d = 1; for d > 1,
semicolon-separated points of whitespace-separated coordinates
(``0 0; 1 0.5``).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bandwidth import BandwidthSchedule
from .estimator import EstimatorConfig, Truncation
from .kernels import make_kernel
from .models import make_ar1_model
from .montecarlo import ExperimentPlan, STATISTICS


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_KNOWN_KEYS = {
    "dim", "kernel", "grid", "seed", "out",
    "bandwidth.c", "bandwidth.nu",
    "estimator.ell", "estimator.m",
    "estimator.truncation.delta", "estimator.truncation.theta",
    "model.name", "model.rho_ar", "model.noise_sd", "model.regression",
    "mc.n", "mc.replicates", "mc.statistics", "mc.zero_bias",
}


def parse_file(path) -> dict[str, tuple[str, int]]:
    """Parse a config file into ``{key: (raw value, line number)}``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        entries[key] = (value, lineno)
    return entries


class _Entries:
    def __init__(self, entries):
        self.entries = entries

    def has(self, key):
        return key in self.entries

    def raw(self, key, default=None, required=False):
        if key not in self.entries:
            if required:
                raise ConfigError(f"missing required key {key!r}")
            return default, None
        return self.entries[key]

    def typed(self, key, cast, default=None, required=False):
        value, lineno = self.raw(key, required=required)
        if value is None:
            return default
        try:
            return cast(value)
        except (TypeError, ValueError):
            raise ConfigError(
                f"invalid value {value!r} for key {key!r}", lineno)


def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ValueError(value)


def _parse_grid(value: str, dim: int) -> np.ndarray:
    if ";" in value or dim > 1:
        points = [p for p in value.split(";") if p.strip()]
        grid = [[float(c) for c in p.replace(",", " ").split()] for p in points]
    else:
        grid = [[float(c)] for c in value.split(",") if c.strip()]
    return np.asarray(grid, dtype=float)


@dataclass
class LoadedExperiment:
    plan: ExperimentPlan
    out_dir: Path


def load_experiment(path) -> LoadedExperiment:
    """Build a validated experiment plan from a config file."""
    e = _Entries(parse_file(path))
    dim = e.typed("dim", int, default=1)
    kernel_name = e.typed("kernel", str, default="gaussian")
    c = e.typed("bandwidth.c", float, required=True)
    nu = e.typed("bandwidth.nu", float, required=True)
    ell = e.typed("estimator.ell", float, required=True)

    try:
        kernel = make_kernel(kernel_name, dim)
        schedule = BandwidthSchedule(c=c, nu=nu, dim=dim, ell=ell)
    except ValueError as exc:
        raise ConfigError(str(exc))

    truncation = None
    if e.has("estimator.truncation.delta") or e.has("estimator.truncation.theta"):
        delta = e.typed("estimator.truncation.delta", float, required=True)
        theta = e.typed("estimator.truncation.theta", float, required=True)
        try:
            truncation = Truncation(delta=delta, theta=theta)
        except ValueError as exc:
            raise ConfigError(str(exc))

    grid_raw, grid_line = e.raw("grid", required=True)
    try:
        grid = _parse_grid(grid_raw, dim)
    except ValueError:
        raise ConfigError(f"cannot parse grid {grid_raw!r}", grid_line)

    model_name = e.typed("model.name", str, default="ar1")
    if model_name != "ar1":
        raise ConfigError(f"unknown model.name {model_name!r} (only 'ar1' is provided)")
    try:
        model = make_ar1_model(
            rho_ar=e.typed("model.rho_ar", float, required=True),
            noise_sd=e.typed("model.noise_sd", float, required=True),
            regression=e.typed("model.regression", str, required=True),
            dim=dim,
        )
        cfg = EstimatorConfig(
            kernel=kernel, schedule=schedule, grid=grid,
            truncation=truncation,
            m=e.typed("estimator.m", str, default="identity"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))

    stats_raw = e.typed("mc.statistics", str, default=None)
    if stats_raw is None:
        statistics = STATISTICS
    else:
        statistics = tuple(s.strip() for s in stats_raw.split(",") if s.strip())

    try:
        plan = ExperimentPlan(
            model=model, cfg=cfg,
            n=e.typed("mc.n", int, required=True),
            replicates=e.typed("mc.replicates", int, required=True),
            seed=e.typed("seed", int, required=True),
            statistics=statistics,
            zero_bias=e.typed("mc.zero_bias", _parse_bool, default=False),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))

    out_dir = Path(e.typed("out", str, default="results"))
    return LoadedExperiment(plan=plan, out_dir=out_dir)
