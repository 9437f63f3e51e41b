"""Scenario configuration, built-in runs, and CSV artifacts.

A scenario is a flat key = value text file.  Field-valued keys hold
expressions in x, t and a (see expressions.py).  The five built-ins
reproduce the published parameter sets: a flat run, a static curved run
with and without U(1) potential, and a non-static trigonometric run with
and without the potential.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coins import RestrictedCoinField
from .evolution import StepBuilder, Trajectory, evolve
from .expressions import Expression, ExpressionError, compile_xt, parse_complex
from .geometry import (
    MetricSpec,
    flat_metric,
    light_cone_boundary,
    metric_to_coin,
    nonstatic_trig_metric,
    rindler_like_metric,
)
from .lattice import initial_state, make_lattice

METRIC_CHOICES = ("flat", "static-rindler-like", "nonstatic-trig", "custom")

_KEYS = {
    "name": str,
    "L": int,
    "n_sites": int,
    "n_steps": int,
    "mass": float,
    "metric": str,
    "e00": str,
    "e11": str,
    "gauge": str,
    "xi1": str,
    "lambda1": str,
    "vartheta1": str,
    "initial_coin": str,
    "initial_site_offset": int,
    "lightcone": str,
}

_REQUIRED = ("name", "L", "n_sites", "n_steps", "mass", "metric")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioSpec:
    """Validated scenario parameters; expressions kept as source text."""

    name: str
    L: int
    n_sites: int
    n_steps: int
    mass: float
    metric: str
    e00: Optional[str] = None
    e11: Optional[str] = None
    gauge: bool = False
    xi1: str = "0"
    lambda1: str = "0"
    vartheta1: Optional[str] = None
    initial_coin: tuple = (0.7071067811865476 + 0j, 0.7071067811865476j)
    initial_site_offset: int = 0
    lightcone: bool = True

    @property
    def spacing(self) -> float:
        return 1.0 / self.L

    def validate(self):
        if self.L <= 0 or self.n_sites < 2 or self.n_steps < 0:
            raise ConfigError("L, n_sites and n_steps must be positive")
        if self.metric not in METRIC_CHOICES:
            raise ConfigError(f"metric must be one of {METRIC_CHOICES}")
        if self.metric == "custom" and (self.e00 is None or self.e11 is None):
            raise ConfigError("custom metric needs e00 and e11 expressions")
        norm = sum(abs(c) ** 2 for c in self.initial_coin)
        if abs(norm - 1.0) > 1e-10:
            raise ConfigError("initial coin amplitudes are not normalized")
        for label, src in (("xi1", self.xi1), ("lambda1", self.lambda1)):
            try:
                Expression(src, variables=("x", "t", "a"))
            except ExpressionError as exc:
                raise ConfigError(f"{label}: {exc}") from exc
        return self


def _parse_value(key: str, raw: str, lineno: int):
    kind = _KEYS[key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad value for {key}: {raw!r}") from exc


def load_config(source) -> ScenarioSpec:
    """Parse and validate a scenario config (path, file object, or text)."""
    if hasattr(source, "read"):
        text = source.read()
    elif "\n" in str(source) or "=" in str(source):
        text = str(source)
    else:
        with open(source) as fh:
            text = fh.read()
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = (raw, lineno)
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    kwargs = {}
    for key, (raw, lineno) in values.items():
        if key == "gauge":
            if raw not in ("on", "off"):
                raise ConfigError(f"line {lineno}: gauge must be 'on' or 'off'")
            kwargs["gauge"] = raw == "on"
        elif key == "lightcone":
            if raw not in ("on", "off"):
                raise ConfigError(f"line {lineno}: lightcone must be 'on' or 'off'")
            kwargs["lightcone"] = raw == "on"
        elif key == "initial_coin":
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) != 2:
                raise ConfigError(f"line {lineno}: initial_coin needs two amplitudes")
            try:
                kwargs["initial_coin"] = tuple(parse_complex(p) for p in parts)
            except ExpressionError as exc:
                raise ConfigError(f"line {lineno}: {exc}") from exc
        else:
            kwargs[key] = _parse_value(key, raw, lineno)
    try:
        return ScenarioSpec(**kwargs).validate()
    except ConfigError as exc:
        raise ConfigError(f"{exc}") from None


BUILTIN_CONFIGS = {
    # flat space, no potential: symmetric spreading inside |x| <= t
    "fig3": """
        name = fig3
        L = 250
        n_sites = 400
        n_steps = 200
        mass = 0.04
        metric = flat
        gauge = off
    """,
    # static curved metric g11 = -(x + 5a)^2: rightward-only spreading
    "fig4": """
        name = fig4
        L = 250
        n_sites = 200
        n_steps = 800
        mass = 0.04
        metric = static-rindler-like
        gauge = off
    """,
    # same metric plus U(1) potential: stronger localization
    "fig5": """
        name = fig5
        L = 250
        n_sites = 200
        n_steps = 800
        mass = 0.04
        metric = static-rindler-like
        gauge = on
        xi1 = 1000 * x * t
        lambda1 = 0.03 * x
    """,
    # non-static trigonometric metric, no potential
    "fig2": """
        name = fig2
        L = 150
        n_sites = 400
        n_steps = 200
        mass = 0.04
        metric = nonstatic-trig
        gauge = off
    """,
    # non-static metric with U(1) potential
    "fig1": """
        name = fig1
        L = 150
        n_sites = 400
        n_steps = 200
        mass = 0.04
        metric = nonstatic-trig
        gauge = on
        xi1 = 1000 * x * t
        lambda1 = 0.03 * x
    """,
}


def builtin_scenario(name: str) -> ScenarioSpec:
    if name not in BUILTIN_CONFIGS:
        raise ConfigError(f"unknown builtin {name!r}; have {sorted(BUILTIN_CONFIGS)}")
    return load_config(io.StringIO(BUILTIN_CONFIGS[name]))


def scenario_metric(spec: ScenarioSpec) -> Optional[MetricSpec]:
    a = spec.spacing
    if spec.metric == "flat":
        return flat_metric(spec.mass)
    if spec.metric == "static-rindler-like":
        return rindler_like_metric(spec.mass, a)
    if spec.metric == "nonstatic-trig":
        return nonstatic_trig_metric(spec.mass)
    if spec.metric == "custom":
        e00 = compile_xt(spec.e00, a)
        e11 = compile_xt(spec.e11, a)
        return MetricSpec(e00=e00, e11=e11, mass=spec.mass)
    return None


def scenario_fields(spec: ScenarioSpec, lattice):
    """Coin-field pair for a scenario, including any gauge expressions.

    The non-static metric is realized directly through its published angle
    parameterization (theta1 = pi/8 + 2x with the time-dependent mass term)
    rather than through arccos of the vielbein ratio, whose principal branch
    would fold the angle.
    """
    a = spec.spacing
    if spec.metric == "nonstatic-trig":
        mass = spec.mass

        def theta1(x, t):
            return np.pi / 8.0 + 2.0 * np.asarray(x, dtype=float)

        field1 = RestrictedCoinField(
            theta=theta1, vartheta=-2.0, xi=0.0, lam=0.0,
            dtheta_dx=lambda x, t: np.full(np.shape(x), 2.0),
            dxi_dx=lambda x, t: np.zeros(np.shape(x)), label=1,
        )
        field2 = RestrictedCoinField(
            theta=lambda x, t: -2.0 * theta1(x, t),
            vartheta=lambda x, t: np.broadcast_to(mass * t, np.shape(x)).copy(),
            xi=0.0, lam=0.0,
            dtheta_dx=lambda x, t: np.full(np.shape(x), -4.0),
            dxi_dx=lambda x, t: np.zeros(np.shape(x)), label=2,
        )
    else:
        metric = scenario_metric(spec)
        vt1 = compile_xt(spec.vartheta1, a) if spec.vartheta1 else None
        field1, field2 = metric_to_coin(metric, lattice, vartheta1=vt1)
    if spec.gauge:
        xi1 = compile_xt(spec.xi1, a)
        lam1 = compile_xt(spec.lambda1, a)
        field1 = RestrictedCoinField(
            theta=field1.theta, vartheta=field1.vartheta,
            xi=xi1, lam=lam1,
            dtheta_dx=field1.dtheta_dx, dxi_dx=None, label=1,
        )
    return field1, field2


@dataclass
class ScenarioResult:
    spec: ScenarioSpec
    trajectory: Trajectory
    lattice: object
    cone: Optional[np.ndarray] = None  # (n_steps + 1, 2) left/right bounds
    summary: dict = field(default_factory=dict)


def run_scenario(spec: ScenarioSpec, collect_cone: Optional[bool] = None) -> ScenarioResult:
    """Build the coin fields, evolve, and collect artifacts in memory."""
    started = time.perf_counter()
    lattice = make_lattice(spec.n_sites, spec.spacing)
    field1, field2 = scenario_fields(spec, lattice)
    builder = StepBuilder(field1, field2, lattice, mode="modified")
    site = lattice.origin_index + spec.initial_site_offset
    state = initial_state(np.asarray(spec.initial_coin, dtype=complex), site, lattice)
    traj = evolve(builder, state, spec.n_steps)

    if collect_cone is None:
        collect_cone = spec.lightcone
    cone = None
    metric = scenario_metric(spec)
    if collect_cone and metric is not None and metric.cone is not None:
        x0 = lattice.positions[site]
        times = traj.times
        cone = np.empty((times.size, 2))
        for i, t in enumerate(times):
            cone[i] = light_cone_boundary(x0, float(t), metric)

    summary = {
        "scenario": spec.name,
        "L": spec.L,
        "spacing": spec.spacing,
        "tau": spec.spacing,
        "mass": spec.mass,
        "metric": spec.metric,
        "gauge": spec.gauge,
        "n_sites": spec.n_sites,
        "n_steps": spec.n_steps,
        "initial_site": int(site),
        "max_norm_drift": traj.metadata["max_norm_drift"],
        "wrap_step": traj.metadata["wrap_step"],
        "runtime_seconds": time.perf_counter() - started,
        "conventions": {
            "momentum_coupling": "symmetrized (vel P + P vel) / 2",
            "xi1_gauge": "cumulative trapezoid from the leftmost site, constant 0",
            "coin_phase": "exp(+i xi) overall phase",
            "units": "hbar = c = 1, a = tau = 1/L",
        },
    }
    return ScenarioResult(spec, traj, lattice, cone, summary)


def probability_csv(result: ScenarioResult) -> str:
    """Rows step,site_index,x,p for steps 1..n_steps (deterministic bytes)."""
    lattice = result.lattice
    x = lattice.positions
    chunks = ["step,site_index,x,p\n"]
    for step in range(1, result.spec.n_steps + 1):
        p = result.trajectory.profiles[step]
        for j in range(lattice.n_sites):
            chunks.append(f"{step},{j},{x[j]:.17g},{p[j]:.17g}\n")
    return "".join(chunks)


def cone_csv(result: ScenarioResult) -> str:
    chunks = ["step,t,x_left,x_right\n"]
    for i, t in enumerate(result.trajectory.times):
        left, right = result.cone[i]
        chunks.append(f"{i},{t:.17g},{left:.17g},{right:.17g}\n")
    return "".join(chunks)


def inverse_participation_ratio(profile: np.ndarray) -> float:
    """Localization diagnostic sum_x p(x)^2; larger is more localized."""
    return float(np.sum(np.asarray(profile) ** 2))


def write_artifacts(result: ScenarioResult, out_dir, plots: bool = True):
    """Write probability.csv, summary.json, optional cone.csv and figures."""
    import json
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "probability.csv").write_text(probability_csv(result))
    if result.cone is not None:
        (out / "cone.csv").write_text(cone_csv(result))
    (out / "summary.json").write_text(json.dumps(result.summary, indent=2) + "\n")
    written = ["probability.csv", "summary.json"]
    if result.cone is not None:
        written.append("cone.csv")
    if plots:
        from .plotting import render_scenario_figures

        written += render_scenario_figures(result, out)
    return written
