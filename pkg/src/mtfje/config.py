"""Plain-text experiment configuration.

Format: flat ``key = value`` lines grouped by ``[section]`` headers,
``#``/``;`` comments, comma-separated lists.  Repeatable keys
(``alpha_k``, ``beta_j``, ``param_set``) accumulate.  Example::

    [problem]
    kind = pde1d

    [params]
    alpha = 0.25
    beta = 0.10
    gamma = 0.25
    a = 10
    b = 10
    strictness = solver

    [contour]
    t0 = 0.01
    Lambda = 150
    N = 50

    [space]
    M = 16

    [source]
    preset = example2
    kappa = 1

    [sweep]
    axis = M
    values = 4,6,8,10,12,14,16
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .contour import DEFAULT_OBJECTIVE, MACHINE_EPS
from .params import SOLVER, JeffreysParams

_REPEATABLE = {"alpha_k", "beta_j", "param_set"}


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


def parse_config_text(text: str) -> dict[str, dict[str, object]]:
    sections: dict[str, dict[str, object]] = {}
    current = sections.setdefault("", {})
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip().lower(), {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key in _REPEATABLE:
            current.setdefault(key, []).append(value)
        else:
            current[key] = value
    return sections


def _floats(value: str) -> list[float]:
    return [float(v) for v in value.split(",") if v.strip()]


@dataclass
class ExperimentConfig:
    """Typed view of one experiment configuration."""

    problem: str
    params: JeffreysParams
    strictness: str = SOLVER
    # contour
    t0: float | None = None
    Lambda: float | None = None
    N: int = 40
    alpha_tilde: float = math.pi / 4
    delta_prime: float = math.pi / 8
    rho: float | None = None
    rho_objective: str = DEFAULT_OBJECTIVE
    rho_grid: int = 10_000
    eps_machine: float = MACHINE_EPS
    # space
    M: int = 16
    # times
    times: list[float] | None = None
    time_count: int = 20
    t: float | None = None
    # source / initial
    source_preset: str = "zero"
    kappa: float = 1.0
    lam: float = 1.0
    initial_preset: str = "zero"
    # sweep
    sweep_axis: str | None = None
    sweep_values: list[float] = field(default_factory=list)
    param_sets: list[tuple[float, float, float]] = field(default_factory=list)
    reference_N: int = 100
    # ctrw
    dim: int = 1
    particles: int = 1000
    steps: int = 1000
    seed: int = 12345
    batch_size: int = 1024
    grid_lo: float = 1e-6
    grid_hi: float = 1e8
    grid_points: int = 600
    talbot_nodes: int = 64
    msd_times: list[float] | None = None
    trajectory_particles: int = 0
    slope_window: tuple[float, float] | None = None
    msd_quad_N: int = 40
    # output
    out_dir: str | None = None

    @property
    def window(self) -> tuple[float, float]:
        if self.t0 is None or self.Lambda is None:
            raise ConfigError("contour keys 't0' and 'Lambda' are required")
        return self.t0, self.t0 * self.Lambda


def load_config(path: str | Path) -> ExperimentConfig:
    return config_from_sections(parse_config_text(Path(path).read_text()))


def config_from_sections(sections: dict[str, dict[str, object]]) -> ExperimentConfig:
    def sec(name: str) -> dict[str, object]:
        return sections.get(name, {})

    def want(section: str, key: str, conv, default=None, required=False):
        raw = sec(section).get(key)
        if raw is None:
            if required:
                raise ConfigError(f"missing required key '{key}' in section [{section}]")
            return default
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for [{section}] {key} = {raw!r}: {exc}") from exc

    problem = want("problem", "kind", str, required=True).lower()
    if problem not in ("scalar", "pde1d", "pde2d", "ctrw", "msd"):
        raise ConfigError(f"unknown problem kind {problem!r}")

    pairs = lambda entries: tuple(
        (float(e.split(",")[0]), float(e.split(",")[1])) for e in (entries or [])
    )
    params = JeffreysParams(
        alpha=want("params", "alpha", float, required=True),
        beta=want("params", "beta", float, required=True),
        gamma=want("params", "gamma", float, required=True),
        a=want("params", "a", float, required=True),
        b=want("params", "b", float, required=True),
        minor_alpha=pairs(sec("params").get("alpha_k")),
        minor_beta=pairs(sec("params").get("beta_j")),
    )

    cfg = ExperimentConfig(problem=problem, params=params)
    cfg.strictness = want("params", "strictness", str, default=SOLVER)

    cfg.t0 = want("contour", "t0", float)
    cfg.Lambda = want("contour", "lambda", float)
    cfg.N = want("contour", "n", int, default=40)
    cfg.alpha_tilde = want("contour", "alpha_tilde", float, default=math.pi / 4)
    cfg.delta_prime = want("contour", "delta_prime", float, default=math.pi / 8)
    cfg.rho = want("contour", "rho", float)
    cfg.rho_objective = want("contour", "rho_objective", str, default=DEFAULT_OBJECTIVE)
    cfg.rho_grid = want("contour", "rho_grid", int, default=10_000)
    cfg.eps_machine = want("contour", "eps", float, default=MACHINE_EPS)

    cfg.M = want("space", "m", int, default=16)

    cfg.times = want("times", "times", _floats)
    cfg.time_count = want("times", "count", int, default=20)
    cfg.t = want("times", "t", float)

    cfg.source_preset = want("source", "preset", str, default="zero").lower()
    cfg.kappa = want("source", "kappa", float, default=1.0)
    cfg.lam = want("source", "lambda", float, default=1.0)
    cfg.initial_preset = want("initial", "preset", str, default="zero").lower()

    cfg.sweep_axis = want("sweep", "axis", str)
    if cfg.sweep_axis is not None:
        cfg.sweep_axis = cfg.sweep_axis.upper()
        if cfg.sweep_axis not in ("N", "M", "PARAMS"):
            raise ConfigError(f"sweep axis must be N, M or params, got {cfg.sweep_axis!r}")
    cfg.sweep_values = want("sweep", "values", _floats, default=[])
    raw_sets = sec("sweep").get("param_set") or []
    cfg.param_sets = [tuple(_floats(e)) for e in raw_sets]
    for ps in cfg.param_sets:
        if len(ps) != 3:
            raise ConfigError(f"param_set needs 'alpha,beta,gamma', got {ps}")
    cfg.reference_N = want("sweep", "reference_n", int, default=100)

    cfg.dim = want("ctrw", "dim", int, default=1)
    cfg.particles = want("ctrw", "particles", int, default=1000)
    cfg.steps = want("ctrw", "steps", int, default=1000)
    cfg.seed = want("ctrw", "seed", int, default=12345)
    cfg.batch_size = want("ctrw", "batch_size", int, default=1024)
    cfg.grid_lo = want("ctrw", "grid_lo", float, default=1e-6)
    cfg.grid_hi = want("ctrw", "grid_hi", float, default=1e8)
    cfg.grid_points = want("ctrw", "grid_points", int, default=600)
    cfg.talbot_nodes = want("ctrw", "talbot_nodes", int, default=64)
    cfg.msd_times = want("ctrw", "msd_times", _floats)
    cfg.trajectory_particles = want("ctrw", "trajectory_particles", int, default=0)
    sw = want("ctrw", "slope_window", _floats)
    cfg.slope_window = (sw[0], sw[1]) if sw else None
    cfg.msd_quad_N = want("ctrw", "msd_quad_n", int, default=40)

    cfg.out_dir = want("output", "dir", str)
    return cfg
