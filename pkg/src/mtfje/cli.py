"""Batch front end: runs configured experiments, reproduces the benchmark
tables and emits CSV artifacts.

Artifacts per run (written to --out, the config's output dir, or
``$MTFJE_OUT``):

* ``table.csv``   -- one row per sweep value with L2/Linf errors and the
  empirical convergence order between consecutive rows,
* ``meta.txt``    -- resolved configuration echo, contour parameters
  (rho*, mu*, tau*, d) and wall times (kept out of the CSVs so re-runs
  are byte-identical),
* problem-specific CSVs (per-time fields, msd curves, trajectories).

Numbers are serialized in scientific notation with 16 significant digits
so round-off-floor rows survive the round trip.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, config_from_sections, load_config
from .contour import ContourConfig, build_plan
from .ctrw import (
    fit_loglog_slope,
    invert_waiting_time,
    msd_analytic,
    msd_asymptote_long,
    msd_asymptote_short,
    msd_empirical_streamed,
    simulate,
)
from .params import PDF_STRICT, validate
from .presets import (
    gaussian_bump_initial,
    scalar_power_problem,
    sine_power_source,
    skewed_product_initial,
)
from .solver import cim_solve, solve_scalar_problem
from .spectral import (
    SpectralSpace1D,
    l2_error_1d,
    l2_error_2d,
    legendre_eval,
    legendre_eval_2d,
    linf_error_1d,
    linf_error_2d,
    mass_eigendecomposition,
)
from .symbols import SymbolSet

FLOAT_FMT = "%.15e"


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FMT % float(value)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def pretty(self) -> str:
        cells = [[fmt(v) for v in row] for row in self.rows]
        widths = [
            max(len(c), *(len(r[i]) for r in cells)) if cells else len(c)
            for i, c in enumerate(self.columns)
        ]
        lines = ["  ".join(c.ljust(w) for c, w in zip(self.columns, widths))]
        for row in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
        return "\n".join(lines)


def convergence_orders(errors, sweep) -> list:
    """Empirical order between consecutive sweep points:
    ln(err_j / err_{j+1}) / ln(s_{j+1} / s_j).

    The first entry is None; rows whose error is zero or negative are
    flagged 'floor' instead of producing an order.
    """
    if len(errors) != len(sweep) or len(errors) < 2:
        raise ValueError("need matching sweep/error lists with at least 2 entries")
    out: list = [None]
    for j in range(1, len(errors)):
        if errors[j] <= 0 or errors[j - 1] <= 0:
            out.append("floor")
            continue
        out.append(math.log(errors[j - 1] / errors[j]) / math.log(sweep[j] / sweep[j - 1]))
    return out


def geometric_times(t0: float, t1: float, count: int) -> np.ndarray:
    if count <= 1:
        return np.array([t1])
    return np.geomspace(t0, t1, count)


def _resolve_window(cfg: ExperimentConfig) -> tuple[float, float]:
    t0, Lambda = cfg.t0, cfg.Lambda
    if Lambda is None:
        raise ConfigError("contour key 'Lambda' is required")
    if t0 is None:
        if cfg.t is None:
            raise ConfigError("either contour 't0' or times 't' must be given")
        t0 = cfg.t / Lambda
    return t0, Lambda


def _resolve_times(cfg: ExperimentConfig, t0: float, Lambda: float) -> np.ndarray:
    if cfg.times:
        return np.asarray(cfg.times, dtype=float)
    if cfg.t is not None and cfg.time_count <= 1:
        return np.array([cfg.t])
    return geometric_times(t0, Lambda * t0, cfg.time_count)


def _contour(cfg: ExperimentConfig, times: np.ndarray, N: int) -> ContourConfig:
    # The quadrature plan anchors at the earliest evaluation time (the t0 of
    # the underlying error analysis) while keeping the configured window
    # ratio Lambda; all query times stay inside the plan window because they
    # lie inside the configured window.
    return ContourConfig(
        t0=float(np.min(times)),
        Lambda=cfg.Lambda,
        N=N,
        alpha_tilde=cfg.alpha_tilde,
        delta_prime=cfg.delta_prime,
        eps_machine=cfg.eps_machine,
        rho_grid=cfg.rho_grid,
        rho_override=cfg.rho,
        objective=cfg.rho_objective,
    )


# -- experiment runners --------------------------------------------------------


def _sweep_points(cfg: ExperimentConfig):
    if cfg.sweep_axis is None:
        return [None]
    if cfg.sweep_axis == "PARAMS":
        if not cfg.param_sets:
            raise ConfigError("sweep axis 'params' needs param_set entries")
        return cfg.param_sets
    if not cfg.sweep_values:
        raise ConfigError(f"sweep axis {cfg.sweep_axis} needs 'values'")
    return [int(v) for v in cfg.sweep_values]


def _apply_sweep(cfg: ExperimentConfig, point):
    """Returns (params, M, N, label) for one sweep point."""
    params, M, N = cfg.params, cfg.M, cfg.N
    if cfg.sweep_axis == "M":
        M = int(point)
        label = M
    elif cfg.sweep_axis == "N":
        N = int(point)
        label = N
    elif cfg.sweep_axis == "PARAMS":
        params = replace(cfg.params, alpha=point[0], beta=point[1], gamma=point[2])
        label = f"{point[0]:g}/{point[1]:g}/{point[2]:g}"
    else:
        label = N
    return params, M, N, label


def _order_column(cfg: ExperimentConfig) -> str:
    return "order_s" if cfg.sweep_axis == "M" else "order_t"


def run_scalar(cfg: ExperimentConfig, workers: int = 1):
    t0, Lambda = _resolve_window(cfg)
    times = _resolve_times(cfg, t0, Lambda)
    rows = []
    meta_rows = []
    for point in _sweep_points(cfg):
        params, _, N, label = _apply_sweep(cfg, point)
        symbols = SymbolSet(params, strictness=cfg.strictness)
        terms, p0, exact = scalar_power_problem(params, cfg.lam)
        start = time.perf_counter()
        plan = build_plan(_contour(cfg, times, N))
        approx = solve_scalar_problem(plan, symbols, cfg.lam, p0, terms, times)
        err = float(np.max(np.abs(approx - exact(times))))
        elapsed = time.perf_counter() - start
        rows.append([label, err, err])
        meta_rows.append((label, plan, elapsed))
    return _with_orders(cfg, rows), meta_rows, {}


def _with_orders(cfg: ExperimentConfig, rows) -> ResultTable:
    sweep_name = (cfg.sweep_axis or "N").lower()
    columns = [sweep_name, "l2_error", "linf_error", _order_column(cfg)]
    if len(rows) >= 2 and cfg.sweep_axis in ("M", "N"):
        orders = convergence_orders([r[1] for r in rows], [r[0] for r in rows])
    else:
        orders = [None] * len(rows)
    return ResultTable(columns, [row + [orders[i]] for i, row in enumerate(rows)])


def _pde_solution(cfg, params, M, N, times, workers, two_d):
    space1 = SpectralSpace1D(M)
    space = mass_eigendecomposition(space1) if two_d else space1
    symbols = SymbolSet(params, strictness=cfg.strictness)
    exact = None
    if cfg.source_preset == "example2":
        if two_d:
            raise ConfigError("source preset example2 is one-dimensional")
        source, exact = sine_power_source(params, cfg.kappa, space1)
    elif cfg.source_preset == "zero":
        if cfg.initial_preset == "example3":
            if two_d:
                raise ConfigError("initial preset example3 is one-dimensional")
            source = gaussian_bump_initial(space1)
        elif cfg.initial_preset == "example4":
            if not two_d:
                raise ConfigError("initial preset example4 is two-dimensional")
            source = skewed_product_initial(space)
        else:
            raise ConfigError(
                f"zero source needs a nonzero initial preset, got {cfg.initial_preset!r}"
            )
    else:
        raise ConfigError(f"unknown source preset {cfg.source_preset!r}")
    plan = build_plan(_contour(cfg, times, N))
    sol = cim_solve(plan, space, symbols, source, times, workers=workers)
    return space, sol, exact, plan


def _reference_error(space, sol_ref, sol, two_d) -> tuple[float, float]:
    l2 = 0.0
    linf = 0.0
    xg = np.linspace(-1.0, 1.0, 512)
    for c_ref, c in zip(sol_ref.coeffs, sol.coeffs):
        diff = c_ref - c
        l2 = max(l2, space.l2_norm(diff))
        if two_d:
            leg = space.basis_to_legendre(diff)
            linf = max(linf, float(np.max(np.abs(legendre_eval_2d(leg, xg, xg)))))
        else:
            leg = space.basis_to_legendre(diff)
            linf = max(linf, float(np.max(np.abs(legendre_eval(leg, xg)))))
    return l2, linf


def run_pde(cfg: ExperimentConfig, workers: int = 1, two_d: bool = False):
    t0, Lambda = _resolve_window(cfg)
    times = _resolve_times(cfg, t0, Lambda)
    reference_mode = cfg.source_preset == "zero"
    rows = []
    meta_rows = []
    field_csvs = {}
    ref_cache: dict = {}
    for point in _sweep_points(cfg):
        params, M, N, label = _apply_sweep(cfg, point)
        start = time.perf_counter()
        space, sol, exact, plan = _pde_solution(cfg, params, M, N, times, workers, two_d)
        if reference_mode:
            key = (id(params), M) if cfg.sweep_axis == "N" else (label,)
            if key not in ref_cache:
                _, sol_ref, _, _ = _pde_solution(
                    cfg, params, M, cfg.reference_N, times, workers, two_d
                )
                ref_cache[key] = sol_ref
            l2, linf = _reference_error(space, ref_cache[key], sol, two_d)
        else:
            l2 = linf = 0.0
            for i, t in enumerate(times):
                if two_d:
                    l2 = max(l2, l2_error_2d(space, sol.coeffs[i], lambda x, y, _t=t: exact(_t, x, y)))
                    linf = max(linf, linf_error_2d(space, sol.coeffs[i], lambda x, y, _t=t: exact(_t, x, y)))
                else:
                    l2 = max(l2, l2_error_1d(space, sol.coeffs[i], lambda x, _t=t: exact(_t, x)))
                    linf = max(linf, linf_error_1d(space, sol.coeffs[i], lambda x, _t=t: exact(_t, x)))
        elapsed = time.perf_counter() - start
        rows.append([label, l2, linf])
        meta_rows.append((label, plan, elapsed))
        field_csvs.update(_field_csv_rows(cfg, label, space, sol, two_d))
    return _with_orders(cfg, rows), meta_rows, field_csvs


def _field_csv_rows(cfg, label, space, sol, two_d):
    out = {}
    tag = str(label).replace("/", "-")
    for i, t in enumerate(sol.times):
        field = sol.fields[i]
        rows = []
        if two_d:
            nodes = space.base.nodes
            for a, x in enumerate(nodes):
                for b, y in enumerate(nodes):
                    rows.append([x, y, field[a, b]])
            columns = ["x", "y", "value"]
        else:
            for x, v in zip(space.nodes, field):
                rows.append([x, v])
            columns = ["x", "value"]
        out[f"field_{tag}_t{i:03d}"] = ResultTable(columns, rows)
    return out


def run_ctrw(cfg: ExperimentConfig, workers: int = 1):
    validate(cfg.params, PDF_STRICT).raise_if_invalid()
    from . import _kernels

    _kernels.set_num_threads(max(workers, 1))
    t_grid = np.geomspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_points)
    start = time.perf_counter()
    table = invert_waiting_time(cfg.params, t_grid, cfg.talbot_nodes)
    if cfg.msd_times:
        tq = np.asarray(cfg.msd_times, dtype=float)
    else:
        tq = np.geomspace(1.0, 1e6, 25)
    msd, stderr = msd_empirical_streamed(
        table, cfg.dim, cfg.particles, cfg.steps, cfg.seed, tq, cfg.batch_size
    )
    analytic = np.array(
        [v for _, v in msd_analytic(SymbolSet(cfg.params, PDF_STRICT), tq, n_quad=cfg.msd_quad_N)]
    )
    elapsed = time.perf_counter() - start
    rows = [
        [float(t), float(m), float(s), float(a)]
        for t, m, s, a in zip(tq, msd, stderr, analytic)
    ]
    msd_table = ResultTable(["t", "msd_empirical", "stderr", "msd_analytic"], rows)

    extras = {"msd": msd_table}
    if cfg.trajectory_particles > 0:
        ens = simulate(table, cfg.dim, cfg.trajectory_particles, cfg.steps, cfg.seed)
        rows = []
        for p in range(ens.n_particles):
            for e in range(ens.n_steps):
                row = [float(p), float(e), ens.event_times[p, e]]
                row.extend(float(c) for c in ens.positions[p, e])
                rows.append(row)
        cols = ["particle", "event_index", "t", "x"] + (["y"] if cfg.dim == 2 else [])
        extras["trajectories"] = ResultTable(cols, rows)

    window = cfg.slope_window or (float(tq[len(tq) // 2]), float(tq[-1]))
    meta_extra = {"wall_time_s": elapsed, "table_mass_on_grid": table.mass_on_grid,
                  "table_tail_exponent": table.tail_exponent}
    try:
        meta_extra["fitted_long_slope_empirical"] = fit_loglog_slope((tq, msd), window)
        meta_extra["fitted_long_slope_analytic"] = fit_loglog_slope((tq, analytic), window)
    except ValueError:
        pass
    return msd_table, [], extras, meta_extra


def run_msd(cfg: ExperimentConfig, workers: int = 1):
    validate(cfg.params, PDF_STRICT).raise_if_invalid()
    if cfg.msd_times:
        tq = np.asarray(cfg.msd_times, dtype=float)
    else:
        tq = np.geomspace(1e-8, 1e8, 33)
    start = time.perf_counter()
    curve = msd_analytic(SymbolSet(cfg.params, PDF_STRICT), tq, n_quad=cfg.msd_quad_N)
    elapsed = time.perf_counter() - start
    rows = []
    for t, v in curve:
        rows.append(
            [t, v, v / msd_asymptote_short(cfg.params, t), v / msd_asymptote_long(cfg.params, t)]
        )
    table = ResultTable(["t", "msd_analytic", "short_time_ratio", "long_time_ratio"], rows)
    meta_extra = {"wall_time_s": elapsed}
    return table, [], {"msd_analytic": table}, meta_extra


# -- artifact output -----------------------------------------------------------


def write_table(path: Path, table: ResultTable, gnuplot: bool = False) -> None:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    if gnuplot:
        dat = ["# " + " ".join(table.columns)]
        for row in table.rows:
            dat.append(" ".join(fmt(v) if fmt(v) else "nan" for v in row))
        path.with_suffix(".dat").write_text("\n".join(dat) + "\n")


def write_meta(path: Path, cfg: ExperimentConfig, meta_rows, extra: dict) -> None:
    lines = [f"mtfje {__version__}"]
    lines.append("[config]")
    for key, value in sorted(vars(cfg).items()):
        lines.append(f"{key} = {value}")
    if meta_rows:
        lines.append("[contour]")
        for label, plan, elapsed in meta_rows:
            lines.append(
                f"sweep={label} rho_star={plan.rho_star!r} a_rho={plan.a_rho!r} "
                f"mu={plan.mu!r} tau={plan.tau!r} d={plan.d!r} wall_time_s={elapsed:.3f}"
            )
    if extra:
        lines.append("[diagnostics]")
        for key, value in sorted(extra.items()):
            lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n")


def run(cfg: ExperimentConfig, workers: int = 1, out_dir=None, gnuplot: bool = False) -> ResultTable:
    """Execute one experiment and write its artifacts; returns the table."""
    if cfg.problem == "scalar":
        table, meta_rows, extras = run_scalar(cfg, workers)
        meta_extra = {}
    elif cfg.problem == "pde1d":
        table, meta_rows, extras = run_pde(cfg, workers, two_d=False)
        meta_extra = {}
    elif cfg.problem == "pde2d":
        table, meta_rows, extras = run_pde(cfg, workers, two_d=True)
        meta_extra = {}
    elif cfg.problem == "ctrw":
        table, meta_rows, extras, meta_extra = run_ctrw(cfg, workers)
    elif cfg.problem == "msd":
        table, meta_rows, extras, meta_extra = run_msd(cfg, workers)
    else:
        raise ConfigError(f"unknown problem kind {cfg.problem!r}")

    out = Path(out_dir or cfg.out_dir or os.environ.get("MTFJE_OUT", "mtfje-out"))
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "table.csv", table, gnuplot)
    for name, extra_table in extras.items():
        write_table(out / f"{name}.csv", extra_table, gnuplot)
    write_meta(out / "meta.txt", cfg, meta_rows, meta_extra)
    return table


# -- command line ---------------------------------------------------------------


def _add_run_flags(sub):
    sub.add_argument("--config", required=True, help="experiment config file")
    sub.add_argument("--workers", type=int, default=1, help="node-solve worker threads")
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument(
        "--gnuplot-friendly",
        action="store_true",
        help="also write whitespace-separated .dat variants",
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mtfje",
        description="Multi-term time-fractional Jeffreys equation toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "scalar", "pde1d", "pde2d", "ctrw", "msd"):
        _add_run_flags(subs.add_parser(name, help=f"run a {name} experiment"))
    tab = subs.add_parser("table", help="pretty-print a table.csv artifact")
    tab.add_argument("--table", required=True, help="path to a table.csv file")

    args = parser.parse_args(argv)
    if args.command == "table":
        text = Path(args.table).read_text().strip().splitlines()
        columns = text[0].split(",")
        rows = [line.split(",") for line in text[1:]]
        print(ResultTable(columns, rows).pretty())
        return 0

    try:
        cfg = load_config(args.config)
        if args.command != "solve" and cfg.problem != args.command:
            raise ConfigError(
                f"subcommand {args.command!r} does not match config problem {cfg.problem!r}"
            )
        table = run(cfg, workers=args.workers, out_dir=args.out, gnuplot=args.gnuplot_friendly)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(table.pretty())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
