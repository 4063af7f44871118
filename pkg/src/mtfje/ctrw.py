"""Continuous-time random walk layer: waiting-time inversion, trajectory
sampling and mean-squared-displacement estimation.

The waiting-time density psi(t) is obtained by fixed-Talbot inversion of
its characteristic function exp(-eta(z)).  Fixed Talbot in double
precision carries an irreducible absolute noise floor of order
``eps * exp(2 N_T / 5) / t`` from cancellation, which dominates the true
heavy tail at very large t; the builder therefore estimates that floor
per grid point and continues the density with its fitted power-law tail
where the floor takes over (and beyond the grid entirely), keeping the
sampled tail honest.

Walk convention: wait-then-jump.  The particle sits still between renewal
events, so the position at time t is the position after the last event
time <= t.  Steps are i.i.d. centered Gaussians with variance 2 per
coordinate.  Every particle derives its random stream from (seed,
particle index), so results never depend on batching or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .contour import ContourConfig, build_plan
from .params import PDF_STRICT, JeffreysParams
from .solver import cim_invert_scalar
from .symbols import SymbolSet

TALBOT_NODES = 32
STEP_STD = math.sqrt(2.0)
_DEFAULT_GRID = (1e-6, 1e8, 600)
# pdf values below this multiple of the Talbot noise floor are treated as
# unresolved and handed to the power-law tail.
_NOISE_MARGIN = 50.0


class InversionQualityError(ArithmeticError):
    """The numerical inversion produced too much negative mass."""


def talbot_invert(log_fhat, t, n_nodes: int = TALBOT_NODES):
    """Fixed-Talbot inverse Laplace transform at times ``t > 0``.

    ``log_fhat(s)`` must return the logarithm of the transform (the natural
    form for ``exp(-eta)`` targets); each quadrature term is evaluated as a
    single exponential ``exp(t*s + log_fhat(s))`` so the growing ``exp(t*s)``
    factor and a decaying transform never overflow separately.

    Returns ``(values, noise)`` where ``noise`` estimates the absolute
    round-off floor per point (machine epsilon times the cancellation mass
    of the alternating sum).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise ValueError("talbot_invert needs strictly positive times")
    r = 2.0 * n_nodes / (5.0 * t)
    theta = np.arange(1, n_nodes) * (np.pi / n_nodes)
    cot = np.cos(theta) / np.sin(theta)
    s = r[:, None] * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    terms = np.exp(t[:, None] * s + log_fhat(s)) * (1.0 + 1j * sigma)
    head = 0.5 * np.exp(r * t + np.real(log_fhat(r + 0j)))
    vals = (r / n_nodes) * (head + np.sum(terms.real, axis=1))
    noise = (r / n_nodes) * np.finfo(float).eps * (np.abs(head) + np.sum(np.abs(terms), axis=1))
    return vals, noise


@dataclass
class WaitingTimeTable:
    """Tabulated waiting-time law on a geometric grid with a power-law tail.

    ``cdf`` is normalized over the full law (grid plus tail), so
    ``cdf[-1] = 1 - tail_mass_frac``.  ``mass_on_grid`` is the raw
    (pre-normalization) trapezoid mass of the density over the grid.
    """

    t_grid: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray
    tail_exponent: float
    tail_mass_frac: float
    mass_on_grid: float
    negative_mass: float

    def __post_init__(self) -> None:
        self._log_t = np.log(self.t_grid)


def invert_waiting_time(
    params_or_symbols,
    t_grid=None,
    n_talbot: int = TALBOT_NODES,
    negative_mass_tol: float = 1e-3,
) -> WaitingTimeTable:
    """Build the waiting-time table by Talbot inversion of exp(-eta).

    ``params_or_symbols`` is either admissible (pdf-strict) parameters or a
    prebuilt :class:`SymbolSet` (the latter bypasses validation and exists
    for diagnostic oracles).
    """
    if isinstance(params_or_symbols, SymbolSet):
        symbols = params_or_symbols
    else:
        symbols = SymbolSet(params_or_symbols, strictness=PDF_STRICT)
    if t_grid is None:
        lo, hi, n = _DEFAULT_GRID
        t_grid = np.geomspace(lo, hi, int(n))
    else:
        t_grid = np.asarray(t_grid, dtype=float)
        if t_grid.ndim != 1 or t_grid.size < 16 or np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
            raise ValueError("t_grid must be a strictly increasing positive grid")

    pdf, noise = talbot_invert(lambda s: -symbols.eta(s), t_grid, n_talbot)

    raw_mass = float(np.trapz(pdf * t_grid, np.log(t_grid)))
    negative_mass = float(np.trapz(np.minimum(pdf, 0.0) * t_grid, np.log(t_grid)))
    if abs(negative_mass) > negative_mass_tol * max(abs(raw_mass), 1e-300):
        raise InversionQualityError(
            f"negative mass {negative_mass:.3e} exceeds {negative_mass_tol} of total "
            f"{raw_mass:.3e}; parameters are likely inadmissible"
        )
    pdf = np.maximum(pdf, 0.0)

    pdf, tail_exponent = _patch_tail(t_grid, pdf, noise)

    # Trapezoid in log time (the natural variable of the geometric grid):
    # integrating t * pdf against ln t keeps the quadrature bias of the
    # slowly-varying integrand an order below the 1e-3 mass tolerance.
    g = pdf * t_grid
    cdf_raw = np.concatenate(
        ([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(np.log(t_grid))))
    )
    mass_on_grid = float(cdf_raw[-1])
    if math.isfinite(tail_exponent) and tail_exponent > 0:
        tail_mass = pdf[-1] * t_grid[-1] / tail_exponent
    else:
        tail_mass = 0.0
    total = mass_on_grid + tail_mass
    if total <= 0:
        raise InversionQualityError("inversion produced no positive mass")
    cdf = cdf_raw / total

    return WaitingTimeTable(
        t_grid=t_grid,
        pdf=pdf,
        cdf=cdf,
        tail_exponent=tail_exponent,
        tail_mass_frac=tail_mass / total,
        mass_on_grid=mass_on_grid,
        negative_mass=negative_mass,
    )


def _patch_tail(t_grid, pdf, noise):
    """Replace the noise-dominated tail of ``pdf`` with its fitted power law.

    Returns the patched density and the survival exponent gamma_hat (the
    density decays like t**-(gamma_hat + 1)); nan when no heavy tail is
    resolvable (e.g. compactly concentrated laws).
    """
    n = pdf.size
    reliable = pdf > _NOISE_MARGIN * noise
    # Last index from which everything earlier within a decade is reliable.
    cut = n - 1
    while cut > 0 and not reliable[cut]:
        cut -= 1
    if cut <= 0:
        return pdf, float("nan")
    t_cut = t_grid[cut]
    lo = np.searchsorted(t_grid, t_cut / 10.0)
    window = slice(lo, cut + 1)
    tw = t_grid[window]
    pw = pdf[window]
    good = pw > 0
    if np.count_nonzero(good) < 5:
        return pdf, float("nan")
    slope, _ = np.polyfit(np.log(tw[good]), np.log(pw[good]), 1)
    gamma_hat = -slope - 1.0
    if not (0.0 < gamma_hat < 2.0):
        # No usable heavy tail; keep the clamped density as is.
        return pdf, float("nan")
    patched = pdf.copy()
    if cut < n - 1:
        patched[cut + 1 :] = pdf[cut] * (t_grid[cut + 1 :] / t_cut) ** slope
    return patched, gamma_hat


def particle_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for one particle."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_waiting_times(table: WaitingTimeTable, count: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF draws with log-linear interpolation between grid points.

    Draws falling beyond the tabulated CDF come from the fitted power-law
    tail, so samples can exceed the last grid point.  Plateaus resolve by
    the left-continuous inverse.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    u = rng.random(count)
    return _invert_cdf(table, u)


def _invert_cdf(table: WaitingTimeTable, u: np.ndarray) -> np.ndarray:
    cdf = table.cdf
    log_t = table._log_t
    out = np.empty(u.shape)
    tail = u > cdf[-1]
    body = ~tail
    idx = np.searchsorted(cdf, u[body], side="left")
    idx = np.clip(idx, 0, cdf.size - 1)
    at_start = idx == 0
    ub = u[body]
    lo = idx - 1
    denom = cdf[idx] - cdf[np.maximum(lo, 0)]
    frac = np.zeros_like(ub)
    ok = (~at_start) & (denom > 0)
    frac[ok] = (ub[ok] - cdf[lo[ok]]) / denom[ok]
    logs = np.where(at_start, log_t[0], log_t[np.maximum(lo, 0)] + frac * (log_t[idx] - log_t[np.maximum(lo, 0)]))
    out[body] = np.exp(logs)
    if np.any(tail):
        if not (math.isfinite(table.tail_exponent) and table.tail_exponent > 0):
            out[tail] = table.t_grid[-1]
        else:
            s_frac = (1.0 - u[tail]) / max(table.tail_mass_frac, 1e-300)
            out[tail] = table.t_grid[-1] * s_frac ** (-1.0 / table.tail_exponent)
    return out


@dataclass
class CtrwEnsemble:
    """Trajectories of a simulated ensemble (event times and positions).

    ``event_times`` has shape (n_particles, n_steps); ``positions`` has
    shape (n_particles, n_steps, dim) and holds the position after each
    jump.  All particles start at the origin at t = 0.
    """

    dim: int
    n_particles: int
    n_steps: int
    seed: int
    event_times: np.ndarray
    positions: np.ndarray


def _draw_particle(table, rng, n_steps, dim):
    waits = sample_waiting_times(table, n_steps, rng) if n_steps else np.empty(0)
    steps = STEP_STD * rng.standard_normal((n_steps, dim))
    return waits, steps


def simulate(
    params_or_table,
    dim: int,
    n_particles: int,
    n_steps: int,
    seed: int,
) -> CtrwEnsemble:
    """Simulate the ensemble, retaining full trajectories.

    Memory grows as n_particles * n_steps; for large MSD runs prefer
    :func:`msd_empirical_streamed`, which visits the same per-particle
    streams without retaining trajectories.
    """
    table = _as_table(params_or_table)
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    event_times = np.empty((n_particles, n_steps))
    positions = np.empty((n_particles, n_steps, dim))
    for p in range(n_particles):
        rng = particle_rng(seed, p)
        waits, steps = _draw_particle(table, rng, n_steps, dim)
        event_times[p] = np.cumsum(waits)
        positions[p] = np.cumsum(steps, axis=0)
    return CtrwEnsemble(
        dim=dim,
        n_particles=n_particles,
        n_steps=n_steps,
        seed=seed,
        event_times=event_times,
        positions=positions,
    )


def _as_table(params_or_table) -> WaitingTimeTable:
    if isinstance(params_or_table, WaitingTimeTable):
        return params_or_table
    if isinstance(params_or_table, (JeffreysParams, SymbolSet)):
        return invert_waiting_time(params_or_table)
    raise TypeError(f"expected parameters or a WaitingTimeTable, got {type(params_or_table)!r}")


def msd_empirical(ensemble: CtrwEnsemble, t_query) -> list[tuple[float, float, float]]:
    """Ensemble-averaged squared displacement at the query times.

    The position at time t is the one after the last event <= t (origin
    before the first event).  Returns (t, msd, standard error) triples.
    """
    t_query = np.atleast_1d(np.asarray(t_query, dtype=float))
    sq = np.empty((ensemble.n_particles, t_query.size))
    sqnorm = np.sum(ensemble.positions**2, axis=2)
    for p in range(ensemble.n_particles):
        idx = np.searchsorted(ensemble.event_times[p], t_query, side="right")
        row = np.concatenate(([0.0], sqnorm[p]))
        sq[p] = row[idx]
    msd = sq.mean(axis=0)
    stderr = sq.std(axis=0, ddof=1) / math.sqrt(ensemble.n_particles)
    return list(zip(t_query.tolist(), msd.tolist(), stderr.tolist()))


def msd_empirical_streamed(
    params_or_table,
    dim: int,
    n_particles: int,
    n_steps: int,
    seed: int,
    t_query,
    batch_size: int = 1024,
) -> tuple[np.ndarray, np.ndarray]:
    """Streaming MSD estimate identical in law (and stream) to simulating
    the full ensemble, without holding all trajectories in memory.

    Returns (msd, stderr) arrays aligned with ``t_query``.
    """
    table = _as_table(params_or_table)
    t_query = np.ascontiguousarray(np.atleast_1d(np.asarray(t_query, dtype=float)))
    acc = np.zeros(t_query.size)
    acc2 = np.zeros(t_query.size)
    for start in range(0, n_particles, batch_size):
        stop = min(start + batch_size, n_particles)
        nb = stop - start
        waits = np.empty((nb, n_steps))
        steps = np.empty((nb, n_steps, dim))
        for i, p in enumerate(range(start, stop)):
            rng = particle_rng(seed, p)
            waits[i], steps[i] = _draw_particle(table, rng, n_steps, dim)
        sq = _kernels.ctrw_sq_displacements(waits, steps, t_query)
        acc += sq.sum(axis=0)
        acc2 += (sq * sq).sum(axis=0)
    n = float(n_particles)
    msd = acc / n
    var = np.maximum(acc2 - acc * acc / n, 0.0) / (n - 1.0)
    stderr = np.sqrt(var / n)
    return msd, stderr


def msd_analytic(
    params_or_symbols,
    t_query,
    n_quad: int = 40,
    objective: str | None = None,
) -> list[tuple[float, float]]:
    """Inverse Laplace transform of 1/(z*eta(z)) at each query time, using
    the same hyperbolic-contour quadrature as the PDE solver (scalar case,
    one single-time contour per query point)."""
    if isinstance(params_or_symbols, SymbolSet):
        symbols = params_or_symbols
    else:
        symbols = SymbolSet(params_or_symbols, strictness=PDF_STRICT)
    t_query = np.atleast_1d(np.asarray(t_query, dtype=float))
    out = []
    for t in t_query:
        kwargs = {} if objective is None else {"objective": objective}
        plan = build_plan(ContourConfig(t0=float(t), Lambda=1.0, N=n_quad, **kwargs))
        vals = symbols.msd_laplace(plan.z)
        out.append((float(t), float(cim_invert_scalar(plan, vals, [t])[0])))
    return out


def msd_asymptote_short(params: JeffreysParams, t: float) -> float:
    """Leading small-time law (b/a) t**(alpha+gamma-beta) / Gamma(1+...)."""
    from .symbols import gamma_real

    expo = params.alpha + params.gamma - params.beta
    return (params.b / params.a) * t**expo / gamma_real(1.0 + expo)


def msd_asymptote_long(params: JeffreysParams, t: float) -> float:
    """Leading large-time law t**gamma / Gamma(1+gamma)."""
    from .symbols import gamma_real

    return t**params.gamma / gamma_real(1.0 + params.gamma)


def fit_loglog_slope(points, window: tuple[float, float]) -> float:
    """Least-squares slope of log(y) against log(t) inside ``window``.

    ``points`` is a sequence of (t, y, ...) tuples or a pair of arrays;
    needs at least 5 strictly positive points in the window.
    """
    if isinstance(points, tuple) and len(points) == 2:
        t, y = (np.asarray(points[0], dtype=float), np.asarray(points[1], dtype=float))
    else:
        arr = np.asarray([(p[0], p[1]) for p in points], dtype=float)
        t, y = arr[:, 0], arr[:, 1]
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 5:
        raise ValueError("need at least 5 points inside the fit window")
    if np.any(y[mask] <= 0):
        raise ValueError("log-log fit requires positive values in the window")
    slope, _ = np.polyfit(np.log(t[mask]), np.log(y[mask]), 1)
    return float(slope)
