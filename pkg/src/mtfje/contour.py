"""Hyperbolic integration contour of the inverse-Laplace quadrature.

The contour is the left branch of the hyperbola ``z(phi) = mu * (1 +
sin(i*phi - alpha_tilde))``, discretized by the midpoint rule at ``phi_k =
(k + 1/2) * tau``.  The scale ``mu`` and step ``tau`` come from a free
parameter ``rho`` in (0, 1) which trades the truncation error of the
quadrature against amplification of round-off by ``exp(mu * t)``; ``rho``
is chosen by a grid search over one of two closed-form objectives (see
:func:`objective_value`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

OBJECTIVE_PROSE = "prose"
OBJECTIVE_ALGORITHM1 = "algorithm1"
_OBJECTIVES = (OBJECTIVE_PROSE, OBJECTIVE_ALGORITHM1)

#: Default rho-search objective.  The "prose" form scores the full error
#: model eps * eps_N**(rho-1) + eps_N**rho, i.e. it includes the exp(mu*T)
#: round-off amplification; "algorithm1" scores (1-rho)*eps +
#: rho*eps_N/(1-eps_N), which ignores that amplification and therefore
#: drives mu (and the round-off floor) up with N.  The prose form
#: reproduces the published machine-precision floors; see the benchmark
#: configs for per-experiment choices.
DEFAULT_OBJECTIVE = OBJECTIVE_PROSE

MACHINE_EPS = 2.22e-16


class ContourConfigError(ValueError):
    """Invalid contour geometry or parameter-selection settings."""


@dataclass(frozen=True)
class ContourConfig:
    """Geometry and quadrature settings for one contour build.

    ``Lambda`` is the width of the covered time window ``[t0, Lambda*t0]``.
    ``rho_grid`` is the density of the rho search; ``rho_override`` skips
    the search entirely.
    """

    t0: float
    Lambda: float
    N: int
    alpha_tilde: float = math.pi / 4
    delta_prime: float = math.pi / 8
    eps_machine: float = MACHINE_EPS
    rho_grid: int = 10_000
    rho_override: float | None = None
    objective: str = DEFAULT_OBJECTIVE

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha_tilde < math.pi / 2):
            raise ContourConfigError(f"alpha_tilde = {self.alpha_tilde} outside (0, pi/2)")
        if not (0.0 < self.delta_prime < math.pi / 2):
            raise ContourConfigError(f"delta_prime = {self.delta_prime} outside (0, pi/2)")
        if self.alpha_tilde + self.delta_prime >= math.pi / 2:
            raise ContourConfigError(
                "alpha_tilde + delta_prime must stay below pi/2, got "
                f"{self.alpha_tilde + self.delta_prime}"
            )
        if not self.t0 > 0.0:
            raise ContourConfigError(f"t0 = {self.t0} must be positive")
        if not self.Lambda >= 1.0:
            raise ContourConfigError(f"Lambda = {self.Lambda} must be >= 1")
        if self.N < 1:
            raise ContourConfigError(f"N = {self.N} must be >= 1")
        if self.objective not in _OBJECTIVES:
            raise ContourConfigError(f"unknown objective {self.objective!r}")
        if self.rho_override is not None and not (0.0 < self.rho_override < 1.0):
            raise ContourConfigError(f"rho_override = {self.rho_override} outside (0, 1)")


def strip_half_width(cfg: ContourConfig) -> float:
    """Half-width ``d = min(alpha_tilde, pi/2 - alpha_tilde - delta_prime)``
    of the analyticity strip of the conformal map."""
    return min(cfg.alpha_tilde, math.pi / 2 - cfg.alpha_tilde - cfg.delta_prime)


def a_of_rho(cfg: ContourConfig, rho: float) -> float:
    """Truncation half-length ``arccosh(Lambda / ((1-rho) sin(alpha_tilde - d)))``."""
    if not (0.0 < rho < 1.0):
        raise ContourConfigError(f"rho = {rho} outside (0, 1)")
    d = strip_half_width(cfg)
    s = math.sin(cfg.alpha_tilde - d)
    if s <= 0.0:
        raise ContourConfigError(
            "degenerate contour: alpha_tilde - d must be positive "
            f"(alpha_tilde = {cfg.alpha_tilde}, d = {d})"
        )
    arg = cfg.Lambda / ((1.0 - rho) * s)
    if arg < 1.0:
        raise ContourConfigError(f"arccosh argument {arg} < 1 at rho = {rho}")
    return math.acosh(arg)


def eps_n(cfg: ContourConfig, rho: float) -> float:
    """Truncation-error scale ``exp(-2 pi d N / a(rho))``."""
    d = strip_half_width(cfg)
    return math.exp(-2.0 * math.pi * d * cfg.N / a_of_rho(cfg, rho))


def objective_value(cfg: ContourConfig, rho: float) -> float:
    """Score of ``rho`` under the configured objective (lower is better)."""
    e = cfg.eps_machine
    en = eps_n(cfg, rho)
    if cfg.objective == OBJECTIVE_ALGORITHM1:
        return (1.0 - rho) * e + rho * en / (1.0 - en)
    # prose: eps * eps_N**(rho-1) + eps_N**rho, evaluated in log space for
    # stability (eps_N**(rho-1) = exp(mu * Lambda * t0) can be huge).
    log_en = -2.0 * math.pi * strip_half_width(cfg) * cfg.N / a_of_rho(cfg, rho)
    return e * math.exp((rho - 1.0) * log_en) + math.exp(rho * log_en)


def optimal_rho(cfg: ContourConfig) -> float:
    """Grid search ``rho_j = j / rho_grid`` minimizing the objective.

    Ties break toward smaller rho.  Infeasible grid points (arccosh domain
    errors) are skipped; if none is feasible a configuration error is
    raised.
    """
    if cfg.N < 2:
        raise ContourConfigError("optimal_rho needs N >= 2")
    if cfg.rho_grid < 10:
        raise ContourConfigError("rho_grid must be >= 10")
    best_rho = None
    best_val = math.inf
    for j in range(1, cfg.rho_grid):
        rho = j / cfg.rho_grid
        try:
            val = objective_value(cfg, rho)
        except ContourConfigError:
            continue
        if val < best_val:
            best_val = val
            best_rho = rho
    if best_rho is None:
        raise ContourConfigError("no feasible rho on the search grid")
    return best_rho


@dataclass(frozen=True)
class ContourPlan:
    """Frozen quadrature plan: optimized parameters plus the N node pairs."""

    cfg: ContourConfig
    rho_star: float
    a_rho: float
    mu: float
    tau: float
    d: float
    z: np.ndarray = field(repr=False)
    zprime: np.ndarray = field(repr=False)

    @property
    def nodes(self) -> list[tuple[complex, complex]]:
        return list(zip(self.z.tolist(), self.zprime.tolist()))

    @property
    def predicted_truncation(self) -> float:
        """The eps_N/(1 - eps_N) term of the error model at rho_star."""
        en = eps_n(self.cfg, self.rho_star)
        return en / (1.0 - en)

    @property
    def predicted_error(self) -> float:
        """Objective value at rho_star (relative error model)."""
        return objective_value(self.cfg, self.rho_star)

    @property
    def time_window(self) -> tuple[float, float]:
        return (self.cfg.t0, self.cfg.Lambda * self.cfg.t0)


def build_plan(cfg: ContourConfig) -> ContourPlan:
    """Select rho (unless overridden), derive (mu, tau) and emit the nodes.

    Deterministic for a fixed config: the nodes are ``z_k = mu * (1 +
    sin(i phi_k - alpha_tilde))`` with derivative weights ``z'_k = i mu *
    cos(i phi_k - alpha_tilde)`` at ``phi_k = (k + 1/2) tau``.
    """
    rho = cfg.rho_override if cfg.rho_override is not None else optimal_rho(cfg)
    a = a_of_rho(cfg, rho)
    d = strip_half_width(cfg)
    tau = a / cfg.N
    mu = 2.0 * math.pi * d * cfg.N * (1.0 - rho) / (cfg.t0 * cfg.Lambda * a)
    k = np.arange(cfg.N)
    phi = (k + 0.5) * tau
    at = cfg.alpha_tilde
    z = mu * (1.0 - math.sin(at) * np.cosh(phi)) + 1j * mu * math.cos(at) * np.sinh(phi)
    zprime = -mu * math.sin(at) * np.sinh(phi) + 1j * mu * math.cos(at) * np.cosh(phi)
    return ContourPlan(cfg=cfg, rho_star=rho, a_rho=a, mu=mu, tau=tau, d=d, z=z, zprime=zprime)


__all__ = [
    "ContourConfig",
    "ContourConfigError",
    "ContourPlan",
    "DEFAULT_OBJECTIVE",
    "MACHINE_EPS",
    "OBJECTIVE_ALGORITHM1",
    "OBJECTIVE_PROSE",
    "a_of_rho",
    "build_plan",
    "eps_n",
    "objective_value",
    "optimal_rho",
    "strip_half_width",
]
