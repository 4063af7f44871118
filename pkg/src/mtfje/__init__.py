"""Solver and stochastic toolkit for the multi-term time-fractional
Jeffreys equation: inverse-Laplace contour quadrature in time,
Chebyshev-Legendre Galerkin in space, and a CTRW Monte Carlo layer."""

__version__ = "0.1.0"

from .contour import ContourConfig, ContourPlan, build_plan, optimal_rho, strip_half_width
from .ctrw import (
    CtrwEnsemble,
    WaitingTimeTable,
    fit_loglog_slope,
    invert_waiting_time,
    msd_analytic,
    msd_empirical,
    msd_empirical_streamed,
    sample_waiting_times,
    simulate,
)
from .params import PDF_STRICT, SOLVER, JeffreysParams, ParameterError, ValidationReport, validate
from .solver import (
    CimSolution,
    LaplaceSourceSpec,
    NodeSolveError,
    SourceTerm,
    cim_invert_scalar,
    cim_solve,
    solve_node_1d,
    solve_node_2d,
    solve_node_scalar,
    solve_scalar_problem,
)
from .spectral import SpectralSpace1D, SpectralSpace2D, cgl_nodes, mass_eigendecomposition
from .symbols import SingularityError, SymbolSet, gamma_real, laplace_power

__all__ = [
    "CimSolution",
    "ContourConfig",
    "ContourPlan",
    "CtrwEnsemble",
    "JeffreysParams",
    "LaplaceSourceSpec",
    "NodeSolveError",
    "PDF_STRICT",
    "ParameterError",
    "SOLVER",
    "SingularityError",
    "SourceTerm",
    "SpectralSpace1D",
    "SpectralSpace2D",
    "SymbolSet",
    "ValidationReport",
    "WaitingTimeTable",
    "build_plan",
    "cgl_nodes",
    "cim_invert_scalar",
    "cim_solve",
    "fit_loglog_slope",
    "gamma_real",
    "invert_waiting_time",
    "laplace_power",
    "mass_eigendecomposition",
    "msd_analytic",
    "msd_empirical",
    "msd_empirical_streamed",
    "optimal_rho",
    "sample_waiting_times",
    "simulate",
    "solve_node_1d",
    "solve_node_2d",
    "solve_node_scalar",
    "solve_scalar_problem",
    "strip_half_width",
    "validate",
]
