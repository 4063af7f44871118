"""Laplace-domain Galerkin solves at the contour nodes and the quadrature
accumulation that turns them into time-domain fields.

At a contour node z the semi-discrete problem reads

    [kappa1(z) * Mass + kappa2(z) * I] p_hat = g1(z) * load(p0) + load(f_hat(z))

with kappa1 = z**gamma * N(z), kappa2 = D(z) and g1 = kappa1 / z.  In 1D the
pentadiagonal system decouples by parity into two complex tridiagonal
systems (Thomas, no pivoting, residual-checked).  In 2D the Kronecker
system decouples entrywise after conjugating with the mass-matrix
eigenvectors.  Node solves are independent; the final accumulation

    p(t) = (tau / pi) * Im( sum_k exp(z_k t) p_hat(z_k) z'_k )

is performed in fixed node order so results do not depend on the worker
count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import tridiag_solve
from .contour import ContourPlan
from .spectral import SpectralSpace1D, SpectralSpace2D
from .symbols import SymbolSet, gamma_real

RESIDUAL_RTOL = 1e-11


class NodeSolveError(ArithmeticError):
    """A Laplace-domain node solve failed (singular system or bad residual)."""


@dataclass(frozen=True)
class SourceTerm:
    """One separable time factor, contributing ``coef * z**zpow`` in the
    Laplace domain."""

    coef: float
    zpow: float

    @staticmethod
    def from_time_power(coef: float, kappa: float) -> "SourceTerm":
        """Term for ``coef * t**kappa`` (kappa > -1)."""
        if not kappa > -1.0:
            raise ValueError(f"time power kappa = {kappa} must exceed -1")
        return SourceTerm(coef * gamma_real(kappa + 1.0), -kappa - 1.0)


def eval_terms(terms, z):
    acc = 0.0 + 0.0j
    for t in terms:
        acc = acc + t.coef * z**t.zpow
    return acc


class LaplaceSourceSpec:
    """Initial data plus source in the form the Laplace-domain solve needs.

    ``separable`` is a list of ``(profile_samples, terms)`` pairs where the
    profile is sampled on the CGL grid ((M+1,) in 1D, (M+1, M+1) in 2D) and
    ``terms`` is a sequence of :class:`SourceTerm`.  ``f_hat_callback(z)``
    is the escape hatch for non-separable data; it must return grid samples
    and satisfy the reflection property f_hat(conj z) == conj(f_hat(z)).
    """

    def __init__(self, p0_samples=None, separable=(), f_hat_callback=None):
        self.p0_samples = None if p0_samples is None else np.asarray(p0_samples, dtype=float)
        self.separable = [
            (np.asarray(profile, dtype=float), tuple(terms)) for profile, terms in separable
        ]
        self.f_hat_callback = f_hat_callback


@dataclass
class CimSolution:
    """Real-valued nodal fields at the query times, with solve diagnostics."""

    times: np.ndarray
    fields: list[np.ndarray]
    coeffs: list[np.ndarray]
    residuals: np.ndarray
    plan: ContourPlan

    def field_at(self, i: int) -> np.ndarray:
        return self.fields[i]


def _coefficients(symbols: SymbolSet, z: complex) -> tuple[complex, complex, complex]:
    kappa1 = z**symbols.params.gamma * symbols.numerator(z)
    kappa2 = symbols.denominator(z)
    return kappa1, kappa2, kappa1 / z


def solve_node_scalar(symbols: SymbolSet, z: complex, lam: float, p0: float, f_hat: complex) -> complex:
    """Laplace-domain solution of the scalar problem with spatial eigenvalue
    ``lam``: (z**(gamma-1) N p0 + f_hat) / (z**gamma N + lam D)."""
    kappa1, kappa2, g1 = _coefficients(symbols, z)
    den = kappa1 + lam * kappa2
    if abs(den) < 1e-300:
        raise NodeSolveError(f"scalar symbol vanished at z = {z}")
    return (g1 * p0 + f_hat) / den


def _solve_node_1d(space: SpectralSpace1D, symbols: SymbolSet, z: complex, rhs: np.ndarray):
    kappa1, kappa2, _ = _coefficients(symbols, z)
    n = space.M - 1
    rhs = np.asarray(rhs, dtype=np.complex128)
    out = np.empty(n, dtype=np.complex128)
    for par in (0, 1):
        idx = np.arange(par, n, 2)
        d = (kappa1 * space.mass_diag[idx] + kappa2).astype(np.complex128)
        b = np.ascontiguousarray(rhs[idx])
        if idx.size == 1:
            out[idx] = b / d
            continue
        off = (kappa1 * space.mass_off[idx[:-1]]).astype(np.complex128)
        out[idx] = tridiag_solve(off, d, off, b)
    res = kappa1 * space.mass_apply(out) + kappa2 * out - rhs
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    rel = float(np.max(np.abs(res))) / scale
    if not rel <= RESIDUAL_RTOL:
        raise NodeSolveError(f"1D node residual {rel:.3e} exceeds {RESIDUAL_RTOL} at z = {z}")
    return out, rel


def solve_node_1d(space: SpectralSpace1D, symbols: SymbolSet, z: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve [kappa1 Mass + kappa2 I] p_hat = rhs by parity-split Thomas.

    The mass matrix couples only indices of equal parity, so the
    pentadiagonal system splits into two tridiagonal ones; strict diagonal
    dominance on the contour makes pivoting unnecessary, and the residual
    check backstops that assumption.
    """
    out, _ = _solve_node_1d(space, symbols, z, rhs)
    return out


def _mass_rows(base: SpectralSpace1D, a: np.ndarray) -> np.ndarray:
    return np.stack([base.mass_apply(a[i, :]) for i in range(a.shape[0])], axis=0)


def _mass_cols(base: SpectralSpace1D, a: np.ndarray) -> np.ndarray:
    return np.stack([base.mass_apply(a[:, j]) for j in range(a.shape[1])], axis=1)


def _solve_node_2d(space2d: SpectralSpace2D, symbols: SymbolSet, z: complex, rhs: np.ndarray):
    kappa1, kappa2, _ = _coefficients(symbols, z)
    q = space2d.eig_vecs
    lam = space2d.eig_vals
    rhs = np.asarray(rhs, dtype=np.complex128)
    rt = q.T @ rhs @ q
    denom = kappa1 * lam[:, None] * lam[None, :] + kappa2 * (lam[:, None] + lam[None, :])
    if np.any(np.abs(denom) < 1e-300):
        raise NodeSolveError(f"2D eigen-coefficient vanished at z = {z}")
    out = q @ (rt / denom) @ q.T
    res = kappa1 * space2d.mass_apply(out) + kappa2 * (
        _mass_cols(space2d.base, out) + _mass_rows(space2d.base, out)
    ) - rhs
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    rel = float(np.max(np.abs(res))) / scale
    if not rel <= RESIDUAL_RTOL:
        raise NodeSolveError(f"2D node residual {rel:.3e} exceeds {RESIDUAL_RTOL} at z = {z}")
    return out, rel


def solve_node_2d(space2d: SpectralSpace2D, symbols: SymbolSet, z: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve [kappa1 M(x)M + kappa2 (M(x)I + I(x)M)] vec(P) = vec(rhs).

    With Mass = Q diag(lam) Q^T the transformed unknown Pt = Q^T P Q
    satisfies (kappa1 lam_i lam_j + kappa2 (lam_i + lam_j)) Pt_ij = Rt_ij
    entrywise, so each node costs a few dense M x M multiplies.
    """
    out, _ = _solve_node_2d(space2d, symbols, z, rhs)
    return out


def _node_rhs(space, symbols, source: LaplaceSourceSpec, z, p0_load, profile_loads):
    _, _, g1 = _coefficients(symbols, z)
    shape = p0_load.shape if p0_load is not None else profile_loads[0][0].shape
    rhs = np.zeros(shape, dtype=np.complex128)
    if p0_load is not None:
        rhs += g1 * p0_load
    for load, terms in profile_loads:
        rhs += eval_terms(terms, z) * load
    if source.f_hat_callback is not None:
        samples = np.asarray(source.f_hat_callback(z), dtype=np.complex128)
        rhs += space.load_vector(samples) if samples.ndim == 1 else space.load_matrix(samples)
    return rhs


def _window_check(plan: ContourPlan, times: np.ndarray) -> None:
    lo, hi = plan.time_window
    if np.any(times < lo * (1 - 1e-12)) or np.any(times > hi * (1 + 1e-12)):
        raise ValueError(
            f"query times must lie in the contour window [{lo}, {hi}]; got "
            f"range [{times.min()}, {times.max()}]"
        )


def accumulate(plan: ContourPlan, node_values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Midpoint-rule accumulation (tau/pi) Im(sum_k e^{z_k t} v_k z'_k).

    ``node_values`` has the node index first; the sum runs in fixed node
    order (a matmul), so the result is independent of how the node solves
    were scheduled.
    """
    w = np.exp(np.multiply.outer(times, plan.z)) * plan.zprime
    flat = np.asarray(node_values, dtype=np.complex128).reshape(plan.z.size, -1)
    acc = w @ flat
    out = (plan.tau / np.pi) * acc.imag
    return out.reshape((times.size,) + np.asarray(node_values).shape[1:])


def cim_invert_scalar(plan: ContourPlan, fhat_at_nodes: np.ndarray, times) -> np.ndarray:
    """Inverse Laplace transform of a scalar function from its node values."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _window_check(plan, times)
    return accumulate(plan, np.asarray(fhat_at_nodes, dtype=np.complex128), times)


def solve_scalar_problem(
    plan: ContourPlan,
    symbols: SymbolSet,
    lam: float,
    p0: float,
    terms,
    times,
    f_hat_callback=None,
) -> np.ndarray:
    """Fully discrete solution of the scalar (0-D) problem at ``times``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _window_check(plan, times)
    vals = np.empty(plan.z.size, dtype=np.complex128)
    for k, z in enumerate(plan.z):
        fh = eval_terms(terms, complex(z))
        if f_hat_callback is not None:
            fh = fh + f_hat_callback(complex(z))
        vals[k] = solve_node_scalar(symbols, complex(z), lam, p0, fh)
    return accumulate(plan, vals, times)


def cim_solve(
    plan: ContourPlan,
    space,
    symbols: SymbolSet,
    source: LaplaceSourceSpec,
    times,
    workers: int = 1,
) -> CimSolution:
    """Run all node solves, accumulate the quadrature and synthesize fields.

    ``space`` is a :class:`SpectralSpace1D` or :class:`SpectralSpace2D`;
    the problem dimension follows from it.  Any node failure aborts the
    whole run with diagnostics.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _window_check(plan, times)
    two_d = isinstance(space, SpectralSpace2D)

    if source.p0_samples is not None:
        p0_load = space.load_matrix(source.p0_samples) if two_d else space.load_vector(source.p0_samples)
    else:
        p0_load = None
    profile_loads = [
        (space.load_matrix(profile) if two_d else space.load_vector(profile), terms)
        for profile, terms in source.separable
    ]
    if p0_load is None and not profile_loads and source.f_hat_callback is None:
        raise ValueError("source specifies neither initial data nor a source term")

    def solve_one(k: int):
        z = complex(plan.z[k])
        rhs = _node_rhs(space, symbols, source, z, p0_load, profile_loads)
        if two_d:
            return _solve_node_2d(space, symbols, z, rhs)
        return _solve_node_1d(space, symbols, z, rhs)

    n_nodes = plan.z.size
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_one, range(n_nodes)))
    else:
        results = [solve_one(k) for k in range(n_nodes)]

    node_values = np.stack([r[0] for r in results], axis=0)
    residuals = np.array([r[1] for r in results])
    coeff_fields = accumulate(plan, node_values, times)

    fields = []
    coeffs = []
    for i in range(times.size):
        c = coeff_fields[i]
        coeffs.append(c)
        fields.append(space.evaluate_basis(c))

    return CimSolution(times=times, fields=fields, coeffs=coeffs, residuals=residuals, plan=plan)
