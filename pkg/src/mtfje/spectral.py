"""Chebyshev-Legendre Galerkin machinery on (-1, 1).

Data is interpolated at the Chebyshev-Gauss-Lobatto (CGL) points
``cos(pi*j/M)`` where the transform between point values and Chebyshev
coefficients costs O(M log M) (a real even-symmetric FFT of size 2M).
The Galerkin trial/test basis is the compact Legendre combination

    phi_l = c_l * (L_l - L_{l+2}),   c_l = 1 / sqrt(4l + 6),

for l = 0..M-2, which vanishes at both endpoints, makes the stiffness
matrix the identity and the mass matrix pentadiagonal with the {0, +-2}
offset pattern.  The Chebyshev <-> Legendre coefficient connection is the
exact triangular recurrence, built once per space in O(M^2).
"""

from __future__ import annotations

import numpy as np

# Below this degree the transforms fall back to precomputed direct cosine
# sums; the FFT detour only pays off for larger M.
_FFT_MIN_M = 16


def cgl_nodes(M: int) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto points ``cos(pi*j/M)``, descending 1 -> -1."""
    if M < 4:
        raise ValueError(f"polynomial degree M = {M} must be >= 4")
    return np.cos(np.pi * np.arange(M + 1) / M)


def shen_scale(M: int) -> np.ndarray:
    """Normalization constants ``c_l = 1/sqrt(4l+6)`` for l = 0..M-2."""
    ell = np.arange(M - 1)
    return 1.0 / np.sqrt(4.0 * ell + 6.0)


def mass_matrix(M: int) -> tuple[np.ndarray, np.ndarray]:
    """Banded symmetric mass matrix ``(phi_j, phi_l)`` as (diagonal, offset-2).

    diag[l] = c_l^2 * (2/(2l+1) + 2/(2l+5)); off[l] couples l and l+2 with
    value -c_l c_{l+2} * 2/(2l+5).  Entries with |j-l| odd vanish by parity.
    """
    c = shen_scale(M)
    ell = np.arange(M - 1)
    diag = c**2 * (2.0 / (2 * ell + 1) + 2.0 / (2 * ell + 5))
    lo = ell[: M - 3]
    off = -c[lo] * c[lo + 2] * 2.0 / (2 * lo + 5)
    return diag, off


def dense_mass(M: int) -> np.ndarray:
    diag, off = mass_matrix(M)
    A = np.diag(diag)
    idx = np.arange(M - 3)
    A[idx, idx + 2] = off
    A[idx + 2, idx] = off
    return A


def _cheb_to_leg_matrix(M: int) -> np.ndarray:
    """Columns hold the Legendre coefficients of T_0 .. T_M."""
    A = np.zeros((M + 1, M + 1))
    A[0, 0] = 1.0
    A[1, 1] = 1.0
    ell = np.arange(M + 1)
    up = (ell + 1.0) / (2.0 * ell + 1.0)  # x L_l -> L_{l+1} weight
    dn = ell / (2.0 * ell + 1.0)  # x L_l -> L_{l-1} weight
    for n in range(1, M):
        prev, cur = A[:, n - 1], A[:, n]
        nxt = -prev.copy()
        nxt[1:] += 2.0 * up[:-1] * cur[:-1]
        nxt[:-1] += 2.0 * dn[1:] * cur[1:]
        A[:, n + 1] = nxt
    return A


def _leg_to_cheb_matrix(M: int) -> np.ndarray:
    """Columns hold the Chebyshev coefficients of L_0 .. L_M."""
    B = np.zeros((M + 1, M + 1))
    B[0, 0] = 1.0
    B[1, 1] = 1.0
    for ell in range(1, M):
        prev, cur = B[:, ell - 1], B[:, ell]
        # x * (sum c_n T_n): T_{n+1}/2 + T_{|n-1|}/2, with x*T_0 = T_1.
        xc = np.zeros(M + 1)
        xc[1] += cur[0]
        xc[2:] += 0.5 * cur[1:-1]
        xc[:-1] += 0.5 * cur[1:]
        B[:, ell + 1] = ((2 * ell + 1) * xc - ell * prev) / (ell + 1)
    return B


class SpectralSpace1D:
    """Per-degree Galerkin workspace; immutable after construction."""

    def __init__(self, M: int):
        self.M = M
        self.nodes = cgl_nodes(M)
        self.scale = shen_scale(M)
        self.mass_diag, self.mass_off = mass_matrix(M)
        self.c2l = _cheb_to_leg_matrix(M)
        self.l2c = _leg_to_cheb_matrix(M)
        if M < _FFT_MIN_M:
            j = np.arange(M + 1)
            self._wmat = np.cos(np.pi * np.outer(j, j) / M)
            self._wmat[:, 1:M] *= 2.0
        else:
            self._wmat = None

    # -- Chebyshev transforms -------------------------------------------------

    def _apply_w(self, v: np.ndarray) -> np.ndarray:
        # W_k = v_0 + (-1)^k v_M + 2 sum_{j=1}^{M-1} v_j cos(pi j k / M),
        # i.e. the size-2M even-extension DFT restricted to k = 0..M.
        if self._wmat is not None:
            return self._wmat @ v
        M = self.M
        w = np.concatenate([v, v[-2:0:-1]])
        if np.iscomplexobj(v):
            return np.fft.fft(w)[: M + 1]
        return np.fft.rfft(w)[: M + 1].real

    def cheb_coeffs(self, values: np.ndarray) -> np.ndarray:
        """Chebyshev coefficients of the degree-M interpolant through the
        CGL samples ``values`` (length M+1)."""
        values = np.asarray(values)
        if values.shape != (self.M + 1,):
            raise ValueError(f"expected {self.M + 1} samples, got shape {values.shape}")
        a = self._apply_w(values) / self.M
        a[0] *= 0.5
        a[-1] *= 0.5
        return a

    def cheb_synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        """Values of ``sum coeffs[k] T_k`` at the CGL nodes."""
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.M + 1,):
            raise ValueError(f"expected {self.M + 1} coefficients, got shape {coeffs.shape}")
        w = self._apply_w(coeffs)
        sign = np.where(np.arange(self.M + 1) % 2 == 0, 1.0, -1.0)
        return 0.5 * (w + coeffs[0] + sign * coeffs[-1])

    # -- basis connections ----------------------------------------------------

    def cheb_to_legendre(self, coeffs: np.ndarray) -> np.ndarray:
        return self.c2l @ np.asarray(coeffs)

    def legendre_to_cheb(self, coeffs: np.ndarray) -> np.ndarray:
        return self.l2c @ np.asarray(coeffs)

    def legendre_coeffs(self, values: np.ndarray) -> np.ndarray:
        """Legendre coefficients of the CGL interpolant of ``values``."""
        return self.cheb_to_legendre(self.cheb_coeffs(values))

    def basis_to_legendre(self, u: np.ndarray) -> np.ndarray:
        """Expand basis coefficients (length M-1) into Legendre coefficients
        (length M+1) via phi_l = c_l (L_l - L_{l+2})."""
        u = np.asarray(u)
        leg = np.zeros(self.M + 1, dtype=np.result_type(u, float))
        leg[: self.M - 1] += self.scale * u
        leg[2:] -= self.scale * u
        return leg

    # -- Galerkin operations --------------------------------------------------

    def load_vector(self, values: np.ndarray) -> np.ndarray:
        """Inner products ``(I_M u, phi_l)``, l = 0..M-2, from CGL samples.

        Uses Legendre orthogonality ``(L_j, L_l) = 2 delta_jl / (2j+1)`` on
        the interpolant's Legendre expansion.
        """
        ut = self.legendre_coeffs(values)
        ell = np.arange(self.M - 1)
        return self.scale * (
            ut[: self.M - 1] * 2.0 / (2 * ell + 1) - ut[2:] * 2.0 / (2 * ell + 5)
        )

    def load_from_legendre(self, leg: np.ndarray) -> np.ndarray:
        """Same as :meth:`load_vector` but starting from Legendre coefficients."""
        ell = np.arange(self.M - 1)
        return self.scale * (
            leg[: self.M - 1] * 2.0 / (2 * ell + 1) - leg[2:] * 2.0 / (2 * ell + 5)
        )

    def evaluate_basis(self, u: np.ndarray) -> np.ndarray:
        """Values of ``sum u_l phi_l`` at the CGL nodes (endpoints vanish)."""
        if np.asarray(u).shape != (self.M - 1,):
            raise ValueError(f"expected {self.M - 1} basis coefficients")
        return self.cheb_synthesize(self.legendre_to_cheb(self.basis_to_legendre(u)))

    def mass_apply(self, u: np.ndarray) -> np.ndarray:
        """Banded product Mass @ u."""
        u = np.asarray(u)
        out = self.mass_diag * u
        out[:-2] = out[:-2] + self.mass_off * u[2:]
        out[2:] = out[2:] + self.mass_off * u[:-2]
        return out

    def l2_norm(self, u: np.ndarray) -> float:
        """L2(-1,1) norm of the basis-coefficient field u (exact Gram form)."""
        u = np.asarray(u)
        return float(np.sqrt(np.real(np.vdot(u, self.mass_apply(u)))))


class SpectralSpace2D:
    """1D space plus the mass-matrix eigendecomposition used to decouple
    the tensorized Galerkin systems."""

    def __init__(self, base: SpectralSpace1D, eig_vals: np.ndarray, eig_vecs: np.ndarray):
        self.base = base
        self.eig_vals = eig_vals
        self.eig_vecs = eig_vecs

    @property
    def M(self) -> int:
        return self.base.M

    def load_matrix(self, values: np.ndarray) -> np.ndarray:
        """2D load ``(I_M u, phi_j(x) phi_l(y))`` from an (M+1)x(M+1) sample
        grid (x index first)."""
        base = self.base
        values = np.asarray(values)
        n = base.M + 1
        if values.shape != (n, n):
            raise ValueError(f"expected ({n}, {n}) grid samples, got {values.shape}")
        cx = np.stack([base.cheb_coeffs(values[:, j]) for j in range(n)], axis=1)
        cxy = np.stack([base.cheb_coeffs(cx[i, :]) for i in range(n)], axis=0)
        leg = base.c2l @ cxy @ base.c2l.T
        return self._band_combine(base, self._band_combine(base, leg).T).T

    @staticmethod
    def _band_combine(base: SpectralSpace1D, leg: np.ndarray) -> np.ndarray:
        # Apply the (phi_l, L_.) band map along axis 0.
        M = base.M
        ell = np.arange(M - 1)
        w0 = (base.scale * 2.0 / (2 * ell + 1))[:, None]
        w2 = (base.scale * 2.0 / (2 * ell + 5))[:, None]
        return w0 * leg[: M - 1] - w2 * leg[2:]

    def basis_to_legendre(self, u: np.ndarray) -> np.ndarray:
        base = self.base
        tmp = np.zeros((base.M + 1, base.M - 1), dtype=np.result_type(u, float))
        tmp[: base.M - 1] += base.scale[:, None] * u
        tmp[2:] -= base.scale[:, None] * u
        out = np.zeros((base.M + 1, base.M + 1), dtype=tmp.dtype)
        out[:, : base.M - 1] += base.scale[None, :] * tmp
        out[:, 2:] -= base.scale[None, :] * tmp
        return out

    def evaluate_basis(self, u: np.ndarray) -> np.ndarray:
        """Nodal values on the CGL x CGL grid of a basis-coefficient matrix."""
        base = self.base
        leg = self.basis_to_legendre(u)
        cheb = base.l2c @ leg @ base.l2c.T
        n = base.M + 1
        tmp = np.stack([base.cheb_synthesize(cheb[i, :]) for i in range(n)], axis=0)
        return np.stack([base.cheb_synthesize(tmp[:, j]) for j in range(n)], axis=1)

    def mass_apply(self, u: np.ndarray) -> np.ndarray:
        """(Mass (x) Mass) applied to a coefficient matrix."""
        base = self.base
        tmp = np.stack([base.mass_apply(u[:, j]) for j in range(u.shape[1])], axis=1)
        return np.stack([base.mass_apply(tmp[i, :]) for i in range(u.shape[0])], axis=0)

    def l2_norm(self, u: np.ndarray) -> float:
        u = np.asarray(u)
        return float(np.sqrt(np.real(np.sum(np.conj(u) * self.mass_apply(u)))))


def mass_eigendecomposition(space: SpectralSpace1D) -> SpectralSpace2D:
    """Symmetric eigendecomposition of the mass matrix (orthonormal Q)."""
    vals, vecs = np.linalg.eigh(dense_mass(space.M))
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("mass-matrix eigendecomposition failed")
    return SpectralSpace2D(space, vals, vecs)


# -- evaluation and error measures --------------------------------------------


def legendre_eval(leg: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate a Legendre series at arbitrary points (complex-safe)."""
    if np.iscomplexobj(leg):
        return np.polynomial.legendre.legval(x, leg.real) + 1j * np.polynomial.legendre.legval(
            x, leg.imag
        )
    return np.polynomial.legendre.legval(x, leg)


def legendre_eval_2d(leg: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate a 2D Legendre coefficient matrix on the grid x (x) y."""
    deg = leg.shape[0] - 1
    vx = np.polynomial.legendre.legvander(x, deg)
    vy = np.polynomial.legendre.legvander(y, deg)
    return vx @ leg @ vy.T


def gauss_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def l2_error_1d(space: SpectralSpace1D, u: np.ndarray, exact, quad_extra: int = 8) -> float:
    """L2(-1,1) error of the basis field u against a callable exact solution,
    by Gauss-Legendre quadrature with M + quad_extra points."""
    xq, wq = gauss_rule(space.M + quad_extra)
    vals = legendre_eval(space.basis_to_legendre(u), xq)
    diff = np.abs(vals - exact(xq)) ** 2
    return float(np.sqrt(np.sum(wq * diff)))


def linf_error_1d(space: SpectralSpace1D, u: np.ndarray, exact, grid: int = 512) -> float:
    """Max-norm error on a uniform evaluation grid (endpoints included)."""
    xg = np.linspace(-1.0, 1.0, grid)
    vals = legendre_eval(space.basis_to_legendre(u), xg)
    return float(np.max(np.abs(vals - exact(xg))))


def l2_error_2d(space2d: SpectralSpace2D, u: np.ndarray, exact, quad_extra: int = 8) -> float:
    xq, wq = gauss_rule(space2d.M + quad_extra)
    vals = legendre_eval_2d(space2d.basis_to_legendre(u), xq, xq)
    diff = np.abs(vals - exact(xq[:, None], xq[None, :])) ** 2
    return float(np.sqrt(np.sum(wq[:, None] * wq[None, :] * diff)))


def linf_error_2d(space2d: SpectralSpace2D, u: np.ndarray, exact, grid: int = 512) -> float:
    xg = np.linspace(-1.0, 1.0, grid)
    vals = legendre_eval_2d(space2d.basis_to_legendre(u), xg, xg)
    return float(np.max(np.abs(vals - exact(xg[:, None], xg[None, :]))))
