import math

import numpy as np
import pytest
from numpy.polynomial.legendre import legval

from mtfje.spectral import (
    SpectralSpace1D,
    cgl_nodes,
    dense_mass,
    gauss_rule,
    legendre_eval,
    legendre_eval_2d,
    mass_eigendecomposition,
    mass_matrix,
    shen_scale,
)

# mpmath eigenvalues of the M=8 mass matrix (40-digit arithmetic on the
# rational similar matrix Gram * diag(c_l^2)).
MASS_EIGVALS_M8 = [
    0.004551231062665073,
    0.0070110296160593498,
    0.015722167803117034,
    0.025001263260305939,
    0.045030101859091194,
    0.10132104045696804,
    0.40528473456924435,
]

# Adaptive quadrature (mpmath.quad) of integral(sin(pi x) * phi_l(x)) for
# l = 0..5; even entries vanish by parity.
SIN_LOADS = [0.0, 0.305964920532774, 0.0, -0.087397711647072893, 0.0, 0.0082544880592790292]


def shen_basis_values(M, l, x):
    c = np.zeros(M + 3)
    cl = 1.0 / math.sqrt(4 * l + 6)
    c[l] = cl
    c[l + 2] = -cl
    return legval(x, c)


def test_cgl_nodes_m4():
    nodes = cgl_nodes(4)
    expect = np.array([1.0, math.sqrt(2) / 2, 0.0, -math.sqrt(2) / 2, -1.0])
    assert np.allclose(nodes, expect, atol=1e-15)


def test_cgl_nodes_symmetry_and_value():
    nodes = cgl_nodes(8)
    assert np.allclose(nodes, -nodes[::-1], atol=1e-15)
    assert nodes[1] == pytest.approx(0.923879532511286756, rel=1e-15)


def test_cgl_rejects_small_degree():
    with pytest.raises(ValueError):
        cgl_nodes(3)


@pytest.mark.parametrize("M", [8, 21, 64])
def test_cheb_transform_roundtrip(M, rng):
    sp = SpectralSpace1D(M)
    vals = rng.standard_normal(M + 1)
    coeffs = sp.cheb_coeffs(vals)
    back = sp.cheb_synthesize(coeffs)
    assert np.max(np.abs(back - vals)) < 1e-13


def test_cheb_constant_and_basis_element():
    sp = SpectralSpace1D(8)
    coeffs = sp.cheb_coeffs(np.ones(9))
    assert coeffs[0] == pytest.approx(1.0, abs=1e-15)
    assert np.max(np.abs(coeffs[1:])) < 1e-15
    t2 = 2 * sp.nodes**2 - 1
    coeffs = sp.cheb_coeffs(t2)
    expect = np.zeros(9)
    expect[2] = 1.0
    assert np.max(np.abs(coeffs - expect)) < 1e-14


@pytest.mark.parametrize("M", [12, 24, 64])
def test_fast_transform_matches_direct_sums(M, rng):
    sp = SpectralSpace1D(M)
    vals = rng.standard_normal(M + 1)
    # direct O(M^2) cosine sums
    j = np.arange(M + 1)
    direct = np.empty(M + 1)
    for k in range(M + 1):
        weights = np.ones(M + 1)
        weights[0] = weights[-1] = 0.5
        direct[k] = (2.0 / M) * np.sum(weights * vals * np.cos(np.pi * j * k / M))
    direct[0] *= 0.5
    direct[-1] *= 0.5
    assert np.max(np.abs(sp.cheb_coeffs(vals) - direct)) < 1e-12


def test_cheb_transform_complex_input(rng):
    sp = SpectralSpace1D(20)
    vals = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    assert np.max(np.abs(sp.cheb_synthesize(sp.cheb_coeffs(vals)) - vals)) < 1e-13


def test_cheb_to_legendre_exact_t2():
    sp = SpectralSpace1D(8)
    c = np.zeros(9)
    c[0] = 1.0
    leg = sp.cheb_to_legendre(c)
    assert leg[0] == pytest.approx(1.0)  # T0 = L0
    c = np.zeros(9)
    c[2] = 1.0
    leg = sp.cheb_to_legendre(c)
    # 2x^2 - 1 = (4/3) L2 - (1/3) L0
    assert np.allclose(leg[:4], [-1 / 3, 0.0, 4 / 3, 0.0], atol=1e-15)


def test_connection_roundtrip_pointwise(rng):
    sp = SpectralSpace1D(24)
    cheb = rng.standard_normal(25)
    leg = sp.cheb_to_legendre(cheb)
    x = np.linspace(-1, 1, 50)
    cheb_vals = np.polynomial.chebyshev.chebval(x, cheb)
    leg_vals = legval(x, leg)
    assert np.max(np.abs(cheb_vals - leg_vals)) < 1e-12
    back = sp.legendre_to_cheb(leg)
    assert np.max(np.abs(back - cheb)) < 1e-12


def test_mass_matrix_entries():
    diag, off = mass_matrix(8)
    assert diag[0] == pytest.approx(0.4, rel=1e-15)  # (1/6)(2 + 2/5)
    assert off[0] == pytest.approx(-0.0436435780471984763, rel=1e-14)


def test_mass_matrix_full_gram_oracle():
    M = 12
    xq, wq = gauss_rule(40)
    gram = np.empty((M - 1, M - 1))
    for i in range(M - 1):
        for j in range(M - 1):
            gram[i, j] = np.sum(wq * shen_basis_values(M, i, xq) * shen_basis_values(M, j, xq))
    assert np.max(np.abs(dense_mass(M) - gram)) < 1e-13


def test_mass_parity_decoupling():
    A = dense_mass(10)
    for i in range(9):
        for j in range(9):
            if (i + j) % 2 == 1:
                assert A[i, j] == 0.0


def test_stiffness_is_identity():
    M = 16
    xq, wq = gauss_rule(60)
    for i in range(M - 1):
        ci = 1 / math.sqrt(4 * i + 6)
        di = np.zeros(M + 3)
        di[i] = ci
        di[i + 2] = -ci
        dderiv_i = np.polynomial.legendre.legder(di)
        for j in range(i, M - 1):
            cj = 1 / math.sqrt(4 * j + 6)
            dj = np.zeros(M + 3)
            dj[j] = cj
            dj[j + 2] = -cj
            dderiv_j = np.polynomial.legendre.legder(dj)
            val = np.sum(wq * legval(xq, dderiv_i) * legval(xq, dderiv_j))
            assert val == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)


def test_load_vector_zero_and_basis_element():
    sp = SpectralSpace1D(10)
    assert np.max(np.abs(sp.load_vector(np.zeros(11)))) == 0.0
    phi0 = shen_basis_values(10, 0, sp.nodes)
    load = sp.load_vector(phi0)
    diag, off = mass_matrix(10)
    assert load[0] == pytest.approx(diag[0], rel=1e-13)
    assert load[2] == pytest.approx(off[0], rel=1e-12)
    mask = np.ones(9, bool)
    mask[[0, 2]] = False
    assert np.max(np.abs(load[mask])) < 1e-14


def test_load_vector_sine_quadrature_oracle():
    sp = SpectralSpace1D(16)
    load = sp.load_vector(np.sin(np.pi * sp.nodes))
    for l, expect in enumerate(SIN_LOADS):
        assert load[l] == pytest.approx(expect, abs=1e-10)


def test_evaluate_basis_unit_vector():
    sp = SpectralSpace1D(9)
    e0 = np.zeros(8)
    e0[0] = 1.0
    vals = sp.evaluate_basis(e0)
    expect = (1 / math.sqrt(6)) * 1.5 * (1 - sp.nodes**2)
    assert np.max(np.abs(vals - expect)) < 1e-13
    assert abs(vals[0]) < 1e-13 and abs(vals[-1]) < 1e-13
    assert np.max(np.abs(sp.evaluate_basis(np.zeros(8)))) == 0.0


def test_galerkin_projection_roundtrip(rng):
    # load_vector + mass solve reproduces an element of the space
    sp = SpectralSpace1D(14)
    u = rng.standard_normal(13)
    vals = sp.evaluate_basis(u)
    load = sp.load_vector(vals)
    coeffs = np.linalg.solve(dense_mass(14), load)
    assert np.max(np.abs(coeffs - u)) < 1e-12


def test_parseval_norm_matches_quadrature(rng):
    sp = SpectralSpace1D(12)
    u = rng.standard_normal(11)
    xq, wq = gauss_rule(30)
    vals = legendre_eval(sp.basis_to_legendre(u), xq)
    quad_norm = math.sqrt(np.sum(wq * vals**2))
    assert sp.l2_norm(u) == pytest.approx(quad_norm, rel=1e-10)


def test_mass_eigendecomposition():
    sp = SpectralSpace1D(8)
    sp2 = mass_eigendecomposition(sp)
    q = sp2.eig_vecs
    assert np.max(np.abs(q @ q.T - np.eye(7))) < 1e-12
    assert np.all(sp2.eig_vals > 0)
    recon = q @ np.diag(sp2.eig_vals) @ q.T
    assert np.max(np.abs(recon - dense_mass(8))) < 1e-12
    assert np.allclose(np.sort(sp2.eig_vals), MASS_EIGVALS_M8, rtol=1e-11)


def test_load_matrix_and_evaluate_2d(rng):
    sp2 = mass_eigendecomposition(SpectralSpace1D(8))
    u = rng.standard_normal((7, 7))
    vals = sp2.evaluate_basis(u)
    # boundary rows/columns vanish
    assert np.max(np.abs(vals[0])) < 1e-12
    assert np.max(np.abs(vals[:, -1])) < 1e-12
    # Galerkin roundtrip through the 2D load
    load = sp2.load_matrix(vals)
    A = dense_mass(8)
    coeffs = np.linalg.solve(A, np.linalg.solve(A, load.T).T)
    assert np.max(np.abs(coeffs - u)) < 1e-11
    # 2D norm consistency with the tensor quadrature
    xq, wq = gauss_rule(24)
    grid_vals = legendre_eval_2d(sp2.basis_to_legendre(u), xq, xq)
    quad = math.sqrt(np.sum(wq[:, None] * wq[None, :] * grid_vals**2))
    assert sp2.l2_norm(u) == pytest.approx(quad, rel=1e-10)
