import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mtfje import JeffreysParams, SymbolSet, gamma_real, laplace_power
from mtfje.params import PDF_STRICT, SOLVER

# Extended-precision oracle (mpmath, 40 digits) for the parameter set
# alpha=0.5, beta=0.35, gamma=0.45, a=1, b=100 at z = 10:
#   z**0.45 * (1 + z**0.5) / (1 + 100 * z**0.35)
ETA_AT_10 = 0.052166949967262035443

# Adaptive-quadrature oracle for integral(exp(-z t) t**0.8, t=0..inf) at
# z = 3+4i (mpmath.quad, agrees with the Gamma form to 18 digits).
LP_45_AT_3_4J = -0.00504650749018213226 - 0.0511539881424960172j


def test_eta_symmetric_coefficients_collapse():
    p = JeffreysParams(alpha=0.5, beta=0.5, gamma=0.3, a=1.0, b=1.0)
    s = SymbolSet(p)
    assert s.eta(1.0) == pytest.approx(1.0)


def test_eta_reflection(fig_params):
    s = SymbolSet(fig_params)
    z = 2.0 + 3.0j
    assert s.eta(np.conj(z)) == pytest.approx(np.conj(s.eta(z)), rel=1e-15)


def test_eta_extended_precision_oracle(fig_params):
    s = SymbolSet(fig_params)
    val = s.eta(10.0 + 0.0j)
    assert abs(val.imag) < 1e-16
    assert val.real == pytest.approx(ETA_AT_10, rel=1e-14)


def test_eta_rejects_zero(fig_params):
    with pytest.raises(ZeroDivisionError):
        SymbolSet(fig_params).eta(0.0)


def test_g_collapses_at_one():
    p = JeffreysParams(alpha=0.5, beta=0.5, gamma=0.5, a=1.0, b=1.0)
    assert SymbolSet(p).g(1.0) == pytest.approx(0.5)


def test_g_reflection(fig_params):
    s = SymbolSet(fig_params)
    z = 1.5 - 2.5j
    assert s.g(np.conj(z)) == pytest.approx(np.conj(s.g(z)), rel=1e-15)


def test_g_asymptotic_decay(fig_params):
    # |g(z)| ~ |z|^(1-alpha-gamma) / a along a fixed ray
    s = SymbolSet(fig_params)
    expo = fig_params.alpha + fig_params.gamma - 1.0
    ray = np.exp(1j * 3 * np.pi / 8)
    ratios = [abs(s.g(r * ray)) * r**expo for r in (1e2, 1e3, 1e4)]
    assert all(0.5 < q < 2.0 for q in ratios)
    assert ratios[-1] == pytest.approx(1.0 / fig_params.a, rel=0.05)


def test_psi_hat_normalization(fig_params):
    s = SymbolSet(fig_params, strictness=PDF_STRICT)
    assert s.psi_hat(0.0) == pytest.approx(1.0)


def test_psi_hat_bounded_and_monotone(fig_params):
    s = SymbolSet(fig_params, strictness=PDF_STRICT)
    for xi in (0.1, 1.0, 10.0):
        val = s.psi_hat(xi)
        assert 0.0 < val.real < 1.0
        assert abs(val.imag) == 0.0
    grid = np.geomspace(1e-6, 1e6, 4000)
    vals = s.psi_hat(grid).real
    assert np.all(np.diff(vals) <= 1e-15)


def test_laplace_power_trivial_values():
    assert laplace_power(0.0, 2.0) == pytest.approx(0.5, rel=1e-13)
    assert laplace_power(1.0, 1.0 + 0.0j) == pytest.approx(1.0, rel=1e-13)


def test_laplace_power_quadrature_oracle():
    val = laplace_power(0.8, 3.0 + 4.0j)
    assert val == pytest.approx(LP_45_AT_3_4J, abs=1e-10)


def test_laplace_power_domain():
    with pytest.raises(ValueError):
        laplace_power(-1.0, 2.0)
    with pytest.raises(ZeroDivisionError):
        laplace_power(0.5, 0.0)


def test_msd_laplace_degenerate_normal_diffusion():
    p = JeffreysParams(alpha=0.7, beta=0.7, gamma=1.0, a=1.0, b=1.0)
    s = SymbolSet(p, strictness=SOLVER)
    for z in (0.5 + 0.5j, 2.0, 10.0 - 3.0j):
        assert s.msd_laplace(z) == pytest.approx(1.0 / complex(z) ** 2, rel=1e-14)


def test_msd_laplace_limits(fig_params):
    s = SymbolSet(fig_params)
    # small-z branch: z**(gamma+1) * msd_hat -> 1 (the b z**beta correction
    # decays like z**0.35, so convergence is slow but monotone)
    devs = [
        abs(abs(xi ** (fig_params.gamma + 1) * s.msd_laplace(xi)) - 1.0)
        for xi in (1e-8, 1e-10, 1e-12)
    ]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.01
    # large-z branch: msd_hat ~ (b/a) z**(beta-alpha-gamma-1)
    xi = 1e6
    lead = (fig_params.b / fig_params.a) * xi ** (
        fig_params.beta - fig_params.alpha - fig_params.gamma - 1
    )
    assert abs(s.msd_laplace(xi)) == pytest.approx(lead, rel=0.01)


def test_sector_bound(fig_params, rng):
    s = SymbolSet(fig_params, strictness=PDF_STRICT)
    budget = fig_params.alpha + fig_params.gamma + fig_params.minor_alpha_sum
    args = rng.uniform(-7 * np.pi / 8, 7 * np.pi / 8, 2000)
    mags = 10 ** rng.uniform(-6, 8, 2000)
    z = mags * np.exp(1j * args)
    eta = s.eta(z)
    assert np.all(np.abs(np.angle(eta)) <= budget * np.abs(args) + 1e-12)


def test_growth_bound(fig_params, rng):
    s = SymbolSet(fig_params)
    expo = fig_params.alpha - fig_params.beta + fig_params.gamma
    args = rng.uniform(-7 * np.pi / 8, 7 * np.pi / 8, 2000)
    mags = 10 ** rng.uniform(math.log10(2.0), 8, 2000)
    z = mags * np.exp(1j * args)
    ratio = np.abs(s.eta(z)) / mags**expo
    assert np.all(np.isfinite(ratio))
    assert ratio.min() > 0
    # the existential constants: bounded spread, approaching a/b far out
    far = mags > 1e7
    assert np.all(ratio[far] / (fig_params.a / fig_params.b) < 3.0)
    assert np.all(ratio[far] / (fig_params.a / fig_params.b) > 1.0 / 3.0)


@settings(max_examples=200)
@given(
    re=st.floats(-50, 50),
    im=st.floats(0.01, 50),
)
def test_reflection_property_all_symbols(re, im):
    p = JeffreysParams(alpha=0.5, beta=0.35, gamma=0.45, a=1.0, b=100.0)
    s = SymbolSet(p)
    z = complex(re, im)
    for fn in (s.eta, s.g, s.psi_hat, s.msd_laplace, s.numerator, s.denominator):
        left = fn(np.conj(z))
        right = np.conj(fn(z))
        assert left == pytest.approx(right, rel=1e-12, abs=1e-300)


def test_gamma_real_accuracy():
    xs = np.linspace(-0.999, 50.0, 5173)
    for x in xs:
        if x <= 0 and abs(x - round(x)) < 1e-9:
            continue
        assert gamma_real(float(x)) == pytest.approx(math.gamma(x), rel=1e-13)
    with pytest.raises(ValueError):
        gamma_real(0.0)
    with pytest.raises(ValueError):
        gamma_real(-2.0)
