"""Benchmark problem presets (manufactured solutions and initial data).

The Laplace-domain sources are derived by substituting the exact solution
into the governing equation, not transcribed, so they stay consistent with
the operator conventions for every admissible parameter choice (including
the classical limit, where some time-domain power exponents degenerate but
the z-domain coefficients remain finite).
"""

from __future__ import annotations

import math

import numpy as np

from .params import JeffreysParams
from .solver import LaplaceSourceSpec, SourceTerm
from .spectral import SpectralSpace1D, SpectralSpace2D
from .symbols import gamma_real


def scalar_power_problem(params: JeffreysParams, lam: float):
    """Scalar benchmark with exact solution ``p(t) = 1 + t**(4/5)``.

    Returns ``(terms, p0, exact)``.  Substituting p into the scalar
    equation gives, in the Laplace domain,

        f_hat = G * (z**(g-9/5) + a z**(a+g-9/5))
              + lam * (1/z + G z**(-9/5) + b z**(b-1) + b G z**(b-9/5))

    with G = Gamma(9/5) and (a, b, g) the fractional orders.
    """
    g95 = gamma_real(9.0 / 5.0)
    al, be, ga = params.alpha, params.beta, params.gamma
    terms = (
        SourceTerm(g95, ga - 9.0 / 5.0),
        SourceTerm(params.a * g95, al + ga - 9.0 / 5.0),
        SourceTerm(lam, -1.0),
        SourceTerm(lam * g95, -9.0 / 5.0),
        SourceTerm(lam * params.b, be - 1.0),
        SourceTerm(lam * params.b * g95, be - 9.0 / 5.0),
    )

    def exact(t):
        t = np.asarray(t, dtype=float)
        return 1.0 + t ** (4.0 / 5.0)

    return terms, 1.0, exact


def sine_power_source(params: JeffreysParams, kappa: float, space: SpectralSpace1D):
    """1D benchmark with exact solution ``p(t, x) = t**kappa sin(pi x)``.

    Zero initial data; the source profile is sin(pi x) with z-domain time
    factor  Gamma(kappa+1) [ z**(g-k-1) + a z**(a+g-k-1)
                             + pi^2 (z**(-k-1) + b z**(b-k-1)) ].
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    gk = gamma_real(kappa + 1.0)
    al, be, ga = params.alpha, params.beta, params.gamma
    pi2 = math.pi**2
    terms = (
        SourceTerm(gk, ga - kappa - 1.0),
        SourceTerm(params.a * gk, al + ga - kappa - 1.0),
        SourceTerm(pi2 * gk, -kappa - 1.0),
        SourceTerm(pi2 * params.b * gk, be - kappa - 1.0),
    )
    profile = np.sin(np.pi * space.nodes)
    source = LaplaceSourceSpec(p0_samples=None, separable=[(profile, terms)])

    def exact(t, x):
        return t**kappa * np.sin(np.pi * x)

    return source, exact


def gaussian_bump_initial(space: SpectralSpace1D) -> LaplaceSourceSpec:
    """Homogeneous 1D benchmark: p0(x) = exp(-30 x^2), zero source."""
    p0 = np.exp(-30.0 * space.nodes**2)
    return LaplaceSourceSpec(p0_samples=p0)


def skewed_product_initial(space2d: SpectralSpace2D) -> LaplaceSourceSpec:
    """Homogeneous 2D benchmark initial state.

    p0(x, y) = -pi^-3 (0.75 + 0.3 cos(pi x))^-1 (0.75 + 0.3 sin(pi y))^-1
               exp(-10 x y).
    """
    x = space2d.base.nodes[:, None]
    y = space2d.base.nodes[None, :]
    p0 = (
        -math.pi**-3
        / ((0.75 + 0.3 * np.cos(math.pi * x)) * (0.75 + 0.3 * np.sin(math.pi * y)))
        * np.exp(-10.0 * x * y)
    )
    return LaplaceSourceSpec(p0_samples=p0)


SOURCE_PRESETS = ("example1", "example2", "zero")
INITIAL_PRESETS = ("zero", "example3", "example4")
