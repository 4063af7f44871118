"""Laplace-domain scalar symbols of the model.

Everything here operates on the principal branch: ``z**s`` is evaluated as
``exp(s * log z)`` with ``arg z`` in (-pi, pi], which is what numpy does for
complex input.  All exported functions satisfy the Schwarz reflection
property ``F(conj z) == conj(F(z))`` away from the negative real axis.
"""

from __future__ import annotations

import math

import numpy as np

from .params import PDF_STRICT, SOLVER, JeffreysParams, validate


class SingularityError(ArithmeticError):
    """A symbol was evaluated where its denominator (numerically) vanishes."""


# Lanczos approximation, g = 7 with 9 coefficients; relative accuracy is
# around 1e-15 on the real axis, combined with the reflection formula below
# it covers every argument > -1 that the source presets need.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_real(x: float) -> float:
    """Gamma function for real non-pole arguments via Lanczos (g=7, n=9)."""
    if not math.isfinite(x):
        raise ValueError(f"gamma_real needs a finite argument, got {x!r}")
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma_real pole at non-positive integer {x}")
    if x < 0.5:
        # Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    x = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def laplace_power(kappa: float, z):
    """Laplace transform of ``t**kappa``: ``Gamma(kappa+1) * z**(-kappa-1)``.

    ``kappa`` must exceed -1 for the transform to exist as a function.
    """
    if not kappa > -1.0:
        raise ValueError(f"laplace_power requires kappa > -1, got {kappa}")
    z, scalar = _as_complex(z)
    _require_nonzero(z, "laplace_power")
    out = gamma_real(kappa + 1.0) * z ** (-kappa - 1.0)
    return out[()] if scalar else out


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _require_nonzero(z: np.ndarray, where: str) -> None:
    if np.any(z == 0):
        raise ZeroDivisionError(f"{where} is undefined at z = 0")


class SymbolSet:
    """Evaluator for the scalar symbols attached to one parameter set.

    Pure and stateless after construction; safe to share across threads.
    Construction validates the parameters under ``strictness`` and raises
    if they are inadmissible (pass ``validate_params=False`` only for
    diagnostic oracles that deliberately step outside the admissible set).
    """

    def __init__(
        self,
        params: JeffreysParams,
        strictness: str = SOLVER,
        validate_params: bool = True,
    ) -> None:
        if validate_params:
            validate(params, strictness).raise_if_invalid()
        self.params = params
        self.strictness = strictness
        self._alpha_orders = np.array(
            [params.alpha] + [o for o, _ in params.minor_alpha]
        )
        self._alpha_coefs = np.array([params.a] + [c for _, c in params.minor_alpha])
        self._beta_orders = np.array([params.beta] + [o for o, _ in params.minor_beta])
        self._beta_coefs = np.array([params.b] + [c for _, c in params.minor_beta])

    def _poly(self, z: np.ndarray, orders: np.ndarray, coefs: np.ndarray) -> np.ndarray:
        acc = np.ones_like(z)
        for order, coef in zip(orders, coefs):
            if coef != 0.0:
                acc = acc + coef * z**order
        return acc

    def numerator(self, z):
        """``1 + a z**alpha + sum a_k z**alpha_k``."""
        z, scalar = _as_complex(z)
        out = self._poly(z, self._alpha_orders, self._alpha_coefs)
        return out[()] if scalar else out

    def denominator(self, z):
        """``1 + b z**beta + sum b_j z**beta_j``."""
        z, scalar = _as_complex(z)
        out = self._poly(z, self._beta_orders, self._beta_coefs)
        return out[()] if scalar else out

    def eta(self, z):
        """Characteristic exponent ``z**gamma * N(z) / D(z)``."""
        z, scalar = _as_complex(z)
        _require_nonzero(z, "eta")
        num = self._poly(z, self._alpha_orders, self._alpha_coefs)
        den = self._poly(z, self._beta_orders, self._beta_coefs)
        self._guard_denominator(den, "eta")
        out = z**self.params.gamma * num / den
        return out[()] if scalar else out

    def g(self, z):
        """Source weight ``1 / (z**(gamma-1) * N(z))``."""
        z, scalar = _as_complex(z)
        _require_nonzero(z, "g")
        den = z ** (self.params.gamma - 1.0) * self._poly(
            z, self._alpha_orders, self._alpha_coefs
        )
        self._guard_denominator(den, "g")
        out = 1.0 / den
        return out[()] if scalar else out

    def psi_hat(self, z):
        """Waiting-time characteristic function ``exp(-eta(z))``; 1 at z = 0."""
        z, scalar = _as_complex(z)
        out = np.ones_like(z)
        nz = z != 0
        if np.any(nz):
            out[nz] = np.exp(-self.eta(z[nz]))
        return out[()] if scalar else out

    def msd_laplace(self, z):
        """Laplace transform ``1 / (z * eta(z))`` of the leading-order MSD."""
        z, scalar = _as_complex(z)
        _require_nonzero(z, "msd_laplace")
        out = 1.0 / (z * self.eta(z))
        return out[()] if scalar else out

    @staticmethod
    def _guard_denominator(den: np.ndarray, where: str) -> None:
        # Cannot vanish off the branch cut for admissible parameters, but a
        # caller-supplied z on the cut could get arbitrarily close.
        if np.any(np.abs(den) < 1e-300):
            raise SingularityError(f"denominator of {where} vanished")


__all__ = [
    "SingularityError",
    "SymbolSet",
    "gamma_real",
    "laplace_power",
    "PDF_STRICT",
    "SOLVER",
]
