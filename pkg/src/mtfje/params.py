"""Model parameters for the multi-term time-fractional Jeffreys equation.

The time operator is controlled by a dominant pair of fractional orders
(alpha, beta), a mobility-like order gamma, two positive weights (a, b) and
optional minor terms (alpha_k, a_k), (beta_j, b_j).  Two admissibility
regimes exist:

* ``pdf-strict`` -- the full set of inequalities that make the associated
  waiting-time law a probability density.  Required by the stochastic layer.
* ``solver`` -- only the basic order/positivity ranges plus the sector
  condition ``sum(beta_j) <= sum(alpha_k)``.  The deterministic solver is
  well defined on this wider set (it includes the classical case
  alpha = beta = gamma = 1 used in benchmark runs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PDF_STRICT = "pdf-strict"
SOLVER = "solver"
_STRICTNESS_MODES = (PDF_STRICT, SOLVER)


class ParameterError(ValueError):
    """Raised for non-finite fields or inadmissible parameters."""


@dataclass(frozen=True)
class Violation:
    """A single failed admissibility constraint."""

    constraint: str
    message: str

    def __str__(self) -> str:
        return f"{self.constraint}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; empty ``violations`` means admissible."""

    strictness: str
    violations: tuple[Violation, ...] = ()

    @property
    def admissible(self) -> bool:
        return not self.violations

    def raise_if_invalid(self) -> None:
        if self.violations:
            listing = "; ".join(str(v) for v in self.violations)
            raise ParameterError(
                f"parameters inadmissible under '{self.strictness}': {listing}"
            )


@dataclass(frozen=True)
class JeffreysParams:
    """Fractional orders and coefficients of the model.

    ``minor_alpha`` and ``minor_beta`` hold the optional minor terms as
    ``(order, coefficient)`` pairs; empty tuples encode the common
    single-term simplification.
    """

    alpha: float
    beta: float
    gamma: float
    a: float
    b: float
    minor_alpha: tuple[tuple[float, float], ...] = field(default=())
    minor_beta: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "minor_alpha", tuple(map(tuple, self.minor_alpha)))
        object.__setattr__(self, "minor_beta", tuple(map(tuple, self.minor_beta)))
        for name, value in self._scalar_fields():
            if not math.isfinite(value):
                raise ParameterError(f"non-finite parameter {name} = {value!r}")

    def _scalar_fields(self):
        yield from (
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("a", self.a),
            ("b", self.b),
        )
        for k, (order, coef) in enumerate(self.minor_alpha, start=1):
            yield (f"alpha_{k}", order)
            yield (f"a_{k}", coef)
        for j, (order, coef) in enumerate(self.minor_beta, start=1):
            yield (f"beta_{j}", order)
            yield (f"b_{j}", coef)

    @property
    def minor_alpha_sum(self) -> float:
        return sum(order for order, _ in self.minor_alpha)

    @property
    def minor_beta_sum(self) -> float:
        return sum(order for order, _ in self.minor_beta)


def validate(p: JeffreysParams, strictness: str = PDF_STRICT) -> ValidationReport:
    """Check admissibility of ``p`` and report every violated constraint.

    Pure and deterministic.  Non-finite fields raise :class:`ParameterError`
    (a hard error, distinct from a reported constraint violation).
    """
    if strictness not in _STRICTNESS_MODES:
        raise ValueError(f"unknown strictness {strictness!r}; use one of {_STRICTNESS_MODES}")
    for name, value in p._scalar_fields():
        if not math.isfinite(value):
            raise ParameterError(f"non-finite parameter {name} = {value!r}")

    bad: list[Violation] = []

    def fail(constraint: str, message: str) -> None:
        bad.append(Violation(constraint, message))

    # Basic ranges, enforced in every mode.
    if not 0.0 < p.alpha <= 1.0:
        fail("alpha-range", f"alpha = {p.alpha} outside (0, 1]")
    if not 0.0 < p.beta <= 1.0:
        fail("beta-range", f"beta = {p.beta} outside (0, 1]")
    if not 0.0 < p.gamma <= 1.0:
        fail("gamma-range", f"gamma = {p.gamma} outside (0, 1]")
    if not p.a > 0.0:
        fail("a-positive", f"a = {p.a} must be > 0")
    if not p.b > 0.0:
        fail("b-positive", f"b = {p.b} must be > 0")
    for k, (order, coef) in enumerate(p.minor_alpha, start=1):
        if not 0.0 < order < p.alpha:
            fail("alpha_k-range", f"alpha_{k} = {order} outside (0, alpha={p.alpha})")
        if coef < 0.0:
            fail("a_k-nonnegative", f"a_{k} = {coef} must be >= 0")
    for j, (order, coef) in enumerate(p.minor_beta, start=1):
        if not 0.0 < order < p.beta:
            fail("beta_j-range", f"beta_{j} = {order} outside (0, beta={p.beta})")
        if coef < 0.0:
            fail("b_j-nonnegative", f"b_{j} = {coef} must be >= 0")

    # Sector condition, enforced in every mode (the Laplace symbol must map
    # the working sector into itself).
    if p.minor_beta_sum > p.minor_alpha_sum + 1e-15:
        fail(
            "sector-minor-order-sum",
            f"sum(beta_j) = {p.minor_beta_sum} exceeds sum(alpha_k) = {p.minor_alpha_sum}",
        )

    if strictness == PDF_STRICT:
        if p.beta > p.gamma:
            fail("pdf-beta-le-gamma", f"beta = {p.beta} exceeds gamma = {p.gamma}")
        order_sum = p.alpha + p.gamma + p.minor_alpha_sum
        if order_sum > 1.0 + 1e-15:
            fail(
                "pdf-order-sum",
                f"alpha + gamma + sum(alpha_k) = {order_sum} exceeds 1",
            )
        # Pairwise sign condition over all coefficient pairs, the leading
        # (a, b) pair included.
        a_coefs = [p.a] + [coef for _, coef in p.minor_alpha]
        b_coefs = [p.b] + [coef for _, coef in p.minor_beta]
        for k, ak in enumerate(a_coefs):
            for j, bj in enumerate(b_coefs):
                if ak * bj < 0.0:
                    fail(
                        "pdf-coefficient-signs",
                        f"a_{k} * b_{j} = {ak * bj} is negative",
                    )

    return ValidationReport(strictness=strictness, violations=tuple(bad))
