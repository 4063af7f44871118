import math

import pytest
from hypothesis import given, strategies as st

from mtfje import JeffreysParams, ParameterError, validate
from mtfje.params import PDF_STRICT, SOLVER


def test_table_parameter_set_is_admissible(table_params):
    report = validate(table_params, PDF_STRICT)
    assert report.admissible
    # beta <= gamma and alpha + gamma = 0.5 <= 1 hold exactly
    assert table_params.beta <= table_params.gamma
    assert table_params.alpha + table_params.gamma <= 1.0


def test_classical_case_rejected_strict_accepted_solver():
    classical = JeffreysParams(alpha=1.0, beta=1.0, gamma=1.0, a=1.0, b=100.0)
    strict = validate(classical, PDF_STRICT)
    assert not strict.admissible
    assert any(v.constraint == "pdf-order-sum" for v in strict.violations)
    assert validate(classical, SOLVER).admissible


def test_beta_above_gamma_rejected():
    p = JeffreysParams(alpha=0.5, beta=0.6, gamma=0.5, a=1.0, b=1.0)
    report = validate(p, PDF_STRICT)
    assert any(v.constraint == "pdf-beta-le-gamma" for v in report.violations)


def test_range_violations_reported_with_names():
    p = JeffreysParams(alpha=1.5, beta=0.5, gamma=0.5, a=-1.0, b=1.0)
    names = {v.constraint for v in validate(p, SOLVER).violations}
    assert "alpha-range" in names
    assert "a-positive" in names


def test_minor_terms_constraints():
    p = JeffreysParams(
        alpha=0.5, beta=0.4, gamma=0.5, a=1.0, b=1.0,
        minor_alpha=((0.2, 0.1),), minor_beta=((0.3, 0.2),),
    )
    report = validate(p, SOLVER)
    # sum(beta_j) = 0.3 > sum(alpha_k) = 0.2 breaks the sector condition
    assert any(v.constraint == "sector-minor-order-sum" for v in report.violations)
    ok = JeffreysParams(
        alpha=0.5, beta=0.4, gamma=0.5, a=1.0, b=1.0,
        minor_alpha=((0.3, 0.1),), minor_beta=((0.2, 0.2),),
    )
    assert validate(ok, SOLVER).admissible


def test_minor_order_must_stay_below_dominant():
    p = JeffreysParams(alpha=0.5, beta=0.4, gamma=0.5, a=1.0, b=1.0,
                       minor_alpha=((0.6, 0.1),))
    assert any(v.constraint == "alpha_k-range" for v in validate(p, SOLVER).violations)


def test_nonfinite_fields_raise_hard_error():
    with pytest.raises(ParameterError):
        JeffreysParams(alpha=math.nan, beta=0.5, gamma=0.5, a=1.0, b=1.0)
    with pytest.raises(ParameterError):
        JeffreysParams(alpha=0.5, beta=0.5, gamma=0.5, a=math.inf, b=1.0)


def test_unknown_strictness_rejected(table_params):
    with pytest.raises(ValueError):
        validate(table_params, "lenient")


@given(
    alpha=st.floats(0.05, 1.0),
    beta=st.floats(0.05, 1.0),
    gamma=st.floats(0.05, 1.0),
    a=st.floats(0.01, 100.0),
    b=st.floats(0.01, 100.0),
)
def test_validate_is_pure_and_deterministic(alpha, beta, gamma, a, b):
    p = JeffreysParams(alpha=alpha, beta=beta, gamma=gamma, a=a, b=b)
    first = validate(p, PDF_STRICT)
    second = validate(p, PDF_STRICT)
    assert first == second
