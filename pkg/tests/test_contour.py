import math

import numpy as np
import pytest

from mtfje.contour import (
    ContourConfig,
    ContourConfigError,
    a_of_rho,
    build_plan,
    eps_n,
    objective_value,
    optimal_rho,
    strip_half_width,
)

# Frozen by the first verified run of the exhaustive grid search
# (algorithm1 objective, Lambda=10, alpha_tilde=pi/4, delta_prime=pi/8,
# N=30, eps=2.22e-16, D=1e4); the argmin sits at the smallest grid point
# because the objective's truncation term increases with rho throughout.
GOLDEN_RHO_ALG1 = 0.0001
# Same settings under the prose objective.
GOLDEN_RHO_PROSE = 0.8548


def cfg(**kw):
    base = dict(t0=0.01, Lambda=150.0, N=50)
    base.update(kw)
    return ContourConfig(**base)


def test_strip_half_width_values():
    assert strip_half_width(cfg(alpha_tilde=math.pi / 4, delta_prime=math.pi / 8)) == pytest.approx(
        math.pi / 8
    )
    assert strip_half_width(cfg(alpha_tilde=math.pi / 6, delta_prime=math.pi / 6)) == pytest.approx(
        math.pi / 6
    )
    assert strip_half_width(cfg(alpha_tilde=0.4, delta_prime=1.0)) == pytest.approx(
        0.170796326794896619, rel=1e-14
    )


def test_invalid_geometry_rejected():
    with pytest.raises(ContourConfigError):
        cfg(alpha_tilde=1.0, delta_prime=0.6)  # sum exceeds pi/2
    with pytest.raises(ContourConfigError):
        cfg(t0=-1.0)
    with pytest.raises(ContourConfigError):
        cfg(Lambda=0.5)


def test_a_of_rho_value():
    c = cfg(Lambda=150.0)
    assert a_of_rho(c, 0.5) == pytest.approx(7.3574764273494914, rel=1e-14)


def test_a_of_rho_monotone():
    c = cfg(Lambda=10.0)
    rhos = np.linspace(0.01, 0.99, 99)
    vals = [a_of_rho(c, r) for r in rhos]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_a_of_rho_domain():
    c = cfg()
    with pytest.raises(ContourConfigError):
        a_of_rho(c, 0.0)
    with pytest.raises(ContourConfigError):
        a_of_rho(c, 1.0)
    # degenerate geometry: alpha_tilde == d makes sin(alpha_tilde - d) = 0
    degenerate = cfg(alpha_tilde=math.pi / 6, delta_prime=math.pi / 6)
    with pytest.raises(ContourConfigError):
        a_of_rho(degenerate, 0.5)


def test_eps_n_monotone_in_rho():
    c = cfg(Lambda=10.0, N=30)
    rhos = np.linspace(0.05, 0.95, 19)
    vals = [eps_n(c, r) for r in rhos]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("objective", ["algorithm1", "prose"])
def test_optimal_rho_is_argmin(objective):
    c = cfg(Lambda=10.0, N=30, rho_grid=500, objective=objective)
    rho_star = optimal_rho(c)
    best = objective_value(c, rho_star)
    for j in range(1, 500):
        assert best <= objective_value(c, j / 500) * (1 + 1e-12)


def test_optimal_rho_golden_values():
    c = cfg(Lambda=10.0, N=30, objective="algorithm1")
    assert optimal_rho(c) == pytest.approx(GOLDEN_RHO_ALG1)
    c = cfg(Lambda=10.0, N=30, objective="prose")
    assert optimal_rho(c) == pytest.approx(GOLDEN_RHO_PROSE)


def test_optimal_rho_preconditions():
    with pytest.raises(ContourConfigError):
        optimal_rho(cfg(N=1))
    with pytest.raises(ContourConfigError):
        optimal_rho(cfg(rho_grid=5))


def test_plan_node_geometry():
    plan = build_plan(cfg(Lambda=10.0, N=40))
    at = plan.cfg.alpha_tilde
    # first node has positive imaginary part
    assert plan.z[0].imag > 0
    assert np.all(plan.z.imag > 0)
    # hyperbola membership identity
    lhs = ((plan.z.real / plan.mu - 1.0) / math.sin(at)) ** 2 - (
        plan.z.imag / plan.mu / math.cos(at)
    ) ** 2
    assert np.max(np.abs(lhs - 1.0)) < 1e-12
    # real part decreasing along the branch
    assert np.all(np.diff(plan.z.real) < 0)


def test_plan_parameter_identities():
    c = cfg(Lambda=10.0, N=40)
    plan = build_plan(c)
    d = strip_half_width(c)
    assert plan.tau == pytest.approx(plan.a_rho / c.N, rel=1e-15)
    assert plan.mu == pytest.approx(
        2 * math.pi * d * c.N * (1 - plan.rho_star) / (c.t0 * c.Lambda * plan.a_rho),
        rel=1e-15,
    )
    # derivative nodes match the closed form
    phi = (np.arange(c.N) + 0.5) * plan.tau
    zp = 1j * plan.mu * np.cos(1j * phi - c.alpha_tilde)
    assert np.max(np.abs(zp - plan.zprime)) < 1e-12 * np.max(np.abs(zp))


def test_plan_deterministic():
    a = build_plan(cfg(Lambda=10.0, N=30))
    b = build_plan(cfg(Lambda=10.0, N=30))
    assert a.rho_star == b.rho_star
    assert np.array_equal(a.z, b.z)
    assert np.array_equal(a.zprime, b.zprime)


def test_rho_override():
    plan = build_plan(cfg(Lambda=10.0, N=30, rho_override=0.5))
    assert plan.rho_star == 0.5


def test_doubling_n_squares_truncation_term():
    c1 = cfg(Lambda=10.0, N=20, objective="prose")
    plan1 = build_plan(c1)
    # at the same rho, eps_N exactly squares when N doubles
    c2 = cfg(Lambda=10.0, N=40, rho_override=plan1.rho_star, objective="prose")
    plan2 = build_plan(c2)
    e1 = eps_n(c1, plan1.rho_star)
    e2 = eps_n(c2, plan1.rho_star)
    assert e2 == pytest.approx(e1**2, rel=1e-12)
    assert plan2.predicted_truncation <= plan1.predicted_truncation**2 / (1 - e1**2) * (1 + 1e-12)
    # the re-optimized plan does at least as well as the carried-over rho
    c2opt = cfg(Lambda=10.0, N=40, objective="prose")
    assert build_plan(c2opt).predicted_error <= plan2.predicted_error * (1 + 1e-12)
