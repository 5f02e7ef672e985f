import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError, QuadratureError, build_standard, rank_one
from dunkl.quadrature import lebesgue_wk_rule
from dunkl.transform import (NAMED_FUNCTIONS, HeatKernel, TransformPlan, check_gaussian_fixed,
                             check_heat_properties, check_plancherel_inversion, check_translation,
                             dunkl_laplacian_numeric, function_battery, time_derivative)


def _mp_kernel(k, z):
    return mpmath.exp(z) * mpmath.hyp1f1(k, 2 * k + 1, -2 * z)


@pytest.fixture(scope="module")
def plan_half():
    return TransformPlan(rank_one("1/2"))


def test_classical_fourier_transform_at_k_zero():
    plan = TransformPlan(rank_one("0"))
    f = lambda X: np.exp(-(X[:, 0] - 0.8) ** 2)
    xis = np.array([-1.5, 0.0, 0.7, 2.0])
    want = np.exp(-xis ** 2 / 4 - 0.8j * xis) / math.sqrt(2)
    assert np.allclose(plan.transform_many(f, xis), want, atol=1e-12)


def test_transform_against_direct_integral(plan_half):
    k, xi = 0.5, 1.3
    f = lambda x: x * mpmath.exp(-x * x / 2) + mpmath.exp(-(x - 0.5) ** 2)
    ck = 2 ** (2 * k + 0.5) * mpmath.gamma(k + 0.5)
    integrand = lambda x: f(x) * _mp_kernel(k, -1j * xi * x) * 2 ** k * abs(x) ** (2 * k) / ck
    want = complex(mpmath.quad(integrand, [-mpmath.inf, 0, mpmath.inf]))
    got = plan_half.transform_many(lambda X: X[:, 0] * np.exp(-X[:, 0] ** 2 / 2) + np.exp(-(X[:, 0] - 0.5) ** 2),
                                   [xi])[0]
    assert abs(got - want) < 1e-10


def test_x_gaussian_is_eigenfunction(plan_half):
    xis = np.linspace(-3, 3, 7)
    got = plan_half.transform_many(lambda X: X[:, 0] * np.exp(-X[:, 0] ** 2 / 2), xis)
    assert np.allclose(got, -1j * xis * np.exp(-xis ** 2 / 2), atol=1e-12)


def test_transform_diagnostics(plan_half):
    res = plan_half.transform(NAMED_FUNCTIONS["gaussian"][0], [0.7])
    assert res["truncated_ok"] and res["boundary_mass"] < 1e-20
    assert res["value"].real == pytest.approx(math.exp(-0.245), abs=1e-12)
    wide = plan_half.transform(lambda X: np.exp(-X[:, 0] ** 2 / 200), [0.7])
    assert not wide["truncated_ok"]


def test_nonfinite_function(plan_half):
    with pytest.raises(QuadratureError):
        plan_half.transform(lambda X: np.full(len(X), np.nan), [0.1])


def test_rank_one_suites(plan_half):
    hk = HeatKernel(rank_one("1/2"))
    assert check_gaussian_fixed(plan_half, np.linspace(-3, 3, 13)).passed
    assert check_plancherel_inversion(plan_half).passed
    assert check_translation(plan_half, hk, [(0.5, 0.7, -0.3), (1.2, -1.0, 0.4)]).passed


def test_battery_has_ten_functions():
    names = [n for n, _ in function_battery()]
    assert len(names) == len(set(names)) == 10


def test_b2_gaussian_fixed():
    plan = TransformPlan(build_standard("B", 2, ["1/2", "1/2"]), length=9.0, nodes=60, angular=24)
    xis = np.array([[0.3, -0.2], [0.5, 0.4]])
    got = plan.transform_many(NAMED_FUNCTIONS["gaussian"][0], xis)
    assert np.allclose(got, np.exp(-0.5 * (xis ** 2).sum(axis=1)), atol=1e-6)


def test_classical_heat_kernel():
    hk = HeatKernel(rank_one("0"))
    for t, x, y in [(0.3, 0.5, -0.2), (1.7, 2.0, 1.0)]:
        want = math.exp(-(x - y) ** 2 / (4 * t)) / math.sqrt(4 * math.pi * t)
        assert hk.gamma_k(t, x, y) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("k,t,x,y", [(0.5, 0.4, 0.7, -1.1), (1.5, 1.2, -0.3, -2.0), (0.25, 0.2, 3.0, 2.5)])
def test_heat_kernel_against_mpmath(k, t, x, y):
    hk = HeatKernel(rank_one(str(k)))
    ck = 2 ** (2 * k + 0.5) * mpmath.gamma(k + 0.5)
    want = (2 * t) ** (-k - 0.5) / ck * mpmath.exp(-(x * x + y * y) / (4 * t)) * _mp_kernel(k, x * y / (2 * t))
    assert hk.gamma_k(t, x, y) == pytest.approx(float(want), rel=1e-12)


def test_heat_kernel_vectorizes():
    hk = HeatKernel(rank_one("1/2"))
    xs = np.linspace(-1, 1, 5)
    G = hk.gamma_k(0.5, xs[:, None], xs[None, :])
    assert G.shape == (5, 5)
    assert G[1, 3] == pytest.approx(hk.gamma_k(0.5, xs[1], xs[3]), rel=1e-14)


def test_heat_kernel_pde_pointwise():
    hk = HeatKernel(rank_one("1/2"))
    t, x, y = 0.7, 0.4, -0.9
    lap = dunkl_laplacian_numeric(lambda z: hk.gamma_k(t, z, y), x, 0.5)
    dt = time_derivative(lambda s: hk.gamma_k(s, x, y), t)
    assert abs(lap - dt) < 1e-6


def test_numeric_laplacian_on_polynomial():
    # Delta_k x^2 = 2 + 4k
    assert dunkl_laplacian_numeric(lambda z: z * z, 0.8, 0.5) == pytest.approx(4.0, abs=1e-6)


def test_full_heat_battery():
    one = rank_one("1/2")
    rep = check_heat_properties(HeatKernel(one), TransformPlan(one), np.random.default_rng(3))
    assert rep.passed, rep.text()


def test_higher_rank_heat_kernel_reduces_to_product():
    from dunkl.roots import RootSystemContext, custom
    ctx = RootSystemContext(custom([[1, 0], [0, 1]]), ["1/2", "1"])
    hk = HeatKernel(ctx)
    a, b = HeatKernel(rank_one("1/2")), HeatKernel(rank_one("1"))
    x, y, t = np.array([0.3, -0.4]), np.array([0.5, 0.2]), 0.8
    assert hk.gamma_k(t, x, y) == pytest.approx(a.gamma_k(t, x[0], y[0]) * b.gamma_k(t, x[1], y[1]), rel=1e-10)


def test_negative_k_rejected():
    from dunkl.roots import MultiplicityFunction, RootSystemContext
    ctx = rank_one("1")
    mf = MultiplicityFunction(ctx.system, "1")
    mf.values = {o: -0.5 for o in mf.values}
    with pytest.raises(ConfigurationError):
        HeatKernel(RootSystemContext(ctx.system, mf))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["0", "1/4", "1/2", "2"]), st.floats(0.2, 2.0), st.floats(-2, 2), st.floats(-2, 2))
def test_heat_kernel_positive_symmetric_bounded(k, t, x, y):
    hk = HeatKernel(rank_one(k))
    g = hk.gamma_k(t, x, y)
    assert g > 0
    assert g == pytest.approx(hk.gamma_k(t, y, x), rel=1e-12)
    assert g <= hk.gaussian_bound(t, [x], [y]) * (1 + 1e-12)


_RULE = lebesgue_wk_rule(rank_one("1/2"), 12.0, 200)
_HK = HeatKernel(rank_one("1/2"))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(-2, 2))
def test_heat_kernel_mass_one(t, x):
    mass = float(np.dot(_RULE.weights, _HK.gamma_k(t, x, _RULE.nodes[:, 0])))
    assert mass == pytest.approx(1.0, abs=1e-6)
