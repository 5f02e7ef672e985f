import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError, build_standard, parse_poly, rank_one
from dunkl.hermite import (HermiteSystem, check_classical, check_eigen_equations, check_generating_and_mehler,
                           check_laguerre, check_orthogonality, check_quadrature_orthogonality, check_rodrigues,
                           check_transform_eigenfunctions, hermite_function, laguerre_oracle)
from dunkl.kernel import KernelEvaluator
from dunkl.quadrature import gaussian_wk_rule
from dunkl.scalars import Q
from dunkl.transform import TransformPlan


def test_rank_one_low_degree_values():
    sys = HermiteSystem(rank_one("1/2"), 3)
    # x^2 - (1 + 2k), x^3 - (3 + 2k) x from the Laguerre forms
    assert sys.H[(2,)] == parse_poly("x1^2 - 2", 1)
    assert sys.H[(3,)] == parse_poly("x1^3 - 4 x1", 1)
    assert [sys.norms[(n,)] for n in range(4)] == [1, 2, 4, 16]


@pytest.mark.parametrize("k", ["1/3", "2"])
def test_odd_laguerre_connection(k):
    # H_{2n+1}(x) proportional to x L_n^{(k+1/2)}(x^2/2)
    sys = HermiteSystem(rank_one(k), 7)
    kq = Q(k)
    for n in range(4):
        h = sys.H[(2 * n + 1,)]
        ratios = {h.eval((Q(p),)) / (Q(p) * laguerre_oracle(kq + 1, n, Q(p))) for p in ("1/3", "2", "-5/7")}
        assert len(ratios) == 1


def test_laguerre_oracle_values():
    # L_2^{(0)}(X) = 1 - 2X + X^2/2 at X = 2 gives -1
    assert laguerre_oracle(Q("1/2"), 2, Q(2)) == -1


def test_k_zero_classical():
    sys = HermiteSystem(rank_one("0"), 10)
    assert check_classical(sys).passed
    assert sys.H[(4,)] == parse_poly("x1^4 - 6 x1^2 + 3", 1)


def test_negative_k_rejected():
    from dunkl.roots import MultiplicityFunction, RootSystemContext
    ctx = rank_one("1")
    mf = MultiplicityFunction(ctx.system, "1")
    mf.values = {o: Q(-1) for o in mf.values}
    with pytest.raises(ConfigurationError):
        HermiteSystem(RootSystemContext(ctx.system, mf), 2)


def test_laguerre_requires_exact_rank_one(b2_mixed):
    with pytest.raises(ConfigurationError):
        check_laguerre(HermiteSystem(b2_mixed, 2))


@pytest.mark.parametrize("fixture", ["r1_half", "a2_one", "b2_mixed", "i2_five"])
def test_algebraic_identities(fixture, request):
    sys = HermiteSystem(request.getfixturevalue(fixture), 5)
    for r in (check_orthogonality(sys), check_eigen_equations(sys)):
        assert r.passed, r.text()


def test_direct_pairing_agrees(b2_mixed):
    sys = HermiteSystem(b2_mixed, 3)
    assert check_orthogonality(sys, direct=True).passed


@pytest.mark.parametrize("fixture", ["r1_half", "b2_mixed"])
def test_quadrature_identities(fixture, request):
    ctx = request.getfixturevalue(fixture)
    sys = HermiteSystem(ctx, 6)
    rule = gaussian_wk_rule(ctx, 40)
    assert check_quadrature_orthogonality(sys, rule).passed
    assert check_rodrigues(sys, rule, 4).passed


def test_generating_and_mehler_rank_one():
    ctx = rank_one("1/3")
    sys = HermiteSystem(ctx, 30)
    ev = KernelEvaluator(ctx)
    rep = check_generating_and_mehler(sys, ev, [(("7/10",), ("-2/5",), "1/2"), ((0.3,), (1.1,), 0.25)])
    assert rep.passed, rep.text()


def test_generating_and_mehler_b2():
    ctx = build_standard("B", 2, ["1/2", "1/2"])
    sys = HermiteSystem(ctx, 20)
    ev = KernelEvaluator(ctx)
    rep = check_generating_and_mehler(sys, ev, [(("1/2", "-1/5"), ("1/5", "3/10"), "1/4")], tol=1e-7)
    assert rep.passed, rep.text()


def test_transform_eigenfunctions():
    ctx = rank_one("1/2")
    rep = check_transform_eigenfunctions(HermiteSystem(ctx, 6), TransformPlan(ctx), np.linspace(-2.5, 2.5, 11))
    assert rep.passed, rep.text()


def test_hermite_function_decays(r1_half):
    sys = HermiteSystem(r1_half, 4)
    v = hermite_function(sys, (4,), np.array([[12.0]]))
    assert abs(v[0]) < 1e-25


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["0", "1/4", "1/2", "3/2", "3"]), st.integers(0, 8))
def test_leading_coefficient_and_parity(k, n):
    sys = HermiteSystem(rank_one(k), n)
    h = sys.H[(n,)]
    assert h.coefficient((n,)) == 1
    assert all((e[0] - n) % 2 == 0 for e in h.terms)
