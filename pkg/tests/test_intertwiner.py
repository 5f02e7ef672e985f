import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError, MultiPoly, PreconditionError, build_standard, parse_poly, rank_one
from dunkl.intertwiner import (Intertwiner, ball_samples, check_equivariance_V, check_pairing_transport,
                               check_positivity_grid, check_rank_one_closed_form, check_rank_one_integral,
                               check_residual, random_poly, rank_one_coefficient, rank_one_integral,
                               sphere_sup, sum_of_squares)
from dunkl.scalars import Q


def _x(n):
    return MultiPoly.monomial((n,), Q(1))


@pytest.mark.parametrize("k", ["1/3", "1/2", "2"])
def test_rank_one_low_degrees(k):
    kq = Q(k)
    V = Intertwiner(rank_one(k), 3)
    assert V(_x(1)) == _x(1).scale(1 / (2 * kq + 1))
    assert V(_x(2)) == _x(2).scale(1 / (2 * kq + 1))
    assert V(_x(3)) == _x(3).scale(Q("3/4") / ((kq + Q("1/2")) * (kq + Q("3/2"))))


@pytest.mark.parametrize("k", ["0", "1/4", "5/2"])
def test_rank_one_recursion_oracle(k):
    # T(c_m x^m) = m c_{m-1} x^{m-1}: c_m = c_{m-1} (m even), c_m = m c_{m-1} / (m + 2k) (m odd)
    kq = Q(k)
    V = Intertwiner(rank_one(k), 12)
    c = Q(1)
    for m in range(1, 13):
        c = c if m % 2 == 0 else c * m / (m + 2 * kq)
        assert V(_x(m)) == _x(m).scale(c)
        assert rank_one_coefficient(kq, m) == c


def test_k_zero_is_identity(rng):
    V = Intertwiner(build_standard("B", 2, "0"), 4)
    p = random_poly(rng, 2, 4, True)
    assert V(p) == p


def test_constants_fixed(b2_mixed):
    V = Intertwiner(b2_mixed, 2)
    assert V(MultiPoly.constant(2, Q(5))) == MultiPoly.constant(2, Q(5))


def test_degree_overflow(r1_half):
    V = Intertwiner(r1_half, 2)
    with pytest.raises(PreconditionError):
        V(_x(3))
    assert V.apply(_x(3), extend=True).degree == 3
    assert V.cap == 3


def test_negative_k_rejected():
    from dunkl.roots import MultiplicityFunction, RootSystemContext
    ctx = rank_one("1/2")
    mf = MultiplicityFunction(ctx.system, "1/2")
    mf.values = {o: Q(-1) for o in mf.values}
    with pytest.raises(ConfigurationError):
        Intertwiner(RootSystemContext(ctx.system, mf), 2)


@pytest.mark.parametrize("fixture", ["a2_one", "b2_mixed", "i2_five"])
def test_structural_identities(fixture, request):
    V = Intertwiner(request.getfixturevalue(fixture), 5)
    for r in (check_residual(V), check_pairing_transport(V), check_equivariance_V(V)):
        assert r.passed, r.text()


def test_rank_one_checks():
    V = Intertwiner(rank_one("3/4"), 12)
    assert check_rank_one_closed_form(V, 12).passed
    assert check_rank_one_integral(V, 10).passed


def test_integral_form_agrees_with_table():
    V = Intertwiner(rank_one("1/2"), 6)
    p = parse_poly("x1^6 - 3 x1^3 + x1 + 2", 1)
    Vp = V(p)
    for x in (0.4, -1.3, 2.2):
        assert rank_one_integral(0.5, p, x) == pytest.approx(float(Vp.eval((Q(str(x)),))), rel=1e-12)


def test_positivity_and_norm_bound(b2_mixed, rng):
    V = Intertwiner(b2_mixed, 6)
    rep = check_positivity_grid(V, rng, sos_count=20, max_degree=6, points=300, homogeneous_count=10)
    assert rep.passed, rep.text()


def test_sphere_sup_finds_maximum(rng):
    p = parse_poly("x1 x2", 2)
    assert sphere_sup(p, rng) == pytest.approx(0.5, abs=1e-9)


def test_ball_samples_inside(rng):
    pts = ball_samples(rng, 3, 500)
    assert np.all(np.linalg.norm(pts, axis=1) <= 1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_sum_of_squares_stays_nonnegative_under_V(seed):
    rng = np.random.default_rng(seed)
    V = Intertwiner(rank_one("1/2"), 6)
    p = sum_of_squares(rng, 1, 6)
    vals = V(p).eval_many(np.linspace(-1, 1, 41)[:, None])
    assert vals.min() >= -1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_intertwining_relation_random(seed):
    rng = np.random.default_rng(seed)
    V = Intertwiner(build_standard("B", 2, ["1/3", "2"]), 4)
    p = random_poly(rng, 2, 4, True)
    for xi in ((Q(1), Q(0)), (Q(2), Q(-1))):
        assert V.calc.T(xi, V(p)) == V(p.partial(xi))
