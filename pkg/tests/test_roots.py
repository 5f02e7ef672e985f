import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError
from dunkl.roots import (MultiplicityFunction, Root, build_standard, custom, dihedral, from_descriptor,
                         generate_group, rank_one, reflect, root_orbits, type_a, type_b, weight_w_k)
from dunkl.scalars import Q


@pytest.mark.parametrize("tag,n,order,roots", [
    ("A", 3, 6, 6), ("A", 4, 24, 12), ("B", 2, 8, 8), ("B", 3, 48, 18),
    ("I2", 5, 10, 10), ("I2", 6, 12, 12), ("R1", 1, 2, 2),
])
def test_group_orders(tag, n, order, roots):
    ctx = build_standard(tag, n)
    assert ctx.order == order
    assert len(ctx.system.roots) == roots
    assert len(ctx.system.positive) == roots // 2


def test_group_elements_are_orthogonal_and_closed():
    ctx = build_standard("B", 2)
    keys = {g._key for g in ctx.group}
    for g in ctx.group:
        assert g.is_orthogonal()
        for h in ctx.group:
            assert (g * h)._key in keys


def test_root_system_is_reflection_invariant():
    for system in (type_a(4), type_b(3)):
        for a in system.roots:
            for b in system.roots:
                assert system.find(reflect(a, b.coords)) is not None


def test_orbits():
    assert len(root_orbits(type_a(3))) == 1
    assert len(root_orbits(type_b(2))) == 2
    assert len(root_orbits(dihedral(5))) == 1
    assert len(root_orbits(dihedral(6))) == 2


def test_multiplicity_rejects_non_invariant_assignment():
    system = type_b(2)
    short = system.find((Q(1), Q(0)))
    other_short = system.find((Q(0), Q(1)))
    with pytest.raises(ConfigurationError):
        MultiplicityFunction.from_roots(system, {short: 1, other_short: 2})


def test_multiplicity_rejects_negative_and_wrong_count():
    with pytest.raises(ConfigurationError):
        build_standard("A", 3, "-1")
    with pytest.raises(ConfigurationError):
        build_standard("B", 2, ["1", "2", "3"])


def test_gamma_is_sum_over_positive_roots():
    assert build_standard("A", 3, "1/2").gamma == Q("3/2")
    assert build_standard("B", 2, ["1", "2"]).gamma == Q(6)
    assert rank_one("3/4").gamma == Q("3/4")


def test_rank_one_weight_convention():
    ctx = rank_one("1/2")
    # 2^k |x|^{2k}
    assert weight_w_k(ctx, (1.5,)) == pytest.approx(2 ** 0.5 * 1.5)


def test_weight_is_invariant_and_homogeneous(b2_mixed, rng):
    x = rng.normal(size=2)
    w = b2_mixed.weight(x)
    for g in b2_mixed.group:
        assert b2_mixed.weight(g.as_array() @ x) == pytest.approx(w, rel=1e-12)
    lam = 1.7
    assert b2_mixed.weight(lam * x) == pytest.approx(lam ** (2 * float(b2_mixed.gamma)) * w, rel=1e-12)


def test_weight_many_matches_pointwise(a2_one, rng):
    pts = rng.normal(size=(20, 3))
    want = [a2_one.weight(p) for p in pts]
    assert np.allclose(a2_one.weight_many(pts), want, rtol=1e-12)


def test_weight_is_independent_of_root_scaling(rng):
    x = rng.normal(size=2)
    small = custom([[1, 0], [0, 1]])
    big = custom([[3, 0], [0, 5]])
    from dunkl.roots import RootSystemContext
    a = RootSystemContext(small, ["1/2", "1/2"])
    b = RootSystemContext(big, ["1/2", "1/2"])
    assert a.weight(x) == pytest.approx(b.weight(x), rel=1e-12)


def test_descriptor_roundtrip():
    data = {"roots": [[1, -1, 0], [0, 1, -1], [1, 0, -1]], "multiplicity": {"1,-1,0": "1/2"}}
    ctx = from_descriptor(json.dumps(data))
    assert ctx.order == 6
    assert ctx.k_values == [Q("1/2")]


def test_descriptor_rejects_non_root_system():
    with pytest.raises(ConfigurationError):
        from_descriptor({"roots": [[1, 0], [1, 1]], "multiplicity": 0})


def test_dihedral_is_float_backend():
    ctx = build_standard("I2", 5, "1/2")
    assert not ctx.exact
    assert ctx.k_values == [0.5]


def test_unknown_type():
    with pytest.raises(ConfigurationError):
        build_standard("E", 8)


def test_describe_fields(b2_mixed):
    d = b2_mixed.describe()
    assert d["order"] == 8 and d["rank"] == 2 and d["gamma"] == "3"
    assert len(d["chamber"]) == 4


coords = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(coords, min_size=3, max_size=3).filter(any), st.lists(coords, min_size=3, max_size=3))
def test_reflection_is_involutive_isometry(a, x):
    alpha = Root(tuple(Q(c) for c in a))
    xq = tuple(Q(c) for c in x)
    once = reflect(alpha, xq)
    assert reflect(alpha, once) == xq
    assert sum(c * c for c in once) == sum(c * c for c in xq)
    assert reflect(alpha, alpha.coords) == tuple(-c for c in alpha.coords)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 9))
def test_dihedral_group_order(n):
    assert len(generate_group(dihedral(n))) == 2 * n
