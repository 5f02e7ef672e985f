"""The eleven acceptance criteria, each at its stated tolerance.

Every test records one line "criterion N: PASS|FAIL ..." which the conftest
echoes at the end of a pytest run.  Run this file directly to print the lines
without pytest.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, _order
from dunkl import build_standard, rank_one
from dunkl.asymptotics import AsymptoticProbe, check_constants, check_heat_ratio, check_ray
from dunkl.calculus import DunklCalculus, check_commutativity, check_commutator_xi_delta, check_sl2
from dunkl.hermite import (HermiteSystem, check_eigen_equations, check_generating_and_mehler, check_orthogonality,
                           check_quadrature_orthogonality, check_transform_eigenfunctions)
from dunkl.intertwiner import (Intertwiner, check_positivity_grid, check_rank_one_closed_form,
                               check_rank_one_integral, check_residual)
from dunkl.kernel import KernelEvaluator, check_bound_and_positivity, check_degree_shift, check_rank_one_oracle
from dunkl.quadrature import c_k_rank_one, check_macdonald, gaussian_wk_rule
from dunkl.scalars import Q
from dunkl.transform import HeatKernel, TransformPlan, check_heat_properties, check_plancherel_inversion

GROUPS = [("A_2", "A", 3), ("A_3", "A", 4), ("B_2", "B", 2), ("I_2(5)", "I2", 5)]


def record(label, reports, elapsed, budget=None, extra=""):
    ok = all(r.passed for r in reports) and (budget is None or elapsed <= budget)
    worst = [c for r in reports for c in r.checks if not c.passed]
    detail = f"first failure: {worst[0].name} ({worst[0].detail})" if worst else extra
    timing = f"{elapsed:.1f}s" + ("" if budget is None else f" of {budget}s")
    ACCEPTANCE_LINES.append(f"criterion {label}: {'PASS' if ok else 'FAIL'}  [{timing}]  {detail}".rstrip())
    return ok


def random_k(rng, orbits):
    return [f"{int(rng.integers(0, 7))}/{int(rng.integers(1, 5))}" for _ in range(orbits)]


def directions(rng, dim, exact, count):
    def one():
        v = rng.integers(-3, 4, dim)
        if not v.any():
            v[0] = 1
        return tuple(Q(int(c)) if exact else float(c) for c in v)
    return [(one(), one()) for _ in range(count)]


def test_criterion_1_commutativity():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    reports = []
    for _, tag, n in GROUPS:
        for _ in range(3):
            ctx = build_standard(tag, n, random_k(rng, 2 if tag == "B" else 1))
            calc = DunklCalculus(ctx)
            reports.append(check_commutativity(calc, directions(rng, ctx.dim, ctx.exact, 5), 6))
    ok = record("1", reports, time.perf_counter() - t0, 60, "12 (group, k) cases, 5 direction pairs, deg <= 6")
    assert ok


def test_criterion_2_intertwiner():
    t0 = time.perf_counter()
    reports = [check_residual(Intertwiner(build_standard("A", 3, "1/2"), 6)),
               check_residual(Intertwiner(build_standard("B", 2, ["1/2", "1"]), 6))]
    for k in ("1/4", "1/2", "2"):
        V = Intertwiner(rank_one(k), 12)
        reports += [check_rank_one_closed_form(V, 12), check_rank_one_integral(V, 10, tol=1e-10)]
    ok = record("2", reports, time.perf_counter() - t0, 120, "residual exact deg <= 6; closed form to deg 12")
    assert ok


def test_criterion_3_macdonald():
    t0 = time.perf_counter()
    reports = []
    for ctx in (rank_one("1/4"), rank_one("1"), rank_one("5/2"), build_standard("B", 2, ["1/2", "1/2"])):
        reports.append(check_macdonald(DunklCalculus(ctx), gaussian_wk_rule(ctx, 60), 5, rtol=1e-8, atol=1e-10))
    ok = record("3", reports, time.perf_counter() - t0, 120, "all monomial pairs deg <= 5")
    assert ok


def test_criterion_4_kernel():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    reports = []
    for ctx, y in ((build_standard("A", 3, "1/2"), ("1/2", "-1/4", "3/4")),
                   (build_standard("B", 2, ["1/2", "1"]), ("2/3", "-1/5"))):
        ev = KernelEvaluator(ctx)
        reports.append(check_degree_shift(ev, [Q(v) for v in y], 8))
        pairs = [(rng.uniform(-1.5, 1.5, ctx.dim), rng.uniform(-1.5, 1.5, ctx.dim)) for _ in range(1000)]
        reports.append(check_bound_and_positivity(ev, pairs, tol=1e-9))
    one = KernelEvaluator(rank_one("1/2"), closed_form=False)
    reports.append(check_rank_one_oracle(one, np.linspace(-1.5, 1.5, 9), tol=1e-10))
    pairs = [(rng.uniform(-1.5, 1.5, 1), rng.uniform(-1.5, 1.5, 1)) for _ in range(1000)]
    reports.append(check_bound_and_positivity(one, pairs, tol=1e-9))
    ok = record("4", reports, time.perf_counter() - t0, None, "degree shift n <= 8; 9x9 oracle grid; 10^3 pairs")
    assert ok


def test_criterion_5_reproducing():
    from dunkl.kernel import check_reproducing
    from dunkl.reports import Report
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    reports = []
    for k in ("1/2", "3/2"):
        ctx = rank_one(k)
        ev = KernelEvaluator(ctx)
        rule = gaussian_wk_rule(ctx, 80)
        pairs = [([a], [b]) for a, b in rng.uniform(-1.5, 1.5, (10, 2))]
        reports.append(check_reproducing(ev, rule, pairs, c_k_rank_one(Q(k)), rtol=1e-6))
        zero = rule.integrate(lambda X: (ev.E_many_x(X, [0.0]) * ev.E_many_x(X, [0.0])).real)
        closed = c_k_rank_one(Q(k))
        err = abs(zero - closed) / closed
        rep = Report("reproducing identity at y = z = 0")
        rep.add(f"k={k}: int dmu = 2^(2k+1/2) Gamma(k+1/2)", "normalization", err <= 1e-10, error=err,
                tolerance=1e-10)
        reports.append(rep)
    ok = record("5", reports, time.perf_counter() - t0, None, "10 pairs per k; c_k to 1e-10")
    assert ok


def test_criterion_6_hermite():
    t0 = time.perf_counter()
    reports = []
    for ctx in (build_standard("A", 3, "1/2"), build_standard("B", 2, ["1/2", "1"]), rank_one("1/3")):
        sys = HermiteSystem(ctx, 6)
        reports += [check_orthogonality(sys), check_eigen_equations(sys)]
        nodes = 40 if ctx.dim <= 2 else 12
        reports.append(check_quadrature_orthogonality(sys, gaussian_wk_rule(ctx, nodes), rtol=1e-7))
    one = rank_one("1/3")
    reports.append(check_generating_and_mehler(HermiteSystem(one, 30), KernelEvaluator(one),
                                               [(("7/10",), ("-2/5",), "1/2")], cap=30, tol=1e-8))
    reports.append(check_transform_eigenfunctions(HermiteSystem(one, 6), TransformPlan(one),
                                                  np.linspace(-2.5, 2.5, 11), max_degree=6, tol=1e-6))
    ok = record("6", reports, time.perf_counter() - t0, None, "|nu| <= 6 on A_2, B_2, rank one; Mehler cap 30")
    assert ok


def test_criterion_7_sl2_and_commutator():
    t0 = time.perf_counter()
    reports = []
    contexts = [build_standard(tag, n, "1/2") for _, tag, n in GROUPS] + [rank_one("1/2")]
    contexts[2] = build_standard("B", 2, ["1/2", "1"])
    for ctx in contexts:
        calc = DunklCalculus(ctx)
        reports += [check_sl2(calc, 6), check_commutator_xi_delta(calc, 6)]
    ok = record("7", reports, time.perf_counter() - t0, None, "A_2, A_3, B_2, I_2(5), rank one; deg <= 6")
    assert ok


def test_criterion_8_heat():
    t0 = time.perf_counter()
    reports = []
    for k, seed in (("1/2", 8), ("3/2", 9)):
        one = rank_one(k)
        reports.append(check_heat_properties(HeatKernel(one), TransformPlan(one), np.random.default_rng(seed),
                                             tol=1e-6, pde_tol=1e-4))
    ok = record("8", reports, time.perf_counter() - t0, None, "rank one, t in [0.2, 2]")
    assert ok


def test_criterion_9_plancherel():
    t0 = time.perf_counter()
    reports = [check_plancherel_inversion(TransformPlan(rank_one(k)), tol=1e-5) for k in ("1/2", "3/2")]
    ok = record("9", reports, time.perf_counter() - t0, None, "10-function battery")
    assert ok


def test_criterion_10a_limit_constant():
    t0 = time.perf_counter()
    ok = record("10a", [check_constants(("1/4", "1/2", "1", "3/2"), tol=1e-8)], time.perf_counter() - t0, None,
                "k in {1/4, 1/2, 1, 3/2}")
    assert ok


def test_criterion_10b_ray_probe():
    t0 = time.perf_counter()
    rep = check_ray(AsymptoticProbe.build("1/2"), 1.0, 1.0, (50, 100, 200, 400))
    ok = record("10b", [rep], time.perf_counter() - t0, None, rep.checks[0].detail)
    assert ok, rep.text()


def test_criterion_10c_heat_ratio():
    t0 = time.perf_counter()
    rep = check_heat_ratio(AsymptoticProbe.build("1/2"), 1.0, 1.0, (1e-1, 1e-2, 1e-3), tol=5e-2)
    ok = record("10c", [rep], time.perf_counter() - t0, None, rep.checks[0].detail)
    assert ok


def test_criterion_11_positivity():
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    reports = []
    for ctx in (build_standard("A", 3, "1/2"), build_standard("B", 2, ["1/2", "1"]), rank_one("1/2")):
        V = Intertwiner(ctx, 6)
        reports.append(check_positivity_grid(V, rng, sos_count=100, max_degree=6, points=1000))
    ok = record("11", reports, time.perf_counter() - t0, None, "100 sums of squares, 10^3 ball samples")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
    for line in sorted(ACCEPTANCE_LINES, key=_order):
        print(line)
