"""Verification suites, one per area, seeded and deterministic.

Each suite takes a context plus options and returns a list of Reports.  The
transform, heat and asymptotic suites are rank-one statements; for a higher
rank context they run on the rank-one companion with the first multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import asymptotics as asy
from .calculus import (DunklCalculus, check_commutativity, check_commutator_xi_delta,
                       check_delta_invariance, check_equivariance, check_laplacian_formula,
                       check_pairing, check_positive_minimum, check_product_rule, check_sl2)
from .errors import ConfigurationError
from .hermite import (HermiteSystem, check_classical, check_eigen_equations, check_generating_and_mehler,
                      check_laguerre, check_orthogonality, check_quadrature_orthogonality,
                      check_rodrigues, check_transform_eigenfunctions)
from .intertwiner import (Intertwiner, check_equivariance_V, check_pairing_transport,
                          check_positivity_grid, check_rank_one_closed_form, check_rank_one_integral,
                          check_residual, random_poly)
from .kernel import (KernelEvaluator, check_bessel_system, check_bound_and_positivity, check_degree_shift,
                     check_J_rank_one, check_rank_one_oracle, check_reproducing, check_symmetries,
                     invariant_generators)
from .polynomial import MultiPoly
from .quadrature import c_k_rank_one, check_antisymmetry, check_macdonald, check_rule, gaussian_wk_rule
from .roots import RootSystemContext, rank_one
from .scalars import Q, to_exact
from .transform import (HeatKernel, TransformPlan, check_gaussian_fixed, check_heat_properties,
                        check_plancherel_inversion, check_translation)

SUITES = ("operators", "intertwiner", "kernel", "macdonald", "hermite", "transform", "heat", "asymptotics")


@dataclass
class Options:
    max_degree: int = 6
    truncation: int = 40
    nodes: int = 80
    seed: int = 0
    sample_pairs: int = 1000


def _rng(opts: Options, salt: int) -> np.random.Generator:
    return np.random.default_rng([opts.seed, salt])


def _direction(rng, dim, exact):
    v = rng.integers(-3, 4, dim)
    if not v.any():
        v[0] = 1
    return tuple(Q(int(c)) if exact else float(c) for c in v)


def rank_one_companion(ctx: RootSystemContext) -> RootSystemContext:
    if ctx.dim == 1:
        return ctx
    k = ctx.k_values[0]
    return rank_one(k if ctx.exact else to_exact(float(k)))


def _small_point(rng, dim, exact, scale=0.6):
    v = rng.uniform(-scale, scale, dim)
    return tuple(to_exact(round(float(c), 2)) if exact else round(float(c), 2) for c in v)


# -- suites -----------------------------------------------------------------

def suite_operators(ctx: RootSystemContext, opts: Options) -> list:
    calc = DunklCalculus(ctx)
    rng = _rng(opts, 1)
    d = opts.max_degree
    pairs = [(_direction(rng, ctx.dim, ctx.exact), _direction(rng, ctx.dim, ctx.exact)) for _ in range(5)]
    polys = [random_poly(rng, ctx.dim, int(rng.integers(1, 4)), ctx.exact) for _ in range(4)]
    group = list(ctx.group)
    samples = [(group[int(rng.integers(len(group)))], _direction(rng, ctx.dim, ctx.exact), p) for p in polys]
    invariants = invariant_generators(ctx, 4)[:3]
    reports = [
        check_commutativity(calc, pairs, d),
        check_laplacian_formula(calc, d),
        check_sl2(calc, d),
        check_commutator_xi_delta(calc, d),
        check_equivariance(calc, samples),
        check_delta_invariance(calc, group[: min(len(group), 12)], polys),
        check_product_rule(calc, invariants, polys[:2], [pairs[0][0]]),
        check_pairing(calc, [(polys[i], polys[j]) for i in range(3) for j in range(3)], group[:6]),
    ]
    points = [_small_point(rng, ctx.dim, ctx.exact) for _ in range(3)]
    reports.append(check_positive_minimum(calc, points, [MultiPoly.constant(ctx.dim, calc.one)] + polys[:2]))
    return reports


def suite_intertwiner(ctx: RootSystemContext, opts: Options) -> list:
    V = Intertwiner(ctx, opts.max_degree)
    reports = [check_residual(V), check_pairing_transport(V), check_equivariance_V(V)]
    if ctx.dim == 1:
        W = Intertwiner(ctx, max(12, opts.max_degree))
        reports += [check_rank_one_closed_form(W, 12), check_rank_one_integral(W, 10)]
    reports.append(check_positivity_grid(V, _rng(opts, 2), sos_count=100, max_degree=min(6, opts.max_degree),
                                         points=opts.sample_pairs))
    return reports


def suite_kernel(ctx: RootSystemContext, opts: Options) -> list:
    ev = KernelEvaluator(ctx, truncation=opts.truncation)
    rng = _rng(opts, 3)
    y = _small_point(rng, ctx.dim, ctx.exact)
    cap = min(8, max(opts.max_degree, 1))
    reports = [check_degree_shift(ev, y, cap), check_bessel_system(ev, y, min(cap, 6))]
    samples = [(rng.uniform(-1, 1, ctx.dim), rng.uniform(-1, 1, ctx.dim), float(rng.uniform(-2, 2)))
               for _ in range(5)]
    reports.append(check_symmetries(ev, samples))
    pairs = [(rng.uniform(-1.5, 1.5, ctx.dim), rng.uniform(-1.5, 1.5, ctx.dim)) for _ in range(opts.sample_pairs)]
    reports.append(check_bound_and_positivity(ev, pairs))
    if ctx.dim == 1:
        grid = np.linspace(-1.5, 1.5, 9)
        reports += [check_rank_one_oracle(ev, grid), check_J_rank_one(ev, grid)]
        rule = gaussian_wk_rule(ctx, opts.nodes)
        zs = [([a], [b]) for a, b in rng.uniform(-1.5, 1.5, (10, 2))]
        reports.append(check_reproducing(ev, rule, zs, c_k_rank_one(ctx.k_values[0])))
    return reports


def _nodes_for(ctx, opts, degree):
    # polynomial integrands only need 2n-1 >= degree; in R^3 the full default is millions of points
    return opts.nodes if ctx.dim <= 2 else min(opts.nodes, degree // 2 + 6)


def suite_macdonald(ctx: RootSystemContext, opts: Options) -> list:
    calc = DunklCalculus(ctx)
    nodes = _nodes_for(ctx, opts, 2 * min(5, opts.max_degree))
    rule = gaussian_wk_rule(ctx, nodes)
    rng = _rng(opts, 4)
    polys = [random_poly(rng, ctx.dim, 3, ctx.exact) for _ in range(3)]
    dirs = [_direction(rng, ctx.dim, ctx.exact) for _ in range(2)]
    rule_nodes = opts.nodes if ctx.dim <= 2 else min(opts.nodes, 24)
    return [check_rule(ctx, rule_nodes), check_macdonald(calc, rule, min(5, opts.max_degree)),
            check_antisymmetry(calc, rule, polys, dirs)]


def suite_hermite(ctx: RootSystemContext, opts: Options) -> list:
    if ctx.dim > 2 and ctx.system.rank > 2:
        raise ConfigurationError("the Hermite quadrature checks support rank <= 2")
    cap = opts.max_degree
    sys = HermiteSystem(ctx, cap)
    rule = gaussian_wk_rule(ctx, _nodes_for(ctx, opts, 2 * cap))
    reports = [check_orthogonality(sys), check_eigen_equations(sys), check_quadrature_orthogonality(sys, rule),
               check_rodrigues(sys, rule, min(cap, 4))]
    one = rank_one_companion(ctx)
    if ctx.dim == 1 and ctx.exact:
        reports.append(check_laguerre(sys))
    if one.k_values[0] == 0:
        reports.append(check_classical(HermiteSystem(one, 10)))
    big = HermiteSystem(one, 30)
    ev = KernelEvaluator(one, truncation=opts.truncation)
    reports.append(check_generating_and_mehler(big, ev, [(("7/10",), ("-2/5",), "1/2")], tol=1e-8))
    plan = TransformPlan(one)
    reports.append(check_transform_eigenfunctions(HermiteSystem(one, 6), plan, np.linspace(-2.5, 2.5, 11)))
    return reports


def suite_transform(ctx: RootSystemContext, opts: Options) -> list:
    one = rank_one_companion(ctx)
    plan = TransformPlan(one)
    hk = HeatKernel(one)
    return [check_gaussian_fixed(plan, np.linspace(-3, 3, 13)), check_plancherel_inversion(plan),
            check_translation(plan, hk, [(0.5, 0.7, -0.3), (1.2, -1.0, 0.4), (0.3, 0.2, 1.1)])]


def suite_heat(ctx: RootSystemContext, opts: Options) -> list:
    one = rank_one_companion(ctx)
    return [check_heat_properties(HeatKernel(one), TransformPlan(one), _rng(opts, 5))]


def suite_asymptotics(ctx: RootSystemContext, opts: Options) -> list:
    one = rank_one_companion(ctx)
    probe = asy.AsymptoticProbe.build(one.k_values[0])
    return [asy.check_constants(), asy.check_ray(probe), asy.check_half_plane(probe), asy.check_heat_ratio(probe)]


RUNNERS = {
    "operators": suite_operators,
    "intertwiner": suite_intertwiner,
    "kernel": suite_kernel,
    "macdonald": suite_macdonald,
    "hermite": suite_hermite,
    "transform": suite_transform,
    "heat": suite_heat,
    "asymptotics": suite_asymptotics,
}


def run_suite(name: str, ctx: RootSystemContext, opts: Options | None = None) -> list:
    opts = opts or Options()
    if name == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, ctx, opts)
        return out
    if name not in RUNNERS:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return RUNNERS[name](ctx, opts)
