"""Dunkl transform, generalized translation and the Dunkl heat kernel.

The transform is a quadrature sum over a truncated w_k rule:

    f^(xi) = c_k^{-1} sum_j w_j f(x_j) E_k(-i xi, x_j).

In rank one E_k(i s) has the closed Bessel form, so whole node-by-frequency
matrices are formed at once.  Higher rank goes through the truncated series and
is limited by its radius.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError, QuadratureError, TruncationError
from .kernel import KernelEvaluator
from .quadrature import c_k, lebesgue_wk_rule
from .reports import Report
from .roots import RootSystemContext
from .special import rank_one_kernel_imag, rank_one_kernel_scaled

BOUNDARY_TOL = 1e-10


def _as_points(xs, dim):
    return np.asarray(xs, dtype=float).reshape(-1, dim)


class TransformPlan:
    def __init__(self, ctx: RootSystemContext, length: float = 12.0, nodes: int = 200,
                 angular: int | None = None, evaluator: KernelEvaluator | None = None):
        self.ctx = ctx
        self.dim = ctx.dim
        self.rule = lebesgue_wk_rule(ctx, length, nodes, angular)
        self.length = length
        self.ck = c_k(ctx)
        self.rank_one = self.dim == 1
        self.k = float(ctx.k_values[0]) if self.rank_one else None
        self.ev = evaluator
        if not self.rank_one and self.ev is None:
            self.ev = KernelEvaluator(ctx)

    # E_k(sign * i xi, x_j) for each xi (rows) and node x_j (columns)
    def kernel_matrix(self, xis, points, sign=-1) -> np.ndarray:
        xis = _as_points(xis, self.dim)
        points = _as_points(points, self.dim)
        if self.rank_one:
            return rank_one_kernel_imag(self.k, sign * np.outer(xis[:, 0], points[:, 0]))
        return np.array([self.ev.E_many_x(points, sign * 1j * xi) for xi in xis])

    def _weighted(self, f):
        vals = np.asarray(f(self.rule.nodes), dtype=complex).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("test function is not finite on the rule nodes")
        return vals

    def boundary_mass(self, values) -> float:
        """Share of |integrand| carried by nodes in the outer tenth of the domain."""
        r = np.linalg.norm(self.rule.nodes, axis=1)
        outer = r > 0.9 * self.length
        return float(np.sum(self.rule.weights[outer] * np.abs(values[outer])) / self.ck)

    def transform_many(self, f, xis, sign=-1) -> np.ndarray:
        vals = self._weighted(f)
        K = self.kernel_matrix(xis, self.rule.nodes, sign)
        return K @ (self.rule.weights * vals) / self.ck

    def transform(self, f, xi) -> dict:
        vals = self._weighted(f)
        value = complex(self.transform_many(f, [xi])[0])
        tail = self.boundary_mass(vals)
        return {"value": value, "boundary_mass": tail, "truncated_ok": tail <= BOUNDARY_TOL,
                "nodes": self.rule.size}

    def inverse_many(self, g, xs) -> np.ndarray:
        """g^vee(x) = g^(-x), i.e. the kernel E_k(i x, xi)."""
        return self.transform_many(g, xs, sign=+1)

    def on_nodes(self, f) -> np.ndarray:
        """f^ sampled on the rule's own nodes (used by isometry and inversion)."""
        return self.transform_many(f, self.rule.nodes)

    def norm_squared(self, values) -> float:
        return float(np.sum(self.rule.weights * np.abs(values) ** 2))

    def translate(self, fhat, y, xs) -> np.ndarray:
        """tau_y f(x) = c_k^{-1} int f^(xi) E_k(i x, xi) E_k(i y, xi) w_k(xi) d xi, for known f^."""
        if not self.rank_one:
            raise ConfigurationError("generalized translation is implemented in rank one")
        nodes = self.rule.nodes
        fh = np.asarray(fhat(nodes), dtype=complex).reshape(-1)
        ey = rank_one_kernel_imag(self.k, float(y) * nodes[:, 0])
        K = self.kernel_matrix(xs, nodes, sign=+1)
        return K @ (self.rule.weights * fh * ey) / self.ck


class HeatKernel:
    """Gamma_k(t, x, y) = (2t)^{-gamma-N/2} c_k^{-1} e^{-(|x|^2+|y|^2)/4t} E_k(x/sqrt(2t), y/sqrt(2t))."""

    def __init__(self, ctx: RootSystemContext, evaluator: KernelEvaluator | None = None):
        self.ctx = ctx
        self.dim = ctx.dim
        if any(v < 0 for v in ctx.k_values):
            raise ConfigurationError("the heat kernel needs k >= 0")
        self.gamma = float(ctx.gamma)
        self.ck = c_k(ctx)
        self.rank_one = self.dim == 1
        self.k = float(ctx.k_values[0]) if self.rank_one else None
        self.ev = evaluator if evaluator is not None or self.rank_one else KernelEvaluator(ctx)
        self._group = [g.as_array() for g in ctx.group]

    def prefactor(self, t: float) -> float:
        return (2 * t) ** (-self.gamma - self.dim / 2) / self.ck

    def __call__(self, t, x, y):
        return self.gamma_k(t, x, y)

    def gamma_k(self, t, x, y):
        """Rank one: x and y are broadcast arrays of coordinates.  Otherwise single points."""
        if t <= 0:
            raise ConfigurationError("t must be positive")
        if self.rank_one:
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            u = x * y / (2 * t)
            gauss = np.exp(-(np.abs(x) - np.abs(y)) ** 2 / (4 * t))
            out = self.prefactor(t) * gauss * rank_one_kernel_scaled(self.k, u)
            return float(out) if np.ndim(out) == 0 else out
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        s = math.sqrt(2 * t)
        try:
            e = self.ev.E(x / s, y / s).real
        except TruncationError as exc:
            raise TruncationError(f"{exc}; or use a larger t", exc.suggested_truncation) from exc
        return self.prefactor(t) * math.exp(-(x @ x + y @ y) / (4 * t)) * e

    def fundamental(self, x, t):
        """F_k(x, t) = Gamma_k(t, 0, x)."""
        if self.rank_one:
            x = np.asarray(x, dtype=float)
            return self.prefactor(t) * np.exp(-x ** 2 / (4 * t))
        x = np.asarray(x, dtype=float).reshape(-1)
        return self.prefactor(t) * math.exp(-(x @ x) / (4 * t))

    def gaussian_bound(self, t, x, y) -> float:
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        best = max(-np.sum((g @ x - y) ** 2) for g in self._group)
        return self.prefactor(t) * math.exp(best / (4 * t))

    def semigroup_apply(self, rule, f, t, xs) -> np.ndarray:
        """H(t)f(x) = int Gamma_k(t, x, y) f(y) w_k(y) dy by quadrature (rank one)."""
        y = rule.nodes[:, 0]
        fv = np.asarray(f(rule.nodes), dtype=float).reshape(-1)
        xs = np.asarray(xs, dtype=float).reshape(-1)
        G = self.gamma_k(t, xs[:, None], y[None, :])
        return G @ (rule.weights * fv)


def dunkl_laplacian_numeric(f, x: float, k: float, h: float = 1e-4) -> float:
    """Rank one: f'' + 2k [f'(x)/x - (f(x) - f(-x)) / (2x^2)], derivatives by central differences."""
    fp, f0, fm = f(x + h), f(x), f(x - h)
    d2 = (fp - 2 * f0 + fm) / h ** 2
    d1 = (fp - fm) / (2 * h)
    return d2 + 2 * k * (d1 / x - (f0 - f(-x)) / (2 * x * x))


def time_derivative(g, t: float, rel_step: float = 1e-3) -> float:
    h = rel_step * t
    return (-g(t + 2 * h) + 8 * g(t + h) - 8 * g(t - h) + g(t - 2 * h)) / (12 * h)


# -- rank-one test battery --------------------------------------------------

def function_battery():
    """Ten Schwartz functions on the line, as (name, vectorized f)."""
    def g(fn):
        return lambda X: fn(np.asarray(X, dtype=float)[:, 0])
    return [
        ("gaussian", g(lambda x: np.exp(-x ** 2 / 2))),
        ("x*gaussian", g(lambda x: x * np.exp(-x ** 2 / 2))),
        ("x^2*gaussian", g(lambda x: x ** 2 * np.exp(-x ** 2 / 2))),
        ("x^3*gaussian", g(lambda x: x ** 3 * np.exp(-x ** 2 / 2))),
        ("narrow gaussian", g(lambda x: np.exp(-2 * x ** 2))),
        ("wide gaussian", g(lambda x: np.exp(-x ** 2 / 6))),
        ("shifted gaussian", g(lambda x: np.exp(-(x - 0.8) ** 2))),
        ("(1+x)^2*gaussian", g(lambda x: (1 + x) ** 2 * np.exp(-x ** 2 / 2))),
        ("x^4*wide gaussian", g(lambda x: x ** 4 * np.exp(-x ** 2 / 3))),
        ("two bumps", g(lambda x: np.exp(-(x + 1) ** 2) - 0.5 * np.exp(-(x - 1.5) ** 2 / 0.5))),
    ]


NAMED_FUNCTIONS = {
    "gaussian": (lambda X: np.exp(-0.5 * np.sum(np.asarray(X, float) ** 2, axis=1)),
                 lambda xi: math.exp(-0.5 * float(np.dot(xi, xi)))),
}


# -- checks -----------------------------------------------------------------

def _need_rank_one(obj):
    if not obj.rank_one:
        raise ConfigurationError("this check is stated for rank one")


def check_gaussian_fixed(plan: TransformPlan, xis, tol=1e-6) -> Report:
    rep = Report("Gaussian under the Dunkl transform")
    f, exact = NAMED_FUNCTIONS["gaussian"]
    got = plan.transform_many(f, xis)
    want = np.array([exact(np.atleast_1d(xi)) for xi in np.asarray(xis, float).reshape(len(got), -1)])
    err = float(np.abs(got - want).max())
    rep.add("transform of e^(-|x|^2/2) = e^(-|xi|^2/2)", "Gaussian fixed point", err <= tol,
            error=err, tolerance=tol)
    return rep


def check_plancherel_inversion(plan: TransformPlan, battery=None, points=None, tol=1e-5) -> Report:
    """Isometry on L^2(w_k) and pointwise inversion, for each battery function."""
    _need_rank_one(plan)
    rep = Report("Plancherel and inversion")
    battery = battery or function_battery()
    points = np.linspace(-2.85, 2.85, 20) if points is None else np.asarray(points, float)
    worst_iso, worst_inv, where_iso, where_inv = 0.0, 0.0, "", ""
    for name, f in battery:
        vals = plan._weighted(f)
        fhat = plan.on_nodes(f)
        a, b = plan.norm_squared(vals), plan.norm_squared(fhat)
        err = abs(a - b) / a
        if err > worst_iso:
            worst_iso, where_iso = err, name
        # inverse transform of f^ sampled on the nodes
        K = plan.kernel_matrix(points, plan.rule.nodes, sign=+1)
        back = K @ (plan.rule.weights * fhat) / plan.ck
        want = np.asarray(f(points[:, None]), dtype=float)
        scale = max(1.0, float(np.abs(want).max()))
        err = float(np.abs(back - want).max()) / scale
        if err > worst_inv:
            worst_inv, where_inv = err, name
    rep.add("||f^||_2 = ||f||_2 in L^2(w_k)", "Plancherel isometry", worst_iso <= tol,
            f"worst function: {where_iso}" if where_iso else "", error=worst_iso, tolerance=tol)
    rep.add("(f^)^vee = f", "inversion theorem", worst_inv <= tol,
            f"worst function: {where_inv}" if where_inv else "", error=worst_inv, tolerance=tol)
    return rep


def check_translation(plan: TransformPlan, hk: HeatKernel, samples, tol=1e-6) -> Report:
    """tau_0 f = f, tau_y f(x) = tau_x f(y), tau_{-y} F_k(., t)(x) = Gamma_k(t, x, y)."""
    _need_rank_one(plan)
    rep = Report("generalized translation")
    e0 = e1 = e2 = e3 = 0.0
    for t, x, y in samples:
        fhat = lambda X, t=t: np.exp(-t * X[:, 0] ** 2) / plan.ck
        F = lambda z, t=t: hk.fundamental(z, t)
        got = plan.translate(fhat, 0.0, [x])[0]
        e0 = max(e0, abs(got - F(x)))
        a = plan.translate(fhat, y, [x])[0]
        b = plan.translate(fhat, x, [y])[0]
        e1 = max(e1, abs(a - b))
        c = plan.translate(fhat, -y, [x])[0]
        e2 = max(e2, abs(c - hk.gamma_k(t, x, y)))
        if plan.k == 0:
            e3 = max(e3, abs(a - F(x + y)))
    rep.add("tau_0 f = f", "translation at the origin", e0 <= tol, error=e0, tolerance=tol)
    rep.add("tau_y f(x) = tau_x f(y)", "translation symmetry", e1 <= tol, error=e1, tolerance=tol)
    rep.add("tau_{-y} F_k(., t)(x) = Gamma_k(t, x, y)", "heat kernel as translate", e2 <= tol,
            error=e2, tolerance=tol)
    if plan.k == 0:
        rep.add("k = 0: tau_y f(x) = f(x + y)", "classical translation", e3 <= tol, error=e3, tolerance=tol)
    return rep


def check_heat_properties(hk: HeatKernel, plan: TransformPlan, rng: np.random.Generator,
                          tol=1e-6, pde_tol=1e-4, semigroup_count=10) -> Report:
    _need_rank_one(hk)
    rep = Report("heat kernel properties")
    rule = plan.rule
    y_nodes = rule.nodes[:, 0]
    k = hk.k

    # positivity and symmetry on every evaluated grid
    grid = np.linspace(-2, 2, 21)
    ok_pos, sym = True, 0.0
    for t in (0.2, 0.5, 1.0, 2.0):
        G = hk.gamma_k(t, grid[:, None], grid[None, :])
        ok_pos &= bool(np.all(G > 0))
        sym = max(sym, float(np.abs(G - G.T).max()))
    rep.add("Gamma_k > 0", "positivity", ok_pos)
    rep.add("Gamma_k(t,x,y) = Gamma_k(t,y,x)", "symmetry", sym <= 1e-14, error=sym, tolerance=1e-14)

    mass = 0.0
    for x in (0.0, 0.5, 1.3):
        for t in (0.25, 1.0):
            G = hk.gamma_k(t, x, y_nodes)
            mass = max(mass, abs(float(np.dot(rule.weights, G)) - 1))
    rep.add("int Gamma_k(t,x,y) w_k(y) dy = 1", "mass conservation", mass <= tol, error=mass, tolerance=tol)

    # finite proxy for continuity in t: mass and second moment along shrinking t
    drift = 0.0
    for t in (0.4, 0.2, 0.1):
        x = 0.7
        G = hk.gamma_k(t, x, y_nodes)
        drift = max(drift, abs(float(np.dot(rule.weights, G)) - 1))
        m2 = float(np.dot(rule.weights, G * y_nodes ** 2))
        drift = max(drift, abs(m2 - (x * x + 2 * t * (1 + 2 * k))))
    rep.add("int Gamma_k(t,x,y) y^2 w_k(y) dy = x^2 + 2t(1+2k)", "second moment", drift <= tol,
            "t in {0.4, 0.2, 0.1}", error=drift, tolerance=tol)

    semi = 0.0
    for _ in range(semigroup_count):
        t, s = rng.uniform(0.2, 2.0, 2)
        x, y = rng.uniform(-2, 2, 2)
        lhs = hk.gamma_k(t + s, x, y)
        rhs = float(np.dot(rule.weights, hk.gamma_k(t, x, y_nodes) * hk.gamma_k(s, y, y_nodes)))
        semi = max(semi, abs(lhs - rhs))
    rep.add("Gamma_k(t+s,x,y) = int Gamma_k(t,x,z) Gamma_k(s,y,z) w_k(z) dz", "semigroup identity",
            semi <= tol, error=semi, tolerance=tol)

    pde = 0.0
    for t, x, y in ((0.3, 0.7, 0.4), (0.5, -1.1, 0.9), (1.0, 1.5, -0.6), (2.0, 0.4, 1.8), (0.2, -0.5, -0.3)):
        lap = dunkl_laplacian_numeric(lambda z: hk.gamma_k(t, z, y), x, k)
        dt = time_derivative(lambda s: hk.gamma_k(s, x, y), t)
        pde = max(pde, abs(lap - dt))
    rep.add("Delta_k Gamma_k = d/dt Gamma_k", "heat equation", pde <= pde_tol,
            "x-step 1e-4, t-step 1e-3 t (5-point)", error=pde, tolerance=pde_tol)

    bound_ok, ratio = True, 0.0
    for t in (0.2, 0.7, 2.0):
        for x in np.linspace(-2, 2, 9):
            for y in np.linspace(-2, 2, 9):
                v, b = hk.gamma_k(t, x, y), hk.gaussian_bound(t, [x], [y])
                ratio = max(ratio, v / b)
                bound_ok &= v <= b * (1 + 1e-12)
    rep.add("Gamma_k <= (2t)^(-gamma-N/2) c_k^-1 max_g e^(-|gx-y|^2/4t)", "Gaussian upper bound",
            bound_ok, f"max ratio {ratio:.6f}")

    markov = 0.0
    xis = np.linspace(-3, 3, 13)
    for t in (0.25, 1.0):
        for x in (0.0, 0.6, -1.4):
            got = hk.ck * plan.transform_many(lambda X: hk.gamma_k(t, x, X[:, 0]), xis)
            want = rank_one_kernel_imag(k, -x * xis) * np.exp(-t * xis ** 2)
            markov = max(markov, float(np.abs(got - want).max()))
    rep.add("c_k Gamma_k(t,x,.)^(xi) = E_k(-ix,xi) e^(-t|xi|^2)", "Markov transform property",
            markov <= tol, error=markov, tolerance=tol)

    fk = 0.0
    for t in (0.3, 1.2):
        got = plan.transform_many(lambda X: hk.fundamental(X[:, 0], t), xis)
        fk = max(fk, float(np.abs(got - np.exp(-t * xis ** 2) / hk.ck).max()))
    rep.add("F_k(., t)^(xi) = c_k^-1 e^(-t|xi|^2)", "fundamental solution transform", fk <= tol,
            error=fk, tolerance=tol)

    contr = 0.0
    tests = [lambda X: 1.0 / (1 + X[:, 0] ** 2), lambda X: 0.5 + np.exp(-(X[:, 0] - 1) ** 2),
             lambda X: np.exp(-X[:, 0] ** 2 / 8)]
    xs = np.linspace(-3, 3, 25)
    for f in tests:
        fmax = float(np.abs(f(xs[:, None])).max())
        fmax = max(fmax, float(np.abs(f(rule.nodes)).max()))
        for t in (0.2, 1.0):
            contr = max(contr, float(np.abs(hk.semigroup_apply(rule, f, t, xs)).max()) - fmax)
    rep.add("max |H(t)f| <= max |f|", "contraction", contr <= 1e-8, f"excess {contr:.2e}")
    return rep
