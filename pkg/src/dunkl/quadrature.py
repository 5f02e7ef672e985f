"""Quadrature against w_k(x) e^{-|x|^2/2} dx, truncated w_k(x) dx, and the
rank-one Jacobi weight of the intertwiner's integral form.

Rank one uses Golub-Welsch on the generalized Hermite weight |x|^{2k} e^{-x^2/2},
whose monic recurrence is known in closed form:
    beta_n = n (n even),  beta_n = n + 2k (n odd).
Rank two integrates over lines through the origin: a radial generalized
Hermite rule in r (weight |r|^{2 gamma + 1}) times Gauss-Jacobi rules on the
angular arcs between reflecting lines, whose endpoint exponents absorb the
|cos|^{2k} zeros of w_k.  Directions orthogonal to the roots get Gauss-Hermite.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_hermitenorm, roots_jacobi

from .calculus import DunklCalculus, all_monomials
from .errors import ConfigurationError, QuadratureError
from .polynomial import MultiPoly
from .reports import Report
from .roots import RootSystemContext


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray          # (m, N)
    weights: np.ndarray        # (m,), measure fully included
    measure: str               # "GaussianWk", "LebesgueWkTruncated", "JacobiK"
    accuracy: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def integrate(self, f):
        """sum_i w_i f(x_i); ``f`` maps an (m, N) array to m values, or is a MultiPoly."""
        vals = f.eval_many(self.nodes) if isinstance(f, MultiPoly) else np.asarray(f(self.nodes))
        bad = ~np.isfinite(vals)
        if bad.any():
            j = int(np.argmax(bad))
            raise QuadratureError(f"non-finite integrand at node {self.nodes[j].tolist()}")
        return np.dot(self.weights, vals)

    def total(self) -> float:
        return float(self.weights.sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(self.dim)] + ["weight"])
        for x, wt in zip(self.nodes, self.weights):
            w.writerow([repr(float(v)) for v in x] + [repr(float(wt))])
        return buf.getvalue()


# -- one-dimensional building blocks --------------------------------------

def generalized_hermite_1d(mu: float, n: int):
    """Nodes/weights for |x|^{2 mu} e^{-x^2/2} on the real line (exact to degree 2n-1).

    Nodes are the Jacobi-matrix eigenvalues; weights come from the Christoffel
    function 1 / sum_j q_j(x)^2 of the orthonormal polynomials, which keeps the
    tiny outer weights accurate in relative terms (eigenvector components do not).
    """
    if mu <= -0.5:
        raise ConfigurationError("generalized Hermite weight needs mu > -1/2")
    j = np.arange(1, n + 1)
    beta = np.where(j % 2 == 0, j, j + 2.0 * mu).astype(float)
    nodes = eigh_tridiagonal(np.zeros(n), np.sqrt(beta[:-1]), eigvals_only=True)
    nodes = 0.5 * (nodes - nodes[::-1])
    log_mass = (mu + 0.5) * math.log(2.0) + gammaln(mu + 0.5)
    q_prev = np.zeros(n)
    q = np.ones(n)
    total = np.ones(n)
    log_scale = np.zeros(n)
    sb = np.sqrt(beta)
    for i in range(1, n):
        q_next = (nodes * q - (sb[i - 2] if i > 1 else 0.0) * q_prev) / sb[i - 1]
        q_prev, q = q, q_next
        total += q * q
        big = total > 1e200
        if big.any():
            q_prev[big] *= 1e-100
            q[big] *= 1e-100
            total[big] *= 1e-200
            log_scale[big] += 200 * math.log(10.0)
    # q_j here are orthonormal up to the factor mass^{-1/2}
    weights = np.exp(log_mass - np.log(total) - log_scale)
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


def half_line_jacobi(power: float, length: float, n: int):
    """Nodes/weights on [0, L] for x^{power} dx."""
    t, w = roots_jacobi(n, 0.0, power)
    x = 0.5 * length * (1.0 + t)
    return x, w * (0.5 * length) ** (power + 1.0)


def _span_basis(ctx: RootSystemContext):
    """Orthonormal basis: first the root span, then its complement."""
    vecs = np.array([[float(c) for c in a.coords] for a, _ in ctx.positive_k])
    _, s, vt = np.linalg.svd(vecs)
    r = int((s > 1e-10 * s[0]).sum())
    return vt, r


def _angular_arcs(ctx: RootSystemContext, basis: np.ndarray, n: int):
    """Angles in [0, pi) for the plane spanned by basis[:2] with weights of W(theta)."""
    entries = []
    for a, k in ctx.positive_k:
        v = np.array([float(c) for c in a.coords])
        p = basis[:2] @ v
        theta_a = math.atan2(p[1], p[0])
        entries.append((p / np.linalg.norm(p), float(k), float(a.norm2), np.linalg.norm(p) ** 2, theta_a))

    def W(theta):
        u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        out = np.ones(np.shape(theta))
        for phat, k, n2, pn2, _ in entries:
            if k:
                out = out * (2.0 * pn2 / n2 * (u @ phat) ** 2) ** k
        return out

    zeros = {}
    for _, k, _, _, th in entries:
        if k == 0:
            continue
        z = (th + math.pi / 2) % math.pi
        key = round(z, 12)
        zeros[key] = zeros.get(key, 0.0) + k
    if not zeros:
        theta = (np.arange(n) + 0.5) * math.pi / n
        return theta, np.full(n, math.pi / n) * W(theta)
    cuts = sorted(zeros)
    thetas, weights = [], []
    for i, a in enumerate(cuts):
        b = cuts[i + 1] if i + 1 < len(cuts) else cuts[0] + math.pi
        ka, kb = 2 * zeros[a], 2 * zeros[cuts[(i + 1) % len(cuts)]]
        t, w = roots_jacobi(n, kb, ka)
        half = 0.5 * (b - a)
        th = a + half * (1.0 + t)
        # W / ((th - a)^{2ka} (b - th)^{2kb}) is smooth on the arc
        denom = ((th - a) / half) ** ka * ((b - th) / half) ** kb
        thetas.append(th % math.pi)
        weights.append(w * half * W(th) / denom)
    return np.concatenate(thetas), np.concatenate(weights)


# -- rule builders ---------------------------------------------------------

def gaussian_wk_rule(ctx: RootSystemContext, nodes: int = 80, angular: int | None = None) -> QuadratureRule:
    """Rule for w_k(x) e^{-|x|^2/2} dx."""
    N = ctx.dim
    if N > 3:
        raise ConfigurationError("quadrature supports dimension N <= 3 only")
    basis, r = _span_basis(ctx)
    gamma = float(ctx.gamma)
    if r == 1:
        a, k = ctx.positive_k[0]
        k = float(k)
        x, w = generalized_hermite_1d(k, nodes)
        w = w * 2.0 ** k
        pts = x[:, None] * basis[0][None, :]
        wts = w
        accuracy = f"exact to degree {2 * nodes - 1}"
    elif r == 2:
        ang = angular or nodes
        rad, rw = generalized_hermite_1d(gamma + 0.5, nodes)
        th, tw = _angular_arcs(ctx, basis, ang)
        dirs = np.cos(th)[:, None] * basis[0] + np.sin(th)[:, None] * basis[1]
        pts = (dirs[:, None, :] * rad[None, :, None]).reshape(-1, N)
        wts = (tw[:, None] * rw[None, :]).reshape(-1)
        accuracy = f"radial degree {2 * nodes - 1}, angular Gauss-Jacobi {ang} per arc"
    else:
        g, gw = roots_hermitenorm(nodes)
        grids = np.meshgrid(*([g] * r), indexing="ij")
        coords = np.stack([m.reshape(-1) for m in grids], axis=1)
        wgrid = np.ones(coords.shape[0])
        for i in range(r):
            wgrid = wgrid * gw[np.searchsorted(g, coords[:, i])]
        pts = coords @ basis[:r]
        wts = wgrid * ctx.weight_many(pts)
        accuracy = "tensor Gauss-Hermite with w_k as integrand factor"
    extra = N - r
    if extra:
        g, gw = roots_hermitenorm(nodes if extra == 1 else max(8, nodes // 4))
        comp = basis[r:]
        grids = np.meshgrid(*([g] * extra), indexing="ij")
        coords = np.stack([m.reshape(-1) for m in grids], axis=1)
        cw = np.prod(np.stack([gw[np.searchsorted(g, coords[:, i])] for i in range(extra)]), axis=0)
        pts = (pts[:, None, :] + (coords @ comp)[None, :, :]).reshape(-1, N)
        wts = (wts[:, None] * cw[None, :]).reshape(-1)
    return QuadratureRule(pts, wts, "GaussianWk", accuracy, {"nodes": nodes, "rank": r})


def lebesgue_wk_rule(ctx: RootSystemContext, length: float = 12.0, nodes: int = 200,
                     angular: int | None = None) -> QuadratureRule:
    """Rule for w_k(x) dx restricted to the ball (rank >= 2) or interval (rank one) of radius L."""
    basis, r = _span_basis(ctx)
    if r != ctx.dim:
        raise ConfigurationError("truncated Lebesgue rules need the roots to span R^N")
    if r == 1:
        k = float(ctx.positive_k[0][1])
        x, w = half_line_jacobi(2 * k, length, nodes)
        w = w * 2.0 ** k
        pts = np.concatenate([-x[::-1], x])[:, None] * basis[0][None, :]
        wts = np.concatenate([w[::-1], w])
    elif r == 2:
        gamma = float(ctx.gamma)
        x, w = half_line_jacobi(2 * gamma + 1, length, nodes)
        rad = np.concatenate([-x[::-1], x])
        rw = np.concatenate([w[::-1], w])
        th, tw = _angular_arcs(ctx, basis, angular or max(32, nodes // 4))
        dirs = np.cos(th)[:, None] * basis[0] + np.sin(th)[:, None] * basis[1]
        pts = (dirs[:, None, :] * rad[None, :, None]).reshape(-1, ctx.dim)
        wts = (tw[:, None] * rw[None, :]).reshape(-1)
    else:
        raise ConfigurationError("truncated Lebesgue rules support rank <= 2")
    return QuadratureRule(pts, wts, "LebesgueWkTruncated", f"Gauss-Jacobi on radius {length}",
                          {"length": length, "nodes": nodes})


def jacobi_k_rule(k: float, nodes: int = 64) -> QuadratureRule:
    """(1-t)^{k-1} (1+t)^k dt on [-1, 1]."""
    k = float(k)
    if k <= 0:
        raise ConfigurationError("Jacobi weight needs k > 0")
    t, w = roots_jacobi(nodes, k - 1.0, k)
    return QuadratureRule(t[:, None], w, "JacobiK", f"exact to degree {2 * nodes - 1}", {"k": k})


def c_k_rank_one(k) -> float:
    """int w_k e^{-x^2/2} dx = 2^{2k+1/2} Gamma(k+1/2) in rank one."""
    k = float(k)
    return math.exp((2 * k + 0.5) * math.log(2.0) + gammaln(k + 0.5))


def gaussian_moment(k, m: int) -> float:
    """int x^{2m} |x|^{2k} e^{-x^2/2} dx = 2^{m+k+1/2} Gamma(m+k+1/2)."""
    k = float(k)
    return math.exp((m + k + 0.5) * math.log(2.0) + gammaln(m + k + 0.5))


def c_k(ctx: RootSystemContext, rule: QuadratureRule | None = None) -> float:
    if ctx.system.rank == 1 and ctx.dim == 1:
        return c_k_rank_one(ctx.k_values[0])
    rule = rule or gaussian_wk_rule(ctx)
    return rule.total()


# -- checks ---------------------------------------------------------------

def _transformed_values(calc: DunklCalculus, rule: QuadratureRule, degree_cap: int):
    monos = list(all_monomials(calc.dim, degree_cap))
    vals = np.empty((len(monos), rule.size))
    for j, m in enumerate(monos):
        vals[j] = calc.exp_laplacian(calc.mono(m), -1).eval_many(rule.nodes)
    return monos, vals


def check_macdonald(calc: DunklCalculus, rule: QuadratureRule, degree_cap=5, rtol=1e-8, atol=1e-10) -> Report:
    """[p,q]_k = c_k^{-1} int e^{-Delta_k/2}p e^{-Delta_k/2}q w_k e^{-|x|^2/2} dx on monomial pairs."""
    rep = Report("Macdonald identity")
    ck = rule.total()
    monos, vals = _transformed_values(calc, rule, degree_cap)
    gram = (vals * rule.weights) @ vals.T / ck
    worst_rel = worst_abs = 0.0
    bad = None
    scale = max(1.0, float(np.abs(gram).max()))
    for i, p in enumerate(monos):
        for j, q in enumerate(monos):
            exact = float(calc.pair(calc.mono(p), calc.mono(q)))
            got = gram[i, j]
            # float backends produce round-off where the exact value is 0
            if abs(exact) <= (0.0 if calc.exact else 1e-12 * scale):
                err, tol = abs(got), atol
                worst_abs = max(worst_abs, err)
            else:
                err, tol = abs(got - exact) / abs(exact), rtol
                worst_rel = max(worst_rel, err)
            if err > tol and bad is None:
                bad = (p, q, exact, got)
    detail = f"max rel err {worst_rel:.2e} (tol {rtol:.0e}), max abs err at zeros {worst_abs:.2e} (tol {atol:.0e})"
    if bad is not None:
        detail += f"; witness p=x^{bad[0]} q=x^{bad[1]} exact={bad[2]} quad={bad[3]}"
    rep.add("[p,q]_k = c_k^-1 int e^(-D/2)p e^(-D/2)q dmu", "Macdonald identity", bad is None, detail)
    return rep


def check_antisymmetry(calc: DunklCalculus, rule: QuadratureRule, polys, directions, tol=1e-8) -> Report:
    """int T_xi f g w_k = - int f T_xi g w_k for f = p e^{-|x|^2/4}, g = q e^{-|x|^2/4}."""
    rep = Report("anti-symmetry of Dunkl operators")
    X = rule.nodes
    worst = 0.0
    for xi in directions:
        lin = X @ np.array([float(c) for c in xi])
        for p in polys:
            for q in polys:
                pv, qv = p.eval_many(X), q.eval_many(X)
                tp = calc.T(xi, p).eval_many(X) - 0.5 * lin * pv
                tq = calc.T(xi, q).eval_many(X) - 0.5 * lin * qv
                lhs = np.dot(rule.weights, tp * qv)
                rhs = -np.dot(rule.weights, pv * tq)
                scale = max(1.0, np.dot(rule.weights, np.abs(tp * qv)))
                worst = max(worst, abs(lhs - rhs) / scale)
    rep.add("int (T f) g w_k = - int f (T g) w_k", "anti-symmetry", worst <= tol, error=worst, tolerance=tol)
    return rep


def check_rule(ctx: RootSystemContext, nodes: int = 80) -> Report:
    """Normalization, moment exactness, positivity and node-doubling stability."""
    rep = Report("quadrature self-test")
    rule = gaussian_wk_rule(ctx, nodes)
    rep.add("weights > 0", "positivity of weights", bool((rule.weights > 0).all()))
    if ctx.dim == 1:
        k = ctx.k_values[0]
        ck = c_k_rank_one(k)
        err = abs(rule.total() - ck) / ck
        rep.add("int w_k e^(-x^2/2) = 2^(2k+1/2) Gamma(k+1/2)", "normalization c_k", err <= 1e-10,
                error=err, tolerance=1e-10)
        worst = 0.0
        for m in range(nodes):
            exact = gaussian_moment(k, m) * 2.0 ** float(k)
            got = rule.integrate(lambda X, m=m: X[:, 0] ** (2 * m))
            worst = max(worst, abs(got - exact) / exact)
        rep.add("moments up to degree 2n-1", "generalized Hermite moments", worst <= 1e-12,
                error=worst, tolerance=1e-12)
    bigger = gaussian_wk_rule(ctx, 2 * nodes)
    worst = 0.0
    for f in (lambda X: np.ones(len(X)), lambda X: np.cos(X.sum(axis=1)),
              lambda X: (X ** 2).sum(axis=1) ** 2):
        a, b = rule.integrate(f), bigger.integrate(f)
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    rep.add("doubling nodes changes integrals < 1e-10", "convergence", worst < 1e-10,
            error=worst, tolerance=1e-10)
    return rep
