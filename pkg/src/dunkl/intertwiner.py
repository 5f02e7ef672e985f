"""The intertwining operator V_k, built degree by degree.

For each degree n the unknown images V_k(x^nu), |nu| = n, solve the stacked
system T_i (V_k q) = V_k(d_i q), i = 1..N, whose right sides are already known
from degree n - 1.  Solutions are unique for k >= 0; the solver checks full
column rank and consistency of every surplus equation.
"""

from __future__ import annotations

import math

import flint
import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln, roots_jacobi

from .calculus import DunklCalculus, all_monomials, same
from .errors import ConfigurationError, PreconditionError
from .linalg import solve_stacked, solve_stacked_float
from .polynomial import MultiPoly, monomial_index, monomials
from .reports import Report
from .roots import RootSystemContext
from .scalars import Q, factorial, pochhammer


def _partial_matrix(dim, i, n, exact):
    """Matrix of d_i : P_n -> P_{n-1}."""
    rows = monomial_index(dim, n - 1)
    cols = monomials(dim, n)
    M = flint.fmpq_mat(len(rows), len(cols)) if exact else np.zeros((len(rows), len(cols)))
    for j, m in enumerate(cols):
        if m[i]:
            lower = m[:i] + (m[i] - 1,) + m[i + 1:]
            M[rows[lower], j] = m[i]
    return M


class Intertwiner:
    """Per-degree matrices of V_k on P_n (columns are images of basis monomials)."""

    def __init__(self, ctx_or_calc, degree_cap: int = 0):
        self.calc = ctx_or_calc if isinstance(ctx_or_calc, DunklCalculus) else DunklCalculus(ctx_or_calc)
        self.ctx: RootSystemContext = self.calc.ctx
        if any(v < 0 for v in self.ctx.k_values):
            raise ConfigurationError("the intertwiner is built for k >= 0 only")
        self.dim = self.ctx.dim
        self.exact = self.ctx.exact
        one = flint.fmpq_mat(1, 1, [1]) if self.exact else np.ones((1, 1))
        self._mats = {0: one}
        self.extend(degree_cap)

    @property
    def cap(self) -> int:
        return max(self._mats)

    def extend(self, degree_cap: int) -> Intertwiner:
        for n in range(self.cap + 1, degree_cap + 1):
            self._mats[n] = self._solve_degree(n)
        return self

    def _solve_degree(self, n):
        dim, calc = self.dim, self.calc
        prev = self._mats[n - 1]
        blocks_A = [calc.T_matrix(i, n) for i in range(dim)]
        if self.exact:
            blocks_B = [prev * _partial_matrix(dim, i, n, True) for i in range(dim)]
            rows = sum(b.nrows() for b in blocks_A)
            d = blocks_A[0].ncols()
            A = flint.fmpq_mat(rows, d)
            B = flint.fmpq_mat(rows, d)
            r0 = 0
            for a, b in zip(blocks_A, blocks_B):
                for r in range(a.nrows()):
                    for c in range(d):
                        A[r0 + r, c] = a[r, c]
                        B[r0 + r, c] = b[r, c]
                r0 += a.nrows()
            return solve_stacked(A, B)
        A = np.vstack(blocks_A)
        B = np.vstack([prev @ _partial_matrix(dim, i, n, False) for i in range(dim)])
        return solve_stacked_float(A, B)

    def matrix(self, n: int):
        if n > self.cap:
            raise PreconditionError(f"degree {n} exceeds the table cap {self.cap}; extend the table first")
        return self._mats[n]

    def image(self, exp) -> MultiPoly:
        """V_k(x^nu)."""
        n = sum(exp)
        M = self.matrix(n)
        j = monomial_index(self.dim, n)[tuple(exp)]
        basis = monomials(self.dim, n)
        if self.exact:
            terms = {}
            for r, m in enumerate(basis):
                v = M[r, j]
                if v != 0:
                    terms[m] = Q(int(v.p)) / int(v.q)
        else:
            terms = {m: float(M[r, j]) for r, m in enumerate(basis) if M[r, j] != 0}
        return MultiPoly(self.dim, terms, _trusted=True)

    def apply(self, p: MultiPoly, extend: bool = False) -> MultiPoly:
        p = self.calc.coerce(p)
        if p.degree > self.cap:
            if not extend:
                raise PreconditionError(
                    f"degree {p.degree} exceeds the table cap {self.cap}; extend the table first")
            self.extend(p.degree)
        acc = {}
        for e, c in p.terms.items():
            for m, v in self.image(e).terms.items():
                acc[m] = acc.get(m, 0) + c * v
        return MultiPoly(self.dim, {m: v for m, v in acc.items() if v != 0}, _trusted=True)

    __call__ = apply


# -- rank-one oracles -----------------------------------------------------

def rank_one_coefficient(k, m: int):
    """V_k(x^m) = c_m x^m with c_{2n} = (1/2)_n/(k+1/2)_n, c_{2n+1} = (1/2)_{n+1}/(k+1/2)_{n+1}."""
    n = (m + 1) // 2
    half = Q(1) / 2 if isinstance(k, type(Q(0))) or isinstance(k, int) else 0.5
    return pochhammer(half, n) / pochhammer(k + half, n)


def rank_one_integral(k: float, p, x, nodes: int = 64) -> float:
    """V_k p(x) = C_k int_{-1}^{1} p(xt) (1-t)^{k-1} (1+t)^k dt  (k > 0)."""
    k = float(k)
    if k <= 0:
        raise ConfigurationError("the integral form needs k > 0")
    t, w = roots_jacobi(nodes, k - 1.0, k)
    logc = gammaln(k + 0.5) - 0.5 * math.log(math.pi) - gammaln(k)
    vals = p.eval_many((x * t)[:, None]) if isinstance(p, MultiPoly) else p(x * t)
    return float(math.exp(logc) * np.dot(w, vals))


# -- checks ---------------------------------------------------------------

def check_residual(V: Intertwiner, degree_cap: int | None = None, tol=1e-9) -> Report:
    """T_i V_k q = V_k d_i q for every basis monomial q and every i."""
    cap = V.cap if degree_cap is None else degree_cap
    V.extend(cap)
    calc = V.calc
    rep = Report("intertwining relation")
    bad, worst = None, 0.0
    for m in all_monomials(V.dim, cap):
        vq = V.image(m)
        if sum(m) and not vq.is_homogeneous(sum(m)):
            bad = bad or (m, "not homogeneous")
        for i in range(V.dim):
            lhs = calc.T_i(i, vq)
            rhs = V.apply(calc.mono(m).partial_i(i))
            ok, err = same(lhs, rhs, V.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = (m, i)
    rep.add("T_i V_k q = V_k d_i q", "intertwining relation", bad is None,
            "" if bad is None else f"witness {bad}", error=worst)
    rep.add("V_k 1 = 1", "normalization on constants",
            V.image((0,) * V.dim) == MultiPoly.constant(V.dim, calc.one))
    return rep


def check_rank_one_closed_form(V: Intertwiner, degree_cap=12) -> Report:
    rep = Report("rank-one closed form of V_k")
    V.extend(degree_cap)
    k = V.ctx.k_values[0]
    bad = None
    for m in range(degree_cap + 1):
        got = V.image((m,)).coefficient((m,))
        want = rank_one_coefficient(k, m)
        if got != want and bad is None:
            bad = (m, got, want)
    rep.add("V_k x^m = (1/2)_n/(k+1/2)_n x^m", "rank-one Pochhammer form", bad is None,
            "" if bad is None else f"m={bad[0]} got {bad[1]} want {bad[2]}")
    return rep


def check_rank_one_integral(V: Intertwiner, degree_cap=10, points=(0.3, 0.9, -1.4, 2.0), tol=1e-10) -> Report:
    rep = Report("rank-one integral representation of V_k")
    V.extend(degree_cap)
    k = V.ctx.k_values[0]
    worst = 0.0
    for m in range(degree_cap + 1):
        vp = V.image((m,))
        for x in points:
            integral = rank_one_integral(k, lambda s, m=m: s ** m, x)
            exact = float(vp.eval((x,)))
            worst = max(worst, abs(integral - exact) / max(1.0, abs(exact)))
    rep.add("V_k p(x) = C int p(xt)(1-t)^(k-1)(1+t)^k dt", "rank-one integral form",
            worst <= tol, error=worst, tolerance=tol)
    return rep


def check_pairing_transport(V: Intertwiner, degree_cap: int | None = None, tol=1e-9) -> Report:
    """[V_k p, q]_k = [p, q]_0 on monomial pairs."""
    cap = V.cap if degree_cap is None else degree_cap
    V.extend(cap)
    calc = V.calc
    rep = Report("pairing transport by V_k")
    bad, worst = None, 0.0
    for n in range(cap + 1):
        basis = monomials(V.dim, n)
        for mu in basis:
            vp = V.image(mu)
            for nu in all_monomials(V.dim, cap):
                lhs = calc.pair(vp, calc.mono(nu))
                rhs = math.prod(int(factorial(e)) for e in mu) if mu == nu else 0
                err = float(abs(lhs - rhs))
                worst = max(worst, err)
                ok = lhs == rhs if V.exact else err <= tol * max(1.0, abs(rhs))
                if not ok and bad is None:
                    bad = (mu, nu)
    rep.add("[V_k p, q]_k = [p, q]_0", "pairing transport", bad is None,
            "" if bad is None else f"witness p=x^{bad[0]} q=x^{bad[1]}", error=worst)
    return rep


def check_equivariance_V(V: Intertwiner, degree_cap: int | None = None, group=None, tol=1e-9) -> Report:
    """g^{-1} V_k (g p) = V_k p."""
    cap = V.cap if degree_cap is None else degree_cap
    V.extend(cap)
    rep = Report("G-equivariance of V_k")
    group = V.ctx.group if group is None else group
    bad, worst = None, 0.0
    for m in all_monomials(V.dim, cap):
        p = V.calc.mono(m)
        vp = V.image(m)
        for g in group:
            lhs = V.apply(p.act(g)).act(g.inverse())
            ok, err = same(lhs, vp, V.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = m
    rep.add("g^-1 V_k g = V_k", "equivariance of V_k", bad is None,
            "" if bad is None else f"witness monomial={bad}", error=worst)
    return rep


def ball_samples(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    """Uniform points in the closed unit ball."""
    g = rng.standard_normal((count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = rng.random(count) ** (1.0 / dim)
    return g * r[:, None]


def random_poly(rng: np.random.Generator, dim: int, degree: int, exact=True, homogeneous=False,
                denominator=7) -> MultiPoly:
    degs = [degree] if homogeneous else range(degree + 1)
    terms = {}
    for n in degs:
        for m in monomials(dim, n):
            num = int(rng.integers(-denominator, denominator + 1))
            if num:
                terms[m] = Q(num) / denominator if exact else num / denominator
    if not terms:
        m = monomials(dim, degree)[0]
        terms[m] = Q(1) if exact else 1.0
    return MultiPoly(dim, terms)


def sum_of_squares(rng, dim, degree, exact=True, count=None) -> MultiPoly:
    half = degree // 2
    count = count or int(rng.integers(1, 4))
    out = MultiPoly.zero(dim)
    for _ in range(count):
        q = random_poly(rng, dim, half, exact)
        out = out + q * q
    return out


def sphere_sup(p: MultiPoly, rng: np.random.Generator, samples: int = 4000, polish: int = 5) -> float:
    """max |p| on the unit sphere: dense random start, then local refinement of the best points."""
    dim = p.dim
    if dim == 1:
        return float(max(abs(p.eval_many(np.array([[1.0], [-1.0]])))))
    q = p.to_float() if p.is_exact else p
    z = rng.standard_normal((samples, dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    vals = np.abs(q.eval_many(z))
    best = float(vals.max())

    def neg(u):
        u = u / np.linalg.norm(u)
        return -abs(float(q.eval_many(u[None, :])[0]))

    for j in np.argsort(vals)[-polish:]:
        res = minimize(neg, z[j], method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
        best = max(best, -float(res.fun))
    return best


def check_positivity_grid(V: Intertwiner, rng: np.random.Generator, sos_count=100, max_degree=6,
                          points=1000, homogeneous_count=50, tol_pos=1e-10, tol_norm=1e-9) -> Report:
    """V_k p >= 0 for sums of squares; max |V_k p| <= max |p| on ball samples."""
    V.extend(max_degree)
    rep = Report("positivity and norm bound of V_k")
    pts = ball_samples(rng, V.dim, points)
    worst_pos, witness = float("inf"), None
    for _ in range(sos_count):
        degree = 2 * int(rng.integers(1, max_degree // 2 + 1))
        p = sum_of_squares(rng, V.dim, degree, V.exact)
        vals = V.apply(p).eval_many(pts)
        j = int(np.argmin(vals))
        if vals[j] < worst_pos:
            worst_pos, witness = float(vals[j]), (p, pts[j])
    rep.add("V_k p >= 0 for p a sum of squares", "positivity of V_k", worst_pos >= -tol_pos,
            f"min {worst_pos:.3e}" + ("" if worst_pos >= -tol_pos else f" p={witness[0]} x={witness[1]}"))
    # homogeneous p: compare sup over the sphere, sampled for V_k p, optimized for p
    sphere = pts[np.linalg.norm(pts, axis=1) > 1e-3]
    sphere = sphere / np.linalg.norm(sphere, axis=1, keepdims=True)
    worst_gap, witness = -float("inf"), None
    for _ in range(homogeneous_count):
        n = int(rng.integers(1, max_degree + 1))
        p = random_poly(rng, V.dim, n, V.exact, homogeneous=True)
        gap = np.abs(V.apply(p).eval_many(sphere)).max() - sphere_sup(p, rng)
        if gap > worst_gap:
            worst_gap, witness = float(gap), p
    rep.add("sup_B |V_k p| <= sup_B |p| for homogeneous p", "sup-norm bound for V_k", worst_gap <= tol_norm,
            f"largest excess {worst_gap:.3e}" + ("" if worst_gap <= tol_norm else f" p={witness}"))
    return rep
