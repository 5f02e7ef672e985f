"""The Dunkl kernel E_k and the k-Bessel function J_k.

E_k(x, y) = sum_n E^(n)(x, y),   E^(n)(x, y) = V_k(<., y>^n)(x) / n!
          = sum_{|mu| = |nu| = n} x^mu V[mu, nu] y^nu / nu!

so each homogeneous component is a bilinear form m_n(x)^T K_n m_n(y) with
K_n = V_n diag(1/nu!).  Degrees are built lazily up to what the tail bound
e^{max_g |<gx,y>|} (|x||y|)^{M+1}/(M+1)! demands.  The exact intertwiner is used
up to ``exact_degree``; higher degrees are solved in floating point.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .calculus import DunklCalculus
from .errors import ConfigurationError, TruncationError
from .intertwiner import Intertwiner, _partial_matrix
from .linalg import solve_stacked_float
from .polynomial import MultiPoly, monomials
from .reports import Report
from .roots import RootSystemContext
from .scalars import Q, factorial, to_exact
from .special import rank_one_kernel, rank_one_kernel_1f1

DEFAULT_TRUNCATION = 40
DEFAULT_TOL = 1e-14


@lru_cache(maxsize=None)
def _exponents(dim: int, n: int) -> np.ndarray:
    return np.array(monomials(dim, n), dtype=np.int64).reshape(-1, dim)


def monomial_values(points: np.ndarray, n: int) -> np.ndarray:
    """(m, dim P_n) array of x^nu for the graded-lex basis of P_n."""
    pts = np.atleast_2d(points)
    exps = _exponents(pts.shape[1], n)
    return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)


def tail_bound(r: float, M: int, growth: float | None = None) -> float:
    """e^{growth} r^{M+1} / (M+1)!  with growth defaulting to r."""
    if r == 0:
        return 0.0
    growth = r if growth is None else growth
    log_t = growth + (M + 1) * math.log(r) - math.lgamma(M + 2)
    return math.exp(log_t) if log_t < 700 else math.inf


class KernelEvaluator:
    """Truncated-series evaluator for E_k(x, y), x real, y real or complex."""

    def __init__(self, ctx_or_table, truncation: int = DEFAULT_TRUNCATION, tol: float = DEFAULT_TOL,
                 exact_degree: int | None = None, closed_form: bool = True):
        if isinstance(ctx_or_table, Intertwiner):
            self.V = ctx_or_table
        else:
            self.V = Intertwiner(ctx_or_table, 0)
        self.ctx: RootSystemContext = self.V.ctx
        self.calc: DunklCalculus = self.V.calc
        self.dim = self.ctx.dim
        if truncation < 1:
            raise ConfigurationError("truncation must be >= 1")
        self.truncation = truncation
        self.tol = tol
        if exact_degree is None:
            exact_degree = {1: 200, 2: 60, 3: 22}.get(self.dim, 12)
        self.exact_degree = exact_degree
        self.rank_one = self.dim == 1
        self.closed_form = closed_form and self.rank_one
        self._K = {}
        self._Vf = {}
        self._group = [g.as_array() for g in self.ctx.group]

    # -- components -------------------------------------------------------
    def _float_V(self, n):
        hit = self._Vf.get(n)
        if hit is not None:
            return hit
        if n <= self.exact_degree or not self.V.exact:
            self.V.extend(n)
            M = self.V.matrix(n)
            Vn = np.array([[float(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]) \
                if self.V.exact else np.asarray(M, dtype=float)
        else:
            prev = self._float_V(n - 1)
            A = np.vstack([_to_float(self.calc.T_matrix(i, n)) for i in range(self.dim)])
            B = np.vstack([prev @ _to_float(_partial_matrix(self.dim, i, n, False))
                           for i in range(self.dim)])
            Vn = solve_stacked_float(A, B, tol=1e-8)
        self._Vf[n] = Vn
        return Vn

    def component_matrix(self, n: int) -> np.ndarray:
        """Float K_n with E^(n)(x, y) = m_n(x)^T K_n m_n(y)."""
        hit = self._K.get(n)
        if hit is None:
            inv_fact = np.array([1.0 / math.prod(math.factorial(e) for e in nu)
                                 for nu in monomials(self.dim, n)])
            hit = self._float_V(n) * inv_fact[None, :]
            self._K[n] = hit
        return hit

    def component_poly(self, n: int, y) -> MultiPoly:
        """E^(n)(., y) as an exact polynomial in x for exact y."""
        self.V.extend(n)
        y = [to_exact(v) for v in y] if self.V.exact else [float(v) for v in y]
        acc = MultiPoly.zero(self.dim)
        for nu in monomials(self.dim, n):
            c = self.calc.one
            for yi, e in zip(y, nu):
                c = c * yi ** e
            if c == 0:
                continue
            c = c / math.prod(int(factorial(e)) for e in nu)
            acc = acc + self.V.image(nu).scale(c)
        return acc

    def partial_sum_poly(self, M: int, y) -> MultiPoly:
        out = MultiPoly.zero(self.dim)
        for n in range(M + 1):
            out = out + self.component_poly(n, y)
        return out

    # -- evaluation -------------------------------------------------------
    def growth(self, x, y) -> float:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y)
        return max(abs(np.dot(g @ x, y)) for g in self._group)

    def degree_needed(self, x, y):
        """(M, tail): smallest M <= truncation meeting the tolerance, and its tail bound."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=complex)
        r = float(np.linalg.norm(x) * np.linalg.norm(y))
        if r == 0:
            return 0, 0.0
        growth = self.growth(x, y)
        for M in range(1, self.truncation + 1):
            t = tail_bound(r, M, growth)
            if t <= self.tol:
                return M, t
        return self.truncation, tail_bound(r, self.truncation, growth)

    def series(self, x, y, M: int):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.asarray(y)
        total = 0.0 + 0.0j
        for n in range(M + 1):
            K = self.component_matrix(n)
            total += complex((monomial_values(x, n) @ (K @ monomial_values(y[None, :], n)[0]))[0])
        return total

    def evaluate(self, x, y, truncation: int | None = None) -> dict:
        """Value plus diagnostics; ``method`` is "series" or "closed-form"."""
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=complex).reshape(-1)
        if x.size != self.dim or y.size != self.dim:
            raise ConfigurationError("x and y must have the context dimension")
        if truncation is not None:
            M = truncation
            r = float(np.linalg.norm(x) * np.linalg.norm(y))
            tail = tail_bound(r, M, self.growth(x, y))
        else:
            M, tail = self.degree_needed(x, y)
        if tail > self.tol and truncation is None:
            if self.closed_form:
                k = float(self.ctx.k_values[0])
                return {"value": complex(rank_one_kernel(k, complex(x[0] * y[0]))),
                        "method": "closed-form", "truncation": None, "tail_bound": 0.0}
            suggestion = M
            r = float(np.linalg.norm(x) * np.linalg.norm(y))
            while tail_bound(r, suggestion, self.growth(x, y)) > self.tol and suggestion < 10 * M + 100:
                suggestion += 1
            raise TruncationError(
                f"|x||y| = {r:.3g} exceeds the radius of truncation {self.truncation} "
                f"(tail bound {tail:.2e}); raise the truncation to about {suggestion}", suggestion)
        return {"value": self.series(x, y, M), "method": "series", "truncation": M, "tail_bound": tail}

    def E(self, x, y, truncation: int | None = None) -> complex:
        return self.evaluate(x, y, truncation)["value"]

    __call__ = E

    def E_real(self, x, y) -> float:
        return self.E(x, y).real

    def J(self, x, y, truncation: int | None = None) -> complex:
        """Group average of E_k(gx, y)."""
        x = np.asarray(x, dtype=float)
        vals = [self.E(g @ x, y, truncation) for g in self._group]
        return sum(vals) / len(vals)

    def E_many_x(self, X: np.ndarray, y) -> np.ndarray:
        """E_k(x_i, y) for the rows of X (vectorized; closed form in rank one when needed)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=complex).reshape(-1)
        if self.rank_one and self.closed_form:
            from .special import rank_one_kernel_imag, rank_one_kernel_real
            k = float(self.ctx.k_values[0])
            u = X[:, 0] * y[0]
            if y[0].imag == 0:
                return rank_one_kernel_real(k, u.real).astype(complex)
            if y[0].real == 0:
                return rank_one_kernel_imag(k, u.imag)
            return np.array([rank_one_kernel(k, z) for z in u])
        rmax = float(np.linalg.norm(X, axis=1).max() * np.linalg.norm(y))
        M = 1
        while tail_bound(rmax, M) > self.tol and M < self.truncation:
            M += 1
        if tail_bound(rmax, M) > self.tol:
            raise TruncationError(f"|x||y| up to {rmax:.3g} exceeds the truncation radius", M + 10)
        total = np.zeros(X.shape[0], dtype=complex)
        for n in range(M + 1):
            total += monomial_values(X, n) @ (self.component_matrix(n) @ monomial_values(y[None, :], n)[0])
        return total

    def radius(self) -> float:
        """Largest |x||y| (with growth e^{|x||y|}) the truncation certifies."""
        lo, hi = 0.0, 100.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if tail_bound(mid, self.truncation) <= self.tol:
                lo = mid
            else:
                hi = mid
        return lo


def _to_float(M):
    if isinstance(M, np.ndarray):
        return M
    return np.array([[float(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())])


# -- invariants of G ------------------------------------------------------

def invariant_generators(ctx: RootSystemContext, max_degree: int | None = None) -> list:
    """Nonzero Reynolds averages of monomials; they span the invariants up to ``max_degree``."""
    calc = DunklCalculus(ctx)
    if max_degree is None:
        max_degree = {"A": ctx.dim, "B": 2 * ctx.dim}.get(ctx.system.type_tag[:1], 0)
        if ctx.system.type_tag.startswith("I2"):
            max_degree = len(ctx.system.positive)
        max_degree = max(2, max_degree)
    out = []
    seen = set()
    for n in range(1, max_degree + 1):
        for nu in monomials(ctx.dim, n):
            m = calc.mono(nu)
            avg = MultiPoly.zero(ctx.dim)
            for g in ctx.group:
                avg = avg + m.act(g)
            avg = avg.scale(calc.one / len(ctx.group))
            if not ctx.exact:
                avg = avg.chop(1e-12)
            if avg.is_zero():
                continue
            key = avg.to_text() if ctx.exact else tuple(sorted((e, round(c, 9)) for e, c in avg.terms.items()))
            if key not in seen:
                seen.add(key)
                out.append(avg)
    r2 = MultiPoly.norm_squared(ctx.dim)
    if not ctx.exact:
        r2 = r2.to_float()
    if all(p != r2 for p in out):
        out.insert(0, r2)
    return out


# -- checks ---------------------------------------------------------------

def check_degree_shift(ev: KernelEvaluator, y, degree_cap=8, directions=None, tol=1e-9) -> Report:
    """T_xi E^(n)(., y) = <xi, y> E^(n-1)(., y)."""
    from .calculus import same
    rep = Report("kernel degree shift")
    dim = ev.dim
    one = ev.calc.one
    if directions is None:
        directions = [tuple(one if j == i else 0 * one for j in range(dim)) for i in range(dim)]
    yv = [to_exact(v) for v in y] if ev.V.exact else [float(v) for v in y]
    comps = [ev.component_poly(n, yv) for n in range(degree_cap + 1)]
    bad, worst = None, 0.0
    for n in range(1, degree_cap + 1):
        for xi in directions:
            lhs = ev.calc.T(xi, comps[n])
            c = sum((Q(a) if ev.V.exact else float(a)) * b for a, b in zip(xi, yv))
            ok, err = same(lhs, comps[n - 1].scale(c), ev.V.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = (n, xi)
    rep.add("T_xi E^(n)(.,y) = <xi,y> E^(n-1)(.,y)", "degree-shift identity", bad is None,
            "" if bad is None else f"witness n={bad[0]} xi={bad[1]}", error=worst)
    sym_bad = None
    for n in range(degree_cap + 1):
        ev.V.extend(n)
        M = ev.V.matrix(n)
        basis = monomials(dim, n)
        for i, mu in enumerate(basis):
            for j, nu in enumerate(basis):
                a = M[i, j] * math.prod(math.factorial(e) for e in mu)
                b = M[j, i] * math.prod(math.factorial(e) for e in nu)
                if (a != b) if ev.V.exact else abs(a - b) > tol * max(1.0, abs(a)):
                    sym_bad = sym_bad or (n, mu, nu)
    rep.add("E^(n)(x,y) = E^(n)(y,x)", "symmetry of homogeneous components", sym_bad is None,
            "" if sym_bad is None else f"witness n={sym_bad[0]}")
    return rep


def check_bessel_system(ev: KernelEvaluator, y, degree_cap=8, generators=None, tol=1e-9) -> Report:
    """p(T) S_M = p(y) S_{M - deg p} for homogeneous invariants p, S_M the partial sums."""
    from .calculus import same
    rep = Report("Bessel system on the truncated kernel")
    gens = invariant_generators(ev.ctx) if generators is None else generators
    yv = [to_exact(v) for v in y] if ev.V.exact else [float(v) for v in y]
    partial = [ev.partial_sum_poly(0, yv)]
    for n in range(1, degree_cap + 1):
        partial.append(partial[-1] + ev.component_poly(n, yv))
    bad, worst = None, 0.0
    for p in gens:
        for d, pd in p.graded_parts().items():
            if d == 0 or d > degree_cap:
                continue
            lhs = ev.calc.p_of_T(pd, partial[degree_cap])
            rhs = partial[degree_cap - d].scale(pd.eval(yv))
            ok, err = same(lhs, rhs, ev.V.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = p
    rep.add("p(T) E = p(y) E for invariant p", "Bessel system", bad is None,
            f"{len(gens)} invariant generators" + ("" if bad is None else f"; witness p={bad}"), error=worst)
    return rep


def check_symmetries(ev: KernelEvaluator, samples, tol=1e-10) -> Report:
    """E(x,y) = E(y,x); E(lx,y) = E(x,ly); E(gx,gy) = E(x,y); E(x, conj y) = conj E(x, y)."""
    rep = Report("kernel symmetries")
    worst = {"swap": 0.0, "scale": 0.0, "group": 0.0, "conj": 0.0}
    for x, y, lam in samples:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        exy = ev.E(x, y)
        worst["swap"] = max(worst["swap"], abs(exy - ev.E(y, x)) / max(1.0, abs(exy)))
        a, b = ev.E(lam * x, y), ev.E(x, lam * y)
        worst["scale"] = max(worst["scale"], abs(a - b) / max(1.0, abs(a)))
        for g in ev._group:
            v = ev.E(g @ x, g @ y)
            worst["group"] = max(worst["group"], abs(v - exy) / max(1.0, abs(exy)))
        z = (0.5 + 1j) * y
        v1, v2 = ev.E(x, np.conj(z)), np.conj(ev.E(x, z))
        worst["conj"] = max(worst["conj"], abs(v1 - v2) / max(1.0, abs(v1)))
    for key, name, ident in (("swap", "E(x,y) = E(y,x)", "symmetry"),
                             ("scale", "E(lx,y) = E(x,ly)", "homogeneity"),
                             ("group", "E(gx,gy) = E(x,y)", "G-invariance"),
                             ("conj", "E(x,conj y) = conj E(x,y)", "conjugation")):
        rep.add(name, ident, worst[key] <= tol, error=worst[key], tolerance=tol)
    return rep


def check_bound_and_positivity(ev: KernelEvaluator, pairs, tol=1e-9) -> Report:
    """|E_k(-ix, y)| <= 1 and E_k(x, y) > 0 for real x, y."""
    rep = Report("kernel bound and positivity")
    max_mod, min_val = 0.0, float("inf")
    wit_mod = wit_pos = None
    for x, y in pairs:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        mod = abs(ev.E(y, -1j * x))        # E(-ix, y) = E(y, -ix)
        if mod > max_mod:
            max_mod, wit_mod = mod, (x, y)
        val = ev.E(x, y).real
        if val < min_val:
            min_val, wit_pos = val, (x, y)
    rep.add("|E_k(-ix,y)| <= 1", "bound on the imaginary axis", max_mod <= 1 + tol,
            f"max {max_mod:.12f}" + ("" if max_mod <= 1 + tol else f" at {wit_mod}"))
    rep.add("E_k(x,y) > 0", "positivity of the kernel", min_val > 0,
            f"min {min_val:.3e}" + ("" if min_val > 0 else f" at {wit_pos}"))
    return rep


def check_rank_one_oracle(ev: KernelEvaluator, grid, tol=1e-10) -> Report:
    """Series E_k against e^{xy} 1F1(k, 2k+1, -2xy)."""
    if not ev.rank_one:
        raise ConfigurationError("the 1F1 oracle applies in rank one only")
    k = float(ev.ctx.k_values[0])
    rep = Report("rank-one kernel against 1F1")
    worst = 0.0
    for x in grid:
        for y in grid:
            got = ev.evaluate([x], [y])
            want = rank_one_kernel_1f1(k, x * y)
            worst = max(worst, abs(got["value"] - want) / max(1.0, abs(want)))
    rep.add("E_k(x,y) = e^(xy) 1F1(k,2k+1,-2xy)", "rank-one kernel", worst <= tol, error=worst, tolerance=tol)
    return rep


def check_J_rank_one(ev: KernelEvaluator, grid, tol=1e-10) -> Report:
    from .special import j_imag_scaled
    k = float(ev.ctx.k_values[0])
    rep = Report("rank-one k-Bessel function")
    worst = 0.0
    for x in grid:
        for y in grid:
            got = ev.J([x], [y])
            want = float(j_imag_scaled(k - 0.5, np.array([x * y]))[0] * math.exp(abs(x * y)))
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    rep.add("J_k(x,y) = j_(k-1/2)(ixy)", "rank-one Bessel function", worst <= tol, error=worst, tolerance=tol)
    return rep


def check_reproducing(ev: KernelEvaluator, rule, pairs, ck: float | None = None, rtol=1e-6) -> Report:
    """int E(x,y)E(x,z) e^{-|x|^2/2} w_k dx = c_k e^{(|y|^2+|z|^2)/2} E(y,z)."""
    rep = Report("reproducing identity")
    ck = rule.total() if ck is None else ck
    worst = 0.0
    for y, z in pairs:
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        lhs = rule.integrate(lambda X: (ev.E_many_x(X, y) * ev.E_many_x(X, z)).real)
        rhs = ck * math.exp((y @ y + z @ z) / 2) * ev.E(y, z).real
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    rep.add("int E(x,y)E(x,z) dmu = c_k e^((|y|^2+|z|^2)/2) E(y,z)", "reproducing identity",
            worst <= rtol, error=worst, tolerance=rtol)
    return rep
