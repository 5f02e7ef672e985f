"""Generalized Hermite polynomials.

phi_nu: Gram-Schmidt on the graded-lex monomials of each P_n under the Fischer
pairing, kept unnormalized with squared norms s_nu = [phi_nu, phi_nu]_k so
that everything stays rational.  H_nu = e^{-Delta_k/2} phi_nu.
Sums over an orthonormal basis become sums of terms divided by s_nu.
"""

from __future__ import annotations

import math

import flint
import numpy as np

from .calculus import DunklCalculus, same
from .errors import ConfigurationError, RegularityError
from .polynomial import MultiPoly, monomials
from .reports import Report
from .roots import RootSystemContext
from .scalars import Q, to_exact


class HermiteSystem:
    def __init__(self, ctx_or_calc, degree_cap: int):
        self.calc = ctx_or_calc if isinstance(ctx_or_calc, DunklCalculus) else DunklCalculus(ctx_or_calc)
        self.ctx: RootSystemContext = self.calc.ctx
        if any(v < 0 for v in self.ctx.k_values):
            raise ConfigurationError("Hermite systems are built for k >= 0 only")
        self.dim = self.ctx.dim
        self.exact = self.ctx.exact
        self.degree_cap = degree_cap
        self.labels = []      # exponent tuple of the leading monomial
        self.phi = {}
        self.norms = {}
        self.H = {}
        for n in range(degree_cap + 1):
            self._build_degree(n)

    def _build_degree(self, n):
        basis = monomials(self.dim, n)
        G = self.calc.gram_rows(n)
        d = len(basis)
        zero = Q(0) if self.exact else 0.0
        done = []   # (v, G v, s)
        for j in range(d):
            v = [zero] * d
            v[j] = self.calc.one
            for u, gu, su in done:
                c = gu[j]   # <m_j, u> by symmetry of G
                if c != 0:
                    f = c / su
                    v = [a - f * b for a, b in zip(v, u)]
            gv = [sum(G[r][c] * v[c] for c in range(d)) for r in range(d)]
            s = sum(a * b for a, b in zip(v, gv))
            if (s <= 0) if self.exact else s < 1e-300:
                raise RegularityError(f"nonpositive squared norm in degree {n}")
            done.append((v, gv, s))
        for (v, _, s), nu in zip(done, basis):
            phi = MultiPoly.from_vector(self.dim, n, v)
            self.labels.append(nu)
            self.phi[nu] = phi
            self.norms[nu] = s
            self.H[nu] = self.calc.exp_laplacian(phi, -1)

    def by_degree(self, n):
        return [nu for nu in self.labels if sum(nu) == n]

    def eval_H(self, nu, x):
        return self.H[nu].eval(x)

    # -- truncated sums ------------------------------------------------
    def generating_sum(self, x, y, cap=None):
        """sum_{|nu| <= cap} H_nu(x) phi_nu(y) / s_nu."""
        cap = self.degree_cap if cap is None else cap
        x, y = self._points(x), self._points(y)
        total = 0
        for nu in self.labels:
            if sum(nu) <= cap:
                total += self.H[nu].eval(x) * self.phi[nu].eval(y) / self.norms[nu]
        return float(total)

    def mehler_sum(self, x, y, r, cap=None):
        """sum_{|nu| <= cap} H_nu(x) H_nu(y) r^{|nu|} / s_nu."""
        cap = self.degree_cap if cap is None else cap
        x, y, r = self._points(x), self._points(y), self._scalar(r)
        total = 0
        for nu in self.labels:
            if sum(nu) <= cap:
                total += self.H[nu].eval(x) * self.H[nu].eval(y) * r ** sum(nu) / self.norms[nu]
        return float(total)

    def _scalar(self, v):
        if not self.exact:
            return _real(v)
        return to_exact(v)

    def _points(self, x):
        return tuple(self._scalar(v) for v in x)


def hermite_function(system: HermiteSystem, nu, X: np.ndarray) -> np.ndarray:
    """e^{-|x|^2/2} H_nu(sqrt 2 x): eigenfunction of the Dunkl transform with eigenvalue (-i)^{|nu|}."""
    X = np.atleast_2d(X)
    return np.exp(-0.5 * (X ** 2).sum(axis=1)) * system.H[nu].eval_many(math.sqrt(2.0) * X)


# -- checks ---------------------------------------------------------------

def check_orthogonality(sys: HermiteSystem, direct: bool = False) -> Report:
    """[phi_mu, phi_nu]_k = 0 for mu != nu and s_nu > 0."""
    rep = Report("orthogonality of the Hermite basis")
    calc = sys.calc
    pair = calc.pair_direct if direct else calc.pair
    bad, worst = None, 0.0
    for i, mu in enumerate(sys.labels):
        for nu in sys.labels[i:]:
            v = pair(sys.phi[mu], sys.phi[nu])
            if mu == nu:
                if not v > 0 or (sys.exact and v != sys.norms[nu]):
                    bad = bad or (mu, nu)
                continue
            err = abs(float(v)) / (math.sqrt(abs(float(sys.norms[mu] * sys.norms[nu]))))
            worst = max(worst, err)
            if (v != 0) if sys.exact else err > 1e-9:
                bad = bad or (mu, nu)
    rep.add("[phi_mu, phi_nu]_k = delta s_nu", "orthogonality of phi_nu", bad is None,
            "" if bad is None else f"witness {bad}", error=worst)
    return rep


def check_eigen_equations(sys: HermiteSystem, tol=1e-9) -> Report:
    """(-Delta_k + rho) H_nu = |nu| H_nu; parity; dimension of each eigenspace."""
    rep = Report("Hermite eigen-equations")
    calc = sys.calc
    bad, worst = None, 0.0
    for nu in sys.labels:
        h = sys.H[nu]
        lhs = h.euler() - calc.laplacian(h)
        ok, err = same(lhs, h.scale(sum(nu)), sys.exact, tol)
        worst = max(worst, err)
        if not ok and bad is None:
            bad = nu
    shift = sys.ctx.gamma + (Q(sys.dim) / 2 if sys.exact else sys.dim / 2)
    rep.add("(-Delta_k + rho) H_nu = |nu| H_nu", "Hermite eigen-equation", bad is None,
            f"h_nu eigenvalues |nu| + {shift}" + ("" if bad is None else f"; witness nu={bad}"), error=worst)
    minus = tuple(tuple(-1 if i == j else 0 for j in range(sys.dim)) for i in range(sys.dim))
    par_bad = None
    for nu in sys.labels:
        h = sys.H[nu]
        flipped = h.compose(minus if sys.exact else tuple(tuple(float(v) for v in r) for r in minus))
        ok, _ = same(flipped, h.scale((-1) ** sum(nu)), sys.exact, tol)
        if not ok and par_bad is None:
            par_bad = nu
    rep.add("H_nu(-x) = (-1)^|nu| H_nu(x)", "parity", par_bad is None,
            "" if par_bad is None else f"witness nu={par_bad}")
    dim_bad = None
    for n in range(sys.degree_cap + 1):
        labels = sys.by_degree(n)
        rows = [sys.H[nu].coefficient_vector(n) for nu in labels]
        if sys.exact:
            M = flint.fmpq_mat(len(rows), len(rows[0]),
                               [flint.fmpq(int(v.numerator), int(v.denominator)) for r in rows for v in map(Q, r)])
            rank = M.rank()
        else:
            rank = np.linalg.matrix_rank(np.array(rows, dtype=float))
        if rank != len(monomials(sys.dim, n)):
            dim_bad = dim_bad or n
    rep.add("dim span{H_nu : |nu| = n} = dim P_n", "eigenspace dimension", dim_bad is None,
            "" if dim_bad is None else f"degree {dim_bad}")
    return rep


def check_quadrature_orthogonality(sys: HermiteSystem, rule, rtol=1e-7) -> Report:
    """c_k^{-1} int H_mu H_nu w_k e^{-|x|^2/2} dx = delta s_nu."""
    rep = Report("Hermite orthogonality under m_k")
    ck = rule.total()
    vals = np.array([sys.H[nu].eval_many(rule.nodes) for nu in sys.labels])
    gram = (vals * rule.weights) @ vals.T / ck
    s = np.array([float(sys.norms[nu]) for nu in sys.labels])
    scale = np.sqrt(np.outer(s, s))
    err = np.abs(gram - np.diag(s)) / scale
    worst = float(err.max())
    rep.add("int H_mu H_nu dm_k = delta s_nu", "orthogonality of H_nu", worst <= rtol, error=worst, tolerance=rtol)
    return rep


def check_rodrigues(sys: HermiteSystem, rule, degree_cap=None, rtol=1e-7) -> Report:
    """Weak form: int H_nu p dm_k = int (phi_nu(T) p) dm_k for monomials p."""
    rep = Report("Rodrigues formula (weak form)")
    cap = sys.degree_cap if degree_cap is None else degree_cap
    ck = rule.total()
    calc = sys.calc
    worst = 0.0
    for nu in sys.labels:
        h = sys.H[nu].eval_many(rule.nodes)
        for n in range(cap + 1):
            for m in monomials(sys.dim, n):
                p = calc.mono(m)
                pv = p.eval_many(rule.nodes)
                lhs = np.dot(rule.weights, h * pv) / ck
                rhs = np.dot(rule.weights, calc.p_of_T(sys.phi[nu], p).eval_many(rule.nodes)) / ck
                scale = max(1.0, np.dot(rule.weights, np.abs(h * pv)) / ck)
                worst = max(worst, abs(lhs - rhs) / scale)
    rep.add("int H_nu p dm_k = int phi_nu(T)p dm_k", "Rodrigues formula", worst <= rtol, error=worst, tolerance=rtol)
    return rep


def mehler_closed_form(ev, x, y, r) -> float:
    """(1-r^2)^{-(gamma+N/2)} exp(-r^2 (|x|^2+|y|^2) / (2(1-r^2))) E_k(r x/(1-r^2), y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q = 1 - r * r
    expo = float(ev.ctx.gamma) + ev.dim / 2
    return float(q ** (-expo) * math.exp(-r * r * (x @ x + y @ y) / (2 * q)) * ev.E(r * x / q, y).real)


def _real(v) -> float:
    return float(Q(v)) if isinstance(v, str) else float(v)


def check_generating_and_mehler(sys: HermiteSystem, ev, samples, cap=None, tol=1e-8) -> Report:
    rep = Report("generating function and Mehler formula")
    cap = sys.degree_cap if cap is None else cap
    worst_g = worst_m = 0.0
    for x, y, r in samples:
        xa = np.asarray([_real(v) for v in x])
        ya = np.asarray([_real(v) for v in y])
        gen = sys.generating_sum(x, y, cap)
        want = math.exp(-0.5 * ya @ ya) * ev.E(xa, ya).real
        worst_g = max(worst_g, abs(gen - want) / max(1.0, abs(want)))
        meh = sys.mehler_sum(x, y, r, cap)
        want = mehler_closed_form(ev, xa, ya, _real(r))
        worst_m = max(worst_m, abs(meh - want) / max(1.0, abs(want)))
    rep.add("e^(-|y|^2/2) E_k(x,y) = sum H_nu(x) phi_nu(y)/s_nu", "generating function",
            worst_g <= tol, error=worst_g, tolerance=tol)
    rep.add("sum H_nu(x) H_nu(y) r^|nu| / s_nu = Mehler kernel", "Mehler formula",
            worst_m <= tol, error=worst_m, tolerance=tol)
    return rep


def check_transform_eigenfunctions(sys: HermiteSystem, plan, xis, max_degree=6, tol=1e-6) -> Report:
    """Dunkl transform of e^{-|x|^2/2} H_nu(sqrt 2 x) equals (-i)^{|nu|} times itself."""
    rep = Report("Hermite functions under the Dunkl transform")
    worst = 0.0
    xis = np.atleast_2d(np.asarray(xis, dtype=float).reshape(len(xis), -1))
    for nu in sys.labels:
        if sum(nu) > max_degree:
            continue
        got = plan.transform_many(lambda X, nu=nu: hermite_function(sys, nu, X), xis)
        want = (-1j) ** sum(nu) * hermite_function(sys, nu, xis)
        scale = max(1.0, float(np.abs(want).max()))
        worst = max(worst, float(np.abs(got - want).max()) / scale)
    rep.add("transform of h_nu = (-i)^|nu| h_nu", "Hermite functions as eigenfunctions",
            worst <= tol, error=worst, tolerance=tol)
    return rep


def laguerre_oracle(k, n: int, x):
    """L_n^{(k-1/2)}(x^2/2), exact for rational k and x."""
    alpha = Q(k) - Q(1) / 2
    X = Q(x) ** 2 / 2
    total = Q(0)
    for j in range(n + 1):
        # binom(n + alpha, n - j) (-X)^j / j!
        num = Q(1)
        for t in range(n - j):
            num *= alpha + j + 1 + t
        total += num / math.factorial(n - j) * (-X) ** j / math.factorial(j)
    return total


def check_laguerre(sys: HermiteSystem, points=("1/3", "2", "-5/7")) -> Report:
    """Rank one: H_{2n}(x) is a constant multiple of L_n^{(k-1/2)}(x^2/2)."""
    rep = Report("rank-one Laguerre connection")
    if sys.dim != 1 or not sys.exact:
        raise ConfigurationError("Laguerre connection is checked for exact rank one")
    k = sys.ctx.k_values[0]
    bad = None
    for n in range(sys.degree_cap // 2 + 1):
        h = sys.H[(2 * n,)]
        ratios = {h.eval((Q(p),)) / laguerre_oracle(k, n, Q(p)) for p in points}
        if len(ratios) != 1:
            bad = bad if bad is not None else n
    rep.add("H_2n proportional to L_n^(k-1/2)(x^2/2)", "Laguerre connection", bad is None,
            "" if bad is None else f"witness n={bad}")
    return rep


def check_classical(sys: HermiteSystem, points=("1/3", "2", "-5/7")) -> Report:
    """k = 0 in rank one: H_n is the probabilists' Hermite polynomial He_n up to scale."""
    rep = Report("classical Hermite limit")
    bad = None
    for n in range(sys.degree_cap + 1):
        ratios = set()
        for p in points:
            x = Q(p)
            a, b = Q(1), x   # He_0, He_1
            for m in range(1, n):
                a, b = b, x * b - m * a
            he = a if n == 0 else b
            ratios.add(sys.H[(n,)].eval((x,)) / he if he != 0 else None)
        if len(ratios) != 1 or None in ratios:
            bad = bad if bad is not None else n
    rep.add("H_n proportional to He_n at k = 0", "classical Hermite", bad is None,
            "" if bad is None else f"witness n={bad}")
    return rep
