"""Dunkl operators acting on polynomials.

    T_xi p = d_xi p + sum_{a in R+} k(a) <a,xi> (p - p o s_a) / <a,x>

The difference quotient is scale invariant in the stored root, so roots need
not be rescaled to squared length 2.  Everything is cached per monomial:
T_i(x^nu), Delta_k(x^nu) and the matrices of T_i : P_n -> P_{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import flint
import numpy as np

from .errors import ConfigurationError
from .linalg import from_flint
from .polynomial import MultiPoly, monomial_index, monomials
from .reports import Report
from .roots import RootSystemContext
from .scalars import Q


def _add_into(acc: dict, poly: MultiPoly, c):
    for e, v in poly.terms.items():
        acc[e] = acc.get(e, 0) + c * v


def _clean(dim, acc: dict) -> MultiPoly:
    return MultiPoly(dim, {e: c for e, c in acc.items() if c != 0}, _trusted=True)


class DunklCalculus:
    """Operator layer for one root system context."""

    def __init__(self, ctx: RootSystemContext):
        self.ctx = ctx
        self.dim = ctx.dim
        self.exact = ctx.exact
        self.one = Q(1) if self.exact else 1.0
        self._refl = []
        for a, k in ctx.positive_k:
            sigma = a.reflection_matrix()
            if not self.exact:
                sigma = tuple(tuple(float(v) for v in r) for r in sigma)
            self._refl.append((a, k, sigma))
        self._pull = [dict() for _ in self._refl]   # per root: exp -> x^nu o sigma
        self._rho = [dict() for _ in self._refl]    # per root: exp -> (m - m o sigma)/<a,x>
        self._T = {}
        self._lap = {}
        self._tmat = {}
        self._gram = {0: self._const_gram()}

    def _const_gram(self):
        if self.exact:
            return flint.fmpq_mat(1, 1, [1])
        return np.ones((1, 1))

    # -- coercion ---------------------------------------------------------
    def coerce(self, p: MultiPoly) -> MultiPoly:
        if p.dim != self.dim:
            raise ConfigurationError(f"polynomial in {p.dim} variables, context has dimension {self.dim}")
        if self.exact:
            if not p.is_exact:
                raise ConfigurationError("float polynomial passed to an exact context")
            return p
        return p.to_float()

    def mono(self, exp) -> MultiPoly:
        return MultiPoly.monomial(exp, self.one)

    # -- reflection pieces ------------------------------------------------
    def pullback(self, idx: int, exp: tuple) -> MultiPoly:
        """x^nu o sigma_a, built recursively from lower monomials."""
        cache = self._pull[idx]
        hit = cache.get(exp)
        if hit is not None:
            return hit
        if sum(exp) == 0:
            out = MultiPoly.constant(self.dim, self.one)
        else:
            j = next(i for i, e in enumerate(exp) if e)
            lower = exp[:j] + (exp[j] - 1,) + exp[j + 1:]
            row = self._refl[idx][2][j]
            out = self.pullback(idx, lower) * MultiPoly.linear_form(row)
        cache[exp] = out
        return out

    def rho(self, idx: int, exp: tuple) -> MultiPoly:
        """(x^nu - x^nu o sigma_a) / <a,x>."""
        cache = self._rho[idx]
        hit = cache.get(exp)
        if hit is None:
            diff = self.mono(exp) - self.pullback(idx, exp)
            hit = diff.divide_by_linear(self._refl[idx][0].coords)
            cache[exp] = hit
        return hit

    def reflect_poly(self, idx: int, p: MultiPoly) -> MultiPoly:
        acc = {}
        for e, c in p.terms.items():
            _add_into(acc, self.pullback(idx, e), c)
        return _clean(self.dim, acc)

    # -- Dunkl operators --------------------------------------------------
    def T_mono(self, i: int, exp: tuple) -> MultiPoly:
        key = (i, exp)
        hit = self._T.get(key)
        if hit is not None:
            return hit
        acc = {}
        if exp[i]:
            lower = exp[:i] + (exp[i] - 1,) + exp[i + 1:]
            acc[lower] = exp[i] * self.one
        for idx, (a, k, _) in enumerate(self._refl):
            c = k * a.coords[i]
            if c != 0:
                _add_into(acc, self.rho(idx, exp), c)
        hit = _clean(self.dim, acc)
        self._T[key] = hit
        return hit

    def T_i(self, i: int, p: MultiPoly) -> MultiPoly:
        acc = {}
        for e, c in p.terms.items():
            _add_into(acc, self.T_mono(i, e), c)
        return _clean(self.dim, acc)

    def T(self, xi, p: MultiPoly) -> MultiPoly:
        """Dunkl operator in direction ``xi``."""
        p = self.coerce(p)
        if len(xi) != self.dim:
            raise ConfigurationError("direction has wrong dimension")
        acc = {}
        for i, a in enumerate(xi):
            if a != 0:
                a = Q(a) if self.exact else float(a)
                _add_into(acc, self.T_i(i, p), a)
        return _clean(self.dim, acc)

    def laplacian_mono(self, exp: tuple) -> MultiPoly:
        hit = self._lap.get(exp)
        if hit is None:
            acc = {}
            for i in range(self.dim):
                _add_into(acc, self.T_i(i, self.T_mono(i, exp)), self.one)
            hit = _clean(self.dim, acc)
            self._lap[exp] = hit
        return hit

    def laplacian(self, p: MultiPoly) -> MultiPoly:
        """Delta_k = sum_i T_i^2."""
        p = self.coerce(p)
        acc = {}
        for e, c in p.terms.items():
            _add_into(acc, self.laplacian_mono(e), c)
        return _clean(self.dim, acc)

    def laplacian_formula(self, p: MultiPoly) -> MultiPoly:
        """Delta p + 2 sum k(a) delta_a p, with the scale-invariant delta_a."""
        p = self.coerce(p)
        out = MultiPoly.zero(self.dim)
        for i in range(self.dim):
            out = out + p.partial_i(i).partial_i(i)
        for idx, (a, k, _) in enumerate(self._refl):
            if k == 0:
                continue
            out = out + self.delta_alpha(idx, p).scale(2 * k)
        return out

    def delta_alpha(self, idx: int, p: MultiPoly) -> MultiPoly:
        # <grad p, a>/<a,x> - (|a|^2/2)(p - p o s_a)/<a,x>^2
        a = self._refl[idx][0]
        half = a.norm2 / 2
        rho = MultiPoly.zero(self.dim)
        for e, c in p.terms.items():
            rho = rho + self.rho(idx, e).scale(c)
        numerator = p.partial(a.coords) - rho.scale(half)
        return numerator.divide_by_linear(a.coords)

    def p_of_T(self, p: MultiPoly, q: MultiPoly) -> MultiPoly:
        """Apply p(T) to q: x_i -> T_i, coordinates in index order."""
        p, q = self.coerce(p), self.coerce(q)
        acc = {}
        for e, c in p.terms.items():
            r = q
            for i, n in enumerate(e):
                for _ in range(n):
                    r = self.T_i(i, r)
                    if r.is_zero():
                        break
            _add_into(acc, r, c)
        return _clean(self.dim, acc)

    def exp_laplacian(self, p: MultiPoly, sign=-1) -> MultiPoly:
        """e^{sign Delta_k / 2} p, a terminating series."""
        p = self.coerce(p)
        half = (Q(sign) / 2) if self.exact else sign / 2.0
        out = p
        term = p
        j = 0
        while True:
            j += 1
            term = self.laplacian(term)
            if term.is_zero():
                return out
            term = term.scale(half / j)
            out = out + term

    def euler(self, p: MultiPoly) -> MultiPoly:
        return self.coerce(p).euler()

    # -- matrices and the Fischer pairing ---------------------------------
    def T_matrix(self, i: int, n: int):
        """Matrix of T_i : P_n -> P_{n-1} in the graded-lex bases."""
        key = (i, n)
        hit = self._tmat.get(key)
        if hit is not None:
            return hit
        rows_idx = monomial_index(self.dim, n - 1)
        cols = monomials(self.dim, n)
        if self.exact:
            M = flint.fmpq_mat(len(rows_idx), len(cols))
            for j, m in enumerate(cols):
                for e, c in self.T_mono(i, m).terms.items():
                    M[rows_idx[e], j] = flint.fmpq(int(c.numerator), int(c.denominator))
        else:
            M = np.zeros((len(rows_idx), len(cols)))
            for j, m in enumerate(cols):
                for e, c in self.T_mono(i, m).terms.items():
                    M[rows_idx[e], j] = c
        self._tmat[key] = M
        return M

    def gram(self, n: int):
        """G_n[mu, nu] = (T^mu x^nu)(0) for |mu| = |nu| = n."""
        hit = self._gram.get(n)
        if hit is not None:
            return hit
        prev = self.gram(n - 1)
        products = [prev * self.T_matrix(i, n) if self.exact else prev @ self.T_matrix(i, n)
                    for i in range(self.dim)]
        lower = monomial_index(self.dim, n - 1)
        basis = monomials(self.dim, n)
        d = len(basis)
        G = flint.fmpq_mat(d, d) if self.exact else np.zeros((d, d))
        for r, mu in enumerate(basis):
            j = next(i for i, e in enumerate(mu) if e)
            src = lower[mu[:j] + (mu[j] - 1,) + mu[j + 1:]]
            P = products[j]
            for c in range(d):
                G[r, c] = P[src, c]
        self._gram[n] = G
        return G

    def gram_rows(self, n: int) -> list:
        G = self.gram(n)
        return from_flint(G) if self.exact else G.tolist()

    def pair(self, p: MultiPoly, q: MultiPoly):
        """Fischer pairing [p, q]_k = (p(T) q)(0)."""
        p, q = self.coerce(p), self.coerce(q)
        pp, qq = p.graded_parts(), q.graded_parts()
        total = Q(0) if self.exact else 0.0
        for n, pn in pp.items():
            qn = qq.get(n)
            if qn is None:
                continue
            G = self.gram(n)
            idx = monomial_index(self.dim, n)
            for e1, c1 in pn.terms.items():
                r = idx[e1]
                for e2, c2 in qn.terms.items():
                    g = G[r, idx[e2]]
                    if self.exact:
                        g = Q(int(g.p)) / int(g.q)
                    total += c1 * c2 * g
        return total

    def pair_direct(self, p: MultiPoly, q: MultiPoly):
        """[p, q]_k evaluated straight from the definition (slower, used as a check)."""
        r = self.p_of_T(p, q)
        return r.coefficient((0,) * self.dim)

    # -- operator expressions ---------------------------------------------
    def op_T(self, xi):
        return OperatorExpr("T", self, (tuple(xi),))

    def op_laplacian(self):
        return OperatorExpr("DeltaK", self)

    def op_p_of_T(self, p):
        return OperatorExpr("PofT", self, (p,))

    def op_exp(self, sign=-1):
        return OperatorExpr("ExpHalfDeltaK", self, (sign,))

    def op_euler(self):
        return OperatorExpr("Euler", self)

    def op_multiply(self, p):
        return OperatorExpr("MultiplyBy", self, (p,))

    def op_group(self, g):
        return OperatorExpr("GroupAct", self, (g,))

    def op_identity(self):
        return OperatorExpr("Scale", self, (self.one,))


@dataclass(frozen=True)
class OperatorExpr:
    """Composable linear operator on polynomials."""

    kind: str
    calc: DunklCalculus
    args: tuple = ()

    def __call__(self, p: MultiPoly) -> MultiPoly:
        c = self.calc
        kind = self.kind
        if kind == "T":
            return c.T(self.args[0], p)
        if kind == "DeltaK":
            return c.laplacian(p)
        if kind == "PofT":
            return c.p_of_T(self.args[0], p)
        if kind == "ExpHalfDeltaK":
            return c.exp_laplacian(p, self.args[0])
        if kind == "Euler":
            return c.euler(p)
        if kind == "MultiplyBy":
            return c.coerce(self.args[0]) * c.coerce(p)
        if kind == "GroupAct":
            return c.coerce(p).act(self.args[0])
        if kind == "Scale":
            return c.coerce(p).scale(self.args[0])
        if kind == "Compose":
            for op in reversed(self.args):
                p = op(p)
            return p
        if kind == "Sum":
            out = MultiPoly.zero(c.dim)
            for op in self.args:
                out = out + op(p)
            return out
        raise ConfigurationError(f"unknown operator kind {kind}")

    def __matmul__(self, other: OperatorExpr) -> OperatorExpr:
        return OperatorExpr("Compose", self.calc, (self, other))

    def __add__(self, other: OperatorExpr) -> OperatorExpr:
        return OperatorExpr("Sum", self.calc, (self, other))

    def __sub__(self, other: OperatorExpr) -> OperatorExpr:
        return self + other.scaled(-1)

    def scaled(self, c) -> OperatorExpr:
        c = Q(c) if self.calc.exact else float(c)
        return OperatorExpr("Compose", self.calc, (OperatorExpr("Scale", self.calc, (c,)), self))

    def commutator(self, other: OperatorExpr) -> OperatorExpr:
        return (self @ other) - (other @ self)


def parse_operator(calc: DunklCalculus, text: str) -> OperatorExpr:
    """Parse ``T(e1)``, ``T(1,1/2,0)``, ``Delta``, ``exp(-Delta/2)``, ``exp(Delta/2)``, ``rho``."""
    t = text.replace(" ", "")
    low = t.lower()
    if low.startswith("t(") and t.endswith(")"):
        inner = t[2:-1]
        if inner.lower().startswith("e") and inner[1:].isdigit():
            i = int(inner[1:]) - 1
            if not 0 <= i < calc.dim:
                raise ConfigurationError(f"direction {inner} out of range")
            xi = [0] * calc.dim
            xi[i] = 1
        else:
            xi = [Q(v) for v in inner.split(",")]
        return calc.op_T(xi)
    if low in ("delta", "deltak", "delta_k", "laplacian"):
        return calc.op_laplacian()
    if low in ("exp(-delta/2)", "exp(-deltak/2)"):
        return calc.op_exp(-1)
    if low in ("exp(delta/2)", "exp(deltak/2)"):
        return calc.op_exp(1)
    if low in ("rho", "euler"):
        return calc.op_euler()
    raise ConfigurationError(f"unknown operator {text!r}")


# -- identity checks ------------------------------------------------------

def same(p: MultiPoly, q: MultiPoly, exact: bool, tol=1e-9) -> tuple:
    """(equal?, error) with exact equality or a relative coefficient tolerance."""
    if exact:
        return p == q, 0.0 if p == q else (p - q).max_abs_coefficient()
    scale = max(1.0, p.max_abs_coefficient(), q.max_abs_coefficient())
    err = (p - q).max_abs_coefficient() / scale
    return err <= tol, err


def all_monomials(dim, degree_cap):
    for n in range(degree_cap + 1):
        yield from monomials(dim, n)


def check_commutativity(calc: DunklCalculus, directions, degree_cap=6, tol=1e-9) -> Report:
    """T_xi T_eta = T_eta T_xi on every monomial up to ``degree_cap``."""
    rep = Report("commutativity of Dunkl operators")
    worst, bad = 0.0, None
    for xi, eta in directions:
        for m in all_monomials(calc.dim, degree_cap):
            p = calc.mono(m)
            ok, err = same(calc.T(xi, calc.T(eta, p)), calc.T(eta, calc.T(xi, p)), calc.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = (xi, eta, m)
    detail = "" if bad is None else f"witness xi={bad[0]} eta={bad[1]} monomial={bad[2]}"
    rep.add("T_xi T_eta = T_eta T_xi", "commutativity theorem", bad is None, detail,
            error=worst, tolerance=0.0 if calc.exact else tol)
    return rep


def check_laplacian_formula(calc: DunklCalculus, degree_cap=6, tol=1e-9) -> Report:
    rep = Report("Dunkl Laplacian representation")
    bad, worst = None, 0.0
    for m in all_monomials(calc.dim, degree_cap):
        p = calc.mono(m)
        ok, err = same(calc.laplacian(p), calc.laplacian_formula(p), calc.exact, tol)
        worst = max(worst, err)
        if not ok and bad is None:
            bad = m
    rep.add("sum T_i^2 = Delta + 2 sum k delta_a", "Laplacian representation", bad is None,
            "" if bad is None else f"witness monomial={bad}", error=worst)
    return rep


def _lie(a, b, p):
    return a(b(p)) - b(a(p))


def check_sl2(calc: DunklCalculus, degree_cap=6, tol=1e-9) -> Report:
    """[H,E] = 2E, [H,F] = -2F, [E,F] = H with E = |x|^2/2, F = -Delta_k/2, H = rho + gamma + N/2."""
    ctx = calc.ctx
    half = Q(1) / 2 if calc.exact else 0.5
    r2 = MultiPoly.norm_squared(calc.dim)
    r2 = r2 if calc.exact else r2.to_float()
    shift = ctx.gamma + half * calc.dim

    def E(p):
        return (r2 * p).scale(half)

    def F(p):
        return calc.laplacian(p).scale(-half)

    def H(p):
        return p.euler() + p.scale(shift)

    rep = Report("sl(2) relations")
    for name, lhs, rhs in (
        ("[H,E] = 2E", lambda p: _lie(H, E, p), lambda p: E(p).scale(2)),
        ("[H,F] = -2F", lambda p: _lie(H, F, p), lambda p: F(p).scale(-2)),
        ("[E,F] = H", lambda p: _lie(E, F, p), H),
    ):
        bad, worst = None, 0.0
        for m in all_monomials(calc.dim, degree_cap):
            p = calc.mono(m)
            ok, err = same(lhs(p), rhs(p), calc.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = m
        rep.add(name, "sl(2) commutation relations", bad is None,
                "" if bad is None else f"witness monomial={bad}", error=worst)
    return rep


def check_commutator_xi_delta(calc: DunklCalculus, degree_cap=6, tol=1e-9) -> Report:
    """[x_i, Delta_k/2] = -T_i."""
    rep = Report("commutator of x_i with the Dunkl Laplacian")
    half = Q(1) / 2 if calc.exact else 0.5
    for i in range(calc.dim):
        xi_poly = MultiPoly.variable(calc.dim, i, calc.one)
        bad, worst = None, 0.0
        for m in all_monomials(calc.dim, degree_cap):
            p = calc.mono(m)
            lhs = (xi_poly * calc.laplacian(p) - calc.laplacian(xi_poly * p)).scale(half)
            ok, err = same(lhs, -calc.T_i(i, p), calc.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = m
        rep.add(f"[x{i + 1}, Delta_k/2] = -T_{i + 1}", "commutator with the Dunkl Laplacian",
                bad is None, "" if bad is None else f"witness monomial={bad}", error=worst)
    return rep


def check_equivariance(calc: DunklCalculus, samples, tol=1e-9) -> Report:
    """g T_xi g^{-1} p = T_{g xi} p for (g, xi, p) samples."""
    rep = Report("G-equivariance of Dunkl operators")
    bad, worst = None, 0.0
    for g, xi, p in samples:
        p = calc.coerce(p)
        lhs = calc.T(xi, p.act(g.inverse())).act(g)
        rhs = calc.T(g.apply(xi), p)
        ok, err = same(lhs, rhs, calc.exact, tol)
        worst = max(worst, err)
        if not ok and bad is None:
            bad = (g, xi, p)
    rep.add("g T_xi g^-1 = T_(g xi)", "equivariance", bad is None,
            "" if bad is None else f"witness xi={bad[1]} p={bad[2]}", error=worst)
    return rep


def check_delta_invariance(calc: DunklCalculus, group, polys, tol=1e-9) -> Report:
    rep = Report("G-invariance of the Dunkl Laplacian")
    bad, worst = None, 0.0
    for g in group:
        for p in polys:
            p = calc.coerce(p)
            ok, err = same(calc.laplacian(p).act(g), calc.laplacian(p.act(g)), calc.exact, tol)
            worst = max(worst, err)
            if not ok and bad is None:
                bad = (g, p)
    rep.add("g Delta_k = Delta_k g", "G-invariance of Delta_k", bad is None,
            "" if bad is None else f"witness p={bad[1]}", error=worst)
    return rep


def check_product_rule(calc: DunklCalculus, invariants, polys, directions, tol=1e-9) -> Report:
    """T_xi(f g) = T_xi(f) g + f T_xi(g) for G-invariant f."""
    rep = Report("product rule with invariant factor")
    bad, worst = None, 0.0
    for f in invariants:
        f = calc.coerce(f)
        for g in polys:
            g = calc.coerce(g)
            for xi in directions:
                lhs = calc.T(xi, f * g)
                rhs = calc.T(xi, f) * g + f * calc.T(xi, g)
                ok, err = same(lhs, rhs, calc.exact, tol)
                worst = max(worst, err)
                if not ok and bad is None:
                    bad = (f, g, xi)
    rep.add("T(fg) = T(f)g + fT(g), f invariant", "product rule", bad is None,
            "" if bad is None else f"witness f={bad[0]} g={bad[1]}", error=worst)
    return rep


def check_pairing(calc: DunklCalculus, pairs, group=(), tol=1e-9) -> Report:
    """Symmetry, adjointness [x_i p, q] = [p, T_i q], degree orthogonality, G-invariance."""
    rep = Report("Fischer pairing")

    def eq(a, b):
        if calc.exact:
            return a == b, float(abs(a - b))
        err = abs(a - b) / max(1.0, abs(a), abs(b))
        return err <= tol, err

    sym = adj = inv = orth = None
    worst = 0.0
    for p, q in pairs:
        p, q = calc.coerce(p), calc.coerce(q)
        pq = calc.pair(p, q)
        ok, err = eq(pq, calc.pair(q, p))
        worst = max(worst, err)
        if not ok and sym is None:
            sym = (p, q)
        for i in range(calc.dim):
            xi = MultiPoly.variable(calc.dim, i, calc.one)
            ok, err = eq(calc.pair(xi * p, q), calc.pair(p, calc.T_i(i, q)))
            worst = max(worst, err)
            if not ok and adj is None:
                adj = (p, q, i)
        for g in group:
            ok, err = eq(calc.pair(p.act(g), q.act(g)), pq)
            worst = max(worst, err)
            if not ok and inv is None:
                inv = (p, q)
        if p.is_homogeneous() and q.is_homogeneous() and p.degree != q.degree:
            if pq != 0:
                orth = (p, q)
    rep.add("[p,q]_k = [q,p]_k", "symmetry of the Fischer pairing", sym is None,
            "" if sym is None else f"witness p={sym[0]} q={sym[1]}")
    rep.add("[x_i p, q]_k = [p, T_i q]_k", "adjointness of x_i and T_i", adj is None,
            "" if adj is None else f"witness p={adj[0]} q={adj[1]} i={adj[2] + 1}")
    rep.add("[gp, gq]_k = [p,q]_k", "G-invariance of the Fischer pairing", inv is None,
            "" if inv is None else f"witness p={inv[0]} q={inv[1]}")
    rep.add("[P_n, P_m]_k = 0 for n != m", "degree orthogonality", orth is None,
            "" if orth is None else f"witness p={orth[0]} q={orth[1]}", error=worst)
    return rep


def check_positive_minimum(calc: DunklCalculus, points, multipliers, tol=1e-12) -> Report:
    """Delta_k p(x0) >= 0 when p >= 0 attains p(x0) = 0.

    Each test polynomial is q^2 |x - x0|^2 with x0 regular.
    """
    rep = Report("positive minimum principle")
    worst = float("inf")
    witness = None
    for x0 in points:
        shift = MultiPoly.zero(calc.dim)
        for i, c in enumerate(x0):
            lin = MultiPoly.variable(calc.dim, i, calc.one) - (c if calc.exact else float(c))
            shift = shift + lin * lin
        for q in multipliers:
            q = calc.coerce(q)
            p = q * q * shift
            value = calc.laplacian(p).eval(tuple(x0) if calc.exact else tuple(float(c) for c in x0))
            v = float(value)
            if v < worst:
                worst = v
                witness = (x0, q)
    ok = worst >= -tol
    rep.add("Delta_k p(x0) >= 0 at zeros of p >= 0", "positive minimum principle", ok,
            f"min value {worst:.3e}" + ("" if ok else f" at x0={witness[0]} q={witness[1]}"))
    return rep
