"""Sparse multivariate polynomials over exact rationals (or floats).

A polynomial is a dict from exponent tuples to coefficients.  Monomials are
ordered graded-lexicographically: higher total degree first, then
lexicographically with ``x1`` largest (``x1^2 > x1 x2 > x2^2``).  That order
drives text output, basis enumeration and Gram-Schmidt downstream.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .errors import ConfigurationError, PreconditionError
from .scalars import MPQ_TYPE, Q, fmt, is_exact

FLOAT_REMAINDER_TOL = 1e-9


@lru_cache(maxsize=None)
def monomials(dim: int, degree: int) -> tuple:
    """All exponent tuples of total ``degree`` in ``dim`` variables, graded-lex descending."""
    if degree < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(dim), degree):
        exp = [0] * dim
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(dim: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(dim, degree))}


def grlex_key(exp: tuple):
    return (sum(exp), exp)


def _unit(dim, i):
    e = [0] * dim
    e[i] = 1
    return tuple(e)


class MultiPoly:
    """Immutable sparse polynomial in ``dim`` variables."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms=None, *, _trusted=False):
        self.dim = dim
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != dim:
                    raise ConfigurationError(f"exponent {exp} does not match dim {dim}")
                if c != 0:
                    clean[exp] = clean.get(exp, 0) + c
            self.terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim):
        return cls(dim, {}, _trusted=True)

    @classmethod
    def constant(cls, dim, c):
        return cls(dim, {(0,) * dim: c} if c != 0 else {}, _trusted=True)

    @classmethod
    def one(cls, dim):
        return cls.constant(dim, Q(1))

    @classmethod
    def variable(cls, dim, i, coef=None):
        return cls(dim, {_unit(dim, i): Q(1) if coef is None else coef}, _trusted=True)

    @classmethod
    def monomial(cls, exp, coef=None):
        exp = tuple(exp)
        return cls(len(exp), {exp: Q(1) if coef is None else coef}, _trusted=True)

    @classmethod
    def linear_form(cls, coeffs):
        """The polynomial x -> <coeffs, x>."""
        dim = len(coeffs)
        return cls(dim, {_unit(dim, i): c for i, c in enumerate(coeffs) if c != 0}, _trusted=True)

    @classmethod
    def norm_squared(cls, dim):
        return cls(dim, {tuple(2 if j == i else 0 for j in range(dim)): Q(1) for i in range(dim)},
                   _trusted=True)

    # -- basic queries ----------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def homogeneous_part(self, n: int) -> MultiPoly:
        return MultiPoly(self.dim, {e: c for e, c in self.terms.items() if sum(e) == n}, _trusted=True)

    def graded_parts(self) -> dict:
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {n: MultiPoly(self.dim, t, _trusted=True) for n, t in sorted(parts.items())}

    def is_homogeneous(self, n=None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (n is None or degs == {n})

    def coefficient_vector(self, n: int) -> list:
        """Coefficients of the degree-n slice in the graded-lex monomial basis."""
        return [self.terms.get(m, 0) for m in monomials(self.dim, n)]

    @classmethod
    def from_vector(cls, dim, n, vector):
        return cls(dim, {m: c for m, c in zip(monomials(dim, n), vector) if c != 0}, _trusted=True)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.dim != self.dim:
            raise ConfigurationError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.dim, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MultiPoly(self.dim, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.dim, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if c == 0:
            return MultiPoly.zero(self.dim)
        return MultiPoly(self.dim, {e: c * v for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.dim, {e: c for e, c in out.items() if c != 0}, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = MultiPoly.one(self.dim) if self.is_exact else MultiPoly.constant(self.dim, 1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.dim == other.dim and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def max_abs_coefficient(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def is_close(self, other, tol=1e-9) -> bool:
        return (self - other).max_abs_coefficient() <= tol

    def to_float(self) -> MultiPoly:
        return MultiPoly(self.dim, {e: float(c) for e, c in self.terms.items()}, _trusted=True)

    def chop(self, tol=1e-14) -> MultiPoly:
        return MultiPoly(self.dim, {e: c for e, c in self.terms.items() if abs(c) > tol}, _trusted=True)

    # -- evaluation -------------------------------------------------------
    def eval(self, x):
        """Evaluate at a point.  Exact coefficients stay exact for exact x."""
        x = tuple(x)
        if len(x) != self.dim:
            raise ConfigurationError(f"point of length {len(x)} for a polynomial in {self.dim} variables")
        exact_point = all(is_exact(v) for v in x)
        total = Q(0) if exact_point and self.is_exact else 0.0
        for exp, c in self.terms.items():
            if not exact_point and isinstance(c, MPQ_TYPE):
                c = float(c)
            term = c
            for xi, e in zip(x, exp):
                if e:
                    term = term * xi ** e
            total = total + term
        return total

    __call__ = eval

    def eval_many(self, points) -> np.ndarray:
        """Vectorized float/complex evaluation at an (m, dim) array of points."""
        pts = np.asarray(points)
        if pts.ndim == 1:
            pts = pts[:, None]
        dtype = np.result_type(pts.dtype, np.float64)
        out = np.zeros(pts.shape[0], dtype=dtype)
        if not self.terms:
            return out
        maxdeg = [max(e[i] for e in self.terms) for i in range(self.dim)]
        powers = []
        for i in range(self.dim):
            col = pts[:, i].astype(dtype)
            table = np.ones((maxdeg[i] + 1, pts.shape[0]), dtype=dtype)
            for d in range(1, maxdeg[i] + 1):
                table[d] = table[d - 1] * col
            powers.append(table)
        for exp, c in self.terms.items():
            term = np.full(pts.shape[0], float(c), dtype=dtype)
            for i, e in enumerate(exp):
                if e:
                    term = term * powers[i][e]
            out += term
        return out

    # -- calculus ---------------------------------------------------------
    def partial_i(self, i: int) -> MultiPoly:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = out.get(ne, 0) + e[i] * c
        return MultiPoly(self.dim, out, _trusted=True)

    def partial(self, xi) -> MultiPoly:
        """Directional derivative along ``xi``."""
        out = MultiPoly.zero(self.dim)
        for i, a in enumerate(xi):
            if a != 0:
                out = out + self.partial_i(i).scale(a)
        return out

    def gradient(self) -> list:
        return [self.partial_i(i) for i in range(self.dim)]

    def euler(self) -> MultiPoly:
        """sum_i x_i d_i p: multiplies each homogeneous slice by its degree."""
        return MultiPoly(self.dim, {e: sum(e) * c for e, c in self.terms.items() if sum(e)}, _trusted=True)

    # -- linear substitutions --------------------------------------------
    def compose(self, matrix) -> MultiPoly:
        """x -> p(M x) for a square matrix M given as rows."""
        rows = [tuple(r) for r in matrix]
        if len(rows) != self.dim:
            raise ConfigurationError("matrix size does not match polynomial dimension")
        monomial_map = []
        for r in rows:
            nz = [(j, v) for j, v in enumerate(r) if v != 0]
            if len(nz) != 1:
                monomial_map = None
                break
            monomial_map.append(nz[0])
        if monomial_map is not None:
            out = {}
            for e, c in self.terms.items():
                ne = [0] * self.dim
                coef = c
                for i, ei in enumerate(e):
                    if ei:
                        j, v = monomial_map[i]
                        ne[j] += ei
                        coef = coef * v ** ei
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + coef
            return MultiPoly(self.dim, {e: c for e, c in out.items() if c != 0}, _trusted=True)
        forms = [MultiPoly.linear_form(r) for r in rows]
        power_cache = {}

        def power(i, e):
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = forms[i] ** e
            return power_cache[key]

        out = MultiPoly.zero(self.dim)
        for e, c in self.terms.items():
            term = MultiPoly.constant(self.dim, c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * power(i, ei)
            out = out + term
        return out

    def act(self, g) -> MultiPoly:
        """Group action (g.p)(x) = p(g^{-1} x); ``g`` is an orthogonal matrix or GroupElement."""
        matrix = getattr(g, "matrix", g)
        inv = [tuple(matrix[j][i] for j in range(len(matrix))) for i in range(len(matrix))]
        return self.compose(inv)

    def divide_by_linear(self, alpha, tol=FLOAT_REMAINDER_TOL) -> MultiPoly:
        """Exact quotient q with <alpha, x> q = p.

        Synthetic division with respect to the variable where ``alpha`` has
        its largest coefficient; a non-zero remainder raises PreconditionError.
        """
        alpha = tuple(alpha)
        if len(alpha) != self.dim:
            raise ConfigurationError("linear form dimension mismatch")
        v = max(range(self.dim), key=lambda j: abs(alpha[j]))
        av = alpha[v]
        if av == 0:
            raise PreconditionError("cannot divide by the zero linear form")
        others = [(j, a) for j, a in enumerate(alpha) if a != 0 and j != v]
        rem = dict(self.terms)
        quot = {}
        top = max((e[v] for e in rem), default=0)
        # clearing level lev only creates terms at level lev - 1
        for lev in range(top, 0, -1):
            for e in [e for e in rem if e[v] == lev]:
                c = rem.pop(e)
                if c == 0:
                    continue
                t = e[:v] + (e[v] - 1,) + e[v + 1:]
                qc = c / av
                quot[t] = quot.get(t, 0) + qc
                for j, a in others:
                    ne = t[:j] + (t[j] + 1,) + t[j + 1:]
                    rem[ne] = rem.get(ne, 0) - qc * a
        leftover = {e: c for e, c in rem.items() if c != 0}
        if leftover:
            if any(isinstance(c, MPQ_TYPE) or isinstance(c, int) for c in leftover.values()):
                raise PreconditionError("polynomial does not vanish on the hyperplane <alpha,x> = 0")
            scale = max(1.0, self.max_abs_coefficient())
            if max(abs(c) for c in leftover.values()) > tol * scale:
                raise PreconditionError("polynomial does not vanish on the hyperplane <alpha,x> = 0")
        return MultiPoly(self.dim, {e: c for e, c in quot.items() if c != 0}, _trusted=True)

    # -- serialization ----------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            mag = -c if neg else c
            mono = " ".join(f"x{j + 1}" + (f"^{p}" if p > 1 else "") for j, p in enumerate(e) if p)
            body = fmt(mag) + (" " + mono if mono else "")
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.dim}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "terms": [{"exp": list(e), "coef": fmt(c)} for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data, dim=None) -> MultiPoly:
        terms = data["terms"]
        dim = data.get("dim", dim if dim is not None else (len(terms[0]["exp"]) if terms else None))
        if dim is None:
            raise ConfigurationError("cannot infer dimension of an empty polynomial")
        out = {}
        for t in terms:
            e = tuple(t["exp"])
            out[e] = out.get(e, 0) + Q(t["coef"])
        return cls(dim, out)

    @classmethod
    def from_text(cls, text: str, dim: int | None = None) -> MultiPoly:
        return parse_poly(text, dim)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?(?:\.\d+)?)|(?P<var>x(?P<idx>\d+)(?:\^(?P<pow>\d+))?)"
                    r"|(?P<op>[+\-*]))")


def parse_poly(text: str, dim: int | None = None) -> MultiPoly:
    """Parse ``3/2 x1^2 x3 - 1 x2`` style text.  Also accepts ``*`` between factors."""
    pos = 0
    terms = []
    sign = 1
    current = None
    text = text.strip()
    if not text:
        raise ConfigurationError("empty polynomial text")
    max_index = 0

    def flush():
        if current is not None:
            terms.append(current)

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigurationError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        if m.group("op") in ("+", "-"):
            if current is not None:
                flush()
                current = None
                sign = 1
            if m.group("op") == "-":
                sign = -sign
        elif m.group("op") == "*":
            continue
        elif m.group("num") is not None:
            if current is None:
                current = [Q(sign), {}]
            current[0] = current[0] * Q(m.group("num"))
        else:
            if current is None:
                current = [Q(sign), {}]
            idx = int(m.group("idx"))
            if idx < 1:
                raise ConfigurationError("variables are numbered from x1")
            max_index = max(max_index, idx)
            current[1][idx] = current[1].get(idx, 0) + int(m.group("pow") or 1)
    flush()
    if not terms:
        raise ConfigurationError(f"no terms in {text!r}")
    if dim is None:
        dim = max(max_index, 1)
    elif max_index > dim:
        raise ConfigurationError(f"variable x{max_index} exceeds dimension {dim}")
    out = {}
    for coef, powers in terms:
        e = tuple(powers.get(i + 1, 0) for i in range(dim))
        out[e] = out.get(e, 0) + coef
    return MultiPoly(dim, out)
