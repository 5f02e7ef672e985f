"""Root systems, reflection groups generated by closure, multiplicity functions.

Crystallographic input (types A, B, custom rational roots) is handled with
exact rationals.  Roots are kept as the rational vectors given; the standard
normalization <alpha, alpha> = 2 enters only where the length matters (the
weight ``w_k`` and the Laplacian reflection terms), through ``Root.norm2``.
Dihedral groups I_2(n) use floats throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, ResourceError
from .scalars import MPQ_TYPE, Q, fmt, is_exact

DEFAULT_GROUP_CAP = 10**6
FLOAT_TOL = 1e-12
GENERIC_EPS = Q("1/10000")


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def _key(vec, exact):
    if exact:
        return tuple(vec)
    return tuple(round(float(v) * 1e7) for v in vec)


@dataclass(frozen=True)
class Root:
    coords: tuple

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coords)

    @property
    def norm2(self):
        return dot(self.coords, self.coords)

    def normalized(self) -> np.ndarray:
        """Float coordinates rescaled to squared length 2."""
        v = np.array([float(c) for c in self.coords])
        return v * math.sqrt(2.0 / float(self.norm2))

    def __neg__(self):
        return Root(tuple(-c for c in self.coords))

    def reflection_matrix(self):
        n2 = self.norm2
        a = self.coords
        return tuple(tuple((1 if i == j else 0) - 2 * a[i] * a[j] / n2 for j in range(self.dim))
                     for i in range(self.dim))

    def __str__(self):
        return "(" + ",".join(fmt(c) for c in self.coords) + ")"


def reflect(alpha: Root, x):
    """sigma_alpha(x) = x - 2 <alpha,x>/|alpha|^2 alpha."""
    a = alpha.coords
    n2 = alpha.norm2
    if n2 == 0:
        raise ConfigurationError("zero root")
    s = 2 * dot(a, x) / n2
    return tuple(xi - s * ai for xi, ai in zip(x, a))


class GroupElement:
    """Orthogonal matrix stored as a tuple of rows."""

    __slots__ = ("matrix", "word_length", "exact", "_key")

    def __init__(self, matrix, word_length=None):
        self.matrix = tuple(tuple(r) for r in matrix)
        self.word_length = word_length
        self.exact = all(is_exact(v) for r in self.matrix for v in r)
        self._key = _key([v for r in self.matrix for v in r], self.exact)

    @classmethod
    def identity(cls, n, exact=True):
        one, zero = (Q(1), Q(0)) if exact else (1.0, 0.0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), 0)

    @property
    def dim(self):
        return len(self.matrix)

    def __mul__(self, other: GroupElement) -> GroupElement:
        b = other.matrix
        n = self.dim
        rows = tuple(tuple(sum(self.matrix[i][l] * b[l][j] for l in range(n)) for j in range(n))
                     for i in range(n))
        return GroupElement(rows)

    def inverse(self) -> GroupElement:
        n = self.dim
        return GroupElement(tuple(tuple(self.matrix[j][i] for j in range(n)) for i in range(n)),
                            self.word_length)

    def apply(self, x):
        return tuple(dot(row, x) for row in self.matrix)

    __call__ = apply

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.matrix])

    def is_orthogonal(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                s = sum(self.matrix[l][i] * self.matrix[l][j] for l in range(n))
                target = 1 if i == j else 0
                if self.exact:
                    if s != target:
                        return False
                elif abs(s - target) > FLOAT_TOL:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.exact and other.exact:
            return self.matrix == other.matrix
        return all(abs(float(a) - float(b)) < 1e-9
                   for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "GroupElement(" + "; ".join(",".join(fmt(v) for v in r) for r in self.matrix) + ")"


@dataclass(frozen=True)
class RootSystem:
    roots: tuple
    positive: tuple
    rank: int
    type_tag: str
    generic_vector: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return self.roots[0].dim

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.roots)

    def find(self, vec):
        key = _key(vec, self.exact)
        return self._index.get(key)

    @cached_property
    def _index(self):
        return {_key(r.coords, self.exact): r for r in self.roots}

    def validate(self):
        """Reducedness, reflection invariance and the positive/negative split."""
        exact = self.exact
        for a in self.roots:
            if all(c == 0 for c in a.coords):
                raise ConfigurationError("zero vector in root system")
            if self.find((-a).coords) is None:
                raise ConfigurationError(f"root system not closed under negation at {a}")
            for b in self.roots:
                if b is a or b == a or b == -a:
                    continue
                if _proportional(a.coords, b.coords, exact):
                    raise ConfigurationError(f"root system is not reduced: {a} and {b}")
            for b in self.roots:
                if self.find(reflect(a, b.coords)) is None:
                    raise ConfigurationError(f"sigma_{a} does not preserve the root system")
        pos = set(self.positive)
        for a in self.roots:
            if (a in pos) == ((-a) in pos):
                raise ConfigurationError("positive subsystem does not split R")


def _proportional(a, b, exact):
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            d = a[i] * b[j] - a[j] * b[i]
            if (d != 0) if exact else (abs(d) > 1e-10):
                return False
    return True


def _rank(vectors, exact) -> int:
    if exact:
        import flint

        m = flint.fmpq_mat(len(vectors), len(vectors[0]),
                           [flint.fmpq(int(Q(v).numerator), int(Q(v).denominator))
                            for vec in vectors for v in vec])
        return m.rank()
    return int(np.linalg.matrix_rank(np.array([[float(v) for v in vec] for vec in vectors]), tol=1e-9))


def _make_system(root_vectors, type_tag) -> RootSystem:
    exact = all(is_exact(c) for v in root_vectors for c in v)
    if not root_vectors:
        raise ConfigurationError("empty root system")
    dim = len(root_vectors[0])
    if any(len(v) != dim for v in root_vectors):
        raise ConfigurationError("roots of different lengths")
    conv = (lambda c: Q(c)) if exact else float
    vecs = {}
    for v in root_vectors:
        for s in (1, -1):
            w = tuple(conv(s * c) for c in v)
            vecs.setdefault(_key(w, exact), w)
    roots = tuple(sorted((Root(v) for v in vecs.values()), key=lambda r: tuple(float(c) for c in r.coords)))
    if exact:
        u = tuple(1 + i * GENERIC_EPS for i in range(dim))
    else:
        u = tuple(1 + i * 1e-4 for i in range(dim))
    positive = []
    for r in roots:
        s = dot(r.coords, u)
        if (s == 0) if exact else abs(s) < FLOAT_TOL:
            raise ConfigurationError(f"generic vector is orthogonal to root {r}; positive system undefined")
        if s > 0:
            positive.append(r)
    rank = _rank([r.coords for r in roots], exact)
    system = RootSystem(roots, tuple(positive), rank, type_tag, u)
    system.validate()
    return system


def type_a(N: int) -> RootSystem:
    if N < 2:
        raise ConfigurationError("type A needs N >= 2")
    vecs = []
    for i in range(N):
        for j in range(i + 1, N):
            v = [0] * N
            v[i], v[j] = 1, -1
            vecs.append(v)
    return _make_system(vecs, "A")


def type_b(N: int) -> RootSystem:
    if N < 2:
        raise ConfigurationError("type B needs N >= 2")
    vecs = []
    for i in range(N):
        v = [0] * N
        v[i] = 1
        vecs.append(v)
        for j in range(i + 1, N):
            for s in (1, -1):
                w = [0] * N
                w[i], w[j] = 1, s
                vecs.append(w)
    return _make_system(vecs, "B")


def dihedral(n: int) -> RootSystem:
    if n < 3:
        raise ConfigurationError("dihedral I_2(n) needs n >= 3")
    vecs = []
    for j in range(n):
        theta = math.pi * j / n
        vecs.append([-math.sin(theta) * math.sqrt(2.0), math.cos(theta) * math.sqrt(2.0)])
    return _make_system(vecs, f"I2({n})")


def custom(root_vectors, type_tag="Custom") -> RootSystem:
    return _make_system([[Q(c) if isinstance(c, str) else c for c in v] for v in root_vectors], type_tag)


def generate_group(system: RootSystem, cap: int = DEFAULT_GROUP_CAP) -> list:
    """Closure of the reflections {sigma_alpha} under multiplication (BFS by word length)."""
    exact = system.exact
    n = system.dim
    gens = [GroupElement(r.reflection_matrix()) for r in system.positive]
    gen_arrays = [g.as_array() for g in gens]
    ident = GroupElement.identity(n, exact)

    def fingerprint(arr):
        return tuple(int(v) for v in np.rint(arr.ravel() * 1e7))

    seen = {fingerprint(ident.as_array()): ident}
    frontier = [ident]
    elements = [ident]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for g in frontier:
            ga = g.as_array()
            for gen, arr in zip(gens, gen_arrays):
                key = fingerprint(ga @ arr)
                if key in seen:
                    continue
                h = g * gen
                h.word_length = length
                seen[key] = h
                nxt.append(h)
                elements.append(h)
                if len(elements) > cap:
                    raise ResourceError(f"group closure exceeded cap {cap}")
        frontier = nxt
    if exact:
        # exact keys must agree with the float fingerprint used during BFS
        assert len({e._key for e in elements}) == len(elements)
    return elements


def root_orbits(system: RootSystem) -> list:
    """Orbits of R under G (closure under the generating reflections), sorted by their minimal root."""
    remaining = list(system.roots)
    orbits = []
    lex = lambda r: tuple(float(c) for c in r.coords)
    while remaining:
        start = remaining[0]
        orbit = {start}
        stack = [start]
        while stack:
            b = stack.pop()
            for a in system.positive:
                c = system.find(reflect(a, b.coords))
                if c not in orbit:
                    orbit.add(c)
                    stack.append(c)
        orbits.append(sorted(orbit, key=lex))
        remaining = [r for r in remaining if r not in orbit]
    orbits.sort(key=lambda o: lex(o[0]))
    return orbits


def _scalar(v, exact):
    if exact:
        return Q(v)
    return float(Q(v)) if isinstance(v, str) else float(v)


class MultiplicityFunction:
    """G-invariant k >= 0 on R, stored per orbit (orbit id = its lexicographically minimal root)."""

    def __init__(self, system: RootSystem, values, orbits=None):
        self.orbits = orbits if orbits is not None else root_orbits(system)
        self.orbit_ids = tuple(o[0] for o in self.orbits)
        self._lookup = {}
        for o in self.orbits:
            for r in o:
                self._lookup[r] = o[0]
        exact = system.exact
        if isinstance(values, dict):
            vals = {}
            for key, v in values.items():
                root = key if isinstance(key, Root) else system.find(key)
                if root is None:
                    raise ConfigurationError(f"{key} is not a root")
                oid = self._lookup[root]
                v = _scalar(v, exact)
                if oid in vals and vals[oid] != v:
                    raise ConfigurationError("multiplicity differs within one G-orbit")
                vals[oid] = v
            missing = [o for o in self.orbit_ids if o not in vals]
            if missing:
                raise ConfigurationError(f"no multiplicity given for orbit {missing[0]}")
        else:
            seq = list(values) if isinstance(values, (list, tuple)) else [values]
            if len(seq) == 1 and len(self.orbit_ids) > 1:
                seq = seq * len(self.orbit_ids)
            if len(seq) != len(self.orbit_ids):
                raise ConfigurationError(
                    f"{len(self.orbit_ids)} root orbit(s) need {len(self.orbit_ids)} multiplicities, got {len(seq)}")
            vals = {o: _scalar(v, exact) for o, v in zip(self.orbit_ids, seq)}
        for v in vals.values():
            if v < 0:
                raise ConfigurationError("multiplicity values must be nonnegative")
        self.values = vals

    @classmethod
    def from_roots(cls, system: RootSystem, assignment: dict):
        """Per-root assignment; rejected unless constant on each orbit."""
        mf = cls.__new__(cls)
        orbits = root_orbits(system)
        mf.orbits = orbits
        mf.orbit_ids = tuple(o[0] for o in orbits)
        mf._lookup = {r: o[0] for o in orbits for r in o}
        vals = {}
        for key, v in assignment.items():
            root = key if isinstance(key, Root) else system.find(key)
            if root is None:
                raise ConfigurationError(f"{key} is not a root")
            v = _scalar(v, system.exact)
            oid = mf._lookup[root]
            if oid in vals and vals[oid] != v:
                raise ConfigurationError("multiplicity differs within one G-orbit")
            vals[oid] = v
        if set(vals) != set(mf.orbit_ids):
            raise ConfigurationError("assignment does not cover every orbit")
        if any(v < 0 for v in vals.values()):
            raise ConfigurationError("multiplicity values must be nonnegative")
        mf.values = vals
        return mf

    def __call__(self, root: Root):
        return self.values[self._lookup[root]]

    def as_list(self) -> list:
        return [self.values[o] for o in self.orbit_ids]


class RootSystemContext:
    """Root system + generated group + multiplicity; immutable after construction."""

    def __init__(self, system: RootSystem, k=0, group=None, cap=DEFAULT_GROUP_CAP, orbits=None):
        self.system = system
        self.group = tuple(group) if group is not None else tuple(generate_group(system, cap))
        self.mult = k if isinstance(k, MultiplicityFunction) else MultiplicityFunction(system, k, orbits)
        zero = Q(0) if system.exact else 0.0
        self.gamma = sum((self.mult(a) for a in system.positive), zero)
        self.positive_k = tuple((a, self.mult(a)) for a in system.positive)

    def with_k(self, k) -> RootSystemContext:
        return RootSystemContext(self.system, k, group=self.group, orbits=self.mult.orbits)

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def exact(self) -> bool:
        return self.system.exact

    @property
    def order(self) -> int:
        return len(self.group)

    @property
    def k_values(self) -> list:
        return self.mult.as_list()

    def zero(self):
        return Q(0) if self.exact else 0.0

    def one(self):
        return Q(1) if self.exact else 1.0

    def weight(self, x) -> float:
        return weight_w_k(self, x)

    def weight_many(self, points) -> np.ndarray:
        """Vectorized w_k on an (m, N) float array."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        out = np.ones(pts.shape[0])
        for a, k in self.positive_k:
            if k == 0:
                continue
            s = pts @ np.array([float(c) for c in a.coords])
            out *= (2.0 * s * s / float(a.norm2)) ** float(k)
        return out

    def describe(self) -> dict:
        sysm = self.system
        chamber = [f"<{a}, x> > 0" for a in sysm.positive]
        return {
            "type": sysm.type_tag,
            "dim": sysm.dim,
            "rank": sysm.rank,
            "order": self.order,
            "roots": len(sysm.roots),
            "positive_roots": [str(a) for a in sysm.positive],
            "orbits": [{"id": str(o[0]), "size": len(o), "k": fmt(self.mult.values[o[0]])}
                       for o in self.mult.orbits],
            "gamma": fmt(self.gamma),
            "chamber": chamber,
        }


def weight_w_k(ctx: RootSystemContext, x) -> float:
    """prod_{alpha in R+} |<alpha,x>|^{2k(alpha)} with alpha normalized to length sqrt 2."""
    total = 1.0
    for a, k in ctx.positive_k:
        if k == 0:
            continue
        s = float(dot(a.coords, x))
        total *= (2.0 * s * s / float(a.norm2)) ** float(k)
    return total


def check_conjugation(g: GroupElement, alpha: Root, system: RootSystem | None = None) -> Root:
    """Return g(alpha), asserting g sigma_alpha g^{-1} = sigma_{g alpha} as matrices."""
    galpha = Root(g.apply(alpha.coords))
    lhs = g * GroupElement(alpha.reflection_matrix()) * g.inverse()
    rhs = GroupElement(galpha.reflection_matrix())
    if lhs != rhs:
        raise AssertionError(f"conjugation identity fails for {g} and {alpha}")
    if system is not None:
        found = system.find(galpha.coords)
        if found is None:
            raise AssertionError(f"g does not permute R: {galpha} is not a root")
        return found
    return galpha


def build_standard(type_tag: str, n: int, k=0, cap: int = DEFAULT_GROUP_CAP) -> RootSystemContext:
    """Standard systems: ``A`` (ambient dim N), ``B`` (N), ``I2``/``Dihedral`` (n), ``R1`` (rank one)."""
    tag = type_tag.strip().upper()
    if tag == "A":
        system = type_a(n)
    elif tag == "B":
        system = type_b(n)
    elif tag in ("I2", "DIHEDRAL", "D2", "I"):
        system = dihedral(n)
    elif tag in ("R1", "A1", "RANK1"):
        system = custom([[1]], "R1")
    else:
        raise ConfigurationError(f"unsupported root system type {type_tag!r}")
    return RootSystemContext(system, k, cap=cap)


def rank_one(k=0) -> RootSystemContext:
    """R = {+-sqrt 2} in R^1, G = {id, x -> -x}."""
    return build_standard("R1", 1, k)


def from_descriptor(data) -> RootSystemContext:
    """Custom system from {"roots": [[q,...]], "multiplicity": {"orbit_repr": q}}.

    Orbit representatives are any root of the orbit written "q1,q2,...".
    """
    if isinstance(data, str):
        data = json.loads(data)
    roots = [[Q(c) for c in r] for r in data["roots"]]
    system = custom(roots)
    mult = data.get("multiplicity", {})
    if isinstance(mult, dict):
        assignment = {}
        for key, v in mult.items():
            vec = tuple(Q(c) for c in key.strip("()[] ").split(","))
            assignment[vec] = v
        mf = MultiplicityFunction(system, assignment) if assignment else MultiplicityFunction(system, 0)
    else:
        mf = MultiplicityFunction(system, mult)
    return RootSystemContext(system, mf)
