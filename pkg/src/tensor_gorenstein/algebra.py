"""
Finite-dimensional associative algebras given by structure constants.

Two ways in: :func:`build_from_quiver` for bound quiver algebras with
monomial relations, and :func:`build_from_structure_constants` for raw
multiplication tables.  Paths compose right to left: the product ``q*p``
means "traverse p, then q".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from .errors import (BadIdempotents, BadUnit, InfiniteDimensional, MalformedRelation,
                     NotAssociative, NotBasic, RadicalRequired, RadicalUnavailable)
from .linalg import (Matrix, hstack, image_basis, kernel_basis, left_inverse, quotient_map,
                     rank)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    """Vertices are ``0 .. vertex_count-1``; labels ``e1, e2, ...`` are 1-based."""

    vertex_count: int
    arrows: tuple = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        object.__setattr__(self, "arrows", tuple(
            a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows))
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in self.arrows:
            if not (0 <= a.source < self.vertex_count and 0 <= a.target < self.vertex_count):
                raise ValueError(f"arrow {a.name} has an endpoint out of range")

    def arrow(self, name):
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def reversed(self):
        return Quiver(self.vertex_count,
                      tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Presentation:
    """A quiver with monomial relations.

    A relation is a tuple of arrow names written right to left, so
    ``("a2", "a1")`` is the path a1 followed by a2.
    """

    quiver: Quiver
    relations: tuple = ()

    def __post_init__(self):
        rels = tuple(tuple(r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        names = {a.name for a in self.quiver.arrows}
        for r in rels:
            if len(r) < 2:
                raise MalformedRelation(f"relation {'*'.join(r) or '<empty>'} has length < 2")
            for x in r:
                if x not in names:
                    raise MalformedRelation(f"unknown arrow {x!r} in relation {'*'.join(r)}")
            for later, earlier in zip(r, r[1:]):
                if self.quiver.arrow(earlier).target != self.quiver.arrow(later).source:
                    raise MalformedRelation(f"relation {'*'.join(r)} is not a composable path")

    def opposite(self):
        return Presentation(self.quiver.reversed(), tuple(tuple(reversed(r)) for r in self.relations))


class FdAlgebra:
    """A finite-dimensional algebra with a chosen basis ``b_0 .. b_{n-1}``.

    ``table[i, j, k]`` is the coefficient of ``b_k`` in ``b_i * b_j``.
    Element vectors are 1-d numpy arrays in the field's dtype.  Instances are
    treated as immutable once validated.
    """

    def __init__(self, field, table, labels, unit, idempotents, radical=None,
                 origin=None, validate=True):
        self.field = field
        self.table = np.array(table, dtype=field.dtype)
        self.table.flags.writeable = False
        self.dim = self.table.shape[0]
        self.labels = tuple(labels)
        self.unit = field.array(unit)
        self.idempotents = tuple(field.array(e) for e in idempotents)
        self.origin = origin
        self._radical = radical
        self._opposite = None
        if validate:
            self._validate()

    # -- basics ------------------------------------------------------------
    def __repr__(self):
        kind = "quiver" if self.origin is not None else "raw"
        return f"<FdAlgebra dim={self.dim} over {self.field} ({kind})>"

    @property
    def vertex_count(self):
        return len(self.idempotents)

    def basis_vector(self, i):
        v = self.field.zeros(self.dim)
        v[i] = self.field.element(1)
        return v

    def index(self, label):
        return self.labels.index(label)

    def element(self, coeffs):
        """Vector from a ``{label: coefficient}`` mapping."""
        v = self.field.zeros(self.dim)
        for lab, c in coeffs.items():
            v[self.index(lab)] = self.field.reduce(v[self.index(lab)] + self.field.element(c))
        return v

    def mul(self, x, y):
        f = self.field
        return f.tensordot(f.tensordot(x, self.table, ([0], [0])), y, ([0], [0]))

    @cached_property
    def left_stack(self):
        """``left_stack[i]`` is the matrix of ``x -> b_i x``."""
        s = np.ascontiguousarray(self.table.transpose(0, 2, 1))
        s.flags.writeable = False
        return s

    @cached_property
    def right_stack(self):
        """``right_stack[j]`` is the matrix of ``x -> x b_j``."""
        s = np.ascontiguousarray(self.table.transpose(1, 2, 0))
        s.flags.writeable = False
        return s

    def left_mult(self, x):
        return Matrix(self.field, self.field.tensordot(x, self.left_stack, ([0], [0])))

    def right_mult(self, x):
        return Matrix(self.field, self.field.tensordot(x, self.right_stack, ([0], [0])))

    def same_as(self, other):
        return self is other or (
            isinstance(other, FdAlgebra) and self.field == other.field
            and self.dim == other.dim and np.array_equal(self.table, other.table)
            and np.array_equal(self.unit, other.unit)
            and len(self.idempotents) == len(other.idempotents)
            and all(np.array_equal(a, b) for a, b in zip(self.idempotents, other.idempotents)))

    # -- validation --------------------------------------------------------
    def _validate(self):
        f, c, n = self.field, self.table, self.dim
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        if len(self.labels) != n:
            raise ValueError("one label per basis element is required")
        lhs = f.tensordot(c, c, ([2], [0]))                       # (b_i b_j) b_k
        rhs = f.tensordot(c, c, ([1], [2])).transpose(0, 2, 3, 1)  # b_i (b_j b_k)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k, _ = bad[0]
            raise NotAssociative(f"({self.labels[i]}*{self.labels[j]})*{self.labels[k]} != "
                                 f"{self.labels[i]}*({self.labels[j]}*{self.labels[k]})")
        u = Matrix(f, f.eye(n))
        if not (self.left_mult(self.unit) == u and self.right_mult(self.unit) == u):
            raise BadUnit("unit is not a two-sided identity")
        if not self.idempotents:
            raise BadIdempotents("at least one idempotent is required")
        total = f.zeros(n)
        for a, e in enumerate(self.idempotents):
            total = f.reduce(total + e)
            for b, e2 in enumerate(self.idempotents):
                prod = self.mul(e, e2)
                want = e if a == b else f.zeros(n)
                if not np.array_equal(prod, want):
                    raise BadIdempotents(f"idempotents {a} and {b} are not orthogonal idempotents")
        if not np.array_equal(total, self.unit):
            raise BadIdempotents("idempotents do not sum to the unit")
        if self._radical is not None:
            self._validate_radical(self._radical)

    def _span_products(self, x_cols, y_cols):
        """Column basis of span{x y : x in X, y in Y}."""
        f = self.field
        if x_cols.cols == 0 or y_cols.cols == 0:
            return Matrix.zeros(f, self.dim, 0)
        prods = []
        for i in range(x_cols.cols):
            lm = self.left_mult(x_cols.a[:, i])
            prods.append(lm @ y_cols)
        return image_basis(hstack(f, prods))

    def _validate_radical(self, j):
        f, n = self.field, self.dim
        if j.rows != n:
            raise ValueError("radical basis vectors have the wrong length")
        if rank(j) != j.cols:
            raise ValueError("radical basis vectors are dependent")
        whole = Matrix(f, f.eye(n))
        for side in (self._span_products(whole, j), self._span_products(j, whole)):
            if rank(hstack(f, [j, side])) != j.cols:
                raise ValueError("supplied radical is not a two-sided ideal")
        power = j
        for _ in range(n + 1):
            if power.cols == 0:
                break
            power = self._span_products(power, j)
        if power.cols:
            raise ValueError("supplied radical is not nilpotent")
        if not self._quotient_is_semisimple(j):
            raise ValueError("algebra modulo the supplied radical is not semisimple")

    def _quotient_is_semisimple(self, j):
        # a nondegenerate trace form on A/J rules out a nonzero radical in any characteristic
        f, n = self.field, self.dim
        if j.cols == n:
            return n == 0
        q, s, _ = quotient_map(j, n, f)
        m = s.cols
        mats = []
        for i in range(m):
            lm = q @ self.left_mult(s.a[:, i]) @ s
            mats.append(lm)
        form = f.zeros((m, m))
        for a in range(m):
            for b in range(m):
                prod = f.dot(mats[a].a, mats[b].a)
                form[a, b] = f.reduce(np.trace(prod)) if f.p is not None else np.trace(prod)
        return rank(Matrix(f, form)) == m

    # -- radical -----------------------------------------------------------
    @property
    def has_radical(self):
        return self._radical is not None

    def radical(self):
        """Basis of the Jacobson radical, as the columns of a matrix."""
        if self._radical is None:
            raise RadicalUnavailable("no radical available for this algebra over "
                                     f"{self.field}; supply one explicitly")
        return self._radical

    # -- opposite ----------------------------------------------------------
    def opposite(self):
        if self._opposite is None:
            origin = self.origin.opposite() if self.origin is not None else None
            op = FdAlgebra(self.field, self.table.transpose(1, 0, 2), self.labels, self.unit,
                           self.idempotents, radical=self._radical, origin=origin, validate=False)
            op._opposite = self
            self._opposite = op
        return self._opposite

    # -- structure used by module computations ------------------------------
    @cached_property
    def semisimple_split(self):
        """Left inverse of ``[e_1 .. e_n | J]``; requires a basic algebra."""
        f = self.field
        j = self.radical()
        idem = Matrix(f, np.stack(self.idempotents, axis=1))
        full = hstack(f, [idem, j])
        if full.cols != self.dim or rank(full) != self.dim:
            raise NotBasic("the algebra modulo its radical is not spanned by the vertex "
                           "idempotents (simple modules are not one-dimensional per idempotent)")
        return left_inverse(full)

    def top_coefficients(self, x):
        """Scalars ``l_v`` with ``x = sum l_v e_v  (mod J)``."""
        coords = self.field.dot(self.semisimple_split.a, x.reshape(-1, 1)).reshape(-1)
        return coords[:self.vertex_count]

    @cached_property
    def projective_bases(self):
        """For each vertex v, columns spanning ``A e_v`` (pivot columns of right mult by e_v)."""
        return tuple(image_basis(self.right_mult(e)) for e in self.idempotents)

    @cached_property
    def generators(self):
        """Arrow lifts: list of ``(vector, source, target)`` spanning J modulo J^2.

        Together with the vertex idempotents they generate the algebra.
        """
        f = self.field
        if self.origin is not None:
            out = []
            for a in self.origin.quiver.arrows:
                out.append((self.basis_vector(self.index(a.name)), a.source, a.target))
            return tuple(out)
        j = self.radical()
        j2 = self._span_products(j, j)
        out = []
        for t, et in enumerate(self.idempotents):
            for s, es in enumerate(self.idempotents):
                sandwich = self.left_mult(et) @ self.right_mult(es)
                v = image_basis(sandwich @ j)
                w = image_basis(sandwich @ j2) if j2.cols else Matrix.zeros(f, self.dim, 0)
                chosen = w
                for i in range(v.cols):
                    cand = hstack(f, [chosen, v[:, i:i + 1]])
                    if rank(cand) > chosen.cols:
                        chosen = cand
                        out.append((np.array(v.a[:, i]), s, t))
        return tuple(out)

    @cached_property
    def word_basis(self):
        """A basis of words in the generators, plus the relations they satisfy.

        Returns ``(words, inverse, relations)`` where ``words`` lists tuples
        ``(word, source, target)`` with ``word`` a tuple of generator indices
        (written right to left, empty for the idempotent at ``source``);
        ``inverse`` converts basis coordinates to word coordinates; and
        ``relations[(g, w)]`` are the word coordinates of ``gen_g * word_w``.
        """
        f = self.field
        gens = self.generators
        vecs = []
        words = []
        for v, e in enumerate(self.idempotents):
            words.append(((), v, v))
            vecs.append(e)
        frontier = list(range(len(words)))
        span = Matrix(f, np.stack(vecs, axis=1))
        while frontier:
            nxt = []
            for wi in frontier:
                word, src, tgt = words[wi]
                for g, (gv, gs, gt) in enumerate(gens):
                    if gs != tgt:
                        continue
                    prod = self.mul(gv, vecs[wi])
                    cand = hstack(f, [span, Matrix(f, prod.reshape(-1, 1))])
                    if rank(cand) > span.cols:
                        span = cand
                        words.append(((g,) + word, src, gt))
                        vecs.append(prod)
                        nxt.append(len(words) - 1)
            frontier = nxt
        if span.cols != self.dim:
            raise NotBasic("vertex idempotents and arrow lifts do not generate the algebra")
        to_words = left_inverse(span)
        relations = {}
        for wi, (word, src, tgt) in enumerate(words):
            for g, (gv, gs, gt) in enumerate(gens):
                if gs != tgt:
                    continue
                prod = self.mul(gv, vecs[wi])
                relations[(g, wi)] = f.dot(to_words.a, prod.reshape(-1, 1)).reshape(-1)
        return tuple(words), to_words, relations


# -- constructors -------------------------------------------------------------

def _relation_free_paths(pres):
    """All relation-free paths (right-to-left tuples), by length then discovery order."""
    q = pres.quiver
    rels = pres.relations
    maxlen = max([len(r) for r in rels], default=0)
    _check_finite(pres, max(2, maxlen))
    layer = [(a.name,) for a in q.arrows]
    out = []
    while layer:
        out.extend(layer)
        nxt = []
        for p in layer:
            tgt = q.arrow(p[0]).target
            for a in q.arrows:
                if a.source != tgt:
                    continue
                cand = (a.name,) + p
                if any(cand[:len(r)] == r for r in rels):
                    continue
                nxt.append(cand)
        layer = nxt
    return out


def _check_finite(pres, window):
    """Raise InfiniteDimensional if an infinite relation-free walk exists."""
    q = pres.quiver
    rels = pres.relations
    k = window - 1
    # states: relation-free paths of length k
    states = [(a.name,) for a in q.arrows]
    for _ in range(k - 1):
        nxt = []
        for p in states:
            tgt = q.arrow(p[0]).target
            for a in q.arrows:
                cand = (a.name,) + p
                if a.source == tgt and not any(cand[:len(r)] == r for r in rels):
                    nxt.append(cand)
        states = nxt
    g = nx.DiGraph()
    g.add_nodes_from(states)
    for s in states:
        tgt = q.arrow(s[0]).target
        for a in q.arrows:
            if a.source != tgt:
                continue
            cand = (a.name,) + s
            if any(cand[:len(r)] == r for r in rels):
                continue
            g.add_edge(s, cand[:k])
    if not nx.is_directed_acyclic_graph(g):
        cycle = nx.find_cycle(g)
        raise InfiniteDimensional(
            "relation-free cycle through " + ", ".join("*".join(s) for s, _ in cycle))


def build_from_quiver(pres, field):
    """The algebra kQ/I with basis the relation-free paths (idempotents first)."""
    q = pres.quiver
    n = q.vertex_count
    paths = _relation_free_paths(pres)
    labels = [f"e{v + 1}" for v in range(n)] + ["*".join(p) for p in paths]
    index = {p: n + i for i, p in enumerate(paths)}
    dim = n + len(paths)
    src = [v for v in range(n)] + [q.arrow(p[-1]).source for p in paths]
    tgt = [v for v in range(n)] + [q.arrow(p[0]).target for p in paths]
    words = [None] * n + paths
    one = field.element(1)
    table = field.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            # b_i * b_j : traverse b_j then b_i
            if src[i] != tgt[j]:
                continue
            if i < n:
                table[i, j, j] = one
            elif j < n:
                table[i, j, i] = one
            else:
                cat = words[i] + words[j]
                k = index.get(cat)
                if k is not None:
                    table[i, j, k] = one
    unit = field.zeros(dim)
    idem = []
    for v in range(n):
        unit[v] = one
        e = field.zeros(dim)
        e[v] = one
        idem.append(e)
    rad = field.zeros((dim, dim - n))
    for i in range(dim - n):
        rad[n + i, i] = one
    return FdAlgebra(field, table, labels, unit, idem, radical=Matrix(field, rad), origin=pres)


def _trace_radical(field, table):
    """Kernel of the trace form tr(L_x L_y); equals the radical in characteristic 0."""
    n = table.shape[0]
    left = table.transpose(0, 2, 1)
    form = field.zeros((n, n))
    for a in range(n):
        for b in range(n):
            form[a, b] = np.trace(field.dot(left[a], left[b]))
    return kernel_basis(Matrix(field, form))


def build_from_structure_constants(table, field, unit, idempotents=None, labels=None,
                                   radical=None, require_radical=True):
    """Validate a raw multiplication table and wrap it as an :class:`FdAlgebra`.

    ``table[i][j]`` is the coordinate vector of ``b_i * b_j``.  Over QQ the
    radical is computed from the trace form when not supplied; over GF(p) it
    must be supplied (``RadicalRequired``) unless ``require_radical`` is false.
    """
    tab = field.array(table)
    n = tab.shape[0]
    labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
    if idempotents is None:
        idempotents = [unit]
    rad = None
    if radical is not None:
        rad = Matrix(field, field.array(radical).reshape(-1, n).T) if len(radical) else \
            Matrix.zeros(field, n, 0)
    alg = FdAlgebra(field, tab, labels, unit, idempotents, radical=rad, origin=None)
    if rad is None:
        if field.is_rational:
            j = _trace_radical(field, alg.table)
            alg._validate_radical(j)
            alg._radical = j
        elif require_radical:
            raise RadicalRequired(f"a radical basis must be supplied for raw algebras over {field}")
    return alg


def opposite(a):
    return a.opposite()


def radical(a):
    return a.radical()


def product_algebra(field, n):
    """k x ... x k with n orthogonal idempotents (the semisimple basic algebra)."""
    table = field.zeros((n, n, n))
    for i in range(n):
        table[i, i, i] = field.element(1)
    return build_from_structure_constants(
        table, field, unit=[1] * n, idempotents=[[int(i == j) for j in range(n)] for i in range(n)],
        labels=[f"e{i + 1}" for i in range(n)], radical=[])


def tables_isomorphic_by_permutation(a, b):
    """A basis permutation ``perm`` with ``b.table[perm[i], perm[j], perm[k]] == a.table[i, j, k]``."""
    from itertools import permutations
    if a.dim != b.dim or a.field != b.field:
        return None
    n = a.dim
    for perm in permutations(range(n)):
        p = list(perm)
        if np.array_equal(b.table[np.ix_(p, p, p)], a.table):
            return perm
    return None
