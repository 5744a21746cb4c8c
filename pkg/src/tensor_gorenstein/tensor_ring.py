"""Bimodules, tensor products over a base algebra, and tensor rings of nilpotent bimodules.

Conventions: for a bimodule ``M`` and a module ``X``, a vector of the
k-tensor space ``M (x)_k X`` has coordinate ``i * dim X + k`` for
``m_i (x) x_k``.  ``M (x)_R X`` is the quotient by the balancing relations
``m r (x) x - m (x) r x``; its basis is the set of non-pivot coordinates, so
every quotient comes with an explicit projection ``Q`` and section ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import FdAlgebra
from .errors import (AlgebraMismatch, DimensionMismatch, FieldMismatch, NotAModule,
                     NotNilpotent, SolveFailed)
from .linalg import (Matrix, homology_dim, image_basis, is_invertible, left_inverse,
                     quotient_map, rank, solve)
from .modcat import LEFT, RIGHT, Module, ModuleHom, hom_basis, hom_dim, quotient

DEFAULT_NILPOTENCY_CAP = 16
# a k-tensor space beyond this size means the powers are not shrinking
MAX_TENSOR_DIM = 4096


class Bimodule:
    """Space with commuting actions: ``left[b]`` is ``m -> b m``, ``right[b]`` is ``m -> m b``."""

    def __init__(self, left_algebra, right_algebra, left, right, validate=True, label=None):
        if left_algebra.field != right_algebra.field:
            raise FieldMismatch("bimodule algebras live over different fields")
        f = left_algebra.field
        left = np.array(left, dtype=f.dtype)
        right = np.array(right, dtype=f.dtype)
        d = left.shape[1] if left.ndim == 3 else 0
        left = left.reshape(left_algebra.dim, d, d)
        right = right.reshape(right_algebra.dim, d, d)
        left.flags.writeable = False
        right.flags.writeable = False
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.left = left
        self.right = right
        self.dim = d
        self.label = label
        if validate:
            self._validate()

    def __repr__(self):
        name = f" {self.label}" if self.label else ""
        return f"<Bimodule{name} dim={self.dim}>"

    @property
    def field(self):
        return self.left_algebra.field

    def _validate(self):
        self.left_module(validate=True)
        self.right_module(validate=True)
        if self.dim == 0:
            return
        f = self.field
        lr = f.reduce(np.matmul(self.left[:, None], self.right[None, :]))
        rl = f.reduce(np.matmul(self.right[None, :], self.left[:, None]))
        if not np.array_equal(lr, rl):
            raise NotAModule("left and right actions do not commute")

    def left_module(self, validate=False):
        return Module(self.left_algebra, LEFT, self.left, validate=validate, label=self.label)

    def right_module(self, validate=False):
        return Module(self.right_algebra, RIGHT, self.right, validate=validate, label=self.label)

    def is_zero(self):
        return self.dim == 0

    def swapped(self):
        """The same space as a bimodule over the opposite algebras (sides exchanged)."""
        return Bimodule(self.right_algebra.opposite(), self.left_algebra.opposite(),
                        self.right, self.left, validate=False, label=self.label)


def regular_bimodule(a):
    return Bimodule(a, a, a.left_stack, a.right_stack, validate=False, label="R")


def zero_bimodule(a, b=None):
    b = a if b is None else b
    f = a.field
    return Bimodule(a, b, f.zeros((a.dim, 0, 0)), f.zeros((b.dim, 0, 0)), validate=False,
                    label="0")


def bimodule_sum(parts):
    """Direct sum of bimodules over the same pair of algebras."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty bimodule sum")
    la, ra = parts[0].left_algebra, parts[0].right_algebra
    for p in parts[1:]:
        if not (p.left_algebra.same_as(la) and p.right_algebra.same_as(ra)):
            raise AlgebraMismatch("summands live over different algebras")
    f = la.field
    n = sum(p.dim for p in parts)
    left = f.zeros((la.dim, n, n))
    right = f.zeros((ra.dim, n, n))
    o = 0
    for p in parts:
        left[:, o:o + p.dim, o:o + p.dim] = p.left
        right[:, o:o + p.dim, o:o + p.dim] = p.right
        o += p.dim
    return Bimodule(la, ra, left, right, validate=False)


def outer_tensor(p, q):
    """``p (x)_k q`` for a left module ``p`` and a right module ``q``."""
    if p.field != q.field:
        raise FieldMismatch("outer tensor of modules over different fields")
    if p.side != LEFT or q.side != RIGHT:
        raise AlgebraMismatch("outer_tensor expects a left module and a right module")
    f = p.field
    dp, dq = p.dim, q.dim
    if dp * dq == 0:
        return zero_bimodule(p.algebra, q.algebra)
    eye_q, eye_p = f.eye(dq), f.eye(dp)
    left = np.stack([f.reduce(np.kron(s, eye_q)) for s in p.stack])
    right = np.stack([f.reduce(np.kron(eye_p, s)) for s in q.stack])
    return Bimodule(p.algebra, q.algebra, left, right, validate=False,
                    label=f"{p.label or 'X'}(x){q.label or 'Y'}")


@dataclass
class TensorProduct:
    """``M (x)_R X`` with the projection ``quotient`` from and section ``section`` into ``M (x)_k X``."""

    result: object            # Module or Bimodule
    quotient: Matrix
    section: Matrix
    free: list


def _balancing_relations(m, x_stack, r):
    f = r.field
    dm, dx = m.dim, x_stack.shape[1]
    eye_m, eye_x = f.eye(dm), f.eye(dx)
    elems = list(r.idempotents) + [g for g, _, _ in r.generators]
    cols = []
    for e in elems:
        rm = f.tensordot(e, m.right, ([0], [0]))
        lx = f.tensordot(e, x_stack, ([0], [0]))
        cols.append(f.reduce(np.kron(rm, eye_x) - np.kron(eye_m, lx)))
    return Matrix(f, np.hstack(cols))


def _vertex_split_quotient(m, x_stack, r):
    """Quotient data for ``M (x)_R X`` computed through ``W = + M e_v (x)_k e_v X``.

    The idempotent relations identify ``M (x)_k X`` with ``W``; only the arrow
    relations ``m g (x) x - m (x) g x`` (``m`` in ``M e_t``, ``x`` in ``e_s X``)
    are then eliminated, which keeps the linear system small.
    """
    f = r.field
    dm, dx = m.dim, x_stack.shape[1]
    n = dm * dx
    mb, xb, mproj, xproj = [], [], [], []
    for e in r.idempotents:
        re_ = Matrix(f, f.tensordot(e, m.right, ([0], [0])))
        le = Matrix(f, f.tensordot(e, x_stack, ([0], [0])))
        b, c = image_basis(re_), image_basis(le)
        mb.append(b)
        xb.append(c)
        mproj.append(left_inverse(b) @ re_ if b.cols else Matrix.zeros(f, 0, dm))
        xproj.append(left_inverse(c) @ le if c.cols else Matrix.zeros(f, 0, dx))
    sizes = [b.cols * c.cols for b, c in zip(mb, xb)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    w = int(off[-1])
    if w == 0:
        return Matrix.zeros(f, 0, n), Matrix.zeros(f, n, 0), []
    pi = f.zeros((w, n))
    iota = f.zeros((n, w))
    for v in range(len(sizes)):
        if sizes[v]:
            pi[off[v]:off[v + 1]] = f.reduce(np.kron(mproj[v].a, xproj[v].a))
            iota[:, off[v]:off[v + 1]] = f.reduce(np.kron(mb[v].a, xb[v].a))
    cols = []
    for g, s, t in r.generators:
        rt, cs = mb[t].cols, xb[s].cols
        if rt * cs == 0:
            continue
        rg = f.tensordot(g, m.right, ([0], [0]))
        lg = f.tensordot(g, x_stack, ([0], [0]))
        rel = f.zeros((w, rt * cs))
        if mb[s].cols:
            moved = f.dot(mproj[s].a, f.dot(rg, mb[t].a))          # M e_t -> M e_s
            rel[off[s]:off[s + 1]] += f.reduce(np.kron(moved, f.eye(cs)))
        if xb[t].cols:
            moved = f.dot(xproj[t].a, f.dot(lg, xb[s].a))          # e_s X -> e_t X
            rel[off[t]:off[t + 1]] -= f.reduce(np.kron(f.eye(rt), moved))
        cols.append(f.reduce(rel))
    rels = Matrix(f, np.hstack(cols)) if cols else None
    qw, sw, free = quotient_map(rels, w, f)
    q = Matrix(f, f.dot(qw.a, pi))
    s = Matrix(f, f.dot(iota, sw.a))
    return q, s, free


def tensor_over_R(m, x):
    """``m (x)_R x`` where ``x`` is a left module or a bimodule over ``m.right_algebra``."""
    r = m.right_algebra
    if isinstance(x, Bimodule):
        if not x.left_algebra.same_as(r):
            raise AlgebraMismatch("left algebra of the second factor differs from the base")
        x_stack = x.left
    else:
        if x.side != LEFT or not x.algebra.same_as(r):
            raise AlgebraMismatch("second factor must be a left module over the base")
        x_stack = x.stack
    f = r.field
    dm, dx = m.dim, x_stack.shape[1]
    n = dm * dx
    if n > MAX_TENSOR_DIM:
        raise DimensionMismatch(f"k-tensor space of dimension {n} is too large")
    if n == 0:
        q, s, free = Matrix.zeros(f, 0, 0), Matrix.zeros(f, 0, 0), []
    else:
        q, s, free = _vertex_split_quotient(m, x_stack, r)
    k = len(free)
    s3 = s.a.reshape(dm, dx, k)
    la = m.left_algebra
    if k:
        moved = f.tensordot(m.left, s3, ([2], [0])).reshape(la.dim, n, k)
        left = f.tensordot(moved, q.a, ([1], [1])).transpose(0, 2, 1)
    else:
        left = f.zeros((la.dim, 0, 0))
    if isinstance(x, Bimodule):
        ra = x.right_algebra
        if k:
            moved = f.tensordot(x.right, s3, ([2], [1]))           # (b, dx, dm, k)
            moved = moved.transpose(0, 2, 1, 3).reshape(ra.dim, n, k)
            right = f.tensordot(moved, q.a, ([1], [1])).transpose(0, 2, 1)
        else:
            right = f.zeros((ra.dim, 0, 0))
        res = Bimodule(la, ra, np.ascontiguousarray(left), np.ascontiguousarray(right),
                       validate=False)
    else:
        res = Module(la, LEFT, np.ascontiguousarray(left), validate=False)
    return TensorProduct(res, q, s, free)


def _powers(m):
    cache = m.__dict__.setdefault("_power_cache", [])
    if not cache:
        r = m.right_algebra
        f = r.field
        cache.append(TensorProduct(regular_bimodule(r), Matrix.identity(f, r.dim),
                                   Matrix.identity(f, r.dim), list(range(r.dim))))
        cache.append(TensorProduct(m, Matrix.identity(f, m.dim), Matrix.identity(f, m.dim),
                                   list(range(m.dim))))
    return cache


def tensor_power_data(m, i):
    """The i-th power with the quotient data of ``M (x)_R M^(i-1)``."""
    if not m.left_algebra.same_as(m.right_algebra):
        raise AlgebraMismatch("tensor powers need an R-R-bimodule")
    cache = _powers(m)
    while len(cache) <= i:
        cache.append(tensor_over_R(m, cache[-1].result))
    return cache[i]


def tensor_power(m, i):
    return tensor_power_data(m, i).result


@dataclass(frozen=True)
class NotNilpotentUpTo:
    cap: int
    reason: str = ""

    def __str__(self):
        return f"NotNilpotentUpTo({self.cap})"


def nilpotency_index(m, cap=DEFAULT_NILPOTENCY_CAP):
    """Smallest N with ``M^(N+1) = 0``, or :class:`NotNilpotentUpTo`."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if m.dim == 0:
        return 0
    for n in range(1, cap + 1):
        prev = tensor_power(m, n)
        if m.dim * prev.dim > MAX_TENSOR_DIM:
            return NotNilpotentUpTo(cap, f"tensor powers grow past {MAX_TENSOR_DIM} dimensions")
        if tensor_power(m, n + 1).dim == 0:
            return n
    return NotNilpotentUpTo(cap, f"M^{cap + 1} is still nonzero")


# -- the tensor ring -------------------------------------------------------------------

class TensorRingAlgebra:
    """``T = R + M + M^2 + ... + M^N`` realized as an :class:`FdAlgebra`.

    The first ``dim R`` basis vectors are the basis of ``R``; grade ``i``
    occupies ``grade_ranges[i]``.
    """

    def __init__(self, algebra, base, bimodule, grade_ranges, nilpotency_index):
        self.algebra = algebra
        self.base = base
        self.bimodule = bimodule
        self.grade_ranges = tuple(grade_ranges)
        self.nilpotency_index = nilpotency_index
        self._opposite = None

    def __repr__(self):
        dims = [b - a for a, b in self.grade_ranges]
        return f"<TensorRingAlgebra dim={self.algebra.dim} grades={dims}>"

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def field(self):
        return self.algebra.field

    def grade_indices(self, i):
        if i >= len(self.grade_ranges):
            return np.arange(0)
        a, b = self.grade_ranges[i]
        return np.arange(a, b)

    @cached_property
    def basis_grades(self):
        out = np.zeros(self.dim, dtype=int)
        for i, (a, b) in enumerate(self.grade_ranges):
            out[a:b] = i
        return out

    def grade_bimodule(self, i):
        """Grade ``i`` of T as an R-R-bimodule, read off T's multiplication."""
        cache = self.__dict__.setdefault("_grade_bimodules", {})
        if i not in cache:
            idx = self.grade_indices(i)
            r = self.base
            rows = np.arange(r.dim)
            ls = self.algebra.left_stack[np.ix_(rows, idx, idx)]
            rs = self.algebra.right_stack[np.ix_(rows, idx, idx)]
            cache[i] = Bimodule(r, r, ls, rs, validate=False, label=f"M^{i}")
        return cache[i]

    @cached_property
    def as_bimodule(self):
        """T as a (T, R)-bimodule, used for induction."""
        t = self.algebra
        rs = t.right_stack[:self.base.dim]
        return Bimodule(t, self.base, t.left_stack, rs, validate=False, label="T")

    @cached_property
    def right_base_bimodule(self):
        """T as an (R, T)-bimodule (its restriction to R on the left)."""
        t = self.algebra
        return Bimodule(self.base, t, t.left_stack[:self.base.dim], t.right_stack,
                        validate=False, label="T")

    def restrict(self, y):
        """The forgetful functor: a T-module seen as an R-module."""
        if not y.algebra.same_as(self.algebra) or y.side != LEFT:
            raise AlgebraMismatch("expected a left module over the tensor ring")
        return Module(self.base, LEFT, y.stack[:self.base.dim], validate=False)

    def opposite(self):
        """``T^op`` as the tensor ring of ``R^op`` with the swapped bimodule, same basis."""
        if self._opposite is None:
            op = TensorRingAlgebra(self.algebra.opposite(), self.base.opposite(),
                                   self.bimodule.swapped(), self.grade_ranges,
                                   self.nilpotency_index)
            op._opposite = self
            self._opposite = op
        return self._opposite

    @cached_property
    def grade_sections(self):
        """For i >= 2, a section of the product map ``M (x)_k M^(i-1) -> M^i``."""
        f = self.field
        t = self.algebra.table
        g1 = self.grade_indices(1)
        out = {}
        for i in range(2, len(self.grade_ranges)):
            gp, gi = self.grade_indices(i - 1), self.grade_indices(i)
            prod = t[np.ix_(g1, gp, gi)].reshape(len(g1) * len(gp), len(gi)).T
            sec = solve(Matrix(f, np.ascontiguousarray(prod)), Matrix.identity(f, len(gi)))
            if sec is None:
                raise SolveFailed(f"grade {i} is not generated by grade 1 times grade {i - 1}")
            out[i] = sec
        return out


def _mult_table(r, powers, n):
    """Structure constants for the graded sum of the given powers."""
    f = r.field
    dims = [p.result.dim for p in powers[:n + 1]]
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offs[-1])
    table = f.zeros((total, total, total))
    # mu[(i, j)] : G_i (x)_k G_j -> G_{i+j}, columns indexed by a * d_j + b
    mu = {}
    for j in range(n + 1):
        gj = powers[j].result
        mu[(0, j)] = np.ascontiguousarray(gj.left.transpose(1, 0, 2).reshape(dims[j], -1))
    for i in range(1, n + 1):
        gi = powers[i].result
        # y . r : column (k, a) is right[a][:, k]
        mu[(i, 0)] = np.ascontiguousarray(gi.right.transpose(1, 2, 0).reshape(dims[i], -1))
    unit_col = r.unit.reshape(-1, 1)
    dm = dims[1] if n >= 1 else 0
    for i in range(1, n + 1):
        # section G_i -> M (x)_k G_{i-1}
        if i == 1:
            sec = f.reduce(np.kron(f.eye(dm), unit_col))
        else:
            sec = powers[i].section.a
        for j in range(1, n + 1 - i):
            prev = mu[(i - 1, j)]                         # d_{i+j-1} x d_{i-1} d_j
            inner = f.reduce(np.kron(f.eye(dm), prev))     # M G_{i+j-1} <- M G_{i-1} G_j
            outer = f.reduce(np.kron(sec, f.eye(dims[j])))  # M G_{i-1} G_j <- G_i G_j
            mu[(i, j)] = f.dot(powers[i + j].quotient.a, f.dot(inner, outer))
    for (i, j), m in mu.items():
        if i + j > n or dims[i] * dims[j] * dims[i + j] == 0:
            continue
        blk = m.reshape(dims[i + j], dims[i], dims[j]).transpose(1, 2, 0)
        table[offs[i]:offs[i + 1], offs[j]:offs[j + 1], offs[i + j]:offs[i + j + 1]] = blk
    return table, offs


def build_tensor_ring(r, m, cap=DEFAULT_NILPOTENCY_CAP):
    """Construct ``T_R(M)``; raises :class:`NotNilpotent` when no power vanishes within ``cap``."""
    if not (m.left_algebra.same_as(r) and m.right_algebra.same_as(r)):
        raise AlgebraMismatch("bimodule is not over the given algebra on both sides")
    n = nilpotency_index(m, cap)
    if isinstance(n, NotNilpotentUpTo):
        raise NotNilpotent(f"M^(i+1) != 0 for all i <= {cap}")
    powers = [tensor_power_data(m, i) for i in range(n + 1)]
    f = r.field
    table, offs = _mult_table(r, powers, n)
    total = int(offs[-1])
    labels = list(r.labels)
    for i in range(1, n + 1):
        labels += [f"M{i}[{k}]" for k in range(powers[i].result.dim)]
    unit = f.zeros(total)
    unit[:r.dim] = r.unit
    idems = []
    for e in r.idempotents:
        v = f.zeros(total)
        v[:r.dim] = e
        idems.append(v)
    rad = f.zeros((total, 0))
    if r.has_radical:
        jr = r.radical().a
        top = f.zeros((total, jr.shape[1]))
        top[:r.dim] = jr
        rest = f.zeros((total, total - r.dim))
        rest[r.dim:, :] = f.eye(total - r.dim)
        rad = np.hstack([top, rest])
    alg = FdAlgebra(f, table, labels, unit, idems,
                    radical=Matrix(f, rad) if r.has_radical else None, validate=True)
    ranges = [(int(offs[i]), int(offs[i + 1])) for i in range(n + 1)]
    return TensorRingAlgebra(alg, r, m, ranges, n)


# -- representations ---------------------------------------------------------------------

class RepPair:
    """An R-module ``X`` with an R-linear structure map ``u : M (x)_R X -> X``."""

    def __init__(self, ring, base, u, tensor=None, validate=True):
        self.ring = ring
        self.base = base
        self.tensor = tensor if tensor is not None else tensor_over_R(ring.grade_bimodule(1), base)
        if u.shape != (base.dim, self.tensor.result.dim):
            raise DimensionMismatch(f"structure map has shape {u.shape}")
        self.u = u
        if validate:
            ModuleHom(self.tensor.result, base, u, validate=True)

    @property
    def u_hom(self):
        return ModuleHom(self.tensor.result, self.base, self.u, validate=False)

    def __repr__(self):
        return f"<RepPair dim={self.base.dim} M(x)X={self.tensor.result.dim}>"


def rep_from_module(t, y):
    """Restrict a T-module to R and read the structure map off the grade-1 action."""
    x = t.restrict(y)
    m = t.grade_bimodule(1)
    tp = tensor_over_R(m, x)
    f = t.field
    g1 = t.grade_indices(1)
    dx = x.dim
    if len(g1) == 0 or dx == 0:
        return RepPair(t, x, Matrix.zeros(f, dx, tp.result.dim), tp, validate=False)
    acts = y.stack[g1]                                           # (dm, dx, dx)
    uk = np.ascontiguousarray(acts.transpose(1, 0, 2).reshape(dx, -1))
    u = Matrix(f, f.dot(uk, tp.section.a))
    return RepPair(t, x, u, tp, validate=False)


def module_from_rep(t, rep, validate=True):
    """The T-module whose grade-1 elements act by ``m . x = u(m (x) x)``."""
    f = t.field
    x = rep.base
    dx = x.dim
    stacks = [x.stack]
    g1 = t.grade_indices(1)
    if len(t.grade_ranges) > 1 and len(g1):
        q = rep.tensor.quotient.a
        uq = f.dot(rep.u.a, q) if dx else f.zeros((0, len(g1) * dx))
        a1 = uq.reshape(dx, len(g1), dx).transpose(1, 0, 2)    # (dm, dx, dx)
        stacks.append(np.ascontiguousarray(a1))
        prev = a1
        for i in range(2, len(t.grade_ranges)):
            sec = t.grade_sections[i].a                           # (dm * d_{i-1}, d_i)
            prods = f.reduce(np.matmul(a1[:, None], prev[None, :]))
            prods = prods.reshape(a1.shape[0] * prev.shape[0], dx, dx)
            cur = f.tensordot(sec.T, prods, ([1], [0]))
            stacks.append(cur)
            prev = cur
    elif len(t.grade_ranges) > 1:
        stacks.append(f.zeros((0, dx, dx)))
    stack = np.concatenate(stacks, axis=0)
    return Module(t.algebra, LEFT, stack, validate=validate)


def convert_rep(t, payload, validate=True):
    """Module over T -> RepPair, or RepPair -> module over T."""
    if isinstance(payload, RepPair):
        return module_from_rep(t, payload, validate=validate)
    if isinstance(payload, Module):
        return rep_from_module(t, payload)
    raise TypeError("payload must be a Module over T or a RepPair")


def zero_rep(t, x):
    """``(x, 0)``; raises unless the zero map is R-linear (always true)."""
    tp = tensor_over_R(t.grade_bimodule(1), x)
    return RepPair(t, x, Matrix.zeros(t.field, x.dim, tp.result.dim), tp, validate=False)


# -- induction ---------------------------------------------------------------------------

@dataclass
class Induction:
    """``Ind(z) = T (x)_R z`` with the unit ``z -> U(Ind z)``."""

    ring: TensorRingAlgebra
    source: Module
    module: Module
    tensor: TensorProduct
    grades: tuple
    unit_matrix: Matrix

    @property
    def unit(self):
        return ModuleHom(self.source, self.ring.restrict(self.module), self.unit_matrix,
                         validate=False)

    def grade_part(self, i):
        return [k for k, g in enumerate(self.grades) if g == i]


def induce(t, z):
    if z.side != LEFT or not z.algebra.same_as(t.base):
        raise AlgebraMismatch("induction expects a left module over the base algebra")
    tp = tensor_over_R(t.as_bimodule, z)
    f = t.field
    dz = z.dim
    grades = []
    if dz and tp.free:
        support = tp.section.a.reshape(t.dim, dz, -1).any(axis=1) if f.p is not None else \
            (tp.section.a.reshape(t.dim, dz, -1) != 0).any(axis=1)
        for c in range(support.shape[1]):
            gs = {int(t.basis_grades[i]) for i in np.flatnonzero(support[:, c])}
            if len(gs) != 1:
                raise ArithmeticError("induced basis vector is not grade-homogeneous")
            grades.append(gs.pop())
    grades = tuple(grades)
    unit = f.reduce(np.kron(t.algebra.unit.reshape(-1, 1), f.eye(dz)))
    unit_m = Matrix(f, f.dot(tp.quotient.a, unit)) if tp.free else Matrix.zeros(f, 0, dz)
    return Induction(t, z, tp.result, tp, grades, unit_m)


def induce_map(t, ind_src, ind_tgt, h):
    """``Ind(h)`` for an R-linear ``h : z -> z'``."""
    f = t.field
    big = f.reduce(np.kron(f.eye(t.dim), h.matrix.a))
    m = f.dot(ind_tgt.tensor.quotient.a, f.dot(big, ind_src.tensor.section.a)) \
        if ind_tgt.module.dim and ind_src.module.dim else \
        f.zeros((ind_tgt.module.dim, ind_src.module.dim))
    return ModuleHom(ind_src.module, ind_tgt.module, Matrix(f, m), validate=False)


def adjunction_restrict(ind, h):
    """``Hom_T(Ind z, Y) -> Hom_R(z, U Y)``: precompose with the unit."""
    t = ind.ring
    return ModuleHom(ind.source, t.restrict(h.target), h.matrix @ ind.unit_matrix,
                     validate=False)


def adjunction_extend(ind, g, y):
    """Inverse of :func:`adjunction_restrict`: ``t (x) a -> t . g(a)``."""
    f = ind.ring.field
    dz, dy = ind.source.dim, y.dim
    if dz == 0 or dy == 0 or ind.module.dim == 0:
        return ModuleHom(ind.module, y, Matrix.zeros(f, dy, ind.module.dim), validate=False)
    moved = f.tensordot(y.stack, g.matrix.a, ([2], [0]))         # (dimT, dy, dz)
    phi = np.ascontiguousarray(moved.transpose(1, 0, 2).reshape(dy, -1))
    return ModuleHom(ind.module, y, Matrix(f, f.dot(phi, ind.tensor.section.a)), validate=False)


def check_adjunction(t, z, y):
    """Return ``(dim Hom_T(Ind z, y), dim Hom_R(z, U y))`` after checking the explicit bijection."""
    ind = induce(t, z)
    uy = t.restrict(y)
    lhs = hom_basis(ind.module, y)
    rhs_dim = hom_dim(z, uy)
    f = t.field
    restricted = [adjunction_restrict(ind, h) for h in lhs]
    if lhs:
        mat = Matrix(f, np.stack([h.matrix.a.reshape(-1) for h in restricted], axis=1))
        if rank(mat) != len(lhs):
            raise ArithmeticError("restriction along the unit is not injective")
    for h, g in zip(lhs, restricted):
        back = adjunction_extend(ind, g, y)
        if not back.matrix == h.matrix:
            raise ArithmeticError("extension does not invert restriction")
    for g in hom_basis(z, uy):
        ext = adjunction_extend(ind, g, y)
        ModuleHom(ind.module, y, ext.matrix, validate=True)
        if not adjunction_restrict(ind, ext).matrix == g.matrix:
            raise ArithmeticError("restriction does not invert extension")
    return len(lhs), rhs_dim


# -- the standard sequence ----------------------------------------------------------------

@dataclass
class StandardSequence:
    left: Induction           # Ind(M (x) X)
    middle: Induction         # Ind(X)
    module: Module            # X as a T-module
    phi: ModuleHom
    eta: ModuleHom

    @property
    def euler_characteristic(self):
        return self.left.module.dim - self.middle.module.dim + self.module.dim


def standard_sequence(rep):
    """``0 -> Ind(M (x) X) -phi-> Ind(X) -eta-> X -> 0``, verified exact."""
    t = rep.ring
    f = t.field
    x = rep.base
    mx = rep.tensor.result
    ind_l = induce(t, mx)
    ind_m = induce(t, x)
    xt = module_from_rep(t, rep, validate=False)
    dT, dx, dmx = t.dim, x.dim, mx.dim
    g1 = t.grade_indices(1)
    dm = len(g1)
    # eta(t (x) x) = t . x
    if ind_m.module.dim and dx:
        moved = xt.stack.transpose(1, 0, 2).reshape(dx, -1)
        eta_m = f.dot(np.ascontiguousarray(moved), ind_m.tensor.section.a)
    else:
        eta_m = f.zeros((dx, ind_m.module.dim))
    # phi(t (x) m (x) x) = t m (x) x - t (x) u(m (x) x)
    if ind_l.module.dim and ind_m.module.dim:
        mul = t.algebra.table[:, g1, :].reshape(dT * dm, dT).T    # T (x) M -> T
        term1 = f.reduce(np.kron(mul, f.eye(dx)))
        uq = f.dot(rep.u.a, rep.tensor.quotient.a)
        term2 = f.reduce(np.kron(f.eye(dT), uq))
        lift = f.reduce(np.kron(f.eye(dT), rep.tensor.section.a))
        diff = f.reduce(term1 - term2)
        phi_m = f.dot(ind_m.tensor.quotient.a,
                      f.dot(diff, f.dot(lift, ind_l.tensor.section.a)))
    else:
        phi_m = f.zeros((ind_m.module.dim, ind_l.module.dim))
    phi = ModuleHom(ind_l.module, ind_m.module, Matrix(f, phi_m), validate=True)
    eta = ModuleHom(ind_m.module, xt, Matrix(f, eta_m), validate=True)
    if rank(phi.matrix) != ind_l.module.dim:
        raise ArithmeticError("phi is not injective")
    if rank(eta.matrix) != dx:
        raise ArithmeticError("eta is not surjective")
    if homology_dim(phi.matrix, eta.matrix) != 0:
        raise ArithmeticError("standard sequence is not exact in the middle")
    if not (eta.matrix @ ind_m.unit_matrix) == Matrix.identity(f, dx):
        raise ArithmeticError("eta does not restrict to the identity on grade 0")
    return StandardSequence(ind_l, ind_m, xt, phi, eta)


# -- split monomorphisms --------------------------------------------------------------------

@dataclass
class SplitMonoVerdict:
    kind: str                     # "induced" | "not_induced"
    cokernel: Module | None = None
    iso: ModuleHom | None = None  # Ind(Cok u) -> X as T-modules
    reason: str = ""

    def __str__(self):
        return {"induced": "Induced", "not_induced": "NotInduced"}[self.kind]


def split_mono_normal_form(rep, seed=0):
    """Decide whether ``(X, u)`` is induced, building ``Ind(Cok u) ~= (X, u)`` when it is.

    The section is found by an exact linear solve, so the verdict is never Unknown.
    """
    t = rep.ring
    f = t.field
    x = rep.base
    if rank(rep.u) != rep.tensor.result.dim:
        return SplitMonoVerdict("not_induced", reason="u is not injective")
    cok, proj, _ = quotient(x, image_basis(rep.u))
    homs = hom_basis(cok, x)
    if cok.dim == 0:
        sec = Matrix.zeros(f, x.dim, 0)
    else:
        # solve proj . sum c_k h_k = I
        if not homs:
            return SplitMonoVerdict("not_induced", reason="no R-linear section exists")
        cols = np.stack([f.dot(proj.matrix.a, h.matrix.a).reshape(-1) for h in homs], axis=1)
        target = f.eye(cok.dim).reshape(-1, 1)
        c = solve(Matrix(f, cols), Matrix(f, target))
        if c is None:
            return SplitMonoVerdict("not_induced", reason="no R-linear section exists")
        sec_a = f.tensordot(c.a.reshape(-1), np.stack([h.matrix.a for h in homs]), ([0], [0]))
        sec = Matrix(f, sec_a)
    ind = induce(t, cok)
    xt = module_from_rep(t, rep, validate=False)
    iso = adjunction_extend(ind, ModuleHom(cok, x, sec, validate=False), xt)
    ModuleHom(ind.module, xt, iso.matrix, validate=True)
    if ind.module.dim != x.dim or not is_invertible(iso.matrix):
        raise ArithmeticError("extension of the section is not an isomorphism")
    return SplitMonoVerdict("induced", cokernel=cok, iso=iso)
