"""
Exact dense linear algebra over the rationals and prime fields.

Matrices are thin immutable wrappers around numpy arrays.  Over GF(p) the
array has dtype int64 with entries in [0, p); over QQ it is an object array
of ``fractions.Fraction`` (which keeps every entry in lowest terms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, NotAComplex

MAX_PRIME = 2**31
FLOAT_EXACT = 2**53


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"{self.p!r} is not a prime")
            if self.p >= MAX_PRIME:
                raise ValueError("primes must be below 2**31")

    @classmethod
    def rationals(cls):
        return cls(None)

    @classmethod
    def prime(cls, p):
        return cls(int(p))

    @property
    def is_rational(self):
        return self.p is None

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # -- element level -------------------------------------------------
    def element(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return int(x.numerator * pow(x.denominator, -1, self.p) % self.p)
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    # -- array level ---------------------------------------------------
    def array(self, data):
        if self.p is None:
            arr = np.array(data, dtype=object)
            flat = arr.reshape(-1)
            for i, x in enumerate(flat):
                if not isinstance(x, Fraction):
                    flat[i] = Fraction(x)
            return flat.reshape(arr.shape)
        arr = np.array(data, dtype=object)
        if arr.size and any(isinstance(x, Fraction) for x in arr.reshape(-1)):
            return np.array([self.element(x) for x in arr.reshape(-1)],
                            dtype=np.int64).reshape(arr.shape)
        return np.array(data, dtype=np.int64) % self.p

    def zeros(self, shape):
        if self.p is None:
            arr = np.empty(shape, dtype=object)
            arr.fill(Fraction(0))
            return arr
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = self.element(1)
        return a

    def reduce(self, arr):
        if self.p is None:
            return arr
        return arr % self.p

    @property
    def _wide(self):
        # int64 accumulation overflows once p * p * terms exceeds 2**63
        return self.p is not None and self.p >= 1 << 20

    def _exact_in_float(self, inner):
        # float64 products are exact while every partial sum stays below 2**53
        return (self.p - 1) ** 2 * max(inner, 1) < FLOAT_EXACT

    def dot(self, a, b):
        if self.p is None:
            if a.shape[-1] == 0:
                return self.zeros(a.shape[:-1] + b.shape[1:])
            return a.dot(b)
        if self._exact_in_float(a.shape[-1]):
            out = a.astype(np.float64) @ b.astype(np.float64)
            return np.mod(out, self.p).astype(np.int64)
        if self._wide:
            return (a.astype(object).dot(b.astype(object)) % self.p).astype(np.int64)
        return (a @ b) % self.p

    def tensordot(self, a, b, axes):
        if self.p is None:
            return np.tensordot(a, b, axes=axes)
        inner = int(np.prod([a.shape[i] for i in np.atleast_1d(axes[0])]))
        if self._exact_in_float(inner):
            out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
            return np.mod(out, self.p).astype(np.int64)
        if self._wide:
            out = np.tensordot(a.astype(object), b.astype(object), axes=axes) % self.p
            return out.astype(np.int64)
        return np.tensordot(a, b, axes=axes) % self.p

    def random(self, shape, rng, bound=3):
        """Uniform over GF(p); small integers in [-bound, bound] over QQ."""
        if self.p is None:
            return self.array(rng.integers(-bound, bound + 1, size=shape))
        return rng.integers(0, self.p, size=shape).astype(np.int64)


class Matrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "a")

    def __init__(self, field, data):
        if isinstance(data, np.ndarray) and data.dtype == field.dtype and data.ndim == 2:
            arr = data
        else:
            arr = field.array(data)
            if arr.ndim != 2:
                if arr.size == 0:
                    arr = arr.reshape(0, 0)
                else:
                    raise DimensionMismatch(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # constructors
    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field, n):
        return cls(field, field.eye(n))

    @classmethod
    def column(cls, field, vec):
        v = field.array(vec).reshape(-1, 1)
        return cls(field, v)

    # shape
    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def entries(self):
        """Row-major list of entries."""
        return list(self.a.reshape(-1))

    def tolist(self):
        return [[_plain(x) for x in row] for row in self.a]

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # arithmetic
    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, self.field.dot(self.a, other.a))

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self):
        return Matrix(self.field, self.field.reduce(-self.a))

    def scale(self, c):
        return Matrix(self.field, self.field.reduce(self.a * self.field.element(c)))

    @property
    def T(self):
        return Matrix(self.field, np.ascontiguousarray(self.a.T))

    def __getitem__(self, idx):
        sub = self.a[idx]
        if sub.ndim != 2:
            return sub
        return Matrix(self.field, np.array(sub))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.a == other.a)))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.a.reshape(-1).tolist())))

    def is_zero(self):
        return not np.any(self.a != 0) if self.a.size else True

    def __repr__(self):
        return f"Matrix({self.field}, {self.tolist()})"


def _plain(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return int(x)


def hstack(field, mats, rows=None):
    mats = list(mats)
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    return Matrix(field, np.hstack([m.a for m in mats]))


def vstack(field, mats, cols=None):
    mats = list(mats)
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    return Matrix(field, np.vstack([m.a for m in mats]))


def block_diag(field, mats):
    mats = list(mats)
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = field.zeros((r, c))
    i = j = 0
    for m in mats:
        out[i:i + m.rows, j:j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix(field, out)


def kron(a, b):
    """Kronecker product; row index (i, k) of the result is ``i * b.rows + k``."""
    a._check(b)
    f = a.field
    if a.a.size == 0 or b.a.size == 0:
        return Matrix.zeros(f, a.rows * b.rows, a.cols * b.cols)
    return Matrix(f, f.reduce(np.kron(a.a, b.a)))


# -- elimination -------------------------------------------------------------

def _rref_array(field, arr, max_col=None):
    """Return (rref, pivot_cols); pivots are searched only among ``max_col`` columns."""
    a = np.array(arr, dtype=field.dtype)
    rows, cols = a.shape
    search = cols if max_col is None else max_col
    pivots = []
    r = 0
    p = field.p
    for c in range(search):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = a[r, c]
        if p is None:
            if piv != 1:
                a[r, c:] = a[r, c:] * (1 / piv)
        elif piv != 1:
            a[r, c:] = a[r, c:] * pow(int(piv), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            upd = a[others, c:] - np.multiply.outer(col[others], a[r, c:])
            a[others, c:] = upd if p is None else upd % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref_rank(m):
    """Reduced row echelon form, rank and pivot columns of ``m``."""
    arr, pivots = _rref_array(m.field, m.a)
    return Matrix(m.field, arr), len(pivots), pivots


def rank(m):
    if m.a.size == 0:
        return 0
    return len(_rref_array(m.field, m.a)[1])


def kernel_basis(m):
    """Matrix whose columns form a basis of the null space of ``m``."""
    f = m.field
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(f, n)
    r, pivots = _rref_array(f, m.a)
    free = [c for c in range(n) if c not in set(pivots)]
    k = f.zeros((n, len(free)))
    one = f.element(1)
    for j, c in enumerate(free):
        k[c, j] = one
        for i, pc in enumerate(pivots):
            k[pc, j] = f.reduce(-r[i, c]) if f.p is not None else -r[i, c]
    return Matrix(f, k)


def solve(a, b):
    """Some ``x`` with ``a @ x == b``, or ``None`` if the system is inconsistent."""
    a._check(b)
    if a.rows != b.rows:
        raise DimensionMismatch(f"a has {a.rows} rows but b has {b.rows}")
    f = a.field
    n = a.cols
    aug = np.hstack([a.a, b.a]) if a.rows else f.zeros((0, n + b.cols))
    r, pivots = _rref_array(f, aug, max_col=n)
    rk = len(pivots)
    if rk < r.shape[0] and np.any(r[rk:, n:] != 0):
        return None
    x = f.zeros((n, b.cols))
    for i, c in enumerate(pivots):
        x[c, :] = r[i, n:]
    return Matrix(f, x)


def inverse(a):
    if a.rows != a.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    x = solve(a, Matrix.identity(a.field, a.rows))
    if x is None:
        raise ZeroDivisionError("matrix is singular")
    return x


def is_invertible(a):
    return a.rows == a.cols and rank(a) == a.rows


def image_basis(m):
    """Columns of ``m`` at its pivot positions: a basis of the column space."""
    if m.a.size == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    _, pivots = _rref_array(m.field, m.a)
    return Matrix(m.field, np.array(m.a[:, pivots]))


def quotient_map(sub, n, field):
    """Projection k^n -> k^n / span(sub) in coordinates of the non-pivot basis.

    Returns ``(Q, S, free)`` with ``Q @ S == I``; ``S`` is the inclusion of the
    standard basis vectors indexed by ``free`` (the canonical complement).
    """
    if sub is None or sub.cols == 0:
        return Matrix.identity(field, n), Matrix.identity(field, n), list(range(n))
    r, pivots = _rref_array(field, sub.a.T)
    r = r[:len(pivots)]
    piv = set(pivots)
    free = [c for c in range(n) if c not in piv]
    q = field.zeros((len(free), n))
    one = field.element(1)
    for j, c in enumerate(free):
        q[j, c] = one
    for i, pc in enumerate(pivots):
        q[:, pc] = field.reduce(-r[i, free]) if field.p is not None else -r[i, free]
    s = field.zeros((n, len(free)))
    for j, c in enumerate(free):
        s[c, j] = one
    return Matrix(field, q), Matrix(field, s), free


def left_inverse(basis):
    """A matrix ``L`` with ``L @ basis == I`` (``basis`` must have full column rank)."""
    f = basis.field
    if basis.cols == 0:
        return Matrix.zeros(f, 0, basis.rows)
    _, rows = _rref_array(f, basis.a.T)
    if len(rows) != basis.cols:
        raise DimensionMismatch("columns are not independent")
    sq = Matrix(f, np.array(basis.a[rows, :]))
    inv = inverse(sq)
    out = f.zeros((basis.cols, basis.rows))
    out[:, rows] = inv.a
    return Matrix(f, out)


def homology_dim(d_in, d_out):
    """dim ker(d_out) - rank(d_in) for the complex  . -d_in-> V -d_out-> . ."""
    d_in._check(d_out)
    if d_out.cols != d_in.rows:
        raise DimensionMismatch(f"d_in {d_in.shape} and d_out {d_out.shape} do not compose")
    if not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out . d_in is nonzero")
    return (d_out.cols - rank(d_out)) - rank(d_in)


# -- batch operations over GF(p) ---------------------------------------------

def batch_rank_modp(mats, p):
    """Ranks of a stack of matrices (shape ``(B, r, c)``) over GF(p)."""
    a = np.array(mats, dtype=np.int64) % p
    b, rows, cols = a.shape
    ranks = np.zeros(b, dtype=np.int64)
    if rows == 0 or cols == 0:
        return ranks
    inv_table = np.zeros(p, dtype=np.int64) if p < 1 << 16 else None
    if inv_table is not None:
        for x in range(1, p):
            inv_table[x] = pow(x, -1, p)
    ar = np.arange(b)
    for c in range(cols):
        cur = np.minimum(ranks, rows - 1)
        # candidate pivot rows are those at index >= rank
        idx = np.arange(rows)[None, :]
        cand = (a[:, :, c] != 0) & (idx >= ranks[:, None])
        has = cand.any(axis=1) & (ranks < rows)
        if not has.any():
            continue
        k = np.argmax(cand, axis=1)
        sel = ar[has]
        kk = k[has]
        rr = cur[has]
        tmp = a[sel, kk, :].copy()
        a[sel, kk, :] = a[sel, rr, :]
        a[sel, rr, :] = tmp
        piv = a[sel, rr, c]
        if inv_table is not None:
            pinv = inv_table[piv]
        else:
            pinv = np.array([pow(int(x), -1, p) for x in piv], dtype=np.int64)
        a[sel, rr, :] = a[sel, rr, :] * pinv[:, None] % p
        factors = a[sel, :, c].copy()
        factors[np.arange(len(sel)), rr] = 0
        a[sel] = (a[sel] - factors[:, :, None] * a[sel, rr, :][:, None, :]) % p
        ranks[sel] += 1
    return ranks
