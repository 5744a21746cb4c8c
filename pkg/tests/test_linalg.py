from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensor_gorenstein.errors import DimensionMismatch, FieldMismatch, NotAComplex
from tensor_gorenstein.linalg import (FieldSpec, Matrix, homology_dim, image_basis, inverse,
                                      is_invertible, kernel_basis, kron, left_inverse,
                                      quotient_map, rank, rref_rank, solve)

QQ = FieldSpec.rationals()
FIELDS = [QQ, FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(7)]


def mat(f, rows):
    return Matrix(f, f.array(rows))


def naive_rank(rows, p):
    """Textbook elimination on python lists; the oracle for :func:`rank`."""
    m = [[Fraction(x) if p is None else x % p for x in row] for row in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p is None else pow(m[r][c], -1, p)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                k = m[i][c] * inv
                m[i] = [(a - k * b) if p is None else (a - k * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


@st.composite
def matrices(draw, max_dim=5):
    f = draw(st.sampled_from(FIELDS))
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    lo, hi = (-3, 3) if f.p is None else (0, f.p - 1)
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                         min_size=r, max_size=r))
    return f, rows


def test_rank_examples():
    assert rank(mat(QQ, [[1, 2], [2, 4]])) == 1
    assert rank(mat(FieldSpec.prime(2), [[1, 1], [1, 1]])) == 1
    r, k, piv = rref_rank(Matrix.identity(QQ, 4))
    assert k == 4 and r == Matrix.identity(QQ, 4) and piv == [0, 1, 2, 3]


def test_kernel_examples():
    k = kernel_basis(mat(QQ, [[1, 1]]))
    assert k.cols == 1 and k.a[0, 0] == -k.a[1, 0]
    assert kernel_basis(Matrix.zeros(QQ, 2, 3)).cols == 3
    assert kernel_basis(mat(QQ, [[1, 2], [3, 4]])).cols == 0


def test_solve_examples():
    b = mat(QQ, [[1, 2], [3, 4]])
    assert solve(Matrix.identity(QQ, 2), b) == b
    assert solve(mat(QQ, [[1], [1]]), mat(QQ, [[0], [1]])) is None
    assert solve(mat(QQ, [[2]]), mat(QQ, [[1]])).a[0, 0] == Fraction(1, 2)


def test_kron_examples():
    a = mat(QQ, [[1, 2], [3, 4]])
    assert kron(Matrix.zeros(QQ, 2, 3), Matrix.zeros(QQ, 4, 5)).shape == (8, 15)
    k = kron(Matrix.identity(QQ, 3), a)
    for i in range(3):
        assert k[2 * i:2 * i + 2, 2 * i:2 * i + 2] == a
    assert np.count_nonzero(k.a) == 3 * np.count_nonzero(a.a)
    e1 = mat(QQ, [[1, 0, 0]])
    assert kron(e1, e1) == mat(QQ, [[1] + [0] * 8])


def test_homology_examples():
    z = Matrix.zeros(QQ, 2, 2)
    assert homology_dim(z, z) == 2
    inj = mat(QQ, [[1], [0]])
    out = mat(QQ, [[0, 1]])
    assert homology_dim(inj, out) == 0
    # k[x]/(x^2) with both maps multiplication by x: ker x = im x, so exact
    x = mat(QQ, [[0, 0], [1, 0]])
    assert homology_dim(x, x) == 0


def test_errors():
    with pytest.raises(FieldMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(FieldSpec.prime(2), 2)
    with pytest.raises(DimensionMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(QQ, 3)
    with pytest.raises(NotAComplex):
        homology_dim(Matrix.identity(QQ, 2), Matrix.identity(QQ, 2))
    with pytest.raises(ValueError):
        FieldSpec.prime(4)


@given(matrices())
def test_rank_matches_naive_elimination(fm):
    f, rows = fm
    assert rank(mat(f, rows)) == naive_rank(rows, f.p)


@given(matrices())
def test_rank_of_transpose(fm):
    f, rows = fm
    m = mat(f, rows)
    assert rank(m) == rank(m.T)


@given(matrices())
def test_rank_nullity(fm):
    f, rows = fm
    m = mat(f, rows)
    k = kernel_basis(m)
    assert rank(m) + k.cols == m.cols
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@given(matrices(4), matrices(3))
def test_kron_rank_multiplies(fa, fb):
    f, ra = fa
    _, rb = fb
    if f.p is not None:
        rb = [[x % f.p for x in row] for row in rb]
    a, b = mat(f, ra), mat(f, rb)
    assert rank(kron(a, b)) == rank(a) * rank(b)


@given(matrices(), st.integers(1, 3))
def test_solve_consistent_systems(fm, k):
    f, rows = fm
    a = mat(f, rows)
    x0 = Matrix(f, f.array(np.arange(a.cols * k).reshape(a.cols, k) % 3))
    b = a @ x0
    x = solve(a, b)
    assert x is not None and a @ x == b


@given(matrices())
def test_image_quotient_and_left_inverse(fm):
    f, rows = fm
    m = mat(f, rows)
    img = image_basis(m)
    assert img.cols == rank(m)
    li = left_inverse(img)
    assert li @ img == Matrix.identity(f, img.cols)
    q, s, free = quotient_map(img, m.rows, f)
    assert q @ s == Matrix.identity(f, len(free))
    assert (q @ img).is_zero() and len(free) == m.rows - img.cols


@given(st.sampled_from(FIELDS), st.integers(1, 4), st.integers(0, 10**6))
def test_inverse_round_trip(f, n, seed):
    rng = np.random.default_rng(seed)
    m = Matrix(f, f.random((n, n), rng))
    if is_invertible(m):
        assert m @ inverse(m) == Matrix.identity(f, n)
    else:
        assert rank(m) < n


def test_large_prime_products_are_exact():
    p = 2**31 - 1
    f = FieldSpec.prime(p)
    a = Matrix(f, f.array([[p - 1] * 8] * 3))
    b = Matrix(f, f.array([[p - 2] * 2] * 8))
    want = [[(8 * (p - 1) * (p - 2)) % p] * 2] * 3
    assert (a @ b).tolist() == want
