import itertools

import numpy as np
import pytest
from hypothesis import given

from conftest import rng_from, seeds
from tensor_gorenstein.enumeration import enumerate_modules
from tensor_gorenstein.errors import NotAModule
from tensor_gorenstein.linalg import Matrix, inverse, is_invertible
from tensor_gorenstein.modcat import (LEFT, RIGHT, HomDim, Module, direct_sum, dual_D,
                                      ext_dim, ext_dims, hom_dim, hom_factorization,
                                      is_isomorphic, is_projective, module_from_generators,
                                      pd_verdict, projective_cover, projective_resolution,
                                      random_module, regular_module, simples_and_projectives,
                                      star, syzygy, tor_dim, tor_dims, tor_dims_via_right,
                                      zero_module)
from tensor_gorenstein.selftest import (a2_path, dual_numbers, socle_vector, three_cycle,
                                        top_vector)


def brute_hom_dim(x, y):
    """log_p of the number of linear maps commuting with every generator action."""
    a, f = x.algebra, x.field
    elems = list(a.idempotents) + [g for g, _, _ in a.generators]
    xs = [x.act(e).a for e in elems]
    ys = [y.act(e).a for e in elems]
    n = x.dim * y.dim
    count = 0
    for entries in itertools.product(range(f.p), repeat=n):
        h = np.array(entries, dtype=np.int64).reshape(y.dim, x.dim)
        if all(not np.any((h @ xa - ya @ h) % f.p) for xa, ya in zip(xs, ys)):
            count += 1
    return round(np.log(count) / np.log(f.p))


def small_module(a, seed, cap=3):
    x = random_module(a, rng_from(seed), max_generators=2)
    return x if x.dim <= cap else zero_module(a)


def base_change(x, seed):
    f = x.field
    rng = rng_from(seed)
    while True:
        g = Matrix(f, f.random((x.dim, x.dim), rng))
        if is_invertible(g):
            break
    gi = inverse(g)
    stack = np.stack([(g @ Matrix(f, s) @ gi).a for s in x.stack]) if x.dim else x.stack
    return Module(x.algebra, x.side, stack)


# -- examples -------------------------------------------------------------------------------

def test_three_cycle_examples(cycle):
    s, p, covers = simples_and_projectives(cycle)
    assert hom_dim(p[0], p[0]) == 1 and hom_dim(s[0], s[1]) == 0
    assert is_isomorphic(syzygy(s[0]), s[1]).verdict == "yes"
    assert is_isomorphic(s[0], s[1]).verdict == "no"
    fac = hom_factorization(covers[0])
    assert is_isomorphic(fac.kernel, s[1]).verdict == "yes" and fac.cokernel.dim == 0
    total, inj, proj = direct_sum(p)
    assert is_isomorphic(regular_module(cycle), total).verdict == "yes"
    assert direct_sum([s[0], s[1]])[0].dim == 2
    assert direct_sum([], cycle)[0].dim == 0
    assert is_isomorphic(projective_cover(s[0]).free.module, p[0]).verdict == "yes"
    assert str(pd_verdict(s[0])) == "InfinitePeriodic(3)"
    assert ext_dim(s[0], s[1], 1) == 1
    assert star(p[0]).dim == 2 and star(s[0]).dim == 1
    sr, pr, _ = simples_and_projectives(cycle, RIGHT)
    assert is_isomorphic(star(p[0]), pr[0]).verdict == "yes"


def test_resolution_period_three(cycle):
    s = simples_and_projectives(cycle)[0]
    res = projective_resolution(s[0], 6)
    vecs = [m.dimension_vector for m in res.modules]
    assert vecs[:6] == [(1, 1, 0), (0, 1, 1), (1, 0, 1)] * 2
    assert not res.finished()


def test_identity_and_zero_factorizations(cycle):
    from tensor_gorenstein.modcat import ModuleHom
    p = simples_and_projectives(cycle)[1][0]
    ident = ModuleHom(p, p, Matrix.identity(p.field, p.dim))
    fac = hom_factorization(ident)
    assert fac.kernel.dim == 0 and fac.cokernel.dim == 0
    q = simples_and_projectives(cycle)[1][1]
    zero = ModuleHom(p, q, Matrix.zeros(p.field, q.dim, p.dim))
    fac = hom_factorization(zero)
    assert fac.kernel.dim == p.dim and fac.cokernel.dim == q.dim


def test_a2_examples(a2):
    s, p, _ = simples_and_projectives(a2)
    assert [x.dim for x in p] == [2, 1]
    res = projective_resolution(s[0], 3)
    assert [m.dimension_vector for m in res.modules] == [(1, 1), (0, 1)] and res.finished()
    assert str(pd_verdict(s[0])) == "Finite(1)"


def test_dual_numbers_examples(dual):
    k = simples_and_projectives(dual)[0][0]
    kr = simples_and_projectives(dual, RIGHT)[0][0]
    assert is_isomorphic(syzygy(k), k).verdict == "yes"
    v = pd_verdict(k)
    assert (v.kind, v.value) == ("periodic", 1)
    assert tor_dim(kr, k, 1) == 1


def test_ground_field():
    from tensor_gorenstein.algebra import product_algebra
    from tensor_gorenstein.linalg import FieldSpec
    k = product_algebra(FieldSpec.prime(2), 1)
    s, p, _ = simples_and_projectives(k)
    assert s[0].dim == p[0].dim == 1 and is_projective(s[0])


def test_dual_exchanges_top_and_socle(cycle):
    reg = regular_module(cycle)
    assert top_vector(dual_D(reg)) == socle_vector(reg)


def test_invalid_module_rejected(cycle):
    f = cycle.field
    with pytest.raises(NotAModule):
        # a2 * a1 must act as zero
        module_from_generators(cycle, LEFT, (1, 1, 1),
                               [np.ones((1, 1), dtype=np.int64)] * 3)


def test_homdim_verdicts():
    assert str(HomDim.finite(2)) == "Finite(2)"
    assert str(HomDim.periodic(3)) == "InfinitePeriodic(3)"
    assert str(HomDim.at_least(5)) == "AtLeast(5)"


# -- oracles and invariants -------------------------------------------------------------------

@given(seeds, seeds)
def test_hom_dim_matches_brute_force(s1, s2):
    for a in (three_cycle(), a2_path()):
        x, y = small_module(a, s1), small_module(a, s2)
        if x.dim * y.dim <= 9:
            assert hom_dim(x, y) == brute_hom_dim(x, y)


def test_krull_schmidt_count_three_cycle():
    # indecomposables: three simples (dim 1) and three projectives (dim 2); classes of
    # total dim <= 4 are the multisets of these, counted by 1 / ((1-x)^3 (1-x^2)^3)
    series = np.zeros(5, dtype=int)
    series[0] = 1
    for weight in (1, 1, 1, 2, 2, 2):
        for n in range(weight, 5):
            series[n] += series[n - weight]
    assert series.sum() == 71
    assert len(enumerate_modules(three_cycle(), 4)) == 71


def test_krull_schmidt_count_a2():
    # S1, S2 (dim 1) and P1 (dim 2)
    assert len(enumerate_modules(a2_path(), 3)) == 1 + 2 + 4 + 6


@given(seeds, seeds)
def test_euler_form_on_hereditary_algebra(s1, s2):
    a = a2_path()
    x, y = random_module(a, rng_from(s1)), random_module(a, rng_from(s2))
    dx, dy = x.dimension_vector, y.dimension_vector
    euler = dx[0] * dy[0] + dx[1] * dy[1] - dx[0] * dy[1]
    assert hom_dim(x, y) - ext_dim(x, y, 1) == euler
    assert ext_dim(x, y, 2) == 0


@given(seeds, seeds)
def test_ext_duality(s1, s2):
    a = three_cycle()
    x, y = random_module(a, rng_from(s1)), random_module(a, rng_from(s2))
    assert ext_dims(x, y, 3) == ext_dims(dual_D(y), dual_D(x), 3)


@given(seeds, seeds)
def test_ext_dimension_shift(s1, s2):
    a = three_cycle()
    x, y = random_module(a, rng_from(s1)), random_module(a, rng_from(s2))
    e = ext_dims(x, y, 3)
    e_omega = ext_dims(syzygy(x), y, 2)
    assert e[2:] == e_omega[1:]


@given(seeds, seeds)
def test_tor_balance(s1, s2):
    for a in (three_cycle(), dual_numbers(), a2_path()):
        y = random_module(a, rng_from(s1), side=RIGHT)
        x = random_module(a, rng_from(s2))
        assert tor_dims(y, x, 3) == tor_dims_via_right(y, x, 3)


@given(seeds)
def test_double_dual_and_base_change(seed):
    a = three_cycle()
    x = random_module(a, rng_from(seed))
    assert is_isomorphic(dual_D(dual_D(x)), x).verdict == "yes"
    assert is_isomorphic(base_change(x, seed + 1), x).verdict == "yes"


@given(seeds)
def test_resolution_is_exact(seed):
    from tensor_gorenstein.linalg import homology_dim, rank
    x = random_module(three_cycle(), rng_from(seed))
    res = projective_resolution(x, 4)
    assert all(is_projective(m) for m in res.modules)
    if x.dim == 0:
        assert res.modules == []
        return
    aug = res.augmentation.matrix
    assert rank(aug) == x.dim
    maps = [aug] + [d.matrix for d in res.differentials]
    for d_in, d_out in zip(maps[1:], maps):
        assert homology_dim(d_in, d_out) == 0
    # the last syzygy is the kernel of the last map
    last = maps[-1]
    assert last.cols - rank(last) == res.syzygy(len(maps)).dim


@given(seeds)
def test_star_of_projective_is_projective(seed):
    a = three_cycle()
    p = simples_and_projectives(a)[1]
    rng = rng_from(seed)
    picks = [p[int(i)] for i in rng.integers(0, 3, size=2)]
    total = direct_sum(picks)[0]
    assert is_projective(star(total)) and star(total).dim == total.dim


@given(seeds)
def test_pd_over_hereditary_is_at_most_one(seed):
    v = pd_verdict(random_module(a2_path(), rng_from(seed)))
    assert v.kind == "finite" and v.value <= 1
