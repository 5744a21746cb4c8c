import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rng_from, seeds
from tensor_gorenstein.linalg import Matrix, hstack, rank
from tensor_gorenstein.modcat import (LEFT, RIGHT, ModuleHom, hom_basis, is_isomorphic,
                                      is_projective, random_module, regular_module,
                                      simples_and_projectives)
from tensor_gorenstein.scenario import builtin
from tensor_gorenstein.selftest import a2_path, example_bimodule, example_ring, three_cycle
from tensor_gorenstein.tensor_ring import (NotNilpotentUpTo, Bimodule, build_tensor_ring,
                                           check_adjunction, convert_rep, induce, induce_map,
                                           module_from_rep, nilpotency_index, outer_tensor,
                                           rep_from_module, split_mono_normal_form,
                                           standard_sequence, tensor_over_R, tensor_power,
                                           zero_bimodule, zero_rep)

BATTERY = [f"battery-{i:02d}" for i in range(0, 22, 3)]


def battery_pair(name):
    b = builtin(name).built
    return b.algebra, b.bimodule


def full_relations(m, x):
    """All ``m b (x) x - m (x) b x`` over the whole basis of R: the defining relations."""
    r, f = m.right_algebra, m.field
    eye_m, eye_x = f.eye(m.dim), f.eye(x.dim)
    cols = [f.reduce(np.kron(m.right[b], eye_x) - np.kron(eye_m, x.stack[b])) for b in range(r.dim)]
    return Matrix(f, np.hstack(cols))


# -- examples -------------------------------------------------------------------------------

def test_example_bimodule():
    r = three_cycle()
    m = example_bimodule()
    s = simples_and_projectives(r)[0]
    assert m.dim == 4
    assert tensor_over_R(m, s[1]).result.dim == 0
    assert tensor_over_R(m, s[2]).result.dim == 2
    assert tensor_power(m, 2).dim == 0
    assert nilpotency_index(m) == 1
    assert nilpotency_index(zero_bimodule(r)) == 0


def test_corner_tensor_simple():
    from tensor_gorenstein.algebra import product_algebra
    r = three_cycle()
    k = product_algebra(r.field, 1)
    e3r = simples_and_projectives(r, RIGHT)[1][2]
    corner = Bimodule(k, r, np.eye(e3r.dim, dtype=np.int64)[None], e3r.stack)
    assert tensor_over_R(corner, simples_and_projectives(r)[0][2]).result.dim == 1


def test_ground_field_bimodule_is_not_nilpotent():
    from tensor_gorenstein.algebra import product_algebra
    k = product_algebra(three_cycle().field, 1)
    kk = outer_tensor(simples_and_projectives(k)[0][0], simples_and_projectives(k, RIGHT)[0][0])
    assert kk.dim == 1
    v = nilpotency_index(kk, 5)
    assert isinstance(v, NotNilpotentUpTo) and v.cap == 5


def test_outer_with_zero_factor():
    r = three_cycle()
    from tensor_gorenstein.modcat import zero_module
    z = outer_tensor(zero_module(r), simples_and_projectives(r, RIGHT)[1][0])
    assert z.dim == 0 and z.is_zero()


def test_example_tensor_ring():
    t = example_ring()
    assert t.dim == 10 and [b - a for a, b in t.grade_ranges] == [6, 4]
    reg = regular_module(t.algebra)
    rep = convert_rep(t, reg)
    assert rep.base.dim == 10
    assert np.array_equal(convert_rep(t, rep).stack, reg.stack)
    s, p, _ = simples_and_projectives(three_cycle())
    assert is_projective(induce(t, p[0]).module)
    assert induce(t, s[2]).module.dim == 3


def test_zero_bimodule_ring_is_base():
    r = three_cycle()
    t = build_tensor_ring(r, zero_bimodule(r))
    assert t.dim == r.dim and np.array_equal(t.algebra.table, r.table)
    x = simples_and_projectives(r)[0][0]
    ind = induce(t, x)
    assert ind.module.dim == x.dim
    seq = standard_sequence(zero_rep(t, x))
    assert (seq.left.module.dim, seq.middle.module.dim, seq.module.dim) == (0, 1, 1)


def test_formal_matrix_ring():
    from tensor_gorenstein.algebra import product_algebra, tables_isomorphic_by_permutation
    k2 = product_algebra(three_cycle().field, 2)
    m = outer_tensor(simples_and_projectives(k2)[0][0], simples_and_projectives(k2, RIGHT)[0][1])
    t = build_tensor_ring(k2, m)
    assert t.dim == 3
    assert tables_isomorphic_by_permutation(t.algebra, a2_path()) is not None


def test_split_mono_examples():
    t = example_ring()
    s, p, _ = simples_and_projectives(three_cycle())
    v = split_mono_normal_form(zero_rep(t, s[1]))
    assert str(v) == "Induced" and is_isomorphic(v.cokernel, s[1]).verdict == "yes"
    assert str(split_mono_normal_form(zero_rep(t, s[2]))) == "NotInduced"


def test_standard_sequence_for_s2():
    t = example_ring()
    s2 = simples_and_projectives(three_cycle())[0][1]
    seq = standard_sequence(zero_rep(t, s2))
    assert (seq.left.module.dim, seq.middle.module.dim, seq.module.dim) == (0, 1, 1)


# -- oracles and invariants -------------------------------------------------------------------

@given(st.sampled_from(BATTERY + ["paper-example-1"]), seeds)
def test_quotient_kernel_is_spanned_by_balancing_relations(name, seed):
    r, m = battery_pair(name)
    x = random_module(r, rng_from(seed))
    if m.dim * x.dim == 0:
        return
    tp = tensor_over_R(m, x)
    rel = full_relations(m, x)
    n = m.dim * x.dim
    assert (tp.quotient @ rel).is_zero()
    assert rank(rel) == n - tp.result.dim
    assert tp.quotient @ tp.section == Matrix.identity(m.field, tp.result.dim)


@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_outer_tensor_dimension(seed, i, j):
    r = three_cycle()
    p = simples_and_projectives(r)[1][i]
    q = simples_and_projectives(r, RIGHT)[1][j]
    m = outer_tensor(p, q)
    x = random_module(r, rng_from(seed))
    # (A e_i (x)_k e_j A) (x)_A X = A e_i (x)_k e_j X
    assert tensor_over_R(m, x).result.dim == p.dim * x.dimension_vector[j]
    # second power: A e_i (x) e_j A e_i (x) e_j A
    corner = p.dimension_vector[j]                       # dim e_j A e_i
    assert tensor_power(m, 2).dim == p.dim * corner * q.dim


@given(st.sampled_from(BATTERY), seeds)
def test_rep_conversion_is_a_bijection(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    y = random_module(t.algebra, rng_from(seed))
    rep = rep_from_module(t, y)
    back = module_from_rep(t, rep)
    assert np.array_equal(back.stack, y.stack)
    again = rep_from_module(t, back)
    assert again.u == rep.u


@given(st.sampled_from(BATTERY), seeds)
def test_adjunction_dimensions(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    rng = rng_from(seed)
    lhs, rhs = check_adjunction(t, random_module(r, rng), random_module(t.algebra, rng))
    assert lhs == rhs


@given(st.sampled_from(BATTERY), seeds)
def test_induction_is_a_functor(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    rng = rng_from(seed)
    x, y, z = (random_module(r, rng) for _ in range(3))
    ix, iy, iz = induce(t, x), induce(t, y), induce(t, z)
    ident = ModuleHom(x, x, Matrix.identity(r.field, x.dim))
    assert induce_map(t, ix, ix, ident).matrix == Matrix.identity(r.field, ix.module.dim)
    for g in hom_basis(x, y)[:3]:
        ig = induce_map(t, ix, iy, g)
        ModuleHom(ix.module, iy.module, ig.matrix, validate=True)
        for h in hom_basis(y, z)[:3]:
            comp = ModuleHom(x, z, h.matrix @ g.matrix)
            assert induce_map(t, ix, iz, comp).matrix == induce_map(t, iy, iz, h).matrix @ ig.matrix


@given(st.sampled_from(BATTERY), seeds)
def test_induced_modules_split(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    a = random_module(r, rng_from(seed))
    ind = induce(t, a)
    # Ind(a) = a + M (x) a + M^2 (x) a + ...
    assert ind.module.dim == sum(tensor_over_R(t.grade_bimodule(i), a).result.dim
                                 for i in range(len(t.grade_ranges)))
    v = split_mono_normal_form(rep_from_module(t, ind.module))
    assert v.kind == "induced" and is_isomorphic(v.cokernel, a).verdict == "yes"


@given(st.sampled_from(BATTERY), seeds)
def test_standard_sequence_exact(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    y = random_module(t.algebra, rng_from(seed))
    seq = standard_sequence(rep_from_module(t, y))
    assert seq.phi.is_injective() and seq.eta.is_surjective()
    assert (seq.eta.matrix @ seq.phi.matrix).is_zero()
    assert seq.euler_characteristic == 0


@given(st.sampled_from(BATTERY), seeds)
def test_projectives_induce_to_projectives(name, seed):
    r, m = battery_pair(name)
    t = build_tensor_ring(r, m)
    for p in simples_and_projectives(r)[1]:
        assert is_projective(induce(t, p).module)
