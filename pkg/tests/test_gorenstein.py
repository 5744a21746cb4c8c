import pytest
from hypothesis import given, strategies as st

from conftest import rng_from, seeds
from tensor_gorenstein.enumeration import enumerate_modules
from tensor_gorenstein.errors import Inconclusive, NotGorensteinProjective
from tensor_gorenstein.gorenstein import (GorensteinContext, admissible_report, cm_free_scan,
                                          frobenius_embedding, gmon_test, gorenstein_context,
                                          gp_coresolution, gp_embedding, gp_test, gpd,
                                          injective_dimension, m_flat_test, m_flat_test_via_powers,
                                          perfect_test, sandwich, tensor_ring_delta)
from tensor_gorenstein.modcat import (LEFT, RIGHT, HomDim, direct_sum, is_isomorphic,
                                      is_projective, nth_syzygy, pd_verdict, random_module,
                                      simples_and_projectives, syzygy)
from tensor_gorenstein.scenario import builtin
from tensor_gorenstein.selftest import (a2_path, dual_numbers, dual_numbers_bimodule,
                                        example_bimodule, example_ring, ground, three_cycle)
from tensor_gorenstein.tensor_ring import (build_tensor_ring, induce, module_from_rep,
                                           rep_from_module, zero_bimodule, zero_rep)

BATTERY = [f"battery-{i:02d}" for i in range(22)]


def ctx_of(a):
    return gorenstein_context(a)


# -- examples -------------------------------------------------------------------------------

def test_injective_dimensions():
    assert str(injective_dimension(three_cycle(), LEFT)) == "Finite(0)"
    assert str(injective_dimension(three_cycle(), RIGHT)) == "Finite(0)"
    assert str(injective_dimension(a2_path())) == "Finite(1)"
    assert str(injective_dimension(dual_numbers())) == "Finite(0)"


def test_gorenstein_dimensions():
    assert str(ctx_of(three_cycle()).gdim) == "Finite(0)"
    assert str(ctx_of(example_ring().algebra).gdim) == "Finite(1)"
    assert str(ctx_of(a2_path()).gdim) == "Finite(1)"


def test_gp_examples():
    a = a2_path()
    ctx = ctx_of(a)
    s, p, _ = simples_and_projectives(a)
    assert str(gp_test(s[0], ctx)) == "NotGP"
    assert str(gpd(s[0], ctx)) == "Finite(1)"
    assert all(gp_test(x, ctx) and str(gpd(x, ctx)) == "Finite(0)" for x in p)
    c = ctx_of(three_cycle())
    assert all(gp_test(x, c) and str(gpd(x, c)) == "Finite(0)"
               for x in enumerate_modules(three_cycle(), 3))


def test_coresolution_examples():
    a = three_cycle()
    c = ctx_of(a)
    s, p, _ = simples_and_projectives(a)
    co = gp_coresolution(s[0], c, 5)
    assert is_isomorphic(co.terms[0], p[2]).verdict == "yes"
    assert is_isomorphic(co.cosyzygies[0], s[2]).verdict == "yes"
    vecs = [x.dimension_vector for x in co.cosyzygies]
    assert vecs[:6] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)] * 2
    pc = gp_coresolution(p[0], c, 2)
    assert is_isomorphic(pc.terms[0], p[0]).verdict == "yes" and pc.cosyzygies[0].dim == 0
    with pytest.raises(NotGorensteinProjective):
        gp_coresolution(simples_and_projectives(a2_path())[0][0], ctx_of(a2_path()), 1)


def test_cm_free_examples():
    assert cm_free_scan(a2_path(), ctx_of(a2_path()), 4).kind == "cm_free_up_to"
    assert cm_free_scan(ground(), ctx_of(ground()), 4).kind == "cm_free_up_to"
    v = cm_free_scan(three_cycle(), ctx_of(three_cycle()), 4)
    assert v.kind == "witness"
    assert is_isomorphic(v.witness, simples_and_projectives(three_cycle())[0][0]).verdict == "yes"


def test_gmon_examples():
    t, r = example_ring(), three_cycle()
    s, p, _ = simples_and_projectives(r)
    c = ctx_of(r)
    assert str(gmon_test(t, zero_rep(t, s[1]), c)) == "InGmon"
    assert str(gmon_test(t, zero_rep(t, s[2]), c)) == "NotInGmon"
    for q in p:
        assert str(gmon_test(t, induce(t, q).module, c)) == "InGmon"


def test_m_flat_examples():
    r = three_cycle()
    for x in enumerate_modules(r, 3):
        assert m_flat_test(example_bimodule(), x).kind == "m_flat"
    for q in simples_and_projectives(r)[1]:
        assert m_flat_test(zero_bimodule(r), q).kind == "m_flat"
    k = simples_and_projectives(dual_numbers())[0][0]
    v = m_flat_test(dual_numbers_bimodule(), k)
    assert v.kind == "not_m_flat" and v.witness[0] == 1


def test_perfect_examples():
    rep = perfect_test(example_bimodule())
    assert rep.perfect == "yes" and rep.condition_p == "pass"
    assert perfect_test(zero_bimodule(three_cycle())).perfect == "yes"
    bad = perfect_test(dual_numbers_bimodule())
    assert bad.perfect == "no" and bad.pd_left.is_infinite and bad.pd_right.is_infinite


def test_admissible_examples():
    simples = simples_and_projectives(three_cycle())[0]
    rep = admissible_report(example_bimodule(), simples)
    assert rep.left == rep.right == "verified-on-family" and rep.via_perfectness
    z = admissible_report(zero_bimodule(three_cycle()), simples)
    assert not z.failures


def test_frobenius_examples():
    t, r = example_ring(), three_cycle()
    s, p, _ = simples_and_projectives(r)
    fe = frobenius_embedding(t, zero_rep(t, s[1]), ctx_of(r))
    assert is_isomorphic(fe.target.source, p[0]).verdict == "yes"
    assert fe.map.is_injective() and fe.cokernel_verdict.kind == "in"
    from tensor_gorenstein.modcat import zero_module
    fz = frobenius_embedding(t, zero_rep(t, zero_module(r)), ctx_of(r))
    assert fz.target.module.dim == 0


def test_example_sandwich():
    t = example_ring()
    delta, left, right = tensor_ring_delta(t)
    assert str(delta) == "Finite(0)"
    sw = sandwich(0, delta.value, ctx_of(t.algebra).gdim.value)
    assert sw.holds and str(sw) == "0 <= 1 <= 1"


def test_strict_context_raises_when_undecided():
    from tensor_gorenstein.algebra import Arrow, Presentation, Quiver, build_from_quiver
    # 1 -> 2 -> 3 with the composite zero: self-injective dimension 2
    q = Quiver(3, (Arrow("a", 0, 1), Arrow("b", 1, 2)))
    a = build_from_quiver(Presentation(q, (("b", "a"),)), three_cycle().field)
    assert str(gorenstein_context(a).gdim) == "Finite(2)"
    with pytest.raises(Inconclusive):
        gorenstein_context(a, bound=1, strict=True)
    assert gorenstein_context(a, bound=1).gdim.kind == "at_least"


# -- invariants -------------------------------------------------------------------------------

@given(seeds)
def test_bounded_test_agrees_with_exact_test(seed):
    t = example_ring()
    exact = ctx_of(t.algebra)
    blind = GorensteinContext(t.algebra, HomDim.at_least(8), HomDim.at_least(8),
                              HomDim.at_least(8), 8)
    x = random_module(t.algebra, rng_from(seed))
    assert gp_test(x, exact).kind == gp_test(x, blind).kind


@given(seeds, seeds)
def test_gp_closed_under_sums_and_syzygies(s1, s2):
    t = example_ring()
    c = ctx_of(t.algebra)
    x = syzygy(random_module(t.algebra, rng_from(s1)))      # Omega^d is GP when d = 1
    y = syzygy(random_module(t.algebra, rng_from(s2)))
    assert gp_test(x, c) and gp_test(y, c)
    assert gp_test(direct_sum([x, y])[0], c)
    assert gp_test(syzygy(x), c)


@given(seeds)
def test_gpd_bounded_by_gorenstein_dimension(seed):
    for a in (example_ring().algebra, a2_path()):
        c = ctx_of(a)
        x = random_module(a, rng_from(seed))
        g = gpd(x, c)
        assert g.value <= c.gdim.value
        pd = pd_verdict(x)
        if pd.is_finite:
            assert g.value == pd.value


@given(seeds)
def test_gp_embedding_has_gp_cokernel(seed):
    from tensor_gorenstein.modcat import quotient
    t = example_ring()
    c = ctx_of(t.algebra)
    g = syzygy(random_module(t.algebra, rng_from(seed)))
    free, hom = gp_embedding(g)
    assert hom.is_injective()
    cok, _, _ = quotient(free.module, hom.matrix)
    assert gp_test(cok, c)


@given(st.sampled_from(BATTERY), seeds)
def test_m_flat_criteria_agree(name, seed):
    b = builtin(name).built
    y = random_module(b.algebra, rng_from(seed))
    u, v = m_flat_test(b.bimodule, y), m_flat_test_via_powers(b.bimodule, y)
    assert (u.kind == "m_flat") == (v.kind == "m_flat")


@given(st.sampled_from(BATTERY))
def test_tensor_pd_bounded_by_powers_of_bimodule(name):
    # pd of T over R on either side is at most N times pd of M on that side
    b = builtin(name).built
    t = build_tensor_ring(b.algebra, b.bimodule)
    _, left, right = tensor_ring_delta(t)
    n = t.nilpotency_index
    pl, pr = pd_verdict(b.bimodule.left_module()), pd_verdict(b.bimodule.right_module())
    assert left.value <= n * pl.value and right.value <= n * pr.value


@given(st.sampled_from(BATTERY), seeds)
def test_gmon_objects_have_gp_cokernels(name, seed):
    b = builtin(name).built
    t = build_tensor_ring(b.algebra, b.bimodule)
    c = ctx_of(b.algebra)
    y = random_module(t.algebra, rng_from(seed))
    v = gmon_test(t, y, c)
    rep = rep_from_module(t, y)
    if v.kind == "in":
        assert rep.u.cols == 0 or rep.u_hom.is_injective()
        assert gp_test(v.cokernel, c)
