"""Worked examples as executable fixtures.

Every fixture recomputes a known value from scratch and compares exactly.
``run_selftest`` returns one :class:`FixtureResult` per fixture; the CLI's
``selftest`` subcommand prints them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from .algebra import (Arrow, Presentation, Quiver, build_from_quiver,
                      build_from_structure_constants, product_algebra,
                      tables_isomorphic_by_permutation)
from .enumeration import enumerate_modules
from .errors import NotAssociative
from .gorenstein import (admissible_report, cm_free_scan, frobenius_embedding, gmon_test,
                         gorenstein_context, gp_coresolution, gp_test, gpd,
                         injective_dimension, m_flat_test, perfect_test)
from .linalg import FieldSpec, Matrix, homology_dim, kernel_basis, kron, rref_rank, solve
from .modcat import (LEFT, RIGHT, direct_sum, dual_D, ext_dim, hom_dim, hom_factorization,
                     is_isomorphic, is_projective, pd_verdict, projective_cover,
                     projective_resolution, radical_submodule, regular_module,
                     simples_and_projectives, star, syzygy, tor_dim, zero_module)
from .tensor_ring import (Bimodule, NotNilpotentUpTo, build_tensor_ring, induce, module_from_rep,
                          nilpotency_index, outer_tensor, rep_from_module, split_mono_normal_form,
                          standard_sequence, tensor_over_R, tensor_power, zero_bimodule, zero_rep)

GF2 = FieldSpec.prime(2)
QQ = FieldSpec.rationals()


# -- shared objects --------------------------------------------------------------------------

@cache
def three_cycle(field=GF2):
    q = Quiver(3, (Arrow("a1", 0, 1), Arrow("a2", 1, 2), Arrow("a3", 2, 0)))
    return build_from_quiver(Presentation(q, (("a2", "a1"), ("a3", "a2"), ("a1", "a3"))), field)


@cache
def a2_path(field=GF2):
    return build_from_quiver(Presentation(Quiver(2, (Arrow("b", 0, 1),)), ()), field)


@cache
def dual_numbers(field=GF2):
    q = Quiver(1, (Arrow("x", 0, 0),))
    return build_from_quiver(Presentation(q, (("x", "x"),)), field)


@cache
def ground(field=GF2):
    return product_algebra(field, 1)


@cache
def parts(a, side=LEFT):
    return simples_and_projectives(a, side)


@cache
def example_bimodule():
    """``M = A e1 (x)_k e3 A`` over the three-cycle algebra."""
    r = three_cycle()
    return outer_tensor(parts(r)[1][0], parts(r, RIGHT)[1][2])


@cache
def example_ring():
    return build_tensor_ring(three_cycle(), example_bimodule())


@cache
def dual_numbers_bimodule():
    d = dual_numbers()
    return outer_tensor(parts(d)[0][0], parts(d, RIGHT)[0][0])


def upper_triangular(field=QQ):
    """2x2 upper triangular matrices on the basis ``e11, e12, e22``."""
    t = np.zeros((3, 3, 3), dtype=object)
    for i, j, k in ((0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)):
        t[i, j, k] = Fraction(1)
    return build_from_structure_constants(t, field, unit=[1, 0, 1],
                                          idempotents=[[1, 0, 0], [0, 0, 1]],
                                          labels=["e11", "e12", "e22"])


def socle_vector(x):
    """Dimension vector of ``{v : J v = 0}``."""
    lx = x.as_left()
    a, f = lx.algebra, lx.field
    j = a.radical()
    out = []
    for b, _ in lx.vertex_data:
        if j.cols == 0 or b.cols == 0:
            out.append(b.cols)
            continue
        acts = [lx.act(j.a[:, c]) @ b for c in range(j.cols)]
        stacked = Matrix(f, np.vstack([m.a for m in acts]))
        out.append(kernel_basis(stacked).cols)
    return tuple(out)


def top_vector(x):
    lx = x.as_left()
    jx = radical_submodule(lx)
    below = [0] * len(lx.dimension_vector)
    for v, (b, proj) in enumerate(lx.vertex_data):
        below[v] = rref_rank(proj @ jx)[1] if jx.cols else 0
    return tuple(d - r for d, r in zip(lx.dimension_vector, below))


# -- fixtures --------------------------------------------------------------------------------

@dataclass
class FixtureResult:
    name: str
    module: str
    ok: bool
    detail: str
    elapsed: float = 0.0


FIXTURES = []


def fixture(module):
    def register(fn):
        FIXTURES.append((module, fn.__name__.removeprefix("fx_").replace("_", "-"), fn))
        return fn
    return register


def _m(field, rows):
    return Matrix(field, field.array(rows))


# exact-linalg

@fixture("exact-linalg")
def fx_rank_proportional_rows():
    _, r, _ = rref_rank(_m(QQ, [[1, 2], [2, 4]]))
    return r == 1, f"rank {r}"


@fixture("exact-linalg")
def fx_rank_gf2_ones():
    _, r, _ = rref_rank(_m(GF2, [[1, 1], [1, 1]]))
    return r == 1, f"rank {r}"


@fixture("exact-linalg")
def fx_kernel_of_row():
    k = kernel_basis(_m(QQ, [[1, 1]]))
    ok = k.cols == 1 and k.a[0, 0] == -k.a[1, 0] != 0
    return ok, f"kernel {k.tolist()}"


@fixture("exact-linalg")
def fx_solve_half():
    x = solve(_m(QQ, [[2]]), _m(QQ, [[1]]))
    return x.a[0, 0] == Fraction(1, 2), f"x = {x.tolist()}"


@fixture("exact-linalg")
def fx_solve_inconsistent():
    x = solve(_m(QQ, [[1], [1]]), _m(QQ, [[0], [1]]))
    return x is None, "NoSolution" if x is None else f"x = {x.tolist()}"


@fixture("exact-linalg")
def fx_kron_shape():
    k = kron(Matrix.zeros(QQ, 2, 3), Matrix.zeros(QQ, 4, 5))
    return k.shape == (8, 15), f"shape {k.shape}"


@fixture("exact-linalg")
def fx_homology_dual_numbers():
    # ker x = im x on k[x]/(x^2), so the complex is exact there
    x = _m(QQ, [[0, 0], [1, 0]])
    h = homology_dim(x, x)
    return h == 0, f"homology {h}"


# algebra-core

@fixture("algebra-core")
def fx_three_cycle_dim():
    a = three_cycle()
    return a.dim == 6 and list(a.labels) == ["e1", "e2", "e3", "a1", "a2", "a3"], \
        f"dim {a.dim}, basis {list(a.labels)}"


@fixture("algebra-core")
def fx_dual_numbers_dim():
    return dual_numbers().dim == 2, f"dim {dual_numbers().dim}"


@fixture("algebra-core")
def fx_a2_path_basis():
    a = a2_path()
    return a.dim == 3, f"dim {a.dim}, basis {list(a.labels)}"


@fixture("algebra-core")
def fx_upper_triangular_radical():
    a = upper_triangular()
    return a.dim == 3 and a.radical().cols == 1, f"dim {a.dim}, radical {a.radical().cols}"


@fixture("algebra-core")
def fx_non_associative_rejected():
    bad = np.zeros((3, 3, 3), dtype=np.int64)
    bad[0, :, :] = np.eye(3, dtype=np.int64)
    bad[:, 0, :] = np.eye(3, dtype=np.int64)
    bad[1, 1, 2] = 1                         # b*b = c, c*b = b, b*c = 0
    bad[2, 1, 1] = 1
    try:
        build_from_structure_constants(bad, GF2, unit=[1, 0, 0], require_radical=False)
    except NotAssociative:
        return True, "NotAssociative"
    return False, "table accepted"


@fixture("algebra-core")
def fx_opposite_three_cycle():
    a = three_cycle()
    op = a.opposite()
    arrows = sorted((s, t) for _, s, t in op.generators)
    return op.dim == 6 and arrows == [(0, 2), (1, 0), (2, 1)], f"dim {op.dim}, arrows {arrows}"


@fixture("algebra-core")
def fx_radical_dims():
    got = (three_cycle().radical().cols, product_algebra(GF2, 2).radical().cols,
           dual_numbers().radical().cols)
    return got == (3, 0, 1), f"radical dims {got}"


@fixture("algebra-core")
def fx_regular_summands():
    a = three_cycle()
    dims = [p.dim for p in parts(a)[1]]
    return regular_module(a).dim == 6 and dims == [2, 2, 2], f"summands {dims}"


# module-cat

@fixture("module-cat")
def fx_hom_p1_p1():
    p = parts(three_cycle())[1]
    return hom_dim(p[0], p[0]) == 1, f"dim Hom(P1,P1) = {hom_dim(p[0], p[0])}"


@fixture("module-cat")
def fx_syzygy_s1_is_s2():
    s = parts(three_cycle())[0]
    v = is_isomorphic(syzygy(s[0]), s[1]).verdict
    return v == "yes", f"is_isomorphic = {v}"


@fixture("module-cat")
def fx_kernel_of_top_map():
    a = three_cycle()
    s, p, covers = parts(a)
    fac = hom_factorization(covers[0])
    v = is_isomorphic(fac.kernel, s[1]).verdict
    return v == "yes", f"kernel ~ S2: {v}"


@fixture("module-cat")
def fx_regular_is_sum_of_projectives():
    a = three_cycle()
    total, _, _ = direct_sum(list(parts(a)[1]))
    v = is_isomorphic(regular_module(a), total).verdict
    return v == "yes", f"is_isomorphic = {v}"


@fixture("module-cat")
def fx_projectives_a2():
    dims = [p.dim for p in parts(a2_path())[1]]
    return dims == [2, 1], f"dims {dims}"


@fixture("module-cat")
def fx_cover_of_s1():
    a = three_cycle()
    cov = projective_cover(parts(a)[0][0])
    v = is_isomorphic(cov.free.module, parts(a)[1][0]).verdict
    return v == "yes", f"cover ~ P1: {v}"


@fixture("module-cat")
def fx_syzygy_of_k():
    k = parts(dual_numbers())[0][0]
    v = is_isomorphic(syzygy(k), k).verdict
    return v == "yes", f"is_isomorphic = {v}"


@fixture("module-cat")
def fx_resolution_period_three():
    a = three_cycle()
    res = projective_resolution(parts(a)[0][0], 5)
    tops = [m.dimension_vector for m in res.modules[:6]]
    want = [(1, 1, 0), (0, 1, 1), (1, 0, 1)] * 2
    return tops == want, f"terms {tops}"


@fixture("module-cat")
def fx_resolution_a2():
    a = a2_path()
    res = projective_resolution(parts(a)[0][0], 3)
    terms = [m.dimension_vector for m in res.modules]
    return terms == [(1, 1), (0, 1)] and res.finished, f"terms {terms}"


@fixture("module-cat")
def fx_pd_verdicts():
    got = (str(pd_verdict(parts(a2_path())[0][0])), str(pd_verdict(parts(dual_numbers())[0][0])),
           str(pd_verdict(parts(three_cycle())[0][0])))
    return got == ("Finite(1)", "InfinitePeriodic(1)", "InfinitePeriodic(3)"), str(got)


@fixture("module-cat")
def fx_dual_exchanges_socle_and_top():
    reg = regular_module(three_cycle())
    d = dual_D(reg)
    return top_vector(d) == socle_vector(reg), f"top D = {top_vector(d)}, soc = {socle_vector(reg)}"


@fixture("module-cat")
def fx_star_dims():
    a = three_cycle()
    s, p, _ = parts(a)
    sp = star(p[0])
    ok = sp.dim == 2 and is_isomorphic(sp, parts(a, RIGHT)[1][0]).verdict == "yes"
    return ok and star(s[0]).dim == 1, f"star P1 dim {sp.dim}, star S1 dim {star(s[0]).dim}"


@fixture("module-cat")
def fx_ext_s1_s2():
    s = parts(three_cycle())[0]
    return ext_dim(s[0], s[1], 1) == 1, f"Ext1 = {ext_dim(s[0], s[1], 1)}"


@fixture("module-cat")
def fx_tor_k_k():
    d = dual_numbers()
    t = tor_dim(parts(d, RIGHT)[0][0], parts(d)[0][0], 1)
    return t == 1, f"Tor1 = {t}"


# tensor-ring

@fixture("tensor-ring")
def fx_corner_tensor_simple():
    r = three_cycle()
    e3r = parts(r, RIGHT)[1][2]
    corner = Bimodule(ground(), r, np.eye(e3r.dim, dtype=np.int64)[None], e3r.stack)
    d = tensor_over_R(corner, parts(r)[0][2]).result.dim
    return d == 1, f"dim {d}"


@fixture("tensor-ring")
def fx_m_kills_s2():
    d = tensor_over_R(example_bimodule(), parts(three_cycle())[0][1]).result.dim
    return d == 0, f"dim {d}"


@fixture("tensor-ring")
def fx_outer_dim():
    return example_bimodule().dim == 4, f"dim {example_bimodule().dim}"


@fixture("tensor-ring")
def fx_square_vanishes():
    d = tensor_power(example_bimodule(), 2).dim
    return d == 0, f"dim M^2 = {d}"


@fixture("tensor-ring")
def fx_nilpotency_indices():
    got = (nilpotency_index(example_bimodule()),
           nilpotency_index(zero_bimodule(three_cycle())))
    k = ground()
    kk = outer_tensor(parts(k)[0][0], parts(k, RIGHT)[0][0])
    nn = nilpotency_index(kk, 6)
    return got == (1, 0) and isinstance(nn, NotNilpotentUpTo), f"{got}, k: {nn}"


@fixture("tensor-ring")
def fx_tensor_ring_dim():
    return example_ring().dim == 10, f"dim {example_ring().dim}"


@fixture("tensor-ring")
def fx_formal_matrix_ring():
    k2 = product_algebra(GF2, 2)
    m = outer_tensor(parts(k2)[0][0], parts(k2, RIGHT)[0][1])
    t = build_tensor_ring(k2, m)
    iso = tables_isomorphic_by_permutation(t.algebra, a2_path())
    return t.dim == 3 and iso is not None, f"dim {t.dim}, table match {iso is not None}"


@fixture("tensor-ring")
def fx_regular_rep_base():
    t = example_ring()
    reg = regular_module(t.algebra)
    rep = rep_from_module(t, reg)
    back = module_from_rep(t, rep)
    ok = rep.base.dim == 10 and np.array_equal(back.stack, reg.stack)
    return ok, f"base dim {rep.base.dim}"


@fixture("tensor-ring")
def fx_induced_projective():
    t = example_ring()
    ind = induce(t, parts(three_cycle())[1][0]).module
    return is_projective(ind), f"Ind(P1) projective: {is_projective(ind)}"


@fixture("tensor-ring")
def fx_induced_simple_dim():
    d = induce(example_ring(), parts(three_cycle())[0][2]).module.dim
    return d == 3, f"dim Ind(S3) = {d}"


@fixture("tensor-ring")
def fx_standard_sequence_s2():
    seq = standard_sequence(zero_rep(example_ring(), parts(three_cycle())[0][1]))
    dims = (seq.left.module.dim, seq.middle.module.dim, seq.module.dim)
    return dims == (0, 1, 1), f"dims {dims}"


@fixture("tensor-ring")
def fx_standard_sequence_regular():
    t = example_ring()
    seq = standard_sequence(rep_from_module(t, regular_module(t.algebra)))
    return seq.euler_characteristic == 0, f"euler {seq.euler_characteristic}"


@fixture("tensor-ring")
def fx_split_mono():
    t, s = example_ring(), parts(three_cycle())[0]
    a = str(split_mono_normal_form(zero_rep(t, s[1])))
    b = str(split_mono_normal_form(zero_rep(t, s[2])))
    return (a, b) == ("Induced", "NotInduced"), f"(S2,0) {a}, (S3,0) {b}"


# gorenstein

@fixture("gorenstein")
def fx_injective_dimensions():
    got = (str(injective_dimension(three_cycle(), LEFT)), str(injective_dimension(three_cycle(), RIGHT)),
           str(injective_dimension(a2_path())), str(injective_dimension(dual_numbers())))
    return got == ("Finite(0)", "Finite(0)", "Finite(1)", "Finite(0)"), str(got)


@fixture("gorenstein")
def fx_gorenstein_dims():
    got = (str(gorenstein_context(three_cycle()).gdim),
           str(gorenstein_context(example_ring().algebra).gdim),
           str(gorenstein_context(a2_path()).gdim))
    return got == ("Finite(0)", "Finite(1)", "Finite(1)"), str(got)


@fixture("gorenstein")
def fx_gp_over_a2():
    a = a2_path()
    ctx = gorenstein_context(a)
    s1 = parts(a)[0][0]
    got = (str(gp_test(s1, ctx)), str(gpd(s1, ctx)), str(gp_test(parts(a)[1][0], ctx)))
    return got == ("NotGP", "Finite(1)", "GP"), str(got)


@fixture("gorenstein")
def fx_gp_over_three_cycle():
    a = three_cycle()
    ctx = gorenstein_context(a)
    got = {str(gp_test(x, ctx)) for x in parts(a)[0]} | {str(gpd(x, ctx)) for x in parts(a)[0]}
    return got == {"GP", "Finite(0)"}, str(sorted(got))


@fixture("gorenstein")
def fx_coresolution_s1():
    a = three_cycle()
    co = gp_coresolution(parts(a)[0][0], gorenstein_context(a), 3)
    first = is_isomorphic(co.terms[0], parts(a)[1][2]).verdict
    cos = [c.dimension_vector for c in co.cosyzygies]
    ok = first == "yes" and cos[:3] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    return ok, f"P0 ~ P3: {first}, cosyzygies {cos}"


@fixture("gorenstein")
def fx_cm_free():
    a, r = a2_path(), three_cycle()
    va = cm_free_scan(a, gorenstein_context(a), 4)
    vr = cm_free_scan(r, gorenstein_context(r), 4)
    vk = cm_free_scan(ground(), gorenstein_context(ground()), 4)
    ok = (va.kind == "cm_free_up_to" and vk.kind == "cm_free_up_to" and vr.kind == "witness"
          and is_isomorphic(vr.witness, parts(r)[0][0]).verdict == "yes")
    return ok, f"A2 {va}, three-cycle {vr}, k {vk}"


@fixture("gorenstein")
def fx_gmon_witnesses():
    t, s, p = example_ring(), parts(three_cycle())[0], parts(three_cycle())[1]
    ctx = gorenstein_context(three_cycle())
    a = str(gmon_test(t, module_from_rep(t, zero_rep(t, s[1])), ctx))
    b = str(gmon_test(t, module_from_rep(t, zero_rep(t, s[2])), ctx))
    c = str(gmon_test(t, induce(t, p[0]).module, ctx))
    return (a, b, c) == ("InGmon", "NotInGmon", "InGmon"), f"{a}, {b}, {c}"


@fixture("gorenstein")
def fx_m_flat():
    r = three_cycle()
    every = all(m_flat_test(example_bimodule(), x).kind == "m_flat" for x in parts(r)[0])
    k = parts(dual_numbers())[0][0]
    v = m_flat_test(dual_numbers_bimodule(), k)
    return every and v.kind == "not_m_flat", f"simples M-flat: {every}; k: {v}"


@fixture("gorenstein")
def fx_perfect():
    got = (perfect_test(example_bimodule()).perfect,
           perfect_test(zero_bimodule(three_cycle())).perfect,
           perfect_test(dual_numbers_bimodule()).perfect)
    return got == ("yes", "yes", "no"), str(got)


@fixture("gorenstein")
def fx_admissible():
    rep = admissible_report(example_bimodule(), list(parts(three_cycle())[0]))
    z = admissible_report(zero_bimodule(three_cycle()), list(parts(three_cycle())[0]))
    ok = not rep.failures and rep.via_perfectness and not z.failures
    return ok, f"failures {len(rep.failures)}, via perfectness {rep.via_perfectness}"


@fixture("gorenstein")
def fx_frobenius_s2():
    t, s, p = example_ring(), parts(three_cycle())[0], parts(three_cycle())[1]
    fe = frobenius_embedding(t, zero_rep(t, s[1]), gorenstein_context(three_cycle()))
    target = is_isomorphic(fe.target.source, p[0]).verdict
    ok = target == "yes" and fe.map.is_injective() and fe.cokernel_verdict.kind == "in"
    return ok, f"target Ind(P1): {target}, cokernel {fe.cokernel_verdict}"


@fixture("gorenstein")
def fx_frobenius_zero():
    t = example_ring()
    fe = frobenius_embedding(t, zero_rep(t, zero_module(three_cycle())),
                             gorenstein_context(three_cycle()))
    return fe.target.module.dim == 0 and fe.map.matrix.shape == (0, 0), \
        f"target dim {fe.target.module.dim}"


# verify-cli

@fixture("verify-cli")
def fx_enumerate_three_cycle():
    a = three_cycle()
    mods = enumerate_modules(a, 2)
    want = list(parts(a)[0]) + list(parts(a)[1])
    found = all(any(x.dimension_vector == w.dimension_vector
                    and is_isomorphic(x, w).verdict == "yes" for x in mods) for w in want)
    return found, f"{len(mods)} modules up to dim 2"


@fixture("verify-cli")
def fx_enumerate_cap_zero():
    mods = enumerate_modules(three_cycle(), 0)
    return len(mods) == 1 and mods[0].dim == 0, f"{len(mods)} modules"


@fixture("verify-cli")
def fx_enumerate_t_simples():
    mods = enumerate_modules(example_ring().algebra, 1)
    dims = sorted(m.dimension_vector for m in mods if m.dim)
    return dims == [(0, 0, 1), (0, 1, 0), (1, 0, 0)], f"simples {dims}"


@fixture("verify-cli")
def fx_audit_example_one():
    from .audit import run_audit
    from .scenario import builtin
    rep = run_audit(builtin("paper-example-1"),
                    ["gorenstein-R", "gorenstein-T", "thm3-sandwich"])
    ev = rep.result("thm3-sandwich").evidence
    ok = rep.exit_code == 0 and (ev["gdim_R"], ev["gdim_T"], ev["delta"]) == \
        ("Finite(0)", "Finite(1)", "Finite(0)")
    return ok, f"exit {rep.exit_code}, {ev.get('sandwich')}"


@fixture("verify-cli")
def fx_audit_formal_matrix():
    from .audit import run_audit
    from .scenario import builtin
    rep = run_audit(builtin("formal-matrix-A2"), ["cor1-sandwich"])
    ev = rep.result("cor1-sandwich").evidence
    ok = rep.exit_code == 0 and ev.get("sandwich") == "0 <= 1 <= 1"
    return ok, f"exit {rep.exit_code}, {ev.get('sandwich')}"


def run_selftest(modules=None, names=None):
    out = []
    for module, name, fn in FIXTURES:
        if modules and module not in modules:
            continue
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a fixture crash is a failed fixture, reported with its cause
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(FixtureResult(name, module, bool(ok), detail, time.perf_counter() - start))
    return out
