"""Gorenstein homological invariants of finite-dimensional algebras and tensor rings."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Inconclusive, NotGorensteinProjective, NotInGmon, SolveFailed
from .linalg import Matrix, image_basis, is_invertible, left_inverse, rank, solve
from .modcat import (DEFAULT_PD_BOUND, LEFT, RIGHT, FreeSum, HomDim, Module, ModuleHom,
                     direct_sum, double_star_map, dual_D, ext_dims, hom_basis, is_projective,
                     nth_syzygy, pd_verdict, projective_cover, quotient, regular_module,
                     simples_and_projectives, star, star_basis, tor_dims)
from .tensor_ring import (NotNilpotentUpTo, induce, module_from_rep, nilpotency_index,
                          rep_from_module, tensor_over_R, tensor_power)


# -- dimensions -------------------------------------------------------------------------

def injective_dimension(a, side=LEFT, bound=DEFAULT_PD_BOUND):
    """id of the regular module on ``side``: pd over the other side of its k-dual."""
    return pd_verdict(dual_D(regular_module(a, side)), bound)


@dataclass
class GorensteinContext:
    algebra: object
    left_id: HomDim
    right_id: HomDim
    gdim: HomDim
    bound: int = DEFAULT_PD_BOUND

    @property
    def is_gorenstein(self):
        return self.gdim.is_finite

    @property
    def d(self):
        return self.gdim.value if self.gdim.is_finite else None

    def require_finite(self):
        if not self.gdim.is_finite:
            raise Inconclusive(f"Gorenstein dimension not certified: {self.gdim}", self.bound)
        return self.gdim.value

    def as_dict(self):
        return {"left_id": str(self.left_id), "right_id": str(self.right_id),
                "gdim": str(self.gdim)}


def gorenstein_context(a, bound=DEFAULT_PD_BOUND, strict=False):
    """Both self-injective dimensions; ``gdim`` is their common value when both are finite.

    An unresolved side yields an ``AtLeast`` gdim; with ``strict=True`` it raises
    :class:`Inconclusive` instead.
    """
    left = injective_dimension(a, LEFT, bound)
    right = injective_dimension(a, RIGHT, bound)
    if left.is_finite and right.is_finite:
        if left.value != right.value:
            raise ArithmeticError(f"one-sided self-injective dimensions differ: {left} vs {right}")
        gdim = left
    elif left.is_infinite or right.is_infinite:
        gdim = left if left.is_infinite else right
    else:
        if strict:
            raise Inconclusive("self-injective dimension not decided within the bound", bound)
        gdim = HomDim.at_least(bound)
    return GorensteinContext(a, left, right, gdim, bound)


def global_dimension(a, bound=DEFAULT_PD_BOUND):
    """Max of pd over the simple modules."""
    simples, _, _ = simples_and_projectives(a)
    verdicts = [pd_verdict(s, bound) for s in simples]
    infinite = [v for v in verdicts if v.is_infinite]
    if infinite:
        return infinite[0]
    if any(v.kind == "at_least" for v in verdicts):
        return HomDim.at_least(bound)
    return HomDim.finite(max((v.value for v in verdicts), default=0))


# -- Gorenstein projectives ------------------------------------------------------------------

@dataclass(frozen=True)
class GPVerdict:
    kind: str                 # "gp" | "not_gp" | "unknown"
    bound: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.kind == "gp"

    def __str__(self):
        return {"gp": "GP", "not_gp": "NotGP", "unknown": f"Unknown({self.bound})"}[self.kind]


def _ext_to_regular(x, top):
    lx = x.as_left()
    return ext_dims(lx, regular_module(lx.algebra), top)


def _certified_top(x, bound):
    """Degree up to which Ext/Tor vanishing against ``x``'s resolution certifies all degrees."""
    v = pd_verdict(x, bound)
    if v.is_finite:
        return v.value, True
    if v.is_infinite:
        return max(v.witness[1], 1), True
    return bound, False


def gp_test(x, ctx, bound=None):
    """Gorenstein projectivity of ``x`` (left or right module over ``ctx.algebra``)."""
    bound = ctx.bound if bound is None else bound
    if x.dim == 0:
        return GPVerdict("gp")
    if ctx.gdim.is_finite:
        d = ctx.gdim.value
        if d == 0:
            return GPVerdict("gp")
        dims = _ext_to_regular(x, d)
        bad = [i for i in range(1, d + 1) if dims[i]]
        if bad:
            return GPVerdict("not_gp", reason=f"Ext^{bad[0]}(x, R) != 0")
        return GPVerdict("gp")
    # totally reflexive test, certified only through syzygy periodicity
    top_x, cert_x = _certified_top(x, bound)
    dims = _ext_to_regular(x, top_x)
    bad = [i for i in range(1, top_x + 1) if dims[i]]
    if bad:
        return GPVerdict("not_gp", reason=f"Ext^{bad[0]}(x, R) != 0")
    lx = x.as_left()
    xs = star(lx)
    top_s, cert_s = _certified_top(xs, bound)
    sdims = _ext_to_regular(xs, top_s)
    bad = [i for i in range(1, top_s + 1) if sdims[i]]
    if bad:
        return GPVerdict("not_gp", reason=f"Ext^{bad[0]}(x*, R) != 0")
    ev = double_star_map(lx)
    if not ev.is_iso():
        return GPVerdict("not_gp", reason="x is not reflexive")
    if cert_x and cert_s:
        return GPVerdict("gp")
    return GPVerdict("unknown", bound=bound)


def gpd(x, ctx, bound=None):
    """Smallest n with the n-th syzygy Gorenstein projective."""
    bound = ctx.bound if bound is None else bound
    top = ctx.gdim.value if ctx.gdim.is_finite else bound
    for n in range(top + 1):
        om = nth_syzygy(x, n)
        v = gp_test(om, ctx, bound)
        if v.kind == "gp":
            return HomDim.finite(n)
        if v.kind == "unknown":
            raise Inconclusive(f"GP test inconclusive on syzygy {n}", bound)
    if ctx.gdim.is_finite:
        raise ArithmeticError(f"Gpd exceeds the Gorenstein dimension {top}")
    return HomDim.at_least(bound)


def gp_embedding(g):
    """``g -> P`` from the minimal generators of ``g*``; a monomorphism with GP cokernel
    whenever ``g`` is Gorenstein projective."""
    lx = g.as_left()
    a = lx.algebra
    f = a.field
    s = star(lx)
    homs = star_basis(lx)
    cov = projective_cover(s)
    free = FreeSum(a, cov.free.vertices)
    rows = []
    hm = np.stack([h.matrix.a for h in homs]) if homs else f.zeros((0, a.dim, lx.dim))
    for j, v in enumerate(free.vertices):
        phi = f.tensordot(cov.generators.a[:, j], hm, ([0], [0]))        # dimA x dim g
        rows.append(f.dot(left_inverse(a.projective_bases[v]).a, phi))
    mat = np.vstack(rows) if rows else f.zeros((0, lx.dim))
    hom = ModuleHom(lx, free.module, Matrix(f, mat), validate=True)
    return free, hom


@dataclass
class Coresolution:
    """``0 -> g -> P^0 -> ... -> P^n`` with cosyzygies ``C^1 .. C^{n+1}``."""

    start: Module
    terms: list = field(default_factory=list)
    maps: list = field(default_factory=list)        # g -> P^0, P^0 -> P^1, ...
    cosyzygies: list = field(default_factory=list)


def gp_coresolution(g, ctx, n):
    if gp_test(g, ctx).kind != "gp":
        raise NotGorensteinProjective("module is not Gorenstein projective")
    res = Coresolution(g)
    cur = g.as_left()
    prev_proj = None
    for k in range(n + 1):
        free, emb = gp_embedding(cur)
        if rank(emb.matrix) != cur.dim:
            raise ArithmeticError("embedding into a projective is not injective")
        cok, proj, _ = quotient(free.module, image_basis(emb.matrix))
        if gp_test(cok, ctx).kind != "gp":
            raise ArithmeticError("cosyzygy is not Gorenstein projective")
        if prev_proj is None:
            res.maps.append(emb)
        else:
            res.maps.append(ModuleHom(res.terms[-1], free.module, emb.matrix @ prev_proj.matrix,
                                      validate=False))
        res.terms.append(free.module)
        res.cosyzygies.append(cok)
        prev_proj = proj
        cur = cok
    return res


@dataclass
class CMFreeVerdict:
    kind: str                 # "cm_free_up_to" | "witness"
    dim_cap: int
    witness: Module | None = None
    checked: int = 0

    def __str__(self):
        if self.kind == "witness":
            return f"Witness({self.witness.label or self.witness.dimension_vector})"
        return f"CMFreeUpTo({self.dim_cap})"


def cm_free_scan(a, ctx, dim_cap=6, seed=0, samples=64):
    """Search for a non-projective Gorenstein projective module."""
    from .enumeration import iter_modules
    from .modcat import random_module
    ctx.require_finite()
    if a.field.p is not None:
        candidates = iter_modules(a, dim_cap, min_dim=1)
    else:
        rng = np.random.default_rng(seed)
        candidates = (random_module(a, rng) for _ in range(samples))
    checked = 0
    for x in candidates:
        if x.dim == 0 or x.dim > dim_cap:
            continue
        checked += 1
        if is_projective(x):
            continue
        if gp_test(x, ctx).kind == "gp":
            return CMFreeVerdict("witness", dim_cap, x, checked)
    if a.field.p is None:
        raise Inconclusive("random sampling found no witness; CM-freeness not certified", dim_cap)
    return CMFreeVerdict("cm_free_up_to", dim_cap, None, checked)


# -- monomorphism category -----------------------------------------------------------------

@dataclass
class GmonVerdict:
    kind: str                 # "in" | "not_in" | "unknown"
    reason: str = ""
    cokernel: Module | None = None

    def __bool__(self):
        return self.kind == "in"

    def __str__(self):
        return {"in": "InGmon", "not_in": "NotInGmon", "unknown": "Unknown"}[self.kind]


def _structure_cokernel(rep):
    cok, proj, _ = quotient(rep.base, image_basis(rep.u))
    return cok, proj


def gmon_test(t, x, ctx_r, bound=None):
    """Is the T-module ``x`` a pair ``(X, u)`` with ``u`` mono and ``Cok u`` GP over R?"""
    rep = rep_from_module(t, x) if isinstance(x, Module) else x
    if rank(rep.u) != rep.tensor.result.dim:
        return GmonVerdict("not_in", "structure map is not injective")
    cok, _ = _structure_cokernel(rep)
    v = gp_test(cok, ctx_r, bound)
    if v.kind == "gp":
        return GmonVerdict("in", cokernel=cok)
    if v.kind == "unknown":
        return GmonVerdict("unknown", f"GP test on the cokernel: {v}", cok)
    return GmonVerdict("not_in", f"cokernel is not GP ({v.reason})", cok)


@dataclass
class FrobeniusEmbedding:
    map: ModuleHom            # X -> Ind(P) as T-modules
    target: object            # Induction
    cokernel: Module
    cokernel_verdict: GmonVerdict


def frobenius_embedding(t, rep, ctx_r):
    """Embed ``(X, u)`` in Gmon into the induced module of a projective.

    Grade 0 is ``iota . pi`` with ``iota: Cok u -> P`` the GP embedding; grade
    ``i`` solves ``a_i(m . x) = m . a_{i-1}(x)`` among R-linear maps.
    """
    f = t.field
    v = gmon_test(t, rep, ctx_r)
    if v.kind != "in":
        raise NotInGmon(f"representation is not in Gmon: {v.reason}")
    x = rep.base
    xt = module_from_rep(t, rep, validate=False)
    cok, proj = _structure_cokernel(rep)
    _, iota = gp_embedding(cok)
    p_mod = iota.target
    ind = induce(t, p_mod)
    dind = ind.module.dim
    phi = f.zeros((dind, x.dim))
    if dind and x.dim:
        phi = f.dot(ind.unit_matrix.a, f.dot(iota.matrix.a, proj.matrix.a))
    ut = t.restrict(ind.module)
    g1 = t.grade_indices(1)
    for i in range(1, t.nilpotency_index + 1):
        idx = ind.grade_part(i)
        if not idx or x.dim == 0:
            continue
        sub = Module(t.base, LEFT, ut.stack[np.ix_(range(t.base.dim), idx, idx)],
                     validate=False)
        homs = hom_basis(x, sub)
        lhs_cols, rhs = [], []
        for a in g1:
            xa = xt.stack[a]
            rhs.append(f.dot(ind.module.stack[a][idx, :], phi).reshape(-1))
            lhs_cols.append([f.dot(h.matrix.a, xa).reshape(-1) for h in homs])
        target = np.concatenate(rhs).reshape(-1, 1)
        if not homs:
            if np.any(target):
                raise SolveFailed(f"no R-linear map available in grade {i}")
            continue
        sysm = np.vstack([np.stack(cols, axis=1) for cols in lhs_cols])
        c = solve(Matrix(f, sysm), Matrix(f, target))
        if c is None:
            raise SolveFailed(f"grade {i} component has no solution")
        a_i = f.tensordot(c.a.reshape(-1), np.stack([h.matrix.a for h in homs]), ([0], [0]))
        phi[idx, :] = a_i
    hom = ModuleHom(xt, ind.module, Matrix(f, phi), validate=True)
    if rank(hom.matrix) != x.dim:
        raise ArithmeticError("constructed map is not injective")
    cok_t, _, _ = quotient(ind.module, image_basis(hom.matrix))
    cv = gmon_test(t, cok_t, ctx_r)
    if cv.kind != "in":
        raise ArithmeticError(f"cokernel of the embedding is not in Gmon: {cv.reason}")
    return FrobeniusEmbedding(hom, ind, cok_t, cv)


# -- Tor vanishing and bimodule conditions ------------------------------------------------------

@dataclass(frozen=True)
class TorCheck:
    first_nonzero: int | None     # smallest i >= 1 with Tor_i != 0
    certified: bool               # vanishing proven for all i >= 1
    top: int


def tor_vanishing(y, x, bound=DEFAULT_PD_BOUND):
    """Check ``Tor_i(y, x) = 0`` for all ``i >= 1`` (``y`` right, ``x`` left)."""
    if y.dim == 0 or x.dim == 0:
        return TorCheck(None, True, 0)
    tx, cx = _certified_top(x, bound)
    ty, cy = _certified_top(y, bound)
    if cx and cy:
        top, cert = min(tx, ty), True
    elif cx or cy:
        top, cert = (tx if cx else ty), True
    else:
        top, cert = bound, False
    top = max(top, 1)
    dims = tor_dims(y, x, top)
    bad = [i for i in range(1, top + 1) if dims[i]]
    return TorCheck(bad[0] if bad else None, cert, top)


@dataclass
class MFlatVerdict:
    kind: str                     # "m_flat" | "not_m_flat" | "unknown"
    witness: tuple = ()           # (i, s) or (i, j) by criterion
    bound: int | None = None

    def __str__(self):
        if self.kind == "not_m_flat":
            return f"NotMFlat{self.witness}"
        return {"m_flat": "MFlat", "unknown": f"Unknown({self.bound})"}[self.kind]


# powers inspected when M is not nilpotent; only a failure can be certified then
PARTIAL_POWERS = 3


def _power_range(m, cap=16):
    """Exponents ``s >= 1`` to inspect and whether they exhaust all nonzero powers."""
    n = nilpotency_index(m, cap)
    if isinstance(n, NotNilpotentUpTo):
        return range(1, PARTIAL_POWERS + 1), False
    return range(1, n + 1), True


def _nil(m, cap=16):
    n = nilpotency_index(m, cap)
    if isinstance(n, NotNilpotentUpTo):
        raise Inconclusive(str(n), cap)
    return n


def m_flat_test(m, y, bound=DEFAULT_PD_BOUND):
    """``Tor_i(M^s, y) = 0`` for all ``i, s >= 1``."""
    powers, certified = _power_range(m)
    for s in powers:
        chk = tor_vanishing(tensor_power(m, s).right_module(), y, bound)
        if chk.first_nonzero is not None:
            return MFlatVerdict("not_m_flat", (chk.first_nonzero, s))
        certified &= chk.certified
    return MFlatVerdict("m_flat") if certified else MFlatVerdict("unknown", bound=bound)


def m_flat_test_via_powers(m, y, bound=DEFAULT_PD_BOUND):
    """The equivalent criterion ``Tor_i(M, M^j (x) y) = 0`` for ``i >= 1, j >= 0``."""
    powers, certified = _power_range(m)
    mr = m.right_module()
    for j in [0, *powers]:
        z = y if j == 0 else tensor_over_R(tensor_power(m, j), y).result
        chk = tor_vanishing(mr, z, bound)
        if chk.first_nonzero is not None:
            return MFlatVerdict("not_m_flat", (chk.first_nonzero, j))
        certified &= chk.certified
    return MFlatVerdict("m_flat") if certified else MFlatVerdict("unknown", bound=bound)


def _verdict(flag, certified):
    if flag is False:
        return "fail"
    return "pass" if certified else "unknown"


@dataclass
class PerfectReport:
    pd_left: HomDim
    pd_right: HomDim
    condition_p: str              # "pass" | "fail" | "unknown"
    condition_p_symmetric: str
    witness: tuple = ()
    perfect: str = "unknown"      # "yes" | "no" | "unknown"
    nilpotency_index: int | None = 0

    def as_dict(self):
        return {"pd_left": str(self.pd_left), "pd_right": str(self.pd_right),
                "condition_P": self.condition_p, "condition_P_symmetric": self.condition_p_symmetric,
                "witness": list(self.witness), "perfect": self.perfect,
                "nilpotency_index": self.nilpotency_index}


def perfect_test(m, bound=DEFAULT_PD_BOUND):
    """pd on both sides plus condition (P), cross-checked against its symmetric form.

    For a bimodule that is not nilpotent only the first few powers are examined,
    so condition (P) can fail but never pass.
    """
    powers, complete = _power_range(m)
    n = powers[-1] if complete and len(powers) else 0
    pl = pd_verdict(m.left_module(), bound)
    pr = pd_verdict(m.right_module(), bound)
    # condition (P): Tor_i(M, M^j) = 0
    ok, cert, wit = True, complete, ()
    for j in powers:
        chk = tor_vanishing(m.right_module(), tensor_power(m, j).left_module(), bound)
        if chk.first_nonzero is not None:
            ok, wit = False, (chk.first_nonzero, j)
            break
        cert &= chk.certified
    # symmetric form: Tor_i(M^s, M) = 0
    ok_s, cert_s = True, complete
    for s in powers:
        chk = tor_vanishing(tensor_power(m, s).right_module(), m.left_module(), bound)
        if chk.first_nonzero is not None:
            ok_s = False
            break
        cert_s &= chk.certified
    cp, cps = _verdict(ok, cert), _verdict(ok_s, cert_s)
    if "unknown" not in (cp, cps) and cp != cps:
        raise ArithmeticError(f"condition (P) and its symmetric form disagree: {cp} vs {cps}")
    if pl.is_infinite or pr.is_infinite or cp == "fail":
        perfect = "no"
    elif pl.is_finite and pr.is_finite and cp == "pass":
        perfect = "yes"
    else:
        perfect = "unknown"
    return PerfectReport(pl, pr, cp, cps, wit, perfect, n if complete else None)


@dataclass
class AdmissibleReport:
    left: str                     # "verified-on-family" | "fails"
    right: str
    failures: list
    family_size: int
    via_perfectness: bool

    def as_dict(self):
        return {"left": self.left, "right": self.right, "failures": self.failures,
                "family_size": self.family_size,
                "admissible_via_perfectness": self.via_perfectness}


def _left_admissible_failures(m, family, n):
    out = []
    r = m.right_algebra
    reg = regular_module(r)
    mr = m.right_module()
    for gi, g in enumerate(family):
        g = g.as_left() if g.side == RIGHT else g
        for i in range(0, n + 1):
            target = reg if i == 0 else tensor_power(m, i).left_module()
            if ext_dims(g, target, 1)[1]:
                out.append({"module": gi, "i": i, "kind": "Ext1"})
            z = g if i == 0 else tensor_over_R(tensor_power(m, i), g).result
            if tor_dims(mr, z, 1)[1]:
                out.append({"module": gi, "i": i, "kind": "Tor1"})
    return out


def admissible_report(m, gp_family, bound=DEFAULT_PD_BOUND, right_family=None):
    """Admissibility checked on a finite family of GP modules (never a universal claim)."""
    n = _nil(m)
    left_fail = _left_admissible_failures(m, gp_family, n)
    if right_family is None:
        right_family = [star(g).as_left() for g in gp_family]
    mop = m.swapped()
    right_fail = _left_admissible_failures(mop, [g.as_left() for g in right_family], n)
    for item in right_fail:
        item["side"] = "right"
    for item in left_fail:
        item["side"] = "left"
    perfect = perfect_test(m, bound).perfect == "yes"
    return AdmissibleReport("fails" if left_fail else "verified-on-family",
                            "fails" if right_fail else "verified-on-family",
                            left_fail + right_fail, len(gp_family), perfect)


# -- tensor ring invariants -----------------------------------------------------------------------

def tensor_ring_delta(t, bound=DEFAULT_PD_BOUND):
    """``min(pd_R T, pd_{R^op} T)`` together with the two one-sided verdicts."""
    left = pd_verdict(t.restrict(regular_module(t.algebra)), bound)
    right_mod = Module(t.base, RIGHT, t.algebra.right_stack[:t.base.dim], validate=False)
    right = pd_verdict(right_mod, bound)
    finite = [v.value for v in (left, right) if v.is_finite]
    delta = HomDim.finite(min(finite)) if finite else (
        left if left.is_infinite else right if right.is_infinite else HomDim.at_least(bound))
    return delta, left, right


@dataclass
class Sandwich:
    lower: int
    value: int
    upper: int

    @property
    def holds(self):
        return self.lower <= self.value <= self.upper

    def __str__(self):
        return f"{self.lower} <= {self.value} <= {self.upper}"


def sandwich(base_dim, delta, value):
    return Sandwich(base_dim - delta, value, base_dim + delta + 1)


__all__ = [
    "AdmissibleReport", "CMFreeVerdict", "Coresolution", "FrobeniusEmbedding", "GPVerdict",
    "GmonVerdict", "GorensteinContext", "MFlatVerdict", "PerfectReport", "Sandwich", "TorCheck",
    "admissible_report", "cm_free_scan", "direct_sum", "frobenius_embedding", "global_dimension",
    "gmon_test", "gorenstein_context", "gp_coresolution", "gp_embedding", "gp_test", "gpd",
    "injective_dimension", "m_flat_test", "m_flat_test_via_powers", "perfect_test", "sandwich",
    "tensor_ring_delta", "tor_vanishing",
]
