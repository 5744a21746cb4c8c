"""Theorem audits over a scenario, and their text/json reports.

Each check returns a verdict (PASS, FAIL or INCONCLUSIVE) with numeric
evidence.  Checks are independent: each draws from its own random stream
derived from the scenario seed and the check name, so adding or removing a
check never changes another check's samples.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .enumeration import enumerate_modules
from .errors import AlgebraError, FieldUnsupported, Inconclusive, NotNilpotent
from .gorenstein import (admissible_report, frobenius_embedding, global_dimension, gmon_test,
                         gorenstein_context, gp_test, gpd, perfect_test, sandwich,
                         tensor_ring_delta, tor_vanishing)
from .modcat import (LEFT, RIGHT, is_isomorphic, pd_verdict, random_module,
                     simples_and_projectives, star)
from .tensor_ring import (NotNilpotentUpTo, build_tensor_ring, check_adjunction, induce,
                          module_from_rep, nilpotency_index, rep_from_module, standard_sequence,
                          tensor_over_R, zero_rep)

SCHEMA_VERSION = 1
PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"

ADJUNCTION_PAIRS = 20
SEQUENCE_SAMPLES = 12
PER1_SAMPLES = 12
SAMPLED_MODULES = 40
INDUCTION_DIM_CAP = 4
FROBENIUS_DIM_CAP = 5


@dataclass
class CheckResult:
    name: str
    verdict: str
    evidence: dict
    elapsed: float = 0.0

    def as_dict(self, timings=False):
        d = {"name": self.name, "verdict": self.verdict, "evidence": self.evidence}
        if timings:
            d["elapsed"] = round(self.elapsed, 3)
        return d


@dataclass
class AuditReport:
    scenario: str
    field: str
    seed: int
    results: list = field(default_factory=list)

    @property
    def exit_code(self):
        verdicts = {r.verdict for r in self.results}
        if FAIL in verdicts:
            return 1
        if INCONCLUSIVE in verdicts:
            return 3
        return 0

    def result(self, name):
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def summary(self):
        return {v: sum(r.verdict == v for r in self.results) for v in (PASS, FAIL, INCONCLUSIVE)}

    def as_dict(self, timings=False):
        return {"schema_version": SCHEMA_VERSION, "scenario": self.scenario, "field": self.field,
                "seed": self.seed, "checks": [r.as_dict(timings) for r in self.results],
                "summary": self.summary(), "exit_code": self.exit_code}


# -- shared state ------------------------------------------------------------------------

def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def module_data(x, small=6):
    """Reproducible description of a module: label, side, dimension vector, and actions when small."""
    d = {"label": x.label, "side": x.side, "dim": x.dim,
         "dimension_vector": [int(v) for v in x.dimension_vector]}
    if x.dim <= small:
        d["actions"] = [[[_plain(v) for v in row] for row in m] for m in x.stack.tolist()]
    return d


class _Context:
    def __init__(self, scenario):
        self.s = scenario
        b = scenario.built
        self.R = b.algebra
        self.M = b.bimodule
        self.bound = scenario.bounds["pd_bound"]
        self.cap = scenario.bounds["nilpotency_cap"]
        self.dim_cap = scenario.bounds["dim_cap"]
        self.trials = scenario.bounds["iso_trials"]

    def rng(self, name):
        return np.random.default_rng([self.s.seed & 0xFFFFFFFF, zlib.crc32(name.encode())])

    @cached_property
    def nil(self):
        return nilpotency_index(self.M, self.cap)

    @cached_property
    def T(self):
        if isinstance(self.nil, NotNilpotentUpTo):
            raise Inconclusive(f"bimodule is {self.nil}", self.cap)
        return build_tensor_ring(self.R, self.M, self.cap)

    @cached_property
    def ctx_R(self):
        return gorenstein_context(self.R, self.bound)

    @cached_property
    def ctx_T(self):
        return gorenstein_context(self.T.algebra, self.bound)

    @cached_property
    def perfect(self):
        return perfect_test(self.M, self.bound)

    @cached_property
    def delta(self):
        return tensor_ring_delta(self.T, self.bound)

    @property
    def hypothesis(self):
        """Nilpotent and perfect: the certified route to the theorem hypotheses."""
        return isinstance(self.nil, int) and self.perfect.perfect == "yes"

    def modules(self, algebra, cap, name):
        """All modules up to ``cap`` (finite fields), else a seeded sample; plus the mode used."""
        try:
            return enumerate_modules(algebra, cap), "exhaustive"
        except (FieldUnsupported, ValueError):
            rng = self.rng(name)
            out = []
            for _ in range(SAMPLED_MODULES):
                x = random_module(algebra, rng)
                if x.dim <= max(cap, 1) * 2:
                    out.append(x)
            for i, x in enumerate(out):
                x.label = x.label or f"{name}-sample-{i}"
            return out, "sampled"


# -- checks ---------------------------------------------------------------------------------

def _check_nilpotency(c):
    nil = c.nil
    if isinstance(nil, NotNilpotentUpTo):
        return INCONCLUSIVE, {"nilpotency": str(nil), "bound": nil.cap, "reason": nil.reason}
    t = c.T
    grades = [len(t.grade_indices(i)) for i in range(nil + 1)]
    ev = {"N": nil, "dim_M": c.M.dim, "grade_dims": grades, "dim_T": t.dim}
    return (PASS if sum(grades) == t.dim else FAIL), ev


def _check_perfectness(c):
    rep = c.perfect
    ev = rep.as_dict()
    if rep.condition_p != rep.condition_p_symmetric:
        return FAIL, ev
    if rep.perfect == "yes":
        simples, _, _ = simples_and_projectives(c.R)
        adm = admissible_report(c.M, simples, c.bound)
        ev["admissible_on_simples"] = adm.as_dict()
    return (INCONCLUSIVE if rep.perfect == "unknown" else PASS), ev


def _gorenstein_evidence(ctx, algebra, bound):
    ev = ctx.as_dict()
    ev["gl_dim"] = str(global_dimension(algebra, bound))
    return ev


def _check_gorenstein(ctx, algebra, bound):
    ev = _gorenstein_evidence(ctx, algebra, bound)
    if ctx.gdim.kind == "at_least":
        ev["bound"] = ctx.bound
        return INCONCLUSIVE, ev
    return PASS, ev


def _check_gorenstein_r(c):
    return _check_gorenstein(c.ctx_R, c.R, c.bound)


def _check_gorenstein_t(c):
    return _check_gorenstein(c.ctx_T, c.T.algebra, c.bound)


def _sandwich_check(c, base, top, label):
    delta, left, right = c.delta
    ev = {f"{label}_R": str(base), f"{label}_T": str(top), "delta": str(delta),
          "pd_R_T": str(left), "pd_Rop_T": str(right), "applicable": c.hypothesis}
    if c.perfect.perfect == "unknown":
        ev["reason"] = "perfectness undecided"
        return INCONCLUSIVE, ev
    if not c.hypothesis:
        ev["reason"] = "bimodule is not perfect; the inequality is not claimed"
        return PASS, ev
    if "at_least" in (base.kind, top.kind, delta.kind):
        ev["bound"] = c.bound
        return INCONCLUSIVE, ev
    if base.is_finite != top.is_finite:
        ev["reason"] = f"finiteness differs between R and T"
        return FAIL, ev
    if not base.is_finite:
        ev["reason"] = "both infinite"
        return PASS, ev
    sw = sandwich(base.value, delta.value, top.value)
    ev["sandwich"] = str(sw)
    return (PASS if sw.holds else FAIL), ev


def _check_thm3(c):
    return _sandwich_check(c, c.ctx_R.gdim, c.ctx_T.gdim, "gdim")


def _check_cor1(c):
    return _sandwich_check(c, global_dimension(c.R, c.bound),
                           global_dimension(c.T.algebra, c.bound), "gl_dim")


def _check_per1(c):
    ev = {"applicable": c.hypothesis}
    if not c.hypothesis:
        ev["reason"] = "bimodule is not certified perfect and nilpotent"
        return (INCONCLUSIVE if c.perfect.perfect == "unknown" else PASS), ev
    n = c.nil
    _, left, right = c.delta
    pd_l = pd_verdict(c.M.left_module(), c.bound)
    pd_r = pd_verdict(c.M.right_module(), c.bound)
    ev.update({"N": n, "pd_R_M": str(pd_l), "pd_Rop_M": str(pd_r),
               "pd_R_T": str(left), "pd_Rop_T": str(right)})
    if not (left.is_finite and right.is_finite and pd_l.is_finite and pd_r.is_finite):
        ev["bound"] = c.bound
        return INCONCLUSIVE, ev
    ok = left.value <= n * pd_l.value and right.value <= n * pd_r.value
    # part (1) on sampled modules with vanishing Tor(M, Y)
    rng = c.rng("lemma-per1")
    tested = violations = 0
    witnesses = []
    for i in range(PER1_SAMPLES):
        y = random_module(c.R, rng)
        pd_y = pd_verdict(y, c.bound)
        if not pd_y.is_finite:
            continue
        tv = tor_vanishing(c.M.right_module(), y, c.bound)
        if tv.first_nonzero is not None or not tv.certified:
            continue
        my = tensor_over_R(c.M, y).result
        pd_my = pd_verdict(my, c.bound)
        tested += 1
        if not (pd_my.is_finite and pd_my.value <= pd_l.value + pd_y.value):
            violations += 1
            witnesses.append({"sample": i, "module": module_data(y), "pd_MY": str(pd_my)})
    ev.update({"part1_tested": tested, "part1_violations": violations})
    if witnesses:
        ev["witnesses"] = witnesses[:3]
    return (PASS if ok and not violations else FAIL), ev


def _check_adjunction(c):
    t = c.T
    rng = c.rng("adjunction")
    failures = []
    dims = []
    for i in range(ADJUNCTION_PAIRS):
        a = random_module(c.R, rng)
        y = random_module(t.algebra, rng)
        try:
            lhs, rhs = check_adjunction(t, a, y)
        except ArithmeticError as exc:
            failures.append({"pair": i, "error": str(exc), "A": module_data(a), "Y": module_data(y)})
            continue
        dims.append(lhs)
        if lhs != rhs:
            failures.append({"pair": i, "hom_T": lhs, "hom_R": rhs,
                             "A": module_data(a), "Y": module_data(y)})
    ev = {"pairs": ADJUNCTION_PAIRS, "failures": len(failures), "hom_dims": dims}
    if failures:
        ev["witnesses"] = failures[:3]
    return (FAIL if failures else PASS), ev


def _check_sequence(c):
    t = c.T
    rng = c.rng("standard-sequence")
    from .modcat import regular_module
    samples = [regular_module(t.algebra)]
    simples, _, _ = simples_and_projectives(c.R)
    samples += [module_from_rep(t, zero_rep(t, s), validate=False) for s in simples]
    samples += [random_module(t.algebra, rng) for _ in range(SEQUENCE_SAMPLES)]
    failures = []
    for i, y in enumerate(samples):
        try:
            seq = standard_sequence(rep_from_module(t, y))
            if seq.euler_characteristic != 0:
                raise ArithmeticError("dimensions do not alternate to zero")
        except ArithmeticError as exc:
            failures.append({"sample": i, "error": str(exc), "module": module_data(y)})
    ev = {"representations": len(samples), "failures": len(failures)}
    if failures:
        ev["witnesses"] = failures[:3]
    return (FAIL if failures else PASS), ev


def _check_ind_dual(c):
    t = c.T
    top = t.opposite()
    _, projs, _ = simples_and_projectives(c.R)
    verdicts = []
    for v, p in enumerate(projs):
        lhs = star(induce(t, p).module)
        rhs = induce(top, star(p).as_left()).module.relabel(t.algebra, RIGHT)
        verdicts.append(is_isomorphic(lhs, rhs, c.trials, seed=c.s.seed).verdict)
    ev = {"vertices": len(projs), "verdicts": verdicts}
    if "no" in verdicts:
        ev["witness_vertex"] = verdicts.index("no") + 1
        return FAIL, ev
    return (PASS if all(v == "yes" for v in verdicts) else INCONCLUSIVE), ev


def _check_thm2_equality(c):
    t = c.T
    mods, mode = c.modules(t.algebra, c.dim_cap, "thm2-equality")
    both = neither = unknown = 0
    disagreements = []
    for x in mods:
        gp = gp_test(x, c.ctx_T)
        gm = gmon_test(t, x, c.ctx_R)
        if gp.kind == "unknown" or gm.kind == "unknown":
            unknown += 1
            continue
        a, b = gp.kind == "gp", gm.kind == "in"
        if a != b:
            disagreements.append({"module": module_data(x), "gp": str(gp), "gmon": str(gm)})
        elif a:
            both += 1
        else:
            neither += 1
    ev = {"mode": mode, "dim_cap": c.dim_cap, "modules": len(mods), "in_both": both,
          "in_neither": neither, "unknown": unknown, "disagreements": len(disagreements),
          "hypothesis_certified": c.hypothesis}
    if disagreements:
        ev["witnesses"] = disagreements[:3]
        return (FAIL if c.hypothesis else INCONCLUSIVE), ev
    return (INCONCLUSIVE if unknown else PASS), ev


def _check_thm2_induction(c):
    t = c.T
    cap = min(INDUCTION_DIM_CAP, c.dim_cap)
    mods, mode = c.modules(c.R, cap, "thm2-induction")
    agree = unknown = gpd_checked = 0
    disagreements = []
    right_t = t.as_bimodule.right_module()
    for z in mods:
        ind = induce(t, z).module
        a, b = gp_test(z, c.ctx_R), gp_test(ind, c.ctx_T)
        if "unknown" in (a.kind, b.kind):
            unknown += 1
            continue
        if a.kind != b.kind:
            disagreements.append({"module": module_data(z), "Z": str(a), "Ind_Z": str(b)})
            continue
        agree += 1
        # Gpd equality for modules with vanishing Tor(T, Z)
        tv = tor_vanishing(right_t, z, c.bound)
        if tv.first_nonzero is None and tv.certified and c.ctx_R.is_gorenstein \
                and c.ctx_T.is_gorenstein:
            g1, g2 = gpd(z, c.ctx_R), gpd(ind, c.ctx_T)
            gpd_checked += 1
            if str(g1) != str(g2):
                disagreements.append({"module": module_data(z), "Gpd_Z": str(g1),
                                      "Gpd_Ind_Z": str(g2)})
    ev = {"mode": mode, "dim_cap": cap, "modules": len(mods), "agreements": agree,
          "unknown": unknown, "gpd_checked": gpd_checked, "disagreements": len(disagreements),
          "hypothesis_certified": c.hypothesis}
    if disagreements:
        ev["witnesses"] = disagreements[:3]
        return (FAIL if c.hypothesis else INCONCLUSIVE), ev
    return (INCONCLUSIVE if unknown else PASS), ev


def _check_frobenius(c):
    t = c.T
    cap = min(FROBENIUS_DIM_CAP, c.dim_cap)
    mods, mode = c.modules(t.algebra, cap, "frobenius-embedding")
    embedded = 0
    failures = []
    for x in mods:
        if gmon_test(t, x, c.ctx_R).kind != "in":
            continue
        try:
            fe = frobenius_embedding(t, rep_from_module(t, x), c.ctx_R)
            if not fe.map.is_injective() or fe.cokernel_verdict.kind != "in":
                raise ArithmeticError("embedding is not a monomorphism into Gmon")
            embedded += 1
        except (AlgebraError, ArithmeticError) as exc:
            failures.append({"module": module_data(x), "error": f"{type(exc).__name__}: {exc}"})
    ev = {"mode": mode, "dim_cap": cap, "in_gmon": embedded + len(failures),
          "embedded": embedded, "failures": len(failures)}
    if failures:
        ev["witnesses"] = failures[:3]
    return (FAIL if failures else PASS), ev


CHECKS = {
    "adjunction": _check_adjunction,
    "cor1-sandwich": _check_cor1,
    "frobenius-embedding": _check_frobenius,
    "gorenstein-R": _check_gorenstein_r,
    "gorenstein-T": _check_gorenstein_t,
    "ind-dual": _check_ind_dual,
    "lemma-per1": _check_per1,
    "nilpotency": _check_nilpotency,
    "perfectness": _check_perfectness,
    "standard-sequence": _check_sequence,
    "thm2-equality": _check_thm2_equality,
    "thm2-induction": _check_thm2_induction,
    "thm3-sandwich": _check_thm3,
}


def _run_one(c, name):
    start = time.perf_counter()
    try:
        verdict, ev = CHECKS[name](c)
    except Inconclusive as exc:
        verdict, ev = INCONCLUSIVE, {"reason": str(exc), "bound": exc.bound}
    except NotNilpotent as exc:
        verdict, ev = INCONCLUSIVE, {"reason": str(exc), "bound": c.cap}
    except (AlgebraError, ArithmeticError) as exc:
        verdict, ev = FAIL, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(name, verdict, ev, time.perf_counter() - start)


def run_audit(scenario, checks=None):
    """Run the requested checks (default: the scenario's list) in name order."""
    names = sorted(set(scenario.checks if checks is None else checks))
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    c = _Context(scenario)
    report = AuditReport(scenario.name, scenario.field, scenario.seed)
    for name in names:
        report.results.append(_run_one(c, name))
    return report


# -- reporting ---------------------------------------------------------------------------

def _fmt_value(v):
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_fmt_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    return str(v)


def _text(report, timings):
    lines = [f"scenario {report.scenario} over {report.field} (seed {report.seed})"]
    width = max((len(r.name) for r in report.results), default=0)
    for r in report.results:
        t = f" ({r.elapsed:.2f}s)" if timings else ""
        brief = {k: v for k, v in r.evidence.items() if k != "witnesses"}
        lines.append(f"{r.verdict:<12} {r.name:<{width}}{t}  {_fmt_value(brief)}")
        for w in r.evidence.get("witnesses", []):
            lines.append(f"{'':<12}   witness: {_fmt_value(w)}")
    s = report.summary()
    lines.append(f"summary: {s[PASS]} pass, {s[FAIL]} fail, {s[INCONCLUSIVE]} inconclusive; "
                 f"exit {report.exit_code}")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="text", timings=None):
    """Serialize a report; returns ``(bytes, exit_code)``.

    Text output includes timings by default; json omits them unless asked, so
    identical inputs give byte-identical json.
    """
    if fmt == "json":
        body = json.dumps(report.as_dict(bool(timings)), indent=2, sort_keys=True) + "\n"
    elif fmt == "text":
        body = _text(report, True if timings is None else timings)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return body.encode("utf-8"), report.exit_code


def combine(reports):
    """Exit code for several reports: FAIL dominates INCONCLUSIVE dominates PASS."""
    codes = {r.exit_code for r in reports}
    return 1 if 1 in codes else 3 if 3 in codes else 0
