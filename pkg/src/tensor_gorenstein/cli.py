"""Command line entry point: ``tgor <subcommand> [options]``.

Exit codes: 0 all checks pass, 1 some check failed, 2 input error,
3 some check inconclusive (and none failed).
"""

from __future__ import annotations

import argparse
import json
import sys

from .audit import CHECKS, SCHEMA_VERSION, combine, emit_report, run_audit
from .enumeration import iter_modules
from .errors import AlgebraError, FieldUnsupported, Inconclusive, ParseError, ValidationError
from .gorenstein import global_dimension, gorenstein_context, perfect_test, tensor_ring_delta
from .modcat import is_projective
from .scenario import builtin, builtin_names, full_battery, load_scenario
from .tensor_ring import NotNilpotentUpTo, build_tensor_ring, nilpotency_index

EXIT_INPUT = 2


class InputError(Exception):
    pass


def _scenarios(args):
    if args.scenario and args.builtin:
        raise InputError("give either --scenario or --builtin, not both")
    if args.builtin == "battery":
        found = full_battery()
    elif args.builtin:
        found = [builtin(args.builtin)]
    elif args.scenario:
        found = [load_scenario(args.scenario)]
    else:
        raise InputError("a scenario is required (--scenario PATH or --builtin NAME)")
    checks = None
    if getattr(args, "checks", None):
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = sorted(set(checks) - set(CHECKS))
        if unknown:
            raise InputError(f"unknown checks: {', '.join(unknown)}")
    return [s.with_overrides(seed=args.seed, bound=args.bound, dim_cap=args.dim_cap, checks=checks)
            for s in found]


def _write(text):
    sys.stdout.write(text)
    sys.stdout.flush()


# -- subcommands ------------------------------------------------------------------------------

def cmd_audit(args):
    reports = [run_audit(s) for s in _scenarios(args)]
    timings = True if args.timings else None
    if args.format == "json" and len(reports) > 1:
        body = {"schema_version": SCHEMA_VERSION,
                "reports": [r.as_dict(bool(timings)) for r in reports],
                "exit_code": combine(reports)}
        _write(json.dumps(body, indent=2, sort_keys=True) + "\n")
    else:
        for r in reports:
            _write(emit_report(r, args.format, timings)[0].decode("utf-8"))
    return combine(reports)


def _nilpotent_ring(s):
    b = s.built
    nil = nilpotency_index(b.bimodule, s.bounds["nilpotency_cap"])
    if isinstance(nil, NotNilpotentUpTo):
        return nil, None
    return nil, build_tensor_ring(b.algebra, b.bimodule, s.bounds["nilpotency_cap"])


def _emit(args, data, lines):
    if args.format == "json":
        _write(json.dumps({"schema_version": SCHEMA_VERSION, **data}, indent=2, sort_keys=True)
               + "\n")
    else:
        _write("\n".join(lines) + "\n")


def cmd_tensor_ring(args):
    code = 0
    for s in _scenarios(args):
        b = s.built
        nil, t = _nilpotent_ring(s)
        data = {"scenario": s.name, "field": s.field, "dim_R": b.algebra.dim, "dim_M": b.bimodule.dim,
                "nilpotency_index": nil if isinstance(nil, int) else str(nil)}
        if t is None:
            code = 3
        else:
            data["grade_dims"] = [b_ - a_ for a_, b_ in t.grade_ranges]
            data["dim_T"] = t.dim
            data["arrows_T"] = [[s_ + 1, t_ + 1] for _, s_, t_ in t.algebra.generators]
        lines = [f"scenario {s.name} over {s.field}"] + [f"  {k}: {v}" for k, v in data.items()
                                                         if k not in ("scenario", "field")]
        _emit(args, data, lines)
    return code


def cmd_gorenstein(args):
    code = 0
    for s in _scenarios(args):
        b = s.built
        bound = s.bounds["pd_bound"]
        ctx_r = gorenstein_context(b.algebra, bound)
        data = {"scenario": s.name, "field": s.field, "R": ctx_r.as_dict(),
                "gl_dim_R": str(global_dimension(b.algebra, bound)),
                "perfect": perfect_test(b.bimodule, bound).as_dict()}
        nil, t = _nilpotent_ring(s)
        if t is None:
            data["T"] = str(nil)
            code = 3
        else:
            ctx_t = gorenstein_context(t.algebra, bound)
            delta, left, right = tensor_ring_delta(t, bound)
            data.update({"T": ctx_t.as_dict(), "gl_dim_T": str(global_dimension(t.algebra, bound)),
                         "delta": str(delta), "pd_R_T": str(left), "pd_Rop_T": str(right)})
            if not (ctx_r.is_gorenstein and ctx_t.is_gorenstein):
                code = max(code, 3)
        lines = [f"scenario {s.name} over {s.field}"]
        for k, v in data.items():
            if k in ("scenario", "field"):
                continue
            if isinstance(v, dict):
                v = ", ".join(f"{kk}={vv}" for kk, vv in v.items())
            lines.append(f"  {k}: {v}")
        _emit(args, data, lines)
    return code


def cmd_enumerate(args):
    code = 0
    for s in _scenarios(args):
        cap = s.bounds["dim_cap"]
        if args.over == "T":
            nil, t = _nilpotent_ring(s)
            if t is None:
                raise InputError(f"the bimodule is {nil}; T is not finite-dimensional")
            alg = t.algebra
        else:
            alg = s.built.algebra
        rows = []
        for x in iter_modules(alg, cap):
            rows.append({"label": x.label or "0", "dim": x.dim,
                         "dimension_vector": list(x.dimension_vector),
                         "projective": bool(is_projective(x))})
        data = {"scenario": s.name, "over": args.over, "dim_cap": cap, "count": len(rows),
                "modules": rows}
        lines = [f"scenario {s.name}: {len(rows)} {args.over}-modules up to dim {cap}"]
        lines += [f"  {r['label']:<16} dim {r['dim']}  dimvec {tuple(r['dimension_vector'])}"
                  f"{'  projective' if r['projective'] else ''}" for r in rows]
        _emit(args, data, lines)
    return code


def cmd_selftest(args):
    from .selftest import run_selftest
    results = run_selftest(modules=args.module or None)
    if args.format == "json":
        body = {"schema_version": SCHEMA_VERSION,
                "fixtures": [{"module": r.module, "name": r.name, "ok": r.ok, "detail": r.detail}
                             for r in results]}
        _write(json.dumps(body, indent=2, sort_keys=True) + "\n")
    else:
        for r in results:
            _write(f"{'PASS' if r.ok else 'FAIL':<5} {r.module:<13} {r.name:<36} {r.detail}\n")
        _write(f"{sum(r.ok for r in results)}/{len(results)} fixtures pass\n")
    return 0 if all(r.ok for r in results) else 1


# -- parser ---------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="tgor", description="Exact checks for tensor rings of "
                                "bimodules over finite-dimensional algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_opts(sp):
        sp.add_argument("--scenario", metavar="PATH", help="scenario file (text or json)")
        sp.add_argument("--builtin", metavar="NAME",
                        help="built-in scenario, or 'battery' for the whole battery; "
                             "choose from: " + ", ".join(builtin_names()[:4]) + ", battery-NN")
        sp.add_argument("--seed", type=int, help="override the scenario seed")
        sp.add_argument("--bound", type=int, help="override the homological dimension bound")
        sp.add_argument("--dim-cap", type=int, help="override the module enumeration cap")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    a = sub.add_parser("audit", help="run theorem checks")
    scenario_opts(a)
    a.add_argument("--checks", help="comma-separated subset of: " + ", ".join(sorted(CHECKS)))
    a.add_argument("--timings", action="store_true", help="include timings in json output")
    a.set_defaults(func=cmd_audit)

    g = sub.add_parser("gorenstein", help="Gorenstein dimensions of R and T and the delta bound")
    scenario_opts(g)
    g.set_defaults(func=cmd_gorenstein)

    t = sub.add_parser("tensor-ring", help="shape of the tensor ring")
    scenario_opts(t)
    t.set_defaults(func=cmd_tensor_ring)

    e = sub.add_parser("enumerate", help="modules up to isomorphism, up to the dimension cap")
    scenario_opts(e)
    e.add_argument("--over", choices=("R", "T"), default="R")
    e.set_defaults(func=cmd_enumerate)

    st = sub.add_parser("selftest", help="run the worked-example fixtures")
    st.add_argument("--module", action="append", help="restrict to one module (repeatable)")
    st.add_argument("--format", choices=("text", "json"), default="text")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, ValidationError, FieldUnsupported, OSError) as exc:
        print(f"tgor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Inconclusive as exc:
        print(f"tgor: inconclusive: {exc}", file=sys.stderr)
        return 3
    except AlgebraError as exc:
        print(f"tgor: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
