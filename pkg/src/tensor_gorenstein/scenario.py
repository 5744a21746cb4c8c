"""Scenario files: parsing, validation, serialization and the built-in catalogue.

A scenario is kept as plain data (so it round-trips exactly through the text
and json formats) and is realized into algebras and bimodules on demand by
:meth:`Scenario.build`.

Text format::

    # comments start with '#'
    [field]
    GF(2)

    [algebra]
    vertices: 3
    a1: 1 -> 2
    relations: a2*a1, a3*a2      # right to left: a2*a1 is a1 then a2

    [bimodule]
    outer e1 e3                  # A e1 (x)_k e3 A; several lines form a direct sum

    [bounds]
    pd_bound: 24

    [checks]
    adjunction, thm3-sandwich

Raw algebras list ``basis:``, ``unit:``, ``idempotents:``, ``radical:`` and
products ``x*y = 2 z + w``.  An explicit bimodule starts with ``explicit <dim>``
followed by ``left <label> = <rows>`` / ``right <label> = <rows>`` lines, rows
separated by ``;``.  Optional ``[module NAME]`` sections give ``side:``,
``dimvec:`` and one ``<arrow> = <rows>`` block per arrow.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .algebra import Arrow, Presentation, Quiver, build_from_quiver, build_from_structure_constants
from .errors import AlgebraError, ParseError, ValidationError
from .linalg import FieldSpec, Matrix, rank, solve
from .modcat import (DEFAULT_ISO_TRIALS, DEFAULT_PD_BOUND, LEFT, RIGHT, Module,
                     module_from_generators, regular_module, simples_and_projectives)
from .tensor_ring import (DEFAULT_NILPOTENCY_CAP, Bimodule, bimodule_sum, outer_tensor,
                          regular_bimodule, zero_bimodule)

DEFAULT_BOUNDS = {
    "pd_bound": DEFAULT_PD_BOUND,
    "nilpotency_cap": DEFAULT_NILPOTENCY_CAP,
    "dim_cap": 6,
    "iso_trials": DEFAULT_ISO_TRIALS,
}

ALL_CHECKS = (
    "adjunction", "cor1-sandwich", "frobenius-embedding", "gorenstein-R", "gorenstein-T",
    "ind-dual", "lemma-per1", "nilpotency", "perfectness", "standard-sequence",
    "thm2-equality", "thm2-induction", "thm3-sandwich",
)

SECTIONS = ("field", "algebra", "bimodule", "bounds", "checks", "module")


# -- plain data ----------------------------------------------------------------------------

@dataclass
class Scenario:
    name: str
    field: str
    algebra: dict
    bimodule: list
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    seed: int = 0
    checks: list = field(default_factory=lambda: list(ALL_CHECKS))
    modules: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bounds = {**DEFAULT_BOUNDS, **self.bounds}
        validate_scenario(self)

    # equality and copies go through the serialized form
    def to_dict(self):
        return {"name": self.name, "field": self.field, "algebra": copy.deepcopy(self.algebra),
                "bimodule": copy.deepcopy(self.bimodule), "bounds": dict(self.bounds),
                "seed": self.seed, "checks": list(self.checks),
                "modules": copy.deepcopy(self.modules)}

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()

    def with_overrides(self, seed=None, bound=None, dim_cap=None, checks=None):
        d = self.to_dict()
        if seed is not None:
            d["seed"] = int(seed)
        if bound is not None:
            d["bounds"]["pd_bound"] = int(bound)
        if dim_cap is not None:
            d["bounds"]["dim_cap"] = int(dim_cap)
        if checks is not None:
            d["checks"] = list(checks)
        return scenario_from_dict(d)

    @property
    def field_spec(self):
        return parse_field(self.field)

    @cached_property
    def built(self):
        return _build(self)


@dataclass
class Built:
    algebra: object
    bimodule: Bimodule
    modules: dict


def scenario_from_dict(d):
    if not isinstance(d, dict):
        raise ValidationError("a scenario must be a mapping")
    missing = [k for k in ("field", "algebra", "bimodule") if k not in d]
    if missing:
        raise ValidationError(f"scenario is missing {', '.join(missing)}")
    return Scenario(name=str(d.get("name", "scenario")), field=str(d["field"]),
                    algebra=d["algebra"], bimodule=list(d["bimodule"]),
                    bounds=dict(d.get("bounds", {})), seed=int(d.get("seed", 0)),
                    checks=list(d.get("checks", ALL_CHECKS)), modules=dict(d.get("modules", {})))


# -- validation ----------------------------------------------------------------------------

_VERTEX_TOKEN = re.compile(r"^(e|P|S)(\d+)$")


def parse_field(text):
    t = text.strip().replace(" ", "")
    if t in ("QQ", "Q", "Rationals"):
        return FieldSpec.rationals()
    m = re.fullmatch(r"(?:GF|F)\(?(\d+)\)?", t)
    if not m:
        raise ValidationError(f"unknown field {text!r}; use QQ or GF(p)")
    try:
        return FieldSpec.prime(int(m.group(1)))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def validate_scenario(s):
    parse_field(s.field)
    for k, v in s.bounds.items():
        if k not in DEFAULT_BOUNDS:
            raise ValidationError(f"unknown bound {k!r}")
        if not isinstance(v, int) or v < 0 or (v == 0 and k != "dim_cap"):
            raise ValidationError(f"bound {k} must be a positive integer, got {v!r}")
    unknown = [c for c in s.checks if c not in ALL_CHECKS]
    if unknown:
        raise ValidationError(f"unknown checks: {', '.join(unknown)}")
    alg = s.algebra
    kind = alg.get("kind")
    if kind == "quiver":
        n = alg.get("vertices")
        if not isinstance(n, int) or n < 1:
            raise ValidationError("vertices must be a positive integer")
        labels = [f"e{i + 1}" for i in range(n)] + [a[0] for a in alg.get("arrows", [])]
        for name, src, tgt in alg.get("arrows", []):
            if not (1 <= src <= n and 1 <= tgt <= n):
                raise ValidationError(f"arrow {name} has an endpoint outside 1..{n}")
    elif kind == "raw":
        labels = list(alg.get("basis", []))
        if not labels:
            raise ValidationError("raw algebra needs a basis")
        n = len(alg.get("idempotents", [])) or 1
        for elem in [alg.get("unit", {})] + alg.get("idempotents", []) + (alg.get("radical") or []):
            for lab in elem:
                if lab not in labels:
                    raise ValidationError(f"unknown basis label {lab!r}")
    else:
        raise ValidationError(f"unknown algebra kind {kind!r}")
    if not s.bimodule:
        raise ValidationError("the bimodule section is empty")
    for term in s.bimodule:
        k = term.get("kind")
        if k == "outer":
            for token in (term["left"], term["right"]):
                m = _VERTEX_TOKEN.match(token)
                if not m or not 1 <= int(m.group(2)) <= n:
                    raise ValidationError(f"unknown idempotent or module label {token!r}")
        elif k == "explicit":
            for side in ("left", "right"):
                for lab in term.get(side, {}):
                    if lab not in labels:
                        raise ValidationError(f"unknown basis label {lab!r} in explicit bimodule")
        elif k not in ("zero", "regular"):
            raise ValidationError(f"unknown bimodule constructor {k!r}")
    for name, mod in s.modules.items():
        if mod.get("side", "left") not in (LEFT, RIGHT):
            raise ValidationError(f"module {name}: side must be left or right")
        if kind == "quiver" and len(mod.get("dimvec", [])) != n:
            raise ValidationError(f"module {name}: dimvec needs {n} entries")


# -- building ------------------------------------------------------------------------------

def _scalar(f, x):
    try:
        return f.element(Fraction(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad scalar {x!r}: {exc}") from None


def _matrix(f, rows, shape=None):
    arr = f.array([[_scalar(f, x) for x in r] for r in rows]) if rows else f.zeros((0, 0))
    if shape is not None:
        if arr.size == 0 and shape[0] * shape[1] == 0:
            return f.zeros(shape)
        if arr.shape != tuple(shape):
            raise ValidationError(f"expected a {shape[0]}x{shape[1]} matrix, got {arr.shape}")
    return arr


def _build_algebra(s):
    f = s.field_spec
    alg = s.algebra
    if alg["kind"] == "quiver":
        arrows = tuple(Arrow(name, src - 1, tgt - 1) for name, src, tgt in alg.get("arrows", []))
        pres = Presentation(Quiver(alg["vertices"], arrows),
                            tuple(tuple(r) for r in alg.get("relations", [])))
        return build_from_quiver(pres, f)
    labels = list(alg["basis"])
    n = len(labels)
    idx = {lab: i for i, lab in enumerate(labels)}

    def vec(elem):
        v = [Fraction(0)] * n
        for lab, c in elem.items():
            v[idx[lab]] += Fraction(c)
        return v

    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for key, val in alg.get("products", {}).items():
        a, b = key.split("*")
        if a not in idx or b not in idx:
            raise ValidationError(f"unknown basis label in product {key!r}")
        table[idx[a]][idx[b]] = vec(val)
    radical = alg.get("radical")
    return build_from_structure_constants(
        table, f, unit=vec(alg["unit"]),
        idempotents=[vec(e) for e in alg.get("idempotents", [])] or None,
        labels=labels, radical=None if radical is None else [vec(e) for e in radical])


def _vertex_module(a, token, side):
    kind, v = token[0], int(token[1:]) - 1
    simples, projs, _ = simples_and_projectives(a, side)
    mod = simples[v] if kind == "S" else projs[v]
    return mod


def _close_actions(a, side, dim, given):
    """Extend actions of some basis elements to the whole algebra.

    ``given`` maps basis indices to matrices; products of the given elements
    (with the unit) must span the algebra.  Raises ``ValidationError`` when
    they do not, or when the given matrices contradict each other.
    """
    f = a.field
    alg = a if side == LEFT else a.opposite()
    vecs = [alg.unit]
    mats = [f.eye(dim)]
    gens = [(alg.basis_vector(i), f.reduce(f.array(m))) for i, m in sorted(given.items())]

    def coords(v):
        span = Matrix(f, np.stack(vecs, axis=1))
        return solve(span, Matrix(f, v.reshape(-1, 1)))

    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            for gv, gm in gens:
                v = alg.mul(gv, vecs[k])
                m = f.dot(gm, mats[k])
                c = coords(v)
                if c is None:
                    vecs.append(v)
                    mats.append(m)
                    nxt.append(len(vecs) - 1)
                else:
                    comb = f.tensordot(c.a.reshape(-1), np.stack(mats), ([0], [0]))
                    if not np.array_equal(f.reduce(comb), f.reduce(m)):
                        raise ValidationError("explicit actions are inconsistent with the algebra")
        frontier = nxt
    for gv, gm in gens:
        c = coords(gv)
        comb = f.tensordot(c.a.reshape(-1), np.stack(mats), ([0], [0]))
        if not np.array_equal(f.reduce(comb), f.reduce(gm)):
            raise ValidationError("explicit actions are inconsistent with the algebra")
    span = Matrix(f, np.stack(vecs, axis=1))
    if rank(span) != a.dim:
        raise ValidationError("explicit actions do not generate the algebra; list more labels")
    inv = solve(span, Matrix(f, f.eye(a.dim)))
    return f.tensordot(inv.a.T, np.stack(mats), ([1], [0]))


def _build_bimodule_term(a, term):
    f = a.field
    kind = term["kind"]
    if kind == "zero":
        return zero_bimodule(a)
    if kind == "regular":
        return regular_bimodule(a)
    if kind == "outer":
        p = _vertex_module(a, term["left"], LEFT)
        q = _vertex_module(a, term["right"], RIGHT)
        return outer_tensor(p, q)
    dim = int(term["dim"])
    left = {a.index(lab): _matrix(f, rows, (dim, dim)) for lab, rows in term.get("left", {}).items()}
    right = {a.index(lab): _matrix(f, rows, (dim, dim))
             for lab, rows in term.get("right", {}).items()}
    ls = _close_actions(a, LEFT, dim, left)
    rs = _close_actions(a, RIGHT, dim, right)
    return Bimodule(a, a, ls, rs, validate=True, label="explicit")


def _build_module(a, spec):
    f = a.field
    side = spec.get("side", LEFT)
    alg = a if side == LEFT else a.opposite()
    d = list(spec["dimvec"])
    names = [a.labels[int(np.flatnonzero(gv)[0])] if np.count_nonzero(gv) == 1 else None
             for gv, _, _ in alg.generators]
    blocks = []
    for name, (_, s, t) in zip(names, alg.generators):
        rows = spec.get("arrows", {}).get(name)
        shape = (d[t], d[s])
        blocks.append(f.zeros(shape) if rows is None else _matrix(f, rows, shape))
    unknown = set(spec.get("arrows", {})) - set(names)
    if unknown:
        raise ValidationError(f"unknown arrows {sorted(unknown)} in module section")
    return module_from_generators(a, side, d, blocks, validate=True)


def _build(s):
    try:
        a = _build_algebra(s)
        parts = [_build_bimodule_term(a, t) for t in s.bimodule]
        m = parts[0] if len(parts) == 1 else bimodule_sum(parts)
        m.label = s.name
        mods = {}
        for name, spec in s.modules.items():
            mods[name] = _build_module(a, spec)
            mods[name].label = name
    except ValidationError:
        raise
    except (AlgebraError, ValueError, KeyError) as exc:
        raise ValidationError(f"{type(exc).__name__}: {exc}") from None
    return Built(a, m, mods)


# -- text format ----------------------------------------------------------------------------

def _rows(text, line):
    rows = [r.split() for r in text.split(";")]
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix rows have different lengths", line)
    for r in rows:
        for x in r:
            try:
                Fraction(x)
            except ValueError:
                raise ParseError(f"bad matrix entry {x!r}", line) from None
    return [[_num(x) for x in r] for r in rows]


def _num(x):
    q = Fraction(x)
    return int(q) if q.denominator == 1 else str(q)


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][\w*]*)")


def _linear_combination(text, line):
    """``2 x + e1 - 1/2 y`` -> ``{"x": 2, "e1": 1, "y": "-1/2"}``."""
    out = {}
    pos = 0
    s = text.strip()
    if s == "0":
        return out
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise ParseError(f"cannot parse linear combination {text!r}", line)
        c = Fraction(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        out[m.group(3)] = _num(Fraction(out.get(m.group(3), 0)) + c)
        pos = m.end()
        while pos < len(s) and s[pos] == " ":
            pos += 1
    return out


def _split_list(text):
    return [t for t in re.split(r"[,\s]+", text.strip()) if t]


def parse_scenario(text, name="scenario"):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)(?:\s+(\S+))?\]", line)
        if m:
            if m.group(1) not in SECTIONS:
                raise ParseError(f"unknown section [{m.group(1)}]", lineno)
            if m.group(1) == "module" and not m.group(2):
                raise ParseError("a [module] section needs a name", lineno)
            current = (m.group(1), m.group(2), [])
            sections.append(current)
            continue
        if current is None:
            raise ParseError("content before the first section", lineno)
        current[2].append((lineno, line))
    d = {"name": name, "bounds": {}, "modules": {}}
    seen = set()
    for sec, arg, lines in sections:
        key = (sec, arg)
        if key in seen:
            raise ParseError(f"duplicate section [{sec}{' ' + arg if arg else ''}]",
                             lines[0][0] if lines else 0)
        seen.add(key)
        handler = {"field": _parse_field_section, "algebra": _parse_algebra,
                   "bimodule": _parse_bimodule, "bounds": _parse_bounds,
                   "checks": _parse_checks, "module": _parse_module}[sec]
        handler(d, arg, lines)
    try:
        return scenario_from_dict(d)
    except KeyError as exc:
        raise ValidationError(f"missing entry {exc}") from None


def _parse_field_section(d, _, lines):
    if len(lines) != 1:
        raise ParseError("[field] takes exactly one line", lines[0][0] if lines else 0)
    d["field"] = lines[0][1]


def _key_value(line, lineno):
    if ":" not in line:
        raise ParseError(f"expected 'key: value', got {line!r}", lineno)
    k, v = line.split(":", 1)
    return k.strip(), v.strip()


def _parse_algebra(d, _, lines):
    if any(l.startswith("basis") for _, l in lines):
        alg = {"kind": "raw", "products": {}}
        for lineno, line in lines:
            if "=" in line and ":" not in line:
                lhs, rhs = line.split("=", 1)
                parts = [p.strip() for p in lhs.split("*")]
                if len(parts) != 2:
                    raise ParseError(f"product must be 'x*y = ...', got {line!r}", lineno)
                alg["products"]["*".join(parts)] = _linear_combination(rhs, lineno)
                continue
            k, v = _key_value(line, lineno)
            if k == "basis":
                alg["basis"] = _split_list(v)
            elif k == "unit":
                alg["unit"] = _linear_combination(v, lineno)
            elif k == "idempotents":
                alg["idempotents"] = [_linear_combination(x, lineno) for x in v.split(",")]
            elif k == "radical":
                alg["radical"] = [_linear_combination(x, lineno) for x in v.split(",") if x.strip()]
            else:
                raise ParseError(f"unknown raw-algebra key {k!r}", lineno)
        d["algebra"] = alg
        return
    alg = {"kind": "quiver", "arrows": [], "relations": []}
    arrow_names = []
    pending = []
    for lineno, line in lines:
        k, v = _key_value(line, lineno)
        if k == "vertices":
            try:
                alg["vertices"] = int(v)
            except ValueError:
                raise ParseError(f"vertices must be an integer, got {v!r}", lineno) from None
        elif k == "relations":
            pending.append((lineno, v))
        else:
            m = re.fullmatch(r"(\d+)\s*->\s*(\d+)", v)
            if not m or not re.fullmatch(r"[A-Za-z_]\w*", k):
                raise ParseError(f"arrow must read 'name: src -> tgt', got {line!r}", lineno)
            alg["arrows"].append([k, int(m.group(1)), int(m.group(2))])
            arrow_names.append(k)
    for lineno, v in pending:
        for rel in [r.strip() for r in v.split(",") if r.strip()]:
            path = [x.strip() for x in rel.split("*")]
            for x in path:
                if x not in arrow_names:
                    raise ParseError(f"relation {rel!r} uses unknown arrow {x!r}", lineno)
            if len(path) < 2:
                raise ParseError(f"relation {rel!r} must have length at least 2", lineno)
            alg["relations"].append(path)
    if "vertices" not in alg:
        raise ParseError("[algebra] needs 'vertices: n'", lines[0][0] if lines else 0)
    d["algebra"] = alg


def _parse_bimodule(d, _, lines):
    terms = []
    current = None
    for lineno, line in lines:
        words = line.split()
        head = words[0]
        if head in ("left", "right"):
            if current is None or current["kind"] != "explicit":
                raise ParseError(f"'{head}' lines must follow 'explicit <dim>'", lineno)
            m = re.fullmatch(r"(left|right)\s+(\S+)\s*=\s*(.*)", line)
            if not m:
                raise ParseError(f"expected '{head} <label> = <rows>'", lineno)
            current[head][m.group(2)] = _rows(m.group(3), lineno)
            continue
        if head == "outer" and len(words) == 3:
            current = {"kind": "outer", "left": words[1], "right": words[2]}
        elif head in ("zero", "regular") and len(words) == 1:
            current = {"kind": head}
        elif head == "explicit" and len(words) == 2 and words[1].isdigit():
            current = {"kind": "explicit", "dim": int(words[1]), "left": {}, "right": {}}
        else:
            raise ParseError(f"unknown bimodule constructor {line!r}", lineno)
        terms.append(current)
    d["bimodule"] = terms


def _parse_bounds(d, _, lines):
    for lineno, line in lines:
        k, v = _key_value(line, lineno)
        try:
            val = int(v)
        except ValueError:
            raise ParseError(f"{k} must be an integer", lineno) from None
        if k == "seed":
            d["seed"] = val
        else:
            d["bounds"][k] = val


def _parse_checks(d, _, lines):
    names = [c for _, l in lines for c in _split_list(l)]
    d["checks"] = list(ALL_CHECKS) if names == ["all"] else names


def _parse_module(d, name, lines):
    spec = {"side": LEFT, "arrows": {}}
    for lineno, line in lines:
        if "=" in line and ":" not in line:
            k, v = line.split("=", 1)
            spec["arrows"][k.strip()] = _rows(v, lineno)
            continue
        k, v = _key_value(line, lineno)
        if k == "side":
            spec["side"] = v
        elif k == "dimvec":
            try:
                spec["dimvec"] = [int(x) for x in _split_list(v)]
            except ValueError:
                raise ParseError("dimvec entries must be integers", lineno) from None
        else:
            raise ParseError(f"unknown module key {k!r}", lineno)
    if "dimvec" not in spec:
        raise ParseError(f"module {name} needs a dimvec", lines[0][0] if lines else 0)
    d["modules"][name] = spec


# -- writing ---------------------------------------------------------------------------------

def _fmt_rows(rows):
    return "; ".join(" ".join(str(x) for x in r) for r in rows)


def _fmt_comb(elem):
    if not elem:
        return "0"
    out = []
    for lab, c in elem.items():
        q = Fraction(c)
        sign = "-" if q < 0 else "+"
        mag = abs(q)
        term = lab if mag == 1 else f"{mag}*{lab}"
        out.append((sign, term))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        text += f" {sign} {term}"
    return text


def scenario_to_text(s):
    lines = [f"# scenario {s.name}", "[field]", s.field, "", "[algebra]"]
    alg = s.algebra
    if alg["kind"] == "quiver":
        lines.append(f"vertices: {alg['vertices']}")
        lines += [f"{n}: {a} -> {b}" for n, a, b in alg.get("arrows", [])]
        if alg.get("relations"):
            lines.append("relations: " + ", ".join("*".join(r) for r in alg["relations"]))
    else:
        lines.append("basis: " + " ".join(alg["basis"]))
        lines.append("unit: " + _fmt_comb(alg["unit"]))
        if alg.get("idempotents"):
            lines.append("idempotents: " + ", ".join(_fmt_comb(e) for e in alg["idempotents"]))
        if alg.get("radical") is not None:
            lines.append("radical: " + ", ".join(_fmt_comb(e) for e in alg["radical"]))
        lines += [f"{k} = {_fmt_comb(v)}" for k, v in alg.get("products", {}).items()]
    lines += ["", "[bimodule]"]
    for t in s.bimodule:
        if t["kind"] == "outer":
            lines.append(f"outer {t['left']} {t['right']}")
        elif t["kind"] == "explicit":
            lines.append(f"explicit {t['dim']}")
            lines += [f"left {k} = {_fmt_rows(v)}" for k, v in t.get("left", {}).items()]
            lines += [f"right {k} = {_fmt_rows(v)}" for k, v in t.get("right", {}).items()]
        else:
            lines.append(t["kind"])
    lines += ["", "[bounds]"] + [f"{k}: {v}" for k, v in s.bounds.items()] + [f"seed: {s.seed}"]
    lines += ["", "[checks]", ", ".join(s.checks)]
    for name, spec in s.modules.items():
        lines += ["", f"[module {name}]", f"side: {spec.get('side', LEFT)}",
                  "dimvec: " + " ".join(str(x) for x in spec["dimvec"])]
        lines += [f"{k} = {_fmt_rows(v)}" for k, v in spec.get("arrows", {}).items()]
    return "\n".join(lines) + "\n"


def scenario_to_json(s):
    return json.dumps(s.to_dict(), indent=2, sort_keys=True) + "\n"


def loads(text, name="scenario"):
    """Parse either format (json when the text starts with ``{``)."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid json: {exc.msg}", exc.lineno) from None
        data.setdefault("name", name)
        return scenario_from_dict(data)
    return parse_scenario(text, name)


def load_scenario(path):
    """Load a scenario file, or a built-in when ``path`` names one."""
    from pathlib import Path
    if str(path) in builtin_names():
        return builtin(str(path))
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, p.stem)


def save_scenario(s, path):
    from pathlib import Path
    p = Path(path)
    p.write_text(scenario_to_json(s) if p.suffix == ".json" else scenario_to_text(s),
                 encoding="utf-8")


# -- built-ins -------------------------------------------------------------------------------

THREE_CYCLE = {"kind": "quiver", "vertices": 3,
               "arrows": [["a1", 1, 2], ["a2", 2, 3], ["a3", 3, 1]],
               "relations": [["a2", "a1"], ["a3", "a2"], ["a1", "a3"]]}

BATTERY_SIZE = 22
BATTERY_SEED = 20240601
BATTERY_MAX_DIM = 8
BATTERY_MAX_T_DIM = 24


def _fixed_builtins():
    return {
        "paper-example-1": Scenario(
            "paper-example-1", "GF(2)", copy.deepcopy(THREE_CYCLE),
            [{"kind": "outer", "left": "e1", "right": "e3"}]),
        "formal-matrix-A2": Scenario(
            "formal-matrix-A2", "GF(2)", {"kind": "quiver", "vertices": 2, "arrows": [],
                                          "relations": []},
            [{"kind": "outer", "left": "S1", "right": "S2"}]),
        "zero-bimodule": Scenario(
            "zero-bimodule", "GF(2)", copy.deepcopy(THREE_CYCLE), [{"kind": "zero"}]),
        "dual-numbers-k": Scenario(
            "dual-numbers-k", "GF(2)", {"kind": "quiver", "vertices": 1,
                                        "arrows": [["x", 1, 1]], "relations": [["x", "x"]]},
            [{"kind": "outer", "left": "S1", "right": "S1"}]),
    }


def _random_acyclic(rng):
    n = int(rng.integers(2, 5))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    k = int(rng.integers(1, min(len(pairs), 4) + 1))
    chosen = sorted(rng.choice(len(pairs), size=k, replace=False).tolist())
    arrows = [[f"a{i + 1}", *pairs[c]] for i, c in enumerate(chosen)]
    rels = []
    for x in arrows:
        for y in arrows:
            if y[2] == x[1] and rng.random() < 0.5:
                rels.append([x[0], y[0]])
    return {"kind": "quiver", "vertices": n, "arrows": arrows, "relations": rels}


def _random_nakayama(rng):
    n = int(rng.integers(1, 4))
    loewy = int(rng.integers(2, 4))
    while n * loewy > BATTERY_MAX_DIM:
        loewy -= 1
    arrows = [[f"c{i + 1}", i + 1, i % n + 2 if i + 1 < n else 1] for i in range(n)]
    rels = []
    for start in range(n):
        path = []
        v = start
        for _ in range(loewy):
            path.append(f"c{v + 1}")
            v = (v + 1) % n
        rels.append(list(reversed(path)))
    return {"kind": "quiver", "vertices": n, "arrows": arrows, "relations": rels}


def _random_terms(rng, n):
    terms = []
    for _ in range(int(rng.integers(1, 3))):
        i, j = (int(x) for x in rng.integers(1, n + 1, size=2))
        if rng.random() < 0.6:
            terms.append({"kind": "outer", "left": f"e{i}", "right": f"e{j}"})
        else:
            terms.append({"kind": "outer", "left": f"S{i}", "right": f"S{j}"})
    return terms


def _terms_nilpotent(a, terms):
    """Exact nilpotency test for a sum of outer tensors ``X_a (x)_k Y_a``.

    ``M^(n)`` is the sum over chains ``a_1 .. a_n`` of
    ``X_a1 (x) (Y_a1 (x)_R X_a2) (x) ... (x) Y_an``, so ``M`` is nilpotent exactly
    when the graph with an edge ``a -> b`` whenever ``Y_a (x)_R X_b != 0`` is acyclic.
    """
    import networkx as nx
    from .tensor_ring import tensor_over_R
    parts = [(_vertex_module(a, t["left"], LEFT), _vertex_module(a, t["right"], RIGHT))
             for t in terms]
    g = nx.DiGraph()
    g.add_nodes_from(range(len(parts)))
    for i, (x, y) in enumerate(parts):
        for j, (x2, _) in enumerate(parts):
            if tensor_over_R(outer_tensor(x, y), x2).result.dim:
                g.add_edge(i, j)
    return nx.is_directed_acyclic_graph(g)


def _battery_candidate_ok(s):
    from .gorenstein import perfect_test
    from .tensor_ring import NotNilpotentUpTo, build_tensor_ring, nilpotency_index
    try:
        b = s.built
    except ValidationError:
        return False
    if b.algebra.dim > BATTERY_MAX_DIM or b.bimodule.dim == 0:
        return False
    if not _terms_nilpotent(b.algebra, s.bimodule):
        return False
    nil = nilpotency_index(b.bimodule, s.bounds["nilpotency_cap"])
    if isinstance(nil, NotNilpotentUpTo):
        raise ArithmeticError(f"{s.name}: term graph is acyclic but {nil}")
    if build_tensor_ring(b.algebra, b.bimodule).dim > BATTERY_MAX_T_DIM:
        return False
    return perfect_test(b.bimodule, s.bounds["pd_bound"]).perfect == "yes"


def random_battery(count=BATTERY_SIZE, seed=BATTERY_SEED):
    """Seeded random scenarios: nilpotent perfect bimodules over small GF(2) algebras.

    Bases are acyclic monomial algebras or self-injective Nakayama algebras; bimodules are sums of ``A e_i (x) e_j A`` and ``S_i (x) S_j``.
    Duplicate draws are skipped.
    """
    rng = np.random.default_rng(seed)
    out = []
    seen = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("random battery generation did not converge")
        alg = _random_acyclic(rng) if rng.random() < 0.6 else _random_nakayama(rng)
        terms = sorted(_random_terms(rng, alg["vertices"]), key=lambda t: (t["left"], t["right"]))
        scenario_seed = int(rng.integers(0, 2**31))
        key = json.dumps([alg, terms], sort_keys=True)
        if key in seen:
            continue
        seen.add(key)
        s = Scenario(f"battery-{len(out):02d}", "GF(2)", alg, terms, seed=scenario_seed,
                     bounds={"dim_cap": 4})
        if _battery_candidate_ok(s):
            out.append(s)
    return out


_BATTERY_CACHE = {}


def battery(count=BATTERY_SIZE, seed=BATTERY_SEED):
    key = (count, seed)
    if key not in _BATTERY_CACHE:
        _BATTERY_CACHE[key] = random_battery(count, seed)
    return [scenario_from_dict(s.to_dict()) for s in _BATTERY_CACHE[key]]


def builtin_names():
    return list(_fixed_builtins()) + [f"battery-{i:02d}" for i in range(BATTERY_SIZE)]


def builtin(name):
    fixed = _fixed_builtins()
    if name in fixed:
        return fixed[name]
    m = re.fullmatch(r"battery-(\d+)", name)
    if m and int(m.group(1)) < BATTERY_SIZE:
        return battery()[int(m.group(1))]
    raise ValidationError(f"unknown built-in scenario {name!r}; choose from "
                          + ", ".join(builtin_names()))


def full_battery():
    """The sandwich battery: the fixed nilpotent examples plus the random scenarios."""
    fixed = _fixed_builtins()
    return [fixed["paper-example-1"], fixed["formal-matrix-A2"], fixed["zero-bimodule"]] + battery()
