"""Command line front end: YAML manifests of charts, fields, Hamiltonians,
factor assignments and transitions, plus the commands that check them.

Exit codes: 0 success (or check true), 1 check false, 2 validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import yaml

from . import degrees as dg
from . import higher, lifts, nvb
from .errors import ValidationError
from .galgebra import GradedChart, GradedPolynomial, render
from .gvector import (GradedVectorField, apply_field, is_homological, is_unital, render_field,
                      super_bracket)

_TAGS = {
    "tag:yaml.org,2002:int": int,
    "tag:yaml.org,2002:bool": lambda s: s.lower() in ("true", "yes", "on"),
    "tag:yaml.org,2002:null": lambda s: None,
}


# -- YAML with source positions ---------------------------------------------

class _Marks:
    def __init__(self):
        self.pos = {}

    def at(self, path) -> tuple | None:
        path = tuple(path)
        while path:
            if path in self.pos:
                return self.pos[path][:2]
            path = path[:-1]
        return self.pos.get((), (1, 1, None))[:2]

    def scalar(self, path):
        return self.pos.get(tuple(path))


def _convert(node, path, marks: _Marks):
    start = node.start_mark
    marks.pos[tuple(path)] = (start.line + 1, start.column + 1,
                              getattr(node, "style", None))
    if isinstance(node, yaml.ScalarNode):
        conv = _TAGS.get(node.tag)
        if conv is not None:
            return conv(node.value)
        if node.tag == "tag:yaml.org,2002:float":
            return Fraction(node.value)
        return node.value
    if isinstance(node, yaml.SequenceNode):
        return [_convert(v, path + [a], marks) for a, v in enumerate(node.value)]
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = _convert(k, path + ["<key>"], marks)
            if isinstance(key, (list, dict)):
                raise ValidationError("mapping keys must be scalars",
                                      (k.start_mark.line + 1, k.start_mark.column + 1))
            key = str(key)
            if key in out:
                raise ValidationError(f"duplicate name {key!r}",
                                      (k.start_mark.line + 1, k.start_mark.column + 1))
            out[key] = _convert(v, path + [key], marks)
            marks.pos[tuple(path + [key, "<key>"])] = (k.start_mark.line + 1,
                                                       k.start_mark.column + 1, None)
        return out
    raise ValidationError("unsupported YAML node")


def load_yaml(text: str):
    marks = _Marks()
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        m = exc.problem_mark
        loc = (m.line + 1, m.column + 1) if m is not None else None
        raise ValidationError(f"syntax error: {exc.problem}", loc) from None
    if node is None:
        return {}, marks
    return _convert(node, [], marks), marks


# -- manifest ----------------------------------------------------------------

@dataclass
class Manifest:
    charts: dict = dc_field(default_factory=dict)  # name -> GradedChart | CotangentChart | TangentChart
    fields: dict = dc_field(default_factory=dict)
    hamiltonians: dict = dc_field(default_factory=dict)
    polynomials: dict = dc_field(default_factory=dict)
    assignments: dict = dc_field(default_factory=dict)
    transitions: dict = dc_field(default_factory=dict)
    compat: dict = dc_field(default_factory=dict)

    def chart(self, name) -> GradedChart:
        obj = self._get(self.charts, name, "chart")
        return obj if isinstance(obj, GradedChart) else obj.chart

    def chart_object(self, name):
        return self._get(self.charts, name, "chart")

    def field(self, name) -> GradedVectorField:
        return self._get(self.fields, name, "field")

    def hamiltonian(self, name) -> higher.HamiltonianStructure:
        return self._get(self.hamiltonians, name, "hamiltonian")

    def function(self, name) -> GradedPolynomial:
        if name in self.hamiltonians:
            return self.hamiltonians[name].H
        return self._get(self.polynomials, name, "polynomial")

    def assignment(self, name) -> nvb.FactorAssignment:
        return self._get(self.assignments, name, "assignment")

    def transition(self, name) -> nvb.TransitionMap:
        return self._get(self.transitions, name, "transition")

    @staticmethod
    def _get(table, name, kind):
        try:
            return table[name]
        except KeyError:
            raise ValidationError(f"unknown {kind} {name!r}") from None


class _Builder:
    def __init__(self, data, marks: _Marks):
        if not isinstance(data, dict):
            raise ValidationError("manifest must be a mapping", marks.at([]))
        self.data = data
        self.marks = marks
        self.m = Manifest()
        self._building: set = set()

    def fail(self, path, msg):
        raise ValidationError(msg, self.marks.at(path))

    def section(self, key) -> dict:
        sec = self.data.get(key) or {}
        if not isinstance(sec, dict):
            self.fail([key], f"section {key!r} must be a mapping of names")
        return sec

    def expect(self, value, typ, path, what):
        if not isinstance(value, typ):
            self.fail(path, f"{what} must be a {getattr(typ, '__name__', 'mapping')}")
        return value

    def poly(self, text, chart: GradedChart, path) -> GradedPolynomial:
        if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
            return chart.const(text)
        if not isinstance(text, str):
            self.fail(path, "polynomial must be a string")
        try:
            return chart.parse(text)
        except ValidationError as exc:
            col = getattr(exc, "column", None)
            info = self.marks.scalar(path)
            msg = str(exc)
            if info is not None and col is not None and "\n" not in text:
                line, c0, style = info
                shift = 1 if style in ("'", '"') else 0
                raise ValidationError(msg, (line, c0 + shift + col - 1)) from None
            raise ValidationError(msg, self.marks.at(path)) from None

    # charts ------------------------------------------------------------
    def plain_chart(self, spec, path) -> GradedChart:
        n = spec.get("gradings")
        gens = spec.get("generators")
        if gens is None:
            self.fail(path, "chart needs 'generators'")
        self.expect(gens, list, path + ["generators"], "'generators'")
        if n is not None and (not isinstance(n, int) or n < 0):
            self.fail(path + ["gradings"], "'gradings' must be a nonnegative integer")
        out = []
        seen = set()
        for a, g in enumerate(gens):
            gp = path + ["generators", a]
            self.expect(g, dict, gp, "generator entry")
            name = g.get("name")
            if not isinstance(name, str):
                self.fail(gp, "generator needs a 'name'")
            if name in seen:
                self.fail(gp + ["name"], f"duplicate generator {name!r}")
            seen.add(name)
            deg = g.get("degree", [])
            if isinstance(deg, int):
                deg = [deg]
            self.expect(deg, list, gp + ["degree"], "'degree'")
            if any(not isinstance(v, int) or isinstance(v, bool) for v in deg):
                self.fail(gp + ["degree"], "degree entries must be integers")
            if n is not None and len(deg) != n:
                self.fail(gp + ["degree"], f"degree {tuple(deg)} has length {len(deg)}, expected {n}")
            if not dg.is_binary(deg):
                self.fail(gp + ["degree"], f"degree {tuple(deg)} exceeds 1^n")
            out.append((name, tuple(deg)))
        if n is None:
            n = len(out[0][1]) if out else 0
        labels = spec.get("labels")
        try:
            return GradedChart(out or [], labels=labels if labels is not None else tuple(range(1, n + 1)),
                               commutative=bool(spec.get("commutative", False)))
        except ValidationError as exc:
            self.fail(path, str(exc))

    def build_chart(self, name, charts, path):
        if name in self.m.charts:
            return self.m.charts[name]
        if name not in charts:
            self.fail(path, f"unknown chart {name!r}")
        if name in self._building:
            self.fail(path, f"chart {name!r} is defined in terms of itself")
        self._building.add(name)
        spec = charts[name]
        cp = ["charts", name]
        self.expect(spec, dict, cp, f"chart {name!r}")
        kinds = [k for k in ("generators", "tangent", "cotangent", "side", "assignment") if k in spec]
        if len(kinds) != 1:
            self.fail(cp, "chart needs exactly one of generators/tangent/cotangent/side/assignment")
        kind = kinds[0]
        try:
            if kind == "generators":
                obj = self.plain_chart(spec, cp)
            elif kind == "assignment":
                F = self.build_assignment(spec["assignment"], cp + ["assignment"])
                obj = nvb.assignment_chart(F, commutative=bool(spec.get("commutative", True)))
            else:
                ref = spec[kind]
                base = self.build_chart(ref, charts, cp + [kind])
                base_chart = base if isinstance(base, GradedChart) else base.chart
                if kind == "tangent":
                    obj = lifts.tangent_chart(base_chart)
                elif kind == "cotangent":
                    obj = lifts.cotangent_chart(base_chart)
                else:
                    if not isinstance(base, lifts.CotangentChart):
                        self.fail(cp + ["side"], "side charts are taken of cotangent charts")
                    k = spec.get("drop")
                    if not isinstance(k, int):
                        self.fail(cp, "side chart needs an integer 'drop'")
                    obj = higher.side_chart(base, k)
        except ValidationError as exc:
            if exc.location is not None:
                raise
            self.fail(cp, str(exc))
        self._building.discard(name)
        self.m.charts[name] = obj
        return obj

    def build_assignment(self, ref, path):
        if isinstance(ref, str):
            if ref in self.m.assignments:
                return self.m.assignments[ref]
            specs = self.section("assignments")
            if ref not in specs:
                self.fail(path, f"unknown assignment {ref!r}")
            return self.assignment(ref, specs[ref])
        self.fail(path, "expected an assignment name")

    def assignment(self, name, spec):
        path = ["assignments", name]
        self.expect(spec, dict, path, f"assignment {name!r}")
        universe = spec.get("universe")
        base = spec.get("base", ["M", 1])
        if not (isinstance(base, list) and len(base) == 2):
            self.fail(path + ["base"], "'base' must be [label, dimension]")
        try:
            if "dims" in spec:
                dims = spec["dims"]
                n = len(universe) if universe is not None else None
                if isinstance(dims, list):
                    if n is None:
                        n = (len(dims) + 1).bit_length() - 1
                    F = nvb.generic_assignment(n, dims, tuple(base))
                else:
                    self.expect(dims, dict, path + ["dims"], "'dims'")
                    idx = {self.index(k, path + ["dims", k]): v for k, v in dims.items()}
                    n = len(next(iter(idx))) if idx else 0
                    F = nvb.generic_assignment(n, idx, tuple(base))
                if universe is not None:
                    F = nvb.FactorAssignment(universe, F.factors, F.base)
            else:
                factors = self.expect(spec.get("factors"), dict, path + ["factors"], "'factors'")
                fs = {}
                for k, v in factors.items():
                    fp = path + ["factors", k]
                    if isinstance(v, dict):
                        fs[self.index(k, fp)] = nvb.Factor(str(v.get("space", "V" + k)),
                                                           bool(v.get("dual", False)),
                                                           int(v.get("dim", 1)))
                    elif isinstance(v, list) and len(v) == 3:
                        fs[self.index(k, fp)] = nvb.Factor(str(v[0]), bool(v[1]), int(v[2]))
                    else:
                        self.fail(fp, "factor must be {space, dual, dim} or [space, dual, dim]")
                if universe is None:
                    n = len(next(iter(fs))) if fs else 0
                    universe = list(range(1, n + 1))
                F = nvb.FactorAssignment(universe, fs, tuple(base))
        except ValidationError as exc:
            if exc.location is not None:
                raise
            self.fail(path, str(exc))
        self.m.assignments[name] = F
        return F

    def index(self, key, path):
        s = str(key).replace(",", "").replace(" ", "")
        if not s or any(c not in "01" for c in s):
            self.fail(path, f"bad index {key!r}")
        return tuple(int(c) for c in s)

    # top level ---------------------------------------------------------
    def build(self) -> Manifest:
        d = self.data
        known = {"gradings", "generators", "commutative", "labels", "charts", "fields",
                 "hamiltonians", "polynomials", "assignments", "transitions", "compat"}
        for key in d:
            if key not in known:
                self.fail([key, "<key>"], f"unknown section {key!r}")
        if "generators" in d:
            self.m.charts["base"] = self.plain_chart(d, [])
        charts = self.section("charts")
        if "base" in charts and "base" in self.m.charts:
            self.fail(["charts", "base"], "chart 'base' is already defined by the top-level generators")
        for name in charts:
            self.build_chart(name, charts, ["charts", name])
        for name, spec in self.section("assignments").items():
            if name not in self.m.assignments:
                self.assignment(name, spec)
        for name, spec in self.section("fields").items():
            self.m.fields[name] = self.build_field(name, spec)
        for name, spec in self.section("polynomials").items():
            p = ["polynomials", name]
            self.expect(spec, dict, p, f"polynomial {name!r}")
            chart = self.chart_ref(spec.get("chart", "base"), p + ["chart"])
            self.m.polynomials[name] = self.poly(spec.get("poly"), chart, p + ["poly"])
        for name, spec in self.section("hamiltonians").items():
            self.m.hamiltonians[name] = self.build_hamiltonian(name, spec)
        for name, spec in self.section("transitions").items():
            self.m.transitions[name] = self.build_transition(name, spec)
        for name, spec in self.section("compat").items():
            self.m.compat[name] = self.build_compat(name, spec)
        return self.m

    def chart_ref(self, name, path) -> GradedChart:
        if name not in self.m.charts:
            self.fail(path, f"unknown chart {name!r}")
        return self.m.chart(name)

    def build_field(self, name, spec):
        p = ["fields", name]
        self.expect(spec, dict, p, f"field {name!r}")
        chart = self.chart_ref(spec.get("chart", "base"), p + ["chart"])
        comps = spec.get("components") or {}
        self.expect(comps, dict, p + ["components"], "'components'")
        out = {}
        for g, text in comps.items():
            if g not in chart.index:
                self.fail(p + ["components", g, "<key>"], f"undeclared generator {g!r}")
            out[g] = self.poly(text, chart, p + ["components", g])
        return GradedVectorField(chart, out)

    def build_hamiltonian(self, name, spec):
        p = ["hamiltonians", name]
        self.expect(spec, dict, p, f"hamiltonian {name!r}")
        if "algebroid" in spec:
            return higher.algebroid_hamiltonian(self.algebroid(spec["algebroid"], p + ["algebroid"]))
        cname = spec.get("chart")
        if cname not in self.m.charts:
            self.fail(p + ["chart"], f"unknown chart {cname!r}")
        T = self.m.chart_object(cname)
        if not isinstance(T, lifts.CotangentChart):
            self.fail(p + ["chart"], f"chart {cname!r} is not a cotangent chart")
        return higher.HamiltonianStructure(T, self.poly(spec.get("poly"), T.chart, p + ["poly"]))

    def algebroid(self, spec, p):
        self.expect(spec, dict, p, "'algebroid'")
        base = spec.get("base", [])
        rank = spec.get("rank")
        if not isinstance(rank, int):
            self.fail(p, "algebroid needs an integer 'rank'")
        if isinstance(base, list):
            base_chart = GradedChart([(str(x), ()) for x in base])
        else:
            base_chart = self.chart_ref(base, p + ["base"])
        anchor = {}
        for key, v in (spec.get("anchor") or {}).items():
            r, _, x = str(key).partition(",")
            if not r.strip().isdigit() or not x.strip():
                self.fail(p + ["anchor", key], "anchor keys look like 'r,x' (r 1-based)")
            anchor[(int(r) - 1, x.strip())] = self.poly(v, base_chart, p + ["anchor", key])
        brackets = {}
        for key, comps in (spec.get("brackets") or {}).items():
            try:
                r, s = (int(t) - 1 for t in str(key).split(","))
            except ValueError:
                self.fail(p + ["brackets", key], "bracket keys look like 'r,s' (1-based)")
            self.expect(comps, dict, p + ["brackets", key], "bracket value")
            brackets[(r, s)] = {int(u) - 1: self.poly(v, base_chart, p + ["brackets", key, u])
                                for u, v in comps.items()}
        degs = spec.get("fiber_degrees")
        try:
            return higher.AlgebroidData.from_antisymmetric(base_chart, rank, anchor, brackets,
                                                           fiber_degrees=degs)
        except ValidationError as exc:
            self.fail(p, str(exc))

    def build_transition(self, name, spec):
        p = ["transitions", name]
        self.expect(spec, dict, p, f"transition {name!r}")
        chart = self.chart_ref(spec.get("chart"), p + ["chart"])
        imgs = spec.get("images") or {}
        self.expect(imgs, dict, p + ["images"], "'images'")
        out = {}
        for g in chart.names:
            if g in imgs:
                out[g] = self.poly(imgs[g], chart, p + ["images", g])
            else:
                out[g] = chart.gen(g)
        for g in imgs:
            if g not in chart.index:
                self.fail(p + ["images", g, "<key>"], f"undeclared generator {g!r}")
        try:
            return nvb.TransitionMap(chart, chart, out)
        except ValidationError as exc:
            self.fail(p, str(exc))

    def build_compat(self, name, spec):
        p = ["compat", name]
        self.expect(spec, dict, p, f"compat entry {name!r}")
        cname = spec.get("chart")
        T = self.m.charts.get(cname)
        if not isinstance(T, lifts.CotangentChart):
            self.fail(p + ["chart"], f"{cname!r} is not a cotangent chart")
        fields = {}
        for key, fname in (spec.get("fields") or {}).items():
            try:
                r, k = (int(t) for t in str(key).split(","))
            except ValueError:
                self.fail(p + ["fields", key], "field keys look like 'r,k'")
            if fname not in self.m.fields:
                self.fail(p + ["fields", key], f"unknown field {fname!r}")
            q = self.m.fields[fname]
            if q.chart != higher.side_chart(T, k):
                self.fail(p + ["fields", key], f"field {fname!r} is not on the side chart dropping {k}")
            fields[(r, k)] = q
        return T, fields


def parse_manifest(text: str) -> Manifest:
    data, marks = load_yaml(text)
    return _Builder(data, marks).build()


# -- commands ----------------------------------------------------------------

@dataclass
class Result:
    ok: bool | None  # None: plain computation
    text: str
    data: dict = dc_field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if self.ok is False else 0


def _need(args, k, usage):
    if len(args) != k:
        raise ValidationError(f"usage: {usage}")
    return args


def _report_result(rep: higher.CheckReport) -> Result:
    return Result(rep.ok, rep.to_text(), rep.to_dict())


def _fields_text(label, X):
    return f"{label} = {render_field(X)}"


def cmd_bracket(m, args, opts):
    a, b = _need(args, 2, "bracket X Y")
    Z = super_bracket(m.field(a), m.field(b))
    return Result(None, _fields_text(f"[{a},{b}]", Z), {"field": render_field(Z)})


def cmd_poisson(m, args, opts):
    a, b = _need(args, 2, "poisson F G")
    F = m.function(a)
    T = _cotangent_of(m, F)
    out = lifts.canonical_poisson(F, m.function(b), T)
    return Result(None, f"{{{a},{b}}} = {render(out)}", {"polynomial": render(out)})


def _cotangent_of(m, F):
    for obj in list(m.charts.values()) + [h.chart for h in m.hamiltonians.values()]:
        if isinstance(obj, lifts.CotangentChart) and obj.chart == F.chart:
            return obj
    raise ValidationError("function does not live on a cotangent chart")


def cmd_apply(m, args, opts):
    a, b = _need(args, 2, "apply X f")
    out = apply_field(m.field(a), m.function(b))
    return Result(None, f"{a}({b}) = {render(out)}", {"polynomial": render(out)})


def cmd_lift(m, args, opts):
    kind, name = _need(args, 2, "lift tangent|cotangent|phase X")
    X = m.field(name)
    if kind == "tangent":
        T = lifts.tangent_chart(X.chart)
        Y = lifts.tangent_lift(X, T)
        return Result(None, _fields_text(f"d_T {name}", Y), {"field": render_field(Y),
                                                             "chart": repr(T.chart)})
    if kind in ("cotangent", "phase"):
        T = lifts.cotangent_chart(X.chart)
        Y = lifts.cotangent_lift(X, T) if kind == "cotangent" else lifts.phase_lift(X, T)
        h = lifts.iota(X, T)
        text = _fields_text(f"{kind} lift of {name}", Y) + f"\ni_{name} = {render(h)}"
        return Result(None, text, {"field": render_field(Y), "hamiltonian": render(h),
                                   "chart": repr(T.chart)})
    raise ValidationError(f"unknown lift kind {kind!r}")


def cmd_legendre(m, args, opts):
    name, k = _need(args, 2, "legendre N k")
    T = m.chart_object(name)
    if not isinstance(T, lifts.CotangentChart):
        raise ValidationError(f"chart {name!r} is not a cotangent chart")
    pull, target = lifts.legendre_map(T, _int(k))
    ok = lifts.is_symplectomorphism(pull, T, target)
    lines = [f"{u} -> {render(v)}" for u, v in pull.items()]
    lines.append(f"symplectomorphism: {ok}")
    return Result(ok, "\n".join(lines), {"pullback": {u: render(v) for u, v in pull.items()},
                                         "target": repr(target.chart)})


def _int(s):
    try:
        return int(s)
    except ValueError:
        raise ValidationError(f"expected an integer, got {s!r}") from None


def cmd_derham(m, args, opts):
    (name,) = _need(args, 1, "derham CHART")
    obj = m.chart_object(name)
    if isinstance(obj, lifts.TangentChart):
        T = obj
    elif isinstance(obj, GradedChart):
        T = lifts.tangent_chart(obj)
    else:
        raise ValidationError(f"chart {name!r} is a cotangent chart; give a tangent or plain chart")
    d = lifts.de_rham_field(T)
    return Result(None, _fields_text("d", d), {"field": render_field(d)})


def cmd_check(m, args, opts):
    if not args:
        raise ValidationError("usage: check homological|unital|nfold|drinfeld|master|bialgebroid|compat ...")
    what, rest = args[0], args[1:]
    if what == "homological":
        (name,) = _need(rest, 1, "check homological X")
        v = is_homological(m.field(name))
        text = f"homological: {v.ok}"
        data = {}
        if not v.ok:
            g, res = v.witness
            text += f"\n  [Q,Q]({g}) = {render(res)}"
            data["residual"] = {g: render(res)}
        return Result(v.ok, text, data)
    if what == "unital":
        (name,) = _need(rest, 1, "check unital X")
        ok = is_unital(m.field(name))
        return Result(ok, f"unital: {ok}")
    if what == "nfold":
        (name,) = _need(rest, 1, "check nfold X")
        return _report_result(higher.nfold_check(m.field(name)))
    if what == "master":
        (name,) = _need(rest, 1, "check master H")
        return _report_result(higher.master_equation(m.hamiltonian(name)))
    if what == "drinfeld":
        (name,) = _need(rest, 1, "check drinfeld H")
        return _report_result(higher.drinfeld_check(m.hamiltonian(name)))
    if what == "bialgebroid":
        a, b = _need(rest, 2, "check bialgebroid H1 H2")
        return _report_result(higher.bialgebroid_check(m.hamiltonian(a), m.hamiltonian(b)))
    if what == "compat":
        if not rest and len(m.compat) == 1:
            rest = list(m.compat)
        (name,) = _need(rest, 1, "check compat NAME")
        if name not in m.compat:
            raise ValidationError(f"unknown compat entry {name!r}")
        T, fields = m.compat[name]
        return _report_result(higher.compatibility_check(fields, T))
    raise ValidationError(f"unknown check {what!r}")


def cmd_derived(m, args, opts):
    h, a, b = _need(args, 3, "derived-bracket H X Y")
    hs = m.hamiltonian(h)
    out = higher.derived_bracket(hs, m.function(a), m.function(b))
    return Result(None, f"{{{a},{b}}}_{h} = {render(out)}", {"polynomial": render(out)})


def _assignment_data(F):
    return {"universe": list(F.universe), "base": list(F.base),
            "factors": {"".join(map(str, i)): str(f) for i, f in sorted(F.factors.items(),
                                                                       key=lambda t: dg.order_key(t[0]))}}


def cmd_dual(m, args, opts):
    name, l = _need(args, 2, "dual F l")
    G = nvb.dual(m.assignment(name), _int(l))
    return Result(None, "\n".join(G.describe()), _assignment_data(G))


def cmd_orbit(m, args, opts):
    (name,) = _need(args, 1, "duals-orbit F")
    rep = nvb.duals_closure_check(m.assignment(name))
    lines = [f"orbit size {len(rep.orbit)}"]
    for G in rep.orbit:
        lines.extend(G.describe())
    for f in rep.failures:
        lines.append(f"closure failure: {f}")
    return Result(rep.ok, "\n".join(lines), {"orbit": [_assignment_data(G) for G in rep.orbit],
                                             "size": len(rep.orbit)})


def cmd_diagram(m, args, opts):
    (name,) = _need(args, 1, "diagram F")
    D = nvb.characteristic_diagram(m.assignment(name))
    text = D.to_dot() if opts.dot else D.to_text()
    return Result(None, text, {"nodes": len(D.nodes), "arrows": len(D.arrows), "text": text})


def cmd_cocycle(m, args, opts):
    if not args:
        raise ValidationError("usage: cocycle A B [C ...]")
    ok = nvb.cocycle_check([m.transition(a) for a in args])
    return Result(ok, f"cocycle {' o '.join(args)} = id: {ok}")


def cmd_gradedize(m, args, opts):
    if len(args) not in (1, 2):
        raise ValidationError("usage: gradedize A [B]")
    A = m.transition(args[0])
    g = nvb.gradedize_transition(A)
    lines = [f"{u} -> {render(v)}" for u, v in g.items()]
    data = {"substitution": {u: render(v) for u, v in g.items()}}
    ok = None
    if len(args) == 2:
        ok = nvb.graded_cocycle_check(A, m.transition(args[1]))
        lines.append(f"gradedize(compose) = compose(gradedize): {ok}")
    return Result(ok, "\n".join(lines), data)


def cmd_dim(m, args, opts):
    name, idx = _need(args, 2, "dim F i")
    s = idx.replace(",", "")
    if not s.isdigit():
        raise ValidationError(f"bad degree {idx!r}")
    d = nvb.homogeneous_dimension(m.assignment(name), tuple(int(c) for c in s))
    return Result(None, str(d), {"dim": d})


COMMANDS = {
    "bracket": cmd_bracket,
    "poisson": cmd_poisson,
    "apply": cmd_apply,
    "lift": cmd_lift,
    "legendre": cmd_legendre,
    "derham": cmd_derham,
    "check": cmd_check,
    "derived-bracket": cmd_derived,
    "dual": cmd_dual,
    "duals-orbit": cmd_orbit,
    "diagram": cmd_diagram,
    "cocycle": cmd_cocycle,
    "gradedize": cmd_gradedize,
    "dim": cmd_dim,
}


def run_command(manifest: Manifest, command: str, args, opts=None) -> Result:
    if opts is None:
        opts = argparse.Namespace(dot=False)
    fn = COMMANDS.get(command)
    if fn is None:
        raise ValidationError(f"unknown command {command!r}")
    return fn(manifest, list(args), opts)


def _build_parser():
    p = argparse.ArgumentParser(prog="multigraded",
                                description="Checks for multi-graded manifolds and n-vector bundles.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("names", nargs="*")
    p.add_argument("--manifest", "-m", default="-", help="manifest path, '-' for stdin")
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.add_argument("--dot", action="store_true", help="diagram in DOT format")
    return p


def main(argv=None) -> int:
    opts = _build_parser().parse_args(argv)
    try:
        if opts.manifest == "-":
            text = sys.stdin.read()
        else:
            with open(opts.manifest, encoding="utf-8") as fh:
                text = fh.read()
        res = run_command(parse_manifest(text), opts.command, opts.names, opts)
    except (ValidationError, OSError) as exc:
        if opts.json:
            print(json.dumps({"command": opts.command, "ok": False, "exit": 2, "error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    if opts.json:
        doc = {"command": opts.command, "args": opts.names, "ok": res.ok,
               "exit": res.exit_code, "result": res.data, "text": res.text}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(res.text)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
