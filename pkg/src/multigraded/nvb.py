"""Combinatorial and chart-level model of n-vector bundles.

A :class:`FactorAssignment` records which vector space sits at every nonzero
index of ``{0,1}^S``, where ``S`` is a set of ``n`` structure labels taken
from ``{1, ..., n+1}``.  The label missing from ``S`` is the one handed to a
new structure when dualizing, so iterated duals compare on the nose.

Transitions between commutative charts are modeled as polynomial
substitutions that fix the base and preserve multi-degree; their graded
counterparts carry the permutation signs of the parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import degrees as dg
from .errors import ValidationError
from .galgebra import GradedChart, GradedPolynomial, multiply, render, substitute


@dataclass(frozen=True)
class Factor:
    space: str
    dual: bool = False
    dim: int = 1

    def dualized(self) -> "Factor":
        return Factor(self.space, not self.dual, self.dim)

    def __str__(self):
        return f"{self.space}{'*' if self.dual else ''}[{self.dim}]"


class FactorAssignment:
    """Factors ``V(i)`` of an n-vector bundle chart, indexed over ``{0,1}^S``.

    ``factors`` maps index tuples (components listed in increasing label
    order) to :class:`Factor`; ``base`` is ``(space label, dimension)``.
    """

    def __init__(self, universe: Iterable[int], factors: Mapping, base=("M", 0)):
        S = tuple(sorted(int(a) for a in universe))
        n = len(S)
        if len(set(S)) != n:
            raise ValidationError(f"repeated labels in universe {S}")
        if any(not 1 <= a <= n + 1 for a in S):
            raise ValidationError(f"universe {S} is not a subset of 1..{n + 1}")
        self.universe = S
        self.n = n
        fs = {}
        for idx, f in factors.items():
            idx = tuple(int(a) for a in idx)
            if len(idx) != n or not dg.is_binary(idx):
                raise ValidationError(f"bad factor index {idx} for universe {S}")
            if not any(idx):
                raise ValidationError("index 0 is reserved for the base")
            if not isinstance(f, Factor):
                f = Factor(*f) if isinstance(f, (tuple, list)) else Factor(str(f))
            if f.dim < 0:
                raise ValidationError(f"negative dimension for factor at {idx}")
            fs[idx] = f
        missing = [i for i in product((0, 1), repeat=n) if any(i) and i not in fs]
        if missing:
            raise ValidationError(f"no factor at index {missing[0]}")
        self.factors = fs
        label, dim = base
        if int(dim) < 0:
            raise ValidationError("negative base dimension")
        self.base = (str(label), int(dim))

    @property
    def complement_label(self) -> int:
        (c,) = set(range(1, self.n + 2)) - set(self.universe)
        return c

    def slot(self, label: int) -> int:
        try:
            return self.universe.index(label)
        except ValueError:
            raise ValidationError(f"label {label} not in universe {self.universe}") from None

    def dim(self, i) -> int:
        i = tuple(i)
        if not any(i):
            return self.base[1]
        return self.factors[i].dim

    def __eq__(self, other):
        return (isinstance(other, FactorAssignment) and self.universe == other.universe
                and self.factors == other.factors and self.base == other.base)

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self.factors.items())), self.base))

    def __repr__(self):
        return f"FactorAssignment({self.universe}, {len(self.factors)} factors)"

    def describe(self) -> list[str]:
        lines = [f"universe {list(self.universe)}  base {self.base[0]}[{self.base[1]}]"]
        for i in dg.cube(self.n)[1:]:
            lines.append(f"  {_fmt_index(self.universe, i)}: {self.factors[i]}")
        return lines


def _fmt_index(universe, i) -> str:
    return "(" + ",".join(f"{l}:{a}" for l, a in zip(universe, i)) + ")"


def generic_assignment(n: int, dims: Mapping | Sequence[int] | None = None,
                       base=("M", 1)) -> FactorAssignment:
    """Assignment on labels ``1..n`` with factor ``V<bits>`` at each index.

    ``dims`` is either a mapping from index to dimension or a sequence in
    the fixed order of the nonzero indices.
    """
    idx = dg.cube(n)[1:]
    if dims is None:
        dims = {i: 1 for i in idx}
    elif not isinstance(dims, Mapping):
        dims = list(dims)
        if len(dims) != len(idx):
            raise ValidationError(f"expected {len(idx)} dimensions, got {len(dims)}")
        dims = dict(zip(idx, dims))
    factors = {i: Factor("V" + "".join(map(str, i)), False, int(dims[i])) for i in idx}
    return FactorAssignment(range(1, n + 1), factors, base)


# -- duality -----------------------------------------------------------------

def dual(F: FactorAssignment, l: int) -> FactorAssignment:
    """Dual along structure ``l``; the new structure takes the missing label."""
    if l not in F.universe:
        raise ValidationError(f"label {l} not in universe {F.universe}")
    c = F.complement_label
    new_u = tuple(sorted([a for a in F.universe if a != l] + [c]))
    ls = F.slot(l)
    out = {}
    for i, f in F.factors.items():
        comp = dict(zip(F.universe, i))
        if i[ls] == 0:
            comp[c] = 0
            g = f
        else:
            comp = {a: 1 - v for a, v in comp.items()}
            comp[c] = 1
            g = f.dualized()
        out[tuple(comp[a] for a in new_u)] = g
    return FactorAssignment(new_u, out, F.base)


@dataclass
class ClosureReport:
    ok: bool
    orbit: list
    failures: list

    def __bool__(self):
        return self.ok


def duals_closure_check(F: FactorAssignment) -> ClosureReport:
    """Check ``dual(dual(F, k), l) == dual(F, l)`` for the labelled family.

    ``F`` plays the role of the dual at its missing label.  The orbit is the
    set of all iterated duals, listed in order of missing label.
    """
    c = F.complement_label
    family = {c: F}
    for k in F.universe:
        family[k] = dual(F, k)
    failures = []
    for k, G in family.items():
        if G.complement_label != k:
            failures.append((k, None, "missing label mismatch"))
        for l in G.universe:
            if dual(G, l) != family[l]:
                failures.append((k, l, "dual does not match"))
    # closure under further dualization
    seen = {F}
    todo = [F]
    while todo:
        G = todo.pop()
        for l in G.universe:
            H = dual(G, l)
            if H not in seen:
                seen.add(H)
                todo.append(H)
    orbit = [family[k] for k in sorted(family)]
    if len(seen) != len(set(orbit)):
        failures.append((None, None, f"orbit has {len(seen)} elements outside the family"))
    return ClosureReport(not failures, orbit, failures)


def cotangent_assignment(F: FactorAssignment) -> FactorAssignment:
    """``(i,0) -> V(i)``, ``(i,1) -> V(1^n - i)*`` with ``V(0)`` the base."""
    c = F.complement_label
    new_u = tuple(sorted(F.universe + (c,)))
    out = {}
    for i in product((0, 1), repeat=F.n):
        comp = dict(zip(F.universe, i))
        if any(i):
            out[tuple({**comp, c: 0}[a] for a in new_u)] = F.factors[i]
        j = dg.complement(i)
        if any(j):
            g = F.factors[j].dualized()
        else:
            g = Factor(F.base[0], True, F.base[1])
        out[tuple({**comp, c: 1}[a] for a in new_u)] = g
    return FactorAssignment(new_u, out, F.base)


def side(F: FactorAssignment, label: int) -> FactorAssignment:
    """Side bundle obtained by dropping one structure."""
    s = F.slot(label)
    new_u = F.universe[:s] + F.universe[s + 1:]
    out = {i[:s] + i[s + 1:]: f for i, f in F.factors.items() if i[s] == 0}
    return FactorAssignment(new_u, out, F.base)


# -- diagram -----------------------------------------------------------------

@dataclass
class Diagram:
    universe: tuple
    nodes: dict  # index -> list of factors V(j), 0 < j <= i
    arrows: list  # (source index, target index, label)
    base: tuple

    def node_name(self, i) -> str:
        return "F" + "".join(map(str, i))

    def to_text(self) -> str:
        lines = []
        for i in sorted(self.nodes, key=dg.order_key, reverse=True):
            fs = ", ".join(str(f) for f in self.nodes[i]) or "-"
            lines.append(f"{self.node_name(i)}  [{self.base[0]}; {fs}]")
        for a, b, l in self.arrows:
            lines.append(f"{self.node_name(a)} -> {self.node_name(b)}  ({l})")
        return "\n".join(lines)

    def to_dot(self) -> str:
        lines = ["digraph characteristic {"]
        for i in sorted(self.nodes, key=dg.order_key, reverse=True):
            fs = "\\n".join(str(f) for f in self.nodes[i])
            label = self.node_name(i) + ("\\n" + fs if fs else "")
            lines.append(f'  {self.node_name(i)} [label="{label}"];')
        for a, b, l in self.arrows:
            lines.append(f'  {self.node_name(a)} -> {self.node_name(b)} [label="{l}"];')
        lines.append("}")
        return "\n".join(lines)

    def base_part(self) -> "Diagram":
        """The diagram with the top node removed."""
        top = dg.ones(len(self.universe))
        return Diagram(self.universe, {i: v for i, v in self.nodes.items() if i != top},
                       [a for a in self.arrows if a[0] != top], self.base)


def characteristic_diagram(F: FactorAssignment) -> Diagram:
    nodes = {}
    arrows = []
    for i in dg.cube(F.n):
        nodes[i] = [F.factors[j] for j in dg.cube(F.n)[1:] if dg.leq(j, i)]
        for s, l in enumerate(F.universe):
            if i[s] == 1:
                arrows.append((i, i[:s] + (0,) + i[s + 1:], l))
    return Diagram(F.universe, nodes, arrows, F.base)


def core_and_base_product(F: FactorAssignment):
    """``(core factor, {index: factor})`` with the core index removed."""
    top = dg.ones(F.n)
    return F.factors[top], {i: f for i, f in F.factors.items() if i != top}


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for a in range(len(part)):
            yield part[:a] + [[first] + part[a]] + part[a + 1:]
        yield [[first]] + part


def homogeneous_dimension(F: FactorAssignment, i) -> int:
    """Number of fibre monomials of degree ``i`` (per base point)."""
    i = tuple(i)
    if len(i) != F.n:
        raise ValidationError(f"degree {i} has wrong length for universe {F.universe}")
    if not dg.is_binary(i) or any(a < 0 for a in i):
        raise ValidationError(f"degree {i} is not <= 1^n")
    supp = [s for s, a in enumerate(i) if a]
    total = 0
    for part in _set_partitions(supp):
        prod = 1
        for block in part:
            j = tuple(1 if s in block else 0 for s in range(F.n))
            prod *= F.factors[j].dim
        total += prod
    return total


def assignment_chart(F: FactorAssignment, commutative: bool = False,
                     base_prefix: str = "x") -> GradedChart:
    """A chart with ``dim V(i)`` generators of degree ``i`` for every index."""
    gens = [(f"{base_prefix}{a + 1}", dg.zeros(F.n)) for a in range(F.base[1])]
    for i in dg.cube(F.n)[1:]:
        bits = "".join(map(str, i))
        for a in range(F.factors[i].dim):
            gens.append((f"y{bits}_{a + 1}", i))
    return GradedChart(gens, labels=F.universe, commutative=commutative)


# -- transitions -------------------------------------------------------------

def _base_names(chart: GradedChart) -> list[str]:
    return [n for n, d in zip(chart.names, chart.degrees) if not any(d)]


class TransitionMap:
    """Coordinate change ``target generator -> polynomial on source``.

    Both charts are commutative with the same degree list (position by
    position); base generators are fixed and every fibre image is
    homogeneous of the generator's degree, with an invertible linear block
    (constant nonzero determinant) in each degree.
    """

    def __init__(self, source: GradedChart, target: GradedChart,
                 images: Mapping[str, GradedPolynomial]):
        if not source.commutative or not target.commutative:
            raise ValidationError("transition maps live on commutative charts")
        if source.degrees != target.degrees or source.labels != target.labels:
            raise ValidationError("source and target charts have different degree lists")
        imgs = {}
        for name in target.names:
            if name not in images:
                raise ValidationError(f"transition has no image for {name!r}")
            img = images[name]
            if isinstance(img, str):
                img = source.parse(img)
            elif not isinstance(img, GradedPolynomial):
                img = source.const(img)
            if img.chart != source:
                raise ValidationError(f"image of {name!r} is not on the source chart")
            imgs[name] = img
        extra = set(images) - set(target.names)
        if extra:
            raise ValidationError(f"images given for unknown generators {sorted(extra)}")
        self.source = source
        self.target = target
        self.images = imgs
        self._validate()

    def _validate(self):
        src, tgt = self.source, self.target
        for a, name in enumerate(tgt.names):
            d = tgt.degrees[a]
            img = self.images[name]
            if not any(d):
                if img != src.gen(src.names[a]):
                    raise ValidationError(
                        f"base generator {name!r} must map to {src.names[a]!r}, got {render(img)}")
                continue
            for k in img.terms:
                if src.key_degree(k) != d:
                    raise ValidationError(
                        f"image of {name!r} is not homogeneous of degree {d}: {render(img)}")
        for d in set(tgt.degrees):
            if any(d):
                det = _det(self.linear_block(d))
                if det.is_zero() or det.generators_used():
                    raise ValidationError(
                        f"linear block of degree {d} is not invertible "
                        f"(determinant {render(det)})")

    def block_names(self, d):
        src = [n for n, e in zip(self.source.names, self.source.degrees) if e == d]
        tgt = [n for n, e in zip(self.target.names, self.target.degrees) if e == d]
        return src, tgt

    def linear_block(self, d) -> list[list[GradedPolynomial]]:
        """Matrix ``L[t][s]``: coefficient of source ``s`` in the image of ``t``."""
        src_names, tgt_names = self.block_names(d)
        src = self.source
        rows = []
        for t in tgt_names:
            img = self.images[t]
            row = []
            for s in src_names:
                a = src.index[s]
                terms = {}
                for k, v in img.terms.items():
                    if k[a] == 1 and all(k[b] == 0 or src.degrees[b] == dg.zeros(src.n)
                                         for b in range(len(k)) if b != a):
                        terms[k[:a] + (0,) + k[a + 1:]] = v
                row.append(GradedPolynomial(src, terms))
            rows.append(row)
        return rows

    def __eq__(self, other):
        return (isinstance(other, TransitionMap) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self):
        body = ", ".join(f"{n} -> {render(p)}" for n, p in self.images.items())
        return f"TransitionMap({body})"

    def is_identity(self) -> bool:
        return all(self.images[t] == self.source.gen(s)
                   for s, t in zip(self.source.names, self.target.names))


def _det(m: list[list[GradedPolynomial]]) -> GradedPolynomial:
    if not m:
        raise ValidationError("empty linear block")
    if len(m) != len(m[0]):
        raise ValidationError("linear block is not square")
    if len(m) == 1:
        return m[0][0]
    out = None
    for c in range(len(m)):
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = multiply(m[0][c], _det(minor))
        if c % 2:
            term = -term
        out = term if out is None else out + term
    return out


def identity_transition(chart: GradedChart) -> TransitionMap:
    return TransitionMap(chart, chart, {n: chart.gen(n) for n in chart.names})


def compose_transitions(A: TransitionMap, B: TransitionMap) -> TransitionMap:
    """First ``A`` then ``B``: images of ``B``'s target in ``A``'s source."""
    if A.target != B.source:
        raise ValidationError("transitions are not composable: chart mismatch")
    images = {name: substitute(img, A.images, A.source) for name, img in B.images.items()}
    return TransitionMap(A.source, B.target, images)


def invert_transition(A: TransitionMap) -> TransitionMap:
    """Solve degree by degree: ``y = L^-1 (y' - N(lower))``."""
    src, tgt = A.source, A.target
    inv: dict = {}
    for s, t in zip(src.names, tgt.names):
        if not any(src.degree(s)):
            inv[s] = tgt.gen(t)
    base_map = {s: tgt.gen(t) for s, t in zip(src.names, tgt.names) if not any(src.degree(s))}
    for d in sorted({e for e in src.degrees if any(e)}, key=dg.order_key):
        src_names, tgt_names = A.block_names(d)
        L = A.linear_block(d)
        det = _det(L)
        c = det.coefficient(src.unit_key)
        size = len(L)
        # adjugate over base polynomials, moved to the target chart
        adj = [[None] * size for _ in range(size)]
        for r in range(size):
            for q in range(size):
                if size == 1:
                    cof = src.const(1)
                else:
                    minor = [row[:q] + row[q + 1:] for a, row in enumerate(L) if a != r]
                    cof = _det(minor)
                    if (r + q) % 2:
                        cof = -cof
                adj[q][r] = substitute(cof, _extend(base_map, src, tgt), tgt) * (1 / c)
        rest = []
        for t in tgt_names:
            lin = A.images[t]
            for s, coeff in zip(src_names, L[tgt_names.index(t)]):
                lin = lin - multiply(coeff, src.gen(s))
            # lower-degree remainder, expressed through already inverted coords
            rest.append(tgt.gen(t) - substitute(lin, _extend(inv, src, tgt), tgt))
        for q, s in enumerate(src_names):
            acc = tgt.zero()
            for r in range(size):
                acc = acc + multiply(adj[q][r], rest[r])
            inv[s] = acc
    return TransitionMap(tgt, src, inv)


def _extend(partial: Mapping, src: GradedChart, tgt: GradedChart) -> dict:
    """Complete a partial substitution with zeros (only used where the
    missing generators cannot occur)."""
    out = dict(partial)
    for n in src.names:
        out.setdefault(n, tgt.zero())
    return out


def cocycle_check(chain: Sequence[TransitionMap]) -> bool:
    """Compose the chain and compare with the identity, position by position."""
    if not chain:
        raise ValidationError("empty transition chain")
    acc = chain[0]
    for T in chain[1:]:
        acc = compose_transitions(acc, T)
    if acc.source.degrees != acc.target.degrees:
        return False
    return all(acc.images[t] == acc.source.gen(s)
               for s, t in zip(acc.source.names, acc.target.names))


# -- graded transitions ------------------------------------------------------

def graded_chart(chart: GradedChart) -> GradedChart:
    return GradedChart(chart.generators, labels=chart.labels, commutative=False)


def graded_term(chart: GradedChart, coeff: GradedPolynomial, parts: Sequence[str]) -> GradedPolynomial:
    """``[i^1,...,i^r] * coeff * theta_1 ... theta_r`` with the factors taken in
    the fixed order of their degrees; ``parts`` may be listed in any order."""
    degs = [chart.degree(p) for p in parts]
    for a in range(len(degs)):
        for b in range(a + 1, len(degs)):
            if any(x and y for x, y in zip(degs[a], degs[b])):
                raise ValidationError(f"parts {parts[a]!r} and {parts[b]!r} overlap in degree")
    order = sorted(range(len(parts)), key=lambda a: dg.order_key(degs[a]))
    sign = dg.permutation_sign([degs[a] for a in order])
    out = coeff * sign
    for a in order:
        out = multiply(out, chart.gen(parts[a]))
    return out


def gradedize_transition(T: TransitionMap) -> dict:
    """Graded substitution (target name -> polynomial on the graded source)."""
    src = T.source
    gsrc = graded_chart(src)
    base_pos = [a for a, d in enumerate(src.degrees) if not any(d)]
    out = {}
    for name, img in T.images.items():
        acc = gsrc.zero()
        for k, v in img.terms.items():
            parts = []
            for a, e in enumerate(k):
                if e and a not in base_pos:
                    if e > 1:
                        raise ValidationError(
                            f"image of {name!r} repeats {src.names[a]!r}; not a valid graded term")
                    parts.append(src.names[a])
            ck = tuple(e if a in base_pos else 0 for a, e in enumerate(k))
            acc = acc + graded_term(gsrc, GradedPolynomial(gsrc, {ck: v}), parts)
        out[name] = acc
    return out


def compose_graded(A: Mapping[str, GradedPolynomial], B: Mapping[str, GradedPolynomial]) -> dict:
    """First ``A`` then ``B`` for graded substitutions."""
    src = next(iter(A.values())).chart
    return {name: substitute(img, _rename(A, img.chart), src) for name, img in B.items()}


def _rename(A: Mapping[str, GradedPolynomial], chart: GradedChart) -> dict:
    # B's source chart has A's target names, which coincide position-wise
    names = list(A)
    if len(names) != len(chart.names):
        raise ValidationError("graded substitutions are not composable")
    return {chart.names[a]: A[n] for a, n in enumerate(names)}


def graded_cocycle_check(A: TransitionMap, B: TransitionMap) -> bool:
    """``gradedize(compose(A, B)) == compose(gradedize(A), gradedize(B))``."""
    lhs = gradedize_transition(compose_transitions(A, B))
    rhs = compose_graded(gradedize_transition(A), gradedize_transition(B))
    return all(lhs[n] == rhs[n] for n in lhs)
