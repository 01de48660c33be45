"""Graded vector fields as derivations ``X = sum_j a^j d/dx^j``.

Coefficients sit to the left of the partials, so ``X(f) = sum_j a^j * d_j f``
with left derivatives.  Fields of mixed parity are kept whole and split into
parity-homogeneous parts whenever a sign depends on the parity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from . import degrees as dg
from .errors import ValidationError
from .galgebra import (GradedChart, GradedPolynomial, left_partial, multiply, render,
                       substitute)


class GradedVectorField:
    __slots__ = ("chart", "components")

    def __init__(self, chart: GradedChart, components: Mapping[str, GradedPolynomial] | None = None):
        self.chart = chart
        comps = {}
        for name, a in (components or {}).items():
            if name not in chart.index:
                raise ValidationError(f"unknown generator {name!r} in vector field")
            if isinstance(a, (int, Fraction)):
                a = chart.const(a)
            elif isinstance(a, str):
                a = chart.parse(a)
            if a.chart != chart:
                raise ValidationError(f"coefficient of d/d{name} lives on another chart")
            if not a.is_zero():
                comps[name] = a
        self.components = comps

    def __getitem__(self, name: str) -> GradedPolynomial:
        return self.components.get(name, self.chart.zero())

    def __call__(self, f: GradedPolynomial) -> GradedPolynomial:
        return apply_field(self, f)

    def _check(self, other):
        if not isinstance(other, GradedVectorField):
            return NotImplemented
        if other.chart != self.chart:
            raise ValidationError("vector fields live on different charts")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        names = list(self.components) + [n for n in other.components if n not in self.components]
        return GradedVectorField(self.chart, {n: self[n] + other[n] for n in names})

    def __neg__(self):
        return GradedVectorField(self.chart, {n: -a for n, a in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return GradedVectorField(self.chart, {n: a * c for n, a in self.components.items()})
        return NotImplemented

    __rmul__ = __mul__

    def times(self, f: GradedPolynomial) -> "GradedVectorField":
        """Left multiplication ``f * X``."""
        return GradedVectorField(self.chart, {n: multiply(f, a) for n, a in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedVectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self):
        return hash(frozenset((n, hash(a)) for n, a in self.components.items()))

    def is_zero(self) -> bool:
        return not self.components

    def __repr__(self):
        return f"GradedVectorField({render_field(self)!r})"

    __str__ = lambda self: render_field(self)

    def terms(self):
        """Yield ``(generator, key, coefficient)`` for every monomial term."""
        for name in self.chart.names:
            a = self.components.get(name)
            if a is not None:
                for k, v in a.terms.items():
                    yield name, k, v

    def parity_parts(self) -> dict[int, "GradedVectorField"]:
        parts: dict[int, dict] = {}
        chart = self.chart
        for name, k, v in self.terms():
            p = (chart.key_parity(k) + chart.parity(name)) % 2
            parts.setdefault(p, {}).setdefault(name, {})[k] = v
        return {p: GradedVectorField(chart, {n: GradedPolynomial(chart, t) for n, t in c.items()})
                for p, c in parts.items()}

    def parity(self) -> int:
        ps = set(self.parity_parts())
        if len(ps) > 1:
            raise ValidationError("vector field has mixed parity")
        return ps.pop() if ps else 0


def field(chart: GradedChart, **components) -> GradedVectorField:
    """Shorthand: ``field(chart, x="xi", xi="x*eta")``."""
    return GradedVectorField(chart, components)


def render_field(X: GradedVectorField) -> str:
    if X.is_zero():
        return "0"
    parts = []
    for name in X.chart.names:
        if name in X.components:
            parts.append(f"({render(X.components[name])})*d_{name}")
    return " + ".join(parts)


def _check_field_chart(X: GradedVectorField, f: GradedPolynomial) -> None:
    if X.chart != f.chart:
        raise ValidationError("vector field and polynomial live on different charts")


def apply_field(X: GradedVectorField, f: GradedPolynomial) -> GradedPolynomial:
    _check_field_chart(X, f)
    out = f.chart.zero()
    for name, a in X.components.items():
        d = left_partial(f, name)
        if not d.is_zero():
            out = out + multiply(a, d)
    return out


def _bracket_homogeneous(X, px, Y, py):
    # [X,Y](x) = X(Y(x)) - (-1)^{p(X)p(Y)} Y(X(x))
    odd_pair = px * py == 1
    comps = {}
    for name in X.chart.names:
        xy = apply_field(X, Y[name])
        yx = apply_field(Y, X[name])
        v = xy + yx if odd_pair else xy - yx
        if not v.is_zero():
            comps[name] = v
    return GradedVectorField(X.chart, comps)


def super_bracket(X: GradedVectorField, Y: GradedVectorField) -> GradedVectorField:
    """``[X, Y] = X Y - (-1)^{p(X)p(Y)} Y X``, bilinear over parity parts."""
    if X.chart != Y.chart:
        raise ValidationError("vector fields live on different charts")
    out = GradedVectorField(X.chart)
    for px, Xp in X.parity_parts().items():
        for py, Yp in Y.parity_parts().items():
            out = out + _bracket_homogeneous(Xp, px, Yp, py)
    return out


def euler_fields(chart: GradedChart) -> list[GradedVectorField]:
    """``Delta^k = sum_j g_k(x^j) x^j d_{x^j}``, one per structure slot."""
    out = []
    for s in range(chart.n):
        comps = {name: chart.gen(name) for name, d in zip(chart.names, chart.degrees) if d[s]}
        out.append(GradedVectorField(chart, comps))
    return out


def euler_field(chart: GradedChart, label: int) -> GradedVectorField:
    """Euler field of the structure carrying ``label``."""
    return euler_fields(chart)[chart.label_slot(label)]


def weight_components(X: GradedVectorField) -> dict[tuple[int, ...], GradedVectorField]:
    """Split ``X`` by weight ``deg(coefficient) - deg(x^j)``."""
    chart = X.chart
    parts: dict = {}
    for name, k, v in X.terms():
        w = dg.sub(chart.key_degree(k), chart.degree(name))
        parts.setdefault(w, {}).setdefault(name, {})[k] = v
    return {w: GradedVectorField(chart, {n: GradedPolynomial(chart, t) for n, t in c.items()})
            for w, c in parts.items()}


class Verdict:
    """Boolean outcome of a check plus supporting data.

    Truthiness follows ``ok``; ``witness`` holds a residual or offending
    object when the check fails.
    """

    def __init__(self, ok: bool, witness=None, details=None):
        self.ok = bool(ok)
        self.witness = witness
        self.details = details or {}

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Verdict(ok={self.ok}, witness={self.witness!r})"


def is_homological(Q: GradedVectorField) -> Verdict:
    parts = Q.parity_parts()
    if 0 in parts:
        raise ValidationError("homological fields must be odd; found an even component: "
                              + render_field(parts[0]))
    sq = super_bracket(Q, Q)
    if sq.is_zero():
        return Verdict(True)
    name = next(n for n in Q.chart.names if n in sq.components)
    return Verdict(False, witness=(name, sq[name]), details={"bracket": sq})


def is_unital(Q: GradedVectorField) -> bool:
    n = Q.chart.n
    units = {dg.delta(n, k) for k in range(1, n + 1)}
    return all(w in units for w in weight_components(Q))


def relates_fields(phi: Mapping[str, GradedPolynomial], X: GradedVectorField,
                   Y: GradedVectorField) -> bool:
    """``phi`` is a pullback (target generator -> source polynomial); check
    ``X(phi(u)) == phi(Y(u))`` for every target generator ``u``."""
    target = Y.chart
    source = X.chart
    for name in target.names:
        if name not in phi:
            raise ValidationError(f"pullback has no image for {name!r}")
        if phi[name].chart != source:
            raise ValidationError(f"pullback image of {name!r} is not on the source chart")
    for name in target.names:
        lhs = apply_field(X, phi[name])
        rhs = substitute(Y[name], phi, source)
        if lhs != rhs:
            return False
    return True


def push_field(X: GradedVectorField, forward: Mapping[str, GradedPolynomial],
               inverse: Mapping[str, GradedPolynomial]) -> GradedVectorField:
    """Express ``X`` in new coordinates.

    ``forward`` gives each new coordinate in terms of the old ones and
    ``inverse`` each old coordinate in terms of the new ones.
    """
    new_chart = next(iter(inverse.values())).chart
    comps = {}
    for name in new_chart.names:
        comps[name] = substitute(apply_field(X, forward[name]), inverse, new_chart)
    return GradedVectorField(new_chart, comps)


def restrict_field(Q: GradedVectorField, i) -> GradedVectorField:
    """Restrict ``Q`` to the sub-chart of generators of degree <= ``i``."""
    chart = Q.chart
    i = tuple(i)
    if len(i) != chart.n:
        raise ValidationError(f"degree {i} has wrong length for this chart")
    keep = [n for n, d in zip(chart.names, chart.degrees) if dg.leq(d, i)]
    dropped = set(chart.names) - set(keep)
    sub = chart.subchart(keep)
    comps = {}
    for name in keep:
        a = Q[name]
        bad = a.generators_used() & dropped
        if bad:
            raise ValidationError(
                f"field is not tangent to the sub-chart <= {i}: coefficient of d_{name} = "
                f"{render(a)} involves {sorted(bad)}")
        comps[name] = _restrict_poly(a, sub)
    return GradedVectorField(sub, comps)


def _restrict_poly(f: GradedPolynomial, sub: GradedChart) -> GradedPolynomial:
    src = f.chart
    pos = [src.index[n] for n in sub.names]
    return GradedPolynomial(sub, {tuple(k[a] for a in pos): v for k, v in f.terms.items()})


def embed_poly(f: GradedPolynomial, big: GradedChart) -> GradedPolynomial:
    """View a polynomial on a sub-chart as a polynomial on ``big``."""
    src = f.chart
    pos = [src.index[n] if n in src.index else None for n in big.names]
    for n in src.names:
        if n not in big.index:
            raise ValidationError(f"generator {n!r} missing from the larger chart")
    return GradedPolynomial(big, {tuple(k[a] if a is not None else 0 for a in pos): v
                                  for k, v in f.terms.items()})


def drop_structure(chart: GradedChart, label: int) -> GradedChart:
    """Forget one structure; generators of that structure change parity."""
    s = chart.label_slot(label)
    return GradedChart([(n, d[:s] + d[s + 1:]) for n, d in zip(chart.names, chart.degrees)],
                       labels=chart.labels[:s] + chart.labels[s + 1:],
                       commutative=chart.commutative)


def parity_change_linear(X: GradedVectorField, label: int) -> GradedVectorField:
    """Transport a field linear along the fibres of structure ``label`` to the
    parity-changed chart, using ``eta_i d_{eta_j} -> (-1)^{p_i+p_j} mu_i d_{mu_j}``.

    Fibre generators are those with degree 1 at ``label``; they keep their
    names on the new chart.
    """
    chart = X.chart
    s = chart.label_slot(label)
    fiber = {n for n, d in zip(chart.names, chart.degrees) if d[s] == 1}
    new = drop_structure(chart, label)
    fpos = [a for a, n in enumerate(chart.names) if n in fiber]
    comps: dict = {}
    for name, k, v in X.terms():
        fdeg = sum(k[a] for a in fpos)
        if name in fiber:
            if fdeg != 1:
                raise ValidationError(
                    f"component along d_{name} is not fibre-linear: {render(X[name])}")
            eta_i = next(a for a in fpos if k[a])
            # coefficient c * eta_i as stored; write it as (c') * eta_i with
            # eta_i moved to the right, then c' * mu_i
            sign = _sign_move_right(chart, k, eta_i)
            sign_new = _sign_move_right(new, k, eta_i)
            rule = -1 if (chart.parities[eta_i] + chart.parity(name)) % 2 else 1
            coeff = v * sign * sign_new * rule
        else:
            if fdeg != 0:
                raise ValidationError(
                    f"base component along d_{name} depends on fibre coordinates: {render(X[name])}")
            coeff = v
        comps.setdefault(name, {})
        comps[name][k] = comps[name].get(k, 0) + coeff
    return GradedVectorField(new, {n: GradedPolynomial(new, t) for n, t in comps.items()})


def _sign_move_right(chart: GradedChart, key, a: int) -> int:
    """Sign of moving generator ``a`` from its canonical slot to the right end
    of the monomial ``key``."""
    if not chart.parities[a]:
        return 1
    count = sum(key[b] for b in chart._odd if b > a)
    return -1 if count % 2 else 1


def field_from_function(chart: GradedChart, fn: Callable[[str], GradedPolynomial]) -> GradedVectorField:
    return GradedVectorField(chart, {n: fn(n) for n in chart.names})
