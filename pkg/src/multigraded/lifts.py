"""Graded tangent and cotangent charts, the canonical Poisson bracket, lifts
of vector fields, and Legendre symplectomorphisms.

Sign conventions
----------------
The bracket on a cotangent chart has degree ``-1^N`` (N = number of
structures of the cotangent chart).  Write ``s(a) = p(a) + N`` for the
shifted parity (``N`` is ignored on commutative charts).  It is fixed by

* ``{p_j, x^j} = 1``, ``{x^j, p_j} = -(-1)^{s(x)s(p)}``;
* ``{F, .}`` is a left derivation of parity ``s(F)``;
* antisymmetry ``{F, G} = -(-1)^{s(F)s(G)} {G, F}``.

Hence ``{H, x^j} = (-1)^{s(H)s(x) + s(x)s(p)} d_{p_j} H`` and
``{H, p_j} = -(-1)^{s(H)s(p)} d_{x^j} H``.  The function attached to a
vector field ``X = sum f^j d_j`` is ``i_X = sum +-f^j p_j`` with the sign
chosen per term so that ``{i_X, x^j} = f^j``; then ``{i_X, i_Y} = i_[X,Y]``
with no extra sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from . import degrees as dg
from .errors import ValidationError
from .galgebra import GradedChart, GradedPolynomial, left_partial, multiply, substitute
from .gvector import GradedVectorField, apply_field, embed_poly


def _new_label(labels) -> int:
    k = 1
    while k in labels:
        k += 1
    return k


@dataclass(eq=False)
class CotangentChart:
    base: GradedChart
    chart: GradedChart
    momenta: dict  # base generator -> momentum name
    label: int  # structure label of the momentum structure
    coordinates: dict = dc_field(default_factory=dict)  # momentum -> base generator

    def __post_init__(self):
        self.coordinates = {p: x for x, p in self.momenta.items()}

    def conjugate(self, name: str) -> str:
        if name in self.momenta:
            return self.momenta[name]
        if name in self.coordinates:
            return self.coordinates[name]
        raise ValidationError(f"unknown generator {name!r}")

    def is_momentum(self, name: str) -> bool:
        return name in self.coordinates

    @property
    def bracket_parity(self) -> int:
        return self.chart.parity_of(dg.ones(self.chart.n))

    def lift(self, f: GradedPolynomial) -> GradedPolynomial:
        """Pull a base function back to the cotangent chart."""
        if f.chart == self.chart:
            return f
        if f.chart != self.base:
            raise ValidationError("function is not on the base chart")
        return embed_poly(f, self.chart)

    def __eq__(self, other):
        return isinstance(other, CotangentChart) and self.chart == other.chart \
            and self.momenta == other.momenta

    def __hash__(self):
        return hash(self.chart)


@dataclass(eq=False)
class TangentChart:
    base: GradedChart
    chart: GradedChart
    velocities: dict  # base generator -> velocity name
    label: int


def cotangent_chart(M: GradedChart, momentum_names: Mapping[str, str] | None = None) -> CotangentChart:
    """Momenta get degree ``(1^n - g(x), 1)``; they follow the base generators."""
    m = _new_label(M.labels)
    labels = tuple(sorted(M.labels + (m,)))
    names = dict(momentum_names or {})
    gens = []
    for name, d in zip(M.names, M.degrees):
        deg = {l: a for l, a in zip(M.labels, d)}
        gens.append((name, tuple(deg.get(l, 0) for l in labels)))
    momenta = {}
    for name, d in zip(M.names, M.degrees):
        deg = {l: 1 - a for l, a in zip(M.labels, d)}
        deg[m] = 1
        pname = names.get(name, f"p_{name}")
        momenta[name] = pname
        gens.append((pname, tuple(deg[l] for l in labels)))
    return CotangentChart(M, GradedChart(gens, labels=labels, commutative=M.commutative), momenta, m)


def tangent_chart(M: GradedChart, velocity_names: Mapping[str, str] | None = None) -> TangentChart:
    """Velocities get degree ``(g(x), 1)`` in a new structure slot."""
    m = _new_label(M.labels)
    labels = tuple(sorted(M.labels + (m,)))
    names = dict(velocity_names or {})
    gens = []
    for name, d in zip(M.names, M.degrees):
        deg = dict(zip(M.labels, d))
        gens.append((name, tuple(deg.get(l, 0) for l in labels)))
    velocities = {}
    for name, d in zip(M.names, M.degrees):
        deg = dict(zip(M.labels, d))
        deg[m] = 1
        vname = names.get(name, f"{name}_d{m}")
        velocities[name] = vname
        gens.append((vname, tuple(deg[l] for l in labels)))
    return TangentChart(M, GradedChart(gens, labels=labels, commutative=M.commutative), velocities, m)


# -- bracket -----------------------------------------------------------------

def _check_on(T: CotangentChart, f: GradedPolynomial) -> GradedPolynomial:
    if f.chart != T.chart:
        if f.chart == T.base:
            return T.lift(f)
        raise ValidationError("function does not live on this cotangent chart")
    return f


def hamiltonian_field(H: GradedPolynomial, T: CotangentChart) -> GradedVectorField:
    """The derivation ``f -> {H, f}``."""
    H = _check_on(T, H)
    chart = T.chart
    eps = T.bracket_parity
    comps: dict = {}
    for par, Hp in H.parity_parts().items():
        sH = (par + eps) % 2
        for x, p in T.momenta.items():
            sx = (chart.parity(x) + eps) % 2
            sp = (chart.parity(p) + eps) % 2
            dpH = left_partial(Hp, p)
            if not dpH.is_zero():
                sign = -1 if (sH * sx + sx * sp) % 2 else 1
                comps[x] = comps.get(x, chart.zero()) + dpH * sign
            dxH = left_partial(Hp, x)
            if not dxH.is_zero():
                sign = 1 if (sH * sp) % 2 else -1
                comps[p] = comps.get(p, chart.zero()) + dxH * sign
    return GradedVectorField(chart, comps)


def canonical_poisson(F: GradedPolynomial, G: GradedPolynomial, T: CotangentChart) -> GradedPolynomial:
    G = _check_on(T, G)
    return apply_field(hamiltonian_field(F, T), G)


def iota(X: GradedVectorField, T: CotangentChart) -> GradedPolynomial:
    """Fibre-linear function ``sum +-f^j p_j`` attached to a base field."""
    if X.chart != T.base:
        raise ValidationError("vector field is not on the base chart of the cotangent chart")
    chart = T.chart
    eps = T.bracket_parity
    out = chart.zero()
    for x, k, v in X.terms():
        p = T.momenta[x]
        mono = embed_poly(GradedPolynomial(X.chart, {k: v}), chart)
        term = multiply(mono, chart.gen(p))
        # {m p, x} = (-1)^{s(F)s(x) + s(x)s(p) + p(m)p(p)} m
        pm = chart.key_parity(next(iter(mono.terms)))
        pp = chart.parity(p)
        sF = (pm + pp + eps) % 2
        sx = (chart.parity(x) + eps) % 2
        sp = (pp + eps) % 2
        sign = -1 if (sF * sx + sx * sp + pm * pp) % 2 else 1
        out = out + term * sign
    return out


def cotangent_lift(X: GradedVectorField, T: CotangentChart) -> GradedVectorField:
    return hamiltonian_field(iota(X, T), T)


def cotangent_euler(T: CotangentChart) -> GradedVectorField:
    """Euler field of the momentum structure, ``sum p_j d_{p_j}``."""
    chart = T.chart
    return GradedVectorField(chart, {p: chart.gen(p) for p in T.coordinates})


def phase_lift(X: GradedVectorField, T: CotangentChart) -> GradedVectorField:
    return cotangent_lift(X, T) + cotangent_euler(T)


def de_rham_field(T: TangentChart) -> GradedVectorField:
    chart = T.chart
    return GradedVectorField(chart, {x: chart.gen(v) for x, v in T.velocities.items()})


def tangent_lift(X: GradedVectorField, T: TangentChart) -> GradedVectorField:
    """Tangent lift: agrees with ``X`` on base generators and commutes with
    the de Rham field, i.e. ``lift(dx^a) = (-1)^{p(X)} d(f^a)``."""
    if X.chart != T.base:
        raise ValidationError("vector field is not on the base chart of the tangent chart")
    chart = T.chart
    d = de_rham_field(T)
    out = GradedVectorField(chart)
    for par, Xp in X.parity_parts().items():
        comps = {}
        for x in T.base.names:
            f = embed_poly(Xp[x], chart)
            if f.is_zero():
                continue
            comps[x] = f
            df = apply_field(d, f)
            if not df.is_zero():
                comps[T.velocities[x]] = -df if par else df
        out = out + GradedVectorField(chart, comps)
    return out


# -- Legendre ----------------------------------------------------------------

def dual_chart(T: CotangentChart, k: int) -> GradedChart:
    """Chart of the dual along structure ``k`` of the base.

    Fibre coordinates ``y`` (degree 1 at ``k``) are replaced, in place, by
    coordinates named after their momenta; the new chart uses the labels of
    the base with ``k`` swapped for the momentum label.
    """
    M = T.base
    if k not in M.labels:
        raise ValidationError(f"structure {k} not among the base labels {M.labels}")
    m = T.label
    labels = tuple(sorted([l for l in M.labels if l != k] + [m]))
    gens = []
    for name, d in zip(M.names, M.degrees):
        g = dict(zip(M.labels, d))
        if g[k] == 0:
            gens.append((name, tuple(0 if l == m else g[l] for l in labels)))
        else:
            gens.append((T.momenta[name], tuple(1 if l == m else 1 - g[l] for l in labels)))
    return GradedChart(gens, labels=labels, commutative=M.commutative)


def legendre_map(T: CotangentChart, k: int):
    """Legendre identification of ``T*M`` with ``T*(M dual along k)``.

    Returns ``(pullback, target)`` where ``pullback`` sends every generator
    of the target cotangent chart to a polynomial on ``T.chart``.  The fibre
    block ``(y, pi)`` goes to ``(pi, s*y)`` with ``s = {y, pi}`` (``s = -1``
    on commutative charts), which makes the map a symplectomorphism.
    """
    if k not in T.base.labels:
        raise ValidationError(f"structure {k} not among the base labels {T.base.labels}")
    M = T.base
    Mstar = dual_chart(T, k)
    slot = M.label_slot(k)
    mom_names = {}
    for name, d in zip(M.names, M.degrees):
        if d[slot] == 0:
            mom_names[name] = T.momenta[name]
        else:
            mom_names[T.momenta[name]] = name
    target = cotangent_chart(Mstar, mom_names)
    if target.chart.labels != T.chart.labels:
        raise ValidationError("dual cotangent chart has mismatched structure labels")
    src = T.chart
    pull = {}
    for name, d in zip(M.names, M.degrees):
        p = T.momenta[name]
        if d[slot] == 0:
            pull[name] = src.gen(name)
            pull[p] = src.gen(p)
        else:
            s = canonical_poisson(src.gen(name), src.gen(p), T)
            pull[p] = src.gen(p)
            pull[name] = multiply(s, src.gen(name))
    return pull, target


def is_symplectomorphism(sigma: Mapping[str, GradedPolynomial], source: CotangentChart,
                         target: CotangentChart) -> bool:
    """Check ``{sigma(u), sigma(v)} = sigma({u, v})`` on all generator pairs."""
    for name in target.chart.names:
        if name not in sigma:
            raise ValidationError(f"substitution has no image for {name!r}")
        if sigma[name].chart != source.chart:
            raise ValidationError(f"image of {name!r} is not on the source chart")
    tgt = target.chart
    for u in tgt.names:
        Xu = hamiltonian_field(tgt.gen(u), target)
        Xsu = hamiltonian_field(sigma[u], source)
        for v in tgt.names:
            lhs = apply_field(Xsu, sigma[v])
            rhs = substitute(Xu[v], sigma, source.chart)
            if lhs != rhs:
                return False
    return True


def invert_pullback(sigma: Mapping[str, GradedPolynomial], source: GradedChart,
                    target: GradedChart) -> dict:
    """Inverse of a pullback that maps generators to signed generators."""
    inv = {}
    for name, img in sigma.items():
        if len(img.terms) != 1:
            raise ValidationError("only signed-permutation pullbacks can be inverted here")
        (key, c), = img.terms.items()
        if sum(key) != 1 or abs(c) != 1:
            raise ValidationError("only signed-permutation pullbacks can be inverted here")
        src_name = source.names[key.index(1)]
        inv[src_name] = target.gen(name) * c
    return inv
