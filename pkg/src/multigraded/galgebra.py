"""Exact graded-commutative polynomial algebra over a chart of generators.

A monomial is stored as a tuple of exponents in the chart's declaration
order.  Every product is brought to that canonical order on insertion, so
each term has exactly one key and the Koszul signs are resolved once.
Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import degrees as dg
from .errors import ValidationError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: tuple[int, ...]


class GradedChart:
    """Ordered list of homogeneous generators; the local model of an n-graded
    manifold.

    ``labels`` names the n structures (default ``1..n``); degrees are tuples
    listed in the order of ``labels``.  A ``commutative`` chart treats every
    generator as even, which models an n-vector bundle chart rather than its
    graded counterpart.
    """

    def __init__(self, generators, labels=None, commutative=False):
        gens = []
        for g in generators:
            if isinstance(g, GeneratorSpec):
                gens.append(g)
            else:
                name, degree = g
                gens.append(GeneratorSpec(str(name), tuple(int(a) for a in degree)))
        if labels is None:
            n = len(gens[0].degree) if gens else 0
            labels = tuple(range(1, n + 1))
        self.labels = tuple(int(a) for a in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"repeated structure labels {self.labels}")
        self.n = len(self.labels)
        self.commutative = bool(commutative)
        seen = set()
        for g in gens:
            if not _IDENT.match(g.name):
                raise ValidationError(f"invalid generator name {g.name!r}")
            if g.name in seen:
                raise ValidationError(f"duplicate generator {g.name!r}")
            seen.add(g.name)
            if len(g.degree) != self.n:
                raise ValidationError(
                    f"generator {g.name!r} has degree {g.degree}, expected length {self.n}")
            if not dg.is_binary(g.degree):
                raise ValidationError(
                    f"generator {g.name!r}: degree {g.degree} exceeds 1^n")
        self.generators = tuple(gens)
        self.names = tuple(g.name for g in gens)
        self.degrees = tuple(g.degree for g in gens)
        self.index = {name: a for a, name in enumerate(self.names)}
        self.parities = tuple(self.parity_of(d) for d in self.degrees)
        self._odd = tuple(a for a, p in enumerate(self.parities) if p)
        self._key = (self.names, self.degrees, self.labels, self.commutative)
        self._mul_cache: dict = {}

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, GradedChart) and (self is other or self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        body = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        flag = ", commutative" if self.commutative else ""
        return f"GradedChart([{body}], labels={self.labels}{flag})"

    def __len__(self):
        return len(self.generators)

    # -- degrees ------------------------------------------------------------
    def parity_of(self, degree: Sequence[int]) -> int:
        return 0 if self.commutative else dg.parity(degree)

    def degree(self, name: str) -> tuple[int, ...]:
        return self.degrees[self._idx(name)]

    def parity(self, name: str) -> int:
        return self.parities[self._idx(name)]

    def _idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ValidationError(f"unknown generator {name!r}") from None

    def label_slot(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"structure {label} not in labels {self.labels}") from None

    def key_degree(self, key) -> tuple[int, ...]:
        deg = [0] * self.n
        for a, e in enumerate(key):
            if e:
                for s, v in enumerate(self.degrees[a]):
                    deg[s] += e * v
        return tuple(deg)

    def key_parity(self, key) -> int:
        if self.commutative:
            return 0
        return sum(key[a] for a in self._odd) % 2

    # -- constructors -------------------------------------------------------
    def gen(self, name: str) -> "GradedPolynomial":
        a = self._idx(name)
        key = tuple(1 if b == a else 0 for b in range(len(self.names)))
        return GradedPolynomial(self, {key: Fraction(1)})

    def gens(self) -> list["GradedPolynomial"]:
        return [self.gen(name) for name in self.names]

    def const(self, c) -> "GradedPolynomial":
        c = Fraction(c)
        if c == 0:
            return GradedPolynomial(self, {})
        return GradedPolynomial(self, {self.unit_key: c})

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    @property
    def unit_key(self):
        return (0,) * len(self.names)

    def subchart(self, names: Iterable[str]) -> "GradedChart":
        keep = set(names)
        return GradedChart([g for g in self.generators if g.name in keep],
                           labels=self.labels, commutative=self.commutative)

    def parse(self, text: str) -> "GradedPolynomial":
        return parse_polynomial(text, self)

    # -- monomial kernel ----------------------------------------------------
    def mul_keys(self, a, b):
        """Canonical product of two monomials: ``(sign, key)`` or ``None``
        when an odd generator would be squared."""
        ck = (a, b)
        hit = self._mul_cache.get(ck)
        if hit is not None or ck in self._mul_cache:
            return hit
        swaps = 0
        for j in self._odd:
            if b[j]:
                if a[j]:
                    self._mul_cache[ck] = None
                    return None
                for i in self._odd:
                    if i > j and a[i]:
                        swaps += 1
        out = (-1 if swaps % 2 else 1, tuple(x + y for x, y in zip(a, b)))
        if len(self._mul_cache) < 500_000:
            self._mul_cache[ck] = out
        return out


class Inhomogeneous:
    """Marker returned by :func:`multidegree_of` when no single degree exists.

    ``zero`` is set for the zero polynomial, which carries no degree at all.
    """

    def __init__(self, zero: bool):
        self.zero = zero

    def __repr__(self):
        return "Inhomogeneous(zero)" if self.zero else "Inhomogeneous()"

    def __eq__(self, other):
        return isinstance(other, Inhomogeneous) and other.zero == self.zero

    def __hash__(self):
        return hash(("inhomogeneous", self.zero))


INHOMOGENEOUS = Inhomogeneous(False)
ZERO = Inhomogeneous(True)


class GradedPolynomial:
    """Finite exact-rational combination of canonical monomials."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: GradedChart, terms: Mapping | None = None):
        self.chart = chart
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def _raw(cls, chart, terms):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        return obj

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "GradedPolynomial":
        if isinstance(other, GradedPolynomial):
            if other.chart is not self.chart and other.chart != self.chart:
                raise ValidationError("polynomials live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GradedPolynomial._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial._raw(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.chart.zero()
            return GradedPolynomial._raw(self.chart, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValidationError("only non-negative integer powers are supported")
        out = self.chart.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GradedPolynomial({render(self)!r})"

    def __str__(self):
        return render(self)

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def parity_parts(self) -> dict[int, "GradedPolynomial"]:
        parts: dict[int, dict] = {}
        for k, v in self.terms.items():
            parts.setdefault(self.chart.key_parity(k), {})[k] = v
        return {p: GradedPolynomial._raw(self.chart, t) for p, t in parts.items()}

    def parity(self) -> int:
        """Parity of a parity-homogeneous polynomial (0 for zero)."""
        ps = {self.chart.key_parity(k) for k in self.terms}
        if len(ps) > 1:
            raise ValidationError(f"polynomial {render(self)} has mixed parity")
        return ps.pop() if ps else 0

    def degree_parts(self) -> dict[tuple[int, ...], "GradedPolynomial"]:
        parts: dict = {}
        for k, v in self.terms.items():
            parts.setdefault(self.chart.key_degree(k), {})[k] = v
        return {d: GradedPolynomial._raw(self.chart, t) for d, t in parts.items()}

    def generators_used(self) -> set[str]:
        used = set()
        for k in self.terms:
            for a, e in enumerate(k):
                if e:
                    used.add(self.chart.names[a])
        return used

    def coefficient(self, key) -> Fraction:
        return self.terms.get(tuple(key), Fraction(0))


def _check_same_chart(f: GradedPolynomial, g: GradedPolynomial) -> None:
    if f.chart is not g.chart and f.chart != g.chart:
        raise ValidationError("polynomials live on different charts")


def normalize_monomial(chart: GradedChart, factors: Sequence[str], coefficient=1) -> GradedPolynomial:
    """Bring an arbitrary ordered product of generators to canonical form."""
    coeff = Fraction(coefficient)
    key = chart.unit_key
    for name in factors:
        a = chart._idx(name)
        unit = tuple(1 if b == a else 0 for b in range(len(chart)))
        res = chart.mul_keys(key, unit)
        if res is None:
            return chart.zero()
        sign, key = res
        coeff *= sign
    return GradedPolynomial(chart, {key: coeff})


def multiply(f: GradedPolynomial, g: GradedPolynomial) -> GradedPolynomial:
    _check_same_chart(f, g)
    chart = f.chart
    out: dict = {}
    mul = chart.mul_keys
    for ka, va in f.terms.items():
        for kb, vb in g.terms.items():
            res = mul(ka, kb)
            if res is None:
                continue
            sign, k = res
            v = out.get(k, 0) + (va * vb if sign > 0 else -va * vb)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return GradedPolynomial._raw(chart, out)


def left_partial(f: GradedPolynomial, x: str) -> GradedPolynomial:
    """Left derivative: the generator is moved to the front before removal."""
    chart = f.chart
    a = chart._idx(x)
    out: dict = {}
    odd = chart.parities[a] == 1
    for k, v in f.terms.items():
        e = k[a]
        if not e:
            continue
        if odd:
            sign = sum(k[b] for b in chart._odd if b < a) % 2
            coeff = -v if sign else v
        else:
            coeff = v * e
        nk = k[:a] + (e - 1,) + k[a + 1:]
        out[nk] = out.get(nk, 0) + coeff
    return GradedPolynomial(chart, out)


def multidegree_of(f: GradedPolynomial):
    """Common degree of all terms, or an :class:`Inhomogeneous` marker."""
    if f.is_zero():
        return ZERO
    degs = {f.chart.key_degree(k) for k in f.terms}
    if len(degs) == 1:
        return degs.pop()
    return INHOMOGENEOUS


def substitute(f: GradedPolynomial, images: Mapping[str, GradedPolynomial],
               target: GradedChart | None = None) -> GradedPolynomial:
    """Algebra homomorphism sending each generator of ``f.chart`` to its image."""
    src = f.chart
    if target is None:
        if not images:
            raise ValidationError("substitution needs a target chart")
        target = next(iter(images.values())).chart
    imgs = []
    for name in src.names:
        if name not in images:
            raise ValidationError(f"substitution has no image for {name!r}")
        img = images[name]
        if not isinstance(img, GradedPolynomial):
            raise ValidationError(f"image of {name!r} is not a polynomial")
        if img.chart != target:
            raise ValidationError(f"image of {name!r} lives on another chart")
        if not img.is_zero() and not target.commutative and not src.commutative:
            p = img.parity_parts()
            if set(p) != {src.parities[src.index[name]]}:
                raise ValidationError(
                    f"parity mismatch: {name!r} is {'odd' if src.parity(name) else 'even'}"
                    f" but its image {render(img)} is not")
        imgs.append(img)
    powers: dict = {}
    out = target.zero()
    for k, v in f.terms.items():
        term = target.const(v)
        for a, e in enumerate(k):
            if e:
                pw = powers.get((a, e))
                if pw is None:
                    pw = imgs[a] ** e
                    powers[(a, e)] = pw
                term = multiply(term, pw)
                if term.is_zero():
                    break
        out = out + term
    return out


def monomial(chart: GradedChart, **exponents) -> GradedPolynomial:
    key = [0] * len(chart)
    for name, e in exponents.items():
        key[chart._idx(name)] = e
    return GradedPolynomial(chart, {tuple(key): 1})


# -- rendering -------------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_monomial(chart: GradedChart, key) -> str:
    parts = []
    for a, e in enumerate(key):
        if e == 1:
            parts.append(chart.names[a])
        elif e > 1:
            parts.append(f"{chart.names[a]}^{e}")
    return "*".join(parts)


def sorted_terms(f: GradedPolynomial):
    """Terms in the deterministic output order (descending exponent tuples)."""
    return sorted(f.terms.items(), key=lambda kv: kv[0], reverse=True)


def render(f: GradedPolynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    for k, v in sorted_terms(f):
        mono = render_monomial(f.chart, k)
        mag = abs(v)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        if not out:
            out.append(body if v > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if v > 0 else f"- {body}")
    return " ".join(out)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*^/()":
                err = ValidationError(f"unexpected character {m.group(3)!r} at column {m.start(3) + 1}")
                err.column = m.start(3) + 1
                raise err
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, chart):
        self.toks = _tokenize(text)
        self.pos = 0
        self.chart = chart

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        err = ValidationError(f"{msg} at column {tok[2] + 1}")
        err.column = tok[2] + 1
        raise err

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            out = out * self.unary()
        return out

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        tok = self.peek()
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            e = self.take()
            if e[0] != "num":
                self.fail("expected integer exponent", e)
            if tok[0] == "id" and self.chart.parity(tok[1]) == 1:
                self.fail(f"power of odd generator {tok[1]!r}", tok)
            if tok[0] == "num":
                self.fail("power of a literal", tok)
            if tok[0] == "op" and base.parity_parts().keys() - {0}:
                self.fail("power of an odd expression", tok)
            return base ** int(e[1])
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            value = Fraction(int(tok[1]))
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take()
                if den[0] != "num" or int(den[1]) == 0:
                    self.fail("expected nonzero integer denominator", den)
                value /= int(den[1])
            return self.chart.const(value)
        if tok[0] == "id":
            if tok[1] not in self.chart.index:
                self.fail(f"undeclared generator {tok[1]!r}", tok)
            return self.chart.gen(tok[1])
        if tok[:2] == ("op", "("):
            out = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return out
        self.fail(f"unexpected {tok[1]!r}" if tok[0] != "end" else "unexpected end of input", tok)


def parse_polynomial(text: str, chart: GradedChart) -> GradedPolynomial:
    """Parse the expression grammar: rational literals, generator names,
    ``*``, ``+``, ``-``, ``^`` (even bases only) and parentheses."""
    return _Parser(str(text), chart).parse()
