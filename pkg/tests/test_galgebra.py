import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from multigraded.errors import ValidationError
from multigraded.galgebra import (INHOMOGENEOUS, ZERO, GradedChart, GradedPolynomial,
                                  left_partial, monomial, multidegree_of, multiply,
                                  normalize_monomial, parse_polynomial, render, substitute)
from multigraded.gvector import apply_field, euler_fields

from helpers import from_sympy, oracle_multiply, random_poly, to_sympy

# x even of degree (0,0), xi (1,0) odd, eta (0,1) odd, psi (1,1) even
CH = GradedChart([("x", (0, 0)), ("xi", (1, 0)), ("eta", (0, 1)), ("psi", (1, 1))])


def P(s):
    return CH.parse(s)


def test_chart_validation():
    with pytest.raises(ValidationError, match="exceeds"):
        GradedChart([("x", (2, 0))])
    with pytest.raises(ValidationError, match="duplicate"):
        GradedChart([("x", (0,)), ("x", (1,))])
    with pytest.raises(ValidationError):
        GradedChart([("1x", (0,))])
    with pytest.raises(ValidationError):
        GradedChart([("x", (0,)), ("y", (0, 1))])


def test_normalize_monomial_examples():
    assert normalize_monomial(CH, ["eta", "xi"]) == -P("xi*eta")
    assert normalize_monomial(CH, ["xi", "xi"]).is_zero()
    assert normalize_monomial(CH, ["x", "xi", "x"]) == P("x^2*xi")
    with pytest.raises(ValidationError):
        normalize_monomial(CH, ["nope"])


def test_multiply_examples():
    assert multiply(P("x + xi*eta"), P("x")) == P("x^2 + x*xi*eta")
    assert multiply(P("xi"), P("eta")) == -multiply(P("eta"), P("xi"))
    f, g = P("xi"), P("eta")
    assert multidegree_of(multiply(f, g)) == (1, 1)


def test_chart_mismatch():
    other = GradedChart([("x", (0, 0))])
    with pytest.raises(ValidationError):
        multiply(P("x"), other.gen("x"))


def test_left_partial_examples():
    assert left_partial(P("xi*eta"), "xi") == P("eta")
    assert left_partial(P("xi*eta"), "eta") == -P("xi")
    assert left_partial(P("x^2*xi"), "x") == P("2*x*xi")
    with pytest.raises(ValidationError):
        left_partial(P("x"), "q")


def test_multidegree_examples():
    assert multidegree_of(P("x*xi*eta")) == (1, 1)
    assert multidegree_of(P("x + xi")) is INHOMOGENEOUS
    assert multidegree_of(CH.const(1)) == (0, 0)
    assert multidegree_of(CH.zero()) is ZERO


def test_substitute_examples():
    f = P("xi*eta")
    ident = {n: CH.gen(n) for n in CH.names}
    assert substitute(f, ident) == f
    # xi -> xi + x*eta would break the degree but not parity; the odd square kills the extra term
    m = dict(ident, xi=P("xi + x*eta"))
    assert substitute(f, m) == f
    swap = dict(ident, xi=P("eta"), eta=P("xi"))
    assert substitute(f, swap) == -f
    with pytest.raises(ValidationError, match="parity"):
        substitute(f, dict(ident, xi=P("x")))
    with pytest.raises(ValidationError, match="no image"):
        substitute(f, {"xi": P("xi")}, CH)


def test_parser_rejects_bad_input():
    for bad in ["xi^2", "2^3", "(xi+eta)^2", "x +", "x $ y", "q", "1/0", ""]:
        with pytest.raises(ValidationError):
            P(bad)
    assert P("xi*xi").is_zero()
    assert P("(x+psi)^2") == P("x^2 + 2*x*psi + psi^2")
    assert P("-3/4*x") == CH.const(Fraction(-3, 4)) * P("x")


def test_parser_error_column():
    with pytest.raises(ValidationError) as exc:
        P("x + xi^2")
    assert exc.value.column == 5


# -- property tests ----------------------------------------------------------

def _poly_strategy(chart, max_terms=4):
    key = st.tuples(*[st.integers(0, 1) if chart.parities[a] else st.integers(0, 2)
                      for a in range(len(chart))])
    return st.dictionaries(key, st.fractions(min_value=-3, max_value=3, max_denominator=3),
                           max_size=max_terms).map(lambda t: GradedPolynomial(chart, t))


polys = _poly_strategy(CH)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert multiply(multiply(f, g), h) == multiply(f, multiply(g, h))
    assert multiply(f, g + h) == multiply(f, g) + multiply(f, h)
    assert multiply(f + g, h) == multiply(f, h) + multiply(g, h)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_product_matches_word_oracle(f, g):
    assert multiply(f, g) == oracle_multiply(f, g)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_graded_commutativity(f, g):
    for pf, fp in f.parity_parts().items():
        for pg, gp in g.parity_parts().items():
            sign = -1 if pf * pg else 1
            assert multiply(fp, gp) == multiply(gp, fp) * sign


@settings(max_examples=60, deadline=None)
@given(polys, st.sampled_from(CH.names), st.sampled_from(CH.names))
def test_partials_graded_commute(f, x, y):
    sign = -1 if CH.parity(x) and CH.parity(y) else 1
    assert left_partial(left_partial(f, y), x) == left_partial(left_partial(f, x), y) * sign


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.sampled_from(CH.names))
def test_partial_is_left_derivation(f, g, x):
    for pf, fp in f.parity_parts().items():
        sign = -1 if pf and CH.parity(x) else 1
        lhs = left_partial(multiply(fp, g), x)
        rhs = multiply(left_partial(fp, x), g) + multiply(fp, left_partial(g, x)) * sign
        assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(polys)
def test_euler_eigenvalue_law(f):
    deltas = euler_fields(CH)
    for d, part in f.degree_parts().items():
        for k, D in enumerate(deltas):
            assert apply_field(D, part) == part * d[k]


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_substitute_is_homomorphism(f, g):
    images = {"x": P("x + 1"), "xi": P("xi + x*xi"), "eta": P("2*eta"), "psi": P("psi + xi*eta")}
    assert substitute(multiply(f, g), images) == multiply(substitute(f, images),
                                                        substitute(g, images))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_render_parse_round_trip(f):
    assert parse_polynomial(render(f), CH) == f


def test_commutative_product_matches_sympy():
    chart = GradedChart([("a", ()), ("b", ()), ("c", ())])
    syms = {n: sp.Symbol(n) for n in chart.names}
    rng = random.Random(5)
    for _ in range(30):
        f, g = random_poly(chart, rng, 4, 3), random_poly(chart, rng, 4, 3)
        assert multiply(f, g) == from_sympy(to_sympy(f, syms) * to_sympy(g, syms), chart)


def test_monomial_helper():
    assert monomial(CH, x=2, xi=1) == P("x^2*xi")
