"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import sympy as sp

from multigraded import degrees as dg
from multigraded.galgebra import GradedChart, GradedPolynomial, multiply, substitute
from multigraded.gvector import euler_field, relates_fields
from multigraded.lifts import (cotangent_euler, dual_chart, is_symplectomorphism, legendre_map,
                               phase_lift)


# -- random objects ----------------------------------------------------------

def random_chart(rng: random.Random, n: int, k: int, prefix="x") -> GradedChart:
    gens = [(f"{prefix}{a + 1}", tuple(rng.randint(0, 1) for _ in range(n))) for a in range(k)]
    return GradedChart(gens)


def random_poly(chart: GradedChart, rng: random.Random, terms=3, max_exp=2,
                coeffs=(-3, 3)) -> GradedPolynomial:
    out = {}
    for _ in range(terms):
        key = tuple(rng.randint(0, 1 if chart.parities[a] else max_exp)
                    for a in range(len(chart)))
        out[key] = out.get(key, 0) + Fraction(rng.randint(*coeffs))
    return GradedPolynomial(chart, out)


def random_homogeneous(chart: GradedChart, rng: random.Random, terms=4, max_exp=2):
    """Nonzero polynomial of a single multi-degree."""
    while True:
        p = random_poly(chart, rng, terms, max_exp)
        parts = p.degree_parts()
        if parts:
            return parts[rng.choice(sorted(parts))]


# -- super-commutative product oracle ----------------------------------------

def word_product(chart: GradedChart, words):
    """Multiply monomials given as lists of generator names by concatenation
    followed by a bubble sort that counts odd transpositions."""
    seq = [n for w in words for n in w]
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            a, b = seq[j], seq[j + 1]
            if chart.index[a] > chart.index[b]:
                if chart.parity(a) and chart.parity(b):
                    sign = -sign
                seq[j], seq[j + 1] = b, a
    for a, b in zip(seq, seq[1:]):
        if a == b and chart.parity(a):
            return 0, None
    key = [0] * len(chart)
    for n in seq:
        key[chart.index[n]] += 1
    return sign, tuple(key)


def key_word(chart: GradedChart, key):
    return [n for n, e in zip(chart.names, key) for _ in range(e)]


def oracle_multiply(f: GradedPolynomial, g: GradedPolynomial) -> GradedPolynomial:
    chart = f.chart
    out = {}
    for ka, va in f.terms.items():
        for kb, vb in g.terms.items():
            sign, key = word_product(chart, [key_word(chart, ka), key_word(chart, kb)])
            if key is None:
                continue
            out[key] = out.get(key, 0) + sign * va * vb
    return GradedPolynomial(chart, out)


# -- sympy bridges -----------------------------------------------------------

def to_sympy(f: GradedPolynomial, symbols: dict):
    """Only for charts where every generator is even."""
    expr = sp.Integer(0)
    for k, v in f.terms.items():
        term = sp.Rational(v.numerator, v.denominator)
        for n, e in zip(f.chart.names, k):
            if e:
                term *= symbols[n] ** e
        expr += term
    return sp.expand(expr)


def from_sympy(expr, chart: GradedChart) -> GradedPolynomial:
    expr = sp.expand(expr)
    if expr == 0:
        return chart.zero()
    syms = [sp.Symbol(n) for n in chart.names]
    poly = sp.Poly(expr, *syms)
    out = {}
    for mon, c in poly.terms():
        out[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return GradedPolynomial(chart, out)


def sympy_lie_bracket(X, Y, xs):
    """Components of [X, Y] for vector fields on R^m given as lists."""
    return [sp.expand(sum(X[j] * sp.diff(Y[i], xs[j]) - Y[j] * sp.diff(X[i], xs[j])
                          for j in range(len(xs)))) for i in range(len(xs))]


def random_sympy_poly(rng, xs, max_deg=2, terms=3):
    expr = sp.Integer(0)
    for _ in range(terms):
        mon = sp.Integer(rng.randint(-3, 3))
        for x in xs:
            mon *= x ** rng.randint(0, max_deg)
        expr += mon
    return sp.expand(expr)


# -- algebroid axioms oracle ---------------------------------------------------

def algebroid_axioms_hold(base_names, rank, rho, C) -> bool:
    """Brute-force anchor compatibility and Jacobiator on basis sections.

    ``rho[r][a]`` and ``C[u][r][s]`` are sympy expressions in ``base_names``.
    Bracket convention ``[e_r, e_s] = C^u_rs e_u``, anchor a Lie morphism.
    """
    xs = [sp.Symbol(n) for n in base_names]

    def anchor_apply(r, f):
        return sum(rho[r][a] * sp.diff(f, xs[a]) for a in range(len(xs)))

    for r in range(rank):
        for s in range(rank):
            for a in range(len(xs)):
                lhs = anchor_apply(r, rho[s][a]) - anchor_apply(s, rho[r][a])
                rhs = sum(C[u][r][s] * rho[u][a] for u in range(rank))
                if sp.expand(lhs - rhs) != 0:
                    return False
    for r, s, t in product(range(rank), repeat=3):
        for v in range(rank):
            J = 0
            for (a, b, c) in ((r, s, t), (s, t, r), (t, r, s)):
                J += sum(C[u][a][b] * C[v][u][c] for u in range(rank))
                J -= anchor_apply(c, C[v][a][b])
            if sp.expand(J) != 0:
                return False
    return True


def bivector_is_poisson(names, Lam) -> bool:
    """``Lam[(a, b)]`` sympy expressions (a < b); Jacobi of the bracket on
    coordinate functions."""
    xs = [sp.Symbol(n) for n in names]
    m = len(xs)
    P = [[sp.Integer(0)] * m for _ in range(m)]
    for (a, b), v in Lam.items():
        P[a][b] = sp.sympify(v)
        P[b][a] = -sp.sympify(v)

    def br(f, g):
        return sum(P[a][b] * sp.diff(f, xs[a]) * sp.diff(g, xs[b])
                   for a in range(m) for b in range(m))

    for i, j, k in product(range(m), repeat=3):
        J = br(xs[i], br(xs[j], xs[k])) + br(xs[j], br(xs[k], xs[i])) + br(xs[k], br(xs[i], xs[j]))
        if sp.expand(J) != 0:
            return False
    return True


# -- Dorfman oracle ----------------------------------------------------------

def dorfman(X, al, Y, be, xs):
    """``[X + al, Y + be] = [X, Y] + L_X be - i_Y d al`` on R^m (sympy lists)."""
    m = len(xs)
    XY = sympy_lie_bracket(X, Y, xs)
    LXb = [sum(X[j] * sp.diff(be[i], xs[j]) + be[j] * sp.diff(X[j], xs[i]) for j in range(m))
           for i in range(m)]
    iYda = [sum(Y[j] * (sp.diff(al[i], xs[j]) - sp.diff(al[j], xs[i])) for j in range(m))
            for i in range(m)]
    return XY, [sp.expand(LXb[i] - iYda[i]) for i in range(m)]


# -- transitions -------------------------------------------------------------

def random_base_poly(chart, rng):
    base = [n for n, d in zip(chart.names, chart.degrees) if not any(d)]
    p = chart.const(rng.randint(-2, 2))
    for b in base:
        if rng.random() < 0.5:
            p = p + chart.gen(b) * rng.randint(-2, 2)
    return p


def random_transition(chart, rng, cubic=True):
    """Unitriangular-by-degree transition with quadratic (and cubic) coupling."""
    from multigraded.nvb import TransitionMap
    by_deg = {}
    for n, d in zip(chart.names, chart.degrees):
        by_deg.setdefault(d, []).append(n)
    imgs = {}
    for name, d in zip(chart.names, chart.degrees):
        if not any(d):
            imgs[name] = chart.gen(name)
            continue
        same = by_deg[d]
        img = chart.gen(name) * rng.choice([1, -1, 2, Fraction(1, 2)])
        for m in same[:same.index(name)]:
            img = img + multiply(random_base_poly(chart, rng), chart.gen(m))
        for j in dg.cube(chart.n)[1:]:
            if not dg.leq(j, d) or j == d:
                continue
            k = dg.sub(d, j)
            if dg.order_key(j) >= dg.order_key(k):
                continue
            for a in by_deg.get(j, []):
                for b in by_deg.get(k, []):
                    if rng.random() < 0.6:
                        img = img + multiply(multiply(random_base_poly(chart, rng),
                                                      chart.gen(a)), chart.gen(b))
        if cubic and sum(d) == 3:
            units = [dg.delta(chart.n, s + 1) for s in range(chart.n) if d[s]]
            if all(u in by_deg for u in units):
                term = random_base_poly(chart, rng)
                for u in units:
                    term = multiply(term, chart.gen(rng.choice(by_deg[u])))
                img = img + term
        imgs[name] = img
    return TransitionMap(chart, chart, imgs)


# -- Poisson axioms ----------------------------------------------------------

def poisson_axiom_failures(a, b, c, T):
    """Graded anticommutativity, Leibniz and Jacobi for homogeneous a, b, c
    with ``|.|`` the total degree and ``|i| = N`` (number of structures)."""
    from multigraded.lifts import canonical_poisson as br
    N = T.chart.n
    from multigraded.galgebra import multidegree_of
    A, B = dg.total(multidegree_of(a)), dg.total(multidegree_of(b))
    if T.chart.commutative:
        A = B = N = 0
    sa, sb = (A + N) % 2, (B + N) % 2
    out = []
    if br(a, b, T) != br(b, a, T) * (-1 if (sa * sb) % 2 == 0 else 1):
        out.append("anticommutativity")
    lhs = br(a, multiply(b, c), T)
    rhs = multiply(br(a, b, T), c) + multiply(b, br(a, c, T)) * (-1 if (sa * B) % 2 else 1)
    if lhs != rhs:
        out.append("leibniz")
    lhs = br(br(a, b, T), c, T)
    rhs = br(a, br(b, c, T), T) - br(b, br(a, c, T), T) * (-1 if (sa * sb) % 2 else 1)
    if lhs != rhs:
        out.append("jacobi")
    return out


# -- random algebroids ---------------------------------------------------------

def _lie_matrices():
    """Bases of matrix Lie algebras acting linearly on R^1 and R^2."""
    M = sp.Matrix
    E11, E12, E21, E22 = (M([[1, 0], [0, 0]]), M([[0, 1], [0, 0]]),
                          M([[0, 0], [1, 0]]), M([[0, 0], [0, 1]]))
    h = E11 - E22
    return [
        (1, [M([[1]])]),
        (2, [h, E12, E21]),          # sl2
        (2, [h, E12]),               # Borel
        (2, [E11, E12]),
        (2, [E11 + E22, E12 - E21]),  # abelian
        (2, [E11, E22]),
        (2, [E11 + E22, h, E12]),
    ]


def _structure_from_matrices(mats):
    """``[A_r, A_s] = sum_u C^u_rs A_u`` solved exactly."""
    rank = len(mats)
    basis = sp.Matrix.hstack(*[A.reshape(A.rows * A.cols, 1) for A in mats])
    C = [[[sp.Integer(0)] * rank for _ in range(rank)] for _ in range(rank)]
    for r in range(rank):
        for s in range(rank):
            B = (mats[r] * mats[s] - mats[s] * mats[r]).reshape(basis.rows, 1)
            sol, params = basis.gauss_jordan_solve(B)
            assert not params.free_symbols
            for u in range(rank):
                C[u][r][s] = sol[u]
    return C


def random_valid_algebroid(rng: random.Random):
    """``(names, rank, rho[r][a], C[u][r][s])`` with sympy entries; always a
    Lie algebroid.  Coefficients have degree at most one."""
    fam = rng.choice(["lie", "action", "rank1", "tangent", "bundle"])
    Z = sp.Integer(0)
    if fam == "lie":
        algs = [
            {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}},      # so3
            {(0, 1): {2: 1}},                                      # heisenberg
            {(0, 1): {1: 1}},                                      # r2
            {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},      # sl2
            {},
        ]
        br = rng.choice(algs)
        used = [i for k, v in br.items() for i in (*k, *v)]
        rank = max(used + [1]) + 1
        m = rng.randint(0, 2)
        names = [f"x{a + 1}" for a in range(m)]
        lam = [sp.Integer(rng.choice([1, 2, -1, 3])) for _ in range(rank)]
        C = [[[Z] * rank for _ in range(rank)] for _ in range(rank)]
        for (r, s), comps in br.items():
            for u, v in comps.items():
                c = sp.Integer(v) * lam[r] * lam[s] / lam[u]
                C[u][r][s] += c
                C[u][s][r] -= c
        rho = [[Z] * m for _ in range(rank)]
        return names, rank, rho, C
    if fam == "action":
        m, mats = rng.choice(_lie_matrices())
        mats = [A * rng.choice([1, 2, -1]) for A in mats]
        names = [f"x{a + 1}" for a in range(m)]
        xs = sp.Matrix([sp.Symbol(n) for n in names])
        rank = len(mats)
        rho = [list(-(A * xs)) for A in mats]
        return names, rank, rho, _structure_from_matrices(mats)
    if fam == "rank1":
        m = rng.randint(0, 2)
        names = [f"x{a + 1}" for a in range(m)]
        xs = [sp.Symbol(n) for n in names]
        rho = [[sp.Integer(rng.randint(-2, 2)) + sum(rng.randint(-1, 1) * x for x in xs)
                for _ in range(m)]]
        return names, 1, rho, [[[Z]]]
    if fam == "tangent":
        m = rng.randint(1, 2)
        names = [f"x{a + 1}" for a in range(m)]
        rho = [[sp.Integer(1 if a == r else 0) for a in range(m)] for r in range(m)]
        return names, m, rho, [[[Z] * m for _ in range(m)] for _ in range(m)]
    # bundle of Lie algebras with x-dependent constants and zero anchor
    m = rng.randint(1, 2)
    names = [f"x{a + 1}" for a in range(m)]
    xs = [sp.Symbol(n) for n in names]
    f = sp.Integer(rng.randint(-2, 2)) + sum(rng.randint(-2, 2) * x for x in xs)
    rank = rng.choice([2, 3])
    C = [[[Z] * rank for _ in range(rank)] for _ in range(rank)]
    tgt = 1 if rank == 2 else 2
    C[tgt][0][1], C[tgt][1][0] = f, -f
    return names, rank, [[Z] * m for _ in range(rank)], C


def perturb_algebroid(rng: random.Random, names, rank, rho, C):
    """Add a random degree-<=1 term to one anchor or structure coefficient."""
    xs = [sp.Symbol(n) for n in names]
    rho = [list(row) for row in rho]
    C = [[list(row) for row in M] for M in C]
    term = sp.Integer(rng.choice([-1, 1, 2])) * (rng.choice(xs) if xs and rng.random() < 0.5 else 1)
    if xs and (rank < 2 or rng.random() < 0.4):
        rho[rng.randrange(rank)][rng.randrange(len(xs))] += term
    elif rank >= 2:
        r, s = rng.sample(range(rank), 2)
        u = rng.randrange(rank)
        C[u][r][s] += term
        C[u][s][r] -= term
    return names, rank, rho, C


def algebroid_data_from(names, rank, rho, C):
    from multigraded.higher import AlgebroidData
    base = GradedChart([(n, ()) for n in names])

    def conv(e):
        e = sp.expand(e)
        if not names:
            return base.const(Fraction(int(sp.Rational(e).p), int(sp.Rational(e).q)))
        return from_sympy(e, base)

    anchor = {(r, names[a]): conv(rho[r][a]) for r in range(rank) for a in range(len(names))
              if sp.expand(rho[r][a]) != 0}
    struct = {(u, r, s): conv(C[u][r][s]) for u in range(rank) for r in range(rank)
              for s in range(rank) if sp.expand(C[u][r][s]) != 0}
    return AlgebroidData(base, rank, anchor, struct)


# -- Legendre ------------------------------------------------------------------

def legendre_checks(T, k):
    """Symplectomorphism, Euler pairs and double application."""
    pull, target = legendre_map(T, k)
    ok = is_symplectomorphism(pull, T, target)
    Mk = dual_chart(T, k)
    pairs = [(phase_lift(euler_field(T.base, k), T), cotangent_euler(target)),
             (cotangent_euler(T), phase_lift(euler_field(Mk, T.label), target))]
    for l in T.chart.labels:
        pairs.append((euler_field(T.chart, l), euler_field(target.chart, l)))
    ok = ok and all(relates_fields(pull, A, B) for A, B in pairs)
    pull2, back = legendre_map(target, T.label)
    ok = ok and back.chart.names == T.chart.names and back.chart.degrees == T.chart.degrees
    slot = T.base.label_slot(k)
    fibre = {x for x, d in zip(T.base.names, T.base.degrees) if d[slot]}
    fibre |= {T.momenta[x] for x in fibre}
    for u in T.chart.names:
        twice = substitute(pull2[u], pull, T.chart)
        ok = ok and twice == T.chart.gen(u) * (-1 if u in fibre else 1)
    return ok
