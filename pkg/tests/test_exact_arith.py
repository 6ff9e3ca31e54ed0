import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from rigidity.exact_arith import (
    EPS,
    INFEASIBLE,
    ONE,
    OPTIMAL,
    UNBOUNDED,
    ZERO,
    ZETA,
    Cyclotomic,
    LinearProgram,
    determinant,
    hermite_normal_form,
    inverse,
    kernel,
    lp_minimize,
    parse,
    rank,
    render,
    smith_normal_form,
    solve,
    unimodular_completion,
)
from rigidity.exact_arith.cyclotomic import DEGREE, ORDER, _cyclotomic_polynomial

X = sympy.Symbol("x")
PHI21 = sympy.Poly(sympy.cyclotomic_poly(ORDER, X), X)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)
elements = st.lists(small_q, min_size=DEGREE, max_size=DEGREE).map(Cyclotomic)


def to_sympy(a: Cyclotomic) -> sympy.Poly:
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * X**i
                          for i, c in enumerate(a.coeffs)), X, domain="QQ")


# --- cyclotomic field ---------------------------------------------------------

def test_phi21_matches_sympy():
    assert _cyclotomic_polynomial(ORDER) == [int(c) for c in reversed(PHI21.all_coeffs())]
    assert PHI21.degree() == DEGREE


def test_root_orders():
    assert Cyclotomic.root(1) ** ORDER == ONE
    assert all(Cyclotomic.root(1) ** k != ONE for k in range(1, ORDER))
    assert ZETA ** 7 == ONE and EPS ** 3 == ONE
    assert ONE + EPS + EPS ** 2 == ZERO
    assert sum((ZETA ** k for k in range(7)), ZERO) == ZERO


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_product_matches_sympy_reduction(a, b):
    expected = (to_sympy(a) * to_sympy(b)).rem(PHI21)
    assert to_sympy(a * b) == expected


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@settings(max_examples=40, deadline=None)
@given(elements)
def test_render_parse_round_trip(a):
    assert parse(render(a)) == a


@settings(max_examples=40, deadline=None)
@given(elements, elements, st.integers(1, 20).filter(lambda k: k % 3 and k % 7))
def test_galois_is_a_ring_map(a, b, k):
    assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert (a + b).galois(k) == a.galois(k) + b.galois(k)


def test_conjugate_is_complex_conjugation():
    import cmath
    u = cmath.exp(2j * cmath.pi / ORDER)
    a = ZETA + 3 * EPS - Fraction(1, 2)
    val = sum(float(c) * u ** i for i, c in enumerate(a.conjugate().coeffs))
    ref = sum(float(c) * u ** i for i, c in enumerate(a.coeffs)).conjugate()
    assert abs(val - ref) < 1e-12


def test_sparse_rendering():
    assert render(ZETA ** 4) == "z7^4"
    assert render(EPS ** 2) == "e3^2"
    assert render(-ONE - EPS) == "e3^2"
    assert render(ZERO) == "0"


# --- linear algebra -------------------------------------------------------------

int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(int_matrices)
def test_smith_invariants_match_sympy(a):
    d, u, v = smith_normal_form(a)
    m = sympy.Matrix(a)
    assert sympy.Matrix(u) * m * sympy.Matrix(v) == sympy.Matrix(d)
    assert abs(sympy.Matrix(u).det()) == 1 and abs(sympy.Matrix(v).det()) == 1
    ours = [abs(d[i][i]) for i in range(min(len(a), len(a[0])))]
    ref = sympy_snf(m, domain=sympy.ZZ)
    assert ours == [abs(ref[i, i]) for i in range(min(m.shape))]
    nz = [x for x in ours if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=80, deadline=None)
@given(int_matrices)
def test_hnf_spans_the_same_lattice(a):
    h = hermite_normal_form(a)
    assert len(h) == sympy.Matrix(a).rank()
    # input rows lie in the HNF lattice, and the Smith invariants (sympy) agree,
    # so the two lattices have the same index and coincide
    piv_of = [next(j for j, x in enumerate(r) if x) for r in h]
    for r in a:
        r = list(r)
        for row, p in zip(h, piv_of):
            if r[p] % row[p]:
                raise AssertionError("input row outside the HNF lattice")
            q = r[p] // row[p]
            r = [x - q * y for x, y in zip(r, row)]
        assert not any(r)
    if h:
        ra, rh = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ), sympy_snf(sympy.Matrix(h), domain=sympy.ZZ)
        inv = lambda m: sorted(abs(m[i, i]) for i in range(min(m.shape)) if m[i, i])
        assert inv(ra) == inv(rh)
    # echelon shape with reduced entries above pivots
    piv = [next(j for j, x in enumerate(r) if x) for r in h]
    assert piv == sorted(piv) and len(set(piv)) == len(piv)
    for i, (r, p) in enumerate(zip(h, piv)):
        assert r[p] > 0
        assert all(0 <= h[k][p] < r[p] for k in range(i))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_inverse_kernel_against_sympy(a):
    m = sympy.Matrix(a)
    assert determinant(a) == m.det()
    assert rank(a) == m.rank()
    for k in kernel(a):
        assert all(x == 0 for x in m * sympy.Matrix(k))
    assert len(kernel(a)) == 3 - m.rank()
    if m.det() != 0:
        inv = inverse(a)
        assert sympy.Matrix(inv) == m.inv()
        b = [1, 2, 3]
        assert sympy.Matrix(solve(a, b)) == m.inv() * sympy.Matrix(b)


@pytest.mark.parametrize("c", [[1, 0], [2, 3], [3, 5, 7], [6, 10, 15], [0, 0, 1], [-4, 9]])
def test_unimodular_completion(c):
    m = unimodular_completion(c)
    assert list(m[0]) == c
    assert abs(sympy.Matrix(m).det()) == 1


# --- linear programming vs vertex enumeration ---------------------------------------

def _gauss(rows, rhs):
    """Unique solution of a square system, or None (oracle, independent of the package)."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        p = next((i for i in range(col, n) if a[i][col] != 0), None)
        if p is None:
            return None
        a[col], a[p] = a[p], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col] / a[col][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _vertex_min(cons, obj):
    n = len(obj)
    best = None
    for sub in itertools.combinations(cons, n):
        x = _gauss([w for w, _ in sub], [c for _, c in sub])
        if x is None or not all(sum(Fraction(a) * b for a, b in zip(w, x)) >= c for w, c in cons):
            continue
        val = sum(Fraction(o) * v for o, v in zip(obj, x))
        best = val if best is None else min(best, val)
    return best


def _oracle(cons, obj, bounded=False):
    """Status and optimum for a pointed polyhedron, from vertex enumeration only."""
    n = len(obj)
    best = _vertex_min(cons, obj)
    if best is None:
        return INFEASIBLE, None
    if bounded:
        return OPTIMAL, best
    # unbounded iff some recession direction in the unit box decreases the objective
    box = [(w, 0) for w, _ in cons]
    box += [(tuple(int(i == j) * s for j in range(n)), -1) for i in range(n) for s in (1, -1)]
    if _vertex_min(box, obj) < 0:
        return UNBOUNDED, None
    return OPTIMAL, best


def _random_system(rng, n, m, with_box):
    while True:
        cons = [(tuple(rng.randint(-3, 3) for _ in range(n)), rng.randint(-4, 4)) for _ in range(m)]
        if with_box:
            cons += [(tuple(int(i == j) * s for j in range(n)), -5) for i in range(n) for s in (1, -1)]
        if sympy.Matrix([w for w, _ in cons]).rank() == n:
            return cons, tuple(rng.randint(-3, 3) for _ in range(n))


@pytest.mark.parametrize("n,m,with_box,count", [(1, 3, False, 60), (2, 5, False, 150),
                                                (3, 6, False, 120), (4, 4, True, 40)])
def test_lp_matches_vertex_enumeration(n, m, with_box, count):
    rng = random.Random(1000 * n + m)
    statuses = set()
    for _ in range(count):
        cons, obj = _random_system(rng, n, m, with_box)
        res = lp_minimize(LinearProgram.of(cons, obj))
        status, best = _oracle(cons, obj, with_box)
        statuses.add(status)
        assert res.status == status, (cons, obj)
        if status == OPTIMAL:
            assert res.minimum == best
            assert all(sum(Fraction(a) * b for a, b in zip(w, res.point)) >= c for w, c in cons)
    if not with_box:
        assert statuses == {OPTIMAL, UNBOUNDED, INFEASIBLE}


def test_lp_fixed_examples():
    assert lp_minimize(LinearProgram.of([((1, 1, 1), 0), ((1, 0, 0), -1), ((0, 1, 0), -1),
                                          ((0, 0, 1), 0)], (1, 0, 0))).minimum == -1
    assert lp_minimize(LinearProgram.of([((1, 0), 0)], (0, 1))).status == UNBOUNDED
    assert lp_minimize(LinearProgram.of([((1,), 1), ((-1,), 0)], (1,))).status == INFEASIBLE
