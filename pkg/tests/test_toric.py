import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from rigidity.exact_arith import vec
from rigidity.toric import (
    Fan,
    FanError,
    Lattice,
    ResolutionInputError,
    TorusDivisor,
    blowup_of_smooth_point,
    build_resolution,
    cartier_data,
    cech_counts_p1,
    div_of_character,
    divisor_polyhedron,
    fan_isomorphic,
    fan_script,
    hi_projspace,
    hirzebruch_fan,
    lattice_points_equal,
    linearly_equivalent,
    meet_in_common_face,
    p1_times_p1_fan,
    parse_fan_script,
    projective_bundle_fan,
    projective_space_fan,
    star_fan,
    star_subdivision,
    volume_conservation,
)
from rigidity.toric.lattice import Cone
from rigidity.toric.lattice_points import brute_force_witness


def _presets():
    out = [build_resolution(2, (1, 1)), blowup_of_smooth_point(2), blowup_of_smooth_point(3)]
    for n in range(2, 7):
        out.append(build_resolution(3, (1,) * n))
        out.append(build_resolution(3, (1,) * (n - 1) + (2,)))
    return out


PRESETS = _presets()


def _coords(lattice, v):
    return sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in lattice.coordinates(v)])


# --- lattices -------------------------------------------------------------------

def test_cyclic_quotient_lattice():
    n = Lattice.cyclic_quotient(3, (1, 1, 2))
    assert n.contains([Fraction(1, 3), Fraction(1, 3), Fraction(2, 3)])
    assert not n.contains([Fraction(1, 3), 0, 0])
    assert abs(n.det) == Fraction(1, 3)
    m = n.dual
    assert m.contains([1, -1, 0]) and m.contains([1, 0, 1]) and not m.contains([1, 0, 0])
    assert abs(m.det) == 3
    assert n.primitive([Fraction(2, 3), Fraction(2, 3), Fraction(4, 3)]) == vec(
        [Fraction(1, 3), Fraction(1, 3), Fraction(2, 3)])


# --- fans and subdivisions ------------------------------------------------------------

@pytest.mark.parametrize("res", PRESETS, ids=lambda r: f"{r.label}-{r.fan.dimension}")
def test_preset_fans_are_smooth_by_sympy_determinants(res):
    fan = res.fan
    for c in fan.cones:
        cols = sympy.Matrix.hstack(*[_coords(fan.lattice, fan.rays[i]) for i in c])
        assert abs(cols.det()) == 1
    assert fan.is_smooth()


def _simplex_volume(vertices):
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in v] for v in vertices])
    return abs(m.det()) / math.factorial(len(vertices))


def _check_subdivision(sub):
    """Independent volume check plus a sampled covering test."""
    for c, old, new in volume_conservation(sub):
        gens = [sub.before.rays[i] for i in c]
        h = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in g] for g in gens]).solve(
            sympy.ones(len(gens), 1))
        hv = lambda v: sum(h[i] * sympy.Rational(x.numerator, x.denominator) for i, x in enumerate(v))
        ref_old = _simplex_volume(gens)
        pieces = [[[x / hv(g) for x in g] for g in (sub.after.rays[i] for i in nc)] for nc in sub.created[c]]
        ref_new = sum(abs(sympy.Matrix(p).det()) for p in pieces) / math.factorial(len(gens))
        assert ref_old == ref_new
        assert old == new
        # sampled: each interior point of c lies in exactly one new cone
        rng = np.random.default_rng(7)
        g_old = np.array([[float(x) for x in g] for g in gens])
        for _ in range(50):
            x = rng.random(len(gens)) @ g_old
            hits = 0
            for nc in sub.created[c]:
                gn = np.array([[float(v) for v in sub.after.rays[i]] for i in nc])
                lam = np.linalg.solve(gn.T, x)
                hits += bool((lam > -1e-12).all())
            assert hits == 1


@pytest.mark.parametrize("res", PRESETS, ids=lambda r: f"{r.label}-{r.fan.dimension}")
def test_volume_conservation_on_presets(res):
    for sub in res.steps:
        _check_subdivision(sub)


def test_random_star_subdivisions_of_projective_space():
    rng = random.Random(3)
    fan = projective_space_fan(3)
    for _ in range(6):
        while True:
            v = [rng.randint(-2, 2) for _ in range(3)]
            if any(v) and math.gcd(*v) == 1 and vec(v) not in fan.rays:
                break
        sub = star_subdivision(fan, v)
        _check_subdivision(sub)
        fan = sub.after
        assert fan.is_complete()


def test_star_subdivision_errors():
    fan = projective_space_fan(2)
    with pytest.raises(FanError):
        star_subdivision(fan, [2, 0])
    with pytest.raises(FanError):
        star_subdivision(fan, [1, 0])


def test_meet_in_common_face():
    a = Cone.of([[1, 0], [0, 1]])
    b = Cone.of([[0, 1], [-1, 0]])
    c = Cone.of([[1, 1], [-1, 1]])
    assert meet_in_common_face(a, b)
    assert not meet_in_common_face(a, c)
    with pytest.raises(FanError):
        Fan.build(Lattice.standard(2), [[1, 0], [0, 1], [1, 1], [-1, 1]], [[0, 1], [2, 3]])


# --- isomorphisms ----------------------------------------------------------------------

FANS = [projective_space_fan(2), p1_times_p1_fan(), hirzebruch_fan(1), hirzebruch_fan(2),
        projective_bundle_fan(3), projective_space_fan(3), projective_bundle_fan(4)]


def _verify(iso, a, b):
    m = iso.matrix
    for i, r in enumerate(a.rays):
        assert vec(m.row_apply(r)) == b.rays[iso.ray_map[i]]
    assert {tuple(sorted(iso.ray_map[i] for i in c)) for c in a.cones} == {tuple(sorted(c)) for c in b.cones}


def test_isomorphism_reflexive_and_symmetric():
    for a, b in itertools.product(FANS, repeat=2):
        ab, ba = fan_isomorphic(a, b), fan_isomorphic(b, a)
        assert (ab is None) == (ba is None)
        if a is b:
            assert ab is not None
        if ab is not None:
            _verify(ab, a, b)
            _verify(ba, b, a)


def test_isomorphism_classes():
    assert fan_isomorphic(projective_bundle_fan(3), hirzebruch_fan(2)) is not None
    assert fan_isomorphic(hirzebruch_fan(2), hirzebruch_fan(-2)) is not None
    assert fan_isomorphic(hirzebruch_fan(1), hirzebruch_fan(2)) is None
    assert fan_isomorphic(projective_space_fan(2), p1_times_p1_fan()) is None


def test_star_fan_of_blowup_is_projective_space():
    for n in range(2, 5):
        res = build_resolution(3, (1,) * n)
        star = star_fan(res.fan, res.exceptional_rays[0])
        assert fan_isomorphic(star.fan, projective_space_fan(n - 1)) is not None


# --- divisors ---------------------------------------------------------------------------

def test_div_of_character_is_additive():
    fan = build_resolution(3, (1, 1, 2)).fan
    us = [[1, -1, 0], [1, 0, 1], [3, 0, 0], [0, 2, -1]]
    for u, w in itertools.product(us, repeat=2):
        total = div_of_character(fan, [a + b for a, b in zip(u, w)])
        assert total == div_of_character(fan, u) + div_of_character(fan, w)
    d = TorusDivisor.prime(fan, 0)
    moved = d + div_of_character(fan, [1, -1, 0])
    assert linearly_equivalent(d, moved) is not None
    assert linearly_equivalent(d, d.scale(2)) is None


def test_div_of_character_rejects_non_dual_vectors():
    fan = build_resolution(3, (1, 1, 1)).fan
    with pytest.raises(ValueError):
        div_of_character(fan, [1, 0, 0])


def test_cartier_on_singular_cone():
    res = build_resolution(3, (1, 1, 1))
    d = TorusDivisor.prime(res.initial, 0)
    assert cartier_data(d) is None
    assert cartier_data(d.scale(3)) is not None


def test_cartier_data_is_a_local_equation():
    res = build_resolution(3, (1, 1, 1, 1))
    d = TorusDivisor.prime(res.fan, 0)
    for cone, u in cartier_data(d).items():
        for i in cone:
            assert sum(a * b for a, b in zip(u, res.fan.rays[i])) == -d.coefficients[i]


def _enumerate_box(fine, coarse, lattice, box):
    """Point-by-point scan of the box (oracle for the vectorized search)."""
    dual = lattice.dual
    bad = []
    for x in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
        if dual.contains(x) and coarse.contains(x) and not fine.contains(x):
            bad.append(x)
    return min(bad, key=lambda x: (sum(map(abs, x)), x)) if bad else None


@pytest.mark.parametrize("res", [blowup_of_smooth_point(2), build_resolution(3, (1, 1, 1)),
                                 build_resolution(3, (1, 1, 2)), build_resolution(2, (1, 1))],
                         ids=lambda r: r.label)
def test_box_search_matches_scan(res):
    for k, i in enumerate(res.original_rays):
        fine = divisor_polyhedron(TorusDivisor.prime(res.fan, i))
        coarse = divisor_polyhedron(TorusDivisor.prime(res.initial, k))
        result = brute_force_witness(fine, coarse, res.lattice, 4)
        assert result.witness == _enumerate_box(fine, coarse, res.lattice, result.box)
        lp = lattice_points_equal(fine, coarse, res.lattice, 4)
        assert lp.oracle_agrees


def test_blowup_witness():
    res = blowup_of_smooth_point(2)
    fine = divisor_polyhedron(TorusDivisor.prime(res.fan, 0))
    coarse = divisor_polyhedron(TorusDivisor.prime(res.initial, 0))
    lp = lattice_points_equal(fine, coarse, res.lattice)
    assert not lp.equal
    assert lp.witness == (-1, 0)
    assert not fine.contains((-1, 0)) and coarse.contains((-1, 0))


# --- cohomology ----------------------------------------------------------------------------

@pytest.mark.parametrize("d", range(-6, 7))
def test_bott_matches_cech_on_p1(d):
    assert cech_counts_p1(d) == (hi_projspace(0, 1, d), hi_projspace(1, 1, d))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_bott_h0_counts_monomials_and_serre(m):
    d_ = sympy.Symbol("d")
    chi = sympy.prod([(d_ + k) for k in range(1, m + 1)]) / math.factorial(m)
    for d in range(-8, 7):
        monomials = sum(1 for e in itertools.product(range(max(d, 0) + 1), repeat=m + 1) if sum(e) == d)
        assert hi_projspace(0, m, d) == monomials
        assert hi_projspace(m, m, d) == hi_projspace(0, m, -d - m - 1)
        euler = sum((-1) ** i * hi_projspace(i, m, d) for i in range(m + 1))
        assert euler == chi.subs(d_, d)


# --- resolutions and fan scripts --------------------------------------------------------------

@pytest.mark.parametrize("res", PRESETS, ids=lambda r: f"{r.label}-{r.fan.dimension}")
def test_fan_script_round_trip(res):
    again = parse_fan_script(fan_script(res))
    assert again.fan.lattice.basis == res.fan.lattice.basis
    assert set(again.fan.rays) == set(res.fan.rays)
    assert {frozenset(again.fan.rays[i] for i in c) for c in again.fan.cones} == \
        {frozenset(res.fan.rays[i] for i in c) for c in res.fan.cones}


@pytest.mark.parametrize("text", ["gen 1 0\n", "dim 2\ncone 1 0 0\n", "dim 2\ncone 1 0 0 1\nfoo 1 2\n",
                                  "dim 2\ncone 1 0 0 1\nsubdivide 2 0\n", "dim 2\ngen 1/0 1\n", "dim 2\n"])
def test_fan_script_errors(text):
    with pytest.raises(ResolutionInputError):
        parse_fan_script(text)


def test_fan_script_comments_and_preset_equivalence():
    text = "# 1/3(1,1,1)\ndim 3\ngen 1/3 1/3 1/3\ncone 1 0 0 0 1 0 0 0 1\nsubdivide 1/3 1/3 1/3  # v\n"
    res = parse_fan_script(text)
    ref = build_resolution(3, (1, 1, 1))
    assert fan_isomorphic(res.fan, ref.fan) is not None


def test_unknown_preset():
    with pytest.raises(ResolutionInputError):
        build_resolution(5, (1, 2))
