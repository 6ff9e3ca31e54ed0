from fractions import Fraction

import numpy as np
import pytest

from numeric import EPS, cnum, fermat_fixed, fermat_map, in_lattice, klein_fixed, lefschetz_forms_trace, same_point
from rigidity.curve_actions import (
    FERMAT,
    KLEIN,
    ProjPoint,
    TorusPoint,
    act,
    curve_genus,
    fixed_points,
    form_characters,
    hurwitz_genus,
    is_identity_on,
    orbit_data,
    quartic_value,
    special_points,
    stabilizer,
)
from rigidity.exact_arith import EPS as EXACT_EPS, ZERO
from rigidity.group_rep import CLASS_REPRESENTATIVES, IDENTITY, decompose_character, elements, irreducible


def _proj(p):
    return np.array([cnum(x) for x in p.coords])


def _torus(z):
    return float(z.a) + float(z.b) * EPS


def test_klein_fixed_points_match_numeric():
    for g in elements():
        if g.is_identity():
            continue
        exact = fixed_points(KLEIN, g)
        num = klein_fixed((g.a, g.b))
        assert len(exact) == len(num)
        for p in exact:
            assert quartic_value(p) == ZERO
            assert act(KLEIN, g, p) == p
            assert any(same_point(_proj(p), q) for q, _ in num)


def test_fermat_fixed_points_match_numeric():
    for g in elements():
        if g.is_identity():
            continue
        exact = fixed_points(FERMAT, g)
        num = fermat_fixed((g.a, g.b))
        assert len(exact) == len(num)
        for z in exact:
            assert in_lattice(fermat_map((g.a, g.b), _torus(z)) - _torus(z))


def test_fixed_point_counts():
    t, s = CLASS_REPRESENTATIVES[1], CLASS_REPRESENTATIVES[3]
    assert len(fixed_points(KLEIN, t)) == 3 and len(fixed_points(KLEIN, s)) == 2
    assert len(fixed_points(FERMAT, t)) == 0 and len(fixed_points(FERMAT, s)) == 3
    ts = t * s
    assert len(fixed_points(FERMAT, ts)) == 3


def test_special_point_totals():
    assert len(special_points(KLEIN)) == 17
    assert len(special_points(FERMAT)) == 21


def test_orbit_data_numeric_eigenvalues():
    for curve in (KLEIN, FERMAT):
        for d in orbit_data(curve):
            g = d.stabilizer_generator
            assert d.length * d.stabilizer_order == 21
            assert len(stabilizer(curve, d.representative)) == d.stabilizer_order
            num = klein_fixed((g.a, g.b)) if curve == KLEIN else fermat_fixed((g.a, g.b))
            if curve == KLEIN:
                lam = next(l for q, l in num if same_point(_proj(d.representative), q))
            else:
                lam = num[0][1]
            assert abs(lam - cnum(d.local_eigenvalue)) < 1e-9
            assert set(d.orbit) == {act(curve, h, d.representative) for h in elements()}


def test_genus():
    assert curve_genus(KLEIN) == 3 == (4 - 1) * (4 - 2) // 2
    assert curve_genus(FERMAT) == 1 == (3 - 1) * (3 - 2) // 2
    assert hurwitz_genus(21, [7, 3, 3]) == 3
    assert hurwitz_genus(21, [3, 3, 3]) == 1
    with pytest.raises(ValueError):
        hurwitz_genus(21, [2, 3, 7])


@pytest.mark.parametrize("curve,genus", [(KLEIN, 3), (FERMAT, 1)])
def test_form_characters_match_lefschetz(curve, genus):
    # g acts on forms by pulling back along g^-1
    chi1 = form_characters(curve, 1)
    chi2 = form_characters(curve, 2)
    for g in CLASS_REPRESENTATIVES:
        h = g.inverse()
        ref1 = lefschetz_forms_trace(curve, (h.a, h.b), 1, genus)
        assert abs(cnum(chi1(g)) - ref1) < 1e-9
        ref2 = lefschetz_forms_trace(curve, (h.a, h.b), 2, genus) if genus >= 2 else ref1 ** 2
        assert abs(cnum(chi2(g)) - ref2) < 1e-9


def test_conventions_are_swapped_by_conjugation():
    for curve in (KLEIN, FERMAT):
        for k in (1, 2):
            assert form_characters(curve, k, inverse_convention=False) == form_characters(curve, k).conjugate()
    assert decompose_character(form_characters(FERMAT, 1, inverse_convention=False)) == (0, 1, 0, 0, 0)


def test_points_normalize():
    p = ProjPoint.of([EXACT_EPS, EXACT_EPS, EXACT_EPS])
    assert p == ProjPoint.of([1, 1, 1])
    assert TorusPoint.of(1, -1) == TorusPoint.of(0, 0)
    z = TorusPoint.of(Fraction(1, 3), Fraction(2, 3))
    assert z.times_eps() == z
    assert TorusPoint.of(Fraction(1, 7), 0).times_eps() != TorusPoint.of(Fraction(1, 7), 0)


def test_faithful_on_both_curves():
    for g in elements():
        assert is_identity_on(KLEIN, g) == (g == IDENTITY)
        assert is_identity_on(FERMAT, g) == (g == IDENTITY)
