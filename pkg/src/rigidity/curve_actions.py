"""G-actions on the Klein quartic Q and the Fermat cubic F.

Q = {x0^3 x1 + x1^3 x2 + x2^3 x0 = 0} in P^2, with t^a s^b acting by the
matrix T^a S^b.  F = C / (Z + Z eps), written in coordinates z = a + b eps
with a, b taken mod 1; t^a s^b acts by z -> eps^b z + a (1 + 3 eps)/7.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence, Union

from .exact_arith import ONE, ZERO, Cyclotomic, eps, kernel, smith_normal_form
from .exact_arith.cyclotomic import ORDER
from .group_rep import (
    IDENTITY,
    Character,
    GroupElement,
    Matrix3,
    elements,
    eta_matrix,
    generated_subgroup,
    sym2_char,
)

KLEIN = "klein"
FERMAT = "fermat"
CURVES = (KLEIN, FERMAT)


class FixedLocusError(ValueError):
    """The fixed locus of the element is not a finite set of points."""


# --- points -------------------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[Cyclotomic, Cyclotomic, Cyclotomic]

    @classmethod
    def of(cls, coords: Sequence) -> "ProjPoint":
        cs = [Cyclotomic.coerce(c) for c in coords]
        lead = next((c for c in cs if not c.is_zero()), None)
        if lead is None:
            raise ValueError("(0:0:0) is not a point of P^2")
        inv = lead.inverse()
        return cls(tuple(c * inv for c in cs))

    def leading_index(self) -> int:
        return next(i for i, c in enumerate(self.coords) if not c.is_zero())

    def sort_key(self) -> tuple:
        return (self.leading_index(), tuple(c.sort_key() for c in self.coords))

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class TorusPoint:
    """The class of a + b*eps in C / (Z + Z eps), with 0 <= a, b < 1."""

    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, a, b) -> "TorusPoint":
        a, b = Fraction(a), Fraction(b)
        return cls(a - (a.numerator // a.denominator), b - (b.numerator // b.denominator))

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint.of(self.a + other.a, self.b + other.b)

    def times_eps(self) -> "TorusPoint":
        # eps (a + b eps) = -b + (a - b) eps, using eps^2 = -1 - eps
        return TorusPoint.of(-self.b, self.a - self.b)

    def scale(self, k: int) -> "TorusPoint":
        return TorusPoint.of(k * self.a, k * self.b)

    def sort_key(self) -> tuple:
        return (self.a, self.b)

    def __str__(self):
        if not self.a and not self.b:
            return "0"
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.b:
            parts.append(f"{self.b}*e3")
        return "+".join(parts)


Point = Union[ProjPoint, TorusPoint]

TRANSLATION = TorusPoint.of(Fraction(1, 7), Fraction(3, 7))


# --- the actions ----------------------------------------------------------------

def quartic_value(p: ProjPoint) -> Cyclotomic:
    x0, x1, x2 = p.coords
    return x0 * x0 * x0 * x1 + x1 * x1 * x1 * x2 + x2 * x2 * x2 * x0


def quartic_gradient(p: ProjPoint) -> tuple[Cyclotomic, ...]:
    x0, x1, x2 = p.coords
    return (
        3 * x0 * x0 * x1 + x2 * x2 * x2,
        x0 * x0 * x0 + 3 * x1 * x1 * x2,
        x1 * x1 * x1 + 3 * x2 * x2 * x0,
    )


def _mat_vec(m: Matrix3, v: Sequence[Cyclotomic]) -> tuple[Cyclotomic, ...]:
    return tuple(sum((m[i][k] * v[k] for k in range(3)), ZERO) for i in range(3))


@lru_cache(maxsize=None)
def act_klein(g: GroupElement, p: ProjPoint) -> ProjPoint:
    return ProjPoint.of(_mat_vec(eta_matrix(g), p.coords))


@lru_cache(maxsize=None)
def act_fermat(g: GroupElement, z: TorusPoint) -> TorusPoint:
    w = z
    for _ in range(g.b):
        w = w.times_eps()
    return w + TRANSLATION.scale(g.a)


def act(curve: str, g: GroupElement, p: Point) -> Point:
    if curve == KLEIN:
        return act_klein(g, p)
    if curve == FERMAT:
        return act_fermat(g, p)
    raise ValueError(f"unknown curve {curve!r}")


@dataclass(frozen=True)
class CurveAutomorphism:
    """The automorphism of one curve induced by a group element."""

    curve: str
    element: GroupElement

    @property
    def matrix(self) -> Matrix3:
        if self.curve != KLEIN:
            raise AttributeError("only the quartic has a matrix action")
        return eta_matrix(self.element)

    @property
    def rotation(self) -> int:
        return self.element.b

    @property
    def translation(self) -> TorusPoint:
        return TRANSLATION.scale(self.element.a)

    def __call__(self, p: Point) -> Point:
        return act(self.curve, self.element, p)


# --- fixed points -------------------------------------------------------------

def _char_poly_at(m: Matrix3, lam: Cyclotomic) -> Cyclotomic:
    a = [[m[i][j] - (lam if i == j else ZERO) for j in range(3)] for i in range(3)]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def eigenlines(m: Matrix3) -> list[tuple[Cyclotomic, tuple[Cyclotomic, ...]]]:
    """Eigenvalues among the 21st roots of unity with their (1-dimensional) eigenvectors."""
    out = []
    for k in range(ORDER):
        lam = Cyclotomic.root(k)
        if not _char_poly_at(m, lam).is_zero():
            continue
        shifted = [[m[i][j] - (lam if i == j else ZERO) for j in range(3)] for i in range(3)]
        basis = kernel(shifted, ZERO, ONE)
        if len(basis) != 1:
            raise FixedLocusError("eigenspace of dimension > 1; the fixed locus contains a line")
        out.append((lam, tuple(basis[0])))
    return out


@lru_cache(maxsize=None)
def klein_fixed_points(g: GroupElement) -> tuple[ProjPoint, ...]:
    if g.is_identity():
        raise FixedLocusError("the identity fixes all of Q")
    pts = []
    for _, v in eigenlines(eta_matrix(g)):
        p = ProjPoint.of(v)
        if quartic_value(p).is_zero():
            pts.append(p)
    return tuple(sorted(pts, key=ProjPoint.sort_key))


def _eps_power_matrix(b: int) -> list[list[int]]:
    # matrix of multiplication by eps^b on coordinates (a, b), acting on columns
    m = [[1, 0], [0, 1]]
    for _ in range(b):
        # (x, y) -> (-y, x - y)
        m = [[-m[1][0], -m[1][1]], [m[0][0] - m[1][0], m[0][1] - m[1][1]]]
    return m


@lru_cache(maxsize=None)
def fermat_fixed_points(g: GroupElement) -> tuple[TorusPoint, ...]:
    """Solve (eps^b - 1) z = -c mod Lambda through the Smith form of eps^b - 1."""
    if g.is_identity():
        raise FixedLocusError("the identity fixes all of F")
    rot = _eps_power_matrix(g.b)
    a = [[rot[0][0] - 1, rot[0][1]], [rot[1][0], rot[1][1] - 1]]
    c = TRANSLATION.scale(g.a)
    rhs = (-c.a, -c.b)
    d, u, v = smith_normal_form(a)
    # U A V = D; with z = V y and k' = U (rhs + k): D y = U rhs + U k
    urhs = [u[i][0] * rhs[0] + u[i][1] * rhs[1] for i in range(2)]
    pts = set()
    diag = [d[0][0], d[1][1]]
    if 0 in diag:
        # a zero invariant factor: either no solution or a positive-dimensional locus
        for i in range(2):
            if diag[i] == 0 and urhs[i].denominator == 1:
                raise FixedLocusError(f"{g} fixes a curve on F")
        return ()
    for j0, j1 in product(range(diag[0]), range(diag[1])):
        y = (Fraction(urhs[0] + j0, diag[0]), Fraction(urhs[1] + j1, diag[1]))
        z = (v[0][0] * y[0] + v[0][1] * y[1], v[1][0] * y[0] + v[1][1] * y[1])
        pts.add(TorusPoint.of(*z))
    return tuple(sorted(pts, key=TorusPoint.sort_key))


def fixed_points(curve: str, g: GroupElement) -> tuple[Point, ...]:
    if curve == KLEIN:
        return klein_fixed_points(g)
    if curve == FERMAT:
        return fermat_fixed_points(g)
    raise ValueError(f"unknown curve {curve!r}")


def stabilizer(curve: str, p: Point) -> frozenset[GroupElement]:
    return frozenset(g for g in elements() if act(curve, g, p) == p)


# --- local action -------------------------------------------------------------

def local_eigenvalue(curve: str, p: Point, g: GroupElement) -> Cyclotomic:
    """Eigenvalue of g on the tangent line of the curve at the fixed point p."""
    if g.is_identity() or act(curve, g, p) != p:
        raise ValueError(f"{g} does not stabilize {p}")
    if curve == FERMAT:
        return eps(g.b)
    m = eta_matrix(g)
    line = _mat_vec(m, p.coords)
    i = p.leading_index()
    lam_point = line[i] / p.coords[i]
    grad = quartic_gradient(p)
    # the projective tangent line is {x : grad . x = 0}; it is g-stable and contains p
    for lam, v in eigenlines(m):
        if sum((gr * x for gr, x in zip(grad, v)), ZERO).is_zero() and ProjPoint.of(v) != p:
            return lam / lam_point
    raise ArithmeticError("no tangent eigenvector found")


# --- orbits -------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitDatum:
    curve: str
    representative: Point
    stabilizer_generator: GroupElement
    stabilizer_order: int
    orbit: tuple[Point, ...]
    local_eigenvalue: Cyclotomic

    @property
    def length(self) -> int:
        return len(self.orbit)


def special_points(curve: str) -> list[Point]:
    """All points with nontrivial stabilizer."""
    pts: set = set()
    for g in elements():
        if not g.is_identity():
            pts.update(fixed_points(curve, g))
    return sorted(pts, key=lambda p: p.sort_key())


def _canonical_generator(group: frozenset[GroupElement]) -> GroupElement:
    gens = [g for g in group if not g.is_identity() and generated_subgroup([g]) == group]
    if not gens:
        raise ValueError("stabilizer is not cyclic")
    return min(gens, key=GroupElement.generator_key)


@lru_cache(maxsize=None)
def orbit_data(curve: str) -> tuple[OrbitDatum, ...]:
    remaining = special_points(curve)
    data = []
    while remaining:
        p0 = remaining[0]
        orbit = {act(curve, g, p0) for g in elements()}
        remaining = [p for p in remaining if p not in orbit]
        # representative: the orbit point whose stabilizer has the preferred generator
        best = None
        for p in sorted(orbit, key=lambda q: q.sort_key()):
            stab = stabilizer(curve, p)
            gen = _canonical_generator(stab)
            key = gen.generator_key()
            if best is None or key < best[0]:
                best = (key, p, stab, gen)
        _, rep, stab, gen = best
        if len(stab) * len(orbit) != 21:
            raise ArithmeticError("orbit-stabilizer relation violated")
        lam = local_eigenvalue(curve, rep, gen)
        data.append(OrbitDatum(
            curve, rep, gen, len(stab),
            tuple(sorted(orbit, key=lambda q: q.sort_key())), lam,
        ))
    data.sort(key=lambda d: (d.stabilizer_generator.generator_key(),
                             d.local_eigenvalue.root_exponent(),
                             d.representative.sort_key()))
    return tuple(data)


# --- genus and forms ------------------------------------------------------------

def hurwitz_genus(group_order: int, branch_orders: Sequence[int]) -> int:
    """Genus of a G-cover of P^1 with the given branching orders."""
    if group_order < 1:
        raise ValueError("group order must be positive")
    for m in branch_orders:
        if m < 2 or group_order % m:
            raise ValueError(f"branch order {m} is inconsistent with |G| = {group_order}")
    g = 1 + Fraction(group_order, 2) * (-2 + sum((1 - Fraction(1, m) for m in branch_orders), Fraction(0)))
    if g.denominator != 1 or g < 0:
        raise ValueError(f"ramification data gives genus {g}")
    return int(g)


def curve_genus(curve: str) -> int:
    return hurwitz_genus(21, [d.stabilizer_order for d in orbit_data(curve)])


def _pullback_trace_linear_forms(g: GroupElement, inverse_convention: bool = True) -> Cyclotomic:
    # forms are rows r with l(y) = r . y; (phi^* l)(y) = l(M y) = (r M) . y
    m = eta_matrix(g.inverse() if inverse_convention else g)
    total = ZERO
    for i in range(3):
        row = [ONE if j == i else ZERO for j in range(3)]
        image = [sum((row[k] * m[k][j] for k in range(3)), ZERO) for j in range(3)]
        total = total + image[i]
    return total


def _pullback_dz(g: GroupElement, inverse_convention: bool = True) -> Cyclotomic:
    h = g.inverse() if inverse_convention else g
    # f_h(z) = eps^b z + c, so f_h^* dz = eps^b dz
    return eps(h.b)


def form_characters(curve: str, k: int, inverse_convention: bool = True) -> Character:
    """Character of G on H^0(curve, omega^k), k in {1, 2}.

    g acts by pullback along the automorphism of g^-1; ``inverse_convention=False``
    pulls back along g itself and is only used to compare conventions.
    """
    if k not in (1, 2):
        raise ValueError("only k = 1, 2 are supported")
    if curve == KLEIN:
        base = Character.from_function(
            lambda g: _pullback_trace_linear_forms(g, inverse_convention), "omega_Q")
        return base if k == 1 else sym2_char(base)
    if curve == FERMAT:
        base = Character.from_function(lambda g: _pullback_dz(g, inverse_convention), "omega_F")
        return base if k == 1 else base * base
    raise ValueError(f"unknown curve {curve!r}")


def is_identity_on(curve: str, g: GroupElement) -> bool:
    if curve == KLEIN:
        m = eta_matrix(g)
        return all(m[i][j].is_zero() for i in range(3) for j in range(3) if i != j) and \
            m[0][0] == m[1][1] == m[2][2]
    return g == IDENTITY or (g.b == 0 and TRANSLATION.scale(g.a) == TorusPoint.of(0, 0))
