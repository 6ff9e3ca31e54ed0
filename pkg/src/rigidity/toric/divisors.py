"""Torus-invariant divisors: characters, polyhedra, Cartier data and restrictions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from ..exact_arith import common_denominator, dot, solve, vec
from ..exact_arith.linalg import Vector
from .fan import ConeIndex, Fan, StarFan, cone_coefficients, star_fan


class NotCartierError(ValueError):
    pass


@dataclass(frozen=True)
class TorusDivisor:
    fan: Fan
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(self.fan.rays):
            raise ValueError("one coefficient per ray is required")

    @classmethod
    def prime(cls, fan: Fan, ray: int) -> "TorusDivisor":
        return cls(fan, tuple(int(i == ray) for i in range(len(fan.rays))))

    @classmethod
    def zero(cls, fan: Fan) -> "TorusDivisor":
        return cls(fan, (0,) * len(fan.rays))

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(self.fan, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(self.fan, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, k: int) -> "TorusDivisor":
        return TorusDivisor(self.fan, tuple(k * a for a in self.coefficients))


def div_of_character(fan: Fan, u: Sequence) -> TorusDivisor:
    u = vec(u)
    if not fan.lattice.pairs_integrally(u):
        raise ValueError(f"{u} is not in the dual lattice")
    coeffs = []
    for r in fan.rays:
        c = dot(u, r)
        assert c.denominator == 1
        coeffs.append(int(c))
    return TorusDivisor(fan, tuple(coeffs))


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of v that is a primitive integer vector."""
    v = vec(v)
    d = common_denominator(v)
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class DivisorPolyhedron:
    """{x : <w, x> >= c for each (w, c)}, one inequality per ray, w the primitive integer normal."""

    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def dimension(self) -> int:
        return len(self.inequalities[0][0])

    def contains(self, x: Sequence) -> bool:
        return all(dot(w, x) >= c for w, c in self.inequalities)

    def extra_over(self, coarse: "DivisorPolyhedron") -> list[tuple[tuple[int, ...], Fraction]]:
        have = set(coarse.inequalities)
        return [k for k in self.inequalities if k not in have]


def divisor_polyhedron(d: TorusDivisor) -> DivisorPolyhedron:
    ineqs = []
    for r, a in zip(d.fan.rays, d.coefficients):
        w = primitive_integer(r)
        # <x, r> >= -a  scaled by the positive factor w / r
        k = next(Fraction(wi) / ri for wi, ri in zip(w, r) if ri)
        ineqs.append((w, -a * k))
    return DivisorPolyhedron(tuple(ineqs))


def local_character(d: TorusDivisor, cone: ConeIndex) -> Vector:
    """The u with <u, rho> = -a_rho on the rays of a full simplicial cone."""
    rows = [d.fan.rays[i] for i in cone]
    rhs = [-d.coefficients[i] for i in cone]
    u = solve(rows, rhs)
    if u is None:
        raise ArithmeticError("inconsistent local equations")
    return u


def cartier_data(d: TorusDivisor) -> Optional[dict[ConeIndex, Vector]]:
    """u(sigma) for every maximal cone, or None when D is not Cartier."""
    data = {}
    for c in d.fan.cones:
        u = local_character(d, c)
        if not d.fan.lattice.pairs_integrally(u):
            return None
        data[c] = u
    for a in d.fan.cones:
        for b in d.fan.cones:
            shared = set(a) & set(b)
            for i in shared:
                diff = [x - y for x, y in zip(data[a], data[b])]
                if dot(diff, d.fan.rays[i]) != 0:
                    raise ArithmeticError("Cartier data disagree on a shared face")
    return data


def is_cartier(d: TorusDivisor) -> bool:
    return cartier_data(d) is not None


def demazure_vanishing(d: TorusDivisor) -> bool:
    """Every u(sigma) lies in P_D, so O(D) is globally generated and its higher cohomology vanishes."""
    data = cartier_data(d)
    if data is None:
        raise NotCartierError("divisor is not Cartier")
    poly = divisor_polyhedron(d)
    return all(poly.contains(u) for u in data.values())


def linearly_equivalent(a: TorusDivisor, b: TorusDivisor) -> Optional[Vector]:
    """m in the dual lattice with a - b = div(m), if any."""
    diff = a - b
    m = _solve_on_rays(a.fan, range(len(a.fan.rays)), [diff.coefficients[i] for i in range(len(a.fan.rays))])
    if m is None or not a.fan.lattice.pairs_integrally(m):
        return None
    return m


def _solve_on_rays(fan: Fan, ray_ids, values) -> Optional[Vector]:
    rows = [fan.rays[i] for i in ray_ids]
    try:
        return solve(rows, values)
    except ValueError:
        return None


def class_in_basis(d: TorusDivisor, basis: Sequence[int]) -> tuple[int, ...]:
    """Coefficients c with D ~ sum c_k D_{basis[k]}.

    Requires the rays outside ``basis`` to be a basis of the ambient space; the
    character m killing their coefficients must lie in the dual lattice.
    """
    fan = d.fan
    others = [i for i in range(len(fan.rays)) if i not in basis]
    if len(others) != fan.dimension:
        raise ValueError("the complement of the basis must consist of dim N rays")
    m = _solve_on_rays(fan, others, [-d.coefficients[i] for i in others])
    if m is None:
        raise ValueError("complementary rays are linearly dependent")
    if not fan.lattice.pairs_integrally(m):
        raise ArithmeticError("class is not an integral combination of the basis")
    shifted = d + div_of_character(fan, m)
    assert all(shifted.coefficients[i] == 0 for i in others)
    return tuple(shifted.coefficients[i] for i in basis)


@dataclass(frozen=True)
class RestrictedClass:
    star: StarFan
    divisor: TorusDivisor  # on star.fan
    shift: Vector  # the character used to move D off the exceptional ray


def restrict_to_exceptional(d: TorusDivisor, ray: int) -> RestrictedClass:
    """D|_E for E = V(ray): replace D by D + div(u(sigma)) for some sigma containing the ray,
    which has zero coefficient along E, and restrict the remaining adjacent components."""
    fan = d.fan
    cones = fan.cones_containing_ray(ray)
    if not cones:
        raise ValueError("ray lies in no maximal cone")
    local = {}
    for c in cones:
        u = local_character(d, c)
        if not fan.lattice.pairs_integrally(u):
            raise NotCartierError("divisor is not Cartier near the exceptional divisor")
        local[c] = u
    shift = local[cones[0]]
    moved = d + div_of_character(fan, shift)
    assert moved.coefficients[ray] == 0
    sf = star_fan(fan, ray)
    coeffs = [0] * len(sf.fan.rays)
    for j, k in sf.ray_map.items():
        coeffs[k] += moved.coefficients[j]
    return RestrictedClass(sf, TorusDivisor(sf.fan, tuple(coeffs)), shift)


def canonical_divisor(fan: Fan) -> TorusDivisor:
    return TorusDivisor(fan, (-1,) * len(fan.rays))


def pullback(d: TorusDivisor, source: Fan, linear_map) -> TorusDivisor:
    """Pull back a Cartier divisor along a fan morphism given by ``linear_map`` (x -> x @ M).

    Each maximal cone of ``source`` must map into a maximal cone of d.fan; the
    pulled-back divisor has coefficient -<u(tau), M rho> at each ray rho.
    """
    data = cartier_data(d)
    if data is None:
        raise NotCartierError("only Cartier divisors pull back")
    coeffs = []
    for r in source.rays:
        img = linear_map.row_apply(r)
        tau = next((c for c in d.fan.cones if _in_cone(d.fan, c, img)), None)
        if tau is None:
            raise ValueError("ray image lies in no cone of the target fan")
        val = -dot(data[tau], img)
        if val.denominator != 1:
            raise ArithmeticError("non-integral pullback coefficient")
        coeffs.append(int(val))
    return TorusDivisor(source, tuple(coeffs))


def _in_cone(fan: Fan, c: ConeIndex, v) -> bool:
    if all(x == 0 for x in v):
        return True
    return cone_coefficients(fan, c, v) is not None
