"""Full-rank lattices in Q^n with fractional generators, and simplicial cones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ..exact_arith import RationalMatrix, determinant, dot, hnf_basis, rank, rational_gcd, vec

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Lattice:
    """N = Z-span of the rows of ``basis`` (canonical triangular form)."""

    basis: RationalMatrix

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence]) -> "Lattice":
        return cls(hnf_basis(list(generators)))

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(RationalMatrix.identity(n))

    @classmethod
    def cyclic_quotient(cls, m: int, weights: Sequence[int]) -> "Lattice":
        """Z^n + Z (1/m)(w_1, ..., w_n), the lattice of the singularity 1/m(w)."""
        n = len(weights)
        gens = [[int(i == j) for j in range(n)] for i in range(n)]
        gens.append([Fraction(w, m) for w in weights])
        return cls.from_generators(gens)

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def det(self) -> Fraction:
        return abs(self.basis.det())

    @cached_property
    def _inverse(self) -> RationalMatrix:
        return self.basis.inverse()

    def coordinates(self, v: Sequence) -> Vector:
        """c with v = sum c_j b_j."""
        return self._inverse.row_apply(vec(v))

    def contains(self, v: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(v))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis.rows)

    def pairs_integrally(self, u: Sequence) -> bool:
        """u lies in the dual lattice: <u, b> is an integer for every basis vector b."""
        return all(dot(u, b).denominator == 1 for b in self.basis.rows)

    @cached_property
    def dual(self) -> "Lattice":
        return Lattice.from_generators(self._inverse.transpose().rows)

    def primitive(self, v: Sequence) -> Vector:
        """The primitive lattice vector on the ray through v."""
        v = vec(v)
        g = rational_gcd(self.coordinates(v))
        if g == 0:
            raise ValueError("the zero vector spans no ray")
        return tuple(x / g for x in v)

    def is_primitive(self, v: Sequence) -> bool:
        return self.contains(v) and self.primitive(v) == vec(v)

    def __str__(self):
        return "span{" + ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.basis.rows) + "}"


def lattice_index(sub: Lattice, sup: Lattice) -> Fraction:
    """[sup : sub] = |det sub| / |det sup|."""
    if not sup.contains_lattice(sub):
        raise ValueError("first lattice is not contained in the second")
    return sub.det / sup.det


@dataclass(frozen=True)
class Cone:
    generators: tuple[Vector, ...]

    @classmethod
    def of(cls, generators: Iterable[Sequence]) -> "Cone":
        return cls(tuple(vec(g) for g in generators))

    @property
    def dimension(self) -> int:
        return rank(self.generators)

    @property
    def simplicial(self) -> bool:
        return self.dimension == len(self.generators)

    def check_primitive(self, lattice: Lattice) -> None:
        for g in self.generators:
            if not lattice.is_primitive(g):
                raise ValueError(f"generator {g} is not primitive in {lattice}")


def cone_index(c: Cone, lattice: Lattice) -> Fraction:
    """Index of the sublattice spanned by the generators of a full simplicial cone."""
    if not c.simplicial or len(c.generators) != lattice.dimension:
        raise ValueError("cone must be simplicial and full-dimensional")
    return abs(determinant(c.generators)) / lattice.det


def is_smooth_cone(c: Cone, lattice: Lattice) -> bool:
    return cone_index(c, lattice) == 1
