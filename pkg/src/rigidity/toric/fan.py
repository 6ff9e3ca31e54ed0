"""Simplicial fans: validation, star subdivision, star fans and isomorphism search."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from ..exact_arith import RationalMatrix, dot, is_feasible, solve, unimodular_completion, vec
from .lattice import Cone, Lattice, Vector, cone_index

ConeIndex = tuple[int, ...]


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """Rays are primitive vectors of ``lattice``; maximal cones are sorted ray-index tuples."""

    lattice: Lattice
    rays: tuple[Vector, ...]
    cones: tuple[ConeIndex, ...]
    validated: bool = field(default=False, compare=False)

    @classmethod
    def build(cls, lattice: Lattice, rays: Iterable[Sequence], cones: Iterable[Iterable[int]],
              check: bool = True) -> "Fan":
        rays = tuple(vec(r) for r in rays)
        cones = tuple(sorted(tuple(sorted(c)) for c in cones))
        fan = cls(lattice, rays, cones)
        if check:
            fan.validate()
            fan = cls(lattice, rays, cones, True)
        return fan

    @classmethod
    def from_cones(cls, lattice: Lattice, cones: Iterable[Iterable[Sequence]], check: bool = True) -> "Fan":
        """Build from cones given by ray vectors; rays are made primitive and deduplicated."""
        rays: list[Vector] = []
        idx_cones = []
        for c in cones:
            idx = []
            for r in c:
                p = lattice.primitive(r)
                if p not in rays:
                    rays.append(p)
                idx.append(rays.index(p))
            idx_cones.append(idx)
        return cls.build(lattice, rays, idx_cones, check)

    @property
    def dimension(self) -> int:
        return self.lattice.dimension

    def cone(self, c: ConeIndex) -> Cone:
        return Cone(tuple(self.rays[i] for i in c))

    def ray_index(self, v: Sequence) -> int:
        return self.rays.index(self.lattice.primitive(v))

    def cones_containing_ray(self, i: int) -> list[ConeIndex]:
        return [c for c in self.cones if i in c]

    def adjacent_rays(self, i: int) -> list[int]:
        """Rays spanning a 2-dimensional cone together with ray i."""
        return sorted({j for c in self.cones_containing_ray(i) for j in c if j != i})

    # --- validation ----------------------------------------------------------

    def validate(self) -> None:
        n = self.dimension
        for r in self.rays:
            if not self.lattice.is_primitive(r):
                raise FanError(f"ray {r} is not primitive")
        for c in self.cones:
            if not self.cone(c).simplicial:
                raise FanError(f"cone {c} is not simplicial")
            if len(c) != n:
                raise FanError(f"maximal cone {c} is not full-dimensional")
        for a, b in combinations(self.cones, 2):
            if not meet_in_common_face(self.cone(a), self.cone(b)):
                raise FanError(f"cones {a} and {b} do not meet in a common face")

    def normalized_volume(self, c: ConeIndex) -> Fraction:
        return cone_index(self.cone(c), self.lattice)

    def smooth_cones(self) -> dict[ConeIndex, bool]:
        return {c: self.normalized_volume(c) == 1 for c in self.cones}

    def is_smooth(self) -> bool:
        return all(self.smooth_cones().values())

    def is_complete(self) -> bool:
        """Every codimension-one face of a maximal cone is shared by exactly two maximal cones."""
        facets: dict[tuple[int, ...], int] = {}
        for c in self.cones:
            for f in combinations(c, len(c) - 1):
                facets[f] = facets.get(f, 0) + 1
        return bool(self.cones) and all(v == 2 for v in facets.values())


def meet_in_common_face(a: Cone, b: Cone) -> bool:
    """Separation test: some m vanishes on the shared rays, is >= 1 on the rest of a and <= -1 on the rest of b."""
    shared = [g for g in a.generators if g in b.generators]
    cons = []
    for g in shared:
        cons.append((g, 0))
        cons.append((tuple(-x for x in g), 0))
    for g in a.generators:
        if g not in shared:
            cons.append((g, 1))
    for g in b.generators:
        if g not in shared:
            cons.append((tuple(-x for x in g), 1))
    if not cons:
        return True
    return is_feasible(cons)


# --- star subdivision ---------------------------------------------------------

def cone_coefficients(fan: Fan, c: ConeIndex, v: Sequence) -> Optional[tuple[Fraction, ...]]:
    """lambda with v = sum lambda_r r over the rays of c, or None if v is outside the cone."""
    gens = [fan.rays[i] for i in c]
    cols = [[g[k] for g in gens] for k in range(fan.dimension)]
    lam = solve(cols, vec(v))
    if lam is None or any(x < 0 for x in lam):
        return None
    return lam


@dataclass(frozen=True)
class Subdivision:
    before: Fan
    after: Fan
    ray: Vector
    replaced: tuple[ConeIndex, ...]
    created: dict = field(compare=False)  # replaced cone -> list of new cones (indices into after)
    coefficients: dict = field(compare=False)  # replaced cone -> lambda


def star_subdivision(fan: Fan, v: Sequence, check: bool = True) -> Subdivision:
    v = vec(v)
    if not fan.lattice.is_primitive(v):
        raise FanError(f"{v} is not a primitive lattice vector")
    if v in fan.rays:
        raise FanError(f"{v} is already a ray")
    rays = list(fan.rays) + [v]
    new_idx = len(rays) - 1
    kept, replaced, created, coeffs = [], [], {}, {}
    for c in fan.cones:
        lam = cone_coefficients(fan, c, v)
        if lam is None:
            kept.append(c)
            continue
        replaced.append(c)
        coeffs[c] = lam
        created[c] = [tuple(sorted([j for j in c if j != r] + [new_idx]))
                      for r, l in zip(c, lam) if l > 0]
    if not replaced:
        raise FanError(f"{v} lies outside the support of the fan")
    cones = kept + [nc for c in replaced for nc in created[c]]
    after = Fan.build(fan.lattice, rays, cones, check)
    return Subdivision(fan, after, v, tuple(replaced), created, coeffs)


def truncated_volume(fan: Fan, c: ConeIndex, h: Sequence) -> Fraction:
    """Normalized volume of {x in c : h(x) <= 1} times n!, for h positive on c."""
    gens = [fan.rays[i] for i in c]
    scale = Fraction(1)
    for g in gens:
        hv = dot(h, g)
        if hv <= 0:
            raise ValueError("functional is not positive on the cone")
        scale *= hv
    return fan.normalized_volume(c) / scale


def volume_conservation(sub: Subdivision) -> list[tuple[ConeIndex, Fraction, Fraction]]:
    """Per replaced cone: (cone, its volume, total volume of the cones replacing it).

    Volumes are truncated by the functional equal to 1 on the rays of the replaced
    cone, so the simplex conv(0, rays) is compared with its subdivision.
    """
    out = []
    for c in sub.replaced:
        gens = [sub.before.rays[i] for i in c]
        # h with h(g) = 1 for every generator g of c
        h = solve(gens, [1] * len(gens))
        old = truncated_volume(sub.before, c, h)
        new = sum((truncated_volume(sub.after, nc, h) for nc in sub.created[c]), Fraction(0))
        out.append((c, old, new))
    return out


# --- star fans ----------------------------------------------------------------

@dataclass(frozen=True)
class StarFan:
    fan: Fan
    ray: int
    ray_map: dict = field(compare=False)  # index in the ambient fan -> index in the star fan
    projection: RationalMatrix = field(compare=False)  # rows: coordinates of images of N's standard basis
    adjacent_primitive: bool = True


def quotient_projection(lattice: Lattice, v: Sequence) -> RationalMatrix:
    """Linear map Q^n -> Q^(n-1) realizing N -> N / Zv as Z^(n-1), for primitive v.

    Extends the coordinates of v to a unimodular matrix W (first row v), so the
    rows of W B form a basis of N starting with v; then drops the first coordinate.
    """
    c = lattice.coordinates(v)
    if any(x.denominator != 1 for x in c):
        raise FanError(f"{v} is not in the lattice")
    w = unimodular_completion([int(x) for x in c])
    new_basis = RationalMatrix.of(w) @ lattice.basis
    inv = new_basis.inverse()  # x -> x inv gives coordinates in the new basis
    # projection: x -> (x inv)[1:]
    return RationalMatrix.of([row[1:] for row in inv.rows])


def star_fan(fan: Fan, ray: int) -> StarFan:
    if not 0 <= ray < len(fan.rays):
        raise IndexError(f"ray index {ray} out of range")
    v = fan.rays[ray]
    proj = quotient_projection(fan.lattice, v)
    quotient = Lattice.standard(fan.dimension - 1)
    rays: list[Vector] = []
    ray_map: dict[int, int] = {}
    primitive = True
    for j in fan.adjacent_rays(ray):
        img = proj.row_apply(fan.rays[j])
        p = quotient.primitive(img)
        if p != img:
            primitive = False
        if p not in rays:
            rays.append(p)
        ray_map[j] = rays.index(p)
    cones = [[ray_map[j] for j in c if j != ray] for c in fan.cones_containing_ray(ray)]
    sf = Fan.build(quotient, rays, cones)
    return StarFan(sf, ray, ray_map, proj, primitive)


# --- isomorphism ----------------------------------------------------------------

@dataclass(frozen=True)
class FanIsomorphism:
    matrix: RationalMatrix  # acts on row vectors: x -> x @ matrix
    ray_map: tuple[int, ...]  # ray i of a -> ray ray_map[i] of b


def _unimodular_between(a: Lattice, b: Lattice, m: RationalMatrix) -> bool:
    # x -> x m maps N_a onto N_b iff B_a m B_b^-1 is integral with det +-1
    t = a.basis @ m @ b.basis.inverse()
    return t.is_integral() and abs(t.det()) == 1


def fan_isomorphic(a: Fan, b: Fan) -> Optional[FanIsomorphism]:
    """A lattice isomorphism carrying rays to rays and maximal cones to maximal cones, if one exists.

    The map is pinned down by the image of one maximal cone of a with an ordering
    of its rays; every maximal cone of b and every ordering is tried.
    """
    if a.dimension != b.dimension or len(a.rays) != len(b.rays) or len(a.cones) != len(b.cones):
        return None
    if not a.cones:
        return None
    base = a.cones[0]
    src = [a.rays[i] for i in base]
    src_inv = RationalMatrix.of(src).inverse()
    b_rays = {r: i for i, r in enumerate(b.rays)}
    b_cones = set(b.cones)
    for target in b.cones:
        for perm in permutations(target):
            dst = RationalMatrix.of([b.rays[i] for i in perm])
            m = src_inv @ dst  # rows: src @ m = dst
            if not _unimodular_between(a.lattice, b.lattice, m):
                continue
            images = []
            for r in a.rays:
                img = m.row_apply(r)
                if img not in b_rays:
                    break
                images.append(b_rays[img])
            else:
                if len(set(images)) != len(images):
                    continue
                if all(tuple(sorted(images[i] for i in c)) in b_cones for c in a.cones):
                    return FanIsomorphism(m, tuple(images))
    return None


# --- reference fans ------------------------------------------------------------

def single_cone_fan(lattice: Lattice, generators: Sequence[Sequence]) -> Fan:
    return Fan.from_cones(lattice, [generators])


def projective_space_fan(m: int) -> Fan:
    e = [[int(i == j) for j in range(m)] for i in range(m)]
    rays = e + [[-1] * m]
    cones = [[j for j in range(m + 1) if j != i] for i in range(m + 1)]
    return Fan.build(Lattice.standard(m), rays, cones)


def projective_bundle_fan(n: int) -> Fan:
    """P(O + O(2)) over P^(n-2), in Z^(n-1) = Z^(n-2) + Ze.

    Rays u_0 + 2e, u_1, ..., u_(n-2), e, -e with u_0 = -(u_1 + ... + u_(n-2));
    cones omit one of the first n-1 rays and add one of +-e.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    base = n - 2
    u = [[int(i == j) for j in range(base)] + [0] for i in range(base)]
    u0 = [-1] * base + [2]
    e = [0] * base + [1]
    me = [0] * base + [-1]
    rays = [u0] + u + [e, me]
    first = list(range(n - 1))
    cones = []
    for omit in first:
        rest = [j for j in first if j != omit]
        cones.append(rest + [n - 1])
        cones.append(rest + [n])
    return Fan.build(Lattice.standard(n - 1), rays, cones)


def hirzebruch_fan(a: int) -> Fan:
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Fan.build(Lattice.standard(2), rays, cones)


def p1_times_p1_fan() -> Fan:
    return hirzebruch_fan(0)
