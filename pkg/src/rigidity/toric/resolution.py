"""Toric resolutions of cyclic quotient singularities and their verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..exact_arith import RationalMatrix, vec
from .cohomology import h1_projspace, hi_projspace
from .divisors import (
    TorusDivisor,
    canonical_divisor,
    cartier_data,
    class_in_basis,
    demazure_vanishing,
    divisor_polyhedron,
    pullback,
    restrict_to_exceptional,
)
from .fan import (
    Fan,
    FanError,
    FanIsomorphism,
    Subdivision,
    fan_isomorphic,
    hirzebruch_fan,
    projective_bundle_fan,
    projective_space_fan,
    single_cone_fan,
    star_fan,
    star_subdivision,
    volume_conservation,
)
from .lattice import Lattice
from .lattice_points import DEFAULT_BRUTE_RADIUS, LatticePointResult, lattice_points_equal

SMOOTHNESS = "smoothness"
PUSHFORWARD = "pushforward"
R1 = "r1"
ALL_CHECKS = (SMOOTHNESS, PUSHFORWARD, R1)

PROJECTIVE_SPACE = "projective_space"
PROJECTIVE_BUNDLE = "projective_bundle"
UNIDENTIFIED = "unidentified"


class ResolutionInputError(ValueError):
    """The requested resolution cannot be built or is outside what the checks support."""


@dataclass(frozen=True)
class Resolution:
    label: str
    initial: Fan
    steps: tuple[Subdivision, ...]
    original_rays: tuple[int, ...]  # indices in the final fan of the rays of the initial fan
    exceptional_rays: tuple[int, ...]

    @property
    def fan(self) -> Fan:
        return self.steps[-1].after if self.steps else self.initial

    @property
    def lattice(self) -> Lattice:
        return self.initial.lattice


def _standard_basis(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def resolve_by_subdivision(label: str, lattice: Lattice, cones: Sequence[Sequence[Sequence]],
                           rays: Sequence[Sequence]) -> Resolution:
    initial = Fan.from_cones(lattice, cones)
    fan = initial
    steps = []
    for r in rays:
        try:
            sub = star_subdivision(fan, r)
        except FanError as exc:
            raise ResolutionInputError(str(exc)) from exc
        steps.append(sub)
        fan = sub.after
    original = []
    for r in initial.rays:
        if r not in fan.rays:
            raise ResolutionInputError(f"ray {r} of the singular cone does not survive")
        original.append(fan.rays.index(r))
    exceptional = tuple(fan.rays.index(s.ray) for s in steps)
    return Resolution(label, initial, tuple(steps), tuple(original), exceptional)


def build_resolution(order: int, weights: Sequence[int]) -> Resolution:
    """Preset resolutions: toric blowup of 1/3(1,...,1), Danilov's resolution of 1/3(1,...,1,2), A_1."""
    from ..deformation import QuotientSingularity, canonical_weights

    sing = QuotientSingularity(order, tuple(weights))
    w = canonical_weights(order, sing.weights)
    n = len(w)
    label = f"1/{order}({','.join(map(str, w))})"
    lattice = Lattice.cyclic_quotient(order, w)
    cone = [_standard_basis(n)]
    v = [Fraction(x, order) for x in w]
    if order == 3 and all(x == 1 for x in w):
        return resolve_by_subdivision(label, lattice, cone, [v])
    if order == 3 and n >= 2 and all(x == 1 for x in w[:-1]) and w[-1] == 2:
        v2 = [Fraction(2, 3)] * (n - 1) + [Fraction(1, 3)]
        assert v2 == [2 * a - int(i == n - 1) for i, a in enumerate(v)]
        return resolve_by_subdivision(label, lattice, cone, [v, v2])
    if order == 2 and w == (1, 1):
        return resolve_by_subdivision(label, lattice, cone, [v])
    raise ResolutionInputError(f"no preset resolution for {label}; supply a fan script")


def blowup_of_smooth_point(n: int = 2) -> Resolution:
    return resolve_by_subdivision(
        f"blowup of C^{n} at the origin", Lattice.standard(n), [_standard_basis(n)], [[1] * n])


# --- fan scripts ---------------------------------------------------------------

def parse_fan_script(text: str) -> Resolution:
    """Parse the text format: ``dim n``, ``gen``, ``cone`` and ``subdivide`` lines."""
    dim = None
    gens: list[list[Fraction]] = []
    cones: list[list[list[Fraction]]] = []
    subdivide: list[list[Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            values = [Fraction(x) for x in rest]
        except (ValueError, ZeroDivisionError) as exc:
            raise ResolutionInputError(f"line {lineno}: bad rational: {exc}") from exc
        if head == "dim":
            if dim is not None or len(values) != 1 or values[0].denominator != 1 or values[0] < 1:
                raise ResolutionInputError(f"line {lineno}: expected 'dim n' once")
            dim = int(values[0])
            continue
        if dim is None:
            raise ResolutionInputError(f"line {lineno}: 'dim' must come first")
        if head == "gen":
            if len(values) != dim:
                raise ResolutionInputError(f"line {lineno}: gen needs {dim} entries")
            gens.append(values)
        elif head == "cone":
            if not values or len(values) % dim:
                raise ResolutionInputError(f"line {lineno}: cone needs a multiple of {dim} entries")
            cones.append([values[i:i + dim] for i in range(0, len(values), dim)])
        elif head == "subdivide":
            if len(values) != dim:
                raise ResolutionInputError(f"line {lineno}: subdivide needs {dim} entries")
            subdivide.append(values)
        else:
            raise ResolutionInputError(f"line {lineno}: unknown keyword {head!r}")
    if dim is None or not cones:
        raise ResolutionInputError("a fan script needs 'dim' and at least one 'cone'")
    lattice = Lattice.from_generators(_standard_basis(dim) + gens)
    try:
        return resolve_by_subdivision("fan script", lattice, cones, subdivide)
    except FanError as exc:
        raise ResolutionInputError(str(exc)) from exc


def fan_script(res: Resolution) -> str:
    """Inverse of parse_fan_script for a resolution built from a single cone."""
    n = res.initial.dimension

    def fmt(v):
        return " ".join(str(x) for x in v)

    lines = [f"dim {n}"]
    std = [vec(r) for r in _standard_basis(n)]
    for b in res.lattice.basis.rows:
        if b not in std:
            lines.append("gen " + fmt(b))
    for c in res.initial.cones:
        lines.append("cone " + " ".join(fmt(res.initial.rays[i]) for i in c))
    for s in res.steps:
        lines.append("subdivide " + fmt(s.ray))
    return "\n".join(lines) + "\n"


# --- exceptional divisors -------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalReport:
    ray: tuple[Fraction, ...]
    geometry: str
    star_dimension: int
    isomorphism: Optional[FanIsomorphism] = field(default=None, compare=False)
    hirzebruch: Optional[int] = None
    # class of O_E(E) in the basis of the identified geometry:
    # (degree,) on projective space; (H, S) on the bundle with H = p^*O(1), S the section of e
    self_restriction: Optional[tuple[int, ...]] = None
    canonical_class: Optional[tuple[int, ...]] = None
    expected_canonical: Optional[tuple[int, ...]] = None
    pullback_of_hyperplane: Optional[tuple[int, ...]] = None
    serre_dual_degree: Optional[int] = None
    h1: Optional[int] = None
    restriction_coefficients: tuple[int, ...] = ()

    @property
    def vanishing(self) -> bool:
        if self.geometry == PROJECTIVE_SPACE:
            return self.h1 == 0
        if self.geometry == PROJECTIVE_BUNDLE:
            return (self.h1 == 0 and self.canonical_class == self.expected_canonical
                    and self.pullback_of_hyperplane == (1, 0))
        return False


def _identify(star: Fan) -> tuple[str, Optional[FanIsomorphism]]:
    d = star.dimension
    if d < 1:
        return UNIDENTIFIED, None
    iso = fan_isomorphic(star, projective_space_fan(d))
    if iso is not None:
        return PROJECTIVE_SPACE, iso
    if d >= 2:
        iso = fan_isomorphic(star, projective_bundle_fan(d + 1))
        if iso is not None:
            return PROJECTIVE_BUNDLE, iso
    return UNIDENTIFIED, None


def exceptional_report(fan: Fan, ray: int) -> ExceptionalReport:
    star = star_fan(fan, ray)
    sf = star.fan
    d = sf.dimension
    geometry, iso = _identify(sf)
    e = TorusDivisor.prime(fan, ray)
    restricted = restrict_to_exceptional(e, ray)
    coeffs = restricted.divisor.coefficients
    common = dict(ray=fan.rays[ray], geometry=geometry, star_dimension=d, isomorphism=iso,
                  restriction_coefficients=coeffs)
    if d == 2:
        common["hirzebruch"] = next(
            (a for a in range(0, 6) if fan_isomorphic(sf, hirzebruch_fan(a)) is not None), None)
    if geometry == PROJECTIVE_SPACE:
        (deg,) = class_in_basis(restricted.divisor, [0])
        return ExceptionalReport(**common, self_restriction=(deg,), h1=h1_projspace(d, deg))
    if geometry == PROJECTIVE_BUNDLE:
        n = d + 1
        inv = {j: i for i, j in enumerate(iso.ray_map)}
        h_ray, s_ray = inv[1], inv[n - 1]  # preimages of u_1 and of e
        basis = [h_ray, s_ray]
        self_cls = class_in_basis(restricted.divisor, basis)
        k_cls = class_in_basis(canonical_divisor(sf), basis)
        # p_r: drop the fiber coordinate after the isomorphism onto the reference fan
        proj = RationalMatrix.of([[int(i == j) for j in range(d - 1)] for i in range(d)])
        base = projective_space_fan(d - 1)
        hyper = TorusDivisor.prime(base, 0)
        pulled = pullback(hyper, sf, iso.matrix @ proj)
        pulled_cls = class_in_basis(pulled, basis)
        serre = (k_cls[0] - self_cls[0], k_cls[1] - self_cls[1])
        # K_E - E|_E must be pulled back from the base for the projection formula to apply
        h = hi_projspace(d - 1, d - 1, serre[0]) if serre[1] == 0 else None
        return ExceptionalReport(
            **common, self_restriction=self_cls, canonical_class=k_cls,
            expected_canonical=(-(n + 1), -2), pullback_of_hyperplane=pulled_cls,
            serre_dual_degree=serre[0] if serre[1] == 0 else None, h1=h)
    return ExceptionalReport(**common)


# --- the report ------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorCheck:
    ray: int
    lattice_points: LatticePointResult
    cartier: Optional[dict]
    demazure: Optional[bool]


@dataclass(frozen=True)
class ResolutionReport:
    label: str
    dimension: int
    resolution: Resolution = field(compare=False)
    checks_requested: tuple[str, ...]
    step_indices: tuple[dict, ...]  # per subdivision step: cone -> index in N
    volumes_conserved: bool
    all_cones_smooth: bool
    exceptional: tuple[ExceptionalReport, ...]
    divisors: tuple[DivisorCheck, ...]
    pushforward_reflexive: Optional[bool]
    r1_vanishing: Optional[bool]
    exceptional_identified: bool

    @property
    def passed(self) -> bool:
        flags = {SMOOTHNESS: self.all_cones_smooth and self.volumes_conserved,
                 PUSHFORWARD: self.pushforward_reflexive,
                 R1: self.r1_vanishing}
        return all(bool(flags[c]) for c in self.checks_requested) and self.exceptional_identified


def resolution_report_for(res: Resolution, checks: Sequence[str] = ALL_CHECKS,
                          brute_radius: int = DEFAULT_BRUTE_RADIUS) -> ResolutionReport:
    checks = tuple(c for c in ALL_CHECKS if c in checks)
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ResolutionInputError(f"unknown checks {sorted(unknown)}")
    fan = res.fan
    step_indices = tuple({c: s.after.normalized_volume(c) for c in s.after.cones} for s in res.steps)
    volumes = all(old == new for s in res.steps for _, old, new in volume_conservation(s))
    smooth = fan.is_smooth()
    exceptional = tuple(exceptional_report(fan, r) for r in res.exceptional_rays)
    identified = all(x.geometry != UNIDENTIFIED for x in exceptional)

    divisors = []
    for k, i in enumerate(res.original_rays):
        d_fine = TorusDivisor.prime(fan, i)
        d_coarse = TorusDivisor.prime(res.initial, k)
        lp = None
        if PUSHFORWARD in checks:
            lp = lattice_points_equal(divisor_polyhedron(d_fine), divisor_polyhedron(d_coarse),
                                      res.lattice, brute_radius)
        cart = cartier_data(d_fine)
        dem = demazure_vanishing(d_fine) if cart is not None else None
        divisors.append(DivisorCheck(i, lp, cart, dem))

    push = all(d.lattice_points.equal for d in divisors) if PUSHFORWARD in checks else None
    r1 = None
    if R1 in checks:
        r1 = (identified and all(d.demazure is True for d in divisors)
              and all(x.vanishing for x in exceptional))
    return ResolutionReport(res.label, fan.dimension, res, checks, step_indices, volumes, smooth,
                            exceptional, tuple(divisors), push, r1, identified)


def resolution_report(sing, checks: Sequence[str] = ALL_CHECKS,
                      brute_radius: int = DEFAULT_BRUTE_RADIUS) -> ResolutionReport:
    """Report for a QuotientSingularity (by preset) or an already built Resolution."""
    res = sing if isinstance(sing, Resolution) else build_resolution(sing.order, sing.weights)
    return resolution_report_for(res, checks, brute_radius)
