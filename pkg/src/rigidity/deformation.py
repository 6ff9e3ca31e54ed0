"""Deformation character, singularities and the per-n rigidity certificate.

Y_n = F^(n-1) x Q with the diagonal G-action and X_n = Y_n / G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Optional, Sequence

import numpy as np

from . import curve_actions as ca
from .group_rep import (
    Character,
    GroupElement,
    decompose_character,
    elements,
    generated_subgroup,
    inner_product,
    irreducible,
    iter_nontrivial,
    sylow_subgroups,
)

MIN_N = 3


def _require_n(n: int, minimum: int = MIN_N) -> None:
    if not isinstance(n, int) or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n!r}")


# --- the deformation character ------------------------------------------------

FORM_KEYS = ("omega_F", "omega_F2", "omega_Q", "omega_Q2")


def form_table(overrides: Optional[Mapping[str, Character]] = None) -> dict[str, Character]:
    forms = {
        "omega_F": ca.form_characters(ca.FERMAT, 1),
        "omega_F2": ca.form_characters(ca.FERMAT, 2),
        "omega_Q": ca.form_characters(ca.KLEIN, 1),
        "omega_Q2": ca.form_characters(ca.KLEIN, 2),
    }
    for key, chi in (overrides or {}).items():
        if key not in forms:
            raise KeyError(f"unknown form character {key!r}")
        forms[key] = chi
    return forms


def kunneth_character(n: int, overrides: Optional[Mapping[str, Character]] = None) -> Character:
    """Character of H^1(Y_n, Theta) assembled factor by factor.

    On each F factor H^1(Theta_F) is dual to H^0(omega_F^2) and, since
    dz ^ dzbar is invariant, carries the character of omega_F^2; the mixed
    terms H^0(Theta) x H^1(O) pair a tangent field with a (0,1)-class.
    """
    _require_n(n, 2)
    f = form_table(overrides)
    per_f = f["omega_F2"] + f["omega_F"] * f["omega_F"] * (n - 2) + f["omega_F"] * f["omega_Q"]
    return per_f * (n - 1) + f["omega_Q2"]


def closed_form(n: int) -> Character:
    return irreducible("eps") * ((n - 1) ** 2) + irreducible("etabar") * n + irreducible("eta")


def chi_psi(n: int) -> Character:
    _require_n(n)
    chi = kunneth_character(n)
    if chi != closed_form(n):
        raise ArithmeticError(f"Kunneth assembly differs from the closed form at n={n}")
    return chi


def trivial_multiplicity(chi: Character) -> int:
    m = inner_product(chi, irreducible("triv"))
    if m.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {m}")
    return int(m)


def is_rigid_action(n: int) -> bool:
    return trivial_multiplicity(chi_psi(n)) == 0


# --- quotient singularities ----------------------------------------------------

@dataclass(frozen=True)
class QuotientSingularity:
    """Cyclic quotient singularity 1/m(w_1, ..., w_n) occurring ``multiplicity`` times."""

    order: int
    weights: tuple[int, ...]
    multiplicity: int = 1

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be at least 2")
        if any(not 0 <= w < self.order for w in self.weights):
            raise ValueError("weights must lie in [0, m)")
        g = self.order
        for w in self.weights:
            g = gcd(g, w)
        if g != 1:
            raise ValueError(f"weights {self.weights} do not generate Z/{self.order}")

    @property
    def dimension(self) -> int:
        return len(self.weights)

    @property
    def isolated(self) -> bool:
        return all(gcd(w, self.order) == 1 for w in self.weights)

    @property
    def label(self) -> str:
        return f"1/{self.order}({','.join(map(str, self.weights))})"

    def same_type(self, other: "QuotientSingularity") -> bool:
        return canonical_weights(self.order, self.weights) == canonical_weights(other.order, other.weights)


def canonical_weights(m: int, weights: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest sorted weight tuple over generator changes g -> g^k."""
    best = None
    for k in range(1, m):
        if gcd(k, m) != 1:
            continue
        cand = tuple(sorted((k * w) % m for w in weights))
        if best is None or cand < best:
            best = cand
    return best


def ages(s: QuotientSingularity) -> list[Fraction]:
    return [sum((Fraction((k * w) % s.order, s.order) for w in s.weights), Fraction(0))
            for k in range(1, s.order)]


@dataclass(frozen=True)
class ReidTaiVerdict:
    canonical: bool
    ages: tuple[Fraction, ...]


def reid_tai_canonical(s: QuotientSingularity) -> ReidTaiVerdict:
    a = tuple(ages(s))
    return ReidTaiVerdict(all(x >= 1 for x in a), a)


class _ActionTables:
    """Index tables for G acting on the points of each curve with nontrivial stabilizer."""

    def __init__(self, curve: str):
        self.curve = curve
        self.points = ca.special_points(curve)
        index = {p: i for i, p in enumerate(self.points)}
        self.index = index
        self.table = np.array(
            [[index[ca.act(curve, g, p)] for p in self.points] for g in elements()], dtype=np.int64)

    def fixed(self, g: GroupElement) -> list[int]:
        return [self.index[p] for p in ca.fixed_points(self.curve, g)]


@lru_cache(maxsize=None)
def _tables(curve: str) -> _ActionTables:
    return _ActionTables(curve)


@lru_cache(maxsize=None)
def _local_weight(curve: str, point_index: int, g: GroupElement, m: int) -> int:
    p = _tables(curve).points[point_index]
    k = ca.local_eigenvalue(curve, p, g).root_exponent()
    # eigenvalue u^k with u = exp(2 pi i / 21) is exp(2 pi i w / m) for w = k m / 21
    if (k * m) % 21:
        raise ArithmeticError("local eigenvalue order does not divide the stabilizer order")
    return (k * m // 21) % m


@dataclass(frozen=True)
class SingularPoint:
    """One G-orbit of Y_n with nontrivial stabilizer, given by a representative."""

    factors: tuple[int, ...]
    stabilizer_generator: GroupElement
    stabilizer_order: int
    weights: tuple[int, ...]
    orbit_length: int


def _factor_curves(n: int) -> list[str]:
    return [ca.FERMAT] * (n - 1) + [ca.KLEIN]


def singular_orbits(n: int) -> list[SingularPoint]:
    """All G-orbits in F^(n-1) x Q with nontrivial stabilizer.

    Every nontrivial stabilizer contains a subgroup of prime order, which is
    conjugate to one in {Sylow 7, first Sylow 3}; so each such orbit meets the
    fixed locus of one of these two subgroups.
    """
    _require_n(n, 2)
    curves = _factor_curves(n)
    tabs = [_tables(c) for c in curves]
    width = max(len(t.points) for t in tabs)
    place = np.array([width ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    group = elements()
    reps: dict[int, np.ndarray] = {}
    for sub in (sylow_subgroups(7)[0], sylow_subgroups(3)[0]):
        h = min((g for g in sub if not g.is_identity()), key=GroupElement.generator_key)
        fixed = [t.fixed(h) for t in tabs]
        if any(not f for f in fixed):
            continue
        grids = np.meshgrid(*[np.array(f, dtype=np.int64) for f in fixed], indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)  # (N, n)
        images = np.stack([tabs[i].table[:, pts[:, i]] for i in range(n)], axis=2)  # (21, N, n)
        keys = (images @ place).min(axis=0)
        for key, row in zip(keys.tolist(), pts):
            reps.setdefault(key, row)
    if not reps:
        return []
    order = sorted(reps)
    pts = np.stack([reps[k] for k in order])
    images = np.stack([tabs[i].table[:, pts[:, i]] for i in range(n)], axis=2)
    stab_mask = (images == pts[None, :, :]).all(axis=2)  # (21, M)
    result = []
    for j in range(len(order)):
        stab = frozenset(g for g, keep in zip(group, stab_mask[:, j]) if keep)
        gen = _cyclic_generator(stab)
        m = len(stab)
        y = tuple(int(x) for x in pts[j])
        w = tuple(_local_weight(curves[i], y[i], gen, m) for i in range(n))
        result.append(SingularPoint(y, gen, m, w, 21 // m))
    return result


@lru_cache(maxsize=None)
def _cyclic_generator(stab: frozenset) -> GroupElement:
    gens = [x for x in stab if not x.is_identity() and generated_subgroup([x]) == stab]
    if not gens:
        raise ArithmeticError("stabilizer is not cyclic")
    return min(gens, key=GroupElement.generator_key)


def singular_locus(n: int) -> list[QuotientSingularity]:
    """Singularities of X_n grouped by type, with multiplicities."""
    counts: dict[tuple[int, tuple[int, ...]], int] = {}
    for p in singular_orbits(n):
        key = (p.stabilizer_order, canonical_weights(p.stabilizer_order, p.weights))
        counts[key] = counts.get(key, 0) + 1
    return [QuotientSingularity(m, w, c) for (m, w), c in sorted(counts.items())]


def check_free_in_codim_one(n: int) -> bool:
    """Every nontrivial element has a finite fixed locus on every factor."""
    _require_n(n)
    for g in iter_nontrivial():
        for curve in set(_factor_curves(n)):
            try:
                ca.fixed_points(curve, g)
            except ca.FixedLocusError:
                return False
    return True


def fixed_point_count(n: int, g: GroupElement) -> int:
    total = 1
    for curve in _factor_curves(n):
        total *= len(ca.fixed_points(curve, g))
    return total


# --- Kodaira dimension ---------------------------------------------------------

def curve_kodaira(genus: int) -> Optional[int]:
    """None stands for minus infinity."""
    if genus < 0:
        raise ValueError("negative genus")
    return None if genus == 0 else (0 if genus == 1 else 1)


def kodaira_of_genera(genera: Sequence[int]) -> Optional[int]:
    total = 0
    for g in genera:
        k = curve_kodaira(g)
        if k is None:
            return None
        total += k
    return total


def kodaira_dimension(n: int) -> Optional[int]:
    _require_n(n)
    return kodaira_of_genera([ca.curve_genus(c) for c in _factor_curves(n)])


# --- certificate ---------------------------------------------------------------

@dataclass(frozen=True)
class SingularityEntry:
    singularity: QuotientSingularity
    verdict: ReidTaiVerdict


@dataclass(frozen=True)
class RigidityCertificate:
    n: int
    chi_psi_multiplicities: tuple[int, ...]
    closed_form_match: bool
    trivial_multiplicity: int
    singularities: tuple[SingularityEntry, ...]
    resolution_reports: tuple = field(default=())
    free_in_codim_one: bool = True
    kodaira: Optional[int] = None

    @property
    def infinitesimally_rigid(self) -> bool:
        return (self.trivial_multiplicity == 0
                and all(r.passed for r in self.resolution_reports)
                and self.free_in_codim_one)


def assemble_certificate(n: int, form_overrides: Optional[Mapping[str, Character]] = None,
                         resolution=None) -> RigidityCertificate:
    """Run every sub-check for X_n; failures land in the certificate, not in exceptions.

    ``resolution`` maps a QuotientSingularity to a report with a ``passed``
    attribute; it defaults to the toric resolution report.
    """
    _require_n(n)
    if resolution is None:
        from .toric.resolution import resolution_report as resolution
    chi = kunneth_character(n, form_overrides)
    match = chi == closed_form(n)
    sings = singular_locus(n)
    entries = tuple(SingularityEntry(s, reid_tai_canonical(s)) for s in sings)
    reports = tuple(resolution(s) for s in sings)
    return RigidityCertificate(
        n=n,
        chi_psi_multiplicities=decompose_character(chi),
        closed_form_match=match,
        trivial_multiplicity=trivial_multiplicity(chi),
        singularities=entries,
        resolution_reports=reports,
        free_in_codim_one=check_free_in_codim_one(n),
        kodaira=kodaira_dimension(n),
    )
