"""Do two divisor polyhedra contain the same dual-lattice points?

The certificate is the divisibility argument: for an extra inequality
<w, x> >= c, the values <w, x> on the dual lattice form g Z; if the least
element of g Z above the LP minimum over the coarse polyhedron is already
>= c, no lattice point of the coarse polyhedron violates the inequality.
A bounded brute-force search over a box is run alongside as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..exact_arith import (
    INFEASIBLE,
    OPTIMAL,
    LinearProgram,
    common_denominator,
    dot,
    lp_minimize,
    rational_gcd,
)
from .divisors import DivisorPolyhedron
from .lattice import Lattice

DEFAULT_BRUTE_RADIUS = 6


@dataclass(frozen=True)
class InequalityCheck:
    w: tuple[int, ...]
    c: Fraction
    g: Fraction  # generator of <w, N^dual>
    lp_minimum: Optional[Fraction]  # None when unbounded below
    lp_vertex: Optional[tuple[Fraction, ...]]
    rounded: Optional[Fraction]  # least element of gZ that is >= lp_minimum
    certified: bool


@dataclass(frozen=True)
class BruteForceResult:
    radius: int
    box: tuple[tuple[int, int], ...]
    coarse_points: int
    witness: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class LatticePointResult:
    equal: bool
    certified: bool
    witness: Optional[tuple[Fraction, ...]]
    checks: tuple[InequalityCheck, ...] = field(default=())
    brute: Optional[BruteForceResult] = None

    @property
    def oracle_agrees(self) -> bool:
        """False when the LP certificate claims equality but the box search found a witness."""
        return not (self.certified and self.brute is not None and self.brute.witness is not None)


def _ceil_to_multiple(x: Fraction, g: Fraction) -> Fraction:
    return g * math.ceil(x / g)


def _check_inequality(w, c, coarse: DivisorPolyhedron, dual: Lattice) -> InequalityCheck:
    g = rational_gcd(dot(w, b) for b in dual.basis.rows)
    res = lp_minimize(LinearProgram.of(coarse.inequalities, w))
    if res.status == INFEASIBLE:
        raise ValueError("coarse polyhedron is empty: malformed divisor")
    if res.status != OPTIMAL:
        return InequalityCheck(tuple(w), c, g, None, None, None, False)
    if g == 0:
        rounded = Fraction(0)
    else:
        rounded = _ceil_to_multiple(res.minimum, g)
    return InequalityCheck(tuple(w), c, g, res.minimum, res.point, rounded, rounded >= c)


def _coordinate_bounds(coarse: DivisorPolyhedron, radius: int) -> list[tuple[int, int]]:
    n = coarse.dimension
    bounds = []
    for i in range(n):
        lo, hi = -radius, radius
        e = [int(j == i) for j in range(n)]
        r = lp_minimize(LinearProgram.of(coarse.inequalities, e))
        if r.status == OPTIMAL:
            lo = max(lo, math.ceil(r.minimum))
        r = lp_minimize(LinearProgram.of(coarse.inequalities, [-x for x in e]))
        if r.status == OPTIMAL:
            hi = min(hi, math.floor(-r.minimum))
        bounds.append((lo, hi))
    return bounds


def _integer_rows(rows) -> tuple[np.ndarray, int]:
    d = common_denominator(x for r in rows for x in r)
    return np.array([[int(x * d) for x in r] for r in rows], dtype=np.int64), d


def brute_force_witness(fine: DivisorPolyhedron, coarse: DivisorPolyhedron, lattice: Lattice,
                        radius: int) -> BruteForceResult:
    """Search dual-lattice points of the coarse polyhedron in [-R, R]^n that the fine one misses.

    The dual lattice is assumed to sit inside Z^n (true whenever N contains Z^n).
    """
    if radius < 1:
        raise ValueError("brute-force radius must be >= 1")
    n = coarse.dimension
    if not all(lattice.contains([int(i == j) for j in range(n)]) for i in range(n)):
        raise ValueError("box search needs Z^n inside N, so that the dual lattice is integral")
    bounds = _coordinate_bounds(coarse, radius)
    if any(lo > hi for lo, hi in bounds):
        return BruteForceResult(radius, tuple(bounds), 0, None)
    basis, dn = _integer_rows(lattice.basis.rows)
    # w is integral, so on integer points <w, x> >= c is <w, x> >= ceil(c)
    cw = np.array([w for w, _ in coarse.inequalities], dtype=np.int64)
    cc = np.array([math.ceil(c) for _, c in coarse.inequalities], dtype=np.int64)
    fw = np.array([w for w, _ in fine.inequalities], dtype=np.int64)
    fc = np.array([math.ceil(c) for _, c in fine.inequalities], dtype=np.int64)
    first = np.arange(bounds[0][0], bounds[0][1] + 1, dtype=np.int64)
    rest = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in bounds[1:]]
    if rest:
        tail = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, n - 1)
    else:
        tail = np.zeros((1, 0), dtype=np.int64)
    count = 0
    witness = None
    for x0 in first:
        pts = np.concatenate([np.full((tail.shape[0], 1), x0, dtype=np.int64), tail], axis=1)
        member = ((pts @ basis.T) % dn == 0).all(axis=1)
        in_coarse = ((pts @ cw.T) >= cc).all(axis=1)
        in_fine = ((pts @ fw.T) >= fc).all(axis=1)
        sel = member & in_coarse
        count += int(sel.sum())
        bad = np.nonzero(sel & ~in_fine)[0]
        if witness is None and bad.size:
            # smallest witness in the order (sum of |x|, x)
            cands = [tuple(int(v) for v in pts[i]) for i in bad]
            witness = min(cands, key=lambda x: (sum(abs(v) for v in x), x))
    return BruteForceResult(radius, tuple(bounds), count, witness)


def lattice_points_equal(fine: DivisorPolyhedron, coarse: DivisorPolyhedron, lattice: Lattice,
                         brute_radius: int = DEFAULT_BRUTE_RADIUS,
                         brute: bool = True) -> LatticePointResult:
    """Compare the dual-lattice points of ``fine`` (a subset of ``coarse``).

    ``lattice`` is N; its dual supplies both the divisibility and the box search.
    """
    dual = lattice.dual
    checks = []
    witness = None
    for w, c in fine.extra_over(coarse):
        chk = _check_inequality(w, c, coarse, dual)
        checks.append(chk)
        if (witness is None and not chk.certified and chk.lp_vertex is not None
                and chk.lp_minimum < c and dual.contains(chk.lp_vertex)):
            witness = chk.lp_vertex
    certified = all(k.certified for k in checks)
    oracle = brute_force_witness(fine, coarse, lattice, brute_radius) if brute else None
    if witness is None and oracle is not None and oracle.witness is not None:
        witness = tuple(Fraction(x) for x in oracle.witness)
    equal = certified and witness is None
    return LatticePointResult(equal, certified, witness, tuple(checks), oracle)
