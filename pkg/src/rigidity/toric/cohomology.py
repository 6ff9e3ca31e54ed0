"""Line bundle cohomology on projective space."""

from __future__ import annotations

from math import comb


def hi_projspace(i: int, m: int, d: int) -> int:
    """dim H^i(P^m, O(d)) by Bott's formula."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if i == 0:
        return comb(m + d, m) if d >= 0 else 0
    if i == m:
        return comb(-d - 1, m) if d <= -m - 1 else 0
    return 0


def h1_projspace(m: int, d: int) -> int:
    """dim H^1(P^m, O(d)); nonzero only for m = 1 and d <= -2."""
    return hi_projspace(1, m, d)


def cech_counts_p1(d: int) -> tuple[int, int]:
    """(h^0, h^1) of O(d) on P^1 from the two-chart Cech complex.

    With O(d) trivialized on U_0 = {x_0 != 0} and U_1 = {x_1 != 0}, sections
    over U_0 and U_1 are the Laurent monomials x^k with k >= 0, resp. k <= d,
    and those over U_0 n U_1 are all x^k.  H^0 is the intersection and H^1
    the cokernel of the difference map, both counted monomial by monomial.
    """
    lo = min(0, d) - 2
    hi = max(0, d) + 2
    h0 = sum(1 for k in range(lo, hi + 1) if k >= 0 and k <= d)
    h1 = sum(1 for k in range(lo, hi + 1) if not (k >= 0 or k <= d))
    return h0, h1
