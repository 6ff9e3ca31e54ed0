"""Exact two-phase simplex over the rationals with Bland's pivoting rule.

Problems are stated as ``minimize <objective, x>`` subject to ``<w, x> >= c``
for free variables ``x``.  Everything stays in ``Fraction`` arithmetic, so the
optimum is exact; Bland's rule makes the pivot sequence reproducible and rules
out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Constraint:
    w: tuple[Fraction, ...]
    c: Fraction

    def holds(self, x: Sequence) -> bool:
        return sum((a * b for a, b in zip(self.w, x)), Fraction(0)) >= self.c


@dataclass(frozen=True)
class LinearProgram:
    constraints: tuple[Constraint, ...]
    objective: tuple[Fraction, ...]

    @classmethod
    def of(cls, constraints, objective) -> "LinearProgram":
        cons = tuple(Constraint(tuple(Fraction(x) for x in w), Fraction(c)) for w, c in constraints)
        obj = tuple(Fraction(x) for x in objective)
        if any(len(k.w) != len(obj) for k in cons):
            raise ValueError("constraint vectors must have the ambient dimension")
        return cls(cons, obj)

    @property
    def dimension(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    status: str
    minimum: Fraction | None = None
    point: tuple[Fraction, ...] | None = field(default=None, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense tableau for  min c.y  s.t.  A y = b, y >= 0, b >= 0."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.a = a
        self.b = b
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        a, b = self.a, self.b
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        b[r] /= pv
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] -= f * b[r]
        self.basis[r] = col

    def reduced_costs(self, cost: list[Fraction], allowed: int) -> list[Fraction]:
        cb = [cost[j] for j in self.basis]
        return [
            cost[j] - sum((cb[i] * self.a[i][j] for i in range(len(self.a)) if cb[i]), Fraction(0))
            for j in range(allowed)
        ]

    def run(self, cost: list[Fraction], allowed: int) -> str:
        # the reduced-cost row is carried along and updated by each pivot
        red = self.reduced_costs(cost, allowed)
        while True:
            entering = next((j for j in range(allowed) if red[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.a):
                if row[entering] > 0:
                    key = (self.b[i] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            r = best[1]
            self.pivot(r, entering)
            f = red[entering]
            pivot_row = self.a[r]
            red = [x - f * y for x, y in zip(red, pivot_row[:allowed])]

    def value(self, cost: list[Fraction]) -> Fraction:
        return sum((cost[j] * self.b[i] for i, j in enumerate(self.basis)), Fraction(0))

    def solution(self, nvars: int) -> list[Fraction]:
        y = [Fraction(0)] * nvars
        for i, j in enumerate(self.basis):
            if j < nvars:
                y[j] = self.b[i]
        return y


def lp_minimize(lp: LinearProgram) -> LPResult:
    """Minimize the objective exactly; returns status, optimum and an optimal vertex."""
    n = lp.dimension
    m = len(lp.constraints)
    # y = (x+, x-, s) with x = x+ - x-, <w, x> - s = c
    nstd = 2 * n + m
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, k in enumerate(lp.constraints):
        row = list(k.w) + [-x for x in k.w] + [Fraction(-int(j == i)) for j in range(m)]
        c = k.c
        if c < 0:
            row = [-x for x in row]
            c = -c
        rows.append(row)
        rhs.append(c)
    if m == 0:
        if any(lp.objective):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, Fraction(0), tuple([Fraction(0)] * n))

    # phase one: artificial variables nstd .. nstd+m-1
    a = [row + [Fraction(int(j == i)) for j in range(m)] for i, row in enumerate(rows)]
    tab = _Tableau(a, list(rhs), [nstd + i for i in range(m)])
    phase1 = [Fraction(0)] * nstd + [Fraction(1)] * m
    tab.run(phase1, nstd + m)
    if tab.value(phase1) > 0:
        return LPResult(INFEASIBLE)

    # drive artificial variables out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.a):
        if tab.basis[r] >= nstd:
            col = next((j for j in range(nstd) if tab.a[r][j] != 0), None)
            if col is None:
                del tab.a[r], tab.b[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    tab.a = [row[:nstd] for row in tab.a]

    cost = list(lp.objective) + [-x for x in lp.objective] + [Fraction(0)] * m
    status = tab.run(cost, nstd)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    y = tab.solution(nstd)
    x = tuple(y[j] - y[n + j] for j in range(n))
    value = sum((o * v for o, v in zip(lp.objective, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def is_feasible(constraints) -> bool:
    constraints = list(constraints)
    if not constraints:
        return True
    dim = len(constraints[0][0])
    return lp_minimize(LinearProgram.of(constraints, [0] * dim)).status != INFEASIBLE
