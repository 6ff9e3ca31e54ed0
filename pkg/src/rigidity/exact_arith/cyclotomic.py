"""Exact arithmetic in the cyclotomic field Q(u), u a primitive 21st root of unity.

Elements are stored in the power basis 1, u, ..., u^11 modulo the 21st
cyclotomic polynomial.  Internally the coefficients are integer numerators
over one positive common denominator, which keeps multiplication in integer
arithmetic; ``coeffs`` exposes them as ``Fraction`` objects.

The two roots of unity the rest of the package cares about are
``ZETA = u^3`` (order 7) and ``EPS = u^7`` (order 3).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

ORDER = 21
DEGREE = 12


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic; coefficient lists are lowest degree first
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return q, num[: len(den) - 1]


def _cyclotomic_polynomial(m: int) -> list[int]:
    # Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod_int(poly, _cyclotomic_polynomial(d))
            assert not any(rem)
    return poly


PHI21: tuple[int, ...] = tuple(_cyclotomic_polynomial(ORDER))
assert len(PHI21) == DEGREE + 1 and PHI21[-1] == 1

# _POWERS[k] = coefficients of u^k reduced, for 0 <= k < 2*DEGREE - 1
_POWERS: list[tuple[int, ...]] = []
for _k in range(2 * DEGREE - 1):
    if _k < DEGREE:
        _v = [0] * DEGREE
        _v[_k] = 1
    else:
        _prev = _POWERS[_k - 1]
        _top = _prev[-1]
        _v = [0] + list(_prev[:-1])
        for _i in range(DEGREE):
            _v[_i] -= _top * PHI21[_i]
    _POWERS.append(tuple(_v))


def _reduce(poly: Sequence[int]) -> list[int]:
    out = list(poly[:DEGREE]) + [0] * (DEGREE - min(len(poly), DEGREE))
    for k in range(DEGREE, len(poly)):
        c = poly[k]
        if c:
            row = _POWERS[k]
            for i in range(DEGREE):
                out[i] += c * row[i]
    return out


class Cyclotomic:
    """An element of Q(u) in canonical form.  Immutable and hashable."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coeffs: Iterable = (), _den: int | None = None):
        if _den is not None:
            nums = list(coeffs)
            den = _den
        else:
            fr = [Fraction(c) for c in coeffs]
            if len(fr) > DEGREE:
                lcm = 1
                for f in fr:
                    lcm = lcm * f.denominator // gcd(lcm, f.denominator)
                return self.__init__(_reduce([int(f * lcm) for f in fr]), lcm)
            fr += [Fraction(0)] * (DEGREE - len(fr))
            den = 1
            for f in fr:
                den = den * f.denominator // gcd(den, f.denominator)
            nums = [int(f * den) for f in fr]
        if len(nums) > DEGREE:
            nums = _reduce(nums)
        if den < 0:
            den, nums = -den, [-c for c in nums]
        g = den
        for c in nums:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            den //= g
            nums = [c // g for c in nums]
        if not any(nums):
            den = 1
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "Cyclotomic":
        q = Fraction(q)
        return cls([q.numerator] + [0] * (DEGREE - 1), q.denominator)

    @classmethod
    def root(cls, k: int) -> "Cyclotomic":
        """Return u^k for any integer k."""
        return cls(_POWERS[k % ORDER], 1)

    @classmethod
    def coerce(cls, x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.from_rational(x)
        return NotImplemented

    # accessors -------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self._num[0], self._den)

    # ring operations -------------------------------------------------------

    def __add__(self, other):
        other = Cyclotomic.coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._den, other._den
        return Cyclotomic([x * b + y * a for x, y in zip(self._num, other._num)], a * b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic([-c for c in self._num], self._den)

    def __sub__(self, other):
        other = Cyclotomic.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Cyclotomic.coerce(other)
        if other is NotImplemented:
            return other
        prod = [0] * (2 * DEGREE - 1)
        for i, x in enumerate(self._num):
            if x:
                for j, y in enumerate(other._num):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(_reduce(prod), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(u)")
        a = [Fraction(c) for c in PHI21]
        b = _trim([Fraction(c, self._den) for c in self._num])
        # invariant: s_a * self = a, s_b * self = b  (mod PHI21)
        s_a: list[Fraction] = [Fraction(0)]
        s_b: list[Fraction] = [Fraction(1)]
        while len(b) > 1:
            q, r = _poly_divmod_q(a, b)
            a, b = b, r
            s_a, s_b = s_b, _trim(_poly_sub(s_a, _poly_mul(q, s_b)))
        # b is a nonzero constant since PHI21 is irreducible
        c = b[0]
        return Cyclotomic([x / c for x in s_b])

    def __truediv__(self, other):
        other = Cyclotomic.coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the field automorphism u -> u^k (k coprime to 21)."""
        if gcd(k, ORDER) != 1:
            raise ValueError(f"{k} is not a unit modulo {ORDER}")
        total = [0] * DEGREE
        for i, c in enumerate(self._num):
            if c:
                row = _POWERS[(i * k) % ORDER]
                for j in range(DEGREE):
                    total[j] += c * row[j]
        return Cyclotomic(total, self._den)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(ORDER - 1)

    def root_exponent(self) -> int | None:
        """Return k in [0, 21) with self == u^k, or None."""
        return _ROOT_INDEX.get(self)

    # comparison ------------------------------------------------------------

    def __eq__(self, other):
        other = Cyclotomic.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def sort_key(self) -> tuple:
        return self.coeffs

    def __repr__(self):
        return f"Cyclotomic({render(self)!r})"

    def __str__(self):
        return render(self)


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, d in enumerate(b):
                a[k + i] -= c * d
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


ZERO = Cyclotomic.from_rational(0)
ONE = Cyclotomic.from_rational(1)
U = Cyclotomic.root(1)
ZETA = Cyclotomic.root(3)
EPS = Cyclotomic.root(7)

_ROOT_INDEX = {Cyclotomic.root(k): k for k in range(ORDER)}


def zeta(k: int = 1) -> Cyclotomic:
    return Cyclotomic.root(3 * k)


def eps(k: int = 1) -> Cyclotomic:
    return Cyclotomic.root(7 * k)


# --- rendering as polynomials in z7 = zeta and e3 = eps ---------------------
#
# u = zeta^5 * eps, so u^k sits in cell (5k mod 7, k mod 3) of a 7 x 3 grid of
# monomials zeta^i eps^j.  The grid is redundant: adding a constant to a whole
# column (over i) or a whole row (over j) does not change the value.  The
# rendering picks the sparsest such grid, ties broken deterministically.

def _grid(x: Cyclotomic) -> list[list[Fraction]]:
    cells = [[Fraction(0)] * 3 for _ in range(7)]
    for k, c in enumerate(x.coeffs):
        if c:
            cells[(5 * k) % 7][k % 3] += c
    return cells


def _best_offset(values: Sequence[Fraction]) -> Fraction:
    counts: dict[Fraction, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return min(counts, key=lambda v: (-counts[v], abs(v), v))


def _sparsest(cells: list[list[Fraction]]) -> list[list[Fraction]]:
    d1 = {cells[i][0] - cells[i][1] for i in range(7)} | {Fraction(0)}
    d2 = {cells[i][0] - cells[i][2] for i in range(7)} | {Fraction(0)}
    d12 = {cells[i][1] - cells[i][2] for i in range(7)}
    candidates = {(a, b) for a in d1 for b in d2}
    candidates |= {(a, a - d) for a in d1 for d in d12}
    candidates |= {(b + d, b) for b in d2 for d in d12}
    best = None
    best_key = None
    for s1, s2 in candidates:
        # column offsets s = (0, s1, s2) are added; rows then get their best constant
        shifted = [[cells[i][0], cells[i][1] + s1, cells[i][2] + s2] for i in range(7)]
        new = []
        for row in shifted:
            r = _best_offset(row)
            new.append([v - r for v in row])
        for j in range(3):
            c = _best_offset([new[i][j] for i in range(7)])
            for i in range(7):
                new[i][j] -= c
        support = sum(1 for row in new for v in row if v)
        weight = sum(abs(v) for row in new for v in row)
        key = (support, weight, tuple(v for row in new for v in row))
        if best_key is None or key < best_key:
            best, best_key = new, key
    return best


def _monomial(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("z7" if i == 1 else f"z7^{i}")
    if j:
        parts.append("e3" if j == 1 else f"e3^{j}")
    return "*".join(parts)


def render(x: Cyclotomic) -> str:
    """Render as a polynomial string in the symbols ``z7`` and ``e3``."""
    if x.is_zero():
        return "0"
    cells = _sparsest(_grid(x))
    terms = sorted(
        ((i, j, cells[i][j]) for i in range(7) for j in range(3) if cells[i][j]),
        key=lambda t: (-t[0], -t[1]),
    )
    out = ""
    for i, j, c in terms:
        mono = _monomial(i, j)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out = body if sign == "+" else "-" + body
        else:
            out += sign + body
    return out


_TERM = re.compile(r"([+-]?)([^+-]+)")
_FACTOR = re.compile(r"^(z7|e3)(?:\^(\d+))?$")


@lru_cache(maxsize=None)
def parse(text: str) -> Cyclotomic:
    """Inverse of :func:`render`; accepts any sum of terms ``c*z7^i*e3^j``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty cyclotomic expression")
    total = ZERO
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign, body = m.groups()
        coeff = Fraction(1)
        value = ONE
        for factor in body.split("*"):
            fm = _FACTOR.match(factor)
            if fm:
                base = ZETA if fm.group(1) == "z7" else EPS
                value = value * base ** int(fm.group(2) or 1)
            else:
                try:
                    coeff *= Fraction(factor)
                except ValueError:
                    raise ValueError(f"cannot parse {text!r}") from None
        term = value * coeff
        total = total - term if sign == "-" else total + term
    if pos != len(s):
        raise ValueError(f"cannot parse {text!r}")
    return total
