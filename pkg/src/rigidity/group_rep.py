"""The non-abelian group of order 21 and its character theory.

G = <s, t | s^3 = t^7 = 1, s t s^-1 = t^4>.  Every element is written uniquely
as t^a s^b; the group law follows from s^b t^c = t^(4^b c) s^b.

Characters are stored by their values on the five class representatives in
the fixed order [1, t, t^3, s, s^2].  The two 3-dimensional irreducibles come
from traces of the explicit matrices S (cyclic permutation) and
T = diag(zeta^4, zeta^2, zeta), not from orthogonality relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .exact_arith import ONE, ZERO, Cyclotomic, eps, zeta

Matrix3 = tuple[tuple[Cyclotomic, ...], ...]


@dataclass(frozen=True, order=True)
class GroupElement:
    """t^a s^b with a mod 7 and b mod 3."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        if not (0 <= self.a < 7 and 0 <= self.b < 3):
            raise ValueError(f"exponents out of range: t^{self.a} s^{self.b}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mul_elements(self, other)

    def inverse(self) -> "GroupElement":
        b = (-self.b) % 3
        # t^a s^b * t^c s^-b = t^(a + 4^b c), so c = -a * 4^-b = -a * 2^b
        return GroupElement((-self.a * pow(2, self.b, 7)) % 7, b)

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = IDENTITY
        for _ in range(k):
            out = out * self
        return out

    def order(self) -> int:
        k, g = 1, self
        while g != IDENTITY:
            g, k = g * self, k + 1
        return k

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0

    def generator_key(self) -> tuple[int, int]:
        """Preference used to pick a canonical generator of a cyclic subgroup."""
        return (self.b, self.a)

    def __str__(self):
        parts = []
        if self.a:
            parts.append("t" if self.a == 1 else f"t^{self.a}")
        if self.b:
            parts.append("s" if self.b == 1 else f"s^{self.b}")
        return "".join(parts) or "1"


IDENTITY = GroupElement(0, 0)
T_ELT = GroupElement(1, 0)
S_ELT = GroupElement(0, 1)


def mul_elements(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement((g.a + pow(4, g.b, 7) * h.a) % 7, (g.b + h.b) % 3)


def elements() -> list[GroupElement]:
    return [GroupElement(a, b) for b in range(3) for a in range(7)]


def conjugate_by(h: GroupElement, g: GroupElement) -> GroupElement:
    return h * g * h.inverse()


def generated_subgroup(gens: Sequence[GroupElement]) -> frozenset[GroupElement]:
    group = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in group:
                group.add(y)
                frontier.append(y)
    return frozenset(group)


@dataclass(frozen=True)
class ConjClass:
    representative: GroupElement
    members: frozenset[GroupElement]

    @property
    def size(self) -> int:
        return len(self.members)


CLASS_REPRESENTATIVES = (IDENTITY, T_ELT, GroupElement(3, 0), S_ELT, GroupElement(0, 2))
CLASS_LABELS = ("1", "t", "t^3", "s", "s^2")


@lru_cache(maxsize=None)
def conjugacy_classes() -> tuple[ConjClass, ...]:
    """The five classes, computed by exhaustive conjugation, in representative order."""
    found: list[frozenset[GroupElement]] = []
    for g in elements():
        if not any(g in c for c in found):
            found.append(frozenset(conjugate_by(h, g) for h in elements()))
    classes = []
    for rep in CLASS_REPRESENTATIVES:
        members = next(c for c in found if rep in c)
        classes.append(ConjClass(rep, members))
    assert len(found) == len(classes) == 5
    return tuple(classes)


@lru_cache(maxsize=None)
def class_index(g: GroupElement) -> int:
    return next(i for i, c in enumerate(conjugacy_classes()) if g in c.members)


def class_sizes() -> tuple[int, ...]:
    return tuple(c.size for c in conjugacy_classes())


def sylow_subgroups(p: int) -> list[frozenset[GroupElement]]:
    if p not in (3, 7):
        raise ValueError(f"G has order 21; no Sylow {p}-subgroup is supported")
    subgroups: list[frozenset[GroupElement]] = []
    for g in elements():
        if g.order() == p:
            h = generated_subgroup([g])
            if h not in subgroups:
                subgroups.append(h)
    return sorted(subgroups, key=lambda h: sorted(x.generator_key() for x in h if not x.is_identity()))


# --- the explicit 3-dimensional representation -------------------------------

def _mat_mul(x: Matrix3, y: Matrix3) -> Matrix3:
    return tuple(
        tuple(sum((x[i][k] * y[k][j] for k in range(3)), ZERO) for j in range(3))
        for i in range(3)
    )


def _diag(values) -> Matrix3:
    return tuple(tuple(values[i] if i == j else ZERO for j in range(3)) for i in range(3))


MATRIX_S: Matrix3 = (
    (ZERO, ONE, ZERO),
    (ZERO, ZERO, ONE),
    (ONE, ZERO, ZERO),
)
MATRIX_T: Matrix3 = _diag([zeta(4), zeta(2), zeta(1)])
IDENTITY3: Matrix3 = _diag([ONE, ONE, ONE])


def mat_pow(m: Matrix3, k: int) -> Matrix3:
    out = IDENTITY3
    for _ in range(k):
        out = _mat_mul(out, m)
    return out


@lru_cache(maxsize=None)
def eta_matrix(g: GroupElement) -> Matrix3:
    """T^a S^b, the matrix of t^a s^b acting on C^3."""
    return _mat_mul(mat_pow(MATRIX_T, g.a), mat_pow(MATRIX_S, g.b))


def trace(m: Matrix3) -> Cyclotomic:
    return m[0][0] + m[1][1] + m[2][2]


# --- characters ---------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """Class function on G, values on [1, t, t^3, s, s^2]; virtual combinations allowed."""

    values: tuple[Cyclotomic, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.values) != 5:
            raise ValueError("a class function on G has 5 values")

    def __eq__(self, other):
        return isinstance(other, Character) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    @classmethod
    def from_function(cls, f, name: str = "") -> "Character":
        """Build from a function on elements, checking it is constant on classes."""
        values = []
        for c in conjugacy_classes():
            vals = {f(g) for g in c.members}
            if len(vals) != 1:
                raise ValueError(f"{name or 'function'} is not a class function")
            values.append(vals.pop())
        return cls(tuple(values), name)

    def __call__(self, g: GroupElement) -> Cyclotomic:
        return self.values[class_index(g)]

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(x + y for x, y in zip(self.values, other.values)))

    def __sub__(self, other: "Character") -> "Character":
        return Character(tuple(x - y for x, y in zip(self.values, other.values)))

    def __neg__(self) -> "Character":
        return Character(tuple(-x for x in self.values))

    def __mul__(self, other):
        if isinstance(other, Character):
            return Character(tuple(x * y for x, y in zip(self.values, other.values)))
        return Character(tuple(x * other for x in self.values))

    __rmul__ = __mul__

    def conjugate(self) -> "Character":
        return Character(tuple(x.conjugate() for x in self.values))

    @property
    def degree(self) -> Fraction:
        return self.values[0].to_rational()


def zero_character() -> Character:
    return Character((ZERO,) * 5, "0")


@lru_cache(maxsize=None)
def character_table() -> tuple[Character, ...]:
    """(chi_triv, chi_eps, chi_eps2, chi_eta, chi_etabar)."""
    triv = Character.from_function(lambda g: ONE, "triv")
    chi_e = Character.from_function(lambda g: eps(g.b), "eps")
    chi_e2 = Character.from_function(lambda g: eps(2 * g.b), "eps2")
    chi_eta = Character.from_function(lambda g: trace(eta_matrix(g)), "eta")
    chi_etabar = Character.from_function(lambda g: trace(eta_matrix(g)).conjugate(), "etabar")
    return (triv, chi_e, chi_e2, chi_eta, chi_etabar)


IRREDUCIBLE_NAMES = ("triv", "eps", "eps2", "eta", "etabar")


def irreducible(name: str) -> Character:
    return character_table()[IRREDUCIBLE_NAMES.index(name)]


def inner_product(x: Character, y: Character) -> Fraction:
    """(1/|G|) sum_g x(g) conj(y(g)), which must be rational."""
    total = ZERO
    for size, a, b in zip(class_sizes(), x.values, y.values):
        total = total + a * b.conjugate() * size
    total = total * Fraction(1, 21)
    return total.to_rational()


@lru_cache(maxsize=None)
def _square_class() -> tuple[int, ...]:
    return tuple(class_index(c.representative * c.representative) for c in conjugacy_classes())


def sym2_char(x: Character) -> Character:
    """Character of the symmetric square: (x(g)^2 + x(g^2)) / 2."""
    sq = _square_class()
    return Character(tuple(
        (x.values[i] * x.values[i] + x.values[sq[i]]) * Fraction(1, 2) for i in range(5)
    ))


def decompose_character(x: Character) -> tuple[int, ...]:
    """Multiplicities of (triv, eps, eps2, eta, etabar) in the virtual character x."""
    table = character_table()
    mult = []
    for chi in table:
        m = inner_product(x, chi)
        if m.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {m}: not a virtual character")
        mult.append(int(m))
    rebuilt = recompose(mult)
    if rebuilt != x:
        raise ArithmeticError("decomposition does not reconstruct the character")
    return tuple(mult)


def recompose(multiplicities: Sequence[int]) -> Character:
    out = zero_character()
    for m, chi in zip(multiplicities, character_table()):
        out = out + chi * m
    return out


def iter_nontrivial() -> Iterator[GroupElement]:
    return (g for g in elements() if not g.is_identity())
