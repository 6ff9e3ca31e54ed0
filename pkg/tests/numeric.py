"""Floating-point oracles, built from the defining formulas only.

Nothing here calls into the exact code beyond reading a Cyclotomic's
coefficients, so agreement is an independent check.
"""

import cmath
import itertools

import numpy as np

TOL = 1e-9
U = cmath.exp(2j * cmath.pi / 21)
ZETA = U ** 3
EPS = U ** 7

T = np.diag([ZETA ** 4, ZETA ** 2, ZETA])
S = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)


def cnum(x) -> complex:
    return sum(float(c) * U ** i for i, c in enumerate(x.coeffs))


def matrix(a: int, b: int) -> np.ndarray:
    return np.linalg.matrix_power(T, a) @ np.linalg.matrix_power(S, b)


def all_pairs():
    return [(a, b) for a in range(7) for b in range(3)]


def multiply(g, h):
    """Product in G, found by matching matrices."""
    m = matrix(*g) @ matrix(*h)
    for p in all_pairs():
        if np.allclose(matrix(*p), m, atol=TOL):
            return p
    raise AssertionError("matrices do not close up")


def inverse(g):
    return next(h for h in all_pairs() if multiply(g, h) == (0, 0))


# --- Klein quartic -------------------------------------------------------------

def quartic(x):
    return x[0] ** 3 * x[1] + x[1] ** 3 * x[2] + x[2] ** 3 * x[0]


def quartic_grad(x):
    return np.array([3 * x[0] ** 2 * x[1] + x[2] ** 3,
                     x[0] ** 3 + 3 * x[1] ** 2 * x[2],
                     x[1] ** 3 + 3 * x[2] ** 2 * x[0]])


def normalize(x):
    x = np.asarray(x, dtype=complex)
    i = next(i for i in range(len(x)) if abs(x[i]) > 1e-7)
    return x / x[i]


def same_point(x, y):
    return np.allclose(normalize(x), normalize(y), atol=1e-7)


def klein_fixed(g):
    """[(point, tangent derivative)] for the fixed points of g on the quartic."""
    m = matrix(*g)
    vals, vecs = np.linalg.eig(m)
    out = []
    for i in range(3):
        p = normalize(vecs[:, i])
        if abs(quartic(p)) > 1e-7:
            continue
        grad = quartic_grad(p)
        for j in range(3):
            v = vecs[:, j]
            if j != i and abs(grad @ v) < 1e-7:
                out.append((p, vals[j] / vals[i]))
    return out


# --- Fermat cubic as C / (Z + Z eps) --------------------------------------------------

def fermat_map(g, z):
    a, b = g
    return EPS ** b * z + a * (1 + 3 * EPS) / 7


def in_lattice(z):
    # z = x + y eps  =>  y = Im z / Im eps
    y = z.imag / EPS.imag
    x = z.real - y * EPS.real
    return abs(x - round(x)) < 1e-7 and abs(y - round(y)) < 1e-7


def fermat_fixed(g):
    """Fixed points among (i + j eps)/21, with the tangent derivative eps^b."""
    out = []
    for i, j in itertools.product(range(21), repeat=2):
        z = (i + j * EPS) / 21
        if in_lattice(fermat_map(g, z) - z):
            out.append((z, EPS ** g[1]))
    return out


def fixed(curve, g):
    return klein_fixed(g) if curve == "klein" else fermat_fixed(g)


# --- holomorphic Lefschetz -------------------------------------------------------------

def lefschetz_forms_trace(curve, g, k, genus):
    """trace of f_g^* on H^0(K^k) from the fixed-point formula.

    sum_q (-1)^q tr(f^*|H^q(K^k)) = sum_p f'(p)^k / (1 - f'(p)); for k = 1 the
    H^1 term is the trivial line, for k = 2 and genus >= 2 it vanishes.
    """
    if g == (0, 0):
        return genus if k == 1 else (3 * genus - 3 if genus >= 2 else 1)
    total = sum(lam ** k / (1 - lam) for _, lam in fixed(curve, g))
    if k == 1:
        return 1 + total
    if genus >= 2:
        return total
    raise ValueError("k = 2 on an elliptic curve has nonzero H^1 term")


# --- brute-force singular locus of F^(n-1) x Q / G -----------------------------------

def special(curve):
    pts = []
    for g in all_pairs():
        if g == (0, 0):
            continue
        for p, _ in fixed(curve, g):
            if not any(_same(curve, p, q) for q in pts):
                pts.append(p)
    return pts


def _same(curve, p, q):
    return same_point(p, q) if curve == "klein" else in_lattice(p - q)


def _image(curve, g, p):
    return matrix(*g) @ p if curve == "klein" else fermat_map(g, p)


def action_table(curve):
    pts = special(curve)
    table = np.array([[next(j for j, q in enumerate(pts) if _same(curve, _image(curve, g, p), q))
                       for p in pts] for g in all_pairs()])
    return pts, table


def _tangent_weight(curve, g, p):
    lam = next(l for q, l in fixed(curve, g) if _same(curve, p, q))
    return round(cmath.phase(lam) / (2 * cmath.pi) * 3) % 3


def singular_types(n):
    """{(order, canonical weights): number of singular points} of the quotient."""
    curves = ["fermat"] * (n - 1) + ["klein"]
    data = {c: action_table(c) for c in set(curves)}
    grids = np.meshgrid(*[np.arange(len(data[c][0])) for c in curves], indexing="ij")
    pts = np.stack([x.ravel() for x in grids], axis=1)
    images = np.stack([data[c][1][:, pts[:, i]] for i, c in enumerate(curves)], axis=2)
    stab = (images == pts[None]).all(axis=2)
    radix = np.array([max(len(d[0]) for d in data.values()) ** k for k in range(n)])
    keys = (images @ radix).min(axis=0)
    seen, out = set(), {}
    pairs = all_pairs()
    for j in np.nonzero(stab.sum(axis=0) > 1)[0]:
        if keys[j] in seen:
            continue
        seen.add(keys[j])
        members = [pairs[i] for i in np.nonzero(stab[:, j])[0]]
        order = len(members)
        assert order == 3, "only order-3 stabilizers are expected"
        h = next(g for g in members if g != (0, 0))
        w = [_tangent_weight(c, h, data[c][0][pts[j, i]]) for i, c in enumerate(curves)]
        canon = min(tuple(sorted(k * x % 3 for x in w)) for k in (1, 2))
        out[(order, canon)] = out.get((order, canon), 0) + 1
    return out
