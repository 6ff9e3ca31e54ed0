"""Exact number and linear-algebra kernel."""

from fractions import Fraction as Rational

from .cyclotomic import EPS, ONE, ZERO, ZETA, Cyclotomic, eps, parse, render, zeta
from .linalg import (
    RationalMatrix,
    common_denominator,
    determinant,
    dot,
    hermite_normal_form,
    hnf_basis,
    inverse,
    kernel,
    rank,
    rational_gcd,
    rref,
    smith_normal_form,
    solve,
    unimodular_completion,
    vec,
)
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, LPResult, is_feasible, lp_minimize

__all__ = [
    "Rational", "Cyclotomic", "EPS", "ZETA", "ONE", "ZERO", "eps", "zeta", "parse", "render",
    "RationalMatrix", "common_denominator", "determinant", "dot", "hermite_normal_form", "hnf_basis", "inverse",
    "kernel", "rank", "rational_gcd", "rref", "smith_normal_form", "solve",
    "unimodular_completion", "vec",
    "LinearProgram", "LPResult", "lp_minimize", "is_feasible", "OPTIMAL", "UNBOUNDED", "INFEASIBLE",
]
