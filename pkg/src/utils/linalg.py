"""Exact rational rank and linear solves backed by sympy."""
from fractions import Fraction
from typing import List, Optional, Sequence

import sympy

Row = Sequence[Fraction]


def to_matrix(rows: Sequence[Row], ncols: int) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, ncols)
    return sympy.Matrix([
        [sympy.Rational(v.numerator, v.denominator) for v in row]
        for row in rows
    ])


def rank(rows: Sequence[Row], ncols: int) -> int:
    """Rank over the rationals; empty shapes have rank 0."""
    if not rows or ncols == 0:
        return 0
    return int(to_matrix(rows, ncols).rank())


def solve(rows: Sequence[Row], ncols: int, rhs: Sequence[Fraction]
          ) -> Optional[List[Fraction]]:
    """One exact solution x of A x = rhs, free parameters set to zero.

    Returns:
        The solution as Fractions, or None when the system is inconsistent
    """
    if ncols == 0:
        return [] if all(v == 0 for v in rhs) else None
    if not rows:
        return [Fraction(0)] * ncols
    A = to_matrix(rows, ncols)
    b = sympy.Matrix([sympy.Rational(v.numerator, v.denominator)
                      for v in rhs])
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1]))
            for v in solution]
