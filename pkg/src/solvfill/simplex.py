"""Exact rational linear programming, just enough for feasibility questions.

Phase-1 simplex over Fraction with Bland's rule, so every run terminates and
identical inputs pivot identically.  All the linear programs in this package
are feasibility systems with the strictness margin already folded into the
right hand side.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Vec, frac


def _simplex_min(tab, basis, ncols):
    """Minimize sum of basis costs in-place; returns the objective value.

    tab rows: [coeffs..., rhs]; costs are implicit (1 for artificial columns,
    marked by index >= ncols).
    """
    m = len(tab)

    def cost(j):
        return Fraction(1) if j >= ncols else Fraction(0)

    while True:
        # reduced costs: c_j - sum_i c_{basis[i]} * tab[i][j]
        entering = -1
        for j in range(len(tab[0]) - 1):
            red = cost(j) - sum(
                (cost(basis[i]) * tab[i][j] for i in range(m)), Fraction(0)
            )
            if red < 0:
                entering = j
                break  # Bland: smallest index
        if entering < 0:
            break
        leaving = -1
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            raise ArithmeticError("phase-1 objective unbounded below; impossible")
        pv = tab[leaving][entering]
        tab[leaving] = [x / pv for x in tab[leaving]]
        for i in range(m):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leaving])]
        basis[leaving] = entering
    return sum(
        (cost(basis[i]) * tab[i][-1] for i in range(m)), Fraction(0)
    )


def find_feasible(rows, rhs):
    """Some exact x with row . x <= b for every (row, b), or None.

    Variables are free (internally split into positive and negative parts).
    """
    rows = [tuple(frac(c) for c in r) for r in rows]
    rhs = [frac(b) for b in rhs]
    if not rows:
        return ()
    n = len(rows[0])
    m = len(rows)
    # columns: x+ (n), x- (n), slack (m), artificial (m)
    ncols = 2 * n + m
    tab = []
    for i, (r, b) in enumerate(zip(rows, rhs)):
        row = list(r) + [-c for c in r] + [Fraction(0)] * m + [Fraction(0)] * m
        row[2 * n + i] = Fraction(1)
        row.append(b)
        if b < 0:
            row = [-x for x in row]
        row[2 * n + m + i] = Fraction(1)
        tab.append(row)
    basis = [2 * n + m + i for i in range(m)]
    opt = _simplex_min(tab, basis, ncols)
    if opt != 0:
        return None
    x = [Fraction(0)] * (2 * n)
    for i, bi in enumerate(basis):
        if bi < 2 * n:
            x[bi] = tab[i][-1]
    point = tuple(x[j] - x[n + j] for j in range(n))
    for r, b in zip(rows, rhs):
        assert sum((c * v for c, v in zip(r, point)), Fraction(0)) <= b
    return point


def feasible_strict_negative(vectors) -> Vec | None:
    """Some a with v . a <= -1 for every v (margin-1 strict negativity)."""
    vectors = [tuple(frac(c) for c in v) for v in vectors]
    if not vectors:
        return ()
    return find_feasible(vectors, [Fraction(-1)] * len(vectors))
