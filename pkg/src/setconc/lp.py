"""Dense exact-rational simplex for small LPs.

Solves  max c.y  subject to  A y <= b,  y >= 0  with all data Fractions
and b >= 0 (so the all-slack basis is feasible and no phase-1 is needed;
the fractional-subadditivity certifier guarantees this by rejecting
functions with negative values before any solve).

Bland's rule on both the entering column (least index with positive
reduced cost) and the leaving row (least basis index among ratio ties)
makes the walk finite and deterministic. The optimal dual multipliers are
read off the slack columns of the objective row, giving exact strong
duality: c.y* == b.dual*.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)


class UnboundedError(RuntimeError):
    """The LP is unbounded above (never raised once rows bound every ray)."""


@dataclass(frozen=True)
class SimplexResult:
    value: Fraction
    solution: tuple[Fraction, ...]          # optimal y
    duals: tuple[Fraction, ...]             # one multiplier per row


def solve_max(c: Sequence[Fraction], rows: Sequence[tuple[Sequence[Fraction], Fraction]]) -> SimplexResult:
    """Maximize c.y over {A y <= b, y >= 0}; every rhs must be >= 0."""
    k = len(c)
    m = len(rows)
    for _, rhs in rows:
        if rhs < 0:
            raise ValueError("solve_max requires non-negative right-hand sides")

    width = k + m
    tableau: list[list[Fraction]] = []
    for i, (coeffs, rhs) in enumerate(rows):
        if len(coeffs) != k:
            raise ValueError(f"row {i} has {len(coeffs)} coefficients, expected {k}")
        row = [Fraction(x) for x in coeffs]
        row.extend(Fraction(1) if j == i else _ZERO for j in range(m))
        row.append(Fraction(rhs))
        tableau.append(row)
    basis = [k + i for i in range(m)]
    reduced = [Fraction(x) for x in c] + [_ZERO] * m
    objective = _ZERO

    while True:
        enter = next((j for j in range(width) if reduced[j] > 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise UnboundedError(f"unbounded along variable {enter}")

        pivot_row = tableau[leave]
        pivot = pivot_row[enter]
        inv = 1 / pivot
        for j in range(width + 1):
            pivot_row[j] *= inv
        for i in range(m):
            if i == leave:
                continue
            factor = tableau[i][enter]
            if factor:
                row = tableau[i]
                for j in range(width + 1):
                    row[j] -= factor * pivot_row[j]
        factor = reduced[enter]
        for j in range(width):
            reduced[j] -= factor * pivot_row[j]
        objective += factor * pivot_row[-1]
        basis[leave] = enter

    y = [_ZERO] * k
    for i, b in enumerate(basis):
        if b < k:
            y[b] = tableau[i][-1]
    duals = tuple(-reduced[k + i] for i in range(m))
    return SimplexResult(objective, tuple(y), duals)
