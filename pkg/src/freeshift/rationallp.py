"""Exact rational linear feasibility.

Solves  A x = b, x >= 0  over the rationals with a phase-1 simplex using
Bland's anti-cycling rule.  Infeasibility comes with a Farkas certificate
y (y.A <= 0 componentwise and y.b > 0) that is re-verified from the
original data before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class FarkasCertificate:
    """Dual ray proving A x = b, x >= 0 infeasible."""

    y: list[Fraction]

    def verify(self, rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> bool:
        ncols = len(rows[0]) if rows else 0
        for j in range(ncols):
            if sum(self.y[i] * rows[i][j] for i in range(len(rows))) > 0:
                return False
        return sum(self.y[i] * rhs[i] for i in range(len(rows))) > 0


def solve_feasibility(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> tuple[list[Fraction] | None, FarkasCertificate | None]:
    """Return (x, None) with A x = b, x >= 0, or (None, certificate).

    The returned x is a basic feasible solution, so its entries are ratios
    of subdeterminants of (A | b); downstream integer scalings stay modest.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return [ZERO] * n, None

    # Orient every row so rhs >= 0, then start from the artificial basis.
    tab = []
    b = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        bi = Fraction(rhs[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        tab.append(row)
        b.append(bi)

    total = n + m  # artificial j has column index n + j
    basis = [n + i for i in range(m)]

    # Phase-1 objective row: minimize the sum of artificials.  In tableau
    # form the reduced-cost row starts as -(sum of constraint rows) on the
    # original columns and 0 on the artificials.
    cost = [ZERO] * total
    for j in range(n):
        cost[j] = -sum(tab[i][j] for i in range(m))
    cost_rhs = -sum(b)

    art = [[ONE if j == i else ZERO for j in range(m)] for i in range(m)]

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        # Ratio test; Bland: smallest basic-variable index among ties.
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            aij = tab[i][enter] if enter < n else art[i][enter - n]
            if aij > 0:
                ratio = b[i] / aij
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise ArithmeticError("phase-1 objective unbounded; inconsistent input")
        piv = tab[leave][enter] if enter < n else art[leave][enter - n]
        inv = ONE / piv
        tab[leave] = [v * inv for v in tab[leave]]
        art[leave] = [v * inv for v in art[leave]]
        b[leave] *= inv
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter] if enter < n else art[i][enter - n]
            if f:
                trow, srow = tab[i], tab[leave]
                for j in range(n):
                    if srow[j]:
                        trow[j] -= f * srow[j]
                arow, prow = art[i], art[leave]
                for j in range(m):
                    if prow[j]:
                        arow[j] -= f * prow[j]
                b[i] -= f * b[leave]
        f = cost[enter]
        if f:
            srow, prow = tab[leave], art[leave]
            for j in range(n):
                if srow[j]:
                    cost[j] -= f * srow[j]
            for j in range(m):
                if prow[j]:
                    cost[n + j] -= f * prow[j]
            cost_rhs -= f * b[leave]
        basis[leave] = enter

    objective = -cost_rhs
    if objective > 0:
        # y_i = (phase-1 artificial cost 1) - reduced cost of artificial i
        y = [ONE - cost[n + i] for i in range(m)]
        # Undo the row sign flips applied above.
        cert = FarkasCertificate(
            [yi if Fraction(rhs[i]) >= 0 else -yi for i, yi in enumerate(y)]
        )
        if not cert.verify(rows, rhs):
            raise ArithmeticError("internal error: invalid Farkas certificate")
        return None, cert

    x = [ZERO] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = b[i]
    return x, None


def solve_cone_membership(
    target: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]
) -> tuple[list[Fraction] | None, FarkasCertificate | None]:
    """Nonnegative coefficients t with sum t_i g_i = target, if any.

    Rows are coordinates, columns are generators.
    """
    if not generators:
        if all(v == 0 for v in target):
            return [], None
        k = len(target)
        # Separating functional for the empty cone: any coordinate of the
        # target that is nonzero yields one.
        y = [ZERO] * k
        for i, v in enumerate(target):
            if v != 0:
                y[i] = ONE if v > 0 else -ONE
                break
        return None, FarkasCertificate(y)
    k = len(target)
    rows = [[Fraction(g[i]) for g in generators] for i in range(k)]
    return solve_feasibility(rows, [Fraction(v) for v in target])
