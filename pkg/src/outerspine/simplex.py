"""Dense two-phase simplex over exact rationals.

Problems here are tiny (a handful of edge lengths, a couple dozen cycle
rows), so everything runs on Fraction tableaus: no tolerance tuning, and
Bland's rule guarantees termination.  Floats entering through lengths or
weights are converted exactly (Fraction(float) is the exact binary value),
so equal inputs give identical outputs.

The public entry point solves

    minimize    c . x
    subject to  A_eq x = b_eq,  A_ge x >= b_ge,  x >= 0

and returns the optimum, an optimal vertex, and dual values forming an
optimality certificate (the tests check strong duality and dual
feasibility against it).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Infeasible(Exception):
    """Raised when the constraint system has no solution."""


class Unbounded(Exception):
    """Raised when the objective decreases without bound."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LpSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    duals: tuple[Fraction, ...]  # one per constraint row, equality rows first
    unique: bool


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = len(rows[0]) if rows else 0

    def pivot(self, r: int, c: int) -> None:
        inv = Fraction(1) / self.rows[r][c]
        self.rows[r] = [v * inv for v in self.rows[r]]
        self.rhs[r] *= inv
        row_r = self.rows[r]
        for i in range(len(self.rows)):
            if i == r:
                continue
            f = self.rows[i][c]
            if f:
                self.rows[i] = [v - f * rv for v, rv in zip(self.rows[i], row_r)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        red = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[r]
                for j in range(self.ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def objective_value(self, cost: list[Fraction]) -> Fraction:
        return sum(cost[b] * self.rhs[r] for r, b in enumerate(self.basis))

    def minimize(self, cost: list[Fraction], frozen: frozenset[int]) -> None:
        """Bland's rule: smallest eligible entering column, smallest basis
        variable on leaving ties.  Terminates on every input."""
        while True:
            red = self.reduced_costs(cost)
            enter = -1
            for j in range(self.ncols):
                if j not in frozen and red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best = None
            for r in range(len(self.rows)):
                a = self.rows[r][enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[r] < self.basis[leave]
                    ):
                        best = ratio
                        leave = r
            if leave < 0:
                raise Unbounded("objective unbounded below")
            self.pivot(leave, enter)


def _solve_once(
    c: list[Fraction],
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    kinds: list[str],
) -> LpSolution:
    nvars = len(c)
    nrows = len(rows)
    nslack = sum(1 for k in kinds if k == "ge")
    art_lo = nvars + nslack
    ncols = art_lo + nrows
    zero = Fraction(0)

    full: list[list[Fraction]] = []
    b = list(rhs)
    si = 0
    for i in range(nrows):
        row = list(rows[i]) + [zero] * (nslack + nrows)
        if kinds[i] == "ge":
            row[nvars + si] = Fraction(-1)
            si += 1
        full.append(row)
    sign = [Fraction(1)] * nrows
    for i in range(nrows):
        if b[i] < 0:
            full[i] = [-v for v in full[i]]
            b[i] = -b[i]
            sign[i] = Fraction(-1)
    for i in range(nrows):
        full[i][art_lo + i] = Fraction(1)

    tab = _Tableau(full, b, [art_lo + i for i in range(nrows)])

    phase1 = [zero] * art_lo + [Fraction(1)] * nrows
    tab.minimize(phase1, frozen=frozenset())
    if tab.objective_value(phase1) != 0:
        raise Infeasible("no feasible point")
    for r in range(nrows):
        # degenerate artificial left in the basis: swap in any real column
        if tab.basis[r] >= art_lo:
            for j in range(art_lo):
                if tab.rows[r][j] != 0:
                    tab.pivot(r, j)
                    break

    artificials = frozenset(range(art_lo, ncols))
    cost = c + [zero] * (nslack + nrows)
    tab.minimize(cost, artificials)

    value = tab.objective_value(cost)
    x = [zero] * ncols
    for r, bcol in enumerate(tab.basis):
        x[bcol] = tab.rhs[r]

    # dual value of row i is the negated reduced cost of its artificial
    # column (cost 0, original column +-e_i), adjusted for the sign flip
    red = tab.reduced_costs(cost)
    duals = tuple(-red[art_lo + i] * sign[i] for i in range(nrows))

    # the vertex is unique iff every nonbasic structural or slack column
    # has strictly positive reduced cost
    basis_set = set(tab.basis)
    unique = all(
        red[j] > 0 for j in range(art_lo) if j not in basis_set
    )
    return LpSolution(value, tuple(x[:nvars]), duals, unique)


def solve_lp(
    c: Sequence,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    a_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
    tie_break_order: Sequence[int] | None = None,
) -> LpSolution:
    """Solve the LP; see the module docstring for the problem shape.

    With ``tie_break_order`` (a permutation of the variable indices) the
    optimal face is narrowed deterministically: variables are minimized one
    at a time in that order with the objective and all earlier variables
    pinned to their minima.  The result is the lexicographically smallest
    optimal vertex, independent of constraint row order.  The duals always
    certify the original objective.
    """
    c = [_frac(v) for v in c]
    rows = [[_frac(v) for v in row] for row in a_eq]
    rhs = [_frac(v) for v in b_eq]
    kinds = ["eq"] * len(rows)
    for row, b in zip(a_ge, b_ge):
        rows.append([_frac(v) for v in row])
        rhs.append(_frac(b))
        kinds.append("ge")
    for row in rows:
        if len(row) != len(c):
            raise ValueError("constraint width does not match objective")

    sol = _solve_once(c, rows, rhs, kinds)
    if tie_break_order is None or sol.unique:
        return sol

    nvars = len(c)
    pin_rows = list(rows)
    pin_rhs = list(rhs)
    pin_kinds = list(kinds)
    pin_rows.append(list(c))
    pin_rhs.append(sol.value)
    pin_kinds.append("eq")
    best_x = sol.x
    for col in tie_break_order:
        obj = [Fraction(0)] * nvars
        obj[col] = Fraction(1)
        sub = _solve_once(obj, pin_rows, pin_rhs, pin_kinds)
        best_x = sub.x
        if sub.unique:
            break
        pin_rows.append(list(obj))
        pin_rhs.append(sub.value)
        pin_kinds.append("eq")
    return LpSolution(sol.value, best_x, sol.duals, False)
