#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import dataclasses
from enum import Enum, unique
from fractions import Fraction
from typing import List, Optional

from components.logging import LogLevel, log
from components.utilities import parse_rational


class LpError(Exception):
    pass


@unique
class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclasses.dataclass
class Constraint:
    coefficients: List[Fraction]
    sense: str   # one of <=, >=, =
    rhs: Fraction


@dataclasses.dataclass
class LinearProgram:
    """
    maximize (or minimize) c.x subject to the rows, with every variable >= 0.
    """
    objective: List[Fraction]
    maximize: bool = True
    constraints: List[Constraint] = dataclasses.field(default_factory=list)
    names: Optional[List[str]] = None

    @property
    def num_variables(self):
        return len(self.objective)

    def add_constraint(self, coefficients, sense, rhs):
        self.constraints.append(Constraint(list(coefficients), sense, rhs))

    def check(self):
        n = self.num_variables
        if self.names is not None and len(self.names) != n:
            raise LpError("%s variable names given for %s variables" % (len(self.names), n))
        for r, row in enumerate(self.constraints):
            if len(row.coefficients) != n:
                raise LpError("Row %s has %s coefficients, expected %s" % (r, len(row.coefficients), n))
            if row.sense not in ('<=', '>=', '='):
                raise LpError("Row %s has unknown sense %r" % (r, row.sense))


@dataclasses.dataclass
class LpSolution:
    status: LpStatus
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None
    duals: Optional[List[Fraction]] = None
    pivots: int = 0


def _rationals(values):
    try:
        return [parse_rational(v) for v in values]
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise LpError("LP data must be finite rationals: %s" % e)


class _Tableau:
    """
    Dense tableau over Fractions. Row r is basic in column basis[r]; the last
    entry of each row is its right-hand side. The objective row holds the
    reduced costs z_j - c_j with the objective value last.
    """

    def __init__(self, rows, basis, width):
        self.rows = rows
        self.basis = basis
        self.width = width
        self.objective = None
        self.pivots = 0

    def price(self, costs):
        obj = [-c for c in costs] + [Fraction(0)]
        for r, row in enumerate(self.rows):
            cb = costs[self.basis[r]]
            if cb == 0:
                continue
            for k, v in enumerate(row):
                if v != 0:
                    obj[k] += cb * v
        self.objective = obj

    def pivot(self, r, j):
        row = self.rows[r]
        p = row[j]
        if p != 1:
            self.rows[r] = row = [v / p for v in row]
        nonzero = [k for k, v in enumerate(row) if v != 0]
        for other in self.rows + [self.objective]:
            if other is row:
                continue
            f = other[j]
            if f == 0:
                continue
            for k in nonzero:
                other[k] -= f * row[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed):
        """Bland's rule iterations. Returns 'optimal' or 'unbounded'."""
        rhs = self.width
        while True:
            entering = None
            for j in range(allowed):
                if self.objective[j] < 0:
                    entering = j
                    break
            if entering is None:
                return 'optimal'
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[rhs] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return 'unbounded'
            self.pivot(best[1], entering)


def solve_lp(lp):
    """
    Two-phase primal simplex in exact arithmetic with Bland's rule. Returns
    the optimal basic solution along with an optimal dual vector (one
    multiplier per original constraint), or an infeasible/unbounded status.
    """
    lp.check()
    n = lp.num_variables
    costs = _rationals(lp.objective)
    if not lp.maximize:
        costs = [-c for c in costs]

    # Every row as a <= row: (coefficients, rhs, original row, sign)
    le_rows = []
    for r, con in enumerate(lp.constraints):
        a = _rationals(con.coefficients)
        b = parse_rational(con.rhs)
        if con.sense in ('<=', '='):
            le_rows.append((a, b, r, 1))
        if con.sense in ('>=', '='):
            le_rows.append(([-v for v in a], -b, r, -1))

    m = len(le_rows)
    negated = [b < 0 for _, b, _, _ in le_rows]
    artificial_of = {}
    for r in range(m):
        if negated[r]:
            artificial_of[r] = n + m + len(artificial_of)
    width = n + m + len(artificial_of)

    rows = []
    basis = []
    for r, (a, b, _, _) in enumerate(le_rows):
        row = [Fraction(0)] * (width + 1)
        s = -1 if negated[r] else 1
        for k, v in enumerate(a):
            row[k] = s * v
        row[n + r] = Fraction(s)
        row[width] = s * b
        if negated[r]:
            row[artificial_of[r]] = Fraction(1)
            basis.append(artificial_of[r])
        else:
            basis.append(n + r)
        rows.append(row)

    tableau = _Tableau(rows, basis, width)

    if artificial_of:
        phase1 = [Fraction(0)] * width
        for col in artificial_of.values():
            phase1[col] = Fraction(-1)
        tableau.price(phase1)
        tableau.run(width)
        if tableau.objective[width] < 0:
            log("Phase 1 ended at %s: infeasible" % tableau.objective[width], level=LogLevel.Debug2, category="solve_lp")
            return LpSolution(LpStatus.INFEASIBLE, pivots=tableau.pivots)
        # Drive zero-valued artificials out of the basis where a real column allows it
        for r in range(m):
            if tableau.basis[r] >= n + m:
                for j in range(n + m):
                    if tableau.rows[r][j] != 0:
                        tableau.pivot(r, j)
                        break

    tableau.price(costs + [Fraction(0)] * (width - n))
    if tableau.run(n + m) == 'unbounded':
        return LpSolution(LpStatus.UNBOUNDED, pivots=tableau.pivots)

    x = [Fraction(0)] * n
    for r, col in enumerate(tableau.basis):
        if col < n:
            x[col] = tableau.rows[r][width]

    # The reduced cost of a slack column is the multiplier of its <= row,
    # whether or not the row was negated for phase 1.
    duals = [Fraction(0)] * len(lp.constraints)
    for r, (_, _, original, sign) in enumerate(le_rows):
        duals[original] += sign * tableau.objective[n + r]
    value = tableau.objective[width]
    if not lp.maximize:
        value = -value
        duals = [-y for y in duals]

    _verify(lp, x, duals, value)
    log("Solved LP with %s variables and %s rows in %s pivots, value %s" % (n, len(lp.constraints), tableau.pivots, value), level=LogLevel.Debug2, category="solve_lp")
    return LpSolution(LpStatus.OPTIMAL, value, x, duals, tableau.pivots)


def _verify(lp, x, duals, value):
    costs = _rationals(lp.objective)
    assert sum(c * v for c, v in zip(costs, x)) == value, "Primal objective does not match the tableau value"
    assert sum(y * parse_rational(con.rhs) for y, con in zip(duals, lp.constraints)) == value, "Strong duality violated"
    assert all(v >= 0 for v in x)
    for y, con in zip(duals, lp.constraints):
        lhs = sum(parse_rational(a) * v for a, v in zip(con.coefficients, x))
        rhs = parse_rational(con.rhs)
        assert (con.sense != '<=' or lhs <= rhs) and (con.sense != '>=' or lhs >= rhs) and (con.sense != '=' or lhs == rhs), "Primal infeasible"
        if y != 0:
            assert lhs == rhs, "Complementary slackness violated on a row"
    for k in range(lp.num_variables):
        if x[k] != 0:
            reduced = sum(parse_rational(con.coefficients[k]) * y for y, con in zip(duals, lp.constraints))
            assert reduced == costs[k], "Complementary slackness violated on a column"
