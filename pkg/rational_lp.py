"""
Exact Rational Linear Programming
Two-phase dense tableau simplex over fractions.Fraction with Bland's rule.

Every Optimal outcome is checked before it is returned: the primal witness
must satisfy all constraints and bounds exactly, the dual solution must be
dual feasible, and both objective values must coincide. A failed check
raises LpError instead of returning a wrong answer.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from combinatorics import as_fraction
from errors import LpError, MalformedProgram

logger = logging.getLogger(__name__)

RELATIONS = {'<=': '<=', '≤': '<=', '=': '=', '==': '=', '>=': '>=', '≥': '>='}
SENSES = {'max': 'max', 'maximize': 'max', 'min': 'min', 'minimize': 'min'}

ZERO = Fraction(0)
ONE = Fraction(1)


class LpStatus(Enum):
    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'


class LinearProgram:
    """
    optimize objective . x subject to rows (coefficients, relation, rhs)

    bounds holds one (lower, upper) pair per variable, None meaning no bound;
    when omitted every variable is non-negative.
    """

    def __init__(self, objective: Sequence, constraints: Iterable[Tuple[Sequence, str, object]],
                 bounds: Optional[Sequence[Tuple]] = None, sense: str = 'max'):
        self.objective = [as_fraction(c) for c in objective]
        width = len(self.objective)
        if sense not in SENSES:
            raise MalformedProgram(f"unknown sense {sense!r}")
        self.sense = SENSES[sense]

        self.constraints = []
        for index, row in enumerate(constraints):
            try:
                coefficients, relation, rhs = row
            except (TypeError, ValueError):
                raise MalformedProgram(f"constraint {index} is not a (coefficients, relation, rhs) triple")
            if relation not in RELATIONS:
                raise MalformedProgram(f"constraint {index} has unknown relation {relation!r}")
            coefficients = [as_fraction(a) for a in coefficients]
            if len(coefficients) != width:
                raise MalformedProgram(
                    f"constraint {index} has {len(coefficients)} coefficients, objective has {width}")
            self.constraints.append((coefficients, RELATIONS[relation], as_fraction(rhs)))

        if bounds is None:
            bounds = [(0, None)] * width
        if len(bounds) != width:
            raise MalformedProgram(f"{len(bounds)} bounds given for {width} variables")
        self.bounds = [(None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))
                       for lo, hi in bounds]

    @property
    def width(self):
        return len(self.objective)

    def __repr__(self):
        return f"LinearProgram({self.sense}, {self.width} variables, {len(self.constraints)} constraints)"


class LpOutcome:
    """Result of solve(); optimum, solution and duals are set only when Optimal"""

    def __init__(self, status: LpStatus, optimum: Optional[Fraction] = None,
                 solution: Optional[List[Fraction]] = None, duals: Optional[List[Fraction]] = None,
                 pivots: int = 0):
        self.status = status
        self.optimum = optimum
        self.solution = solution
        self.duals = duals
        self.pivots = pivots

    @property
    def is_optimal(self):
        return self.status is LpStatus.OPTIMAL

    def __repr__(self):
        if self.is_optimal:
            return f"LpOutcome(Optimal, optimum={self.optimum}, pivots={self.pivots})"
        return f"LpOutcome({self.status.value}, pivots={self.pivots})"


class _Tableau:
    """Standard-form tableau max c.y, A y (rel) b, y >= 0, b >= 0"""

    def __init__(self, rows, relations, rhs, cost):
        self.n_struct = len(cost)
        self.cost = list(cost)
        m = len(rows)

        n_slack = sum(1 for r in relations if r != '=')
        n_art = sum(1 for r in relations if r != '<=')
        self.first_slack = self.n_struct
        self.first_art = self.n_struct + n_slack
        self.n_cols = self.first_art + n_art

        self.rows = []
        self.basis = []
        slack = self.first_slack
        art = self.first_art
        for i in range(m):
            row = list(rows[i]) + [ZERO] * (n_slack + n_art) + [rhs[i]]
            if relations[i] == '<=':
                row[slack] = ONE
                self.basis.append(slack)
                slack += 1
            elif relations[i] == '>=':
                row[slack] = -ONE
                row[art] = ONE
                self.basis.append(art)
                slack += 1
                art += 1
            else:
                row[art] = ONE
                self.basis.append(art)
                art += 1
            self.rows.append(row)
        self.initial_basis = list(self.basis)
        self.objrow = None
        self.pivots = 0

    def is_artificial(self, col):
        return col >= self.first_art

    def _price(self, costs):
        """objrow[j] = c_B B^-1 A_j - c_j for the current basis"""
        objrow = [-c for c in costs] + [ZERO]
        for i, row in enumerate(self.rows):
            cb = costs[self.basis[i]]
            if cb:
                for j, value in enumerate(row):
                    if value:
                        objrow[j] += cb * value
        self.objrow = objrow

    def _pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            prow = [v / p for v in prow]
            self.rows[r] = prow
        nonzero = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                factor = row[c]
                if factor:
                    for j in nonzero:
                        row[j] -= factor * prow[j]
        factor = self.objrow[c]
        if factor:
            for j in nonzero:
                self.objrow[j] -= factor * prow[j]
        self.basis[r] = c
        self.pivots += 1

    def _iterate(self):
        """Run Bland pivots until optimal (True) or unbounded (False)"""
        while True:
            entering = None
            for j in range(self.first_art):
                if self.objrow[j] < 0:
                    entering = j
                    break
            if entering is None:
                return True
            leaving = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leaving])):
                        best = ratio
                        leaving = i
            if leaving is None:
                return False
            self._pivot(leaving, entering)

    def phase_one(self):
        """Drive artificials to zero; returns False when the program is infeasible"""
        if self.first_art == self.n_cols:
            return True
        costs = [ZERO] * self.first_art + [-ONE] * (self.n_cols - self.first_art)
        self._price(costs)
        # phase one is bounded above by zero
        self._iterate()
        logger.debug("phase one finished after %d pivots, value %s", self.pivots, self.objrow[-1])
        if self.objrow[-1] < 0:
            return False
        for i in range(len(self.rows)):
            if self.is_artificial(self.basis[i]):
                row = self.rows[i]
                for j in range(self.first_art):
                    if row[j]:
                        self._pivot(i, j)
                        break
        return True

    def phase_two(self):
        costs = self.cost + [ZERO] * (self.n_cols - self.n_struct)
        self._price(costs)
        return self._iterate()

    def primal(self):
        values = [ZERO] * self.n_cols
        for i, col in enumerate(self.basis):
            values[col] = self.rows[i][-1]
        return values[:self.n_struct]

    def duals(self):
        # the initial basis columns are unit vectors with zero phase-two cost
        return [self.objrow[col] for col in self.initial_basis]


def _standardize(lp):
    """
    Substitute bounded/free variables by non-negative ones.

    Returns (columns, const, rows, relations, rhs, cost, cost_const, user_rows) where
    columns[j] lists (internal column, coefficient) so x_j = const[j] + sum coef * y.
    """
    columns = []
    const = []
    extra_rows = []
    n_internal = 0
    for lo, hi in lp.bounds:
        if lo is not None:
            columns.append([(n_internal, ONE)])
            const.append(lo)
            if hi is not None:
                extra_rows.append((n_internal, hi - lo))
            n_internal += 1
        elif hi is not None:
            columns.append([(n_internal, -ONE)])
            const.append(hi)
            n_internal += 1
        else:
            columns.append([(n_internal, ONE), (n_internal + 1, -ONE)])
            const.append(ZERO)
            n_internal += 2

    rows, relations, rhs = [], [], []
    for coefficients, relation, b in lp.constraints:
        row = [ZERO] * n_internal
        shift = ZERO
        for j, a in enumerate(coefficients):
            if a:
                shift += a * const[j]
                for col, coef in columns[j]:
                    row[col] += a * coef
        rows.append(row)
        relations.append(relation)
        rhs.append(b - shift)
    for col, cap in extra_rows:
        row = [ZERO] * n_internal
        row[col] = ONE
        rows.append(row)
        relations.append('<=')
        rhs.append(cap)

    sign = ONE if lp.sense == 'max' else -ONE
    cost = [ZERO] * n_internal
    cost_const = ZERO
    for j, c in enumerate(lp.objective):
        if c:
            cost_const += sign * c * const[j]
            for col, coef in columns[j]:
                cost[col] += sign * c * coef
    return columns, const, rows, relations, rhs, cost, cost_const


def _flip(rows, relations, rhs):
    """Make every rhs non-negative; returns the per-row sign applied"""
    signs = []
    swap = {'<=': '>=', '>=': '<=', '=': '='}
    for i, b in enumerate(rhs):
        if b < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -b
            relations[i] = swap[relations[i]]
            signs.append(-ONE)
        else:
            signs.append(ONE)
    return signs


def _satisfies(coefficients, relation, rhs, x):
    value = sum((a * v for a, v in zip(coefficients, x) if a), ZERO)
    if relation == '<=':
        return value <= rhs
    if relation == '>=':
        return value >= rhs
    return value == rhs


def _verify(lp, x, optimum, rows, relations, rhs, cost, internal_duals, internal_value):
    for index, (coefficients, relation, b) in enumerate(lp.constraints):
        if not _satisfies(coefficients, relation, b, x):
            raise LpError(f"witness violates constraint {index}")
    for j, (lo, hi) in enumerate(lp.bounds):
        if (lo is not None and x[j] < lo) or (hi is not None and x[j] > hi):
            raise LpError(f"witness violates the bounds of variable {j}")
    value = sum((c * v for c, v in zip(lp.objective, x)), ZERO)
    if value != optimum:
        raise LpError(f"objective at witness is {value}, reported optimum {optimum}")

    # dual feasibility of the internal max problem: y >= 0 on <=, y <= 0 on >=, A^T y >= c
    for y, relation in zip(internal_duals, relations):
        if (relation == '<=' and y < 0) or (relation == '>=' and y > 0):
            raise LpError("dual solution has the wrong sign")
    for col, c in enumerate(cost):
        reduced = sum((row[col] * y for row, y in zip(rows, internal_duals) if row[col]), ZERO)
        if reduced < c:
            raise LpError(f"dual solution is infeasible on column {col}")
    dual_value = sum((y * b for y, b in zip(internal_duals, rhs)), ZERO)
    if dual_value != internal_value:
        raise LpError(f"strong duality fails: primal {internal_value}, dual {dual_value}")


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve a LinearProgram exactly"""
    columns, const, rows, relations, rhs, cost, cost_const = _standardize(lp)
    signs = _flip(rows, relations, rhs)
    original_rows = [list(r) for r in rows]

    tableau = _Tableau(rows, relations, rhs, cost)
    if not tableau.phase_one():
        logger.info("program infeasible (%d pivots)", tableau.pivots)
        return LpOutcome(LpStatus.INFEASIBLE, pivots=tableau.pivots)
    if not tableau.phase_two():
        logger.info("program unbounded (%d pivots)", tableau.pivots)
        return LpOutcome(LpStatus.UNBOUNDED, pivots=tableau.pivots)

    y = tableau.primal()
    x = [const[j] + sum((coef * y[col] for col, coef in columns[j]), ZERO) for j in range(lp.width)]
    internal_value = tableau.objrow[-1]
    optimum = internal_value + cost_const
    if lp.sense == 'min':
        optimum = -optimum

    internal_duals = tableau.duals()
    user_duals = [s * d for s, d in zip(signs, internal_duals)][:len(lp.constraints)]
    if lp.sense == 'min':
        user_duals = [-d for d in user_duals]

    _verify(lp, x, optimum, original_rows, relations, rhs, cost,
            internal_duals, internal_value)
    logger.debug("optimal value %s after %d pivots", optimum, tableau.pivots)
    return LpOutcome(LpStatus.OPTIMAL, optimum, x, user_duals, tableau.pivots)


def feasible(constraints: Sequence[Tuple[Sequence, str, object]], bounds: Optional[Sequence] = None,
             width: Optional[int] = None) -> Tuple[bool, Optional[List[Fraction]]]:
    """Linear feasibility; returns (True, witness) or (False, None)"""
    constraints = list(constraints)
    if width is None:
        if constraints:
            width = len(constraints[0][0])
        elif bounds is not None:
            width = len(bounds)
        else:
            raise MalformedProgram("cannot infer the number of variables")
    outcome = solve(LinearProgram([0] * width, constraints, bounds, 'max'))
    if outcome.is_optimal:
        return True, outcome.solution
    return False, None


class LpBuilder:
    """
    Assemble a LinearProgram from named variable blocks.

    add_variables returns a key -> column mapping for the block; constraints
    and objectives are sparse {column: coefficient} maps.
    """

    def __init__(self):
        self.bounds = []
        self.names = []
        self.blocks = {}
        self.constraints = []
        self.objective = {}
        self.sense = 'max'

    def add_variables(self, block: str, keys: Iterable[Hashable], lower=0, upper=None) -> Dict:
        columns = {}
        for key in keys:
            columns[key] = len(self.bounds)
            self.bounds.append((lower, upper))
            self.names.append((block, key))
        self.blocks[block] = columns
        return columns

    def add_variable(self, name, lower=0, upper=None):
        return self.add_variables(name, [name], lower, upper)[name]

    def add_constraint(self, terms, relation, rhs):
        self.constraints.append((dict(terms), relation, rhs))
        return len(self.constraints) - 1

    def set_objective(self, terms, sense='max'):
        self.objective = dict(terms)
        self.sense = sense

    def build(self):
        width = len(self.bounds)

        def dense(terms):
            row = [ZERO] * width
            for col, coef in terms.items():
                row[col] += as_fraction(coef)
            return row

        return LinearProgram(dense(self.objective),
                             [(dense(t), rel, rhs) for t, rel, rhs in self.constraints],
                             self.bounds, self.sense)

    def solve(self) -> LpOutcome:
        return solve(self.build())

    def values(self, outcome, block):
        """Solution values of one block, keyed as it was added"""
        return {key: outcome.solution[col] for key, col in self.blocks[block].items()}


def solve_linear_system(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """Unique exact solution of rows . x = rhs, or None when singular or inconsistent"""
    if not rows:
        return None
    m = [[as_fraction(a) for a in row] for row in rows]
    t = [as_fraction(b) for b in rhs]
    n_rows = len(m)
    n_cols = len(m[0])
    pivot_row = 0
    pivots = []
    for pivot_col in range(n_cols):
        for i in range(pivot_row, n_rows):
            if m[i][pivot_col] != 0:
                break
        else:
            return None
        if i != pivot_row:
            m[pivot_row], m[i] = m[i], m[pivot_row]
            t[pivot_row], t[i] = t[i], t[pivot_row]
        fp = m[pivot_row][pivot_col]
        for r in range(pivot_row + 1, n_rows):
            fr = m[r][pivot_col]
            if fr == 0:
                continue
            frp = fr / fp
            for c in range(pivot_col, n_cols):
                m[r][c] -= m[pivot_row][c] * frp
            t[r] -= t[pivot_row] * frp
        pivots.append(pivot_col)
        pivot_row += 1
    for r in range(pivot_row, n_rows):
        if t[r] != 0:
            return None

    solution = [ZERO] * n_cols
    for r in range(n_cols - 1, -1, -1):
        s = t[r]
        for c in range(r + 1, n_cols):
            s -= m[r][c] * solution[c]
        solution[r] = s / m[r][r]
    return solution
