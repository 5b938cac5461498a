"""
Lower Prevision Calculus
Avoiding sure loss, coherence, natural extension and lower envelopes of
finite credal sets, for gambles on a TupleDomain or a CountDomain.

A model is either an Assessment (gambles with lower prices) or a CredalSet
(a finite list of mass functions). Both describe a set of dominating mass
functions M(model); every value here is an exact LP optimum over that set.
"""

import logging
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from combinatorics import FiniteGamble, as_fraction, gamble_for, normalize_point
from errors import BadParameter, CapExceeded, DomainMismatch, EmptySet, InvalidMass, SureLoss
from rational_lp import LpBuilder, LpStatus, solve_linear_system
from settings import vertex_cap

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


class Assessment:
    """Lower prices P(f_k) for a finite sequence of gambles on one domain"""

    def __init__(self, domain, items: Iterable[Tuple[FiniteGamble, object]] = ()):
        self.domain = domain
        self.items = []
        for gamble, price in items:
            if gamble.domain != domain:
                raise DomainMismatch(f"assessed gamble lives on {gamble.domain}, assessment on {domain}")
            self.items.append((gamble, as_fraction(price)))

    def with_item(self, gamble: FiniteGamble, price) -> 'Assessment':
        return Assessment(self.domain, self.items + [(gamble, price)])

    @property
    def gambles(self) -> List[FiniteGamble]:
        return [g for g, _ in self.items]

    @property
    def prices(self) -> List[Fraction]:
        return [p for _, p in self.items]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self):
        return f"Assessment({self.domain}, {len(self.items)} items)"


class CredalSet:
    """Finite set of mass functions; stands for its lower envelope"""

    def __init__(self, domain, masses: Iterable = ()):
        self.domain = domain
        self.masses = []
        size = len(domain.points)
        for index, mass in enumerate(masses):
            if isinstance(mass, dict):
                values = [ZERO] * size
                for point, value in mass.items():
                    values[domain.position(normalize_point(domain, point))] = as_fraction(value)
            else:
                values = [as_fraction(v) for v in mass]
                if len(values) != size:
                    raise InvalidMass(f"mass {index} has {len(values)} entries, domain has {size}")
            if any(v < 0 for v in values):
                raise InvalidMass(f"mass {index} has a negative entry")
            if sum(values) != 1:
                raise InvalidMass(f"mass {index} sums to {sum(values)}, not 1")
            self.masses.append(tuple(values))

    def as_dicts(self) -> List[Dict]:
        """Sparse point -> mass maps"""
        points = self.domain.points
        return [{points[i]: v for i, v in enumerate(mass) if v} for mass in self.masses]

    def __len__(self):
        return len(self.masses)

    def __repr__(self):
        return f"CredalSet({self.domain}, {len(self.masses)} masses)"


Model = Union[Assessment, CredalSet]


def expectation(mass: Sequence[Fraction], f) -> Fraction:
    """Expectation of a gamble (or a plain value sequence in domain order) under a mass"""
    values = f.values if isinstance(f, FiniteGamble) else f
    return sum((p * v for p, v in zip(mass, values) if p), ZERO)


def _check_domain(model, f):
    if f.domain != model.domain:
        raise DomainMismatch(f"gamble lives on {f.domain}, model on {model.domain}")


# ==================== LP FRAGMENTS ====================

def add_membership(builder: LpBuilder, model: Model, p_exprs: Sequence[Dict[int, object]]):
    """Constrain the linear expressions p_exprs (one per domain point) to lie in M(model)"""
    total = {}
    for expr in p_exprs:
        for col, coef in expr.items():
            total[col] = total.get(col, 0) + coef
    builder.add_constraint(total, '=', 1)

    if isinstance(model, Assessment):
        for gamble, price in model.items:
            row = {}
            for expr, value in zip(p_exprs, gamble.values):
                if value:
                    for col, coef in expr.items():
                        row[col] = row.get(col, 0) + value * coef
            builder.add_constraint(row, '>=', price)
    else:
        if not model.masses:
            raise EmptySet("credal set has no mass functions")
        weights = builder.add_variables(f"w{len(builder.blocks)}", range(len(model.masses)))
        builder.add_constraint({col: 1 for col in weights.values()}, '=', 1)
        for x, expr in enumerate(p_exprs):
            row = dict(expr)
            for i, mass in enumerate(model.masses):
                if mass[x]:
                    row[weights[i]] = row.get(weights[i], 0) - mass[x]
            builder.add_constraint(row, '=', 0)


def add_lower_bound(builder: LpBuilder, model: Model, g_exprs: Sequence[Dict[int, object]],
                    bound_col: int, offsets: Optional[Sequence[Fraction]] = None):
    """
    Constrain lower(model, g) >= variable bound_col.

    g(x) is the linear expression g_exprs[x] plus the constant offsets[x].
    """
    if offsets is None:
        offsets = [ZERO] * len(g_exprs)
    if isinstance(model, Assessment):
        lambdas = builder.add_variables(f"lambda{len(builder.blocks)}", range(len(model.items)))
        for x, expr in enumerate(g_exprs):
            row = dict(expr)
            row[bound_col] = row.get(bound_col, 0) - 1
            for k, (gamble, price) in enumerate(model.items):
                gain = gamble.values[x] - price
                if gain:
                    row[lambdas[k]] = row.get(lambdas[k], 0) - gain
            builder.add_constraint(row, '>=', -offsets[x])
    else:
        if not model.masses:
            raise EmptySet("credal set has no mass functions")
        for mass in model.masses:
            row = {bound_col: -1}
            for expr, p in zip(g_exprs, mass):
                if p:
                    for col, coef in expr.items():
                        row[col] = row.get(col, 0) + p * coef
            builder.add_constraint(row, '>=', -expectation(mass, offsets))


def _mass_builder(model: Model):
    builder = LpBuilder()
    masses = builder.add_variables('p', range(len(model.domain.points)))
    add_membership(builder, model, [{masses[x]: 1} for x in range(len(model.domain.points))])
    return builder, masses


# ==================== SURE LOSS AND COHERENCE ====================

def _integer_multipliers(lambdas: Sequence[Fraction]) -> List[int]:
    scale = lcm(*(l.denominator for l in lambdas)) if lambdas else 1
    ints = [int(l * scale) for l in lambdas]
    common = 0
    for value in ints:
        common = gcd(common, value)
    return [v // common for v in ints] if common else ints


def avoids_sure_loss(a: Assessment) -> Tuple[bool, Dict]:
    """
    Check whether no non-negative combination of assessed transactions loses surely.

    Returns (True, {'mass': ...}) with a dominating mass function, or
    (False, {'multipliers': [...], 'sup_gain': ...}) with integer multipliers
    whose combined gain is negative everywhere.
    """
    builder, masses = _mass_builder(a)
    outcome = builder.solve()
    if outcome.is_optimal:
        values = builder.values(outcome, 'p')
        points = a.domain.points
        return True, {'mass': {points[x]: v for x, v in values.items() if v}}

    builder = LpBuilder()
    lambdas = builder.add_variables('lambda', range(len(a.items)))
    t = builder.add_variable('t', lower=None)
    builder.add_constraint({col: 1 for col in lambdas.values()}, '=', 1)
    for x in range(len(a.domain.points)):
        row = {t: -1}
        for k, (gamble, price) in enumerate(a.items):
            row[lambdas[k]] = gamble.values[x] - price
        builder.add_constraint(row, '<=', 0)
    builder.set_objective({t: 1}, 'min')
    outcome = builder.solve()
    multipliers = _integer_multipliers([outcome.solution[lambdas[k]] for k in range(len(a.items))])
    sup_gain = max(sum((m * (gamble.values[x] - price)
                        for m, (gamble, price) in zip(multipliers, a.items)), ZERO)
                   for x in range(len(a.domain.points)))
    logger.info("sure loss: multipliers %s give supremum gain %s", multipliers, sup_gain)
    return False, {'multipliers': multipliers, 'sup_gain': sup_gain}


def natural_extension(a: Assessment, f: FiniteGamble, method: str = 'dual') -> Fraction:
    """
    Smallest coherent lower prevision dominating a, evaluated at f.

    method='dual' minimizes the expectation of f over M(a); method='primal'
    maximizes the price s with f - sum_k lambda_k (f_k - P(f_k)) >= s.
    """
    _check_domain(a, f)
    if method == 'dual':
        builder, masses = _mass_builder(a)
        builder.set_objective({masses[x]: v for x, v in enumerate(f.values) if v}, 'min')
        outcome = builder.solve()
        if outcome.status is LpStatus.INFEASIBLE:
            raise SureLoss(certificate=avoids_sure_loss(a)[1])
        return outcome.optimum
    if method == 'primal':
        builder = LpBuilder()
        s = builder.add_variable('s', lower=None)
        add_lower_bound(builder, a, [{} for _ in f.values], s, offsets=f.values)
        builder.set_objective({s: 1}, 'max')
        outcome = builder.solve()
        if outcome.status is LpStatus.UNBOUNDED:
            raise SureLoss(certificate=avoids_sure_loss(a)[1])
        return outcome.optimum
    raise BadParameter('method', f"unknown method {method!r}")


def upper_natural_extension(a: Assessment, f: FiniteGamble) -> Fraction:
    return -natural_extension(a, -f)


def is_coherent(a: Assessment) -> Tuple[bool, Optional[Dict]]:
    """(True, None), or (False, first violation) where the violation names the raised item"""
    ok, certificate = avoids_sure_loss(a)
    if not ok:
        return False, dict(certificate, reason='sure loss')
    for k, (gamble, price) in enumerate(a.items):
        value = natural_extension(a, gamble)
        if value > price:
            logger.info("item %d price %s can be raised to %s", k, price, value)
            return False, {'reason': 'price raised', 'item': k, 'price': price, 'natural_extension': value}
    return True, None


# ==================== ENVELOPES AND LINEARITY ====================

def envelope_value(c: CredalSet, f: FiniteGamble) -> Fraction:
    """Minimum expectation of f over the mass functions of c"""
    _check_domain(c, f)
    if not c.masses:
        raise EmptySet("credal set has no mass functions")
    return min(expectation(mass, f) for mass in c.masses)


def lower_value(model: Model, f: FiniteGamble) -> Fraction:
    if isinstance(model, CredalSet):
        return envelope_value(model, f)
    return natural_extension(model, f)


def upper_value(model: Model, f: FiniteGamble) -> Fraction:
    return -lower_value(model, -f)


def _indicators(domain):
    size = len(domain.points)
    for x in range(size):
        yield x, gamble_for(domain, [1 if y == x else 0 for y in range(size)])


def is_linear(model: Model) -> bool:
    """True iff lower and upper values agree on every point indicator (they then agree everywhere)"""
    return all(lower_value(model, ind) == upper_value(model, ind) for _, ind in _indicators(model.domain))


def linear_mass(model: Model) -> Optional[Tuple[Fraction, ...]]:
    """The only dominating mass function when the model is linear, None otherwise"""
    if not is_linear(model):
        return None
    return tuple(lower_value(model, ind) for _, ind in _indicators(model.domain))


def dominating_masses(a: Assessment, cap: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """
    Extreme points of M(a), by enumerating sets of active inequalities.

    Inequalities are p(x) >= 0 for every point and one row per item; a vertex
    makes |points| - 1 of them tight alongside sum p = 1.
    """
    ok, certificate = avoids_sure_loss(a)
    if not ok:
        raise SureLoss(certificate=certificate)
    size = len(a.domain.points)
    inequalities = []
    for x in range(size):
        inequalities.append(([1 if y == x else 0 for y in range(size)], ZERO))
    for gamble, price in a.items:
        inequalities.append((list(gamble.values), price))

    n_choose = size - 1
    candidates = 1
    for i in range(n_choose):
        candidates = candidates * (len(inequalities) - i) // (i + 1)
    limit = vertex_cap(cap)
    if candidates > limit:
        raise CapExceeded("active sets", candidates, limit)

    vertices = []
    seen = set()
    for active in combinations(range(len(inequalities)), n_choose):
        rows = [[1] * size] + [inequalities[i][0] for i in active]
        rhs = [1] + [inequalities[i][1] for i in active]
        p = solve_linear_system(rows, rhs)
        if p is None:
            continue
        p = tuple(p)
        if p in seen:
            continue
        if all(sum((c * v for c, v in zip(coefs, p)), ZERO) >= b for coefs, b in inequalities):
            seen.add(p)
            vertices.append(p)
    logger.debug("%d vertices from %d active sets", len(vertices), candidates)
    return vertices


def to_credal_set(model: Model, cap: Optional[int] = None) -> CredalSet:
    if isinstance(model, CredalSet):
        return model
    return CredalSet(model.domain, dominating_masses(model, cap))


def vacuous_assessment(domain) -> Assessment:
    return Assessment(domain, [])
