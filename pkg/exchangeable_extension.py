"""
Exchangeable Extension
Exchangeable natural extension of local assessments on X^N, and extension of
a count model for n variables to one for n + k variables.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from combinatorics import CountDomain, CountGamble, Gamble, Space, hypergeometric_weight, muhy_gamble
from errors import BadParameter, DomainMismatch, NoExchangeableDominator, NotExtendable, SureLoss
from exchangeability import induce_count_assessment
from lower_prevision import (Assessment, CredalSet, Model, add_lower_bound, add_membership,
                             avoids_sure_loss, dominating_masses, expectation, natural_extension)
from rational_lp import LpBuilder, LpStatus, feasible

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def vacuous_exchangeable(f: Gamble) -> Fraction:
    """Smallest exchangeable coherent lower prevision: min over m of MuHy(f|m)"""
    return muhy_gamble(f).min()


# ==================== EXCHANGEABLE NATURAL EXTENSION ====================

class EneProblem:
    """Local lower prices on arbitrary gambles on X^N"""

    def __init__(self, local: Assessment):
        if local.domain.kind != 'tuple':
            raise DomainMismatch(f"local assessments live on a product space, not {local.domain}")
        self.local = local

    @property
    def space(self) -> Space:
        return self.local.domain.space

    @property
    def arity(self) -> int:
        return self.local.domain.arity

    def __repr__(self):
        return f"EneProblem({self.local})"


def induced_count_assessment(problem: EneProblem) -> Assessment:
    """Count assessment of MuHy images; gambles with equal images take the largest price"""
    induced = induce_count_assessment(problem.local)
    best = {}
    for g, price in induced.items:
        if g not in best or price > best[g]:
            best[g] = price
    return Assessment(induced.domain, best.items())


def ene_exists(problem: EneProblem) -> Tuple[bool, Dict]:
    """Is there an exchangeable coherent lower prevision dominating the local assessment?"""
    return avoids_sure_loss(induced_count_assessment(problem))


def ene_value(problem: EneProblem, f: Gamble) -> Fraction:
    """Exchangeable natural extension at f"""
    q = induced_count_assessment(problem)
    try:
        return natural_extension(q, muhy_gamble(f))
    except SureLoss as error:
        raise NoExchangeableDominator(certificate=error.certificate)


# ==================== EXTENSION TO MORE VARIABLES ====================

class ExtensionProblem:
    """A count model at level n to be extended to level n + k"""

    def __init__(self, space: Space, n: int, k: int, base: Model):
        if k < 0:
            raise BadParameter('k', f"extension gap must be non-negative, got {k}")
        if base.domain != CountDomain(space, n):
            raise DomainMismatch(f"base model lives on {base.domain}, expected level {n}")
        self.space = space
        self.n = n
        self.k = k
        self.base = base

    @property
    def target(self) -> CountDomain:
        return CountDomain(self.space, self.n + self.k)

    def __repr__(self):
        return f"ExtensionProblem(level {self.n} -> {self.n + self.k})"


def _weights(problem: ExtensionProblem) -> List[List[Fraction]]:
    """W[m][mu]: probability of composition m among n draws from an urn mu"""
    source = CountDomain(problem.space, problem.n).points
    target = problem.target.points
    return [[hypergeometric_weight(m, mu) for mu in target] for m in source]


def _marginal_exprs(weights, columns):
    return [{columns[j]: w for j, w in enumerate(row) if w} for row in weights]


def _extreme_masses(problem: ExtensionProblem):
    if isinstance(problem.base, CredalSet):
        return problem.base.masses
    ok, certificate = avoids_sure_loss(problem.base)
    if not ok:
        raise SureLoss(certificate=certificate)
    return dominating_masses(problem.base)


def _separating_gamble(problem: ExtensionProblem, weights) -> Dict:
    """max base(g) - t subject to g_bar <= t and 0 <= g <= 1"""
    builder = LpBuilder()
    g = builder.add_variables('g', range(len(weights)), lower=0, upper=1)
    s = builder.add_variable('s', lower=None)
    t = builder.add_variable('t', lower=None)
    for j in range(len(weights[0])):
        row = {g[i]: weights[i][j] for i in range(len(weights)) if weights[i][j]}
        row[t] = -1
        builder.add_constraint(row, '<=', 0)
    add_lower_bound(builder, problem.base, [{g[i]: 1} for i in range(len(weights))], s)
    builder.set_objective({s: 1, t: -1}, 'max')
    outcome = builder.solve()
    values = builder.values(outcome, 'g')
    domain = CountDomain(problem.space, problem.n)
    gamble = CountGamble._raw(domain, [values[i] for i in range(len(weights))])
    return {'separating_gamble': gamble, 'base_value': outcome.solution[s],
            'marginal_sup': outcome.solution[t]}


def _dominating_extension(problem: ExtensionProblem, weights):
    """A mass q' on N_X^{n+k} whose marginal lies in M(base), or None"""
    builder = LpBuilder()
    q_prime = builder.add_variables('q', range(len(problem.target.points)))
    add_membership(builder, problem.base, _marginal_exprs(weights, q_prime))
    outcome = builder.solve()
    if not outcome.is_optimal:
        return None
    values = builder.values(outcome, 'q')
    return CountGamble._raw(problem.target, [values[j] for j in range(len(values))])


def _reproduction(problem: ExtensionProblem, weights) -> Dict:
    """Check that every extreme mass of the base is itself a marginal"""
    width = len(problem.target.points)
    witnesses = []
    for index, q in enumerate(_extreme_masses(problem)):
        constraints = [([1] * width, '=', 1)]
        for i, row in enumerate(weights):
            constraints.append((row, '=', q[i]))
        ok, witness = feasible(constraints, width=width)
        if not ok:
            logger.info("extreme mass %d of the base is not a marginal at level %d",
                        index, problem.n + problem.k)
            return {'reproduces_base': False, 'unreachable_vertex': tuple(q), 'vertex_witnesses': witnesses}
        witnesses.append(CountGamble._raw(problem.target, witness))
    return {'reproduces_base': True, 'unreachable_vertex': None, 'vertex_witnesses': witnesses}


def extendable(problem: ExtensionProblem) -> Tuple[bool, Dict]:
    """
    Is there an exchangeable model on n + k variables whose count marginal
    dominates the base, i.e. max g_bar >= base(g) for every g at level n?

    On success the certificate holds such a mass q' ('witness') and the
    reproduction check: whether every extreme mass of the base is a marginal,
    so that the base is recovered exactly. On failure it holds a gamble g in
    [0, 1] with base(g) > max g_bar.
    """
    if isinstance(problem.base, Assessment):
        ok, certificate = avoids_sure_loss(problem.base)
        if not ok:
            raise SureLoss(certificate=certificate)
    weights = _weights(problem)
    witness = _dominating_extension(problem, weights)
    if witness is None:
        certificate = _separating_gamble(problem, weights)
        logger.info("level %d model does not extend to level %d", problem.n, problem.n + problem.k)
        return False, certificate
    certificate = {'witness': witness}
    certificate.update(_reproduction(problem, weights))
    return True, certificate


def check_extension_witness(problem: ExtensionProblem, q_prime: Union[CountGamble, Sequence]) -> bool:
    """Is q' a mass on N_X^{n+k} whose marginal lies in M(base)?"""
    values = list(q_prime.values) if isinstance(q_prime, CountGamble) else [Fraction(v) for v in q_prime]
    if len(values) != len(problem.target.points):
        raise DomainMismatch(f"witness has {len(values)} entries, level {problem.n + problem.k} "
                             f"has {len(problem.target.points)}")
    if any(v < 0 for v in values) or sum(values) != 1:
        return False
    marginal = [sum((w * v for w, v in zip(row, values) if w), ZERO) for row in _weights(problem)]
    base = problem.base
    if isinstance(base, Assessment):
        return all(expectation(marginal, gamble) >= price for gamble, price in base.items)
    # marginal must be a convex combination of the base masses
    constraints = [([1] * len(base.masses), '=', 1)]
    for x, value in enumerate(marginal):
        constraints.append(([mass[x] for mass in base.masses], '=', value))
    return feasible(constraints, width=len(base.masses))[0]


def smallest_extension(problem: ExtensionProblem, h: CountGamble, require_reproduction: bool = False,
                       method: str = 'primal') -> Fraction:
    """
    Lower prevision at h of the smallest exchangeable model on n + k variables
    whose marginal dominates the base.

    primal: sup { base(g) : g_bar <= h }, with g and the base's own LP
    variables solved together; dual: min q'.h over masses q' whose marginal
    lies in M(base). With require_reproduction the base must also be
    recovered exactly as the marginal of the extension.
    """
    if h.domain != problem.target:
        raise DomainMismatch(f"gamble lives on {h.domain}, extension on {problem.target}")
    ok, certificate = extendable(problem) if require_reproduction else (True, None)
    if not ok:
        raise NotExtendable(certificate=certificate)
    if require_reproduction and not certificate['reproduces_base']:
        raise NotExtendable("the base is not the marginal of any extension", certificate)

    weights = _weights(problem)
    builder = LpBuilder()
    if method == 'primal':
        g = builder.add_variables('g', range(len(weights)), lower=None)
        s = builder.add_variable('s', lower=None)
        for j, value in enumerate(h.values):
            row = {g[i]: weights[i][j] for i in range(len(weights)) if weights[i][j]}
            builder.add_constraint(row, '<=', value)
        add_lower_bound(builder, problem.base, [{g[i]: 1} for i in range(len(weights))], s)
        builder.set_objective({s: 1}, 'max')
    elif method == 'dual':
        q_prime = builder.add_variables('q', range(len(h.values)))
        add_membership(builder, problem.base, _marginal_exprs(weights, q_prime))
        builder.set_objective({q_prime[j]: v for j, v in enumerate(h.values) if v}, 'min')
    else:
        raise BadParameter('method', f"unknown method {method!r}")
    outcome = builder.solve()
    if outcome.status is not LpStatus.OPTIMAL:
        # unbounded primal and infeasible dual both mean no dominating extension
        ok, certificate = extendable(problem)
        raise NotExtendable(f"extension program is {outcome.status.value}", certificate)
    return outcome.optimum
