"""
Exchangeability
Permutation invariance of lower previsions, the count-vector representation
of exchangeable models and time consistency of families of count models.

An exchangeable model on X^N is carried canonically by its count model on
N_X^N: lower(model, f) = lower(count model, MuHy(f|.)).
"""

import logging
import random
from fractions import Fraction
from itertools import combinations as pairs_of
from typing import Dict, Mapping, Optional, Tuple

from combinatorics import (CountDomain, CountGamble, Gamble, Space, TupleDomain, atom_size, count_vector,
                           hypergeometric_weight, marginalize, muhy_gamble, symmetrize)
from errors import BadParameter, DomainMismatch, InvalidFamily
from lower_prevision import (Assessment, CredalSet, Model, is_linear, lower_value,
                             to_credal_set)
from settings import TC_COMBINATIONS, TC_SEED

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def _require_tuple_domain(model):
    if model.domain.kind != 'tuple':
        raise DomainMismatch(f"expected a model on a product space, got {model.domain}")


def is_exchangeable_envelope(c: CredalSet) -> bool:
    """Every mass is constant on invariant atoms, i.e. p(x) = p(pi x) for all transpositions"""
    _require_tuple_domain(c)
    space = c.domain.space
    for mass in c.masses:
        atom_value = {}
        for z, p in zip(c.domain.points, mass):
            m = count_vector(space, z)
            if atom_value.setdefault(m, p) != p:
                return False
    return True


def is_exchangeable(model: Model) -> Tuple[bool, Optional[Dict]]:
    """
    Check E(pi f - f) >= 0 for adjacent transpositions pi and point indicators f.

    Adjacent transpositions generate all permutations, and with pi an involution
    the indicator check covers both signs of pi f - f, so this is exact.
    """
    _require_tuple_domain(model)
    domain = model.domain
    if isinstance(model, CredalSet):
        return is_exchangeable_envelope(model), None
    size = len(domain.points)
    for k in range(domain.arity - 1):
        for x, z in enumerate(domain.points):
            swapped = z[:k] + (z[k + 1], z[k]) + z[k + 2:]
            y = domain.position(swapped)
            if y == x:
                continue
            values = [0] * size
            values[y] += 1
            values[x] -= 1
            # pi I_z is the indicator of the swapped tuple
            gamble = Gamble._raw(domain, [Fraction(v) for v in values])
            value = lower_value(model, gamble)
            if value < 0:
                return False, {'transposition': (k, k + 1), 'point': z, 'value': value}
    return True, None


def induce_count_assessment(a: Assessment) -> Assessment:
    """Map every (f, P(f)) to (MuHy(f|.), P(f)) on the count space"""
    _require_tuple_domain(a)
    domain = CountDomain(a.domain.space, a.domain.arity)
    return Assessment(domain, [(muhy_gamble(f), price) for f, price in a.items])


def count_credal_set(c: CredalSet) -> CredalSet:
    """Count distributions q(m) = sum of p over the atom [m]"""
    _require_tuple_domain(c)
    space = c.domain.space
    domain = CountDomain(space, c.domain.arity)
    masses = []
    for mass in c.masses:
        q = [ZERO] * len(domain.points)
        for z, p in zip(c.domain.points, mass):
            if p:
                q[domain.position(count_vector(space, z))] += p
        masses.append(q)
    return CredalSet(domain, masses)


def tuple_credal_set(q: CredalSet) -> CredalSet:
    """Exchangeable masses p(z) = q(T(z)) / nu(T(z)) on X^N"""
    if q.domain.kind != 'count':
        raise DomainMismatch(f"expected a count model, got {q.domain}")
    space = q.domain.space
    domain = TupleDomain(space, q.domain.arity)
    masses = []
    for mass in q.masses:
        masses.append([mass[q.domain.position(m)] / atom_size(m)
                       for m in (count_vector(space, z) for z in domain.points)])
    return CredalSet(domain, masses)


def to_count_model(model: Model) -> Model:
    """The count-space model carrying an exchangeable tuple-space model"""
    if isinstance(model, CredalSet):
        return count_credal_set(model)
    return induce_count_assessment(model)


def reconstruct_lower_prevision(q: Model, f) -> Fraction:
    """Q(MuHy(f|.)) for a count model q at level N and a gamble f on X^N"""
    if q.domain != CountDomain(f.space, f.arity):
        raise DomainMismatch(f"count model on {q.domain} cannot evaluate a gamble on {f.domain}")
    return lower_value(q, muhy_gamble(f))


def verify_finite_representation(model: Model, f) -> Dict:
    """E(f - f_hat) = E(f_hat - f) = 0, E(f) = E(f_hat) = Q(MuHy(f|.)) for an exchangeable model"""
    _require_tuple_domain(model)
    f_hat = symmetrize(f)
    report = {
        'lower_f_minus_fhat': lower_value(model, f - f_hat),
        'lower_fhat_minus_f': lower_value(model, f_hat - f),
        'lower_f': lower_value(model, f),
        'lower_fhat': lower_value(model, f_hat),
        'count_value': reconstruct_lower_prevision(to_count_model(model), f),
    }
    report['holds'] = (report['lower_f_minus_fhat'] == 0 and report['lower_fhat_minus_f'] == 0
                       and report['lower_f'] == report['lower_fhat'] == report['count_value'])
    return report


# ==================== FAMILIES OF COUNT MODELS ====================

class CountFamily:
    """Count models Q^n on N_X^n for the contiguous levels n = 1..n_max"""

    def __init__(self, space: Space, levels: Mapping[int, Model]):
        if not levels:
            raise InvalidFamily("a count family needs at least one level")
        n_max = max(levels)
        if sorted(levels) != list(range(1, n_max + 1)):
            raise InvalidFamily(f"levels must be 1..{n_max}, got {sorted(levels)}")
        for n, model in levels.items():
            if model.domain != CountDomain(space, n):
                raise InvalidFamily(f"level {n} model lives on {model.domain}")
        self.space = space
        self.levels = dict(levels)

    @property
    def n_max(self) -> int:
        return max(self.levels)

    def model(self, n: int) -> Model:
        try:
            return self.levels[n]
        except KeyError:
            raise InvalidFamily(f"level {n} is outside 1..{self.n_max}")

    def value(self, n: int, h: CountGamble) -> Fraction:
        return lower_value(self.model(n), h)

    def __repr__(self):
        return f"CountFamily({list(self.space.labels)!r}, levels 1..{self.n_max})"


def _tc_mismatch(fam, n, k, h, stage):
    level_value = fam.value(n, h)
    marginal_value = fam.value(n + k, marginalize(h, n + k))
    if level_value != marginal_value:
        logger.info("time consistency fails between levels %d and %d (%s stage)", n, n + k, stage)
        return {'stage': stage, 'gamble': h, 'level_value': level_value, 'marginal_value': marginal_value}
    return None


def check_time_consistency(fam: CountFamily, n: int, k: int, combinations: Optional[int] = None,
                           seed: Optional[int] = None) -> Tuple[bool, Dict]:
    """
    Compare Q^n(h) with Q^{n+k}(h_bar) on a test set of count gambles h at level n.

    The test set is every indicator, every sum of two indicators, then
    `combinations` seeded random non-negative integer combinations. When both
    levels are linear the indicator stage already decides the question.
    """
    if k < 1:
        raise BadParameter('k', f"gap must be positive, got {k}")
    fam.model(n)
    fam.model(n + k)
    domain = CountDomain(fam.space, n)
    size = len(domain.points)

    def indicator(*positions):
        values = [ZERO] * size
        for i in positions:
            values[i] += 1
        return CountGamble._raw(domain, values)

    tested = 0
    for i in range(size):
        tested += 1
        witness = _tc_mismatch(fam, n, k, indicator(i), 'indicator')
        if witness:
            return False, witness
    exhaustive = is_linear(fam.model(n)) and is_linear(fam.model(n + k))
    if exhaustive:
        return True, {'exhaustive': True, 'tested': tested}

    for i, j in pairs_of(range(size), 2):
        tested += 1
        witness = _tc_mismatch(fam, n, k, indicator(i, j), 'pair')
        if witness:
            return False, witness

    rng = random.Random(TC_SEED if seed is None else seed)
    for _ in range(TC_COMBINATIONS if combinations is None else combinations):
        h = CountGamble._raw(domain, [Fraction(rng.randint(0, 3)) for _ in range(size)])
        tested += 1
        witness = _tc_mismatch(fam, n, k, h, 'random')
        if witness:
            return False, witness
    return True, {'exhaustive': False, 'tested': tested}


def time_consistency_matrix(fam: CountFamily, combinations: Optional[int] = None,
                            seed: Optional[int] = None):
    """Verdicts for every level pair n < n + k within the family"""
    rows = []
    for n in range(1, fam.n_max):
        for k in range(1, fam.n_max - n + 1):
            ok, info = check_time_consistency(fam, n, k, combinations, seed)
            rows.append({'n': n, 'k': k, 'consistent': ok,
                         'exhaustive': bool(ok and info.get('exhaustive')),
                         'witness': None if ok else info})
    return rows


def marginal_count_model(model: Model, n: int) -> CredalSet:
    """Level-n count distributions induced by a count model at a higher level"""
    if model.domain.kind != 'count':
        raise DomainMismatch(f"expected a count model, got {model.domain}")
    source = to_credal_set(model)
    domain = CountDomain(model.domain.space, n)
    if n > model.domain.arity:
        raise DomainMismatch(f"cannot marginalize level {model.domain.arity} to level {n}")
    masses = []
    for mass in source.masses:
        masses.append([sum((q * hypergeometric_weight(m, mu)
                            for mu, q in zip(model.domain.points, mass) if q), ZERO)
                       for m in domain.points])
    return CredalSet(domain, masses)


def vacuous_count_family(space: Space, n_max: int) -> CountFamily:
    """Vacuous count model at every level 1..n_max"""
    return CountFamily(space, {n: Assessment(CountDomain(space, n), []) for n in range(1, n_max + 1)})
