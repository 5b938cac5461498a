"""
Representation of Exchangeable Sequences
Multinomial previsions, representing lower previsions on simplex polynomials,
frequency and sample-mean distributions, mean-square bounds and binary
moment sequences.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from bernstein_simplex import (BernsteinPoly, SimplexPoint, basis_eval, decompose, elevate,
                               linear_form_power_series, monomial_degree, monomial_value)
from combinatorics import CountDomain, CountGamble, Gamble, Space, as_fraction
from errors import (BadParameter, DegreeTooLow, DegreeUnavailable, DomainMismatch, InvalidFamily,
                    InvalidSimplexPoint)
from exchangeability import CountFamily, check_time_consistency
from lower_prevision import CredalSet, Model, lower_value, upper_value, vacuous_assessment

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def comn(g: CountGamble, theta: SimplexPoint) -> Fraction:
    """Count multinomial prevision sum_m g(m) B_m(theta)"""
    return sum((v * basis_eval(m, theta) for m, v in g.items() if v), ZERO)


def mn(f: Gamble, theta: SimplexPoint) -> Fraction:
    """Multinomial prevision sum_z f(z) prod_k theta_{z_k}"""
    if theta.space != f.space:
        raise DomainMismatch("gamble and simplex point live on different spaces")
    total = ZERO
    for z, value in f.items():
        if value:
            weight = Fraction(1)
            for label in z:
                weight *= theta[label]
            total += value * weight
    return total


class RepresentingPrevision:
    """
    Lower prevision on polynomials over the simplex.

    Backed either by a time-consistent CountFamily ('family' mode, levels up to
    n_max) or by a finite set of mixtures of multinomials ('mixture' mode,
    every level available). A mixture is a list of (weight, SimplexPoint); the
    value of a polynomial is the minimum over mixtures of its mixed value.

    The 'vacuous' mode puts the vacuous count model at every level, so a
    polynomial gets the smallest of its Bernstein coefficients at the chosen
    level. That value grows with the level towards the minimum of the
    polynomial on the simplex.
    """

    def __init__(self, space: Space, family: Optional[CountFamily] = None,
                 mixtures: Optional[Sequence[Sequence[Tuple[object, SimplexPoint]]]] = None,
                 vacuous: bool = False):
        if (family is not None) + (mixtures is not None) + vacuous != 1:
            raise BadParameter('family', "give exactly one of family, mixtures or vacuous")
        self.space = space
        self.family = family
        self.vacuous = vacuous
        self.mixtures = None
        if mixtures is not None:
            if not mixtures:
                raise InvalidSimplexPoint("at least one mixture is needed")
            self.mixtures = []
            for mixture in mixtures:
                weighted = [(as_fraction(w), theta) for w, theta in mixture]
                if any(w < 0 for w, _ in weighted) or sum(w for w, _ in weighted) != 1:
                    raise InvalidSimplexPoint("mixture weights must be non-negative and sum to one")
                for _, theta in weighted:
                    if theta.space != space:
                        raise DomainMismatch("mixture point lives on another space")
                self.mixtures.append(weighted)
        elif family is not None and family.space != space:
            raise DomainMismatch("family lives on another space")

    @classmethod
    def precise(cls, space: Space, weighted_points: Sequence[Tuple[object, SimplexPoint]]):
        """A single mixture of multinomials"""
        return cls(space, mixtures=[list(weighted_points)])

    @classmethod
    def envelope(cls, space: Space, points: Sequence[SimplexPoint]):
        """Lower envelope of the multinomials at the given points"""
        return cls(space, mixtures=[[(1, theta)] for theta in points])

    @classmethod
    def vacuous_backing(cls, space: Space):
        return cls(space, vacuous=True)

    @classmethod
    def from_family(cls, fam: CountFamily, combinations: Optional[int] = None,
                    seed: Optional[int] = None):
        """Wrap a count family after checking time consistency between all its levels"""
        for n in range(1, fam.n_max):
            for k in range(1, fam.n_max - n + 1):
                ok, info = check_time_consistency(fam, n, k, combinations, seed)
                if not ok:
                    raise InvalidFamily(f"levels {n} and {n + k} are not time consistent "
                                        f"({info['level_value']} != {info['marginal_value']})")
        return cls(fam.space, family=fam)

    @property
    def mode(self) -> str:
        if self.vacuous:
            return 'vacuous'
        return 'family' if self.family is not None else 'mixture'

    @property
    def n_max(self) -> Optional[int]:
        return self.family.n_max if self.family is not None else None

    def __repr__(self):
        if self.vacuous:
            return "RepresentingPrevision(vacuous)"
        if self.family is not None:
            return f"RepresentingPrevision(family, levels 1..{self.n_max})"
        return f"RepresentingPrevision(mixture, {len(self.mixtures)} mixtures)"


def count_model(r: RepresentingPrevision, n: int) -> Model:
    """Level-n count model: q(m) = sum_w w B_m(theta) for each mixture"""
    if r.vacuous:
        return vacuous_assessment(CountDomain(r.space, n))
    if r.family is not None:
        if n > r.n_max:
            raise DegreeUnavailable(f"level {n} is above the family's top level {r.n_max}")
        return r.family.model(n)
    domain = CountDomain(r.space, n)
    masses = []
    for mixture in r.mixtures:
        masses.append([sum((w * basis_eval(m, theta) for w, theta in mixture), ZERO)
                       for m in domain.points])
    return CredalSet(domain, masses)


def to_family(r: RepresentingPrevision, n_max: int) -> CountFamily:
    return CountFamily(r.space, {n: count_model(r, n) for n in range(1, n_max + 1)})


def multinomial_family(space: Space, theta: SimplexPoint, n_max: int) -> CountFamily:
    """Precise count multinomial family (binomial on a two-label space)"""
    return to_family(RepresentingPrevision.precise(space, [(1, theta)]), n_max)


def _as_bernstein(r: RepresentingPrevision, p, level: Optional[int]) -> BernsteinPoly:
    if isinstance(p, BernsteinPoly):
        degree = p.degree
    else:
        degree = monomial_degree(p)
    if level is None:
        level = max(degree, 1)
    if level < degree:
        raise DegreeTooLow(f"level {level} is below the polynomial degree {degree}")
    if r.n_max is not None and level > r.n_max:
        raise DegreeUnavailable(f"polynomial needs level {level}, family stops at {r.n_max}")
    if isinstance(p, BernsteinPoly):
        if p.space != r.space:
            raise DomainMismatch("polynomial lives on another space")
        return elevate(p, level - p.degree)
    return decompose(p, level, r.space)


def representing_value(r: RepresentingPrevision, p, level: Optional[int] = None) -> Fraction:
    """
    Lower prevision of a polynomial: the level-n count model at the degree-n
    Bernstein coefficients; n defaults to the polynomial degree.
    """
    b = _as_bernstein(r, p, level)
    return lower_value(count_model(r, b.degree), b.coefficients)


def upper_representing_value(r: RepresentingPrevision, p, level: Optional[int] = None) -> Fraction:
    b = _as_bernstein(r, p, level)
    return upper_value(count_model(r, b.degree), b.coefficients)


# ==================== FREQUENCIES AND SAMPLE MEANS ====================

def _level_model(src: Union[CountFamily, RepresentingPrevision], n: int) -> Model:
    if isinstance(src, RepresentingPrevision):
        return count_model(src, n)
    if n > src.n_max:
        raise DegreeUnavailable(f"level {n} is above the family's top level {src.n_max}")
    return src.model(n)


def _grid_gamble(space: Space, n: int, h: Union[Callable, Mapping]) -> CountGamble:
    domain = CountDomain(space, n)
    if callable(h):
        values = [as_fraction(h(SimplexPoint.from_counts(m))) for m in domain.points]
    else:
        values = [as_fraction(h[m]) for m in domain.points]
    return CountGamble._raw(domain, values)


def frequency_distribution_value(src: Union[CountFamily, RepresentingPrevision],
                                 h: Union[Callable, Mapping], n: int) -> Fraction:
    """Lower prevision of h(frequency vector) after n observations"""
    return lower_value(_level_model(src, n), _grid_gamble(src.space, n, h))


def frequency_convergence_report(src: Union[CountFamily, RepresentingPrevision], h: Mapping,
                                 levels: Sequence[int]) -> Dict:
    """
    Frequency values of a polynomial h (monomial form) at each level, with
    the representing value as the limit and the gaps to it.
    """
    r = src if isinstance(src, RepresentingPrevision) else RepresentingPrevision(src.space, family=src)
    limit = representing_value(r, h)
    rows = []
    for n in levels:
        value = frequency_distribution_value(src, lambda theta: monomial_value(h, theta), n)
        rows.append({'level': n, 'value': value, 'gap': abs(value - limit)})
    return {'values': rows, 'limit': limit}


def _label_values(f, space: Space) -> List[Fraction]:
    if isinstance(f, Gamble):
        if f.arity != 1 or f.space != space:
            raise DomainMismatch("expected a gamble on a single observation")
        return [f[(label,)] for label in space.labels]
    if isinstance(f, Mapping):
        return [as_fraction(f[label]) for label in space.labels]
    values = [as_fraction(v) for v in f]
    if len(values) != len(space):
        raise DomainMismatch(f"expected {len(space)} values, got {len(values)}")
    return values


def sample_mean(f_values: Sequence[Fraction], m) -> Fraction:
    """S(f|m/n), the mean of f over a sample with counts m"""
    return sum((v * c for v, c in zip(f_values, m.counts)), ZERO) / m.total


def sample_mean_distribution(src: Union[CountFamily, RepresentingPrevision], f, h: Callable,
                             n: int) -> Fraction:
    """Lower prevision of h(sample mean of f) after n observations"""
    values = _label_values(f, src.space)
    domain = CountDomain(src.space, n)
    g = CountGamble._raw(domain, [as_fraction(h(sample_mean(values, m))) for m in domain.points])
    return lower_value(_level_model(src, n), g)


def sample_mean_limit(r: RepresentingPrevision, f, h_coefficients: Sequence) -> Fraction:
    """Representing value of h(S(f|theta)) for a polynomial h = sum_j c_j t^j"""
    values = _label_values(f, r.space)
    return representing_value(r, linear_form_power_series(h_coefficients, values))


def sample_mean_square_gamble(space: Space, f, n: int, p: int) -> CountGamble:
    """
    MuHy([S_{n+p}(f) - S_n(f)]^2 | mu) at level n+p.

    Equals sigma^2(mu) p / (n (n+p-1)) with sigma^2(mu) the variance of f under
    the composition mu: the variance of a without-replacement sample mean.
    """
    if n < 1 or p < 0:
        raise BadParameter('n' if n < 1 else 'p', f"need n >= 1 and p >= 0, got n={n}, p={p}")
    values = _label_values(f, space)
    domain = CountDomain(space, n + p)
    if p == 0:
        return CountGamble._raw(domain, [ZERO] * len(domain.points))
    factor = Fraction(p, n * (n + p - 1))
    result = []
    for mu in domain.points:
        mean = sample_mean(values, mu)
        second = sum((v * v * c for v, c in zip(values, mu.counts)), ZERO) / mu.total
        result.append((second - mean * mean) * factor)
    return CountGamble._raw(domain, result)


def mean_square_bound_check(src: Union[CountFamily, RepresentingPrevision], f, n: int, p: int) -> Dict:
    """Upper prevision of [S_{n+p}(f) - S_n(f)]^2 against 2p/(n(n+p)) sup f^2"""
    values = _label_values(f, src.space)
    model = _level_model(src, n + p)
    value = upper_value(model, sample_mean_square_gamble(src.space, values, n, p))
    bound = Fraction(2 * p, n * (n + p)) * max(v * v for v in values)
    if value > bound:
        logger.warning("mean-square bound exceeded at n=%d, p=%d: %s > %s", n, p, value, bound)
    return {'n': n, 'p': p, 'value': value, 'bound': bound, 'passes': value <= bound}


def cauchy_mean_square_check(src: Union[CountFamily, RepresentingPrevision], f, k: int, l: int) -> Dict:
    """Upper prevision of [S_k(f) - S_l(f)]^2 against 2|k-l|/(kl) sup f^2"""
    return mean_square_bound_check(src, f, min(k, l), abs(k - l))


def binary_moments(r: RepresentingPrevision, n_max: int) -> List[Fraction]:
    """Lower raw moments of theta (the second label's coordinate) for orders 0..n_max"""
    if len(r.space) != 2:
        raise DomainMismatch("moment sequences need a two-label space")
    return [representing_value(r, {(0, j): 1}) for j in range(n_max + 1)]
