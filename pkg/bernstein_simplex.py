"""
Bernstein Polynomials on the Simplex
Multivariate Bernstein basis over the simplex of a finite space: evaluation,
monomial-to-Bernstein conversion, degree elevation, coefficient range
enclosures and Bernstein approximants.

Polynomials live in Bernstein form at an explicit degree n, the coefficients
being a CountGamble on N_X^n. Monomial forms (exponent tuple -> coefficient,
exponents in Space order) are accepted as input only.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp

from combinatorics import (CountDomain, CountGamble, CountVector, Space, as_fraction, atom_size,
                           count_vectors, marginalize)
from errors import BadParameter, DegreeTooLow, DomainMismatch, InvalidSimplexPoint

logger = logging.getLogger(__name__)

Monomials = Mapping[Tuple[int, ...], object]


class SimplexPoint:
    """theta in the simplex: non-negative rationals summing to one"""

    __slots__ = ('space', 'coordinates')

    def __init__(self, space: Space, theta: Union[Mapping, Sequence]):
        if isinstance(theta, Mapping):
            coordinates = [Fraction(0)] * len(space)
            for label, value in theta.items():
                coordinates[space.index(label)] = as_fraction(value)
        else:
            coordinates = [as_fraction(v) for v in theta]
            if len(coordinates) != len(space):
                raise InvalidSimplexPoint(f"expected {len(space)} coordinates, got {len(coordinates)}")
        if any(c < 0 for c in coordinates):
            raise InvalidSimplexPoint(f"negative coordinate in {coordinates}")
        if sum(coordinates) != 1:
            raise InvalidSimplexPoint(f"coordinates sum to {sum(coordinates)}, not 1")
        self.space = space
        self.coordinates = tuple(coordinates)

    @classmethod
    def from_counts(cls, m: CountVector) -> 'SimplexPoint':
        return cls(m.space, [Fraction(c, m.total) for c in m.counts])

    def __getitem__(self, label) -> Fraction:
        return self.coordinates[self.space.index(label)]

    def __eq__(self, other):
        return isinstance(other, SimplexPoint) and self.space == other.space \
            and self.coordinates == other.coordinates

    def __hash__(self):
        return hash(self.coordinates)

    def __repr__(self):
        shown = ', '.join(f"{label}: {c}" for label, c in zip(self.space.labels, self.coordinates))
        return f"SimplexPoint({{{shown}}})"


def vertex(space: Space, label) -> SimplexPoint:
    coordinates = [0] * len(space)
    coordinates[space.index(label)] = 1
    return SimplexPoint(space, coordinates)


def barycenter(space: Space) -> SimplexPoint:
    return SimplexPoint(space, [Fraction(1, len(space))] * len(space))


def simplex_grid(space: Space, G: int) -> List[SimplexPoint]:
    """All points m/G for m in N_X^G"""
    return [SimplexPoint.from_counts(m) for m in count_vectors(space, G)]


def _check_space(theta: SimplexPoint, space: Space):
    if theta.space != space:
        raise DomainMismatch(f"simplex point lives on {theta.space}, polynomial on {space}")


def basis_eval(m: CountVector, theta: SimplexPoint) -> Fraction:
    """B_m(theta) = nu(m) prod_x theta_x^m_x, with 0^0 = 1"""
    _check_space(theta, m.space)
    value = Fraction(atom_size(m))
    for t, c in zip(theta.coordinates, m.counts):
        if c:
            value *= t ** c
    return value


class BernsteinPoly:
    """Polynomial sum_m b(m) B_m on the simplex, in Bernstein form of a fixed degree"""

    def __init__(self, space: Space, degree: int, coefficients):
        if isinstance(coefficients, CountGamble):
            if coefficients.domain != CountDomain(space, degree):
                raise DomainMismatch(f"coefficients live on {coefficients.domain}, expected degree {degree}")
            self.coefficients = coefficients
        else:
            self.coefficients = CountGamble(space, degree, coefficients)
        self.space = space
        self.degree = degree

    def eval(self, theta: SimplexPoint) -> Fraction:
        _check_space(theta, self.space)
        return sum((b * basis_eval(m, theta) for m, b in self.coefficients.items() if b), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, BernsteinPoly) and self.degree == other.degree \
            and self.coefficients == other.coefficients

    def __repr__(self):
        return f"BernsteinPoly(degree={self.degree}, b={list(self.coefficients.values)})"


def evaluate(p: BernsteinPoly, theta: SimplexPoint) -> Fraction:
    return p.eval(theta)


def elevate(p: BernsteinPoly, k: int) -> BernsteinPoly:
    """
    Degree elevation by k (Zhou's formula).

    b^{n+k}(mu) = sum_m nu(m) nu(mu-m) / nu(mu) b^n(m), the hypergeometric
    marginal of b^n at the composition mu.
    """
    if k < 0:
        raise BadParameter('k', f"elevation must be non-negative, got {k}")
    if k == 0:
        return p
    return BernsteinPoly(p.space, p.degree + k, marginalize(p.coefficients, p.degree + k))


def enclosure(p: BernsteinPoly) -> Tuple[Fraction, Fraction]:
    """[min b, max b], which contains the range of p over the simplex"""
    return p.coefficients.min(), p.coefficients.max()


# ==================== MONOMIAL FORMS ====================

def _symbols(space: Space):
    return sp.symbols(f"theta0:{len(space)}")


def _check_exponents(monomials: Monomials, space: Space):
    for exponents in monomials:
        if len(exponents) != len(space) or any(e < 0 for e in exponents):
            raise DomainMismatch(f"bad exponent tuple {exponents} for a space of {len(space)} labels")


def monomial_degree(monomials: Monomials) -> int:
    return max((sum(e) for e, c in monomials.items() if as_fraction(c)), default=0)


def monomial_value(monomials: Monomials, theta: SimplexPoint) -> Fraction:
    total = Fraction(0)
    for exponents, coefficient in monomials.items():
        term = as_fraction(coefficient)
        for t, e in zip(theta.coordinates, exponents):
            if e:
                term *= t ** e
        total += term
    return total


def _to_fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def decompose(monomials: Monomials, n: int, space: Space) -> BernsteinPoly:
    """
    Bernstein coefficients of degree n of a polynomial in monomial form.

    Each monomial of degree d is homogenized with (sum theta)^(n-d); the
    coefficient of theta^mu in the expansion is b(mu) nu(mu).
    """
    _check_exponents(monomials, space)
    degree = monomial_degree(monomials)
    if n < degree:
        raise DegreeTooLow(f"target degree {n} is below the polynomial degree {degree}")
    theta = _symbols(space)
    total = sum(theta)
    expression = sp.Integer(0)
    for exponents, coefficient in monomials.items():
        c = as_fraction(coefficient)
        if not c:
            continue
        term = sp.Rational(c.numerator, c.denominator)
        for symbol, e in zip(theta, exponents):
            term *= symbol ** e
        expression += term * total ** (n - sum(exponents))
    expression = sp.expand(expression)

    domain = CountDomain(space, n)
    values = [Fraction(0)] * len(domain.points)
    if expression != 0:
        for exponents, coefficient in sp.Poly(expression, *theta).terms():
            m = CountVector(space, exponents)
            values[domain.position(m)] = _to_fraction(coefficient) / atom_size(m)
    return BernsteinPoly(space, n, CountGamble._raw(domain, values))


def linear_form_power_series(coefficients: Sequence, weights: Sequence) -> Dict[Tuple[int, ...], Fraction]:
    """Monomial form of sum_j c_j (sum_x w_x theta_x)^j"""
    theta = sp.symbols(f"theta0:{len(weights)}")
    linear = sum(sp.Rational(as_fraction(w).numerator, as_fraction(w).denominator) * t
                 for w, t in zip(weights, theta))
    expression = sp.Integer(0)
    for j, c in enumerate(coefficients):
        c = as_fraction(c)
        if c:
            expression += sp.Rational(c.numerator, c.denominator) * linear ** j
    expression = sp.expand(expression)
    if expression == 0:
        return {}
    return {tuple(e): _to_fraction(c) for e, c in sp.Poly(expression, *theta).terms()}


# ==================== APPROXIMANTS AND CONVERGENCE ====================

def bernstein_approximant(h: Union[Callable, Mapping], n: int, space: Space) -> BernsteinPoly:
    """b(m) = h(m/n); h is a function of SimplexPoint or a CountVector -> value map on the grid"""
    domain = CountDomain(space, n)
    if callable(h):
        values = [as_fraction(h(SimplexPoint.from_counts(m))) for m in domain.points]
    else:
        values = [as_fraction(h[m]) for m in domain.points]
    return BernsteinPoly(space, n, CountGamble._raw(domain, values))


def enclosure_convergence(p: BernsteinPoly, n_max: Optional[int] = None, grid_level: Optional[int] = None,
                          degrees: Optional[Sequence[int]] = None) -> List[Dict]:
    """
    Enclosures of p along increasing degrees.

    Each row reports the coefficient range and its gaps to the minimum and
    maximum of p over the rational grid of level grid_level.
    """
    if degrees is None:
        if n_max is None or n_max < p.degree:
            raise DegreeTooLow(f"n_max {n_max} is below the polynomial degree {p.degree}")
        degrees = range(p.degree, n_max + 1)
    degrees = list(degrees)
    if any(d < p.degree for d in degrees):
        raise DegreeTooLow(f"degree list {degrees} goes below the polynomial degree {p.degree}")
    grid = simplex_grid(p.space, grid_level or max(degrees))
    grid_values = [p.eval(theta) for theta in grid]
    grid_min, grid_max = min(grid_values), max(grid_values)

    rows = []
    for d in degrees:
        lower, upper = enclosure(elevate(p, d - p.degree))
        rows.append({'degree': d, 'lower': lower, 'upper': upper,
                     'gap': upper - grid_max, 'lower_gap': grid_min - lower})
    logger.debug("enclosures for degrees %s computed", degrees)
    return rows
