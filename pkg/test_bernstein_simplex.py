import random
from fractions import Fraction as F

import pytest

from bernstein_simplex import (BernsteinPoly, SimplexPoint, barycenter, basis_eval, bernstein_approximant,
                               decompose, elevate, enclosure, enclosure_convergence, evaluate,
                               linear_form_power_series, monomial_degree, monomial_value, simplex_grid, vertex)
from combinatorics import CountGamble, CountVector, Space, count_vectors
from errors import BadParameter, DegreeTooLow, DomainMismatch, InvalidSimplexPoint

BINARY = Space(['0', '1'])
TERNARY = Space(['a', 'b', 'c'])

# theta_1 (1 - theta_1) written on the simplex as theta_0 theta_1
BUMP = {(1, 1): 1}


def random_point(rng, space):
    weights = [rng.randint(1, 5) for _ in range(len(space))]
    return SimplexPoint(space, [F(w, sum(weights)) for w in weights])


def random_monomials(rng, space, degree):
    monomials = {}
    for m in count_vectors(space, degree):
        monomials[m.counts] = F(rng.randint(-3, 3), rng.randint(1, 2))
    monomials[(0,) * len(space)] = F(rng.randint(-2, 2))
    return monomials


def test_basis_examples():
    theta = barycenter(BINARY)
    assert basis_eval(CountVector(BINARY, (1, 1)), theta) == F(1, 2)
    assert basis_eval(CountVector(TERNARY, (0, 3, 0)), vertex(TERNARY, 'b')) == 1
    assert basis_eval(CountVector(TERNARY, (1, 2, 0)), vertex(TERNARY, 'b')) == 0


def test_partition_of_unity():
    rng = random.Random(0)
    for space in (BINARY, TERNARY):
        for n in range(1, 5):
            theta = random_point(rng, space)
            assert sum(basis_eval(m, theta) for m in count_vectors(space, n)) == 1


def test_simplex_points_are_validated():
    with pytest.raises(InvalidSimplexPoint):
        SimplexPoint(BINARY, [F(1, 2), F(1, 3)])
    with pytest.raises(InvalidSimplexPoint):
        SimplexPoint(BINARY, [2, -1])
    with pytest.raises(InvalidSimplexPoint):
        SimplexPoint(BINARY, [1])
    assert SimplexPoint(BINARY, {'1': 1}) == vertex(BINARY, '1')


def test_evaluation_examples():
    theta = SimplexPoint(BINARY, [F(2, 3), F(1, 3)])
    assert BernsteinPoly(BINARY, 2, [5, 5, 5]).eval(theta) == 5
    identity = BernsteinPoly(BINARY, 2, [0, F(1, 2), 1])
    assert evaluate(identity, theta) == F(1, 3)
    single = BernsteinPoly(BINARY, 2, CountGamble(BINARY, 2, {(1, 1): 1}, default=0))
    assert single.eval(theta) == basis_eval(CountVector(BINARY, (1, 1)), theta)
    with pytest.raises(DomainMismatch):
        identity.eval(barycenter(TERNARY))


def test_decompose_examples():
    assert decompose({(0, 0): 1}, 2, BINARY) == BernsteinPoly(BINARY, 2, [1, 1, 1])
    assert decompose({(0, 1): 1}, 1, BINARY) == BernsteinPoly(BINARY, 1, [0, 1])
    assert decompose({(0, 2): 1}, 3, BINARY) == BernsteinPoly(BINARY, 3, [0, 0, F(1, 3), 1])
    assert decompose({(0, 1): 1, (0, 2): -1}, 2, BINARY) == decompose(BUMP, 2, BINARY)
    with pytest.raises(DegreeTooLow):
        decompose({(0, 2): 1}, 1, BINARY)


def test_decompose_then_evaluate():
    rng = random.Random(8)
    for space in (BINARY, TERNARY):
        for degree in range(1, 4):
            monomials = random_monomials(rng, space, degree)
            p = decompose(monomials, degree + rng.randint(0, 2), space)
            for _ in range(3):
                theta = random_point(rng, space)
                assert p.eval(theta) == monomial_value(monomials, theta)


def test_elevation_examples():
    assert elevate(BernsteinPoly(BINARY, 1, [0, 1]), 1) == BernsteinPoly(BINARY, 2, [0, F(1, 2), 1])
    assert elevate(BernsteinPoly(TERNARY, 1, [4, 4, 4]), 2) == BernsteinPoly(TERNARY, 3, [4] * 10)
    p = BernsteinPoly(BINARY, 2, [1, 2, 3])
    assert elevate(p, 0) is p
    with pytest.raises(BadParameter):
        elevate(p, -1)


def test_elevation_keeps_values_and_nests_enclosures():
    rng = random.Random(13)
    for space in (BINARY, TERNARY):
        p = decompose(random_monomials(rng, space, 3), 3, space)
        lower, upper = enclosure(p)
        for k in (1, 2):
            q = elevate(p, k)
            for _ in range(10):
                theta = random_point(rng, space)
                assert q.eval(theta) == p.eval(theta)
            q_lower, q_upper = enclosure(q)
            assert lower <= q_lower <= q_upper <= upper
            lower, upper = q_lower, q_upper


def test_enclosure_examples():
    assert enclosure(BernsteinPoly(BINARY, 3, [2, 2, 2, 2])) == (2, 2)
    for n in (1, 3, 6):
        assert enclosure(decompose({(0, 1): 1}, n, BINARY)) == (0, 1)
    assert enclosure(decompose(BUMP, 2, BINARY)) == (0, F(1, 2))


def test_bump_enclosures_shrink_towards_a_quarter():
    rows = enclosure_convergence(decompose(BUMP, 2, BINARY), degrees=[2, 4, 8, 16])
    assert [row['upper'] for row in rows] == [F(1, 2), F(1, 3), F(2, 7), F(4, 15)]
    assert all(row['lower'] == 0 for row in rows)
    assert rows[-1]['gap'] <= F(1, 16)
    assert rows[-1]['gap'] == F(4, 15) - F(1, 4)


def test_degree_sequence_enclosures():
    rows = enclosure_convergence(decompose(BUMP, 2, BINARY), n_max=5)
    assert [row['upper'] for row in rows] == [F(1, 2), F(1, 3), F(1, 3), F(3, 10)]
    linear = enclosure_convergence(decompose({(0, 1): 1}, 1, BINARY), n_max=4)
    assert {(row['lower'], row['upper']) for row in linear} == {(0, 1)}
    with pytest.raises(DegreeTooLow):
        enclosure_convergence(decompose(BUMP, 2, BINARY), degrees=[1, 2])


def test_bernstein_approximant():
    assert bernstein_approximant(lambda theta: 7, 3, TERNARY).coefficients.values == (7,) * 10
    identity = bernstein_approximant(lambda theta: theta['1'], 2, BINARY)
    assert identity == BernsteinPoly(BINARY, 2, [0, F(1, 2), 1])
    assert identity.eval(SimplexPoint(BINARY, [F(1, 3), F(2, 3)])) == F(2, 3)


def test_approximant_of_a_square_closes_in():
    # B_n(t^2)(t) - t^2 = t(1 - t)/n, largest at t = 1/2
    gaps = []
    for n in (2, 4, 8):
        approximant = bernstein_approximant(lambda theta: theta['1'] ** 2, n, BINARY)
        errors = [approximant.eval(theta) - theta['1'] ** 2 for theta in simplex_grid(BINARY, 8)]
        assert errors == [theta['0'] * theta['1'] / n for theta in simplex_grid(BINARY, 8)]
        gaps.append(max(errors))
    assert gaps == [F(1, 8), F(1, 16), F(1, 32)]


def test_simplex_grid():
    grid = simplex_grid(BINARY, 2)
    assert grid == [SimplexPoint(BINARY, [1, 0]), SimplexPoint(BINARY, [F(1, 2), F(1, 2)]),
                    SimplexPoint(BINARY, [0, 1])]
    assert len(simplex_grid(TERNARY, 3)) == 10


def test_monomial_helpers():
    assert monomial_degree({(2, 1): 1, (0, 1): 3}) == 3
    assert monomial_degree({(2, 1): 0, (0, 1): 3}) == 1
    assert linear_form_power_series([0, 0, 1], [1, 0]) == {(2, 0): 1}
    series = linear_form_power_series([1, 2], [F(1, 2), 3])
    assert series == {(0, 0): 1, (1, 0): 1, (0, 1): 6}
