import random
from fractions import Fraction as F

import pytest

from bernstein_simplex import SimplexPoint, barycenter, decompose, enclosure, vertex
from combinatorics import CountGamble, CountVector, Gamble, Space, count_vectors, muhy_gamble
from errors import DegreeTooLow, DegreeUnavailable, InvalidFamily, InvalidSimplexPoint
from exchangeability import vacuous_count_family
from representation import (RepresentingPrevision, binary_moments, cauchy_mean_square_check, comn,
                            count_model, frequency_convergence_report, frequency_distribution_value,
                            mean_square_bound_check, mn, multinomial_family, representing_value,
                            sample_mean, sample_mean_distribution, sample_mean_limit, sample_mean_square_gamble,
                            to_family, upper_representing_value)

BINARY = Space(['0', '1'])
TERNARY = Space(['a', 'b', 'c'])
HALF = barycenter(BINARY)


def coin(p):
    """Simplex point with probability p for the label '1'"""
    return SimplexPoint(BINARY, [1 - F(p), F(p)])


def random_point(rng, space):
    weights = [rng.randint(1, 4) for _ in range(len(space))]
    return SimplexPoint(space, [F(w, sum(weights)) for w in weights])


def test_comn_examples():
    g = CountGamble(BINARY, 2, [0, 1, 0])
    assert comn(g, HALF) == F(1, 2)
    assert comn(CountGamble.constant(BINARY, 3, 1), coin(F(1, 5))) == 1
    frequency = CountGamble(BINARY, 3, lambda m: F(m.counts[1], 3))
    assert comn(frequency, coin(F(2, 7))) == F(2, 7)


def test_mn_examples():
    assert mn(Gamble.indicator(BINARY, 3, [('1', '0', '1')]), HALF) == F(1, 8)
    assert mn(Gamble.constant(BINARY, 2, 4), coin(F(1, 3))) == 4


def test_multinomial_is_count_multinomial_of_muhy():
    rng = random.Random(21)
    for space, arity in ((BINARY, 3), (BINARY, 4), (TERNARY, 2), (TERNARY, 3)):
        for _ in range(3):
            f = Gamble(space, arity, lambda z: rng.randint(-3, 3))
            for _ in range(3):
                theta = random_point(rng, space)
                assert mn(f, theta) == comn(muhy_gamble(f), theta)


def test_precise_backing_evaluates_at_the_point():
    r = RepresentingPrevision.precise(BINARY, [(1, coin(F(1, 3)))])
    assert representing_value(r, {(0, 2): 1}) == F(1, 9)
    assert representing_value(r, {(0, 0): 1}) == 1
    assert upper_representing_value(r, {(1, 1): 1}) == F(2, 9)


def test_representing_value_does_not_depend_on_level():
    rng = random.Random(4)
    precise = RepresentingPrevision.precise(TERNARY, [(F(1, 3), vertex(TERNARY, 'a')),
                                                      (F(2, 3), random_point(rng, TERNARY))])
    envelope = RepresentingPrevision.envelope(TERNARY, [random_point(rng, TERNARY) for _ in range(3)])
    for _ in range(20):
        monomials = {m.counts: rng.randint(-2, 2) for m in count_vectors(TERNARY, 2)}
        for r in (precise, envelope):
            assert representing_value(r, monomials, 2) == representing_value(r, monomials, 4)


def test_envelope_backing_takes_the_minimum():
    r = RepresentingPrevision.envelope(BINARY, [coin(F(1, 4)), coin(F(3, 4))])
    assert representing_value(r, {(0, 2): 1}) == F(1, 16)
    assert upper_representing_value(r, {(0, 2): 1}) == F(9, 16)


def test_family_backing():
    family = multinomial_family(BINARY, HALF, 3)
    r = RepresentingPrevision.from_family(family)
    assert r.mode == 'family' and r.n_max == 3
    assert representing_value(r, {(0, 2): 1}) == F(1, 4)
    with pytest.raises(DegreeUnavailable):
        representing_value(r, {(0, 4): 1})
    with pytest.raises(DegreeTooLow):
        representing_value(r, {(0, 2): 1}, level=1)


def test_vacuous_backing_takes_the_smallest_bernstein_coefficient():
    rng = random.Random(11)
    r = RepresentingPrevision.vacuous_backing(TERNARY)
    assert r.mode == 'vacuous' and r.n_max is None
    for _ in range(20):
        monomials = {m.counts: rng.randint(-2, 2) for m in count_vectors(TERNARY, 2)}
        previous = None
        for level in (2, 3, 4, 5):
            lower, upper = enclosure(decompose(monomials, level, TERNARY))
            value = representing_value(r, monomials, level)
            assert value == lower
            assert upper_representing_value(r, monomials, level) == upper
            assert previous is None or value >= previous
            previous = value


def test_vacuous_backing_on_a_bump():
    r = RepresentingPrevision.vacuous_backing(BINARY)
    bump = {(1, 1): 1}
    assert [representing_value(r, bump, n) for n in (2, 4, 8)] == [0, 0, 0]
    assert [upper_representing_value(r, bump, n) for n in (2, 4, 8)] == [F(1, 2), F(1, 3), F(2, 7)]
    report = frequency_convergence_report(r, bump, range(1, 6))
    assert report['limit'] == 0
    assert [row['value'] for row in report['values']] == [0] * 5


def test_levelwise_vacuous_family_is_rejected():
    with pytest.raises(InvalidFamily):
        RepresentingPrevision.from_family(vacuous_count_family(BINARY, 3))


def test_bernstein_input_is_elevated():
    r = RepresentingPrevision.precise(BINARY, [(1, coin(F(1, 3)))])
    p = decompose({(0, 1): 1}, 1, BINARY)
    assert representing_value(r, p, level=3) == F(1, 3)


def test_mixtures_are_checked():
    with pytest.raises(InvalidSimplexPoint):
        RepresentingPrevision(BINARY, mixtures=[[(F(1, 2), HALF)]])
    with pytest.raises(ValueError):
        RepresentingPrevision(BINARY)


def test_count_model_and_family():
    r = RepresentingPrevision.precise(BINARY, [(1, HALF)])
    assert count_model(r, 2).masses == [(F(1, 4), F(1, 2), F(1, 4))]
    family = to_family(r, 3)
    assert family.n_max == 3
    assert family.model(3).masses == [(F(1, 8), F(3, 8), F(3, 8), F(1, 8))]


def test_frequency_values_for_a_fair_coin():
    r = RepresentingPrevision.precise(BINARY, [(1, HALF)])
    report = frequency_convergence_report(r, {(0, 2): 1}, range(1, 17))
    assert report['limit'] == F(1, 4)
    for row in report['values']:
        assert row['value'] == F(1, 4) + F(1, 4 * row['level'])
        assert row['gap'] == F(1, 4 * row['level'])


def test_frequency_values_of_linear_functions_are_constant():
    r = RepresentingPrevision.precise(BINARY, [(1, coin(F(2, 5)))])
    assert {frequency_distribution_value(r, lambda theta: theta['1'], n) for n in range(1, 6)} == {F(2, 5)}
    family = multinomial_family(BINARY, HALF, 4)
    assert frequency_distribution_value(family, lambda theta: theta['1'], 4) == F(1, 2)


def test_vacuous_frequency_values():
    family = vacuous_count_family(BINARY, 4)
    for n in range(1, 5):
        assert frequency_distribution_value(family, lambda theta: theta['0'] * theta['1'], n) == 0


def test_sample_means():
    assert sample_mean([2, 5, -1], CountVector(TERNARY, (1, 2, 1))) == F(11, 4)
    r = RepresentingPrevision.precise(BINARY, [(1, HALF)])
    assert sample_mean_distribution(r, [0, 1], lambda t: t * t, 2) == F(3, 8)
    assert sample_mean_distribution(r, {'0': 2, '1': 4}, lambda t: t, 3) == 3
    assert sample_mean_limit(r, [0, 1], [0, 0, 1]) == F(1, 4)
    assert sample_mean_limit(r, [0, 1], [0, 1]) == F(1, 2)


def test_mean_square_gamble():
    g = sample_mean_square_gamble(BINARY, [0, 1], 1, 1)
    assert g == CountGamble(BINARY, 2, [0, F(1, 4), 0])
    assert sample_mean_square_gamble(BINARY, [0, 1], 2, 0) == CountGamble.constant(BINARY, 2, 0)


def test_mean_square_bound_for_a_fair_coin():
    r = RepresentingPrevision.precise(BINARY, [(1, HALF)])
    check = mean_square_bound_check(r, [0, 1], 1, 1)
    assert check['value'] == F(1, 8)
    assert check['bound'] == 1
    assert check['passes']
    zero = mean_square_bound_check(r, [0, 1], 3, 0)
    assert zero['value'] == zero['bound'] == 0 and zero['passes']


def test_mean_square_bound_holds_for_precise_and_vacuous_families():
    rng = random.Random(9)
    for space in (BINARY, TERNARY):
        sources = [vacuous_count_family(space, 4),
                   RepresentingPrevision.precise(space, [(1, random_point(rng, space))]),
                   RepresentingPrevision.envelope(space, [random_point(rng, space) for _ in range(2)]),
                   RepresentingPrevision.vacuous_backing(space)]
        f = [F(rng.randint(-3, 3)) for _ in range(len(space))]
        for src in sources:
            for n in range(1, 4):
                for p in range(0, 5 - n):
                    assert mean_square_bound_check(src, f, n, p)['passes']


def test_cauchy_check_is_symmetric():
    r = RepresentingPrevision.precise(BINARY, [(1, coin(F(1, 3)))])
    assert cauchy_mean_square_check(r, [0, 1], 2, 3) == mean_square_bound_check(r, [0, 1], 2, 1)
    assert cauchy_mean_square_check(r, [0, 1], 3, 2) == mean_square_bound_check(r, [0, 1], 2, 1)


def test_binary_moments():
    half = RepresentingPrevision.precise(BINARY, [(1, HALF)])
    assert binary_moments(half, 3) == [1, F(1, 2), F(1, 4), F(1, 8)]
    ends = RepresentingPrevision.precise(BINARY, [(F(1, 2), vertex(BINARY, '0')), (F(1, 2), vertex(BINARY, '1'))])
    assert binary_moments(ends, 3) == [1, F(1, 2), F(1, 2), F(1, 2)]
    both_ends = RepresentingPrevision.envelope(BINARY, [vertex(BINARY, '0'), vertex(BINARY, '1')])
    assert binary_moments(both_ends, 3) == [1, 0, 0, 0]
    assert binary_moments(RepresentingPrevision.vacuous_backing(BINARY), 3) == [1, 0, 0, 0]
