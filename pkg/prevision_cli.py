#!/usr/bin/env python3
"""
Exchangeable Previsions - Command Line
Runs sure-loss, coherence, natural-extension, exchangeability and extension
checks on assessment files and prints exact reports.

Exit codes: 0 verdict holds (or a value was computed), 1 verdict fails,
2 invalid input, 3 enumeration cap exceeded.
"""

import argparse
import json
import logging
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction

import assessment_file
from assessment_file import AssessmentFile, format_gamble, format_point, format_rational, \
    parse_inline_gamble, parse_polynomial, parse_rational
from bernstein_simplex import BernsteinPoly, SimplexPoint, decompose, elevate, enclosure, \
    enclosure_convergence, monomial_degree
from combinatorics import CountVector, FiniteGamble, Space
from errors import AssessmentFileError, BadParameter, CapExceeded, NoExchangeableDominator, PrevisionError, \
    SureLoss
from exchangeability import CountFamily, time_consistency_matrix
from exchangeable_extension import EneProblem, ExtensionProblem, ene_exists, ene_value, extendable, \
    smallest_extension, vacuous_exchangeable
from lower_prevision import Assessment, avoids_sure_loss, is_coherent, lower_value, upper_value
from representation import RepresentingPrevision, binary_moments, frequency_convergence_report, \
    mean_square_bound_check, representing_value, upper_representing_value
from settings import DECIMAL_DIGITS, LOG_LEVEL

logger = logging.getLogger(__name__)

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

TITLES = {
    'check-asl': 'AVOIDING SURE LOSS',
    'check-coherence': 'COHERENCE',
    'natex': 'NATURAL EXTENSION',
    'ene': 'EXCHANGEABLE NATURAL EXTENSION',
    'vacuous': 'VACUOUS EXCHANGEABLE PREVISION',
    'extend': 'EXTENSION TO MORE VARIABLES',
    'time-consistent': 'TIME CONSISTENCY',
    'represent': 'REPRESENTING LOWER PREVISION',
    'bernstein': 'BERNSTEIN POLYNOMIAL',
    'converge': 'FREQUENCY CONVERGENCE',
    'meansq': 'MEAN-SQUARE BOUND',
}


# ==================== RENDERING ====================

def to_decimal(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _key(point) -> str:
    if isinstance(point, (CountVector, tuple)):
        return format_point(point)
    return str(point)


def jsonable(obj):
    """Exact JSON form: rationals become "p/q" strings, points become file keys"""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (Fraction, int)):
        return format_rational(Fraction(obj))
    if isinstance(obj, CountVector):
        return obj.key()
    if isinstance(obj, FiniteGamble):
        return format_gamble(obj)
    if isinstance(obj, BernsteinPoly):
        return {'degree': obj.degree, 'coefficients': jsonable(obj.coefficients)}
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def make_report(command, verdict=None, values=None, certificate=None):
    return {'command': command, 'verdict': verdict, 'values': values or {},
            'certificate': certificate, 'timing': None}


def print_human(report):
    print("=" * 60)
    print(TITLES.get(report['command'], report['command'].upper()))
    print("=" * 60)
    verdict = report['verdict']
    if verdict is not None:
        print(f"{'✅' if verdict else '❌'} verdict: {'yes' if verdict else 'no'}")
    for name, value in report['values'].items():
        if isinstance(value, Fraction):
            print(f"  {name}: {value}  ({to_decimal(value)})")
        else:
            print(f"  {name}: {json.dumps(jsonable(value))}")
    if report['certificate']:
        print("\ncertificate:")
        for line in json.dumps(jsonable(report['certificate']), indent=2).splitlines():
            print(f"  {line}")
    print("=" * 60)
    print(f"completed in {report['timing']['elapsed_ms']} ms")


def print_json(report):
    print(json.dumps(jsonable(report), indent=2))


# ==================== INPUT HELPERS ====================

def _parse_space(text: str) -> Space:
    labels = [label.strip() for label in text.split(',')]
    if not all(labels):
        raise AssessmentFileError('--labels', f"empty label in {text!r}")
    return Space(labels)


def _parse_theta(space: Space, text: str) -> SimplexPoint:
    return SimplexPoint(space, [parse_rational(v, '--theta') for v in text.split(',')])


def _parse_levels(text: str):
    first, sep, last = text.partition('..')
    try:
        levels = range(int(first), int(last) + 1) if sep else [int(v) for v in text.split(',')]
    except ValueError:
        raise AssessmentFileError('--levels', f"expected a..b or a comma list, got {text!r}")
    levels = list(levels)
    if not levels or min(levels) < 1:
        raise AssessmentFileError('--levels', f"levels must be positive, got {text!r}")
    return levels


def _label_values(space: Space, text: str):
    values = [parse_rational(v, '--f') for v in text.split(',')]
    if len(values) != len(space):
        raise AssessmentFileError('--f', f"expected {len(space)} values, one per label")
    return values


def _at_least(value, option, minimum):
    if value is not None and value < minimum:
        raise BadParameter(option, f"must be at least {minimum}, got {value}")


def _require_items(af: AssessmentFile, command: str):
    if af.envelope is not None:
        raise AssessmentFileError('envelope', f"{command} needs an assessment given by items")


def load_family(paths) -> CountFamily:
    """One count-mode file per level 1..n_max"""
    levels = {}
    space = None
    for path in paths:
        af = assessment_file.load(path)
        if af.mode != 'count':
            raise AssessmentFileError(f"{path}: mode", "family levels must be count-mode files")
        if space is not None and af.space != space:
            raise AssessmentFileError(f"{path}: labels", "all levels must share one label set")
        if af.arity in levels:
            raise AssessmentFileError(f"{path}: arity", f"level {af.arity} given twice")
        space = af.space
        levels[af.arity] = af.model()
    return CountFamily(space, levels)


def _source(args, validate=False):
    """A CountFamily from files, or a RepresentingPrevision from --labels with --theta or --vacuous"""
    if args.files and (args.theta or args.vacuous):
        raise AssessmentFileError('--theta', "give either level files or a --theta/--vacuous source, not both")
    if args.vacuous:
        if not args.labels or args.theta:
            raise AssessmentFileError('--vacuous', "--vacuous takes --labels and no --theta")
        return RepresentingPrevision.vacuous_backing(_parse_space(args.labels))
    if args.files:
        family = load_family(args.files)
        return RepresentingPrevision.from_family(family) if validate else family
    if not args.theta or not args.labels:
        raise AssessmentFileError('--theta', "give level files, or --labels with at least one --theta")
    space = _parse_space(args.labels)
    points = [_parse_theta(space, text) for text in args.theta]
    if len(points) == 1:
        return RepresentingPrevision.precise(space, [(1, points[0])])
    return RepresentingPrevision.envelope(space, points)


# ==================== SUBCOMMANDS ====================

def cmd_check_asl(args):
    af = assessment_file.load(args.file)
    model = af.model()
    if not isinstance(model, Assessment):
        return make_report('check-asl', True, certificate={'mass': model.as_dicts()[0]})
    ok, certificate = avoids_sure_loss(model)
    return make_report('check-asl', ok, certificate=certificate)


def cmd_check_coherence(args):
    af = assessment_file.load(args.file)
    model = af.model()
    if not isinstance(model, Assessment):
        # a lower envelope is coherent
        return make_report('check-coherence', True)
    ok, violation = is_coherent(model)
    return make_report('check-coherence', ok, certificate=violation)


def cmd_natex(args):
    af = assessment_file.load(args.file)
    model = af.model()
    f = parse_inline_gamble(af.domain, args.gamble)
    try:
        values = {'lower': lower_value(model, f), 'upper': upper_value(model, f)}
    except SureLoss as error:
        return make_report('natex', False, certificate=error.certificate)
    return make_report('natex', True, values)


def cmd_ene(args):
    af = assessment_file.load(args.file)
    _require_items(af, 'ene')
    if af.mode != 'tuple':
        raise AssessmentFileError('mode', "ene needs a tuple-mode assessment")
    problem = EneProblem(af.model())
    f = parse_inline_gamble(af.domain, args.gamble)
    ok, certificate = ene_exists(problem)
    if not ok:
        return make_report('ene', False, certificate=certificate)
    try:
        value = ene_value(problem, f)
    except NoExchangeableDominator as error:
        return make_report('ene', False, certificate=error.certificate)
    return make_report('ene', True, {'ene': value}, certificate)


def cmd_vacuous(args):
    af = assessment_file.load(args.file)
    if af.mode != 'tuple':
        raise AssessmentFileError('mode', "vacuous needs a tuple-mode file")
    f = parse_inline_gamble(af.domain, args.gamble)
    return make_report('vacuous', None, {'vacuous': vacuous_exchangeable(f)})


def cmd_extend(args):
    af = assessment_file.load(args.file)
    if af.mode != 'count':
        raise AssessmentFileError('mode', "extend needs a count-mode base model")
    if args.to < af.arity:
        raise AssessmentFileError('--to', f"target {args.to} is below the base level {af.arity}")
    problem = ExtensionProblem(af.space, af.arity, args.to - af.arity, af.model())
    ok, certificate = extendable(problem)
    values = {}
    if ok and args.require_reproduction and not certificate['reproduces_base']:
        ok = False
    if ok and args.eval:
        h = parse_inline_gamble(problem.target, args.eval)
        values['smallest_extension'] = smallest_extension(problem, h,
                                                          require_reproduction=args.require_reproduction)
    return make_report('extend', ok, values, certificate)


def cmd_time_consistent(args):
    _at_least(args.combinations, '--combinations', 0)
    family = load_family(args.files)
    rows = time_consistency_matrix(family, args.combinations, args.seed)
    return make_report('time-consistent', all(row['consistent'] for row in rows),
                       certificate={'matrix': rows})


def cmd_represent(args):
    _at_least(args.moments, '--moments', 0)
    source = _source(args, validate=True)
    if not args.poly and args.moments is None:
        raise AssessmentFileError('--poly', "give --poly, --moments or both")
    values = {}
    if args.poly:
        p = parse_polynomial(source.space, args.poly)
        values['lower'] = representing_value(source, p, args.degree)
        values['upper'] = upper_representing_value(source, p, args.degree)
    if args.moments is not None:
        values['moments'] = binary_moments(source, args.moments)
    return make_report('represent', None, values)


def cmd_bernstein(args):
    _at_least(args.by, '--by', 0)
    space = _parse_space(args.labels)
    monomials = parse_polynomial(space, args.poly)
    degree = args.degree if args.degree is not None else max(monomial_degree(monomials), 1)
    p = decompose(monomials, degree, space)
    values = {}
    if args.action == 'eval':
        if not args.theta:
            raise AssessmentFileError('--theta', "eval needs a simplex point")
        values['value'] = p.eval(_parse_theta(space, args.theta))
    elif args.action == 'decompose':
        values['coefficients'] = p.coefficients
    elif args.action == 'elevate':
        values['coefficients'] = elevate(p, args.by).coefficients
    else:
        lower, upper = enclosure(p)
        values['lower'], values['upper'] = lower, upper
        if args.degrees:
            values['convergence'] = enclosure_convergence(p, degrees=_parse_levels(args.degrees))
    return make_report('bernstein', None, values, {'action': args.action, 'degree': degree})


def cmd_converge(args):
    source = _source(args)
    h = parse_polynomial(source.space, args.poly)
    report = frequency_convergence_report(source, h, _parse_levels(args.levels))
    return make_report('converge', None, {'limit': report['limit'], 'levels': report['values']})


def cmd_meansq(args):
    _at_least(args.n, '--n', 1)
    _at_least(args.p, '--p', 0)
    source = _source(args)
    check = mean_square_bound_check(source, _label_values(source.space, args.f), args.n, args.p)
    return make_report('meansq', check['passes'], {'value': check['value'], 'bound': check['bound']},
                       {'n': check['n'], 'p': check['p']})


COMMANDS = {
    'check-asl': cmd_check_asl,
    'check-coherence': cmd_check_coherence,
    'natex': cmd_natex,
    'ene': cmd_ene,
    'vacuous': cmd_vacuous,
    'extend': cmd_extend,
    'time-consistent': cmd_time_consistent,
    'represent': cmd_represent,
    'bernstein': cmd_bernstein,
    'converge': cmd_converge,
    'meansq': cmd_meansq,
}


# ==================== ENTRY POINT ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='prevision_cli.py',
        description='Exact checks and extensions for exchangeable lower previsions',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Does a binary assessment avoid sure loss?
  python prevision_cli.py check-asl fixtures/two_items.json

  # Can the level-2 count model q(s=1)=1 be extended to 3 variables?
  python prevision_cli.py extend fixtures/one_of_each.json --to 3 --json

  # Vacuous exchangeable lower prevision of the indicator of (1,0,1)
  python prevision_cli.py vacuous fixtures/binary3.json --gamble "1,0,1=1"

  # Frequency values of theta_1^2 under a fair coin, levels 1..16
  python prevision_cli.py converge --labels 0,1 --theta 1/2,1/2 --poly "1:2=1" --levels 1..16
        """
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Print the report as JSON')
    common.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help=f'Logging level on stderr (default: {LOG_LEVEL})')

    sub = parser.add_subparsers(dest='command', required=True, metavar='command')

    for name, help_text in (('check-asl', 'Does the assessment avoid sure loss?'),
                            ('check-coherence', 'Is the assessment coherent?')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('file')

    for name, help_text in (('natex', 'Natural extension of a gamble'),
                            ('ene', 'Exchangeable natural extension of a gamble'),
                            ('vacuous', 'Vacuous exchangeable lower prevision of a gamble')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('file')
        p.add_argument('--gamble', required=True, help='Inline gamble, e.g. "1,0=1;default=0"')

    p = sub.add_parser('extend', parents=[common], help='Extend a count model to more variables')
    p.add_argument('file')
    p.add_argument('--to', type=int, required=True, help='Number of variables of the extension')
    p.add_argument('--eval', help='Count gamble at the target level to evaluate the smallest extension at')
    p.add_argument('--require-reproduction', action='store_true',
                   help='Also require the base to be recovered exactly as a marginal')

    p = sub.add_parser('time-consistent', parents=[common], help='Time consistency of a family of levels')
    p.add_argument('files', nargs='+', help='One count-mode file per level 1..n')
    p.add_argument('--combinations', type=int, default=None, help='Random combinations per level pair')
    p.add_argument('--seed', type=int, default=None)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument('files', nargs='*', help='One count-mode file per level 1..n')
    source.add_argument('--labels', help='Comma-joined labels, with --theta')
    source.add_argument('--theta', action='append', help='Simplex point "a,b,..." (repeat for an envelope)')
    source.add_argument('--vacuous', action='store_true', help='Vacuous count model at every level, with --labels')

    p = sub.add_parser('represent', parents=[common, source], help='Representing lower prevision')
    p.add_argument('--poly', help='Polynomial, e.g. "1:2=1;=-1/4"')
    p.add_argument('--moments', type=int, help='Lower moments of the second coordinate up to this order')
    p.add_argument('--degree', type=int, help='Bernstein level to evaluate at')

    p = sub.add_parser('bernstein', parents=[common], help='Bernstein basis operations')
    p.add_argument('action', choices=['eval', 'elevate', 'decompose', 'enclose'])
    p.add_argument('--labels', required=True)
    p.add_argument('--poly', required=True)
    p.add_argument('--degree', type=int, help='Bernstein degree (default: polynomial degree)')
    p.add_argument('--theta', help='Simplex point for eval')
    p.add_argument('--by', type=int, default=1, help='Elevation step')
    p.add_argument('--degrees', help='Degrees for the enclosure sequence, a..b or a list')

    p = sub.add_parser('converge', parents=[common, source], help='Frequency values against their limit')
    p.add_argument('--poly', required=True)
    p.add_argument('--levels', required=True, help='a..b or a comma list')

    p = sub.add_parser('meansq', parents=[common, source], help='Mean-square bound on sample means')
    p.add_argument('--f', required=True, help='Values of f per label, comma-joined')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--p', type=int, required=True)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=args.log_level or LOG_LEVEL,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except CapExceeded as error:
        return _fail(args, error, EXIT_CAP)
    except PrevisionError as error:
        return _fail(args, error, EXIT_INPUT)
    except Exception as error:
        logger.error("%s stopped on an unexpected error", args.command, exc_info=True)
        return _fail(args, error, EXIT_INPUT)
    report['timing'] = {'elapsed_ms': int((time.perf_counter() - started) * 1000)}
    if args.json:
        print_json(report)
    else:
        print_human(report)
    return EXIT_NO if report['verdict'] is False else EXIT_YES


def _fail(args, error, code):
    logger.debug("%s failed", args.command, exc_info=True)
    if args.json:
        print(json.dumps({'command': args.command,
                          'error': {'type': type(error).__name__,
                                    'key': getattr(error, 'key', None),
                                    'message': str(error)}}, indent=2))
    else:
        print(f"❌ Error: {error}")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == '__main__':
    main()
