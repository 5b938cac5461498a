"""
Assessment Files
JSON documents describing an assessment (or a finite credal set) on X^N or
on N_X^N, plus the inline gamble and polynomial syntax used on the command
line.

    {
      "labels": ["0", "1"],
      "arity": 2,
      "mode": "tuple",
      "items": [{"gamble": {"default": "0", "values": {"1,0": "1"}}, "lower": "1/2"}],
      "envelope": [{"0,1": "1/2", "1,0": "1/2"}]
    }

Tuple keys are comma-joined labels; count keys are label:count pairs joined
by commas (labels left out count zero). Numbers are integers or "p/q"
strings; JSON floats are rejected. A file carries either "items" or
"envelope".
"""

import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from combinatorics import (CountDomain, CountVector, FiniteGamble, Space, TupleDomain, gamble_for)
from errors import AssessmentFileError, DomainMismatch, UnknownLabel
from lower_prevision import Assessment, CredalSet

MODES = ('tuple', 'count')


def parse_rational(value, key: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise AssessmentFileError(key, f"{value!r} is not an exact rational (use an integer or \"p/q\")")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise AssessmentFileError(key, f"cannot read {value!r} as a rational")
    raise AssessmentFileError(key, f"expected a rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_point(domain, text: str, key: str):
    """A tuple key 'a,b,c' or a count key 'a:2,b:1' on the given domain"""
    parts = [p.strip() for p in str(text).split(',')] if str(text).strip() else []
    space = domain.space
    if domain.kind == 'tuple':
        if len(parts) != domain.arity:
            raise AssessmentFileError(key, f"{text!r} has {len(parts)} components, arity is {domain.arity}")
        for label in parts:
            if label not in space:
                raise AssessmentFileError(key, f"unknown label {label!r}")
        return tuple(parts)
    counts = {}
    for part in parts:
        label, sep, count = part.partition(':')
        label = label.strip()
        if not sep or label not in space:
            raise AssessmentFileError(key, f"bad count entry {part!r}")
        try:
            counts[label] = counts.get(label, 0) + int(count)
        except ValueError:
            raise AssessmentFileError(key, f"bad count {count!r}")
        if counts[label] < 0:
            raise AssessmentFileError(key, f"negative count for {label!r}")
    m = CountVector.from_mapping(space, counts)
    if m.total != domain.arity:
        raise AssessmentFileError(key, f"counts total {m.total}, level is {domain.arity}")
    return m


def format_point(point) -> str:
    if isinstance(point, CountVector):
        return point.key()
    return ','.join(str(label) for label in point)


def parse_gamble(domain, raw_gamble, key: str) -> FiniteGamble:
    if not isinstance(raw_gamble, dict):
        raise AssessmentFileError(key, "a gamble is an object with 'default' and 'values'")
    unknown = set(raw_gamble) - {'default', 'values'}
    if unknown:
        raise AssessmentFileError(key, f"unexpected fields {sorted(unknown)}")
    default = parse_rational(raw_gamble.get('default', 0), f"{key}.default")
    raw = raw_gamble.get('values', {})
    if not isinstance(raw, dict):
        raise AssessmentFileError(f"{key}.values", "expected an object")
    values = {}
    for point_text, value in raw.items():
        entry = f"{key}.values[{point_text!r}]"
        values[parse_point(domain, point_text, entry)] = parse_rational(value, entry)
    try:
        return gamble_for(domain, values, default)
    except (DomainMismatch, UnknownLabel) as error:
        raise AssessmentFileError(key, str(error))


def format_gamble(gamble: FiniteGamble, default: Fraction = Fraction(0)) -> Dict:
    return {'default': format_rational(default),
            'values': {format_point(z): format_rational(v) for z, v in gamble.items() if v != default}}


class AssessmentFile:
    """Parsed contents of an assessment file"""

    def __init__(self, space: Space, arity: int, mode: str,
                 items: Optional[List[Tuple[FiniteGamble, Fraction]]] = None,
                 envelope: Optional[List[Dict]] = None):
        self.space = space
        self.arity = arity
        self.mode = mode
        self.items = items or []
        self.envelope = envelope

    @property
    def domain(self):
        return TupleDomain(self.space, self.arity) if self.mode == 'tuple' else CountDomain(self.space, self.arity)

    def model(self):
        """CredalSet when an envelope is given, Assessment otherwise"""
        if self.envelope is not None:
            return CredalSet(self.domain, self.envelope)
        return Assessment(self.domain, self.items)

    def __eq__(self, other):
        if not isinstance(other, AssessmentFile):
            return False
        return (self.space == other.space and self.arity == other.arity and self.mode == other.mode
                and self.items == other.items and self.envelope == other.envelope)

    def __repr__(self):
        kind = f"{len(self.envelope)} masses" if self.envelope is not None else f"{len(self.items)} items"
        return f"AssessmentFile({self.mode}, {list(self.space.labels)!r}, N={self.arity}, {kind})"


def from_document(document) -> AssessmentFile:
    if not isinstance(document, dict):
        raise AssessmentFileError('document', "expected a JSON object")
    for field in ('labels', 'arity', 'mode'):
        if field not in document:
            raise AssessmentFileError(field, "missing")

    labels = document['labels']
    if not isinstance(labels, list) or not labels:
        raise AssessmentFileError('labels', "expected a non-empty list")
    labels = [str(label) for label in labels]
    if len(set(labels)) != len(labels):
        raise AssessmentFileError('labels', "labels must be distinct")
    if any(',' in label or ':' in label or '=' in label or ';' in label for label in labels):
        raise AssessmentFileError('labels', "labels may not contain , : = or ;")
    space = Space(labels)

    arity = document['arity']
    if isinstance(arity, bool) or not isinstance(arity, int) or arity < 1:
        raise AssessmentFileError('arity', f"expected a positive integer, got {arity!r}")
    mode = document['mode']
    if mode not in MODES:
        raise AssessmentFileError('mode', f"expected one of {MODES}, got {mode!r}")

    result = AssessmentFile(space, arity, mode)
    domain = result.domain

    if 'items' in document and 'envelope' in document:
        raise AssessmentFileError('envelope', "give either items or envelope, not both")

    raw_items = document.get('items', [])
    if not isinstance(raw_items, list):
        raise AssessmentFileError('items', "expected a list")
    for index, item in enumerate(raw_items):
        key = f"items[{index}]"
        if not isinstance(item, dict) or 'gamble' not in item or 'lower' not in item:
            raise AssessmentFileError(key, "an item needs 'gamble' and 'lower'")
        gamble = parse_gamble(domain, item['gamble'], f"{key}.gamble")
        result.items.append((gamble, parse_rational(item['lower'], f"{key}.lower")))

    if 'envelope' in document:
        raw_masses = document['envelope']
        if not isinstance(raw_masses, list) or not raw_masses:
            raise AssessmentFileError('envelope', "expected a non-empty list of mass maps")
        masses = []
        for index, raw in enumerate(raw_masses):
            key = f"envelope[{index}]"
            if not isinstance(raw, dict):
                raise AssessmentFileError(key, "expected an object")
            mass = {}
            for point_text, value in raw.items():
                entry = f"{key}[{point_text!r}]"
                mass[parse_point(domain, point_text, entry)] = parse_rational(value, entry)
            if any(v < 0 for v in mass.values()):
                raise AssessmentFileError(key, "negative mass")
            if sum(mass.values()) != 1:
                raise AssessmentFileError(key, f"masses sum to {sum(mass.values())}, not 1")
            masses.append({p: v for p, v in mass.items() if v})
        result.envelope = masses
    return result


def to_document(af: AssessmentFile) -> Dict:
    document = {'labels': list(af.space.labels), 'arity': af.arity, 'mode': af.mode}
    if af.envelope is not None:
        document['envelope'] = [{format_point(p): format_rational(v) for p, v in mass.items()}
                                for mass in af.envelope]
    else:
        document['items'] = [{'gamble': format_gamble(g), 'lower': format_rational(p)} for g, p in af.items]
    return document


def loads(text: str) -> AssessmentFile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise AssessmentFileError('document', f"invalid JSON: {error}")
    return from_document(document)


def dumps(af: AssessmentFile) -> str:
    return json.dumps(to_document(af), indent=2)


def load(path: str) -> AssessmentFile:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as error:
        raise AssessmentFileError(path, f"cannot read file: {error.strerror}")
    return loads(text)


def dump(af: AssessmentFile, path: str):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(dumps(af))
        handle.write('\n')


# ==================== INLINE SYNTAX ====================

def parse_inline_gamble(domain, text: str) -> FiniteGamble:
    """'1,0,1=1;default=0' (tuple keys) or '0:1,1:2=1/3' (count keys)"""
    values = {}
    default = Fraction(0)
    for term in filter(None, (t.strip() for t in text.split(';'))):
        point_text, sep, value = term.rpartition('=')
        if not sep:
            raise AssessmentFileError(term, "expected key=value")
        point_text = point_text.strip()
        if point_text == 'default':
            default = parse_rational(value, term)
        else:
            values[parse_point(domain, point_text, point_text)] = parse_rational(value, point_text)
    try:
        return gamble_for(domain, values, default)
    except (DomainMismatch, UnknownLabel) as error:
        raise AssessmentFileError(text, str(error))


def parse_polynomial(space: Space, text: str) -> Dict[Tuple[int, ...], Fraction]:
    """Monomial form from 'label:exp,label:exp=coef' terms joined by ';' ('=c' is a constant)"""
    monomials = {}
    for term in filter(None, (t.strip() for t in text.split(';'))):
        powers, sep, coefficient = term.rpartition('=')
        if not sep:
            raise AssessmentFileError(term, "expected exponents=coefficient")
        exponents = [0] * len(space)
        for part in filter(None, (p.strip() for p in powers.split(','))):
            label, colon, exponent = part.partition(':')
            label = label.strip()
            if label not in space:
                raise AssessmentFileError(term, f"unknown label {label!r}")
            try:
                exponents[space.index(label)] += int(exponent) if colon else 1
            except ValueError:
                raise AssessmentFileError(term, f"bad exponent {exponent!r}")
        key = tuple(exponents)
        if any(e < 0 for e in key):
            raise AssessmentFileError(term, "negative exponent")
        monomials[key] = monomials.get(key, Fraction(0)) + parse_rational(coefficient, term)
    return monomials
