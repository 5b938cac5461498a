"""
Core Combinatorics
Finite possibility spaces, product tuples, gambles, count vectors, invariant
atoms, symmetrization and the multiple hypergeometric prevision.

All scalars are exact fractions. Tuple order and count-vector component
order both follow the label order of the Space.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb, factorial, prod
from numbers import Rational
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_permutations

from errors import BadPermutation, CapExceeded, DomainMismatch, InvalidSpace, UnknownLabel
from settings import enumeration_cap


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and 'p/q' strings to an exact Fraction (never floats)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not prices")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


# ==================== SPACES AND DOMAINS ====================

class Space:
    """An ordered finite set of distinct labels (the set X)"""

    __slots__ = ('labels', '_index')

    def __init__(self, labels: Iterable):
        labels = tuple(labels)
        if not labels:
            raise InvalidSpace("a possibility space needs at least one label")
        if len(set(labels)) != len(labels):
            raise InvalidSpace(f"labels must be distinct: {labels!r}")
        self.labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    def index(self, label):
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise UnknownLabel(label, self)

    def __contains__(self, label):
        try:
            return label in self._index
        except TypeError:
            return False

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        return isinstance(other, Space) and self.labels == other.labels

    def __hash__(self):
        return hash(('Space', self.labels))

    def __repr__(self):
        return f"Space({list(self.labels)!r})"


class CountVector:
    """Occurrence counts of each label; indexes an invariant atom of X^N"""

    __slots__ = ('space', 'counts')

    def __init__(self, space: Space, counts: Sequence[int]):
        counts = tuple(int(c) for c in counts)
        if len(counts) != len(space):
            raise DomainMismatch(f"count vector needs {len(space)} components, got {len(counts)}")
        if any(c < 0 for c in counts):
            raise DomainMismatch(f"counts must be non-negative: {counts}")
        self.space = space
        self.counts = counts

    @classmethod
    def from_mapping(cls, space, counts):
        values = [0] * len(space)
        for label, count in counts.items():
            values[space.index(label)] = count
        return cls(space, values)

    @property
    def total(self):
        return sum(self.counts)

    def __getitem__(self, label):
        return self.counts[self.space.index(label)]

    def is_below(self, other):
        """Componentwise m <= other"""
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __sub__(self, other):
        return CountVector(self.space, [a - b for a, b in zip(self.counts, other.counts)])

    def __add__(self, other):
        return CountVector(self.space, [a + b for a, b in zip(self.counts, other.counts)])

    def frequencies(self):
        """m / N as a label -> Fraction mapping"""
        total = self.total
        return {label: Fraction(c, total) for label, c in zip(self.space.labels, self.counts)}

    def key(self):
        """Hand-editable form, label:count pairs joined by commas"""
        return ','.join(f"{label}:{c}" for label, c in zip(self.space.labels, self.counts))

    def __eq__(self, other):
        return isinstance(other, CountVector) and self.counts == other.counts and self.space == other.space

    def __hash__(self):
        return hash(self.counts)

    def __repr__(self):
        return f"CountVector({self.key()})"


class TupleDomain:
    """The product space X^N"""

    kind = 'tuple'

    def __init__(self, space: Space, arity: int):
        if arity < 1:
            raise DomainMismatch(f"arity must be positive, got {arity}")
        self.space = space
        self.arity = arity
        self._points = None
        self._positions = None

    @property
    def size(self):
        return len(self.space) ** self.arity

    @property
    def points(self):
        if self._points is None:
            self._points = tuple(enumerate_tuples(self.space, self.arity))
        return self._points

    def position(self, point):
        if self._positions is None:
            self._positions = {z: i for i, z in enumerate(self.points)}
        try:
            return self._positions[point]
        except (KeyError, TypeError):
            raise UnknownLabel(point, self.space)

    def __eq__(self, other):
        return (isinstance(other, TupleDomain) and self.space == other.space
                and self.arity == other.arity)

    def __hash__(self):
        return hash(('tuple', self.space, self.arity))

    def __repr__(self):
        return f"TupleDomain({list(self.space.labels)!r}, N={self.arity})"


class CountDomain:
    """The set of count vectors N_X^N"""

    kind = 'count'

    def __init__(self, space: Space, arity: int):
        if arity < 0:
            raise DomainMismatch(f"count level must be non-negative, got {arity}")
        self.space = space
        self.arity = arity
        self._positions = None

    @property
    def size(self):
        return comb(self.arity + len(self.space) - 1, len(self.space) - 1)

    @property
    def points(self):
        return count_vectors(self.space, self.arity)

    def position(self, point):
        if self._positions is None:
            self._positions = {m.counts: i for i, m in enumerate(self.points)}
        counts = point.counts if isinstance(point, CountVector) else tuple(point)
        try:
            return self._positions[counts]
        except KeyError:
            raise UnknownLabel(point, self.space)

    def __eq__(self, other):
        return (isinstance(other, CountDomain) and self.space == other.space
                and self.arity == other.arity)

    def __hash__(self):
        return hash(('count', self.space, self.arity))

    def __repr__(self):
        return f"CountDomain({list(self.space.labels)!r}, N={self.arity})"


# ==================== GAMBLES ====================

class FiniteGamble:
    """Exact rational gamble on a finite domain; values are kept in domain order"""

    domain_class = None

    def __init__(self, space: Space, arity: int, values: Union[Mapping, Callable, Sequence],
                 default=None):
        self.domain = self.domain_class(space, arity)
        points = self.domain.points
        if callable(values):
            self.values = tuple(as_fraction(values(z)) for z in points)
        elif isinstance(values, Mapping):
            filled = [None] * len(points)
            for key, value in values.items():
                filled[self.domain.position(self._normalize_key(key))] = as_fraction(value)
            if default is not None:
                fallback = as_fraction(default)
                filled = [fallback if v is None else v for v in filled]
            elif any(v is None for v in filled):
                missing = points[filled.index(None)]
                raise DomainMismatch(f"gamble is not defined at {missing!r} and no default given")
            self.values = tuple(filled)
        else:
            values = tuple(as_fraction(v) for v in values)
            if len(values) != len(points):
                raise DomainMismatch(f"expected {len(points)} values, got {len(values)}")
            self.values = values

    def _normalize_key(self, key):
        return key

    @classmethod
    def _raw(cls, domain, values):
        gamble = cls.__new__(cls)
        gamble.domain = domain
        gamble.values = tuple(values)
        return gamble

    @classmethod
    def constant(cls, space, arity, value):
        value = as_fraction(value)
        return cls(space, arity, lambda z: value)

    @classmethod
    def indicator(cls, space, arity, points):
        gamble = cls.constant(space, arity, 0)
        values = list(gamble.values)
        for point in points:
            values[gamble.domain.position(gamble._normalize_key(point))] = Fraction(1)
        return cls._raw(gamble.domain, values)

    @property
    def space(self):
        return self.domain.space

    @property
    def arity(self):
        return self.domain.arity

    @property
    def points(self):
        return self.domain.points

    def __getitem__(self, point):
        return self.values[self.domain.position(self._normalize_key(point))]

    def items(self):
        return zip(self.domain.points, self.values)

    def min(self):
        return min(self.values)

    def max(self):
        return max(self.values)

    def map(self, fn):
        return self._raw(self.domain, [as_fraction(fn(v)) for v in self.values])

    def _check(self, other):
        if not isinstance(other, FiniteGamble) or other.domain != self.domain:
            raise DomainMismatch(f"cannot combine gambles on {self.domain} and {getattr(other, 'domain', other)}")

    def __add__(self, other):
        if isinstance(other, FiniteGamble):
            self._check(other)
            return self._raw(self.domain, [a + b for a, b in zip(self.values, other.values)])
        c = as_fraction(other)
        return self._raw(self.domain, [a + c for a in self.values])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FiniteGamble):
            self._check(other)
            return self._raw(self.domain, [a - b for a, b in zip(self.values, other.values)])
        c = as_fraction(other)
        return self._raw(self.domain, [a - c for a in self.values])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._raw(self.domain, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, FiniteGamble):
            self._check(other)
            return self._raw(self.domain, [a * b for a, b in zip(self.values, other.values)])
        c = as_fraction(other)
        return self._raw(self.domain, [a * c for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, FiniteGamble) and self.domain == other.domain
                and self.values == other.values)

    def __hash__(self):
        return hash((self.domain, self.values))

    def __repr__(self):
        shown = ', '.join(f"{z}: {v}" for z, v in list(self.items())[:6])
        more = ', ...' if len(self.values) > 6 else ''
        return f"{type(self).__name__}({self.domain}, {{{shown}{more}}})"


class Gamble(FiniteGamble):
    """Gamble on the product space X^N, keyed by label tuples"""

    domain_class = TupleDomain

    def _normalize_key(self, key):
        return tuple(key)


class CountGamble(FiniteGamble):
    """Gamble on N_X^N, keyed by CountVector (or bare counts tuples)"""

    domain_class = CountDomain

    def _normalize_key(self, key):
        return key


def gamble_for(domain, values, default=None):
    """Build the gamble class matching a TupleDomain or CountDomain"""
    cls = Gamble if domain.kind == 'tuple' else CountGamble
    return cls(domain.space, domain.arity, values, default)


def normalize_point(domain, key):
    return tuple(key) if domain.kind == 'tuple' else key


# ==================== ENUMERATION ====================

def _check_cap(what, size, cap):
    limit = enumeration_cap(cap)
    if size > limit:
        raise CapExceeded(what, size, limit)


def enumerate_tuples(space: Space, N: int, cap: Optional[int] = None) -> List[Tuple]:
    """All of X^N in lexicographic order of the space labels"""
    if N < 1:
        raise DomainMismatch(f"arity must be positive, got {N}")
    _check_cap(f"X^{N}", len(space) ** N, cap)
    return list(product(space.labels, repeat=N))


@lru_cache(maxsize=256)
def count_vectors(space: Space, N: int) -> Tuple[CountVector, ...]:
    """N_X^N in order of first occurrence along enumerate_tuples"""

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    return tuple(CountVector(space, c) for c in compositions(N, len(space)))


def count_vector(space, z):
    counts = [0] * len(space)
    for component in z:
        counts[space.index(component)] += 1
    return CountVector(space, counts)


def atom_size(m):
    """nu(m) = N! / prod_x m_x!"""
    return factorial(m.total) // prod(factorial(c) for c in m.counts)


def invariant_atom(m: CountVector, cap: Optional[int] = None) -> List[Tuple]:
    """All tuples with count vector m, in lexicographic order"""
    _check_cap(f"atom {m.key()}", atom_size(m), cap)
    if m.total == 0:
        return [()]
    indices = [i for i, c in enumerate(m.counts) for _ in range(c)]
    labels = m.space.labels
    return [tuple(labels[i] for i in perm) for perm in multiset_permutations(indices)]


def permute_gamble(f: Gamble, pi: Sequence[int]) -> Gamble:
    """(pi f)(x) = f(pi x) with (pi x)_k = x_{pi(k)}; pi is 0-based"""
    pi = tuple(pi)
    if sorted(pi) != list(range(f.arity)):
        raise BadPermutation(f"{pi} is not a permutation of 0..{f.arity - 1}")
    return Gamble._raw(f.domain, [f[tuple(z[pi[k]] for k in range(len(pi)))] for z in f.points])


# ==================== HYPERGEOMETRIC PREVISIONS ====================

def muhy(f: Gamble, m: CountVector, cap: Optional[int] = None) -> Fraction:
    """Average of f over the invariant atom [m]"""
    if f.arity != m.total:
        raise DomainMismatch(f"gamble arity {f.arity} differs from count total {m.total}")
    if f.space != m.space:
        raise DomainMismatch("gamble and count vector live on different spaces")
    atom = invariant_atom(m, cap)
    return sum((f[z] for z in atom), Fraction(0)) / len(atom)


def muhy_gamble(f: Gamble) -> CountGamble:
    """m -> MuHy(f|m) for every m, in a single pass over X^N"""
    domain = CountDomain(f.space, f.arity)
    sums = [Fraction(0)] * domain.size
    for z, value in f.items():
        sums[domain.position(count_vector(f.space, z))] += value
    return CountGamble._raw(domain, [s / atom_size(m) for s, m in zip(sums, domain.points)])


def count_gamble_to_tuple(h: CountGamble) -> Gamble:
    """The permutation-invariant gamble z -> h(T(z)) on X^N"""
    space = h.space
    return Gamble(space, h.arity, lambda z: h[count_vector(space, z)])


def symmetrize(f: Gamble) -> Gamble:
    """f-hat = sum_m I_[m] MuHy(f|m), via the count space"""
    return count_gamble_to_tuple(muhy_gamble(f))


def symmetrize_by_permutations(f: Gamble, cap: Optional[int] = None) -> Gamble:
    """f-hat as the plain average of pi f over all N! permutations"""
    _check_cap(f"{f.arity}! permutations of X^{f.arity}", factorial(f.arity) * f.domain.size, cap)
    total = [Fraction(0)] * f.domain.size
    count = 0
    for pi in permutations(range(f.arity)):
        for i, value in enumerate(permute_gamble(f, pi).values):
            total[i] += value
        count += 1
    return Gamble._raw(f.domain, [t / count for t in total])


def hypergeometric_weight(m: CountVector, mu: CountVector) -> Fraction:
    """Probability of drawing composition m when taking |m| balls from an urn mu"""
    if not m.is_below(mu):
        return Fraction(0)
    return Fraction(atom_size(m) * atom_size(mu - m), atom_size(mu))


def muhy_marginal(g: CountGamble, mu: CountVector) -> Fraction:
    """g-bar(mu): expectation of g when drawing n balls without replacement from mu"""
    if g.space != mu.space:
        raise DomainMismatch("count gamble and urn composition live on different spaces")
    if g.arity > mu.total:
        raise DomainMismatch(f"cannot draw {g.arity} balls from an urn of {mu.total}")
    return sum((hypergeometric_weight(m, mu) * value for m, value in g.items() if value),
               Fraction(0))


def marginalize(g: CountGamble, N: int) -> CountGamble:
    """g-bar on N_X^N for a count gamble g of level n <= N"""
    domain = CountDomain(g.space, N)
    return CountGamble._raw(domain, [muhy_marginal(g, mu) for mu in domain.points])


def cylindrical_extension(f: Gamble, N: int) -> Gamble:
    """f*(z_1..z_N) = f(z_1..z_n)"""
    n = f.arity
    if n > N:
        raise DomainMismatch(f"cannot extend a gamble on X^{n} down to X^{N}")
    return Gamble(f.space, N, lambda z: f[z[:n]])
