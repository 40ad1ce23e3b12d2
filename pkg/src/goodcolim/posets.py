#
# Finite posets: goodness, the bottom/isolated/limit taxonomy, linear
# extensions, the one-step and directed completions, and the closure of
# initial segments under strong upper bounds.
#

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, NamedTuple

import networkx as nx

from .config import GoodColimError


class PosetError(GoodColimError):
    """
    Not a partial order, an unknown element, a subset that is not an
    initial segment, or a shape that is not good.
    """


def id_key(s: str):
    '''
    Sort key for ids: runs of digits compare as numbers, so "v2" < "v10",
    and everything else compares as text.
    '''
    return tuple((0, int(t), '') if t.isdigit() else (1, 0, t) for t in re.split(r'(\d+)', s) if t)


def sort_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=id_key)


class FinitePoset:
    """
    A finite partial order.  The constructor accepts any set of pairs
    (x, y) meaning x < y; the order is their reflexive-transitive closure,
    and the constructor fails if that closure is not antisymmetric.  The
    stored covering relation is the transitive reduction.

    Arguments:
      elements: the element ids
      covers: pairs (x, y) with x < y
    """

    def __init__(self, elements: Iterable[str], covers: Iterable[tuple[str, str]] = ()):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise PosetError('duplicate element')
        g = nx.DiGraph()
        g.add_nodes_from(elements)
        for x, y in covers:
            if x not in g or y not in g:
                raise PosetError(f'unknown element in ({x}, {y})')
            if x != y:
                g.add_edge(x, y)
        if not nx.is_directed_acyclic_graph(g):
            raise PosetError('relation is not antisymmetric')
        red = nx.transitive_reduction(g)
        self._elements = tuple(sort_ids(elements))
        self._covers = tuple(sorted(red.edges, key=lambda p: (id_key(p[0]), id_key(p[1]))))
        self._down = {x: frozenset(nx.ancestors(g, x)) | {x} for x in elements}
        self._up = {x: frozenset(nx.descendants(g, x)) | {x} for x in elements}
        self._graph = red
        self._order = None

    @property
    def elements(self) -> tuple[str, ...]:
        return self._elements

    @property
    def covers(self) -> tuple[tuple[str, str], ...]:
        return self._covers

    def __contains__(self, x):
        return x in self._down

    def __len__(self):
        return len(self._elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self._elements)

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self._elements == other._elements and self._covers == other._covers

    def __hash__(self):
        return hash((self._elements, self._covers))

    def __repr__(self):
        return f'FinitePoset({list(self._elements)}, {list(self._covers)})'

    def check(self, x: str):
        if x not in self._down:
            raise PosetError(f'{x} is not an element')

    def leq(self, x: str, y: str) -> bool:
        self.check(x)
        self.check(y)
        return x in self._down[y]

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def down(self, x: str) -> frozenset[str]:
        '''The principal down-set ↓x.'''
        self.check(x)
        return self._down[x]

    def strictly_below(self, x: str) -> frozenset[str]:
        '''The set ↓↓x of elements strictly below x.'''
        return self.down(x) - {x}

    def up(self, x: str) -> frozenset[str]:
        self.check(x)
        return self._up[x]

    def lower_covers(self, x: str) -> list[str]:
        return sort_ids(self._graph.predecessors(x))

    def down_closure(self, subset: Iterable[str]) -> frozenset[str]:
        result = set()
        for x in subset:
            result |= self.down(x)
        return frozenset(result)

    def greatest_of(self, subset: Iterable[str]) -> str | None:
        '''
        The greatest element of a subset, or None if it has none.
        '''
        subset = frozenset(subset)
        for x in sort_ids(subset):
            if subset <= self._down[x]:
                return x
        return None

    def maximal_of(self, subset: Iterable[str]) -> list[str]:
        subset = frozenset(subset)
        return [x for x in sort_ids(subset) if not (self._up[x] - {x}) & subset]

    def least(self) -> str | None:
        everything = frozenset(self._elements)
        for x in self._elements:
            if self._up[x] == everything:
                return x
        return None

    def greatest(self) -> str | None:
        return self.greatest_of(self._elements)

    def upper_bounds(self, subset: Iterable[str]) -> list[str]:
        '''
        Elements above every member of the subset, in linear-extension order.
        '''
        subset = frozenset(subset)
        return [x for x in self.linear_extension() if subset <= self._down[x]]

    def linear_extension(self) -> list[str]:
        '''
        A deterministic total order refining the partial order: a
        topological sort that always picks the smallest available id.
        '''
        if self._order is None:
            self._order = tuple(nx.lexicographical_topological_sort(self._graph, key=id_key))
        return list(self._order)

    def is_initial_segment(self, subset: Iterable[str]) -> bool:
        subset = frozenset(subset)
        return all(x in self for x in subset) and self.down_closure(subset) == subset

    def restrict(self, members: Iterable[str]) -> FinitePoset:
        '''
        The full subposet on the given elements.
        '''
        members = list(members)
        for x in members:
            self.check(x)
        keep = set(members)
        pairs = [(x, y) for y in members for x in self._down[y] if x in keep and x != y]
        return FinitePoset(members, pairs)

    def extend(self, new: Iterable[str], covers: Iterable[tuple[str, str]]) -> FinitePoset:
        '''
        Add elements and relations.
        '''
        return FinitePoset(list(self._elements) + list(new), list(self._covers) + list(covers))

    def fresh(self, stem: str) -> str:
        '''
        An id that is not an element yet: the stem itself, or stem1, stem2, ...
        '''
        if stem not in self:
            return stem
        for n in itertools.count(1):
            if f'{stem}{n}' not in self:
                return f'{stem}{n}'

    def to_networkx(self) -> nx.DiGraph:
        return self._graph.copy()


def chain(n: int) -> FinitePoset:
    '''
    The chain 0 < 1 < ... < n-1 with element ids "0", "1", ...
    '''
    return FinitePoset([str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)])


def span() -> FinitePoset:
    '''
    The shape of a pushout: ⊥ < x and ⊥ < y (⊥ is spelled "b").
    '''
    return FinitePoset(['b', 'x', 'y'], [('b', 'x'), ('b', 'y')])


def diamond() -> FinitePoset:
    '''
    The span with a top: ⊥ < a, ⊥ < b, a < t, b < t (⊥ is spelled "bot").
    '''
    return FinitePoset(['bot', 'a', 'b', 't'], [('bot', 'a'), ('bot', 'b'), ('a', 't'), ('b', 't')])


@dataclass(frozen=True)
class InitialSegment:
    """
    A downward-closed subset of a poset.  Construction fails for any other subset.
    """
    poset: FinitePoset
    members: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, 'members', frozenset(self.members))
        if not self.poset.is_initial_segment(self.members):
            raise PosetError(f'not an initial segment: {sort_ids(self.members)}')

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.ordered())

    def ordered(self) -> list[str]:
        '''The members in the linear-extension order of the poset.'''
        return [x for x in self.poset.linear_extension() if x in self.members]


def segment(p: FinitePoset, members: Iterable[str] | InitialSegment) -> InitialSegment:
    if isinstance(members, InitialSegment):
        return members
    return InitialSegment(p, frozenset(members))


class GoodReport(NamedTuple):
    good: bool
    least: str | None


def is_good(p: FinitePoset) -> GoodReport:
    '''
    A poset is good when it is well-founded and has a least element.
    Well-foundedness is checked on the order relation (a strictly
    descending chain must revisit an element, i.e. the relation has a cycle).
    '''
    well_founded = nx.is_directed_acyclic_graph(p.to_networkx())
    least = p.least()
    return GoodReport(well_founded and least is not None, least)


def require_good(p: FinitePoset) -> str:
    good, least = is_good(p)
    if not good:
        raise PosetError('shape is not good (no least element)')
    return least


class ElementClass(NamedTuple):
    kind: Literal['bottom', 'isolated', 'limit']
    predecessor: str | None = None


def classify_element(p: FinitePoset, x: str) -> ElementClass:
    '''
    Classify an element of a good poset.  An element is isolated when the
    set of elements strictly below it has a top (its predecessor); other
    elements except the least one are limit.

    Raises:
      PosetError: x is not an element, or p is not good
    '''
    p.check(x)
    least = require_good(p)
    if x == least:
        return ElementClass('bottom')
    pred = p.greatest_of(p.strictly_below(x))
    if pred is None:
        return ElementClass('limit')
    return ElementClass('isolated', pred)


def isolated_elements(p: FinitePoset) -> list[str]:
    return [x for x in p.linear_extension() if classify_element(p, x).kind == 'isolated']


Kappa = int | Literal['omega']


def parse_kappa(kappa) -> Kappa:
    if kappa in ('omega', 'ω', 'w'):
        return 'omega'
    try:
        n = int(kappa)
    except (TypeError, ValueError):
        raise PosetError(f'bad cardinal marker {kappa!r}')
    if n < 1:
        raise PosetError('cardinal marker must be positive')
    return n


def smaller_than(n: int, kappa: Kappa) -> bool:
    return kappa == 'omega' or n < kappa


class KappaReport(NamedTuple):
    kappa_good: bool
    kappa_directed: bool


def is_kappa_good_and_directed(p: FinitePoset, kappa: Kappa = 'omega') -> KappaReport:
    '''
    Check the two cardinality conditions: every principal down-set has
    fewer than kappa elements, and every subset with fewer than kappa
    elements has an upper bound.  For kappa = omega (every finite set is
    small) the second condition says p has a greatest element.

    Arguments:
      p: the poset
      kappa: 'omega' or a positive integer
    '''
    kappa = parse_kappa(kappa)
    good = all(smaller_than(len(p.down(x)), kappa) for x in p.elements)
    if kappa == 'omega' or kappa > len(p):
        directed = p.greatest() is not None
    else:
        directed = all(
            p.upper_bounds(s)
            for n in range(kappa)
            for s in itertools.combinations(p.elements, n)
        )
    return KappaReport(good, directed)


def linear_extension(p: FinitePoset) -> list[str]:
    return p.linear_extension()


def initial_segments(p: FinitePoset) -> list[InitialSegment]:
    '''
    All initial segments (the empty one included) ordered by size and
    then by their members in id order.  Each one is the down-closure of
    an antichain.
    '''
    found = {p.down_closure(a) for a in nx.antichains(p.to_networkx())}
    ordered = sorted(found, key=lambda s: (len(s), [id_key(x) for x in sort_ids(s)]))
    return [InitialSegment(p, s) for s in ordered]


def restrict(p: FinitePoset, members: Iterable[str]) -> FinitePoset:
    return p.restrict(members)


def up_set(p: FinitePoset, x: str) -> FinitePoset:
    '''
    The principal filter ↑x as a poset; it is good with least element x.
    '''
    return p.restrict(p.up(x))


class PlusStep(NamedTuple):
    poset: FinitePoset
    markers: dict[str, InitialSegment]


def plus_step(p: FinitePoset, kappa: Kappa = 'omega') -> PlusStep:
    '''
    Add, for every nonempty small initial segment S without a greatest
    element, a new element p_S above S.  The new elements are limit and
    mutually incomparable; p is an initial segment of the result.

    Returns:
      the extended poset and the map from each new element to its segment
    '''
    require_good(p)
    kappa = parse_kappa(kappa)
    todo = [s for s in initial_segments(p)
            if s.members and smaller_than(len(s), kappa) and p.greatest_of(s.members) is None]
    names, covers, markers = [], [], {}
    taken = set(p.elements)
    counter = itertools.count()
    for s in todo:
        name = next(f'p{i}' for i in counter if f'p{i}' not in taken)
        taken.add(name)
        names.append(name)
        covers += [(m, name) for m in p.maximal_of(s.members)]
        markers[name] = s
    result = p.extend(names, covers)
    logging.debug(f'plus_step: added {names}')
    return PlusStep(result, {k: InitialSegment(result, s.members) for k, s in markers.items()})


def directed_completion(p: FinitePoset) -> FinitePoset:
    '''
    Extend a good poset to a directed one.  A finite poset is directed
    exactly when it has a greatest element, so the completion adds a single
    top above the maximal elements (or nothing when there is a greatest element).
    '''
    require_good(p)
    if p.greatest() is not None:
        return p
    top = p.fresh('top')
    return p.extend([top], [(m, top) for m in p.maximal_of(p.elements)])


class Closure(NamedTuple):
    closure: InitialSegment
    strong_bounds: dict[str, InitialSegment]


def strong_closure(p: FinitePoset, q: Iterable[str] | InitialSegment) -> Closure:
    '''
    Close an initial segment under strong upper bounds: x belongs to the
    closure when it is a strong upper bound of some R ⊆ Q, i.e. every
    element of ↓x outside R is limit.  The largest candidate R is ↓x ∩ Q,
    so x qualifies exactly when every element of ↓x outside Q is limit.

    Returns:
      the closure, and for each added element x the witness R = ↓x ∩ Q

    Raises:
      PosetError: q is not an initial segment
    '''
    q = segment(p, q)
    require_good(p)
    limit = {x for x in p.elements if classify_element(p, x).kind == 'limit'}
    members = set(q.members)
    bounds = {}
    for x in p.linear_extension():
        if x in q.members:
            continue
        if (p.down(x) - q.members) <= limit:
            members.add(x)
            bounds[x] = InitialSegment(p, p.down(x) & q.members)
    return Closure(InitialSegment(p, frozenset(members)), bounds)


def is_closed(p: FinitePoset, q: Iterable[str] | InitialSegment) -> bool:
    q = segment(p, q)
    return strong_closure(p, q).closure.members == q.members
