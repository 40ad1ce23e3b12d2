#
# Generator sets, the right lifting property, and membership in Po(X)
# (pushouts of generators).
#

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, NamedTuple

from ..config import GC, GoodColimError, Limits
from ..graphcat import (
    Graph,
    GraphError,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    colimit_over_poset,
    discrete,
    edge,
    empty,
    find_isomorphism,
    inverse,
    iter_homs,
    preimages,
    pushout,
)
from ..posets import classify_element

if TYPE_CHECKING:
    from ..diagrams import PosetDiagram


class CertificateError(GoodColimError):
    """
    A witness failed recomputation.  The locator names the witness, e.g.
    `links[2].square` or `rlp.diagonals[5]`.
    """

    def __init__(self, locator: str, message: str):
        super().__init__(f'{locator}: {message}')
        self.locator = locator


class SearchExhausted(GoodColimError):
    """
    A bounded search ran out of budget.  The partial trace lists what was tried.
    """

    def __init__(self, message: str, trace: list[str] | None = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class GeneratorSet:
    """
    A named, ordered set of generating morphisms.  Members are addressed
    by name; every domain and codomain must be small enough for hom-set
    enumeration.
    """
    name: str
    members: tuple[tuple[str, GraphMorphism], ...] = field(default=())
    limits: Limits | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        names = [n for n, _ in self.members]
        if len(set(names)) != len(names):
            raise GraphError(f'generator set {self.name}: duplicate member name')
        bound = GC.resolve(self.limits).max_vertices
        for n, g in self.members:
            if len(g.dom.vertices) > bound or len(g.cod.vertices) > bound:
                raise GraphError(f'generator {n} is larger than the enumeration bound')

    def __iter__(self) -> Iterator[tuple[str, GraphMorphism]]:
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, name: str) -> GraphMorphism:
        for n, g in self.members:
            if n == name:
                return g
        raise KeyError(name)

    def names(self) -> list[str]:
        return [n for n, _ in self.members]


def standard_generators(limits: Limits | None = None) -> GeneratorSet:
    '''
    X_std: x1 adds a vertex (∅ → V1), x2 adds an edge between two given
    vertices (V2 → E1).  Its cellular maps are exactly the monomorphisms.
    '''
    v2, e1 = discrete(2), edge()
    return GeneratorSet('X_std', (
        ('x1', GraphMorphism(empty(), discrete(1), {}, {})),
        ('x2', GraphMorphism(v2, e1, {'v0': 'v0', 'v1': 'v1'}, {})),
    ), limits)


class Square(NamedTuple):
    '''
    A commuting square from a generator g to a map p: u on top (dom g → dom p),
    v on the bottom (cod g → cod p).
    '''
    generator: str
    u: GraphMorphism
    v: GraphMorphism


class Diagonal(NamedTuple):
    square: Square
    d: GraphMorphism


def squares(name: str, g: GraphMorphism, p: GraphMorphism, limits: Limits | None = None) -> Iterator[Square]:
    '''
    Generate every commuting square from g to p in a deterministic order.
    '''
    for u in iter_homs(g.dom, p.dom, limits=limits):
        vc = {}
        for a in g.dom.vertices:
            vc.setdefault(g.v(a), set()).add(p.v(u.v(a)))
        ec = {}
        for a in g.dom.edges:
            ec.setdefault(g.e(a), set()).add(p.e(u.e(a)))
        for v in iter_homs(g.cod, p.cod, vc, ec, limits=limits):
            yield Square(name, u, v)


def diagonal(g: GraphMorphism, p: GraphMorphism, u: GraphMorphism, v: GraphMorphism,
             limits: Limits | None = None) -> GraphMorphism | None:
    '''
    Find d with d @ g == u and p @ d == v, or return None.
    '''
    vp, ep = preimages(p)
    vc = {w: set(vp[v.v(w)]) for w in g.cod.vertices}
    ec = {e: set(ep[v.e(e)]) for e in g.cod.edges}
    for a in g.dom.vertices:
        vc[g.v(a)] &= {u.v(a)}
    for a in g.dom.edges:
        ec[g.e(a)] &= {u.e(a)}
    for d in iter_homs(g.cod, p.dom, vc, ec, limits=limits):
        return d
    return None


@dataclass(frozen=True)
class RlpReport:
    """
    Result of an exhaustive lifting test.  When `holds` is true the
    diagonal table has one entry per square; otherwise `counterexample` is
    the first square without a diagonal.
    """
    holds: bool
    diagonals: tuple[Diagonal, ...] = ()
    counterexample: Square | None = None
    exhaustive: bool = True

    def verify(self, p: GraphMorphism, generators: GeneratorSet, limits: Limits | None = None,
               where: str = 'rlp'):
        '''
        Check every recorded diagonal and that the table covers every
        square enumerable within the (possibly enlarged) limits.
        '''
        if not self.holds:
            raise CertificateError(where, 'lifting property does not hold')
        recorded = set()
        for i, (sq, d) in enumerate(self.diagonals):
            g = generators[sq.generator]
            if d @ g != sq.u or p @ d != sq.v:
                raise CertificateError(f'{where}.diagonals[{i}]', 'not a diagonal of its square')
            recorded.add((sq.generator, sq.u.key(), sq.v.key()))
        for name, g in generators:
            for sq in squares(name, g, p, limits):
                if (name, sq.u.key(), sq.v.key()) not in recorded:
                    raise CertificateError(where, f'square for {name} has no recorded diagonal')


def rlp_check(p: GraphMorphism, generators: GeneratorSet, limits: Limits | None = None) -> RlpReport:
    '''
    Test whether p has the right lifting property against every member
    of the generator set, by enumerating all commuting squares and
    searching for a diagonal in each.

    Returns:
      an RlpReport: the diagonal table, or the first failing square

    Raises:
      BoundExceeded: some hom-set is too large to enumerate
    '''
    table = []
    for name, g in generators:
        for sq in squares(name, g, p, limits):
            d = diagonal(g, p, sq.u, sq.v, limits)
            if d is None:
                logging.debug(f'rlp_check: no diagonal for a {name} square')
                return RlpReport(False, (), sq)
            table.append(Diagonal(sq, d))
    return RlpReport(True, tuple(table))


def outstanding_squares(p: GraphMorphism, generators: GeneratorSet,
                        limits: Limits | None = None) -> list[Square]:
    '''
    The squares against p that have no diagonal, in enumeration order.
    '''
    return [sq for name, g in generators for sq in squares(name, g, p, limits)
            if diagonal(g, p, sq.u, sq.v, limits) is None]


@dataclass(frozen=True)
class PoCertificate:
    """
    Evidence that f: A → B lies in Po(X): either f is an isomorphism, or
    f is isomorphic under A to the pushout of a generator along a
    characteristic map.

    Attributes:
      f: the certified morphism
      generator: member name, or None for the isomorphism branch
      square: pushout of the characteristic map (square.f) and the generator (square.g)
      comparison: isomorphism from the pushout apex to B (or f itself in the iso branch)
    """
    f: GraphMorphism
    generator: str | None
    square: PushoutCertificate | None
    comparison: GraphMorphism

    def verify(self, where: str = 'po', generators: GeneratorSet | None = None):
        if not analyze_morphism(self.comparison).is_iso:
            raise CertificateError(where, 'comparison is not an isomorphism')
        if self.generator is None:
            if self.comparison != self.f:
                raise CertificateError(where, 'isomorphism witness is not the morphism itself')
            return
        if generators is not None and self.square.g != generators[self.generator]:
            raise CertificateError(where, f'square is not built on generator {self.generator}')
        try:
            self.square.verify(f'{where}.square')
        except GoodColimError as err:
            raise CertificateError(f'{where}.square', str(err))
        if self.square.f.cod != self.f.dom or self.comparison.cod != self.f.cod:
            raise CertificateError(where, 'square does not fit the morphism')
        if self.comparison @ self.square.leg_b != self.f:
            raise CertificateError(where, 'comparison does not commute with the morphism')


def po_membership(f: GraphMorphism, generators: GeneratorSet, limits: Limits | None = None) -> PoCertificate | None:
    '''
    Search for a Po(X) certificate of f: try every generator and every
    characteristic map into the domain of f, compute the pushout, and look
    for an isomorphism to the codomain of f under the domain.

    Returns:
      a certificate, or None when the exhaustive search fails
    '''
    if analyze_morphism(f).is_iso:
        return PoCertificate(f, None, None, f)
    a, b = f.dom, f.cod
    dv, de = len(b.vertices) - len(a.vertices), len(b.edges) - len(a.edges)
    for name, g in generators:
        if dv > len(g.cod.vertices) or de > len(g.cod.edges):
            continue
        for c in iter_homs(g.dom, a, limits=limits):
            apex, leg_a, leg_y, square = pushout(c, g)
            if len(apex.vertices) != len(b.vertices) or len(apex.edges) != len(b.edges):
                continue
            phi = find_isomorphism(apex, b, under=(leg_a, f), limits=limits)
            if phi is not None:
                logging.debug(f'po_membership: pushout of {name}')
                return PoCertificate(f, name, square, phi)
    return None


def lift_composite(
    d: PosetDiagram,
    u: GraphMorphism,
    v: GraphMorphism,
    p: GraphMorphism,
    limits: Limits | None = None,
) -> GraphMorphism:
    '''
    Solve a lifting problem for the composite of a good diagram: given
    u: D(⊥) → C and v: colim D → C' with p @ u == v @ composite, build
    w: colim D → C with w @ composite == u and p @ w == v.  The lift is
    built element by element: isolated elements solve the square of their
    link by search, limit elements mediate out of the colimit below them.

    Raises:
      GoodColimError: some link square has no diagonal
    '''
    total = colimit_over_poset(d)
    bottom = d.bottom
    if p @ u != v @ total.legs[bottom]:
        raise GoodColimError('lift_composite: the square does not commute')
    lifts = {}
    for x in d.shape.linear_extension():
        cls = classify_element(d.shape, x)
        if cls.kind == 'bottom':
            lifts[x] = u
        elif cls.kind == 'isolated':
            link = d.arrow(cls.predecessor, x)
            h = diagonal(link, p, lifts[cls.predecessor], v @ total.legs[x], limits)
            if h is None:
                raise GoodColimError(f'lift_composite: the link square at {x} has no diagonal')
            lifts[x] = h
        else:
            below = d.shape.strictly_below(x)
            cocone = colimit_over_poset(d, below)
            comparison = cocone.mediate({y: d.arrow(y, x) for y in below}, d.objects[x])
            m = cocone.mediate({y: lifts[y] for y in below}, p.dom)
            lifts[x] = m @ inverse(comparison)
    return total.mediate(lifts, p.dom)
