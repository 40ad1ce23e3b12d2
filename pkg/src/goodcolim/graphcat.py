#
# The base category: finite directed multigraphs, their morphisms, and
# the finite colimits used by every other module.
#

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

import networkx as nx
from networkx.algorithms import isomorphism
from networkx.utils import UnionFind

from .config import GC, GoodColimError, Limits
from .posets import PosetError, id_key

if TYPE_CHECKING:
    from .diagrams import PosetDiagram


class GraphError(GoodColimError):
    """
    A graph or morphism is malformed, or two morphisms that should
    share a domain (or compose) do not.
    """


class BoundExceeded(GoodColimError):
    """
    An enumeration was refused because it would exceed a configured bound.
    """

    def __init__(self, what: str, count: int, bound: int):
        super().__init__(f'{what}: {count} exceeds the bound {bound}')
        self.count = count
        self.bound = bound


class ColimitError(GoodColimError):
    """
    A diagram is not a functor, or maps passed to a mediator do not form a cocone.
    """


class Graph:
    """
    A finite directed multigraph.  Vertices and edges are opaque string ids
    (the two namespaces are separate); every edge has a source and a target
    vertex.  Graphs are immutable: the constructor validates its arguments
    and stores them in sorted order.

    Arguments:
      vertices: the vertex ids
      edges: triples (id, src, tgt)
    """

    __slots__ = ('_vertices', '_edges', '_ends', '_hash')

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str, str]] = ()):
        vs = list(vertices)
        vset = set(vs)
        if len(vset) != len(vs):
            raise GraphError('duplicate vertex id')
        ends = {}
        for e in edges:
            eid, s, t = e
            if eid in ends:
                raise GraphError(f'duplicate edge id {eid}')
            if s not in vset or t not in vset:
                raise GraphError(f'edge {eid}: endpoint not a vertex')
            ends[eid] = (s, t)
        self._vertices = tuple(sorted(vs, key=id_key))
        self._edges = tuple(sorted(ends, key=id_key))
        self._ends = MappingProxyType(ends)
        self._hash = None

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[str, ...]:
        return self._edges

    def src(self, e: str) -> str:
        return self._ends[e][0]

    def tgt(self, e: str) -> str:
        return self._ends[e][1]

    def ends(self, e: str) -> tuple[str, str]:
        return self._ends[e]

    def edge_triples(self) -> tuple[tuple[str, str, str], ...]:
        return tuple((e, *self._ends[e]) for e in self._edges)

    def edges_between(self) -> dict[tuple[str, str], list[str]]:
        '''
        Index the edges by their (src, tgt) pair.
        '''
        index = {}
        for e in self._edges:
            index.setdefault(self._ends[e], []).append(e)
        return index

    def __len__(self):
        return len(self._vertices)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self.edge_triples() == other.edge_triples()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vertices, self.edge_triples()))
        return self._hash

    def __repr__(self):
        return f'Graph(V={list(self._vertices)}, E={list(self.edge_triples())})'

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self._vertices)
        for e, s, t in self.edge_triples():
            g.add_edge(s, t, key=e)
        return g


def empty() -> Graph:
    return Graph()


def discrete(n: int) -> Graph:
    '''
    The graph with n vertices v0..v(n-1) and no edges (V1, V2, ...).
    '''
    return Graph([f'v{i}' for i in range(n)])


def edge() -> Graph:
    '''
    E1: two vertices and one edge v0 → v1.
    '''
    return Graph(['v0', 'v1'], [('e0', 'v0', 'v1')])


def loop() -> Graph:
    '''
    Loop: one vertex with one loop edge (the terminal graph).
    '''
    return Graph(['v0'], [('e0', 'v0', 'v0')])


class GraphMorphism:
    """
    A morphism of graphs: a vertex map and an edge map that commute with
    source and target.  Morphisms are immutable; `g @ f` is the composite
    "first f, then g".

    Arguments:
      dom: the domain graph
      cod: the codomain graph
      vmap: vertex id → vertex id, total on dom
      emap: edge id → edge id, total on dom
    """

    __slots__ = ('dom', 'cod', '_vmap', '_emap')

    def __init__(self, dom: Graph, cod: Graph, vmap: Mapping[str, str], emap: Mapping[str, str] | None = None):
        vmap = dict(vmap)
        emap = dict(emap or {})
        if set(vmap) != set(dom.vertices):
            raise GraphError('vertex map is not total on the domain')
        if set(emap) != set(dom.edges):
            raise GraphError('edge map is not total on the domain')
        cv = set(cod.vertices)
        if any(w not in cv for w in vmap.values()):
            raise GraphError('vertex map leaves the codomain')
        ce = set(cod.edges)
        for e, d in emap.items():
            if d not in ce:
                raise GraphError(f'edge {e} is sent outside the codomain')
            s, t = dom.ends(e)
            if cod.ends(d) != (vmap[s], vmap[t]):
                raise GraphError(f'edge map does not commute with src/tgt at {e}')
        self.dom = dom
        self.cod = cod
        self._vmap = MappingProxyType(vmap)
        self._emap = MappingProxyType(emap)

    @property
    def vmap(self) -> Mapping[str, str]:
        return self._vmap

    @property
    def emap(self) -> Mapping[str, str]:
        return self._emap

    def v(self, x: str) -> str:
        return self._vmap[x]

    def e(self, x: str) -> str:
        return self._emap[x]

    @staticmethod
    def identity(g: Graph) -> GraphMorphism:
        return GraphMorphism(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})

    @staticmethod
    def initial(g: Graph) -> GraphMorphism:
        '''
        The unique morphism out of the empty graph.
        '''
        return GraphMorphism(empty(), g, {}, {})

    def is_identity(self) -> bool:
        return (self.dom == self.cod and all(k == v for k, v in self._vmap.items())
                and all(k == v for k, v in self._emap.items()))

    def __matmul__(self, other: GraphMorphism) -> GraphMorphism:
        if other.cod != self.dom:
            raise GraphError('morphisms do not compose')
        return GraphMorphism(
            other.dom, self.cod,
            {v: self._vmap[w] for v, w in other._vmap.items()},
            {e: self._emap[d] for e, d in other._emap.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and dict(self._vmap) == dict(other._vmap) and dict(self._emap) == dict(other._emap))

    def __hash__(self):
        return hash((self.dom, self.cod, tuple(sorted(self._vmap.items())), tuple(sorted(self._emap.items()))))

    def __repr__(self):
        return f'GraphMorphism(vmap={dict(self._vmap)}, emap={dict(self._emap)})'

    def key(self) -> tuple:
        '''
        A hashable summary of the maps alone (used to compare morphisms
        that are known to share a domain and codomain).
        '''
        return (tuple(self._vmap[v] for v in self.dom.vertices), tuple(self._emap[e] for e in self.dom.edges))


class MorphismKind(NamedTuple):
    is_mono: bool
    is_epi: bool
    is_iso: bool


def analyze_morphism(f: GraphMorphism) -> MorphismKind:
    '''
    Classify a morphism.  In a presheaf category monomorphisms and
    epimorphisms are the componentwise injective and surjective maps.

    Arguments:
      f: the morphism to classify

    Returns:
      a MorphismKind with the three flags
    '''
    vi = len(set(f.vmap.values())) == len(f.dom.vertices)
    ei = len(set(f.emap.values())) == len(f.dom.edges)
    vs = set(f.vmap.values()) == set(f.cod.vertices)
    es = set(f.emap.values()) == set(f.cod.edges)
    mono = vi and ei
    epi = vs and es
    return MorphismKind(mono, epi, mono and epi)


def inverse(f: GraphMorphism) -> GraphMorphism:
    if not analyze_morphism(f).is_iso:
        raise GraphError('morphism is not an isomorphism')
    return GraphMorphism(
        f.cod, f.dom,
        {w: v for v, w in f.vmap.items()},
        {d: e for e, d in f.emap.items()},
    )


def image(f: GraphMorphism) -> Graph:
    '''
    The image subgraph of a morphism (it keeps the codomain's ids).
    '''
    vs = set(f.vmap.values())
    es = set(f.emap.values())
    return Graph(vs, [(e, *f.cod.ends(e)) for e in es])


def inclusion(sub: Graph, g: Graph) -> GraphMorphism:
    '''
    The inclusion of a subgraph that shares the ids of its ambient graph.
    '''
    return GraphMorphism(sub, g, {v: v for v in sub.vertices}, {e: e for e in sub.edges})


def canonical(g: Graph) -> tuple[Graph, GraphMorphism]:
    '''
    Rename vertices to v0, v1, ... and edges to e0, e1, ... in id order.

    Returns:
      the renamed graph and the isomorphism from g to it
    '''
    vm = {v: f'v{i}' for i, v in enumerate(g.vertices)}
    em = {e: f'e{i}' for i, e in enumerate(g.edges)}
    c = Graph(vm.values(), [(em[e], vm[s], vm[t]) for e, s, t in g.edge_triples()])
    return c, GraphMorphism(g, c, vm, em)


#
# Hom-set enumeration
#

def iter_homs(
    a: Graph,
    b: Graph,
    vcands: Mapping[str, Iterable[str]] | None = None,
    ecands: Mapping[str, Iterable[str]] | None = None,
    injective: bool = False,
    limits: Limits | None = None,
) -> Iterator[GraphMorphism]:
    '''
    Generate the morphisms a → b by backtracking over the vertices of a,
    checking each edge as soon as both of its endpoints are placed.
    Candidate sets restrict where individual vertices and edges may go.
    The order is deterministic: vertices of a in id order, images in the
    order of b's ids.

    Arguments:
      a: the domain
      b: the codomain
      vcands: optional vertex id → allowed images
      ecands: optional edge id → allowed images
      injective: only generate injective morphisms
      limits: bounds (defaults to GC.limits)

    Raises:
      BoundExceeded: the domain is too large, or more than max_homs morphisms would be generated
    '''
    limits = GC.resolve(limits)
    if len(a.vertices) > limits.max_vertices:
        raise BoundExceeded('hom-set domain vertices', len(a.vertices), limits.max_vertices)

    order = {w: i for i, w in enumerate(b.vertices)}
    allowed = {}
    for v in a.vertices:
        if vcands is not None and v in vcands:
            allowed[v] = sorted(set(vcands[v]) & set(order), key=order.__getitem__)
        else:
            allowed[v] = list(b.vertices)
        if not allowed[v]:
            return

    between = b.edges_between()
    eallowed = {}
    for e in a.edges:
        if ecands is not None and e in ecands:
            eallowed[e] = set(ecands[e])

    # edges to check once vertex i has been placed
    position = {v: i for i, v in enumerate(a.vertices)}
    checks = [[] for _ in a.vertices]
    for e, s, t in a.edge_triples():
        checks[max(position[s], position[t])].append((e, s, t))

    def edge_choices(e, s, t, vm):
        cands = between.get((vm[s], vm[t]), [])
        if e in eallowed:
            cands = [d for d in cands if d in eallowed[e]]
        return cands

    count = 0
    vm = {}
    used = set()

    def place(i):
        nonlocal count
        if i == len(a.vertices):
            choices = [edge_choices(e, s, t, vm) for e, s, t in a.edge_triples()]
            for combo in itertools.product(*choices):
                if injective and len(set(combo)) != len(combo):
                    continue
                count += 1
                if count > limits.max_homs:
                    raise BoundExceeded('hom-set size', count, limits.max_homs)
                yield GraphMorphism(a, b, dict(vm), dict(zip(a.edges, combo)))
            return
        v = a.vertices[i]
        for w in allowed[v]:
            if injective and w in used:
                continue
            vm[v] = w
            used.add(w)
            if all(edge_choices(e, s, t, vm) for e, s, t in checks[i]):
                yield from place(i + 1)
            used.discard(w)
            del vm[v]

    yield from place(0)


def enumerate_homs(a: Graph, b: Graph, limits: Limits | None = None) -> list[GraphMorphism]:
    '''
    The complete, deterministically ordered list of morphisms a → b.

    Raises:
      BoundExceeded: instead of silently truncating the list
    '''
    return list(iter_homs(a, b, limits=limits))


def preimages(f: GraphMorphism) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
    '''
    Invert a morphism as a pair of dictionaries (codomain id → list of domain ids).
    '''
    vp = {w: [] for w in f.cod.vertices}
    for v, w in f.vmap.items():
        vp[w].append(v)
    ep = {d: [] for d in f.cod.edges}
    for e, d in f.emap.items():
        ep[d].append(e)
    return vp, ep


def factorizations(
    m: GraphMorphism,
    through: GraphMorphism,
    vpins: Mapping[str, str] | None = None,
    epins: Mapping[str, str] | None = None,
    limits: Limits | None = None,
) -> Iterator[GraphMorphism]:
    '''
    Generate the morphisms h with through @ h == m (lifts of m along
    `through`), optionally with some vertex and edge images fixed.
    '''
    vp, ep = preimages(through)
    vc = {v: vp[m.v(v)] for v in m.dom.vertices}
    ec = {e: ep[m.e(e)] for e in m.dom.edges}
    for v, w in (vpins or {}).items():
        vc[v] = [w] if w in vc[v] else []
    for e, d in (epins or {}).items():
        ec[e] = [d] if d in ec[e] else []
    yield from iter_homs(m.dom, through.dom, vc, ec, limits=limits)


#
# Isomorphism
#

def find_isomorphism(
    g: Graph,
    h: Graph,
    under: tuple[GraphMorphism, GraphMorphism] | None = None,
    over: tuple[GraphMorphism, GraphMorphism] | None = None,
    limits: Limits | None = None,
) -> GraphMorphism | None:
    '''
    Find an isomorphism g → h.  With `under=(a_g, a_h)` the isomorphism
    must satisfy iso @ a_g == a_h; with `over=(b_g, b_h)` it must satisfy
    b_h @ iso == b_g.  Unconstrained searches use networkx's VF2 matcher
    for multigraphs; constrained ones backtrack over candidate sets.

    Returns:
      an isomorphism, or None
    '''
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    gx, hx = g.to_networkx(), h.to_networkx()
    if not nx.faster_could_be_isomorphic(gx, hx):
        return None

    if under is None and over is None:
        gi, hi = g.edges_between(), h.edges_between()
        matcher = isomorphism.MultiDiGraphMatcher(gx, hx)
        for vm in matcher.isomorphisms_iter():
            em = {}
            for (s, t), es in gi.items():
                em.update(zip(es, hi[(vm[s], vm[t])]))
            return GraphMorphism(g, h, vm, em)
        return None

    vc = {v: set(h.vertices) for v in g.vertices}
    ec = {e: set(h.edges) for e in g.edges}
    if over is not None:
        bg, bh = over
        vp, ep = preimages(bh)
        for v in g.vertices:
            vc[v] &= set(vp[bg.v(v)])
        for e in g.edges:
            ec[e] &= set(ep[bg.e(e)])
    if under is not None:
        ag, ah = under
        for x in ag.dom.vertices:
            vc[ag.v(x)] &= {ah.v(x)}
        for x in ag.dom.edges:
            ec[ag.e(x)] &= {ah.e(x)}
    for f in iter_homs(g, h, vc, ec, injective=True, limits=limits):
        return f
    return None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


#
# Colimits
#

def coproduct(parts: Sequence[Graph]) -> tuple[Graph, list[GraphMorphism]]:
    '''
    Disjoint union with fresh ids, numbered in the order of the parts.

    Returns:
      the coproduct and the list of injections
    '''
    vs, es = [], []
    maps = []
    for g in parts:
        vm = {}
        for v in g.vertices:
            vm[v] = f'v{len(vs)}'
            vs.append(vm[v])
        em = {}
        for e, s, t in g.edge_triples():
            em[e] = f'e{len(es)}'
            es.append((em[e], vm[s], vm[t]))
        maps.append((vm, em))
    total = Graph(vs, es)
    return total, [GraphMorphism(g, total, vm, em) for g, (vm, em) in zip(parts, maps)]


def quotient(
    g: Graph,
    vpairs: Iterable[tuple[str, str]],
    epairs: Iterable[tuple[str, str]],
) -> GraphMorphism:
    '''
    The quotient of g by the congruence generated by the given pairs of
    vertices and edges.  Classes are named v0, v1, ... (and e0, e1, ...)
    in the order of their smallest members.

    Returns:
      the quotient map
    '''
    vuf = UnionFind(g.vertices)
    euf = UnionFind(g.edges)
    for x, y in vpairs:
        vuf.union(x, y)
    for x, y in epairs:
        euf.union(x, y)
        vuf.union(g.src(x), g.src(y))
        vuf.union(g.tgt(x), g.tgt(y))
    vnames, enames = {}, {}
    for v in g.vertices:
        r = vuf[v]
        if r not in vnames:
            vnames[r] = f'v{len(vnames)}'
    for e in g.edges:
        r = euf[e]
        if r not in enames:
            enames[r] = f'e{len(enames)}'
    edges = {}
    for e, s, t in g.edge_triples():
        edges.setdefault(enames[euf[e]], (vnames[vuf[s]], vnames[vuf[t]]))
    q = Graph(vnames.values(), [(e, s, t) for e, (s, t) in edges.items()])
    return GraphMorphism(
        g, q,
        {v: vnames[vuf[v]] for v in g.vertices},
        {e: enames[euf[e]] for e in g.edges},
    )


def mediating_morphism(
    apex: Graph,
    legs: Sequence[GraphMorphism],
    maps: Sequence[GraphMorphism],
    target: Graph,
) -> GraphMorphism:
    '''
    The morphism u: apex → target with u @ legs[i] == maps[i], where the
    legs are jointly surjective (as the legs of a computed colimit are).

    Raises:
      ColimitError: the maps disagree on some element, or the legs miss part of the apex
    '''
    vmap, emap = {}, {}
    for leg, m in zip(legs, maps):
        if leg.cod != apex or m.dom != leg.dom or m.cod != target:
            raise ColimitError('leg and map do not match')
        for v in leg.dom.vertices:
            w = m.v(v)
            if vmap.setdefault(leg.v(v), w) != w:
                raise ColimitError(f'maps do not form a cocone at vertex {leg.v(v)}')
        for e in leg.dom.edges:
            d = m.e(e)
            if emap.setdefault(leg.e(e), d) != d:
                raise ColimitError(f'maps do not form a cocone at edge {leg.e(e)}')
    if len(vmap) != len(apex.vertices) or len(emap) != len(apex.edges):
        raise ColimitError('legs are not jointly surjective')
    return GraphMorphism(apex, target, vmap, emap)


@dataclass(frozen=True)
class Cocone:
    """
    A cocone over a finite diagram: an apex and one leg per diagram index.
    Cocones produced by `colimit` are colimit cocones.
    """
    apex: Graph
    legs: Mapping[Hashable, GraphMorphism]

    def mediate(self, maps: Mapping[Hashable, GraphMorphism], target: Graph) -> GraphMorphism:
        '''
        The mediating morphism to another cocone with the same indices.
        '''
        keys = list(self.legs)
        return mediating_morphism(self.apex, [self.legs[k] for k in keys], [maps[k] for k in keys], target)


def colimit(
    objects: Mapping[Hashable, Graph],
    arrows: Iterable[tuple[Hashable, Hashable, GraphMorphism]],
    order: Sequence[Hashable] | None = None,
) -> Cocone:
    '''
    Colimit of a finite diagram: the quotient of the coproduct of the
    objects (taken in the given order) by s ~ m(s) for every arrow m.
    '''
    keys = list(order) if order is not None else list(objects)
    total, inj = coproduct([objects[k] for k in keys])
    at = dict(zip(keys, inj))
    vpairs, epairs = [], []
    for x, y, m in arrows:
        if m.dom != objects[x] or m.cod != objects[y]:
            raise ColimitError(f'arrow {x} → {y} does not match the objects')
        vpairs += [(at[x].v(v), at[y].v(m.v(v))) for v in m.dom.vertices]
        epairs += [(at[x].e(e), at[y].e(m.e(e))) for e in m.dom.edges]
    q = quotient(total, vpairs, epairs)
    return Cocone(q.cod, MappingProxyType({k: q @ at[k] for k in keys}))


@dataclass(frozen=True)
class ProbeWitness:
    """
    A test cocone (h_b, h_c) over the span of a pushout, into a probe
    graph, with the unique mediating morphism out of the pushout.
    """
    h_b: GraphMorphism
    h_c: GraphMorphism
    mediator: GraphMorphism


PROBE_TARGETS = (discrete(1), loop(), discrete(2), edge())


@dataclass(frozen=True)
class PushoutCertificate:
    """
    Evidence that (leg_b, leg_c) is a pushout of the span (f, g).  The
    apex is recomputed on verification, never trusted.  Probe witnesses,
    when present, record the mediating morphism for a family of test
    cocones.
    """
    f: GraphMorphism
    g: GraphMorphism
    leg_b: GraphMorphism
    leg_c: GraphMorphism
    probes: tuple[ProbeWitness, ...] = field(default=())

    @property
    def apex(self) -> Graph:
        return self.leg_b.cod

    def with_probes(self, limits: Limits | None = None) -> PushoutCertificate:
        '''
        Return a copy of the certificate with probe witnesses: test cocones
        into the graphs of PROBE_TARGETS, at most max_probes of them.
        '''
        limits = GC.resolve(limits)
        found = []
        for t in PROBE_TARGETS:
            if max(len(self.f.cod.vertices), len(self.g.cod.vertices)) > limits.max_vertices:
                break
            for hb in iter_homs(self.f.cod, t, limits=limits):
                pins = {}
                ok = True
                for a in self.f.dom.vertices:
                    w = hb.v(self.f.v(a))
                    if pins.setdefault(self.g.v(a), w) != w:
                        ok = False
                epins = {}
                for a in self.f.dom.edges:
                    d = hb.e(self.f.e(a))
                    if epins.setdefault(self.g.e(a), d) != d:
                        ok = False
                if not ok:
                    continue
                vc = {v: [w] for v, w in pins.items()}
                ec = {e: [d] for e, d in epins.items()}
                for hc in iter_homs(self.g.cod, t, vc, ec, limits=limits):
                    u = mediating_morphism(self.apex, [self.leg_b, self.leg_c], [hb, hc], t)
                    found.append(ProbeWitness(hb, hc, u))
                    if len(found) >= limits.max_probes:
                        return PushoutCertificate(self.f, self.g, self.leg_b, self.leg_c, tuple(found))
        return PushoutCertificate(self.f, self.g, self.leg_b, self.leg_c, tuple(found))

    def verify(self, where: str = 'pushout'):
        '''
        Recompute the pushout and check the claimed square against it.

        Raises:
          GoodColimError: describing the first failure; the message starts with `where`
        '''
        if self.f.dom != self.g.dom:
            raise ColimitError(f'{where}: span legs have different domains')
        if self.leg_b.dom != self.f.cod or self.leg_c.dom != self.g.cod or self.leg_b.cod != self.leg_c.cod:
            raise ColimitError(f'{where}: square is not well formed')
        if self.leg_b @ self.f != self.leg_c @ self.g:
            raise ColimitError(f'{where}: square does not commute')
        apex, lb, lc, _ = pushout(self.f, self.g)
        try:
            m = mediating_morphism(apex, [lb, lc], [self.leg_b, self.leg_c], self.apex)
        except ColimitError as err:
            raise ColimitError(f'{where}: {err}')
        if not analyze_morphism(m).is_iso:
            raise ColimitError(f'{where}: apex is not the pushout')
        for i, p in enumerate(self.probes):
            if p.h_b @ self.f != p.h_c @ self.g:
                raise ColimitError(f'{where}.probes[{i}]: test cocone does not commute')
            if p.mediator @ self.leg_b != p.h_b or p.mediator @ self.leg_c != p.h_c:
                raise ColimitError(f'{where}.probes[{i}]: mediator does not factor the cocone')


class Pushout(NamedTuple):
    apex: Graph
    leg_b: GraphMorphism
    leg_c: GraphMorphism
    certificate: PushoutCertificate


def pushout(f: GraphMorphism, g: GraphMorphism) -> Pushout:
    '''
    Pushout of a span B ← A → C: the quotient of B ⊔ C by f(a) ~ g(a).

    Arguments:
      f: A → B
      g: A → C

    Returns:
      the apex P, the legs B → P and C → P, and a certificate

    Raises:
      GraphError: f and g have different domains
    '''
    if f.dom != g.dom:
        raise GraphError('pushout: the two morphisms have different domains')
    total, (ib, ic) = coproduct([f.cod, g.cod])
    a = f.dom
    q = quotient(
        total,
        [(ib.v(f.v(x)), ic.v(g.v(x))) for x in a.vertices],
        [(ib.e(f.e(x)), ic.e(g.e(x))) for x in a.edges],
    )
    lb, lc = q @ ib, q @ ic
    return Pushout(q.cod, lb, lc, PushoutCertificate(f, g, lb, lc))


def colimit_over_poset(d: PosetDiagram, members: Iterable[str] | None = None) -> Cocone:
    '''
    Colimit of a poset-indexed diagram, or of its restriction to a set of
    elements.  Objects enter the coproduct in the order of the shape's
    linear extension, so the colimit over a subset is computed the same
    way as the colimit over the whole shape.

    Raises:
      ColimitError: the diagram is not a functor
    '''
    if d.functoriality_violations:
        raise ColimitError(f'diagram is not a functor: {d.functoriality_violations[0]}')
    keep = set(d.shape.elements if members is None else members)
    order = [x for x in d.shape.linear_extension() if x in keep]
    sub = d.shape.restrict(order)
    arrows = [(x, y, d.arrow(x, y)) for x, y in sub.covers]
    return colimit({x: d.objects[x] for x in order}, arrows, order)


def factor_through_stage(
    m: GraphMorphism,
    d: PosetDiagram,
    cocone: Cocone,
    limits: Limits | None = None,
) -> tuple[str, GraphMorphism]:
    '''
    Factor a morphism into the apex of a directed diagram's cocone through
    one of the stages.  Every vertex and edge of m's domain is traced to the
    first stage (in linear-extension order) that has a preimage; the result
    is the first upper bound of those stages admitting a factorization.

    Returns:
      the stage x and m_x with cocone.legs[x] @ m_x == m

    Raises:
      PosetError: the shape is not directed
    '''
    shape = d.shape
    if shape.greatest() is None:
        raise PosetError('factor_through_stage: the shape is not directed')
    order = shape.linear_extension()
    inverses = {x: preimages(cocone.legs[x]) for x in order}

    traced = set()
    for v in m.dom.vertices:
        x = next((x for x in order if inverses[x][0][m.v(v)]), None)
        if x is None:
            raise ColimitError('cocone legs are not jointly surjective')
        traced.add(x)
    for e in m.dom.edges:
        x = next((x for x in order if inverses[x][1][m.e(e)]), None)
        if x is None:
            raise ColimitError('cocone legs are not jointly surjective')
        traced.add(x)

    for y in order:
        if not all(shape.leq(x, y) for x in traced):
            continue
        for h in factorizations(m, cocone.legs[y], limits=limits):
            logging.debug(f'factor_through_stage: {sorted(traced)} → {y}')
            return y, h
    raise GoodColimError('factor_through_stage: no stage admits a factorization')
