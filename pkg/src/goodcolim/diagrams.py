#
# Diagrams of graphs indexed by finite posets: functoriality and
# smoothness checks, links, composites, linearization into chains, the
# extension to a directed shape, and the limit-only extension check.
#

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Mapping, NamedTuple

from .config import GoodColimError, Limits
from .graphcat import (
    Cocone,
    ColimitError,
    Graph,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    colimit_over_poset,
    pushout,
)
from .posets import (
    FinitePoset,
    InitialSegment,
    chain,
    classify_element,
    directed_completion,
    require_good,
    segment,
)
from .soa.lifting import GeneratorSet, PoCertificate, po_membership


class DiagramError(GoodColimError):
    """
    A diagram is malformed (missing or mismatched arrows) or an operation
    received a segment it cannot work with.
    """


class NotSmoothError(DiagramError):
    """
    A diagram failed the functoriality or smoothness check.
    """

    def __init__(self, violations: list[str]):
        super().__init__('diagram is not smooth: ' + '; '.join(violations))
        self.violations = violations


class LinkError(DiagramError):
    """
    A link could not be certified as a pushout of a generator.
    """

    def __init__(self, element: str, message: str):
        super().__init__(f'link at {element}: {message}')
        self.element = element


class PosetDiagram:
    """
    A functor from a finite poset to graphs, given by one object per
    element and one morphism per covering pair.  Arrows for other pairs
    x ≤ y are composed along covers; if two paths disagree, or an
    explicitly supplied arrow disagrees with its composite, the mismatch is
    recorded in `functoriality_violations`.

    Arguments:
      shape: the indexing poset
      objects: element → graph
      arrows: (x, y) → morphism for the covering pairs (other pairs optional)
    """

    def __init__(self, shape: FinitePoset, objects: Mapping[str, Graph], arrows: Mapping[tuple[str, str], GraphMorphism]):
        if set(objects) != set(shape.elements):
            raise DiagramError('objects do not match the elements of the shape')
        for (x, y), m in arrows.items():
            if not shape.leq(x, y):
                raise DiagramError(f'arrow {x} → {y} goes against the order')
            if m.dom != objects[x] or m.cod != objects[y]:
                raise DiagramError(f'arrow {x} → {y} does not match the objects')
        for x, y in shape.covers:
            if (x, y) not in arrows:
                raise DiagramError(f'missing arrow for the cover {x} → {y}')
        self.shape = shape
        self.objects = dict(objects)
        self.cover_arrows = {c: arrows[c] for c in shape.covers}
        self._arrows = {}
        self.functoriality_violations = []
        self._compose(arrows)

    def _compose(self, given):
        order = self.shape.linear_extension()
        for y in order:
            self._arrows[(y, y)] = GraphMorphism.identity(self.objects[y])
            for z in self.shape.lower_covers(y):
                step = self.cover_arrows[(z, y)]
                for x in order:
                    if (x, z) not in self._arrows:
                        continue
                    m = step @ self._arrows[(x, z)]
                    if (x, y) not in self._arrows:
                        self._arrows[(x, y)] = m
                    elif self._arrows[(x, y)] != m:
                        self.functoriality_violations.append(f'paths from {x} to {y} disagree (via {z})')
        for (x, y), m in given.items():
            if x == y and not m.is_identity():
                self.functoriality_violations.append(f'arrow {x} → {x} is not the identity')
            elif self._arrows[(x, y)] != m:
                self.functoriality_violations.append(f'arrow {x} → {y} is not the composite of covers')

    def arrow(self, x: str, y: str) -> GraphMorphism:
        if not self.shape.leq(x, y):
            raise DiagramError(f'no arrow {x} → {y}')
        return self._arrows[(x, y)]

    @property
    def bottom(self) -> str:
        return require_good(self.shape)

    def colimit(self, members: Iterable[str] | None = None) -> Cocone:
        return colimit_over_poset(self, members)

    def composite(self) -> GraphMorphism:
        '''
        The cocone component at the least element.
        '''
        return self.colimit().legs[self.bottom]

    def links(self) -> LinkList:
        return links(self)

    def __repr__(self):
        return f'PosetDiagram({self.shape!r})'


class Link(NamedTuple):
    element: str
    predecessor: str
    morphism: GraphMorphism


@dataclass(frozen=True)
class LinkList:
    """
    The links of a diagram, one per isolated element, in linear-extension order.
    """
    entries: tuple[Link, ...] = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def multiset(self) -> Counter:
        '''
        The links as a multiset of hashable keys (element names excluded).
        '''
        return Counter(
            (m.dom.vertices, m.dom.edge_triples(), m.cod.vertices, m.cod.edge_triples(), m.key())
            for _, _, m in self.entries
        )


def links(d: PosetDiagram) -> LinkList:
    entries = []
    for x in d.shape.linear_extension():
        cls = classify_element(d.shape, x)
        if cls.kind == 'isolated':
            entries.append(Link(x, cls.predecessor, d.arrow(cls.predecessor, x)))
    return LinkList(tuple(entries))


class SmoothReport(NamedTuple):
    ok: bool
    links: LinkList
    violations: list[str]


def validate_smooth(d: PosetDiagram) -> SmoothReport:
    '''
    Check functoriality and, at every limit element x, that D(x) is the
    colimit of the diagram restricted to the elements strictly below x
    (the mediating morphism must be an isomorphism).

    Raises:
      PosetError: the shape is not good
    '''
    require_good(d.shape)
    violations = list(d.functoriality_violations)
    if not violations:
        for x in d.shape.linear_extension():
            if classify_element(d.shape, x).kind != 'limit':
                continue
            below = d.shape.strictly_below(x)
            cocone = colimit_over_poset(d, below)
            m = cocone.mediate({y: d.arrow(y, x) for y in below}, d.objects[x])
            if not analyze_morphism(m).is_iso:
                violations.append(f'limit element {x}: object is not the colimit of the elements below it')
    return SmoothReport(not violations, links(d), violations)


class SmoothDiagram(PosetDiagram):
    """
    A diagram that passed `validate_smooth` on construction.

    Raises:
      NotSmoothError: listing the violations
    """

    def __init__(self, shape: FinitePoset, objects: Mapping[str, Graph], arrows: Mapping[tuple[str, str], GraphMorphism]):
        super().__init__(shape, objects, arrows)
        report = validate_smooth(self)
        if not report.ok:
            raise NotSmoothError(report.violations)

    @staticmethod
    def of(d: PosetDiagram) -> SmoothDiagram:
        if isinstance(d, SmoothDiagram):
            return d
        return SmoothDiagram(d.shape, d.objects, d.cover_arrows)


def build_diagram(
    shape: FinitePoset,
    base: Graph,
    attach: Callable[[str, Graph], GraphMorphism],
) -> SmoothDiagram:
    '''
    Build a smooth diagram by walking the linear extension of a good
    shape: the least element gets `base`, an isolated element x gets the
    codomain of attach(x, D(x⁻)), and a limit element gets the colimit of
    the elements below it.
    '''
    bottom = require_good(shape)
    objects = {bottom: base}
    arrows = {}
    for x in shape.linear_extension():
        cls = classify_element(shape, x)
        if cls.kind == 'isolated':
            link = attach(x, objects[cls.predecessor])
            if link.dom != objects[cls.predecessor]:
                raise DiagramError(f'link at {x} has the wrong domain')
            objects[x] = link.cod
            arrows[(cls.predecessor, x)] = link
        elif cls.kind == 'limit':
            partial = PosetDiagram(
                shape.restrict(shape.strictly_below(x)),
                {y: objects[y] for y in shape.strictly_below(x)},
                {c: arrows[c] for c in shape.restrict(shape.strictly_below(x)).covers},
            )
            cocone = partial.colimit()
            objects[x] = cocone.apex
            for y in shape.lower_covers(x):
                arrows[(y, x)] = cocone.legs[y]
    return SmoothDiagram(shape, objects, arrows)


def restrict(d: PosetDiagram, members: Iterable[str] | InitialSegment) -> PosetDiagram:
    '''
    The restriction of a diagram to a full subposet.
    '''
    if isinstance(members, InitialSegment):
        members = members.members
    sub = d.shape.restrict(members)
    return PosetDiagram(sub, {x: d.objects[x] for x in sub.elements}, {(x, y): d.arrow(x, y) for x, y in sub.covers})


def reroot(d: PosetDiagram, x: str) -> PosetDiagram:
    '''
    The restriction to the principal filter ↑x, a good diagram with least element x.
    '''
    return restrict(d, d.shape.up(x))


def chain_diagram(stages: list[Graph], steps: list[GraphMorphism]) -> PosetDiagram:
    '''
    A sequence of composable morphisms as a diagram over the chain 0 < 1 < ... .
    '''
    if len(steps) != len(stages) - 1:
        raise DiagramError('a chain needs one step between consecutive stages')
    shape = chain(len(stages))
    return PosetDiagram(
        shape,
        {str(i): g for i, g in enumerate(stages)},
        {(str(i), str(i + 1)): m for i, m in enumerate(steps)},
    )


def relative_composite(d: PosetDiagram, q: Iterable[str] | InitialSegment) -> GraphMorphism:
    '''
    The induced morphism colim_Q D → colim D for a nonempty initial segment Q.

    Raises:
      PosetError: q is not an initial segment
      DiagramError: q is empty
    '''
    q = segment(d.shape, q)
    if not q.members:
        raise DiagramError('relative composite needs a nonempty initial segment')
    partial = colimit_over_poset(d, q.members)
    total = colimit_over_poset(d)
    return partial.mediate({x: total.legs[x] for x in q.members}, total.apex)


class LimitCheck(NamedTuple):
    all_limit: bool
    iso: bool


def limit_extension_check(d: PosetDiagram, q: Iterable[str] | InitialSegment) -> LimitCheck:
    '''
    When every element outside Q is limit, colim_Q D → colim D must be an
    isomorphism.  Returns both facts.

    Raises:
      DiagramError: the implication fails (the diagram is not smooth)
    '''
    q = segment(d.shape, q)
    all_limit = all(classify_element(d.shape, x).kind == 'limit' for x in d.shape.elements if x not in q.members)
    iso = analyze_morphism(relative_composite(d, q)).is_iso
    if all_limit and not iso:
        raise DiagramError('elements outside the segment are limit but the colimits differ')
    return LimitCheck(all_limit, iso)


def star_extend(d: PosetDiagram) -> SmoothDiagram:
    '''
    Extend a smooth diagram to the directed completion of its shape.  The
    added top carries the colimit of the diagram, so the links are
    unchanged and colim D → colim D* is an isomorphism (checked).
    '''
    d = SmoothDiagram.of(d)
    shape = directed_completion(d.shape)
    if shape == d.shape:
        return d
    (top,) = set(shape.elements) - set(d.shape.elements)
    cocone = colimit_over_poset(d)
    objects = dict(d.objects)
    objects[top] = cocone.apex
    arrows = dict(d.cover_arrows)
    for m in shape.lower_covers(top):
        arrows[(m, top)] = cocone.legs[m]
    result = SmoothDiagram(shape, objects, arrows)
    if not analyze_morphism(relative_composite(result, d.shape.elements)).is_iso:
        raise DiagramError('star extension changed the colimit')
    logging.debug(f'star_extend: added {top} over {shape.lower_covers(top)}')
    return result


def shortest_stage(d: PosetDiagram) -> tuple[str, GraphMorphism] | None:
    '''
    For a diagram whose cocone components are monomorphisms, find the first
    element (in linear-extension order) whose component D(x) → colim D is
    an isomorphism.  The composite is then isomorphic to D(⊥ → x).

    Raises:
      DiagramError: some component is not a monomorphism
    '''
    cocone = colimit_over_poset(d)
    if not all(analyze_morphism(leg).is_mono for leg in cocone.legs.values()):
        raise DiagramError('shortest_stage needs monomorphic cocone components')
    for x in d.shape.linear_extension():
        if analyze_morphism(cocone.legs[x]).is_iso:
            return x, cocone.legs[x]
    return None


@dataclass(frozen=True)
class ChainStep:
    """
    One step E[x) → E[x] of a linearized diagram.  For an isolated element
    the step is a pushout of the link; `square` certifies the pushout of
    the link along the corner map, `comparison` identifies its apex with
    the next stage, and `link` certifies the link itself in Po(X).  For a
    limit element the step is an isomorphism.
    """
    element: str
    kind: Literal['pushout', 'iso']
    morphism: GraphMorphism
    square: PushoutCertificate | None = None
    comparison: GraphMorphism | None = None
    link: PoCertificate | None = None


@dataclass(frozen=True)
class ChainPresentation:
    """
    A finite chain of stages and steps; the stages are the colimits over
    the prefixes of a linear extension of the diagram's shape.
    """
    stages: tuple[Graph, ...]
    steps: tuple[ChainStep, ...] = field(default=())

    def composite(self) -> GraphMorphism:
        result = GraphMorphism.identity(self.stages[0])
        for s in self.steps:
            result = s.morphism @ result
        return result

    def to_diagram(self) -> PosetDiagram:
        return chain_diagram(list(self.stages), [s.morphism for s in self.steps])

    def pushout_steps(self) -> int:
        return sum(1 for s in self.steps if s.kind == 'pushout')

    def verify(self, where: str = 'chain'):
        '''
        Re-check every step: endpoints, pushout squares, comparison
        isomorphisms and link certificates.

        Raises:
          GoodColimError: naming the first failing step
        '''
        if len(self.steps) != len(self.stages) - 1:
            raise DiagramError(f'{where}: wrong number of steps')
        for i, s in enumerate(self.steps):
            loc = f'{where}.steps[{i}]'
            if s.morphism.dom != self.stages[i] or s.morphism.cod != self.stages[i + 1]:
                raise DiagramError(f'{loc}: step does not connect consecutive stages')
            if s.kind == 'iso':
                if not analyze_morphism(s.morphism).is_iso:
                    raise DiagramError(f'{loc}: step is not an isomorphism')
                continue
            s.square.verify(f'{loc}.square')
            if s.square.g.cod != self.stages[i]:
                raise DiagramError(f'{loc}: square is not attached to the stage')
            if not analyze_morphism(s.comparison).is_iso:
                raise DiagramError(f'{loc}: comparison is not an isomorphism')
            if s.comparison @ s.square.leg_c != s.morphism:
                raise DiagramError(f'{loc}: step is not the pushout leg')
            if s.link is not None:
                if s.link.f != s.square.f:
                    raise DiagramError(f'{loc}: link certificate is for another morphism')
                s.link.verify(f'{loc}.link')


def linearize(
    d: PosetDiagram,
    generators: GeneratorSet,
    certificates: Mapping[str, PoCertificate] | None = None,
    limits: Limits | None = None,
) -> ChainPresentation:
    '''
    Rewrite a good diagram as a chain.  Stage k is the colimit over the
    first k+1 elements of the linear extension; the step that adds an
    isolated element is a pushout of its link, the step that adds a limit
    element is an isomorphism.

    Arguments:
      d: a smooth diagram
      generators: the generator set the links are certified against
      certificates: optional Po(X) certificates per isolated element
      limits: search bounds

    Raises:
      NotSmoothError: d fails validate_smooth
      LinkError: some link is not a pushout of a generator
    '''
    report = validate_smooth(d)
    if not report.ok:
        raise NotSmoothError(report.violations)
    certificates = dict(certificates or {})
    order = d.shape.linear_extension()
    cocones = [colimit_over_poset(d, order[:k + 1]) for k in range(len(order))]
    stages = [c.apex for c in cocones]
    steps = []
    for k in range(1, len(order)):
        x = order[k]
        before, after = cocones[k - 1], cocones[k]
        step = before.mediate({y: after.legs[y] for y in order[:k]}, after.apex)
        cls = classify_element(d.shape, x)
        if cls.kind == 'limit':
            if not analyze_morphism(step).is_iso:
                raise DiagramError(f'step at limit element {x} is not an isomorphism')
            steps.append(ChainStep(x, 'iso', step))
            continue
        link = d.arrow(cls.predecessor, x)
        cert = certificates.get(x) or po_membership(link, generators, limits)
        if cert is None:
            raise LinkError(x, f'not a pushout of a member of {generators.name}')
        if cert.f != link:
            raise LinkError(x, 'certificate is for another morphism')
        apex, leg_link, leg_stage, square = pushout(link, before.legs[cls.predecessor])
        try:
            comparison = Cocone(apex, {'link': leg_link, 'stage': leg_stage}).mediate(
                {'link': after.legs[x], 'stage': step}, after.apex)
        except ColimitError as err:
            raise DiagramError(f'step at {x}: {err}')
        if not analyze_morphism(comparison).is_iso:
            raise DiagramError(f'step at {x} is not a pushout of its link')
        steps.append(ChainStep(x, 'pushout', step, square, comparison, cert))
    logging.debug(f'linearize: {len(steps)} steps, {sum(s.kind == "pushout" for s in steps)} pushouts')
    return ChainPresentation(tuple(stages), tuple(steps))
