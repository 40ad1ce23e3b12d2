#
# Retracts: splitting idempotents, reducing retracts to idempotents
# under the domain, refactoring the image of an idempotent through a
# small stage, and eliminating retracts from cellular maps.
#

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

from ..config import GC, GoodColimError, Limits
from ..diagrams import ChainPresentation, PosetDiagram, SmoothDiagram, linearize, relative_composite, star_extend
from ..graphcat import (
    Cocone,
    Graph,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    colimit_over_poset,
    factorizations,
    find_isomorphism,
    image,
    inclusion,
    inverse,
    mediating_morphism,
    pushout,
)
from ..posets import sort_ids, strong_closure
from .cells import CellComplexPresentation, base_change, cellularity_search
from .lifting import CertificateError, GeneratorSet, SearchExhausted


class IdempotentError(GoodColimError):
    """
    A map is not idempotent, or does not fix the structure map it should fix.
    """


class Split(NamedTuple):
    '''
    A splitting of an idempotent f on Y: r @ e == id_E and e @ r == f.
    '''
    e_obj: Graph
    e: GraphMorphism
    r: GraphMorphism


def is_idempotent(f: GraphMorphism) -> bool:
    return f.dom == f.cod and f @ f == f


def split_idempotent(f: GraphMorphism, under: GraphMorphism | None = None) -> Split:
    '''
    Split an idempotent through its image subgraph.

    Arguments:
      f: an idempotent Y → Y
      under: optional structure map A → Y that f must fix

    Returns:
      the image E (with Y's ids), the inclusion e: E → Y and the
      corestriction r: Y → E

    Raises:
      IdempotentError: f is not idempotent or does not fix the structure map
    '''
    if not is_idempotent(f):
        raise IdempotentError('map is not idempotent')
    if under is not None and f @ under != under:
        raise IdempotentError('idempotent does not fix the structure map')
    e_obj = image(f)
    e = inclusion(e_obj, f.cod)
    r = GraphMorphism(f.dom, e_obj, f.vmap, f.emap)
    return Split(e_obj, e, r)


def check_split(s: Split, f: GraphMorphism, where: str = 'split'):
    if s.r @ s.e != GraphMorphism.identity(s.e_obj):
        raise CertificateError(where, 'r @ e is not the identity')
    if s.e @ s.r != f:
        raise CertificateError(where, 'e @ r is not the idempotent')


class UnderRetract(NamedTuple):
    g_prime: GraphMorphism
    idempotent: GraphMorphism
    section: GraphMorphism
    retraction: GraphMorphism


def under_retract(
    f: GraphMorphism,
    g: GraphMorphism,
    i: tuple[GraphMorphism, GraphMorphism],
    r: tuple[GraphMorphism, GraphMorphism],
) -> UnderRetract:
    '''
    Reduce a retract in the arrow category to one whose domain components
    are identities.  If f: A → B is a retract of g: C → D via i = (i0, i1)
    and r = (r0, r1), then f is a retract under A of the pushout g' of g
    along r0, and B is the image of an idempotent on cod(g') fixing g'.

    Raises:
      IdempotentError: the maps do not exhibit f as a retract of g
    '''
    i0, i1 = i
    r0, r1 = r
    if g @ i0 != i1 @ f or f @ r0 != r1 @ g:
        raise IdempotentError('retraction maps do not commute with the morphisms')
    if r0 @ i0 != GraphMorphism.identity(f.dom) or r1 @ i1 != GraphMorphism.identity(f.cod):
        raise IdempotentError('r @ i is not the identity')
    apex, g_prime, leg_d, _ = pushout(r0, g)
    section = leg_d @ i1
    retraction = mediating_morphism(apex, [g_prime, leg_d], [f, r1], f.cod)
    return UnderRetract(g_prime, section @ retraction, section, retraction)


@dataclass(frozen=True)
class RefactorCertificate:
    """
    The image of an idempotent f on Y (fixing g: X → Y, the base change of
    the presentation along h: A → X) exhibited as a pushout of the image
    of an idempotent on a small stage: X_α ⊆ X, Y_α = X_α ⊔_A |C|, φ on
    Y_α fixing X_α with k @ φ == f @ k, and E ≅ X ⊔_{X_α} E_α.
    """
    presentation: CellComplexPresentation
    h: GraphMorphism
    stage: Graph
    stage_presentation: CellComplexPresentation
    k: GraphMorphism
    phi: GraphMorphism
    stage_split: Split
    square: PushoutCertificate
    comparison: GraphMorphism
    split: Split
    f: GraphMorphism
    g: GraphMorphism

    def verify(self, where: str = 'refactor'):
        try:
            big, iota = base_change(self.presentation, self.h)
            incl = inclusion(self.stage, self.g.dom)
            h_alpha = GraphMorphism(self.h.dom, self.stage, self.h.vmap, self.h.emap)
            small, iota_a = base_change(self.presentation, h_alpha)
        except GoodColimError as err:
            raise CertificateError(f'{where}.stage', str(err))
        if big.composite() != self.g:
            raise CertificateError(f'{where}.g', 'not the base change of the presentation')
        g_alpha = self.stage_presentation.composite()
        if small.composite() != g_alpha:
            raise CertificateError(f'{where}.stage_presentation', 'not the base change to the stage')
        if self.k @ g_alpha != self.g @ incl or self.k @ iota_a != iota:
            raise CertificateError(f'{where}.k', 'does not compare the stage with Y')
        if not is_idempotent(self.phi) or self.phi @ g_alpha != g_alpha:
            raise CertificateError(f'{where}.phi', 'not an idempotent under the stage')
        if self.k @ self.phi != self.f @ self.k:
            raise CertificateError(f'{where}.phi', 'not compatible with the idempotent on Y')
        check_split(self.stage_split, self.phi, f'{where}.stage_split')
        check_split(self.split, self.f, f'{where}.split')
        if self.square.f != incl or self.square.g != self.stage_split.r @ g_alpha:
            raise CertificateError(f'{where}.square', 'span is not the stage inclusion and the small image')
        try:
            self.square.verify(f'{where}.square')
        except GoodColimError as err:
            raise CertificateError(f'{where}.square', str(err))
        if not analyze_morphism(self.comparison).is_iso:
            raise CertificateError(f'{where}.comparison', 'not an isomorphism')
        if self.comparison @ self.square.leg_b != self.split.r @ self.g:
            raise CertificateError(f'{where}.comparison', 'does not commute with the structure maps')


def retract_refactor(
    c: CellComplexPresentation,
    h: GraphMorphism,
    f: GraphMorphism,
    stages: Sequence[Graph] | None = None,
    limits: Limits | None = None,
) -> RefactorCertificate:
    '''
    Refactor the image of an idempotent on a pushout of a cellular map.
    The pushout is g: X → Y, the base change of the presentation c along
    h: A → X.  The candidate stages X_α are subgraphs of X (with X's ids)
    containing the image of h, tried in order; they default to
    [image of h, X].  For the first stage that admits one, an idempotent
    φ on Y_α is found that fixes X_α and covers f, and the image of f is
    exhibited as the pushout of the image of φ along X_α → X.

    Raises:
      IdempotentError: f is not an idempotent on Y fixing X
      GoodColimError: no candidate stage carries a compatible idempotent
    '''
    big, iota = base_change(c, h)
    g = big.composite()
    if f.dom != big.total or not is_idempotent(f) or f @ g != g:
        raise IdempotentError('not an idempotent on the pushout under its domain')
    split = split_idempotent(f, g)
    x = h.cod
    needed = image(h)
    if stages is None:
        stages = [needed, x]
    for sub in stages:
        if not set(needed.vertices) <= set(sub.vertices) or not set(needed.edges) <= set(sub.edges):
            continue
        incl = inclusion(sub, x)
        h_alpha = GraphMorphism(h.dom, sub, h.vmap, h.emap)
        small, iota_a = base_change(c, h_alpha)
        g_alpha = small.composite()
        k = mediating_morphism(small.total, [g_alpha, iota_a], [g @ incl, iota], big.total)
        vpins = {g_alpha.v(v): g_alpha.v(v) for v in sub.vertices}
        epins = {g_alpha.e(e): g_alpha.e(e) for e in sub.edges}
        for phi in factorizations(f @ k, k, vpins, epins, limits):
            if not is_idempotent(phi):
                continue
            stage_split = split_idempotent(phi, g_alpha)
            apex, leg_x, leg_e, square = pushout(incl, stage_split.r @ g_alpha)
            comparison = mediating_morphism(
                apex, [leg_x, leg_e], [split.r @ g, split.r @ k @ stage_split.e], split.e_obj)
            if analyze_morphism(comparison).is_iso:
                logging.debug(f'retract_refactor: stage with {len(sub.vertices)} vertices')
                return RefactorCertificate(c, h, sub, small, k, phi, stage_split, square, comparison, split, f, g)
    raise GoodColimError('retract_refactor: no stage carries a compatible idempotent')


#
# Retract elimination
#

class LiftedIdempotent(NamedTuple):
    '''
    A monotone map S of the shape with x ≤ Sx and S⊥ = ⊥, and a natural
    family of idempotents φ_x on D(Sx) covering f.
    '''
    s: dict[str, str]
    phi: dict[str, GraphMorphism]


def lift_idempotent(d: PosetDiagram, f: GraphMorphism, budget: int | None = None,
                    limits: Limits | None = None) -> LiftedIdempotent:
    '''
    Choose, element by element in linear-extension order, the first upper
    bound Sx of x and of every Sy (y < x) that carries an idempotent φ_x
    with δ_Sx @ φ_x == f @ δ_Sx and φ_x @ D(Sy ≤ Sx) == D(Sy ≤ Sx) @ φ_y.
    On a directed diagram the greatest element always qualifies.

    Arguments:
      d: a good diagram with a greatest element
      f: an idempotent on the computed colimit of d fixing the composite
      budget: candidates allowed per element

    Raises:
      SearchExhausted: the budget ran out for some element; the trace lists the tries
    '''
    budget = GC.budget if budget is None else budget
    cocone = colimit_over_poset(d)
    shape = d.shape
    bottom = d.bottom
    s = {bottom: bottom}
    phi = {bottom: GraphMorphism.identity(d.objects[bottom])}
    trace = []
    for x in shape.linear_extension():
        if x == bottom:
            continue
        below = shape.strictly_below(x)
        for tries, sx in enumerate(shape.upper_bounds({x} | {s[y] for y in below})):
            if tries >= budget:
                raise SearchExhausted(f'no idempotent found for {x} within the budget', trace)
            leg = cocone.legs[sx]
            vpins, epins, ok = {}, {}, True
            for y in below:
                m = d.arrow(s[y], sx)
                target = m @ phi[y]
                for v in m.dom.vertices:
                    ok &= vpins.setdefault(m.v(v), target.v(v)) == target.v(v)
                for e in m.dom.edges:
                    ok &= epins.setdefault(m.e(e), target.e(e)) == target.e(e)
            if not ok:
                trace.append(f'{x} → {sx}: naturality constraints conflict')
                continue
            chosen = next((p for p in factorizations(f @ leg, leg, vpins, epins, limits) if is_idempotent(p)), None)
            if chosen is None:
                trace.append(f'{x} → {sx}: no idempotent')
                continue
            s[x], phi[x] = sx, chosen
            trace.append(f'{x} → {sx}')
            break
        else:
            raise SearchExhausted(f'no upper bound of {x} carries an idempotent', trace)
    return LiftedIdempotent(s, phi)


def check_lifted(d: PosetDiagram, f: GraphMorphism, lifted: LiftedIdempotent, where: str = 'lifted'):
    shape = d.shape
    cocone = colimit_over_poset(d)
    if lifted.s.get(d.bottom) != d.bottom:
        raise CertificateError(where, 'S does not fix the least element')
    for x in shape.elements:
        sx, p = lifted.s[x], lifted.phi[x]
        if not shape.leq(x, sx):
            raise CertificateError(f'{where}.s[{x}]', 'Sx is not above x')
        if not is_idempotent(p) or p.dom != d.objects[sx]:
            raise CertificateError(f'{where}.phi[{x}]', 'not an idempotent on D(Sx)')
        if cocone.legs[sx] @ p != f @ cocone.legs[sx]:
            raise CertificateError(f'{where}.phi[{x}]', 'does not cover the idempotent')
        for y in shape.strictly_below(x):
            if not shape.leq(lifted.s[y], sx):
                raise CertificateError(f'{where}.s[{x}]', 'S is not monotone')
            m = d.arrow(lifted.s[y], sx)
            if p @ m != m @ lifted.phi[y]:
                raise CertificateError(f'{where}.phi[{x}]', f'not natural with respect to {y}')


def induced_idempotent(d: PosetDiagram, lifted: LiftedIdempotent, members: frozenset[str]) -> GraphMorphism:
    '''
    The idempotent on the colimit over an S-stable initial segment P,
    with component δ_Sx @ φ_x @ D(x ≤ Sx) at x.
    '''
    cocone = colimit_over_poset(d, members)
    maps = {x: cocone.legs[lifted.s[x]] @ lifted.phi[x] @ d.arrow(x, lifted.s[x]) for x in members}
    return cocone.mediate(maps, cocone.apex)


def _orbit(lifted: LiftedIdempotent, x: str) -> list[str]:
    seen = [x]
    while lifted.s[seen[-1]] not in seen:
        seen.append(lifted.s[seen[-1]])
    return seen


def next_segment(d: PosetDiagram, lifted: LiftedIdempotent,
                 members: frozenset[str]) -> tuple[frozenset[str], frozenset[str]]:
    '''
    Grow an S-stable closed segment P: take the first x outside P and the
    segment Q generated by x, Sx, S²x, ...; enlarge Q until the strong
    closure of P ∪ Q is S-stable.

    Returns:
      Q and the new segment
    '''
    shape = d.shape
    x = next(y for y in shape.linear_extension() if y not in members)
    q = shape.down_closure(_orbit(lifted, x))
    while True:
        q = shape.down_closure(z for y in q for z in _orbit(lifted, y))
        grown = strong_closure(shape, members | q).closure.members
        missing = {lifted.s[y] for y in grown} - grown
        if not missing:
            return q, grown
        q = shape.down_closure(q | missing)


@dataclass(frozen=True)
class RetractStep:
    """
    One step E_i → E_{i+1} of the elimination.

    Attributes:
      segment: P_{i+1}
      added: Q, the segment generated by the S-orbit of the first element outside P_i
      small: colim over P_i ∩ Q → colim over Q
      small_presentation: a cellular presentation of `small` (over its codomain)
      attach: colim over P_i → colim over P_{i+1} as the pushout of `small`
      square: F_i, the pushout of r_i along the attaching step
      psi: the idempotent on F_i fixing E_i
      split: the splitting of psi; E_{i+1} is its image
      step: E_i → E_{i+1}
      refactor: the image of psi, moved to the base change of `small_presentation`,
        as a pushout of the image of an idempotent on a small stage
      transport: the base change of `small_presentation` along P_i ∩ Q → E_i, onto F_i
      link: the image in `refactor` onto E_{i+1}
    """
    segment: tuple[str, ...]
    added: tuple[str, ...]
    small: GraphMorphism
    small_presentation: CellComplexPresentation | None
    attach: PushoutCertificate
    square: PushoutCertificate
    psi: GraphMorphism
    split: Split
    step: GraphMorphism
    refactor: RefactorCertificate
    transport: GraphMorphism
    link: GraphMorphism

    def verify(self, where: str, generators: GeneratorSet | None = None):
        c = self.small_presentation
        if c is None:
            raise CertificateError(f'{where}.small_presentation', 'missing')
        c.verify(f'{where}.small_presentation', generators)
        if c.over is None or not analyze_morphism(c.over).is_iso or c.over @ c.composite() != self.small:
            raise CertificateError(f'{where}.small_presentation', 'does not present the small map')
        if self.attach.g != self.small or self.square.g != self.attach.leg_b:
            raise CertificateError(where, 'squares do not fit together')
        for name, sq in (('attach', self.attach), ('square', self.square)):
            try:
                sq.verify(f'{where}.{name}')
            except GoodColimError as err:
                raise CertificateError(f'{where}.{name}', str(err))
        if not is_idempotent(self.psi) or self.psi @ self.square.leg_b != self.square.leg_b:
            raise CertificateError(f'{where}.psi', 'not an idempotent under E_i')
        check_split(self.split, self.psi, f'{where}.split')
        if self.step != self.split.r @ self.square.leg_b:
            raise CertificateError(f'{where}.step', 'not the split of the pushout leg')

        r = self.refactor
        if r.presentation != c or r.h != self.square.f @ self.attach.f:
            raise CertificateError(f'{where}.refactor', 'not the base change of the small presentation')
        r.verify(f'{where}.refactor')
        t = self.transport
        if t.dom != r.g.cod or t.cod != self.square.leg_b.cod or not analyze_morphism(t).is_iso:
            raise CertificateError(f'{where}.transport', 'not an isomorphism onto F_i')
        if t @ r.g != self.square.leg_b or r.f != inverse(t) @ self.psi @ t:
            raise CertificateError(f'{where}.transport', 'does not carry the idempotent to psi')
        if self.link.dom != r.split.e_obj or self.link.cod != self.split.e_obj or not analyze_morphism(self.link).is_iso:
            raise CertificateError(f'{where}.link', 'not an isomorphism onto E_{i+1}')
        if self.link @ r.split.r @ r.g != self.step:
            raise CertificateError(f'{where}.link', 'does not identify the refactored image with the step')


class _Segment(NamedTuple):
    '''
    The maps of one elimination step that depend on the diagram and the
    segments alone.
    '''
    added: frozenset[str]
    grown: frozenset[str]
    small: GraphMorphism
    corner: GraphMorphism
    attach: GraphMorphism
    leg_q: GraphMorphism
    after: Cocone


def _segment(star: SmoothDiagram, lifted: LiftedIdempotent, members: frozenset[str], current: Cocone) -> _Segment:
    q, nxt = next_segment(star, lifted, members)
    meet = members & q
    meet_cocone = colimit_over_poset(star, meet)
    q_cocone = colimit_over_poset(star, q)
    after = colimit_over_poset(star, nxt)
    return _Segment(
        q, nxt,
        meet_cocone.mediate({y: q_cocone.legs[y] for y in meet}, q_cocone.apex),
        meet_cocone.mediate({y: current.legs[y] for y in meet}, current.apex),
        current.mediate({y: after.legs[y] for y in members}, after.apex),
        q_cocone.mediate({y: after.legs[y] for y in q}, after.apex),
        after,
    )


def _psi(square: PushoutCertificate, f_next: GraphMorphism) -> GraphMorphism:
    '''
    The idempotent on F_i that fixes E_i and acts as f_next on colim over P_{i+1}.
    '''
    apex = square.leg_b.cod
    return mediating_morphism(apex, [square.leg_b, square.leg_c], [square.leg_b, square.leg_c @ f_next], apex)


@dataclass(frozen=True)
class RetractCertificate:
    """
    Evidence that the image of an idempotent f (under A) on a cellular
    Y = colim D is reached from A by a chain of pushouts of retracts of
    small cellular maps, together with a direct cellular presentation of
    A → E.  An inconclusive certificate carries the trace of the failed
    search only.
    """
    diagram: SmoothDiagram
    f: GraphMorphism
    generators: GeneratorSet
    status: Literal['verified', 'inconclusive']
    split: Split
    ambient: ChainPresentation | None = None
    star: SmoothDiagram | None = None
    lifted: LiftedIdempotent | None = None
    start: Split | None = None
    steps: tuple[RetractStep, ...] = ()
    comparison: GraphMorphism | None = None
    presentation: CellComplexPresentation | None = None
    trace: tuple[str, ...] = ()

    @property
    def structure_map(self) -> GraphMorphism:
        '''A → E.'''
        return self.split.r @ colimit_over_poset(self.diagram).legs[self.diagram.bottom]

    def verify(self):
        '''
        Recompute every witness.

        Raises:
          CertificateError: naming the first failing witness
        '''
        if self.status != 'verified':
            raise CertificateError('status', 'elimination was inconclusive')
        d = self.diagram
        cocone = colimit_over_poset(d)
        composite = cocone.legs[d.bottom]
        if self.f.dom != cocone.apex or not is_idempotent(self.f) or self.f @ composite != composite:
            raise CertificateError('f', 'not an idempotent under the base')
        check_split(self.split, self.f)
        if self.ambient is not None:
            self.ambient.verify('ambient')
        if self.star is None or self.lifted is None or self.start is None or self.comparison is None:
            raise CertificateError('status', 'verified certificate without its witnesses')
        star = self.star
        to_star = relative_composite(star, d.shape.elements)
        check_lifted(star, to_star @ self.f @ inverse(to_star), self.lifted)
        members = frozenset({star.bottom})
        current = colimit_over_poset(star, members)
        check_split(self.start, induced_idempotent(star, self.lifted, members), 'start')
        r_i = self.start.r
        for i, s in enumerate(self.steps):
            where = f'steps[{i}]'
            if members == frozenset(star.shape.elements):
                raise CertificateError(where, 'steps continue past the whole shape')
            seg = _segment(star, self.lifted, members, current)
            if frozenset(s.segment) != seg.grown or frozenset(s.added) != seg.added:
                raise CertificateError(f'{where}.segment', 'not the next S-stable segment')
            if (s.small != seg.small or s.attach.f != seg.corner or s.attach.leg_b != seg.attach
                    or s.attach.leg_c != seg.leg_q):
                raise CertificateError(f'{where}.attach', 'not the attaching square of the segment')
            if s.square.f != r_i:
                raise CertificateError(f'{where}.square', 'does not start from the previous retraction')
            try:
                expected = _psi(s.square, induced_idempotent(star, self.lifted, seg.grown))
            except GoodColimError as err:
                raise CertificateError(f'{where}.square', str(err))
            if s.psi != expected:
                raise CertificateError(f'{where}.psi', 'not induced by the lifted idempotent')
            s.verify(where, self.generators)
            r_i = s.split.r @ s.square.leg_c
            members, current = seg.grown, seg.after
        if members != frozenset(star.shape.elements):
            raise CertificateError('steps', 'segments do not exhaust the shape')
        final = r_i.cod
        if self.comparison.dom != final or self.comparison.cod != self.split.e_obj:
            raise CertificateError('comparison', 'does not compare the final stage with the image')
        if not analyze_morphism(self.comparison).is_iso:
            raise CertificateError('comparison', 'not an isomorphism')
        if self.comparison @ r_i @ current.legs[star.bottom] != self.structure_map:
            raise CertificateError('comparison', 'does not commute with the structure maps')
        if self.presentation is None:
            raise CertificateError('presentation', 'missing')
        self.presentation.verify('presentation', self.generators)
        if self.presentation.base != d.objects[d.bottom]:
            raise CertificateError('presentation', 'does not start at the base')
        if find_isomorphism(self.presentation.total, self.split.e_obj,
                            under=(self.presentation.composite(), self.structure_map)) is None:
            raise CertificateError('presentation', 'total space is not the image under the base')


def refactor_step(
    c: CellComplexPresentation,
    h: GraphMorphism,
    square: PushoutCertificate,
    leg_q: GraphMorphism,
    psi: GraphMorphism,
    psi_split: Split,
    limits: Limits | None = None,
) -> tuple[RefactorCertificate, GraphMorphism, GraphMorphism]:
    '''
    Certify one elimination step through retract_refactor.  F_i is
    identified with the base change Y' of c along h: P_i ∩ Q → E_i, psi is
    moved to Y', and the refactored image is identified with E_{i+1}.

    Arguments:
      c: a presentation of colim over P_i ∩ Q → colim over Q, over its codomain
      h: the corner map colim over P_i ∩ Q → E_i
      square: F_i as the pushout of r_i and the attaching step
      leg_q: colim over Q → colim over P_{i+1}
      psi: the idempotent on F_i
      psi_split: its splitting

    Returns:
      the refactor certificate, Y' → F_i, and the refactored image → E_{i+1}

    Raises:
      CertificateError: Y' is not isomorphic to F_i under E_i
    '''
    big, iota = base_change(c, h)
    g = big.composite()
    transport = mediating_morphism(
        big.total, [g, iota], [square.leg_b, square.leg_c @ leg_q @ c.over], square.leg_b.cod)
    if not analyze_morphism(transport).is_iso:
        raise CertificateError('transport', 'base change of the small map is not F_i')
    moved = inverse(transport) @ psi @ transport
    refactor = retract_refactor(c, h, moved, limits=limits)
    link = psi_split.r @ transport @ refactor.split.e
    return refactor, transport, link


def eliminate_retract(
    d: PosetDiagram,
    f: GraphMorphism,
    generators: GeneratorSet,
    budget: int | None = None,
    limits: Limits | None = None,
) -> RetractCertificate:
    '''
    Present the image of an idempotent f on Y = colim D (fixing the
    composite A = D(⊥) → Y) as a chain of pushouts of retracts of small
    cellular maps.  After the star construction, f is lifted to S and φ
    (see lift_idempotent); closed S-stable initial segments
    P_0 = {⊥} ⊂ P_1 ⊂ ... are grown by next_segment, and at each step the
    image E_i of the induced idempotent is pushed along
    colim over P_i → colim over P_{i+1} and split again.  Every step is
    refactored (retract_refactor) as a pushout of the image of an
    idempotent on a base change of the small cellular map.

    Arguments:
      d: a good diagram presenting A → Y, with links in Po(X)
      f: the idempotent on the computed colimit of d
      generators: the generator set of the links
      budget: candidates per element for S, and stages for the cellularity searches

    Returns:
      a RetractCertificate; an inconclusive one carries the search trace

    Raises:
      IdempotentError: f is not an idempotent under A
      LinkError: some link of d is not a pushout of a generator
    '''
    budget = GC.budget if budget is None else budget
    smooth = SmoothDiagram.of(d)
    cocone = colimit_over_poset(smooth)
    composite = cocone.legs[smooth.bottom]
    split = split_idempotent(f, composite)
    ambient = linearize(smooth, generators, limits=limits)

    star = star_extend(smooth)
    to_star = relative_composite(star, smooth.shape.elements)
    f_star = to_star @ f @ inverse(to_star)
    try:
        lifted = lift_idempotent(star, f_star, budget, limits)
    except SearchExhausted as err:
        logging.info(f'eliminate_retract: inconclusive ({err})')
        return RetractCertificate(smooth, f, generators, 'inconclusive', split, ambient, star, trace=tuple(err.trace))

    shape = star.shape
    members = frozenset({star.bottom})
    current = colimit_over_poset(star, members)
    start = split_idempotent(induced_idempotent(star, lifted, members))
    r_i = start.r
    steps, trace = [], []
    while members != frozenset(shape.elements):
        seg = _segment(star, lifted, members, current)
        attach = PushoutCertificate(seg.corner, seg.small, seg.attach, seg.leg_q)
        attach.verify('attach')
        square = pushout(r_i, seg.attach).certificate
        psi = _psi(square, induced_idempotent(star, lifted, seg.grown))
        psi_split = split_idempotent(psi, square.leg_b)
        small_presentation = cellularity_search(seg.small, generators, budget, limits)
        if small_presentation is None:
            trace.append(f'segment {sort_ids(seg.grown)}: no cellular presentation of the small map')
            logging.info(f'eliminate_retract: inconclusive ({trace[-1]})')
            return RetractCertificate(smooth, f, generators, 'inconclusive', split, ambient, star, lifted, start,
                                      trace=tuple(trace))
        refactor, transport, link = refactor_step(
            small_presentation, r_i @ seg.corner, square, seg.leg_q, psi, psi_split, limits)
        steps.append(RetractStep(
            tuple(sort_ids(seg.grown)), tuple(sort_ids(seg.added)), seg.small, small_presentation,
            attach, square, psi, psi_split, psi_split.r @ square.leg_b, refactor, transport, link,
        ))
        trace.append(f'segment {sort_ids(seg.grown)}: stage of {len(refactor.stage.vertices)} vertices')
        logging.debug(f'eliminate_retract: segment grows to {len(seg.grown)} elements')
        r_i = psi_split.r @ square.leg_c
        members, current = seg.grown, seg.after

    final = r_i.cod
    theirs = split.r @ composite
    ours = r_i @ current.legs[star.bottom]
    comparison = find_isomorphism(final, split.e_obj, under=(ours, theirs), limits=limits)
    if comparison is None:
        raise CertificateError('comparison', 'final stage is not the image of the idempotent')
    presentation = cellularity_search(theirs, generators, budget, limits)
    if presentation is None:
        trace.append('no cellular presentation of the image')
        logging.info('eliminate_retract: inconclusive (no cellular presentation of the image)')
        return RetractCertificate(smooth, f, generators, 'inconclusive', split, ambient, star, lifted, start,
                                  trace=tuple(trace))
    logging.info(f'eliminate_retract: {len(steps)} steps, image has {len(split.e_obj.vertices)} vertices')
    return RetractCertificate(
        smooth, f, generators, 'verified', split, ambient, star, lifted, start,
        tuple(steps), comparison, presentation, tuple(trace),
    )
