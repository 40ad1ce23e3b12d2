#
# Pushing cells down: the composite of a small good diagram with links
# in Po(X) is a pushout of a cellular map between small stages of its
# bottom object.
#

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..config import GoodColimError, Limits
from ..diagrams import NotSmoothError, PosetDiagram, chain_diagram, validate_smooth
from ..graphcat import (
    Graph,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    colimit_over_poset,
    factorizations,
    inclusion,
    mediating_morphism,
)
from ..posets import PosetError, classify_element
from .cells import Cell, CellComplexPresentation, attach_cells, base_change, presentation
from .lifting import CertificateError, GeneratorSet, PoCertificate, po_membership


@dataclass(frozen=True)
class StagedObject:
    """
    A graph presented as the colimit of a directed diagram of stages.
    `legs` maps every stage into the target; the induced map from the
    colimit of the stages must be an isomorphism.
    """
    stages: PosetDiagram
    legs: Mapping[str, GraphMorphism]
    target: Graph

    def __post_init__(self):
        shape = self.stages.shape
        if shape.least() is None or shape.greatest() is None:
            raise PosetError('stage diagram is not directed')
        cocone = colimit_over_poset(self.stages)
        comparison = cocone.mediate(self.legs, self.target)
        if not analyze_morphism(comparison).is_iso:
            raise GoodColimError('stages do not present the target')

    @staticmethod
    def from_subgraphs(target: Graph, subgraphs: Sequence[Graph]) -> StagedObject:
        '''
        A chain of nested subgraphs of target (sharing its ids), the last one
        being target itself.
        '''
        steps = [inclusion(a, b) for a, b in zip(subgraphs, subgraphs[1:])]
        d = chain_diagram(list(subgraphs), steps)
        return StagedObject(d, {str(i): inclusion(g, target) for i, g in enumerate(subgraphs)}, target)


@dataclass(frozen=True)
class PushdownCertificate:
    """
    The result of pushing the cells of a diagram down to a stage: a stage
    A_Q of D(⊥), a cellular map f_Q: A_Q → B_Q, and the square showing
    that D(⊥) → colim D is the pushout of f_Q along A_Q → D(⊥).
    """
    stage: str
    presentation: CellComplexPresentation
    square: PushoutCertificate
    trace: tuple[str, ...] = ()

    @property
    def f_q(self) -> GraphMorphism:
        return self.presentation.composite()

    def verify(self, d: PosetDiagram | None = None, staged: StagedObject | None = None,
               generators: GeneratorSet | None = None):
        self.presentation.verify('presentation', generators)
        if self.square.f != self.f_q:
            raise CertificateError('square', 'top edge is not the cellular map')
        try:
            self.square.verify('square')
        except GoodColimError as err:
            raise CertificateError('square', str(err))
        if staged is not None and self.square.g != staged.legs[self.stage]:
            raise CertificateError('square', 'side edge is not the stage map')
        if d is not None and self.square.leg_c != colimit_over_poset(d).legs[d.bottom]:
            raise CertificateError('square', 'bottom edge is not the composite of the diagram')


def push_down_cells(
    d: PosetDiagram,
    staged: StagedObject,
    generators: GeneratorSet,
    certificates: Mapping[str, PoCertificate] | None = None,
    limits: Limits | None = None,
) -> PushdownCertificate:
    '''
    Walk the linear extension of the shape.  The invariant after each
    prefix Q is a stage j, a presentation C of A_j → B_Q and a map
    b: B_Q → colim_Q D making D(⊥) → colim_Q D the pushout of C along the
    stage map.  An isolated element with a proper Po(X) link attaches one
    cell: its attaching map X → colim_Q' D is factored through the base
    change of C to the first stage j' ≥ j that admits a factorization.
    Limit elements and isomorphic links leave C unchanged.

    Arguments:
      d: a smooth diagram whose least object is staged.target
      staged: the stages of D(⊥)
      generators: the generator set for the links
      certificates: optional Po(X) certificates per isolated element

    Returns:
      a PushdownCertificate whose square has probe witnesses
    '''
    report = validate_smooth(d)
    if not report.ok:
        raise NotSmoothError(report.violations)
    bottom = d.bottom
    if d.objects[bottom] != staged.target:
        raise GoodColimError('stages do not present the least object of the diagram')
    certificates = dict(certificates or {})
    stage_order = staged.stages.shape.linear_extension()
    order = d.shape.linear_extension()

    j = stage_order[0]
    c = presentation(staged.stages.objects[j])
    cocones = [colimit_over_poset(d, order[:1])]
    b = cocones[0].legs[bottom] @ staged.legs[j]
    trace = []

    for k in range(1, len(order)):
        x = order[k]
        before = cocones[-1]
        after = colimit_over_poset(d, order[:k + 1])
        cocones.append(after)
        step = before.mediate({y: after.legs[y] for y in order[:k]}, after.apex)
        cls = classify_element(d.shape, x)
        cert = None
        if cls.kind == 'isolated':
            link = d.arrow(cls.predecessor, x)
            cert = certificates.get(x) or po_membership(link, generators, limits)
            if cert is None:
                raise GoodColimError(f'push_down_cells: link at {x} is not in Po({generators.name})')
        if cert is None or cert.generator is None:
            b = step @ b
            continue

        attaching = before.legs[cls.predecessor] @ cert.square.f
        found = None
        for j2 in stage_order:
            if not staged.stages.shape.leq(j, j2):
                continue
            moved, iota = base_change(c, staged.stages.arrow(j, j2))
            m = mediating_morphism(
                moved.total, [moved.composite(), iota],
                [before.legs[bottom] @ staged.legs[j2], b], before.apex)
            for h in factorizations(attaching, m, limits=limits):
                found = (j2, moved, m, h)
                break
            if found:
                break
        if found is None:
            raise GoodColimError(f'push_down_cells: attaching map at {x} factors through no stage')
        j, moved, m, h = found
        c = attach_cells(moved, [Cell(cert.generator, cert.square.g, h)])
        last = c.stages[-1]
        cell_image = after.legs[x] @ cert.comparison @ cert.square.leg_c
        b = mediating_morphism(last.square.apex, [last.step, last.cell_leg(0)], [step @ m, cell_image], after.apex)
        trace.append(f'{x}: {cert.generator} at stage {j}')
        logging.debug(f'push_down_cells: cell {cert.generator} for {x} attached at stage {j}')

    square = PushoutCertificate(c.composite(), staged.legs[j], b, cocones[-1].legs[bottom])
    square.verify('pushdown.square')
    square = square.with_probes(limits)
    logging.info(f'push_down_cells: {c.cell_count()} cells over stage {j}')
    return PushdownCertificate(j, c, square, tuple(trace))
