#
# The small object argument: the fat version (a directed diagram of
# small cell complexes, extended by the star construction each round)
# and the classical version (one long chain of pushouts of coproducts).
#

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Literal, Mapping

from ..config import GC, Limits
from ..diagrams import (
    ChainPresentation,
    PosetDiagram,
    SmoothDiagram,
    linearize,
    links,
    star_extend,
    validate_smooth,
)
from ..graphcat import Graph, GraphMorphism, colimit_over_poset, factor_through_stage, mediating_morphism, pushout
from ..posets import FinitePoset
from .cells import Cell, CellComplexPresentation, attach_cells, presentation
from .lifting import CertificateError, GeneratorSet, PoCertificate, RlpReport, outstanding_squares, rlp_check

Status = Literal['converged', 'budget-exhausted']


@dataclass(frozen=True)
class FatDiagram:
    """
    The left part of a fat factorization: a good directed diagram under A
    with a compatible family of maps into B, and Po(X) certificates for
    its links.
    """
    diagram: SmoothDiagram
    over: Mapping[str, GraphMorphism]
    link_certificates: Mapping[str, PoCertificate]


@dataclass(frozen=True)
class FactorizationCertificate:
    """
    A factorization f = right @ left with the evidence for both parts.

    Attributes:
      f: the input A → B
      generators: the generator set
      mode: 'fat' or 'classical'
      status: 'converged' (the RLP test passed) or 'budget-exhausted'
      iterations: number of rounds run
      stages: the middle object after each round
      left: A → A'
      right: A' → B
      fat: the directed diagram of the fat version
      chain: the linearized diagram of the fat version
      presentation: the cell complex of the classical version
      rlp: the exhaustive lifting report (None when the budget ran out)
    """
    f: GraphMorphism
    generators: GeneratorSet
    mode: Literal['fat', 'classical']
    status: Status
    iterations: int
    stages: tuple[Graph, ...]
    left: GraphMorphism
    right: GraphMorphism
    fat: FatDiagram | None = None
    chain: ChainPresentation | None = None
    presentation: CellComplexPresentation | None = None
    rlp: RlpReport | None = None

    @property
    def middle(self) -> Graph:
        return self.left.cod

    def verify(self, limits: Limits | None = None):
        '''
        Recompute every witness in the certificate.

        Raises:
          CertificateError: with a locator naming the first failing witness
        '''
        if self.right @ self.left != self.f:
            raise CertificateError('composition', 'right @ left differs from the input')
        if self.fat is not None:
            d = self.fat.diagram
            report = validate_smooth(d)
            if not report.ok:
                raise CertificateError('diagram', report.violations[0])
            if d.objects[d.bottom] != self.f.dom:
                raise CertificateError('diagram', 'least object is not the domain of the input')
            cocone = colimit_over_poset(d)
            if cocone.legs[d.bottom] != self.left:
                raise CertificateError('left', 'not the composite of the diagram')
            for x in d.shape.elements:
                if self.fat.over[x] != self.right @ cocone.legs[x]:
                    raise CertificateError(f'over[{x}]', 'map into the codomain is not compatible')
            for i, link in enumerate(report.links):
                cert = self.fat.link_certificates.get(link.element)
                if cert is None or cert.f != link.morphism:
                    raise CertificateError(f'links[{i}]', f'no certificate for the link at {link.element}')
                cert.verify(f'links[{i}]', self.generators)
            if self.chain is not None:
                self.chain.verify('chain')
                if self.chain.stages[-1] != self.middle:
                    raise CertificateError('chain', 'does not end at the middle object')
        if self.presentation is not None:
            self.presentation.verify('presentation', self.generators)
            if self.presentation.composite() != self.left:
                raise CertificateError('presentation', 'composite differs from the left part')
            if self.presentation.over != self.right:
                raise CertificateError('presentation', 'over-map differs from the right part')
        if self.status == 'converged':
            if self.rlp is None:
                raise CertificateError('rlp', 'converged certificate without a lifting report')
            self.rlp.verify(self.right, self.generators, limits, 'rlp')


def _mediate_over(d: PosetDiagram, over: Mapping[str, GraphMorphism], target: Graph):
    cocone = colimit_over_poset(d)
    return cocone, cocone.mediate(over, target)


def fat_soa(f: GraphMorphism, generators: GeneratorSet, budget: int | None = None,
            limits: Limits | None = None) -> FactorizationCertificate:
    '''
    Factor f by the fat small object argument.  Each round tests the
    right part for the lifting property; if it fails, every square
    without a diagonal (x: X → A', y: Y → B) gets its own new element: x is
    factored through a stage β, the cell is attached by pushout at β, and
    the new element sits above β.  The round ends with the star
    construction so that the shape stays directed.

    Arguments:
      f: the morphism A → B
      generators: the generator set
      budget: maximum number of rounds (defaults to GC.budget)

    Returns:
      a FactorizationCertificate; its status says whether the lifting test passed
    '''
    budget = GC.budget if budget is None else budget
    a, b = f.dom, f.cod
    shape = FinitePoset(['bot'])
    objects = {'bot': a}
    arrows = {}
    over = {'bot': f}
    certs = {}
    names = (f'c{i}' for i in itertools.count())
    d = SmoothDiagram(shape, objects, arrows)
    cocone, right = _mediate_over(d, over, b)
    stages = [cocone.apex]
    status, rlp, rounds = 'budget-exhausted', None, 0

    for rounds in range(1, budget + 1):
        report = rlp_check(right, generators, limits)
        if report.holds:
            status, rlp = 'converged', report
            break
        todo = outstanding_squares(right, generators, limits)
        logging.info(f'fat_soa: round {rounds}, {len(todo)} outstanding squares')
        new_elements, new_covers = [], []
        for sq in todo:
            g = generators[sq.generator]
            beta, x_beta = factor_through_stage(sq.u, d, cocone, limits)
            apex, leg_stage, leg_cell, square = pushout(x_beta, g)
            p = next(n for n in names if n not in objects)
            new_elements.append(p)
            new_covers.append((beta, p))
            objects[p] = apex
            arrows[(beta, p)] = leg_stage
            over[p] = mediating_morphism(apex, [leg_stage, leg_cell], [over[beta], sq.v], b)
            certs[p] = PoCertificate(leg_stage, sq.generator, square, GraphMorphism.identity(apex))
            logging.debug(f'fat_soa: cell {sq.generator} at {beta} becomes {p}')
        shape = d.shape.extend(new_elements, new_covers)
        d = star_extend(SmoothDiagram(shape, objects, arrows))
        for x in d.shape.elements:
            if x not in objects:
                objects[x] = d.objects[x]
                for y in d.shape.lower_covers(x):
                    arrows[(y, x)] = d.arrow(y, x)
                below = d.shape.strictly_below(x)
                over[x] = colimit_over_poset(d, below).mediate({y: over[y] for y in below}, b)
        cocone, right = _mediate_over(d, over, b)
        stages.append(cocone.apex)

    left = cocone.legs[d.bottom]
    fat = FatDiagram(d, dict(over), {link.element: certs[link.element] for link in links(d)})
    chain = linearize(d, generators, fat.link_certificates, limits)
    logging.info(f'fat_soa: {status} after {rounds} rounds, {len(d.shape)} elements')
    return FactorizationCertificate(
        f, generators, 'fat', status, rounds, tuple(stages), left, right,
        fat=fat, chain=chain, rlp=rlp,
    )


def classical_soa(f: GraphMorphism, generators: GeneratorSet, budget: int | None = None,
                  limits: Limits | None = None) -> FactorizationCertificate:
    '''
    Factor f by the classical small object argument: each round attaches,
    in a single pushout, one cell for every square without a diagonal.
    '''
    budget = GC.budget if budget is None else budget
    c = presentation(f.dom, f)
    stages = [c.total]
    status, rlp, rounds = 'budget-exhausted', None, 0
    for rounds in range(1, budget + 1):
        report = rlp_check(c.over, generators, limits)
        if report.holds:
            status, rlp = 'converged', report
            break
        todo = outstanding_squares(c.over, generators, limits)
        logging.info(f'classical_soa: round {rounds}, {len(todo)} outstanding squares')
        c = attach_cells(c, [Cell(sq.generator, generators[sq.generator], sq.u, sq.v) for sq in todo])
        stages.append(c.total)
    logging.info(f'classical_soa: {status} after {rounds} rounds, {c.cell_count()} cells')
    return FactorizationCertificate(
        f, generators, 'classical', status, rounds, tuple(stages), c.composite(), c.over,
        presentation=c, rlp=rlp,
    )


def factorize(f: GraphMorphism, generators: GeneratorSet, mode: str = 'fat', budget: int | None = None,
              limits: Limits | None = None) -> FactorizationCertificate:
    match mode:
        case 'fat':
            return fat_soa(f, generators, budget, limits)
        case 'classical':
            return classical_soa(f, generators, budget, limits)
        case _:
            raise ValueError(f'unknown mode {mode}')
