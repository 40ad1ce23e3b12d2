#
# Presented finite cell complexes: stages obtained by attaching finite
# coproducts of generators along characteristic maps.
#

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from ..config import GC, GoodColimError, Limits
from ..diagrams import ChainPresentation
from ..graphcat import (
    Cocone,
    Graph,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    canonical,
    coproduct,
    find_isomorphism,
    iter_homs,
    mediating_morphism,
    pushout,
)
from .lifting import CertificateError, GeneratorSet, outstanding_squares


class CellError(GoodColimError):
    """
    A cell is attached along a map into the wrong space, or the same cell
    is attached twice in one step.
    """


@dataclass(frozen=True)
class Cell:
    """
    One cell: a generator g: X → Y, its characteristic map X → A_{i-1}
    and, for complexes over a codomain B, the boundary map Y → B.
    """
    generator: str
    g: GraphMorphism
    attach: GraphMorphism
    over: GraphMorphism | None = None

    def key(self):
        return (self.generator, self.attach.key(), self.over.key() if self.over else None)


@dataclass(frozen=True)
class Stage:
    """
    A stage A_{i-1} → A_i: the pushout of the coproduct of the cells'
    generators (square.g) along the coproduct of their characteristic maps
    (square.f).  The step is square.leg_b.
    """
    cells: tuple[Cell, ...]
    square: PushoutCertificate

    @property
    def step(self) -> GraphMorphism:
        return self.square.leg_b

    def cell_leg(self, j: int) -> GraphMorphism:
        '''
        The map from the codomain of cell j into the new stage.
        '''
        _, inj = coproduct([c.g.cod for c in self.cells])
        return self.square.leg_c @ inj[j]


@dataclass(frozen=True)
class CellComplexPresentation:
    """
    A presented finite cell complex A = A_0 → A_1 → ... → A_n, optionally
    over a codomain B (then `over` is the map A_n → B).
    """
    base: Graph
    stages: tuple[Stage, ...] = field(default=())
    over: GraphMorphism | None = None

    @property
    def total(self) -> Graph:
        return self.stages[-1].square.apex if self.stages else self.base

    def spaces(self) -> list[Graph]:
        return [self.base] + [s.square.apex for s in self.stages]

    def composite(self) -> GraphMorphism:
        return self.inclusion(0, len(self.stages))

    def inclusion(self, i: int, j: int) -> GraphMorphism:
        '''
        The composite A_i → A_j (stages past the end repeat the total space).
        '''
        n = len(self.stages)
        i, j = min(i, n), min(j, n)
        result = GraphMorphism.identity(self.spaces()[i])
        for s in self.stages[i:j]:
            result = s.step @ result
        return result

    def cell_count(self) -> int:
        return sum(len(s.cells) for s in self.stages)

    def verify(self, where: str = 'presentation', generators: GeneratorSet | None = None):
        '''
        Recompute every stage from its cells and check the recorded pushouts.

        Raises:
          CertificateError: naming the first failing stage
        '''
        current = self.base
        for i, s in enumerate(self.stages):
            loc = f'{where}.stages[{i}]'
            if generators is not None:
                for c in s.cells:
                    if generators[c.generator] != c.g:
                        raise CertificateError(loc, f'cell is not built on generator {c.generator}')
            try:
                char, gens = _coproduct_maps(s.cells, current)
            except GoodColimError as err:
                raise CertificateError(loc, str(err))
            if char != s.square.f or gens != s.square.g:
                raise CertificateError(loc, 'square does not match the cells')
            try:
                s.square.verify(f'{loc}.square')
            except GoodColimError as err:
                raise CertificateError(f'{loc}.square', str(err))
            current = s.square.apex
        if self.over is not None and self.over.dom != current:
            raise CertificateError(where, 'over-map does not start at the total space')


def presentation(base: Graph, over: GraphMorphism | None = None) -> CellComplexPresentation:
    '''
    The presentation with no stages (the identity of the base).
    '''
    return CellComplexPresentation(base, (), over)


def _coproduct_maps(cells: Sequence[Cell], target: Graph) -> tuple[GraphMorphism, GraphMorphism]:
    '''
    The maps ⊔X_j → target and ⊔g_j: ⊔X_j → ⊔Y_j of a list of cells.
    '''
    xs, xinj = coproduct([c.g.dom for c in cells])
    ys, yinj = coproduct([c.g.cod for c in cells])
    for c in cells:
        if c.attach.cod != target:
            raise CellError(f'cell {c.generator}: characteristic map does not land in the current total space')
        if c.attach.dom != c.g.dom:
            raise CellError(f'cell {c.generator}: characteristic map does not start at the generator')
    char = mediating_morphism(xs, xinj, [c.attach for c in cells], target)
    gens = mediating_morphism(xs, xinj, [yi @ c.g for yi, c in zip(yinj, cells)], ys)
    return char, gens


def attach_cells(c: CellComplexPresentation, cells: Iterable[Cell]) -> CellComplexPresentation:
    '''
    Prolong a presentation by one stage: the pushout of the coproduct of
    the new cells along their characteristic maps.  Cells whose generator
    has an empty domain carry no gluing data and may repeat; any other
    repeated (generator, characteristic map, boundary) triple is rejected.

    Returns:
      the prolonged presentation; its over-map (if any) is induced from
      the old over-map and the cells' boundary maps

    Raises:
      CellError: a duplicate cell, or a characteristic map into another space
    '''
    cells = tuple(cells)
    seen = set()
    for cell in cells:
        if not cell.g.dom.vertices:
            continue
        if cell.key() in seen:
            raise CellError(f'cell {cell.generator} is attached twice along the same map')
        seen.add(cell.key())
    char, gens = _coproduct_maps(cells, c.total)
    apex, step, leg_cells, square = pushout(char, gens)
    over = None
    if c.over is not None:
        if any(cell.over is None for cell in cells):
            raise CellError('cells attached to a complex over a codomain need boundary maps')
        ys, yinj = coproduct([cell.g.cod for cell in cells])
        boundary = Cocone(ys, dict(enumerate(yinj))).mediate(
            {j: cell.over for j, cell in enumerate(cells)}, c.over.cod)
        over = mediating_morphism(apex, [step, leg_cells], [c.over, boundary], c.over.cod)
    logging.debug(f'attach_cells: {len(cells)} cells, total space has {len(apex.vertices)} vertices')
    return CellComplexPresentation(c.base, c.stages + (Stage(cells, square),), over)


def subcomplex_inclusion(c: CellComplexPresentation, d: CellComplexPresentation) -> GraphMorphism | None:
    '''
    Build the inclusion |c| → |d| when c is a subcomplex of d: both start
    at the same base and, stage by stage, every cell of c corresponds to a
    distinct cell of d with the same generator, the transported
    characteristic map and the same boundary.

    Returns:
      the top component of the inclusion, or None
    '''
    if c.base != d.base:
        return None
    iota = GraphMorphism.identity(c.base)
    n = max(len(c.stages), len(d.stages))
    for i in range(n):
        if i >= len(c.stages):
            iota = d.inclusion(i, i + 1) @ iota
            continue
        if i >= len(d.stages):
            return None
        mine, theirs = c.stages[i], d.stages[i]
        match = {}
        for j, cell in enumerate(mine.cells):
            want = (cell.generator, (iota @ cell.attach).key(), cell.over.key() if cell.over else None)
            k = next((k for k, other in enumerate(theirs.cells)
                      if k not in match.values() and other.key() == want), None)
            if k is None:
                return None
            match[j] = k
        legs = [mine.step] + [mine.cell_leg(j) for j in range(len(mine.cells))]
        maps = [theirs.step @ iota] + [theirs.cell_leg(match[j]) for j in range(len(mine.cells))]
        iota = mediating_morphism(mine.square.apex, legs, maps, theirs.square.apex)
    return iota


def is_subcomplex(c: CellComplexPresentation, d: CellComplexPresentation) -> bool:
    return subcomplex_inclusion(c, d) is not None


def base_change(c: CellComplexPresentation, h: GraphMorphism) -> tuple[CellComplexPresentation, GraphMorphism]:
    '''
    Push a presentation forward along h: A → A2.  Each cell keeps its
    generator and gets the characteristic map transported along the
    comparison map of the previous stage.

    Returns:
      the new presentation of A2 → |C2| and the comparison |C| → |C2|,
      which makes |C2| the pushout of |C| and A2 over A
    '''
    if h.dom != c.base:
        raise CellError('base change along a map that does not start at the base')
    result = presentation(h.cod)
    iota = h
    for s in c.stages:
        moved = [Cell(cell.generator, cell.g, iota @ cell.attach) for cell in s.cells]
        result = attach_cells(result, moved)
        new = result.stages[-1]
        legs = [s.step] + [s.cell_leg(j) for j in range(len(s.cells))]
        maps = [new.step @ iota] + [new.cell_leg(j) for j in range(len(s.cells))]
        iota = mediating_morphism(s.square.apex, legs, maps, new.square.apex)
    return result, iota


def in_generators(step: GraphMorphism, generators: GeneratorSet, limits: Limits | None = None) -> str | None:
    '''
    The name of a member isomorphic to step in the arrow category, or None.
    '''
    for name, g in generators:
        if (len(g.dom.vertices), len(g.dom.edges), len(g.cod.vertices), len(g.cod.edges)) != \
                (len(step.dom.vertices), len(step.dom.edges), len(step.cod.vertices), len(step.cod.edges)):
            continue
        for phi0 in iter_homs(g.dom, step.dom, injective=True, limits=limits):
            if find_isomorphism(g.cod, step.cod, under=(g, step @ phi0), limits=limits) is not None:
                return name
    return None


def is_transfinite_composite(chain: ChainPresentation, generators: GeneratorSet, limits: Limits | None = None) -> bool:
    '''
    Tc(X) membership of a finite chain: every step is an isomorphism or
    isomorphic (as an arrow) to a member of the generator set.
    '''
    return all(s.kind == 'iso' or in_generators(s.morphism, generators, limits) is not None
               for s in chain.steps)


def is_cellular_chain(chain: ChainPresentation, generators: GeneratorSet) -> bool:
    '''
    Tc(Po(X)) membership: every non-isomorphism step carries a verified
    Po(X) certificate.
    '''
    try:
        chain.verify()
    except GoodColimError:
        return False
    return all(s.kind == 'iso' or (s.link is not None and s.link.generator in generators.names() + [None])
               for s in chain.steps)


def state_key(h: GraphMorphism) -> tuple:
    '''
    Identify a search state T → cod(f) up to renaming of T.  A mono over-map
    is determined by its image; otherwise the renamed T and the maps are kept.
    '''
    if analyze_morphism(h).is_mono:
        return ('image', frozenset(h.vmap.values()), frozenset(h.emap.values()))
    return ('renamed', canonical(h.dom)[0], h.key())


def cellularity_search(
    f: GraphMorphism,
    generators: GeneratorSet,
    budget: int | None = None,
    limits: Limits | None = None,
) -> CellComplexPresentation | None:
    '''
    Breadth-first search for a presentation of f as an X-cellular map.
    States are presentations of dom(f) → T with an over-map h: T → cod(f);
    a move attaches one outstanding cell, or all outstanding cells at
    once (a square from a generator to h without a diagonal).  The search
    succeeds when h is an isomorphism.  When every generator is a
    monomorphism, a state whose h identifies two elements is abandoned:
    attaching more cells cannot separate them.

    Arguments:
      f: the morphism to present
      generators: the generator set
      budget: maximum number of stages (defaults to GC.budget)

    Returns:
      a presentation over cod(f) with an isomorphic over-map, or None when
      nothing was found within the budget
    '''
    budget = GC.budget if budget is None else budget
    mono_generators = all(analyze_morphism(g).is_mono for _, g in generators)
    start = presentation(f.dom, f)
    queue = deque([(start, 0)])
    seen = {state_key(f)}
    while queue:
        c, depth = queue.popleft()
        h = c.over
        kind = analyze_morphism(h)
        if kind.is_iso:
            logging.info(f'cellularity_search: found {c.cell_count()} cells in {len(c.stages)} stages')
            return c
        if depth >= budget or (mono_generators and not kind.is_mono):
            continue
        todo = [Cell(sq.generator, generators[sq.generator], sq.u, sq.v)
                for sq in outstanding_squares(h, generators, limits)]
        moves = [todo] + [[cell] for cell in todo] if len(todo) > 1 else [todo]
        for cells in moves:
            if not cells:
                continue
            nxt = attach_cells(c, cells)
            key = state_key(nxt.over)
            if key in seen:
                continue
            seen.add(key)
            queue.append((nxt, depth + 1))
    logging.info('cellularity_search: inconclusive within the budget')
    return None
