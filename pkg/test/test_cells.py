#
# Unit tests for presented cell complexes
#

import os
from dataclasses import replace
from pathlib import Path

import pytest

from goodcolim.diagrams import linearize
from goodcolim.graphcat import Graph, GraphMorphism, analyze_morphism, discrete, edge, empty, is_isomorphic, loop
from goodcolim.serialize import load_diagram
from goodcolim.soa.cells import (
    Cell,
    CellError,
    Stage,
    attach_cells,
    base_change,
    cellularity_search,
    in_generators,
    is_cellular_chain,
    is_subcomplex,
    is_transfinite_composite,
    presentation,
    state_key,
)
from goodcolim.soa.lifting import CertificateError, GeneratorSet, standard_generators

@pytest.fixture
def chain_diagram_file():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'chain_vertex_edge.json'

@pytest.fixture
def gens():
    return standard_generators()

def fold():
    return GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})

def loop_cell(gens):
    '''
    An x2 cell whose two ends go to the single vertex of V1.
    '''
    return Cell('x2', gens['x2'], GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'}))

def test_attach(gens):
    '''
    Attaching an edge at one vertex makes a loop.
    '''
    c = attach_cells(presentation(discrete(1)), [loop_cell(gens)])
    assert is_isomorphic(c.total, loop())
    assert c.cell_count() == 1
    assert len(c.spaces()) == 2
    assert c.composite().dom == discrete(1)
    assert analyze_morphism(c.composite()).is_mono
    c.verify('presentation', gens)

def test_duplicates(gens):
    '''
    The same cell twice is an error unless the generator has an empty domain.
    '''
    with pytest.raises(CellError):
        attach_cells(presentation(discrete(1)), [loop_cell(gens), loop_cell(gens)])
    vertex = Cell('x1', gens['x1'], GraphMorphism.initial(empty()))
    c = attach_cells(presentation(empty()), [vertex, vertex])
    assert c.total == discrete(2)
    wrong = Cell('x1', gens['x1'], GraphMorphism.initial(discrete(1)))
    with pytest.raises(CellError):
        attach_cells(presentation(empty()), [wrong])

def test_tampered(gens):
    '''
    A stage whose cells do not match its square is located.
    '''
    c = attach_cells(presentation(discrete(1)), [loop_cell(gens)])
    other = Cell('x1', gens['x1'], GraphMorphism.initial(discrete(1)))
    bad = replace(c, stages=(Stage((other,), c.stages[0].square),))
    with pytest.raises(CertificateError) as err:
        bad.verify()
    assert err.value.locator == 'presentation.stages[0]'

def test_subcomplex(gens):
    c0 = presentation(discrete(1))
    c1 = attach_cells(c0, [loop_cell(gens)])
    assert is_subcomplex(c0, c1)
    assert not is_subcomplex(c1, c0)
    assert is_subcomplex(c1, c1)

def test_base_change(gens):
    '''
    Moving the loop cell along V1 → V2 gives a vertex with a loop next to a bare vertex.
    '''
    c = attach_cells(presentation(discrete(1)), [loop_cell(gens)])
    h = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    moved, iota = base_change(c, h)
    assert moved.base == discrete(2)
    assert len(moved.total.vertices) == 2
    assert len(moved.total.edges) == 1
    assert iota.dom == c.total and iota.cod == moved.total
    assert iota @ c.composite() == moved.composite() @ h
    with pytest.raises(CellError):
        base_change(c, GraphMorphism.identity(edge()))

def test_cellularity_search(gens):
    '''
    ∅ → E1 needs two vertices and then an edge; a non-mono has no presentation.
    '''
    c = cellularity_search(GraphMorphism.initial(edge()), gens, budget=4)
    assert c is not None
    assert c.cell_count() == 3
    assert len(c.stages) == 2
    assert analyze_morphism(c.over).is_iso
    c.verify('presentation', gens)
    collapse = GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})
    assert cellularity_search(collapse, gens, budget=4) is None
    ident = cellularity_search(GraphMorphism.identity(loop()), gens, budget=0)
    assert ident.cell_count() == 0

def test_state_key():
    '''
    Two non-mono over-maps with the same image counts are different states.
    '''
    lp = loop()
    path = GraphMorphism(edge(), lp, {'v0': 'v0', 'v1': 'v0'}, {'e0': 'e0'})
    stray = Graph(['v0', 'v1'], [('e0', 'v0', 'v0')])
    looped = GraphMorphism(stray, lp, {'v0': 'v0', 'v1': 'v0'}, {'e0': 'e0'})
    assert state_key(path) != state_key(looped)
    assert state_key(GraphMorphism.identity(lp)) == state_key(GraphMorphism.identity(lp))

def test_non_mono_generators(gens):
    '''
    With a folding generator, folding two vertices is cellular.
    '''
    folding = GeneratorSet('folds', (('x1', gens['x1']), ('fold', fold())))
    c = cellularity_search(fold(), folding, budget=2)
    assert c is not None
    assert analyze_morphism(c.over).is_iso
    assert c.cell_count() >= 1
    assert all(cell.generator == 'fold' for s in c.stages for cell in s.cells)
    c.verify('presentation', folding)

def test_chain_membership(chain_diagram_file, gens):
    '''
    The steps of a linearized chain are pushouts of generators but not generators.
    '''
    chain = linearize(load_diagram(chain_diagram_file), gens)
    assert is_cellular_chain(chain, gens)
    assert not is_transfinite_composite(chain, gens)
    assert in_generators(gens['x2'], gens) == 'x2'
    assert in_generators(GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'}), gens) is None
