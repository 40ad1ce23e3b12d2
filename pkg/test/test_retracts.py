#
# Unit tests for idempotents, retracts and retract elimination
#

import os
from dataclasses import replace
from pathlib import Path

import pytest

from goodcolim.diagrams import chain_diagram
from goodcolim.graphcat import GraphMorphism, analyze_morphism, colimit_over_poset, discrete, empty
from goodcolim.serialize import load_diagram, load_morphism
from goodcolim.soa.cells import Cell, attach_cells, base_change, presentation
from goodcolim.soa.lifting import CertificateError, standard_generators
from goodcolim.soa.retracts import (
    IdempotentError,
    check_lifted,
    check_split,
    eliminate_retract,
    is_idempotent,
    lift_idempotent,
    retract_refactor,
    split_idempotent,
    under_retract,
)

@pytest.fixture
def two_vertices():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'two_vertices.json'

@pytest.fixture
def fold():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'fold_idempotent.json'

def swap():
    return GraphMorphism(discrete(2), discrete(2), {'v0': 'v1', 'v1': 'v0'})

def test_split(fold):
    f = load_morphism(fold)
    assert is_idempotent(f)
    s = split_idempotent(f)
    assert s.e_obj.vertices == ('v0',)
    check_split(s, f)
    with pytest.raises(IdempotentError):
        split_idempotent(swap())
    moved = GraphMorphism(discrete(1), discrete(2), {'v0': 'v1'})
    with pytest.raises(IdempotentError):
        split_idempotent(f, moved)

def test_bad_split(fold):
    f = load_morphism(fold)
    s = split_idempotent(f)
    with pytest.raises(CertificateError) as err:
        check_split(s, GraphMorphism.identity(discrete(2)), 'split')
    assert err.value.locator == 'split'

def test_under_retract():
    '''
    ∅ → V1 is a retract of ∅ → V2; the reduction gives an idempotent
    whose image has one vertex.
    '''
    f = GraphMorphism.initial(discrete(1))
    g = GraphMorphism.initial(discrete(2))
    i1 = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    r1 = GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})
    ident = GraphMorphism.identity(empty())
    res = under_retract(f, g, (ident, i1), (ident, r1))
    assert is_idempotent(res.idempotent)
    assert res.idempotent @ res.g_prime == res.g_prime
    assert res.retraction @ res.section == GraphMorphism.identity(discrete(1))
    assert len(split_idempotent(res.idempotent).e_obj.vertices) == 1

def test_under_retract_rejects():
    '''
    Maps that do not commute with the two morphisms are rejected.
    '''
    f = GraphMorphism.identity(discrete(1))
    g = GraphMorphism.identity(discrete(2))
    i0 = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    i1 = GraphMorphism(discrete(1), discrete(2), {'v0': 'v1'})
    r = GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})
    with pytest.raises(IdempotentError):
        under_retract(f, g, (i0, i1), (r, r))

def test_retract_refactor():
    '''
    A vertex attached to V1 and folded back: only the whole of X carries
    a compatible idempotent, and the image is V1 again.
    '''
    gens = standard_generators()
    c = attach_cells(presentation(empty()), [Cell('x1', gens['x1'], GraphMorphism.initial(empty()))])
    h = GraphMorphism.initial(discrete(1))
    big, _ = base_change(c, h)
    g = big.composite()
    base = g.v('v0')
    other = next(v for v in big.total.vertices if v != base)
    f = GraphMorphism(big.total, big.total, {base: base, other: base})
    cert = retract_refactor(c, h, f)
    assert cert.stage == discrete(1)
    assert len(cert.split.e_obj.vertices) == 1
    assert analyze_morphism(cert.comparison).is_iso
    cert.verify()
    with pytest.raises(IdempotentError):
        retract_refactor(c, h, GraphMorphism(big.total, big.total, {base: other, other: other}))

def test_lift_idempotent(two_vertices, fold):
    d = load_diagram(two_vertices)
    f = load_morphism(fold)
    lifted = lift_idempotent(d, f)
    assert lifted.s == {'0': '0', '1': '1'}
    assert lifted.phi['0'] == GraphMorphism.identity(discrete(1))
    check_lifted(d, f, lifted)
    bad = lifted._replace(s={'0': '0', '1': '0'})
    with pytest.raises(CertificateError):
        check_lifted(d, f, bad)

def test_eliminate(two_vertices, fold):
    '''
    Folding the attached vertex back leaves V1 with an empty presentation.
    '''
    d = load_diagram(two_vertices)
    cert = eliminate_retract(d, load_morphism(fold), standard_generators())
    assert cert.status == 'verified'
    assert len(cert.split.e_obj.vertices) == 1
    assert len(cert.steps) == 1
    assert analyze_morphism(cert.structure_map).is_iso
    assert cert.presentation is not None
    assert cert.presentation.cell_count() == 0
    cert.verify()

def test_eliminate_tampered(two_vertices, fold):
    '''
    Replacing psi, dropping the small presentation or dropping the image
    presentation is caught.
    '''
    d = load_diagram(two_vertices)
    cert = eliminate_retract(d, load_morphism(fold), standard_generators())
    step = cert.steps[0]
    assert not step.psi.is_identity()
    bad = replace(cert, steps=(replace(step, psi=GraphMorphism.identity(step.psi.dom)),))
    with pytest.raises(CertificateError) as err:
        bad.verify()
    assert err.value.locator == 'steps[0].psi'
    bad = replace(cert, steps=(replace(step, small_presentation=None),))
    with pytest.raises(CertificateError) as err:
        bad.verify()
    assert err.value.locator == 'steps[0].small_presentation'
    with pytest.raises(CertificateError) as err:
        replace(cert, presentation=None).verify()
    assert err.value.locator == 'presentation'

def test_eliminate_refactors_steps(two_vertices, fold):
    '''
    Every step is the image of the moved idempotent as computed by
    retract_refactor, identified with E_{i+1} by its link.
    '''
    d = load_diagram(two_vertices)
    cert = eliminate_retract(d, load_morphism(fold), standard_generators())
    for step in cert.steps:
        r = step.refactor
        r.verify()
        assert r.presentation is step.small_presentation
        again = retract_refactor(step.small_presentation, r.h, r.f)
        assert again.split.e_obj == r.split.e_obj
        assert step.transport @ r.g == step.square.leg_b
        assert analyze_morphism(step.link).is_iso
        assert step.link @ r.split.r @ r.g == step.step

def test_eliminate_two_vertex_cells():
    '''
    ∅ → V1 → V2 with the second vertex folded onto the first: the image
    is V1, presented by one cell.
    '''
    v1, v2 = discrete(1), discrete(2)
    d = chain_diagram([empty(), v1, v2], [GraphMorphism.initial(v1), GraphMorphism(v1, v2, {'v0': 'v0'})])
    cocone = colimit_over_poset(d)
    a = cocone.legs['1'].v('v0')
    f = GraphMorphism(cocone.apex, cocone.apex, {v: a for v in cocone.apex.vertices})
    cert = eliminate_retract(d, f, standard_generators())
    assert cert.status == 'verified'
    assert len(cert.steps) == 2
    assert len(cert.split.e_obj.vertices) == 1
    assert cert.presentation.cell_count() == 1
    assert all(step.small_presentation.cell_count() == 1 for step in cert.steps)
    cert.verify()

def test_eliminate_inconclusive(two_vertices, fold):
    '''
    With no candidates allowed the search gives up and says so.
    '''
    d = load_diagram(two_vertices)
    cert = eliminate_retract(d, load_morphism(fold), standard_generators(), budget=0)
    assert cert.status == 'inconclusive'
    assert cert.steps == ()
    with pytest.raises(CertificateError) as err:
        cert.verify()
    assert err.value.locator == 'status'

def test_not_idempotent(two_vertices):
    with pytest.raises(IdempotentError):
        eliminate_retract(load_diagram(two_vertices), swap(), standard_generators())
