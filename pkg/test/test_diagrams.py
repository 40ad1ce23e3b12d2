#
# Unit and property tests for poset-indexed diagrams
#

import os
from pathlib import Path

import hypothesis
import hypothesis.strategies as st
import numpy as np
import pytest

from goodcolim.diagrams import (
    DiagramError,
    LinkError,
    NotSmoothError,
    PosetDiagram,
    SmoothDiagram,
    build_diagram,
    chain_diagram,
    limit_extension_check,
    linearize,
    relative_composite,
    reroot,
    restrict,
    shortest_stage,
    star_extend,
    validate_smooth,
)
from goodcolim.graphcat import (
    GraphMorphism,
    analyze_morphism,
    colimit_over_poset,
    discrete,
    edge,
    factor_through_stage,
    is_isomorphic,
    pushout,
)
from goodcolim.posets import PosetError, chain, classify_element, diamond
from goodcolim.serialize import load_diagram
from goodcolim.soa.lifting import standard_generators
from goodcolim.suite import random_diagram

@pytest.fixture
def chain_diagram_file():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'chain_vertex_edge.json'

@pytest.fixture
def diamond_file():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'diamond_vertices.json'

@pytest.fixture
def span_file():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'span_open.json'

@pytest.fixture
def broken_file():
    return Path(os.path.dirname(__file__)) / 'fixtures' / 'broken_diamond.json'

def collapse():
    return GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})

def test_functoriality():
    '''
    Two paths around the diamond that disagree are reported.
    '''
    v1, v2 = discrete(1), discrete(2)
    inc = GraphMorphism(v1, v2, {'v0': 'v0'})
    swap = GraphMorphism(v2, v2, {'v0': 'v1', 'v1': 'v0'})
    d = PosetDiagram(diamond(), {'bot': v1, 'a': v2, 'b': v2, 't': v2}, {
        ('bot', 'a'): inc, ('bot', 'b'): inc,
        ('a', 't'): GraphMorphism.identity(v2), ('b', 't'): swap,
    })
    assert d.functoriality_violations
    assert not validate_smooth(d).ok
    with pytest.raises(DiagramError):
        PosetDiagram(chain(2), {'0': v1, '1': v2}, {})

def test_smooth(diamond_file, broken_file):
    '''
    The top of the diamond must carry the pushout of the two sides.
    '''
    d = load_diagram(diamond_file)
    report = validate_smooth(d)
    assert report.ok
    assert [link.element for link in report.links] == ['1', '2']
    broken = load_diagram(broken_file)
    report = validate_smooth(broken)
    assert not report.ok
    assert report.violations[0].startswith('limit element 3')
    with pytest.raises(NotSmoothError) as err:
        SmoothDiagram.of(broken)
    assert err.value.violations == report.violations

def test_linearize_chain(chain_diagram_file):
    '''
    A vertex, then an edge: two pushout steps.
    '''
    d = load_diagram(chain_diagram_file)
    c = linearize(d, standard_generators())
    assert len(c.stages) == 3
    assert c.pushout_steps() == 2
    assert [s.link.generator for s in c.steps] == ['x1', 'x2']
    c.verify()
    assert is_isomorphic(c.stages[-1], edge())
    assert c.composite().dom == c.stages[0]

def test_linearize_diamond(diamond_file):
    '''
    The limit element becomes an isomorphism step.
    '''
    d = load_diagram(diamond_file)
    c = linearize(d, standard_generators())
    assert [s.kind for s in c.steps] == ['pushout', 'pushout', 'iso']
    assert is_isomorphic(c.stages[-1], d.colimit().apex)
    assert is_isomorphic(c.to_diagram().colimit().apex, d.colimit().apex)

def test_link_error():
    '''
    Identifying two vertices is not a pushout of a generator of X_std.
    '''
    d = PosetDiagram(chain(2), {'0': discrete(2), '1': discrete(1)}, {('0', '1'): collapse()})
    with pytest.raises(LinkError) as err:
        linearize(d, standard_generators())
    assert err.value.element == '1'

def test_star_extend(span_file):
    '''
    The span gets a top carrying its colimit; links are unchanged.
    '''
    d = load_diagram(span_file)
    star = star_extend(d)
    assert star.shape.greatest() == 'top'
    assert classify_element(star.shape, 'top').kind == 'limit'
    assert star.links().multiset() == d.links().multiset()
    assert analyze_morphism(relative_composite(star, d.shape.elements)).is_iso
    assert star_extend(star) is star

def test_limit_extension(diamond_file, chain_diagram_file):
    d = load_diagram(diamond_file)
    assert limit_extension_check(d, {'0', '1', '2'}) == (True, True)
    c = load_diagram(chain_diagram_file)
    assert limit_extension_check(c, {'0'}) == (False, False)

def test_shortest_stage(chain_diagram_file):
    '''
    Along a chain of monos the last stage is the first isomorphic one.
    '''
    d = load_diagram(chain_diagram_file)
    x, leg = shortest_stage(d)
    assert x == '2'
    assert analyze_morphism(leg).is_iso
    bad = PosetDiagram(chain(2), {'0': discrete(2), '1': discrete(1)}, {('0', '1'): collapse()})
    with pytest.raises(DiagramError):
        shortest_stage(bad)

def test_reroot_and_chains(chain_diagram_file):
    d = load_diagram(chain_diagram_file)
    up = reroot(d, '1')
    assert up.bottom == '1'
    assert up.objects['1'] == discrete(2)
    with pytest.raises(DiagramError):
        chain_diagram([discrete(1)], [GraphMorphism.identity(discrete(1))])

def test_build_diagram():
    '''
    Limit elements of a built diagram get the colimit below them.
    '''
    x1 = standard_generators()['x1']

    def attach(x, g):
        return pushout(GraphMorphism.initial(g), x1).leg_b

    d = build_diagram(diamond(), discrete(0), attach)
    assert d.objects['a'] == discrete(1)
    assert len(d.objects['t'].vertices) == 2
    assert validate_smooth(d).ok

@hypothesis.given(st.integers(0, 2**32 - 1), st.integers(1, 6))
@hypothesis.settings(deadline=None, max_examples=30)
def test_random_linearization(seed, n):
    '''
    Linearization preserves the colimit; the star extension preserves the links.
    '''
    gens = standard_generators()
    d = random_diagram(np.random.default_rng(seed), n, gens)
    c = linearize(d, gens)
    c.verify()
    assert is_isomorphic(c.stages[-1], d.colimit().apex)
    star = star_extend(d)
    assert star.links().multiset() == d.links().multiset()

def test_restrict(diamond_file):
    '''
    Dropping the top of the diamond leaves a span whose colimit glues two
    new vertices onto the base vertex.
    '''
    d = load_diagram(diamond_file)
    sub = restrict(d, ['0', '1', '2'])
    assert sub.shape.elements == ('0', '1', '2')
    assert sub.shape.greatest() is None
    cocone = colimit_over_poset(sub)
    assert len(cocone.apex.vertices) == 3
    assert cocone.legs['1'] @ sub.arrow('0', '1') == cocone.legs['0']
    with pytest.raises(PosetError):
        factor_through_stage(GraphMorphism.initial(cocone.apex), sub, cocone)

def test_factor_through_stage(diamond_file):
    '''
    A vertex added at 1 factors through 1; vertices from both sides need the top.
    '''
    d = load_diagram(diamond_file)
    cocone = colimit_over_poset(d)
    a = cocone.legs['1'].v('v1')
    b = cocone.legs['2'].v('v1')
    m = GraphMorphism(discrete(1), cocone.apex, {'v0': a})
    x, mx = factor_through_stage(m, d, cocone)
    assert x == '1'
    assert cocone.legs[x] @ mx == m
    both = GraphMorphism(discrete(2), cocone.apex, {'v0': a, 'v1': b})
    x, mx = factor_through_stage(both, d, cocone)
    assert x == '3'
    assert cocone.legs[x] @ mx == both
