#
# Unit tests for graphs, morphisms and colimits
#

import hypothesis
import hypothesis.strategies as st
import pytest

from goodcolim.config import Limits
from goodcolim.graphcat import (
    BoundExceeded,
    ColimitError,
    Graph,
    GraphError,
    GraphMorphism,
    PushoutCertificate,
    analyze_morphism,
    canonical,
    colimit,
    coproduct,
    discrete,
    edge,
    empty,
    enumerate_homs,
    factorizations,
    find_isomorphism,
    image,
    inverse,
    is_isomorphic,
    loop,
    mediating_morphism,
    pushout,
    quotient,
)

def collapse():
    '''
    V2 → V1, the map that identifies the two vertices.
    '''
    return GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})

def x2():
    return GraphMorphism(discrete(2), edge(), {'v0': 'v0', 'v1': 'v1'})

def test_graph():
    '''
    Graphs store their ids in natural order and reject bad edges.
    '''
    g = Graph(['v10', 'v2', 'v1'], [('e0', 'v1', 'v10')])
    assert g.vertices == ('v1', 'v2', 'v10')
    assert g.ends('e0') == ('v1', 'v10')
    assert g.edges_between() == {('v1', 'v10'): ['e0']}
    assert len(g) == 3
    assert g == Graph(['v1', 'v2', 'v10'], [('e0', 'v1', 'v10')])
    with pytest.raises(GraphError):
        Graph(['v0'], [('e0', 'v0', 'v1')])
    with pytest.raises(GraphError):
        Graph(['v0', 'v0'])

def test_morphism():
    '''
    The constructor checks totality and compatibility with sources and targets.
    '''
    f = GraphMorphism(edge(), loop(), {'v0': 'v0', 'v1': 'v0'}, {'e0': 'e0'})
    assert f.v('v1') == 'v0'
    with pytest.raises(GraphError):
        GraphMorphism(edge(), loop(), {'v0': 'v0'}, {'e0': 'e0'})
    with pytest.raises(GraphError):
        GraphMorphism(loop(), edge(), {'v0': 'v0'}, {'e0': 'e0'})
    assert GraphMorphism.identity(edge()).is_identity()
    assert GraphMorphism.initial(loop()).dom == empty()

def test_composition():
    '''
    g @ f means f first.
    '''
    f = GraphMorphism(discrete(1), discrete(2), {'v0': 'v1'})
    g = collapse()
    h = g @ f
    assert h.dom == discrete(1) and h.cod == discrete(1)
    assert h.is_identity()
    with pytest.raises(GraphError):
        f @ f

def test_analyze():
    '''
    Monos and epis are the injective and surjective maps.
    '''
    assert analyze_morphism(collapse()) == (False, True, False)
    assert analyze_morphism(x2()) == (True, False, False)
    swap = GraphMorphism(discrete(2), discrete(2), {'v0': 'v1', 'v1': 'v0'})
    assert analyze_morphism(swap).is_iso
    assert inverse(swap) == swap
    with pytest.raises(GraphError):
        inverse(collapse())
    assert image(collapse()) == discrete(1)

def test_homs():
    '''
    Hom-sets are complete and in a fixed order.
    '''
    assert len(enumerate_homs(discrete(2), discrete(2))) == 4
    assert len(enumerate_homs(edge(), loop())) == 1
    assert len(enumerate_homs(loop(), edge())) == 0
    assert enumerate_homs(edge(), edge()) == [GraphMorphism.identity(edge())]
    homs = enumerate_homs(discrete(1), discrete(3))
    assert [h.v('v0') for h in homs] == ['v0', 'v1', 'v2']

def test_bounds():
    '''
    Enumerations refuse to exceed their bounds instead of truncating.
    '''
    with pytest.raises(BoundExceeded) as err:
        enumerate_homs(discrete(3), discrete(3), Limits(8, 10, 16))
    assert err.value.bound == 10
    with pytest.raises(BoundExceeded):
        enumerate_homs(discrete(3), discrete(1), Limits(2, 100, 16))

def test_factorizations():
    '''
    Lifts of V1 → V1 along the collapse map V2 → V1.
    '''
    m = GraphMorphism.identity(discrete(1))
    lifts = list(factorizations(m, collapse()))
    assert [h.v('v0') for h in lifts] == ['v0', 'v1']
    pinned = list(factorizations(m, collapse(), vpins={'v0': 'v1'}))
    assert [h.v('v0') for h in pinned] == ['v1']

def test_isomorphism():
    '''
    Plain and constrained isomorphism search.
    '''
    g = Graph(['a', 'b'], [('x', 'b', 'a')])
    iso = find_isomorphism(g, edge())
    assert iso is not None and iso.v('b') == 'v0'
    assert find_isomorphism(edge(), loop()) is None
    assert not is_isomorphic(discrete(2), edge())
    a_g = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    a_h = GraphMorphism(discrete(1), discrete(2), {'v0': 'v1'})
    under = find_isomorphism(discrete(2), discrete(2), under=(a_g, a_h))
    assert under.v('v0') == 'v1' and under.v('v1') == 'v0'

def test_canonical():
    '''
    Canonical ids are dense and follow the natural order of the old ids.
    '''
    g = Graph(['b', 'a'], [('x', 'a', 'b')])
    c, iso = canonical(g)
    assert c == edge()
    assert iso.v('a') == 'v0'

def test_coproduct_and_quotient():
    '''
    Disjoint union renames; quotient names classes by their smallest member.
    '''
    total, inj = coproduct([edge(), loop()])
    assert total.vertices == ('v0', 'v1', 'v2')
    assert inj[1].v('v0') == 'v2'
    q = quotient(discrete(3), [('v0', 'v2')], [])
    assert q.cod == discrete(2)
    assert q.vmap == {'v0': 'v0', 'v1': 'v1', 'v2': 'v0'}

def test_pushout():
    '''
    Gluing the ends of an edge gives a loop.
    '''
    apex, leg_b, leg_c, cert = pushout(x2(), collapse())
    assert is_isomorphic(apex, loop())
    assert leg_b @ x2() == leg_c @ collapse()
    cert.verify()
    probed = cert.with_probes()
    assert probed.probes
    probed.verify()

def test_pushout_tampered():
    '''
    A square whose apex is not the pushout fails verification.
    '''
    _, leg_b, leg_c, _ = pushout(x2(), collapse())
    bigger = Graph(['v0'], [('e0', 'v0', 'v0'), ('e1', 'v0', 'v0')])
    into = GraphMorphism(loop(), bigger, {'v0': 'v0'}, {'e0': 'e0'})
    cert = PushoutCertificate(x2(), collapse(), into @ leg_b, into @ leg_c)
    with pytest.raises(ColimitError) as err:
        cert.verify('sq')
    assert str(err.value).startswith('sq')

def test_mediating_morphism():
    '''
    Maps that do not form a cocone have no mediator.
    '''
    total, inj = coproduct([discrete(1), discrete(1)])
    m = mediating_morphism(total, inj, [GraphMorphism.identity(discrete(1))] * 2, discrete(1))
    assert m.vmap == {'v0': 'v0', 'v1': 'v0'}
    apex, leg_b, leg_c, _ = pushout(GraphMorphism.initial(discrete(1)), GraphMorphism.initial(discrete(1)))
    a = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    with pytest.raises(ColimitError):
        mediating_morphism(apex, [leg_b], [a], discrete(2))

def test_colimit():
    '''
    The coequalizer of the two inclusions V1 → V2 identifies the vertices.
    '''
    a = GraphMorphism(discrete(1), discrete(2), {'v0': 'v0'})
    b = GraphMorphism(discrete(1), discrete(2), {'v0': 'v1'})
    cocone = colimit({'s': discrete(1), 't': discrete(2)}, [('s', 't', a), ('s', 't', b)])
    assert cocone.apex == discrete(1)

@hypothesis.given(st.integers(0, 3), st.integers(0, 3))
def test_coproduct_sizes(m, n):
    '''
    The pushout over the empty graph is the coproduct.
    '''
    apex, _, _, cert = pushout(GraphMorphism.initial(discrete(m)), GraphMorphism.initial(discrete(n)))
    assert apex == discrete(m + n)
    cert.verify()
