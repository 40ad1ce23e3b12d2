#
# Tests for the property suite
#

import os
from pathlib import Path

import numpy as np
import pytest

from goodcolim.graphcat import GraphMorphism, discrete, edge
from goodcolim.serialize import load_diagram
from goodcolim.soa.lifting import standard_generators
from goodcolim.suite import (
    check_corpus_diagram,
    check_factorization,
    check_limit_extension,
    check_mono_oracle,
    nested_subgraphs,
    random_diagram,
    random_graph,
    run_suite,
)

@pytest.fixture
def fixtures():
    return Path(os.path.dirname(__file__)) / 'fixtures'

def test_small_run():
    '''
    A short seeded run passes every property.
    '''
    report = run_suite(seed=3, sizes=3, count=6, oracle_vertices=2, budget=6)
    names = [r.name for r in report.results]
    assert names == ['linearization', 'limit-extension', 'mono-oracle',
                     'composite-lifting', 'pushdown', 'retract-elimination']
    assert report.ok, [r.failures for r in report.results]
    assert report.results[0].instances == 6
    assert report.results[3].instances == 3
    assert report.results[5].instances == 1

def test_seeded():
    '''
    The same seed gives the same instances.
    '''
    a = random_diagram(np.random.default_rng(9), 4, standard_generators())
    b = random_diagram(np.random.default_rng(9), 4, standard_generators())
    assert a.shape == b.shape
    assert all(a.objects[x] == b.objects[x] for x in a.shape.elements)

def test_nested_subgraphs():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 4, 2)
    subs = nested_subgraphs(rng, g)
    assert subs[-1] == g
    for a, b in zip(subs, subs[1:]):
        assert set(a.vertices) <= set(b.vertices)
        assert set(a.edges) <= set(b.edges)

def test_checks(fixtures):
    gens = standard_generators()
    assert check_factorization(GraphMorphism.initial(edge()), gens, 5) is None
    collapse = GraphMorphism(discrete(2), discrete(1), {'v0': 'v0', 'v1': 'v0'})
    assert check_mono_oracle(collapse, gens, 4) is None
    assert check_corpus_diagram(load_diagram(fixtures / 'chain_vertex_edge.json'), gens) is None
    problem = check_corpus_diagram(load_diagram(fixtures / 'broken_diamond.json'), gens)
    assert problem.startswith('validate_smooth')

def test_broken_corpus(fixtures):
    '''
    The deliberately broken diagram is reported with its file name.
    '''
    report = run_suite(fixtures / 'broken_corpus', seed=1, sizes=2, count=1, oracle_vertices=1, budget=4)
    assert not report.ok
    by_name = {r.name: r for r in report.results}
    assert by_name['factorization'].ok
    assert by_name['factorization'].instances == 1
    failures = by_name['corpus-diagrams'].failures
    assert len(failures) == 1
    assert failures[0].startswith('corpus-diagrams[broken_diamond]: validate_smooth')

def test_limit_extension_random():
    '''
    Star extension keeps the links of random diagrams with up to six elements.
    '''
    gens = standard_generators()
    rng = np.random.default_rng(11)
    for _ in range(40):
        d = random_diagram(rng, int(rng.integers(1, 7)), gens)
        assert check_limit_extension(d) is None

def test_unexpected_error(monkeypatch):
    '''
    An exception that is not a library error fails its cases instead of
    stopping the run.
    '''
    def boom(d):
        raise TypeError('not comparable')

    monkeypatch.setattr('goodcolim.suite.check_limit_extension', boom)
    report = run_suite(seed=3, sizes=2, count=2, oracle_vertices=1, budget=4)
    by_name = {r.name: r for r in report.results}
    failures = by_name['limit-extension'].failures
    assert len(failures) == 2
    assert all('unexpected TypeError: not comparable' in f for f in failures)
    assert by_name['linearization'].ok
