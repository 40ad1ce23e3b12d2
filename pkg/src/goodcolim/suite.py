#
# Random instances and the property suite.  Every generator takes a numpy
# random Generator so a seed reproduces the same instances (and reports).
#

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .config import GC, GoodColimError, Limits
from .diagrams import (
    PosetDiagram,
    SmoothDiagram,
    build_diagram,
    limit_extension_check,
    linearize,
    links,
    star_extend,
    validate_smooth,
)
from .graphcat import (
    Graph,
    GraphMorphism,
    analyze_morphism,
    colimit_over_poset,
    enumerate_homs,
    find_isomorphism,
    is_isomorphic,
    iter_homs,
    pushout,
)
from .posets import FinitePoset, classify_element, initial_segments
from .serialize import load_diagram, load_generators, load_morphism
from .soa.cells import cellularity_search
from .soa.factorize import classical_soa, fat_soa
from .soa.lifting import GeneratorSet, diagonal, lift_composite, rlp_check, squares, standard_generators
from .soa.pushdown import StagedObject, push_down_cells
from .soa.retracts import eliminate_retract, is_idempotent, split_idempotent


#
# Generators
#

def _pick(rng: np.random.Generator, items: list):
    return items[int(rng.integers(len(items)))]


def random_graph(rng: np.random.Generator, max_vertices: int = 2, max_edges: int = 1) -> Graph:
    '''
    A graph with at most max_vertices vertices v0.. and at most max_edges edges e0..
    '''
    n = int(rng.integers(0, max_vertices + 1))
    vs = [f'v{i}' for i in range(n)]
    edges = []
    if n:
        for i in range(int(rng.integers(0, max_edges + 1))):
            edges.append((f'e{i}', _pick(rng, vs), _pick(rng, vs)))
    return Graph(vs, edges)


def random_good_poset(rng: np.random.Generator, n: int) -> FinitePoset:
    '''
    A good poset on "0".."n-1" with least element "0": every other element
    gets one or two lower covers among the earlier ones.
    '''
    elements = [str(i) for i in range(n)]
    covers = []
    for i in range(1, n):
        k = int(rng.integers(1, min(i, 2) + 1))
        below = sorted(int(j) for j in rng.choice(i, size=k, replace=False))
        covers += [(str(j), str(i)) for j in below]
    return FinitePoset(elements, covers)


def random_link(rng: np.random.Generator, g: Graph, generators: GeneratorSet,
                limits: Limits | None = None) -> GraphMorphism:
    '''
    The pushout of a randomly chosen generator along a randomly chosen
    characteristic map into g.
    '''
    options = []
    for _, gen in generators:
        homs = enumerate_homs(gen.dom, g, limits)
        if homs:
            options.append((gen, homs))
    gen, homs = _pick(rng, options)
    return pushout(_pick(rng, homs), gen).leg_b


def random_diagram(rng: np.random.Generator, n: int, generators: GeneratorSet | None = None,
                   base: Graph | None = None, limits: Limits | None = None) -> SmoothDiagram:
    '''
    A smooth diagram on a random good poset with n elements whose links
    are pushouts of generators.
    '''
    generators = generators or standard_generators()
    shape = random_good_poset(rng, n)
    base = random_graph(rng) if base is None else base
    return build_diagram(shape, base, lambda x, g: random_link(rng, g, generators, limits))


def small_graphs(max_vertices: int, max_edges: int) -> list[Graph]:
    '''
    One graph from every isomorphism class with at most max_vertices
    vertices and at most max_edges edges, in a fixed order.
    '''
    result = []
    for n in range(max_vertices + 1):
        vs = [f'v{i}' for i in range(n)]
        pairs = [(s, t) for s in vs for t in vs]
        for m in range(max_edges + 1):
            found = []
            for ends in itertools.combinations_with_replacement(pairs, m):
                g = Graph(vs, [(f'e{i}', s, t) for i, (s, t) in enumerate(ends)])
                if not any(is_isomorphic(g, h) for h in found):
                    found.append(g)
            result += found
    return result


def right_maps(generators: GeneratorSet, max_vertices: int = 2, max_edges: int = 2,
               limits: Limits | None = None) -> list[GraphMorphism]:
    '''
    Every morphism between small graphs that has the right lifting
    property against the generators.
    '''
    graphs = small_graphs(max_vertices, max_edges)
    return [p for a in graphs for b in graphs for p in enumerate_homs(a, b, limits)
            if rlp_check(p, generators, limits).holds]


def idempotents_under(y: Graph, a_map: GraphMorphism, limit: int = 32,
                      limits: Limits | None = None) -> list[GraphMorphism]:
    '''
    Idempotent endomorphisms of y that fix the image of a_map (at most `limit` of them).
    '''
    vc = {a_map.v(v): [a_map.v(v)] for v in a_map.dom.vertices}
    ec = {a_map.e(e): [a_map.e(e)] for e in a_map.dom.edges}
    return list(itertools.islice((f for f in iter_homs(y, y, vc, ec, limits=limits) if is_idempotent(f)), limit))


def nested_subgraphs(rng: np.random.Generator, g: Graph, count: int = 3) -> list[Graph]:
    '''
    A chain of `count` induced subgraphs of g (with g's ids) ending at g.
    '''
    order = [g.vertices[int(i)] for i in rng.permutation(len(g.vertices))]
    cuts = sorted(int(c) for c in rng.integers(0, len(order) + 1, size=count - 1)) + [len(order)]
    result = []
    for c in cuts:
        keep = set(order[:c])
        result.append(Graph(keep, [t for t in g.edge_triples() if t[1] in keep and t[2] in keep]))
    result[-1] = g
    return result


#
# Properties
#

class PropertyResult(NamedTuple):
    name: str
    instances: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class SuiteReport:
    seed: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def _run(name: str, cases: Iterator, check: Callable) -> PropertyResult:
    '''
    Apply check to every case; a case fails when check returns a message
    or raises (unexpected exceptions are logged with their traceback).
    '''
    count, failures = 0, []
    for label, case in cases:
        count += 1
        try:
            problem = check(*case)
        except GoodColimError as err:
            problem = f'{type(err).__name__}: {err}'
        except Exception as err:
            logging.exception(f'suite: {name}[{label}]: unexpected error')
            problem = f'unexpected {type(err).__name__}: {err}'
        if problem:
            failures.append(f'{name}[{label}]: {problem}')
    logging.info(f'suite: {name}: {count} instances, {len(failures)} failures')
    return PropertyResult(name, count, tuple(failures))


def check_linearization(d: PosetDiagram, generators: GeneratorSet) -> str | None:
    chain = linearize(d, generators)
    chain.verify()
    if chain.stages[-1] != colimit_over_poset(d).apex:
        return 'last stage differs from the colimit'
    if chain.pushout_steps() != len(links(d)):
        return 'number of pushout steps differs from the number of links'
    return None


def check_limit_extension(d: PosetDiagram) -> str | None:
    for q in initial_segments(d.shape):
        if q.members:
            limit_extension_check(d, q)
    star = star_extend(d)
    if links(star).multiset() != links(d).multiset():
        return 'star extension changed the links'
    for x in set(star.shape.elements) - set(d.shape.elements):
        if classify_element(star.shape, x).kind != 'limit':
            return f'added element {x} is not limit'
    return None


def check_mono_oracle(f: GraphMorphism, generators: GeneratorSet, budget: int) -> str | None:
    found = cellularity_search(f, generators, budget) is not None
    mono = analyze_morphism(f).is_mono
    if found != mono:
        return f'cellular={found} but mono={mono} for {f}'
    return None


def check_lifting(d: PosetDiagram, p: GraphMorphism, limits: Limits | None = None) -> str | None:
    cocone = colimit_over_poset(d)
    for x in d.shape.linear_extension():
        leg = cocone.legs[x]
        for sq in squares(x, leg, p, limits):
            if diagonal(leg, p, sq.u, sq.v, limits) is None:
                return f'component at {x} has a square without a diagonal'
            if x == d.bottom:
                w = lift_composite(d, sq.u, sq.v, p, limits)
                if w @ leg != sq.u or p @ w != sq.v:
                    return 'constructed lift does not solve the square'
    return None


def check_pushdown(d: PosetDiagram, staged: StagedObject, generators: GeneratorSet) -> str | None:
    cert = push_down_cells(d, staged, generators)
    cert.verify(d, staged, generators)
    return None


def check_retract(d: PosetDiagram, f: GraphMorphism, generators: GeneratorSet, budget: int) -> str | None:
    cert = eliminate_retract(d, f, generators, budget=budget)
    if cert.status != 'verified':
        return 'elimination was inconclusive'
    cert.verify()
    composite = colimit_over_poset(d).legs[d.bottom]
    split = split_idempotent(f, composite)
    if split.e @ split.r != f:
        return 'split does not reproduce the idempotent'
    independent = cellularity_search(split.r @ composite, generators, budget)
    if independent is None:
        return 'no independent cellular presentation of the image'
    if find_isomorphism(independent.total, split.e_obj, under=(independent.composite(), split.r @ composite)) is None:
        return 'independent presentation is not the image under the base'
    return None


def check_factorization(f: GraphMorphism, generators: GeneratorSet, budget: int) -> str | None:
    fat = fat_soa(f, generators, budget)
    fat.verify()
    classical = classical_soa(f, generators, budget)
    classical.verify()
    if fat.status != 'converged':
        return f'fat factorization did not converge within budget {budget}'
    if classical.status == 'converged':
        if find_isomorphism(fat.middle, classical.middle, under=(fat.left, classical.left),
                            over=(fat.right, classical.right)) is None:
            return 'fat and classical middle objects differ'
    return None


def check_corpus_diagram(d: PosetDiagram, generators: GeneratorSet) -> str | None:
    report = validate_smooth(d)
    if not report.ok:
        return f'validate_smooth: {report.violations[0]}'
    return check_linearization(d, generators)


#
# Case streams
#

def _diagram_cases(rng, count, sizes, generators):
    for i in range(count):
        n = int(rng.integers(1, sizes + 1))
        yield i, (random_diagram(rng, n, generators),)


def _oracle_cases(generators, max_vertices, max_edges, budget, limits):
    graphs = small_graphs(max_vertices, max_edges)
    for i, a in enumerate(graphs):
        for j, b in enumerate(graphs):
            for k, f in enumerate(enumerate_homs(a, b, limits)):
                yield f'{i}.{j}.{k}', (f, generators, budget)


def _lifting_cases(rng, count, sizes, generators, limits):
    maps = right_maps(generators, limits=limits)
    for i in range(count):
        d = random_diagram(rng, int(rng.integers(1, min(sizes, 4) + 1)), generators,
                           base=random_graph(rng, 1, 1))
        yield i, (d, _pick(rng, maps), limits)


def _pushdown_cases(rng, count, generators):
    for i in range(count):
        g = random_graph(rng, 4, 2)
        staged = StagedObject.from_subgraphs(g, nested_subgraphs(rng, g))
        d = random_diagram(rng, int(rng.integers(1, 5)), generators, base=g)
        yield i, (d, staged, generators)


def _retract_cases(rng, count, generators, budget):
    produced = 0
    while produced < count:
        d = random_diagram(rng, int(rng.integers(1, 5)), generators, base=random_graph(rng, 1, 1))
        composite = colimit_over_poset(d).legs[d.bottom]
        candidates = idempotents_under(composite.cod, composite)
        f = _pick(rng, candidates)
        yield produced, (d, f, generators, max(budget, len(d.shape) + 1))
        produced += 1


def _corpus_files(corpus: Path, sub: str) -> list[Path]:
    folder = corpus / sub
    return sorted(folder.glob('*.json')) if folder.is_dir() else []


def run_suite(
    corpus: Path | None = None,
    seed: int | None = None,
    sizes: int = 6,
    count: int = 200,
    oracle_vertices: int = 3,
    budget: int | None = None,
    limits: Limits | None = None,
) -> SuiteReport:
    '''
    Run every property on seeded random instances and on the corpus.

    Arguments:
      corpus: folder with generators/, morphisms/ and diagrams/ (skipped when None)
      seed: seed for the random instances (defaults to GC.seed)
      sizes: largest number of shape elements of a random diagram
      count: random instances for the diagram properties (fewer for the costly ones)
      oracle_vertices: largest graph in the exhaustive mono oracle
      budget: iterations for the factorization engines and cellularity searches

    Returns:
      a SuiteReport with one PropertyResult per property
    '''
    seed = GC.seed if seed is None else seed
    budget = GC.budget if budget is None else budget
    rng = np.random.default_rng(seed)
    generators = standard_generators(limits)
    if corpus is not None and (corpus / 'generators' / 'X_std.json').exists():
        generators = load_generators(corpus / 'generators' / 'X_std.json', limits)

    report = SuiteReport(seed)
    report.results.append(_run('linearization', _diagram_cases(rng, count, sizes, generators),
                               lambda d: check_linearization(d, generators)))
    report.results.append(_run('limit-extension', _diagram_cases(rng, count, sizes, generators),
                               check_limit_extension))
    report.results.append(_run('mono-oracle', _oracle_cases(generators, oracle_vertices, 2, 6, limits),
                               check_mono_oracle))
    report.results.append(_run('composite-lifting', _lifting_cases(rng, max(count // 2, 1), sizes, generators, limits),
                               check_lifting))
    report.results.append(_run('pushdown', _pushdown_cases(rng, max(count // 4, 1), generators),
                               check_pushdown))
    report.results.append(_run('retract-elimination', _retract_cases(rng, max(count // 6, 1), generators, budget),
                               check_retract))
    if corpus is not None:
        morphisms = ((p.stem, (p,)) for p in _corpus_files(corpus, 'morphisms'))
        report.results.append(_run('factorization', morphisms,
                                   lambda p: check_factorization(load_morphism(p), generators, budget)))
        diagrams = ((p.stem, (p,)) for p in _corpus_files(corpus, 'diagrams'))
        report.results.append(_run('corpus-diagrams', diagrams,
                                   lambda p: check_corpus_diagram(load_diagram(p), generators)))
    return report
