#
# JSON formats for graphs, morphisms, posets, diagrams, generator sets
# and certificates.  Files are validated with pydantic models on load and
# written with sorted keys so equal values give identical bytes.
#

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Literal, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from .config import GoodColimError, Limits
from .diagrams import ChainPresentation, ChainStep, PosetDiagram, SmoothDiagram
from .graphcat import Graph, GraphMorphism, ProbeWitness, PushoutCertificate
from .posets import FinitePoset
from .soa.cells import Cell, CellComplexPresentation, Stage
from .soa.factorize import FactorizationCertificate, FatDiagram
from .soa.lifting import Diagonal, GeneratorSet, PoCertificate, RlpReport, Square
from .soa.pushdown import PushdownCertificate, StagedObject
from .soa.retracts import LiftedIdempotent, RefactorCertificate, RetractCertificate, RetractStep, Split

CERT_VERSION = 1


class FormatError(GoodColimError):
    """
    A file is not valid JSON or does not match the expected format.  The
    message gives the line and column, or the location of the offending
    field.
    """


#
# Models
#

class Model(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class GraphModel(Model):
    vertices: list[str]
    edges: list[tuple[str, str, str]] = []


class MorphismModel(Model):
    dom: GraphModel
    cod: GraphModel
    vmap: dict[str, str]
    emap: dict[str, str] = {}


class InstanceModel(MorphismModel):
    '''
    A morphism file from the corpus: a morphism with an optional name and note.
    '''
    name: Optional[str] = None
    note: Optional[str] = None


class PosetModel(Model):
    elements: list[str]
    covers: list[tuple[str, str]] = []


class ArrowModel(Model):
    src: str
    tgt: str
    vmap: dict[str, str]
    emap: dict[str, str] = {}


class DiagramModel(Model):
    shape: PosetModel
    objects: dict[str, GraphModel]
    arrows: list[ArrowModel] = []


class GeneratorModel(Model):
    name: str
    morphism: MorphismModel


class GeneratorSetModel(Model):
    name: str
    members: list[GeneratorModel]


class ProbeModel(Model):
    h_b: MorphismModel
    h_c: MorphismModel
    mediator: MorphismModel


class PushoutModel(Model):
    f: MorphismModel
    g: MorphismModel
    leg_b: MorphismModel
    leg_c: MorphismModel
    probes: list[ProbeModel] = []


class PoModel(Model):
    f: MorphismModel
    generator: Optional[str] = None
    square: Optional[PushoutModel] = None
    comparison: MorphismModel


class ChainStepModel(Model):
    element: str
    kind: Literal['pushout', 'iso']
    morphism: MorphismModel
    square: Optional[PushoutModel] = None
    comparison: Optional[MorphismModel] = None
    link: Optional[PoModel] = None


class ChainModel(Model):
    stages: list[GraphModel]
    steps: list[ChainStepModel] = []


class CellModel(Model):
    generator: str
    g: MorphismModel
    attach: MorphismModel
    over: Optional[MorphismModel] = None


class StageModel(Model):
    cells: list[CellModel]
    square: PushoutModel


class PresentationModel(Model):
    base: GraphModel
    stages: list[StageModel] = []
    over: Optional[MorphismModel] = None


class SquareModel(Model):
    generator: str
    u: MorphismModel
    v: MorphismModel


class DiagonalModel(Model):
    square: SquareModel
    d: MorphismModel


class RlpModel(Model):
    holds: bool
    diagonals: list[DiagonalModel] = []
    counterexample: Optional[SquareModel] = None
    exhaustive: bool = True


class FatModel(Model):
    diagram: DiagramModel
    over: dict[str, MorphismModel]
    link_certificates: dict[str, PoModel]


class SplitModel(Model):
    e_obj: GraphModel
    e: MorphismModel
    r: MorphismModel


class LiftedModel(Model):
    s: dict[str, str]
    phi: dict[str, MorphismModel]


class RefactorModel(Model):
    h: MorphismModel
    stage: GraphModel
    stage_presentation: PresentationModel
    k: MorphismModel
    phi: MorphismModel
    stage_split: SplitModel
    square: PushoutModel
    comparison: MorphismModel
    split: SplitModel
    f: MorphismModel
    g: MorphismModel


class RetractStepModel(Model):
    segment: list[str]
    added: list[str]
    small: MorphismModel
    small_presentation: Optional[PresentationModel] = None
    attach: PushoutModel
    square: PushoutModel
    psi: MorphismModel
    split: SplitModel
    step: MorphismModel
    refactor: RefactorModel
    transport: MorphismModel
    link: MorphismModel


class StagedModel(Model):
    stages: DiagramModel
    legs: dict[str, MorphismModel]
    target: GraphModel


class Envelope(Model):
    cert_version: Literal[1]
    kind: str


class FactorizationModel(Envelope):
    kind: Literal['factorization']
    f: MorphismModel
    generators: GeneratorSetModel
    mode: Literal['fat', 'classical']
    status: Literal['converged', 'budget-exhausted']
    iterations: int
    stages: list[GraphModel]
    left: MorphismModel
    right: MorphismModel
    fat: Optional[FatModel] = None
    chain: Optional[ChainModel] = None
    presentation: Optional[PresentationModel] = None
    rlp: Optional[RlpModel] = None


class ChainCertModel(Envelope):
    kind: Literal['chain']
    diagram: DiagramModel
    generators: GeneratorSetModel
    chain: ChainModel


class PushoutCertModel(Envelope):
    kind: Literal['pushout']
    square: PushoutModel


class PushdownModel(Envelope):
    kind: Literal['pushdown']
    diagram: DiagramModel
    staged: StagedModel
    generators: GeneratorSetModel
    stage: str
    presentation: PresentationModel
    square: PushoutModel
    trace: list[str] = []


class RetractModel(Envelope):
    kind: Literal['retract']
    diagram: DiagramModel
    f: MorphismModel
    generators: GeneratorSetModel
    status: Literal['verified', 'inconclusive']
    split: SplitModel
    ambient: Optional[ChainModel] = None
    star: Optional[DiagramModel] = None
    lifted: Optional[LiftedModel] = None
    start: Optional[SplitModel] = None
    steps: list[RetractStepModel] = []
    comparison: Optional[MorphismModel] = None
    presentation: Optional[PresentationModel] = None
    trace: list[str] = []


CERTIFICATE_MODELS = {
    'factorization': FactorizationModel,
    'chain': ChainCertModel,
    'pushout': PushoutCertModel,
    'pushdown': PushdownModel,
    'retract': RetractModel,
}


#
# Values to models
#

def graph_model(g: Graph) -> GraphModel:
    return GraphModel(vertices=list(g.vertices), edges=list(g.edge_triples()))


def morphism_model(f: GraphMorphism) -> MorphismModel:
    return MorphismModel(dom=graph_model(f.dom), cod=graph_model(f.cod), vmap=dict(f.vmap), emap=dict(f.emap))


def _opt(convert, x):
    return None if x is None else convert(x)


def poset_model(p: FinitePoset) -> PosetModel:
    return PosetModel(elements=list(p.elements), covers=list(p.covers))


def diagram_model(d: PosetDiagram) -> DiagramModel:
    return DiagramModel(
        shape=poset_model(d.shape),
        objects={x: graph_model(g) for x, g in d.objects.items()},
        arrows=[ArrowModel(src=x, tgt=y, vmap=dict(m.vmap), emap=dict(m.emap))
                for (x, y), m in d.cover_arrows.items()],
    )


def generators_model(gs: GeneratorSet) -> GeneratorSetModel:
    return GeneratorSetModel(
        name=gs.name,
        members=[GeneratorModel(name=n, morphism=morphism_model(g)) for n, g in gs],
    )


def pushout_model(sq: PushoutCertificate) -> PushoutModel:
    return PushoutModel(
        f=morphism_model(sq.f), g=morphism_model(sq.g),
        leg_b=morphism_model(sq.leg_b), leg_c=morphism_model(sq.leg_c),
        probes=[ProbeModel(h_b=morphism_model(p.h_b), h_c=morphism_model(p.h_c), mediator=morphism_model(p.mediator))
                for p in sq.probes],
    )


def po_model(c: PoCertificate) -> PoModel:
    return PoModel(f=morphism_model(c.f), generator=c.generator, square=_opt(pushout_model, c.square),
                   comparison=morphism_model(c.comparison))


def chain_model(c: ChainPresentation) -> ChainModel:
    return ChainModel(
        stages=[graph_model(g) for g in c.stages],
        steps=[ChainStepModel(
            element=s.element, kind=s.kind, morphism=morphism_model(s.morphism),
            square=_opt(pushout_model, s.square), comparison=_opt(morphism_model, s.comparison),
            link=_opt(po_model, s.link),
        ) for s in c.steps],
    )


def presentation_model(c: CellComplexPresentation) -> PresentationModel:
    return PresentationModel(
        base=graph_model(c.base),
        stages=[StageModel(
            cells=[CellModel(generator=cell.generator, g=morphism_model(cell.g), attach=morphism_model(cell.attach),
                             over=_opt(morphism_model, cell.over)) for cell in s.cells],
            square=pushout_model(s.square),
        ) for s in c.stages],
        over=_opt(morphism_model, c.over),
    )


def _square_model(sq: Square) -> SquareModel:
    return SquareModel(generator=sq.generator, u=morphism_model(sq.u), v=morphism_model(sq.v))


def rlp_model(r: RlpReport) -> RlpModel:
    return RlpModel(
        holds=r.holds,
        diagonals=[DiagonalModel(square=_square_model(sq), d=morphism_model(d)) for sq, d in r.diagonals],
        counterexample=_opt(_square_model, r.counterexample),
        exhaustive=r.exhaustive,
    )


def _split_model(s: Split) -> SplitModel:
    return SplitModel(e_obj=graph_model(s.e_obj), e=morphism_model(s.e), r=morphism_model(s.r))


def factorization_model(c: FactorizationCertificate) -> FactorizationModel:
    fat = None
    if c.fat is not None:
        fat = FatModel(
            diagram=diagram_model(c.fat.diagram),
            over={x: morphism_model(m) for x, m in c.fat.over.items()},
            link_certificates={x: po_model(p) for x, p in c.fat.link_certificates.items()},
        )
    return FactorizationModel(
        cert_version=CERT_VERSION, kind='factorization',
        f=morphism_model(c.f), generators=generators_model(c.generators),
        mode=c.mode, status=c.status, iterations=c.iterations,
        stages=[graph_model(g) for g in c.stages],
        left=morphism_model(c.left), right=morphism_model(c.right),
        fat=fat, chain=_opt(chain_model, c.chain),
        presentation=_opt(presentation_model, c.presentation), rlp=_opt(rlp_model, c.rlp),
    )


def pushdown_model(c: PushdownCertificate, d: PosetDiagram, staged: StagedObject,
                   generators: GeneratorSet) -> PushdownModel:
    return PushdownModel(
        cert_version=CERT_VERSION, kind='pushdown',
        diagram=diagram_model(d),
        staged=StagedModel(stages=diagram_model(staged.stages),
                           legs={x: morphism_model(m) for x, m in staged.legs.items()},
                           target=graph_model(staged.target)),
        generators=generators_model(generators),
        stage=c.stage, presentation=presentation_model(c.presentation),
        square=pushout_model(c.square), trace=list(c.trace),
    )


def _refactor_model(r: RefactorCertificate) -> RefactorModel:
    return RefactorModel(
        h=morphism_model(r.h), stage=graph_model(r.stage), stage_presentation=presentation_model(r.stage_presentation),
        k=morphism_model(r.k), phi=morphism_model(r.phi), stage_split=_split_model(r.stage_split),
        square=pushout_model(r.square), comparison=morphism_model(r.comparison), split=_split_model(r.split),
        f=morphism_model(r.f), g=morphism_model(r.g),
    )


def retract_model(c: RetractCertificate) -> RetractModel:
    lifted = None
    if c.lifted is not None:
        lifted = LiftedModel(s=dict(c.lifted.s), phi={x: morphism_model(m) for x, m in c.lifted.phi.items()})
    return RetractModel(
        cert_version=CERT_VERSION, kind='retract',
        diagram=diagram_model(c.diagram), f=morphism_model(c.f), generators=generators_model(c.generators),
        status=c.status, split=_split_model(c.split),
        ambient=_opt(chain_model, c.ambient), star=_opt(diagram_model, c.star), lifted=lifted,
        start=_opt(_split_model, c.start),
        steps=[RetractStepModel(
            segment=list(s.segment), added=list(s.added), small=morphism_model(s.small),
            small_presentation=_opt(presentation_model, s.small_presentation),
            attach=pushout_model(s.attach), square=pushout_model(s.square), psi=morphism_model(s.psi),
            split=_split_model(s.split), step=morphism_model(s.step), refactor=_refactor_model(s.refactor),
            transport=morphism_model(s.transport), link=morphism_model(s.link),
        ) for s in c.steps],
        comparison=_opt(morphism_model, c.comparison),
        presentation=_opt(presentation_model, c.presentation),
        trace=list(c.trace),
    )


#
# Models to values.  Each converter takes a locator that prefixes the
# message of any error raised while rebuilding the value.
#

def _located(where: str, build, *args):
    try:
        return build(*args)
    except FormatError:
        raise
    except GoodColimError as err:
        raise FormatError(f'{where}: {err}') from err


def to_graph(m: GraphModel, where: str = 'graph') -> Graph:
    return _located(where, Graph, m.vertices, [tuple(t) for t in m.edges])


def to_morphism(m: MorphismModel, where: str = 'morphism') -> GraphMorphism:
    dom, cod = to_graph(m.dom, f'{where}.dom'), to_graph(m.cod, f'{where}.cod')
    return _located(where, GraphMorphism, dom, cod, m.vmap, m.emap)


def _opt_to(convert, m, where):
    return None if m is None else convert(m, where)


def to_poset(m: PosetModel, where: str = 'poset') -> FinitePoset:
    return _located(where, FinitePoset, m.elements, [tuple(c) for c in m.covers])


def to_diagram(m: DiagramModel, where: str = 'diagram', smooth: bool = False) -> PosetDiagram:
    shape = to_poset(m.shape, f'{where}.shape')
    objects = {x: to_graph(g, f'{where}.objects[{x}]') for x, g in m.objects.items()}
    arrows = {}
    for i, a in enumerate(m.arrows):
        if a.src not in objects or a.tgt not in objects:
            raise FormatError(f'{where}.arrows[{i}]: unknown element')
        arrows[(a.src, a.tgt)] = _located(f'{where}.arrows[{i}]', GraphMorphism,
                                          objects[a.src], objects[a.tgt], a.vmap, a.emap)
    cls = SmoothDiagram if smooth else PosetDiagram
    return _located(where, cls, shape, objects, arrows)


def to_generators(m: GeneratorSetModel, where: str = 'generators', limits: Limits | None = None) -> GeneratorSet:
    members = tuple((g.name, to_morphism(g.morphism, f'{where}.{g.name}')) for g in m.members)
    return _located(where, GeneratorSet, m.name, members, limits)


def to_pushout(m: PushoutModel, where: str = 'square') -> PushoutCertificate:
    probes = tuple(
        ProbeWitness(*(to_morphism(x, f'{where}.probes[{i}].{n}') for n, x in
                       (('h_b', p.h_b), ('h_c', p.h_c), ('mediator', p.mediator))))
        for i, p in enumerate(m.probes)
    )
    return PushoutCertificate(
        to_morphism(m.f, f'{where}.f'), to_morphism(m.g, f'{where}.g'),
        to_morphism(m.leg_b, f'{where}.leg_b'), to_morphism(m.leg_c, f'{where}.leg_c'), probes,
    )


def to_po(m: PoModel, where: str = 'po') -> PoCertificate:
    return PoCertificate(
        to_morphism(m.f, f'{where}.f'), m.generator,
        _opt_to(to_pushout, m.square, f'{where}.square'),
        to_morphism(m.comparison, f'{where}.comparison'),
    )


def to_chain(m: ChainModel, where: str = 'chain') -> ChainPresentation:
    steps = []
    for i, s in enumerate(m.steps):
        loc = f'{where}.steps[{i}]'
        steps.append(ChainStep(
            s.element, s.kind, to_morphism(s.morphism, f'{loc}.morphism'),
            _opt_to(to_pushout, s.square, f'{loc}.square'),
            _opt_to(to_morphism, s.comparison, f'{loc}.comparison'),
            _opt_to(to_po, s.link, f'{loc}.link'),
        ))
    return ChainPresentation(tuple(to_graph(g, f'{where}.stages[{i}]') for i, g in enumerate(m.stages)), tuple(steps))


def to_presentation(m: PresentationModel, where: str = 'presentation') -> CellComplexPresentation:
    stages = []
    for i, s in enumerate(m.stages):
        loc = f'{where}.stages[{i}]'
        cells = tuple(
            Cell(c.generator, to_morphism(c.g, f'{loc}.cells[{j}].g'), to_morphism(c.attach, f'{loc}.cells[{j}].attach'),
                 _opt_to(to_morphism, c.over, f'{loc}.cells[{j}].over'))
            for j, c in enumerate(s.cells)
        )
        stages.append(Stage(cells, to_pushout(s.square, f'{loc}.square')))
    return CellComplexPresentation(to_graph(m.base, f'{where}.base'), tuple(stages),
                                   _opt_to(to_morphism, m.over, f'{where}.over'))


def _to_square(m: SquareModel, where: str) -> Square:
    return Square(m.generator, to_morphism(m.u, f'{where}.u'), to_morphism(m.v, f'{where}.v'))


def to_rlp(m: RlpModel, where: str = 'rlp') -> RlpReport:
    diagonals = tuple(
        Diagonal(_to_square(d.square, f'{where}.diagonals[{i}]'), to_morphism(d.d, f'{where}.diagonals[{i}].d'))
        for i, d in enumerate(m.diagonals)
    )
    return RlpReport(m.holds, diagonals, _opt_to(_to_square, m.counterexample, f'{where}.counterexample'), m.exhaustive)


def _to_split(m: SplitModel, where: str) -> Split:
    return Split(to_graph(m.e_obj, f'{where}.e_obj'), to_morphism(m.e, f'{where}.e'), to_morphism(m.r, f'{where}.r'))


def to_factorization(m: FactorizationModel) -> FactorizationCertificate:
    fat = None
    if m.fat is not None:
        fat = FatDiagram(
            to_diagram(m.fat.diagram, 'fat.diagram', smooth=True),
            {x: to_morphism(f, f'over[{x}]') for x, f in m.fat.over.items()},
            {x: to_po(p, f'links[{x}]') for x, p in m.fat.link_certificates.items()},
        )
    return FactorizationCertificate(
        to_morphism(m.f, 'f'), to_generators(m.generators), m.mode, m.status, m.iterations,
        tuple(to_graph(g, f'stages[{i}]') for i, g in enumerate(m.stages)),
        to_morphism(m.left, 'left'), to_morphism(m.right, 'right'),
        fat=fat, chain=_opt_to(to_chain, m.chain, 'chain'),
        presentation=_opt_to(to_presentation, m.presentation, 'presentation'),
        rlp=_opt_to(to_rlp, m.rlp, 'rlp'),
    )


def _to_refactor(m: RefactorModel, c: CellComplexPresentation, where: str) -> RefactorCertificate:
    return RefactorCertificate(
        c, to_morphism(m.h, f'{where}.h'), to_graph(m.stage, f'{where}.stage'),
        to_presentation(m.stage_presentation, f'{where}.stage_presentation'),
        to_morphism(m.k, f'{where}.k'), to_morphism(m.phi, f'{where}.phi'),
        _to_split(m.stage_split, f'{where}.stage_split'), to_pushout(m.square, f'{where}.square'),
        to_morphism(m.comparison, f'{where}.comparison'), _to_split(m.split, f'{where}.split'),
        to_morphism(m.f, f'{where}.f'), to_morphism(m.g, f'{where}.g'),
    )


def to_retract(m: RetractModel) -> RetractCertificate:
    lifted = None
    if m.lifted is not None:
        lifted = LiftedIdempotent(dict(m.lifted.s), {x: to_morphism(f, f'lifted.phi[{x}]') for x, f in m.lifted.phi.items()})
    steps = []
    for i, s in enumerate(m.steps):
        loc = f'steps[{i}]'
        small_presentation = _opt_to(to_presentation, s.small_presentation, f'{loc}.small_presentation')
        steps.append(RetractStep(
            tuple(s.segment), tuple(s.added), to_morphism(s.small, f'{loc}.small'), small_presentation,
            to_pushout(s.attach, f'{loc}.attach'), to_pushout(s.square, f'{loc}.square'),
            to_morphism(s.psi, f'{loc}.psi'), _to_split(s.split, f'{loc}.split'), to_morphism(s.step, f'{loc}.step'),
            _to_refactor(s.refactor, small_presentation, f'{loc}.refactor'),
            to_morphism(s.transport, f'{loc}.transport'), to_morphism(s.link, f'{loc}.link'),
        ))
    return RetractCertificate(
        to_diagram(m.diagram, 'diagram', smooth=True), to_morphism(m.f, 'f'), to_generators(m.generators),
        m.status, _to_split(m.split, 'split'),
        _opt_to(to_chain, m.ambient, 'ambient'),
        None if m.star is None else to_diagram(m.star, 'star', smooth=True),
        lifted, _opt_to(_to_split, m.start, 'start'), tuple(steps),
        _opt_to(to_morphism, m.comparison, 'comparison'),
        _opt_to(to_presentation, m.presentation, 'presentation'),
        tuple(m.trace),
    )


#
# Files
#

def _parse(text: str, model: type[BaseModel], source: str = '<string>') -> BaseModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f'{source}: line {err.lineno}, column {err.colno}: {err.msg}') from err
    try:
        return model.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0]
        loc = '.'.join(str(x) for x in first['loc']) or '<root>'
        raise FormatError(f'{source}: {loc}: {first["msg"]}') from err


def _read(path: Path | str, model: type[BaseModel]) -> BaseModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise FormatError(f'{path}: {err.strerror}') from err
    logging.debug(f'read {path}')
    return _parse(text, model, str(path))


def dumps(model: BaseModel) -> str:
    '''
    Serialize a model with sorted keys and a trailing newline.
    '''
    return json.dumps(model.model_dump(mode='json', exclude_none=True), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def write(path: Path | str, model: BaseModel):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(model))
    logging.info(f'wrote {path}')


def load_graph(path: Path | str) -> Graph:
    return to_graph(_read(path, GraphModel), str(path))


def load_morphism(path: Path | str) -> GraphMorphism:
    '''
    Read a morphism file (corpus instance files may add a name and a note).

    Raises:
      FormatError: bad JSON, a missing field, or a map that is not a morphism
    '''
    return to_morphism(_read(path, InstanceModel), str(path))


def load_poset(path: Path | str) -> FinitePoset:
    return to_poset(_read(path, PosetModel), str(path))


def load_diagram(path: Path | str) -> PosetDiagram:
    return to_diagram(_read(path, DiagramModel), str(path))


def load_generators(path: Path | str, limits: Limits | None = None) -> GeneratorSet:
    return to_generators(_read(path, GeneratorSetModel), str(path), limits)


def load_staged(path: Path | str) -> StagedObject:
    m = _read(path, StagedModel)
    stages = to_diagram(m.stages, 'stages')
    legs = {x: to_morphism(f, f'legs[{x}]') for x, f in m.legs.items()}
    return _located(str(path), StagedObject, stages, legs, to_graph(m.target, 'target'))


class Document(NamedTuple):
    '''
    A loaded certificate and what is needed to check it: the kind, the
    certificate and (for pushdown and chain certificates) the inputs.
    '''
    kind: str
    certificate: Any
    context: dict


def parse_certificate(text: str, source: str = '<string>') -> Document:
    '''
    Parse a certificate file of any kind.

    Raises:
      FormatError: unknown kind or version, bad JSON, or a malformed witness
    '''
    head = _parse(text, _Head, source)
    if head.cert_version != CERT_VERSION:
        raise FormatError(f'{source}: unsupported cert_version {head.cert_version}')
    if head.kind not in CERTIFICATE_MODELS:
        raise FormatError(f'{source}: unknown certificate kind {head.kind}')
    m = _parse(text, CERTIFICATE_MODELS[head.kind], source)
    match head.kind:
        case 'factorization':
            return Document('factorization', to_factorization(m), {})
        case 'retract':
            return Document('retract', to_retract(m), {})
        case 'pushout':
            return Document('pushout', to_pushout(m.square), {})
        case 'chain':
            return Document('chain', to_chain(m.chain), {
                'diagram': to_diagram(m.diagram), 'generators': to_generators(m.generators)})
        case 'pushdown':
            stages = to_diagram(m.staged.stages, 'staged.stages')
            legs = {x: to_morphism(f, f'staged.legs[{x}]') for x, f in m.staged.legs.items()}
            staged = _located('staged', StagedObject, stages, legs, to_graph(m.staged.target, 'staged.target'))
            cert = PushdownCertificate(m.stage, to_presentation(m.presentation), to_pushout(m.square), tuple(m.trace))
            return Document('pushdown', cert, {
                'diagram': to_diagram(m.diagram), 'staged': staged, 'generators': to_generators(m.generators)})


def load_certificate(path: Path | str) -> Document:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise FormatError(f'{path}: {err.strerror}') from err
    return parse_certificate(text, str(path))


class _Head(BaseModel):
    model_config = ConfigDict(extra='allow')
    cert_version: int
    kind: str
