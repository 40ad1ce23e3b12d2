#
# Command line operations.  Each cmd_ function loads its inputs, runs
# one library operation, writes the certificate and returns a RunReport.
# src/main.py parses arguments and prints the report.
#

import json
import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Literal, Optional

from pydantic import BaseModel, ConfigDict, model_validator
from rich.console import Console
from rich.table import Table

from .config import GC, GoodColimError, Limits
from .diagrams import NotSmoothError, linearize
from .graphcat import BoundExceeded, GraphError, colimit_over_poset, is_isomorphic
from .posets import PosetError, directed_completion, is_kappa_good_and_directed, parse_kappa, plus_step
from .serialize import (
    CERT_VERSION,
    ChainCertModel,
    FormatError,
    chain_model,
    diagram_model,
    factorization_model,
    generators_model,
    load_certificate,
    load_diagram,
    load_generators,
    load_morphism,
    load_poset,
    load_staged,
    poset_model,
    pushdown_model,
    retract_model,
    write,
)
from .soa.factorize import factorize
from .soa.lifting import CertificateError, standard_generators
from .soa.pushdown import push_down_cells
from .soa.retracts import eliminate_retract
from .suite import run_suite

Outcome = Literal['converged', 'budget-exhausted', 'verified', 'inconclusive', 'failed']

EXIT_CODES = {
    'converged': 0,
    'verified': 0,
    'budget-exhausted': 2,
    'inconclusive': 2,
    'failed': 1,
}


class InstanceOutcome(BaseModel):
    """
    The result for one instance.  A failed outcome always has a locator
    of the form `operation:instance:witness`.
    """
    model_config = ConfigDict(extra='forbid')

    instance: str
    outcome: Outcome
    locator: Optional[str] = None
    message: Optional[str] = None
    certificate: Optional[str] = None
    counts: Optional[dict[str, int]] = None
    seconds: float = 0.0

    @model_validator(mode='after')
    def _failure_has_locator(self):
        if self.outcome == 'failed' and not self.locator:
            raise ValueError('a failed outcome needs a locator')
        return self


class RunReport(BaseModel):
    """
    What a command did: the command line that ran and one outcome per
    instance, kept sorted by instance id.
    """
    command: list[str]
    outcomes: list[InstanceOutcome] = []

    def add(self, outcome: InstanceOutcome):
        self.outcomes.append(outcome)
        self.outcomes.sort(key=lambda o: o.instance)

    @property
    def exit_code(self) -> int:
        '''
        1 if anything failed, otherwise 2 if anything ran out of budget, otherwise 0.
        '''
        codes = {EXIT_CODES[o.outcome] for o in self.outcomes}
        if 1 in codes:
            return 1
        return 2 if 2 in codes else 0

    def to_json(self) -> str:
        '''
        The report as JSON.  Timing is left out so repeated runs give
        identical text.
        '''
        data = self.model_dump(mode='json', exclude_none=True, exclude={'outcomes': {'__all__': {'seconds'}}})
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'

    def render(self, console: Console | None = None):
        console = console or Console()
        table = Table(title=' '.join(self.command))
        for col in ['instance', 'outcome', 'detail', 'sec']:
            table.add_column(col, justify='right' if col == 'sec' else 'left')
        styles = {0: 'green', 1: 'red', 2: 'yellow'}
        for o in self.outcomes:
            detail = o.locator or ''
            if o.message:
                detail = f'{detail} {o.message}'.strip()
            if o.counts:
                detail = ', '.join(f'{k}={v}' for k, v in sorted(o.counts.items())) + (f' {detail}' if detail else '')
            if o.certificate:
                detail = f'{detail} → {o.certificate}'.strip()
            style = styles[EXIT_CODES[o.outcome]]
            table.add_row(o.instance, f'[{style}]{o.outcome}[/{style}]', detail, f'{o.seconds:.2f}')
        console.print(table)


def _attempt(report: RunReport, operation: str, instance: str, body: Callable[[], InstanceOutcome]):
    '''
    Run body, time it and record its outcome.  Library errors become a
    failed outcome whose locator names the operation, the instance and
    (when the error carries one) the witness.
    '''
    start = time.perf_counter()
    try:
        outcome = body()
    except CertificateError as err:
        logging.error(f'{operation} {instance}: {err}')
        outcome = InstanceOutcome(instance=instance, outcome='failed',
                                  locator=f'{operation}:{instance}:{err.locator}', message=str(err))
    except NotSmoothError as err:
        logging.error(f'{operation} {instance}: {err}')
        outcome = InstanceOutcome(instance=instance, outcome='failed',
                                  locator=f'{operation}:{instance}:validate_smooth', message=err.violations[0])
    except (FormatError, GraphError, PosetError, BoundExceeded) as err:
        logging.error(f'{operation} {instance}: {err}')
        outcome = InstanceOutcome(instance=instance, outcome='failed',
                                  locator=f'{operation}:{instance}:input', message=str(err))
    except GoodColimError as err:
        logging.error(f'{operation} {instance}: {err}')
        outcome = InstanceOutcome(instance=instance, outcome='failed',
                                  locator=f'{operation}:{instance}:{type(err).__name__}', message=str(err))
    outcome.seconds = time.perf_counter() - start
    report.add(outcome)


def _generators(path: Path | str | None, limits: Limits | None = None):
    return standard_generators(limits) if path is None else load_generators(path, limits)


def _out(out: Path | str | None, instance: str, suffix: str) -> Path:
    return Path(out) if out else Path.cwd() / f'{instance}.{suffix}.json'


def cmd_factorize(
    inputs: list[Path | str],
    generators: Path | str | None = None,
    mode: str = 'fat',
    budget: int | None = None,
    out: Path | str | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Factor every input morphism and write one certificate per input.

    Arguments:
      inputs: morphism files
      generators: generator set file (X_std when omitted)
      mode: 'fat' or 'classical'
      budget: iteration budget (GC.budget when omitted)
      out: certificate path (a directory when there are several inputs)
      limits: search bounds

    Returns:
      a report with outcome converged or budget-exhausted per input
    '''
    report = RunReport(command=command or ['factorize'])
    limits = GC.resolve(limits)
    budget = GC.budget if budget is None else budget
    try:
        gens = _generators(generators, limits)
    except GoodColimError as err:
        logging.error(err)
        report.add(InstanceOutcome(instance='generators', outcome='failed',
                                   locator='factorize:generators:input', message=str(err)))
        return report

    for path in inputs:
        name = Path(path).stem

        def body(path=path, name=name):
            f = load_morphism(path)
            cert = factorize(f, gens, mode, budget, limits)
            if out and len(inputs) > 1:
                target = Path(out) / f'{name}.{mode}.json'
            else:
                target = _out(out, name, mode)
            write(target, factorization_model(cert))
            logging.info(f'{name}: {cert.status} after {cert.iterations} iterations')
            return InstanceOutcome(instance=name, outcome=cert.status, certificate=str(target),
                                   counts={'iterations': cert.iterations})

        _attempt(report, 'factorize', name, body)
    return report


def cmd_verify(
    certificates: list[Path | str],
    generators: Path | str | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Recompute every witness in each certificate file.  When a generator
    file is given the certificate must have been made with that set.

    Returns:
      a report with outcome verified or failed (with the witness locator)
    '''
    report = RunReport(command=command or ['verify'])
    limits = GC.resolve(limits)
    expected = None if generators is None else load_generators(generators, limits)

    for path in certificates:
        name = Path(path).stem

        def body(path=path, name=name):
            doc = load_certificate(path)
            cert = doc.certificate
            gens = getattr(cert, 'generators', None) or doc.context.get('generators')
            if expected is not None and gens is not None and gens != expected:
                raise CertificateError('generators', f'certificate uses {gens.name}, not {expected.name}')
            with _located_failures():
                match doc.kind:
                    case 'factorization':
                        cert.verify(limits)
                    case 'retract':
                        cert.verify()
                    case 'pushout':
                        cert.verify('square')
                    case 'pushdown':
                        cert.verify(doc.context['diagram'], doc.context['staged'], gens)
                    case 'chain':
                        _verify_chain(cert, doc.context['diagram'])
            logging.info(f'{name}: {doc.kind} certificate verified')
            return InstanceOutcome(instance=name, outcome='verified', message=doc.kind)

        _attempt(report, 'verify', name, body)
    return report


@contextmanager
def _located_failures():
    '''
    Turn a library error raised while checking a witness into a
    CertificateError.  Messages of the checks start with the location of
    the witness (`chain.steps[2].square: ...`), which becomes the locator.
    '''
    try:
        yield
    except CertificateError:
        raise
    except GoodColimError as err:
        where, sep, message = str(err).partition(': ')
        if not sep or ' ' in where:
            where, message = 'witness', str(err)
        raise CertificateError(where, message) from err


def _verify_chain(chain, d):
    chain.verify('chain')
    if chain.stages[0] != d.objects[d.bottom]:
        raise CertificateError('chain.stages[0]', 'is not the least object of the diagram')
    if not is_isomorphic(chain.stages[-1], colimit_over_poset(d).apex):
        raise CertificateError('chain.stages[-1]', 'is not the colimit of the diagram')


def cmd_linearize(
    diagram: Path | str,
    generators: Path | str | None = None,
    out: Path | str | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Rewrite a good diagram as a chain of pushouts and isomorphisms and
    write the chain certificate.
    '''
    report = RunReport(command=command or ['linearize'])
    name = Path(diagram).stem

    def body():
        gens = _generators(generators, GC.resolve(limits))
        d = load_diagram(diagram)
        chain = linearize(d, gens, limits=GC.resolve(limits))
        target = _out(out, name, 'chain')
        write(target, ChainCertModel(cert_version=CERT_VERSION, kind='chain', diagram=diagram_model(d),
                                     generators=generators_model(gens), chain=chain_model(chain)))
        return InstanceOutcome(instance=name, outcome='verified', certificate=str(target),
                               counts={'stages': len(chain.stages), 'pushouts': chain.pushout_steps()})

    _attempt(report, 'linearize', name, body)
    return report


def cmd_complete_poset(
    poset: Path | str,
    kappa: str = 'omega',
    plus: bool = False,
    out: Path | str | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Extend a good poset to a directed one, either by adding one top
    element or (with plus) by one plus step, and write the result.
    The report records the cardinality conditions before and after.
    '''
    report = RunReport(command=command or ['complete-poset'])
    name = Path(poset).stem

    def body():
        k = parse_kappa(kappa)
        p = load_poset(poset)
        before = is_kappa_good_and_directed(p, k)
        if plus:
            result = plus_step(p, k).poset
        else:
            result = directed_completion(p)
        after = is_kappa_good_and_directed(result, k)
        target = _out(out, name, 'plus' if plus else 'completed')
        write(target, poset_model(result))
        counts = {
            'elements': len(result.elements),
            'added': len(result.elements) - len(p.elements),
            'good_before': int(before.kappa_good),
            'directed_before': int(before.kappa_directed),
            'good_after': int(after.kappa_good),
            'directed_after': int(after.kappa_directed),
        }
        return InstanceOutcome(instance=name, outcome='verified', certificate=str(target), counts=counts)

    _attempt(report, 'complete-poset', name, body)
    return report


def cmd_pushdown(
    diagram: Path | str,
    staged: Path | str,
    generators: Path | str | None = None,
    out: Path | str | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Push the cells of a diagram down to a stage of its least object and
    write the pushdown certificate.
    '''
    report = RunReport(command=command or ['pushdown'])
    name = Path(diagram).stem

    def body():
        gens = _generators(generators, GC.resolve(limits))
        d = load_diagram(diagram)
        s = load_staged(staged)
        cert = push_down_cells(d, s, gens, limits=GC.resolve(limits))
        target = _out(out, name, 'pushdown')
        write(target, pushdown_model(cert, d, s, gens))
        return InstanceOutcome(instance=name, outcome='verified', certificate=str(target),
                               counts={'cells': cert.presentation.cell_count()}, message=f'stage {cert.stage}')

    _attempt(report, 'pushdown', name, body)
    return report


def cmd_eliminate_retract(
    diagram: Path | str,
    idempotent: Path | str,
    generators: Path | str | None = None,
    budget: int | None = None,
    out: Path | str | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Present the image of an idempotent on the colimit of a good diagram
    as a cell complex and write the retract certificate.  An exhausted
    search is reported as inconclusive (exit code 2).
    '''
    report = RunReport(command=command or ['eliminate-retract'])
    name = Path(diagram).stem

    def body():
        gens = _generators(generators, GC.resolve(limits))
        d = load_diagram(diagram)
        f = load_morphism(idempotent)
        cert = eliminate_retract(d, f, gens, GC.budget if budget is None else budget, GC.resolve(limits))
        target = _out(out, name, 'retract')
        write(target, retract_model(cert))
        counts = {'steps': len(cert.steps)}
        if cert.presentation is not None:
            counts['cells'] = cert.presentation.cell_count()
        return InstanceOutcome(instance=name, outcome=cert.status, certificate=str(target), counts=counts,
                               message=cert.trace[-1] if cert.status == 'inconclusive' and cert.trace else None)

    _attempt(report, 'eliminate-retract', name, body)
    return report


def cmd_suite(
    corpus: Path | str | None = None,
    seed: int | None = None,
    sizes: int = 6,
    count: int = 200,
    budget: int | None = None,
    limits: Limits | None = None,
    command: list[str] | None = None,
) -> RunReport:
    '''
    Run the property suite.  Each property is one instance of the report;
    a failing property is located at its first failing case.
    '''
    report = RunReport(command=command or ['suite'])
    corpus = Path(corpus) if corpus else GC.corpus_dir
    if corpus is not None and not corpus.is_dir():
        report.add(InstanceOutcome(instance='corpus', outcome='failed', locator='suite:corpus:input',
                                   message=f'{corpus}: not a directory'))
        return report
    start = time.perf_counter()
    result = run_suite(corpus, seed, sizes, count, budget=budget, limits=GC.resolve(limits))
    logging.info(f'suite: seed {result.seed}, {time.perf_counter() - start:.1f} sec')
    for r in result.results:
        if r.ok:
            report.add(InstanceOutcome(instance=r.name, outcome='verified', counts={'instances': r.instances}))
        else:
            first = r.failures[0]
            case = first.split(':', 1)[0]
            report.add(InstanceOutcome(instance=r.name, outcome='failed', counts={'instances': r.instances,
                                       'failures': len(r.failures)}, locator=f'suite:{case}', message=first))
    return report
