#
# Tests for the command line: exit codes, reports and certificate files
#

import json
import os
from pathlib import Path

import pytest

from goodcolim.config import GC
from goodcolim.suite import PropertyResult, SuiteReport
from main import main

@pytest.fixture
def fixtures():
    return Path(os.path.dirname(__file__)) / 'fixtures'

@pytest.fixture(autouse=True)
def restore_settings():
    '''
    main calls GC.setup; put the defaults back afterwards.
    '''
    yield
    GC.setup()

def run(capsys, *argv):
    '''
    Run the command line with --json and return the exit code and the parsed report.
    '''
    code = main(['--json', *map(str, argv)])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None

def test_factorize_and_verify(fixtures, tmp_path, capsys):
    cert = tmp_path / 'cert.json'
    code, report = run(capsys, 'factorize', fixtures / 'empty_to_E1.json', '--out', cert)
    assert code == 0
    [outcome] = report['outcomes']
    assert outcome['instance'] == 'empty_to_E1'
    assert outcome['outcome'] == 'converged'
    assert outcome['counts'] == {'iterations': 3}
    assert 'seconds' not in outcome
    assert report['command'][:2] == ['goodcolim', '--json']
    assert json.loads(cert.read_text())['kind'] == 'factorization'
    code, report = run(capsys, 'verify', cert)
    assert code == 0
    assert report['outcomes'][0]['outcome'] == 'verified'

def test_report_is_deterministic(fixtures, tmp_path, capsys):
    argv = ['factorize', fixtures / 'empty_to_E1.json', '--mode', 'classical', '--out', tmp_path / 'c.json']
    main(['--json', *map(str, argv)])
    first = capsys.readouterr().out
    text = (tmp_path / 'c.json').read_text()
    main(['--json', *map(str, argv)])
    assert capsys.readouterr().out == first
    assert (tmp_path / 'c.json').read_text() == text

def test_several_inputs(fixtures, tmp_path, capsys):
    code, report = run(capsys, 'factorize', fixtures / 'V2_to_V1.json', fixtures / 'empty_to_E1.json',
                       '--out', tmp_path)
    assert code == 0
    assert [o['instance'] for o in report['outcomes']] == ['V2_to_V1', 'empty_to_E1']
    assert (tmp_path / 'V2_to_V1.fat.json').exists()
    assert (tmp_path / 'empty_to_E1.fat.json').exists()

def test_budget_exhausted(fixtures, tmp_path, capsys):
    code, report = run(capsys, '--budget', '1', 'factorize', fixtures / 'empty_to_E1.json',
                       '--out', tmp_path / 'c.json')
    assert code == 2
    assert report['outcomes'][0]['outcome'] == 'budget-exhausted'

def test_tampered_certificate(fixtures, tmp_path, capsys):
    '''
    A certificate whose input no longer matches its parts fails with a locator.
    '''
    cert = tmp_path / 'cert.json'
    run(capsys, 'factorize', fixtures / 'empty_to_E1.json', '--out', cert)
    data = json.loads(cert.read_text())
    data['f'] = data['right']
    cert.write_text(json.dumps(data))
    code, report = run(capsys, 'verify', cert)
    assert code == 1
    assert report['outcomes'][0]['locator'] == 'verify:cert:composition'

def test_bad_input(fixtures, tmp_path, capsys):
    code, report = run(capsys, 'factorize', fixtures / 'malformed.json', '--out', tmp_path / 'c.json')
    assert code == 1
    outcome = report['outcomes'][0]
    assert outcome['locator'] == 'factorize:malformed:input'
    assert 'line 3' in outcome['message']

def test_bad_limits(fixtures, capsys):
    assert main(['--max-vertices', '0', 'factorize', str(fixtures / 'empty_to_E1.json')]) == 1

def test_generators_over_limit(fixtures, capsys):
    '''
    X_std does not fit a one-vertex bound; the report says so.
    '''
    code, report = run(capsys, '--max-vertices', '1', 'factorize', fixtures / 'empty_to_E1.json')
    assert code == 1
    assert report['outcomes'][0]['locator'] == 'factorize:generators:input'

def test_complete_poset(fixtures, tmp_path, capsys):
    out = tmp_path / 'p.json'
    code, report = run(capsys, 'complete-poset', fixtures / 'span_poset.json', '--out', out)
    assert code == 0
    counts = report['outcomes'][0]['counts']
    assert counts['added'] == 1
    assert counts['good_before'] == 1 and counts['directed_before'] == 0
    assert counts['good_after'] == 1 and counts['directed_after'] == 1
    assert len(json.loads(out.read_text())['elements']) == 4
    code, report = run(capsys, 'complete-poset', fixtures / 'span_poset.json', '--plus', '--out', out)
    assert code == 0
    assert report['outcomes'][0]['counts']['added'] > 0

def test_linearize(fixtures, tmp_path, capsys):
    out = tmp_path / 'chain.json'
    code, report = run(capsys, 'linearize', fixtures / 'chain_vertex_edge.json', '--out', out)
    assert code == 0
    assert report['outcomes'][0]['counts'] == {'stages': 3, 'pushouts': 2}
    code, _ = run(capsys, 'verify', out)
    assert code == 0

def test_linearize_broken(fixtures, tmp_path, capsys):
    code, report = run(capsys, 'linearize', fixtures / 'broken_diamond.json', '--out', tmp_path / 'c.json')
    assert code == 1
    outcome = report['outcomes'][0]
    assert outcome['locator'] == 'linearize:broken_diamond:validate_smooth'
    assert outcome['message'].startswith('limit element 3')

def test_pushdown(fixtures, tmp_path, capsys):
    out = tmp_path / 'pd.json'
    code, report = run(capsys, 'pushdown', fixtures / 'two_vertices.json', fixtures / 'vertex_stages.json',
                       '--out', out)
    assert code == 0
    assert report['outcomes'][0]['counts'] == {'cells': 1}
    code, _ = run(capsys, 'verify', out)
    assert code == 0

def test_eliminate_retract(fixtures, tmp_path, capsys):
    out = tmp_path / 'r.json'
    code, report = run(capsys, 'eliminate-retract', fixtures / 'two_vertices.json',
                       fixtures / 'fold_idempotent.json', '--out', out)
    assert code == 0
    assert report['outcomes'][0]['outcome'] == 'verified'
    code, _ = run(capsys, 'verify', out)
    assert code == 0
    code, report = run(capsys, '--budget', '0', 'eliminate-retract', fixtures / 'two_vertices.json',
                       fixtures / 'fold_idempotent.json', '--out', out)
    assert code == 2
    assert report['outcomes'][0]['outcome'] == 'inconclusive'

def test_suite_missing_corpus(tmp_path, capsys):
    code, report = run(capsys, '--corpus', tmp_path / 'nowhere', 'suite')
    assert code == 1
    assert report['outcomes'][0]['locator'] == 'suite:corpus:input'

def test_suite_failure(fixtures, capsys, monkeypatch):
    '''
    A failing property is reported at its first failing case.
    '''
    def fake_suite(corpus, seed, sizes, count, budget=None, limits=None):
        assert corpus == fixtures / 'broken_corpus'
        return SuiteReport(seed, [
            PropertyResult('linearization', count, ()),
            PropertyResult('corpus-diagrams', 1, ('corpus-diagrams[broken_diamond]: validate_smooth: limit element 3',)),
        ])
    monkeypatch.setattr('goodcolim.cli.run_suite', fake_suite)
    code, report = run(capsys, '--corpus', fixtures / 'broken_corpus', 'suite', '--count', '4')
    assert code == 1
    outcomes = {o['instance']: o for o in report['outcomes']}
    assert outcomes['linearization']['counts'] == {'instances': 4}
    assert outcomes['corpus-diagrams']['locator'] == 'suite:corpus-diagrams[broken_diamond]'

def test_suite_end_to_end(capsys):
    '''
    Thirty random diagrams of up to six elements go through every property
    and the run ends in a report.
    '''
    corpus = Path(os.path.dirname(__file__)).parent / 'corpus'
    code, report = run(capsys, '--corpus', corpus, '--seed', '5', 'suite', '--count', '30', '--sizes', '6')
    assert code in (0, 1)
    assert report is not None
    outcomes = {o['instance']: o for o in report['outcomes']}
    assert set(outcomes) >= {'linearization', 'limit-extension', 'mono-oracle', 'composite-lifting',
                             'pushdown', 'retract-elimination', 'factorization', 'corpus-diagrams'}
    for name in ('linearization', 'limit-extension'):
        assert outcomes[name]['outcome'] == 'verified', outcomes[name]
        assert outcomes[name]['counts'] == {'instances': 30}
    assert not any('unexpected' in (o.get('message') or '') for o in report['outcomes'])

def test_edited_pushout(fixtures, tmp_path, capsys):
    '''
    Collapsing a leg of the first pushout square is caught at that square.
    '''
    cert = tmp_path / 'cert.json'
    run(capsys, 'factorize', fixtures / 'empty_to_E1.json', '--mode', 'classical', '--out', cert)
    data = json.loads(cert.read_text())
    vmap = data['presentation']['stages'][0]['square']['leg_c']['vmap']
    first = min(vmap.values())
    for v in vmap:
        vmap[v] = first
    cert.write_text(json.dumps(data))
    code, report = run(capsys, 'verify', cert)
    assert code == 1
    assert report['outcomes'][0]['locator'].startswith('verify:cert:presentation.stages[0]')
