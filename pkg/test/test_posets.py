#
# Unit and property tests for finite posets
#

import hypothesis
import pytest

from goodcolim.posets import (
    FinitePoset,
    InitialSegment,
    PosetError,
    chain,
    classify_element,
    diamond,
    directed_completion,
    initial_segments,
    is_closed,
    is_good,
    is_kappa_good_and_directed,
    parse_kappa,
    plus_step,
    sort_ids,
    span,
    strong_closure,
    up_set,
)

from .strategies import good_posets

def test_order():
    '''
    The order is the closure of the given pairs; covers are its reduction.
    '''
    p = FinitePoset(['a', 'b', 'c'], [('a', 'b'), ('b', 'c'), ('a', 'c')])
    assert p.covers == (('a', 'b'), ('b', 'c'))
    assert p.leq('a', 'c')
    assert not p.leq('c', 'a')
    assert p.strictly_below('c') == {'a', 'b'}
    with pytest.raises(PosetError):
        FinitePoset(['a', 'b'], [('a', 'b'), ('b', 'a')])
    with pytest.raises(PosetError):
        p.leq('a', 'z')

def test_natural_order():
    '''
    Ids with numbers sort numerically.
    '''
    assert sort_ids(['v10', 'v2', 'e1', 'v1']) == ['e1', 'v1', 'v2', 'v10']
    assert chain(12).linear_extension()[-3:] == ['9', '10', '11']

def test_classify():
    '''
    Bottom, isolated and limit elements of the diamond.
    '''
    d = diamond()
    assert classify_element(d, 'bot').kind == 'bottom'
    assert classify_element(d, 'a') == ('isolated', 'bot')
    assert classify_element(d, 't').kind == 'limit'
    assert classify_element(chain(3), '2') == ('isolated', '1')
    with pytest.raises(PosetError):
        classify_element(FinitePoset(['a', 'b']), 'a')

def test_good():
    assert is_good(span()) == (True, 'b')
    assert is_good(FinitePoset(['a', 'b'])).good is False

def test_kappa():
    '''
    Cardinal markers and the two size conditions.
    '''
    assert parse_kappa('ω') == 'omega'
    assert parse_kappa('3') == 3
    with pytest.raises(PosetError):
        parse_kappa('0')
    with pytest.raises(PosetError):
        parse_kappa('aleph')
    assert is_kappa_good_and_directed(chain(3)) == (True, True)
    assert is_kappa_good_and_directed(chain(3), 2) == (False, True)
    assert is_kappa_good_and_directed(span()) == (True, False)

def test_directed_completion():
    '''
    A span gets a new top; a directed poset is left alone.
    '''
    p = directed_completion(span())
    assert p.greatest() == 'top'
    assert set(p.lower_covers('top')) == {'x', 'y'}
    assert directed_completion(diamond()) == diamond()

def test_plus_step():
    '''
    One new limit element for every segment without a greatest element.
    '''
    result, markers = plus_step(span())
    assert result.elements == ('b', 'p0', 'x', 'y')
    assert markers['p0'].members == {'b', 'x', 'y'}
    assert classify_element(result, 'p0').kind == 'limit'
    result, markers = plus_step(diamond())
    assert list(markers) == ['p0']
    assert markers['p0'].members == {'bot', 'a', 'b'}

def test_segments():
    '''
    Initial segments of a span, smallest first.
    '''
    segs = initial_segments(span())
    assert [sorted(s.members) for s in segs] == [[], ['b'], ['b', 'x'], ['b', 'y'], ['b', 'x', 'y']]
    with pytest.raises(PosetError):
        InitialSegment(diamond(), frozenset({'a'}))
    assert set(up_set(diamond(), 'a').elements) == {'a', 't'}

def test_strong_closure():
    '''
    The top of the diamond is a strong upper bound of {bot, a, b}.
    '''
    closure, bounds = strong_closure(diamond(), {'bot', 'a', 'b'})
    assert closure.members == {'bot', 'a', 'b', 't'}
    assert bounds['t'].members == {'bot', 'a', 'b'}
    assert is_closed(diamond(), {'bot', 'a'})
    assert not is_closed(diamond(), {'bot', 'a', 'b'})

@hypothesis.given(good_posets())
@hypothesis.settings(deadline=None)
def test_linear_extension(p):
    '''
    The linear extension lists every element after everything below it.
    '''
    order = p.linear_extension()
    assert sorted(order) == sorted(p.elements)
    position = {x: i for i, x in enumerate(order)}
    for x, y in p.covers:
        assert position[x] < position[y]
    assert order[0] == '0'

@hypothesis.given(good_posets())
@hypothesis.settings(deadline=None)
def test_completions(p):
    '''
    Both completions keep p as an initial segment; the new elements are limit.
    '''
    q = directed_completion(p)
    assert q.greatest() is not None
    assert q.is_initial_segment(p.elements)
    result, markers = plus_step(p)
    assert result.is_initial_segment(p.elements)
    for name, seg in markers.items():
        assert classify_element(result, name).kind == 'limit'
        assert result.strictly_below(name) == seg.members

@hypothesis.given(good_posets())
@hypothesis.settings(deadline=None)
def test_closure_is_closed(p):
    '''
    Strong closure adds only limit elements and is idempotent.
    '''
    for seg in initial_segments(p):
        if not seg.members:
            continue
        closure, bounds = strong_closure(p, seg)
        assert is_closed(p, closure)
        for x in bounds:
            assert classify_element(p, x).kind == 'limit'
