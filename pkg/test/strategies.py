#
# Hypothesis strategies shared by the property tests
#

import hypothesis.strategies as st

from goodcolim.posets import FinitePoset

@st.composite
def good_posets(draw, max_size=6):
    '''
    Posets on "0".."n-1" where every element except "0" has one or two
    lower covers among the earlier ones, so "0" is the least element.
    '''
    n = draw(st.integers(1, max_size))
    covers = []
    for i in range(1, n):
        below = draw(st.sets(st.integers(0, i - 1), min_size=1, max_size=2))
        covers += [(str(j), str(i)) for j in sorted(below)]
    return FinitePoset([str(i) for i in range(n)], covers)
