import random

import pytest
from hypothesis import given, strategies as st

from knotmove.canon import canonicalize
from knotmove.catalog import builtin
from knotmove.diagram import linking_matrix
from knotmove.moves import find_sites
from knotmove.randomgen import braid_closure, grid_word, random_diagram, random_with_site

from strategies import seeds

words = st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n - 1).flatmap(lambda g: st.sampled_from([g, -g])),
                                             max_size=10)))


def cycles(word, n):
    perm = list(range(n))
    for g in word:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, count = set(), 0
    for s in range(n):
        if s not in seen:
            count += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
    return count


@given(words)
def test_components_are_permutation_cycles(nw):
    n, word = nw
    d = braid_closure(word, n)
    assert d.n_components == cycles(word, n)
    assert d.n_crossings == len(word)


@given(words)
def test_writhe_is_exponent_sum(nw):
    n, word = nw
    assert braid_closure(word, n).writhe() == sum(1 if g > 0 else -1 for g in word)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_torus_links(k):
    m = linking_matrix(braid_closure([1] * (2 * k), 2))
    assert m[m.labels[0], m.labels[1]] == k


def test_trefoils():
    assert canonicalize(braid_closure([1, 1, 1], 2)) == canonicalize(builtin("trefoil_R"))
    assert canonicalize(braid_closure([-1, -1, -1], 2)) == canonicalize(builtin("trefoil_L"))
    # a different drawing of the figure eight, so compare an invariant
    from knotmove.arf import knot_determinant

    assert knot_determinant(braid_closure([1, -2, 1, -2], 3)) == 5


def test_out_of_range():
    with pytest.raises(ValueError):
        braid_closure([3], 3)


def test_grid_word_has_a_site():
    for sign in (1, -1):
        d = braid_closure(grid_word(1, sign), 4)
        assert find_sites(d)


@given(seeds)
def test_deterministic(seed):
    a = random_diagram(random.Random(seed), 4, 6, grid=True)
    b = random_diagram(random.Random(seed), 4, 6, grid=True)
    assert a == b


@given(seeds, st.sampled_from([None, "pass", "sharp", "onetwo"]))
def test_random_with_site(seed, kind):
    d, sites = random_with_site(random.Random(seed), kind, proper=False)
    assert sites and all(s.diagram is d for s in sites)
    if kind:
        assert {s.kind.value for s in sites} == {kind}
