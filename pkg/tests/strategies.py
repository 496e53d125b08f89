"""Hypothesis strategies over seeded random diagrams."""
import random

from hypothesis import assume, strategies as st

from knotmove.randomgen import random_diagram, random_with_site, scramble

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def diagrams(draw, strands=(2, 4), length=(1, 8), moves=(0, 3)):
    rng = random.Random(draw(seeds))
    d = random_diagram(rng, rng.randint(*strands), rng.randint(*length))
    return scramble(d, rng, rng.randint(*moves))


@st.composite
def sited(draw, kind=None, proper=False):
    rng = random.Random(draw(seeds))
    d, sites = random_with_site(rng, kind, proper=proper)
    return d, sites[rng.randrange(len(sites))]


@st.composite
def knots(draw, strands=(2, 4), length=(1, 9)):
    rng = random.Random(draw(seeds))
    for _ in range(50):
        d = random_diagram(rng, rng.randint(*strands), rng.randint(*length))
        if d.n_components == 1:
            return scramble(d, rng, rng.randint(0, 3))
    assume(False)
