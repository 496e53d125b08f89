"""Seeded random diagrams for property suites.

Diagrams are closed braids on a few strands, with random crossing signs and
random component reversals, optionally scrambled by Reidemeister additions.
Braid words that alternate between neighbouring generators leave plenty of
square faces, so 4-crossing sites are common.
"""
from __future__ import annotations

import random

from .canon import canonical_relabel
from .diagram import Diagram, reverse_components
from .errors import StaleSite
from .reidemeister import make_crossing, r1_add, r2_add, r3, r3_sites

__all__ = ["braid_closure", "random_word", "grid_word", "random_diagram", "scramble", "random_with_site"]

NE, NW, SW, SE = 45, 135, 225, 315


def braid_closure(word, strands: int) -> Diagram:
    """Closure of a braid word; generator ``i`` (1-based) crosses strands i, i+1.

    Strands run north; in a positive letter the strand going from south-west
    to north-east passes over, which makes the crossing positive.
    """
    if any(not 1 <= abs(g) < strands for g in word):
        raise ValueError("braid letter out of range")
    cur = list(range(1, strands + 1))
    nxt = strands + 1
    raw = []
    for g in word:
        i = abs(g) - 1
        a, b = cur[i], cur[i + 1]
        a2, b2 = nxt, nxt + 1
        nxt += 2
        raw.append([(SW, a, True, g < 0), (NE, b2, False, g < 0),
                    (SE, b, True, g > 0), (NW, a2, False, g > 0)])
        cur[i], cur[i + 1] = a2, b2
    ren = {top: bottom for top, bottom in zip(cur, range(1, strands + 1))}
    xs = [make_crossing([(ang, ren.get(e, e), inc, under) for ang, e, inc, under in hes])
          for hes in raw]
    used = {e for c in xs for e in c.slots}
    loops = [e for e in range(1, strands + 1) if e not in used]
    return canonical_relabel(Diagram.build(xs, {}, loops))


def random_word(rng: random.Random, strands: int, length: int) -> list[int]:
    word = []
    for _ in range(length):
        g = rng.randrange(1, strands)
        word.append(g if rng.random() < 0.5 else -g)
    return word


def grid_word(i: int, sign: int = 1) -> list[int]:
    """Strands i, i+1 crossing strands i+2, i+3 around a square face."""
    return [sign * g for g in (i + 1, i, i + 2, i + 1)]


def random_diagram(rng: random.Random, strands: int = 3, length: int = 6,
                   reverse: bool = True, grid: bool = False) -> Diagram:
    word = random_word(rng, strands, length)
    if grid and strands >= 4:
        at = rng.randint(0, len(word))
        word[at:at] = grid_word(rng.randint(1, strands - 3), rng.choice([1, -1]))
    d = braid_closure(word, strands)
    if reverse:
        labs = [lab for lab in d.labels if rng.random() < 0.5]
        if labs:
            d = reverse_components(d, labs)
    return d


def scramble(d: Diagram, rng: random.Random, moves: int) -> Diagram:
    """Apply random Reidemeister additions and R3 moves."""
    for _ in range(moves):
        op = rng.random()
        try:
            if op < 0.3 and d.edges:
                d = r1_add(d, rng.choice(d.edges), rng.choice(["left", "right"]), rng.choice([1, -1]))
            elif op < 0.7 and d.crossings:
                f = rng.choice(d.faces)
                es = sorted(set(f.edges))
                if len(es) < 2:
                    continue
                e1, e2 = rng.sample(es, 2)
                d = r2_add(d, f.index, e1, e2, rng.random() < 0.5)
            else:
                sites = r3_sites(d)
                if sites:
                    d = r3(d, rng.choice(sites).face)
        except StaleSite:
            continue
    return d


def random_with_site(rng: random.Random, kind=None, proper: bool = True, tries: int = 500,
                     strands: tuple[int, int] = (4, 5), length: tuple[int, int] = (2, 6)):
    """A random diagram together with its 4-crossing sites of ``kind``.

    Each candidate braid word gets a grid subword, so sites are common.
    """
    from .diagram import is_proper
    from .moves import find_sites

    for _ in range(tries):
        d = random_diagram(rng, rng.randint(*strands), rng.randint(*length), grid=True)
        if proper and not is_proper(d):
            continue
        sites = find_sites(d, kind)
        if sites:
            return d, sites
    raise RuntimeError("no diagram with the requested site found")
