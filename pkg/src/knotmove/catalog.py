"""Built-in fixture diagrams."""
from __future__ import annotations

import re
from functools import lru_cache

from .diagram import Diagram, parse_gauss, parse_pd
from .errors import UnknownCatalogKey

__all__ = ["builtin", "catalog_keys", "cabled_hopf", "describe"]

_GAUSS = {
    "trefoil_R": "O1+ U2+ O3+ U1+ O2+ U3+",
    "trefoil_L": "O1- U2- O3- U1- O2- U3-",
    "fig8": "O1+ U2+ O3- U4- O2+ U1+ O4- U3-",
    "square_knot_K": "O1- U2- O3- U1- O2- U3- O4+ U5+ O6+ U4+ O5+ U6+",
    "granny_knot": "O1+ U2+ O3+ U1+ O2+ U3+ O4+ U5+ O6+ U4+ O5+ U6+",
    "hopf": "O1+ U2+ / U1+ O2+",
    "hopf_neg": "O1- U2- / U1- O2-",
    # two overlapping circles, the horizontal one over the vertical one
    "closed_pass_tangle": "O3- O4+ O2- O1+ / U4+ U2- U1+ U3-",
    # parallel pair over an anti-parallel pair, each closed by an outer arc
    "closed_onetwo_tangle": "O1- O2+ / O3- O4+ / U4+ U2+ U1- U3-",
}

_PD = {
    "kinked_unknot": "X-[1,1,2,2]",
}

_DESCRIPTIONS = {
    "unknot": "crossing-free circle",
    "unlink_n": "n crossing-free circles (e.g. unlink_3)",
    "trefoil_R": "right-handed trefoil, three positive crossings",
    "trefoil_L": "left-handed trefoil, three negative crossings",
    "fig8": "figure-eight knot",
    "square_knot_K": "left trefoil # right trefoil, 6 crossings",
    "granny_knot": "right trefoil # right trefoil",
    "hopf": "positive Hopf link",
    "hopf_neg": "negative Hopf link",
    "L_fig11": "untwisted 2-cable of a negative Hopf link, both cable pairs anti-parallel",
    "L0_fig7": "untwisted 2-cable of a Hopf link, one parallel and one anti-parallel pair",
    "closed_pass_tangle": "two anti-parallel pairs, 4 crossings, one pass site",
    "closed_onetwo_tangle": "parallel pair over anti-parallel pair, one 1-2 site",
    "kinked_unknot": "unknot with a single curl",
}


def cabled_hopf(eps: int, orient_a: tuple[int, int], orient_c: tuple[int, int],
                labels=("a", "b", "c", "d")) -> Diagram:
    """Untwisted 2-cable of a Hopf link.

    The cores A and C are circles meeting at a top point X1 and a bottom point
    X2, both traversed counterclockwise.  At X1 the A strand runs out of the
    disc of C and the C strand runs into the disc of A; at X2 the reverse.
    ``eps`` is the sign of the core Hopf link; ``orient_a`` gives the
    direction (+1 along the core) of the outer and inner copies of A, and
    ``orient_c`` likewise for C.  Copies are labelled outer-A, inner-A,
    outer-C, inner-C.
    """
    a_copies = [("Aout", orient_a[0]), ("Ain", orient_a[1])]
    c_copies = [("Cout", orient_c[0]), ("Cin", orient_c[1])]
    # crossing events along each core in counterclockwise order
    a_events = [("X1", "Cin"), ("X1", "Cout"), ("X2", "Cout"), ("X2", "Cin")]
    c_events = [("X1", "Aout"), ("X1", "Ain"), ("X2", "Ain"), ("X2", "Aout")]
    # core crossing with eps=+1: A over at X1, C over at X2
    a_over = {"X1": eps > 0, "X2": eps < 0}
    numbers = {}
    for x in ("X1", "X2"):
        for ac in ("Aout", "Ain"):
            for cc in ("Cout", "Cin"):
                numbers[(x, ac, cc)] = len(numbers) + 1
    orient = dict(a_copies + c_copies)
    comps = []
    for name, o in a_copies:
        evs = a_events if o > 0 else a_events[::-1]
        toks = []
        for x, cc in evs:
            k = numbers[(x, name, cc)]
            s = eps * o * orient[cc]
            toks.append(f"{'O' if a_over[x] else 'U'}{k}{'+' if s > 0 else '-'}")
        comps.append(" ".join(toks))
    for name, o in c_copies:
        evs = c_events if o > 0 else c_events[::-1]
        toks = []
        for x, ac in evs:
            k = numbers[(x, ac, name)]
            s = eps * o * orient[ac]
            toks.append(f"{'U' if a_over[x] else 'O'}{k}{'+' if s > 0 else '-'}")
        comps.append(" ".join(toks))
    d = parse_gauss(" / ".join(comps))
    relabel = dict(zip(("a", "b", "c", "d"), labels))
    return _with_labels(d, relabel)


def _with_labels(d: Diagram, mapping) -> Diagram:
    from .diagram import Component

    comps = tuple(Component(mapping.get(c.label, c.label), c.edges) for c in d.components)
    return Diagram(d.crossings, comps)


@lru_cache(maxsize=None)
def builtin(name: str) -> Diagram:
    if name == "unknot":
        return parse_pd("O")
    m = re.fullmatch(r"unlink_(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return parse_pd(" ".join(["O"] * int(m.group(1))))
    if name in _GAUSS:
        return parse_gauss(_GAUSS[name])
    if name in _PD:
        return parse_pd(_PD[name])
    if name == "L_fig11":
        return cabled_hopf(-1, (1, -1), (1, -1))
    if name == "L0_fig7":
        return cabled_hopf(1, (1, 1), (1, -1))
    raise UnknownCatalogKey(f"unknown catalog key {name!r}")


def catalog_keys() -> list[str]:
    return ["unknot", "unlink_n", "trefoil_R", "trefoil_L", "fig8", "square_knot_K",
            "granny_knot", "hopf", "hopf_neg", "L_fig11", "L0_fig7",
            "closed_pass_tangle", "closed_onetwo_tangle", "kinked_unknot"]


def describe(name: str) -> str:
    return _DESCRIPTIONS.get(name, "")
