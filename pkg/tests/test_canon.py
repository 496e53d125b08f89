import os
import subprocess
import sys

import pytest
from hypothesis import given

from knotmove import _canon_py, canon
from knotmove.canon import canonical_pair, canonical_relabel, canonicalize, isomorphic, piece_arrays
from knotmove.catalog import builtin
from knotmove.diagram import Component, Diagram, parse_pd, serialize_pd

from strategies import diagrams


def _relabelled(d, shift):
    """Same diagram with every edge id shifted cyclically along its component."""
    ren = {}
    for comp in d.components:
        es = comp.edges
        for i, e in enumerate(es):
            ren[e] = es[(i + shift) % len(es)]
    from knotmove.diagram import Crossing

    xs = tuple(Crossing(tuple(ren[e] for e in c.slots), c.ab_in) for c in d.crossings)
    comps = tuple(Component(c.label, tuple(ren[e] for e in c.edges)) for c in d.components)
    return Diagram(xs, comps)


@given(diagrams(), diagrams())
def test_isomorphism_invariance(d, _):
    assert canonicalize(_relabelled(d, 1)) == canonicalize(d)


@given(diagrams())
def test_crossing_order_irrelevant(d):
    flipped = Diagram(tuple(reversed(d.crossings)), d.components)
    assert canonicalize(flipped) == canonicalize(d)


@given(diagrams())
def test_idempotent(d):
    c = canonical_relabel(d)
    assert canonicalize(c) == canonicalize(d)
    assert serialize_pd(canonical_relabel(c), labels=True) == serialize_pd(c, labels=True)


@given(diagrams())
def test_pair_matches(d):
    rel, key = canonical_pair(d)
    assert key == canonicalize(d)
    assert canonicalize(rel) == key


@given(diagrams())
def test_backends_agree(d):
    if canon.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    from knotmove import _canon

    for piece in d.pieces:
        slots, flags, head, color, edges = piece_arrays(d, piece)
        args = (slots, flags, head, color, len(piece), len(edges))
        assert _canon.canon_piece(*args) == _canon_py.canon_piece(*args)


def test_labels_optional():
    a = parse_pd("C x = 1,2 C y = 3,4 X+[1,3,2,4] X+[4,2,3,1]")
    b = parse_pd("C p = 1,2 C q = 3,4 X+[1,3,2,4] X+[4,2,3,1]")
    assert isomorphic(a, b)
    assert not isomorphic(a, b, labels=True)


def test_free_loops_counted():
    assert canonicalize(builtin("unlink_3")) == "O O O"
    assert canonicalize(builtin("unknot")) == "O"


def test_distinct_knots():
    keys = ["trefoil_R", "trefoil_L", "fig8", "square_knot_K", "granny_knot"]
    assert len({canonicalize(builtin(k)) for k in keys}) == len(keys)


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, KNOTMOVE_PURE="1")
    code = ("from knotmove import canon; from knotmove.catalog import builtin; "
            "print(canon.BACKEND, canon.canonicalize(builtin('L_fig11')))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, _, code_text = out.stdout.strip().partition(" ")
    assert backend == "python"
    assert code_text == canonicalize(builtin("L_fig11"))
