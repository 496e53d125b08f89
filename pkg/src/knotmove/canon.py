"""Canonical form of diagrams, used for dedup in search and endpoint checks.

Each connected piece is traversed from every start edge; the lexicographically
least code wins.  Pieces are sorted and relabelled consecutively, so the
canonical string is itself valid PD text.
"""
from __future__ import annotations

import os

from .diagram import Component, Crossing, Diagram, serialize_pd

try:  # compiled kernel when available
    if os.environ.get("KNOTMOVE_PURE"):
        raise ImportError
    from ._canon import canon_piece as _canon_piece

    BACKEND = "cython"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    from ._canon_py import canon_piece as _canon_piece

    BACKEND = "python"

__all__ = ["canonical_relabel", "canonical_pair", "canonicalize", "isomorphic", "BACKEND", "piece_arrays"]


def piece_arrays(d: Diagram, piece, rank=None):
    """Flat kernel arrays for one connected piece."""
    xs = d.crossings
    edges = sorted({e for c in piece for e in xs[c].slots})
    eidx = {e: i for i, e in enumerate(edges)}
    if rank is None:
        rank = {lab: i for i, lab in enumerate(sorted(d.labels))}
    slots, flags = [], []
    head = [0] * len(edges)
    for i, c in enumerate(piece):
        x = xs[c]
        flags.append(1 if x.ab_in else 0)
        a, b, cc, dd = (eidx[e] for e in x.slots)
        slots += (a, b, cc, dd)
        head[a] = 4 * i
        if x.ab_in:
            head[b] = 4 * i + 1
        else:
            head[dd] = 4 * i + 3
    comp = d.component_of
    color = [rank[comp[e]] for e in edges]
    return slots, flags, head, color, edges


def _relabel_data(d: Diagram):
    pieces = []
    rank = {lab: i for i, lab in enumerate(sorted(d.labels))}
    for piece in d.pieces:
        slots, flags, head, color, edges = piece_arrays(d, piece, rank)
        code, _, elab, order = _canon_piece(slots, flags, head, color, len(piece), len(edges))
        pieces.append((code, piece, slots, edges, elab, order))
    pieces.sort(key=lambda p: p[0])
    return pieces


def _relabelled(d: Diagram):
    """Canonical crossings, edge map and crossing map."""
    crossings = []
    emap, cmap = {}, {}
    offset = 0
    for code, piece, slots, edges, elab, order in _relabel_data(d):
        m = len(edges)
        for c in order:
            cmap[piece[c]] = len(crossings)
            x = d.crossings[piece[c]]
            crossings.append(Crossing(tuple(offset + 1 + elab[slots[4 * c + k]] for k in range(4)), x.ab_in))
        for i, e in enumerate(edges):
            emap[e] = offset + 1 + elab[i]
        offset += m
    loops = sorted((comp.label, comp.edges[0]) for comp in d.components if d.is_free_loop(comp))
    for i, (_, e) in enumerate(loops):
        emap[e] = offset + 1 + i
    return crossings, emap, cmap


def canonical_relabel(d: Diagram, maps: bool = False):
    """Isomorphic copy with crossings and edges in canonical order.

    Components keep their labels and their order in ``d``.  With ``maps``
    also return dicts old edge -> new edge and old crossing index -> new
    crossing index.
    """
    crossings, emap, cmap = _relabelled(d)
    comps = []
    for comp in d.components:
        es = [emap[e] for e in comp.edges]
        k = es.index(min(es))
        comps.append(Component(comp.label, tuple(es[k:] + es[:k])))
    out = Diagram(tuple(crossings), tuple(comps))
    return (out, emap, cmap) if maps else out


def canonical_pair(d: Diagram):
    """``(canonical_relabel(d), canonicalize(d))`` with one traversal."""
    r = canonical_relabel(d)
    return r, " ".join([c.token() for c in r.crossings] + ["O"] * d.free_loops)


def canonicalize(d: Diagram, labels: bool = False) -> str:
    """Deterministic key; equal exactly for isomorphic diagrams.

    Component labels take part only when ``labels`` is true.
    """
    if not labels:
        crossings, _, _ = _relabelled(d)
        return " ".join([c.token() for c in crossings] + ["O"] * d.free_loops)
    r = canonical_relabel(d)
    comps = tuple(sorted(r.components, key=lambda comp: (r.is_free_loop(comp), min(comp.edges))))
    return serialize_pd(Diagram(r.crossings, comps), labels=True)


def isomorphic(d1: Diagram, d2: Diagram, labels: bool = False) -> bool:
    return canonicalize(d1, labels) == canonicalize(d2, labels)
