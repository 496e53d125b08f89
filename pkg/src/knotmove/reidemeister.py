"""Reidemeister moves on PD diagrams and greedy simplification.

Every move is addressed by a face index (faces of the diagram as given) so
that the moves stay unambiguous on tiny diagrams where two faces share the
same crossings.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

from .canon import canonical_relabel, canonicalize
from .diagram import Crossing, Diagram, Draft
from .errors import StaleSite

__all__ = [
    "RSite",
    "r1_sites",
    "r2_sites",
    "r3_sites",
    "r1_remove",
    "r2_remove",
    "r3",
    "r1_add",
    "r2_add",
    "face_side",
    "simplify",
    "Step",
]

# slot angles in degrees for the local pictures below
E, N, W, S = 0, 90, 180, 270


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def _value_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return "[" + ",".join(_value_text(x) for x in v) + "]"
    if isinstance(v, str) and not (_IDENT.fullmatch(v) and v not in ("true", "false")):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(v)


@dataclass(frozen=True)
class Step:
    """One script step: a verb and a locator with ordered keyword arguments."""

    verb: str
    name: str
    args: tuple

    def get(self, key, default=None):
        for k, v in self.args:
            if k == key:
                return v
        return default

    def locator_text(self) -> str:
        parts = []
        for k, v in self.args:
            parts.append(f"{k}={_value_text(v)}")
        return f"{self.name}(" + ", ".join(parts) + ")"

    def __str__(self):
        return f"{self.verb} {self.locator_text()}"


@dataclass(frozen=True)
class RSite:
    kind: str  # "r1", "r2" or "r3"
    face: int
    crossings: tuple[int, ...]

    def step(self) -> Step:
        verb = {"r1": "r1-", "r2": "r2-", "r3": "r3"}[self.kind]
        return Step(verb, "site", (("kind", self.kind), ("crossings", self.crossings), ("face", self.face)))


def make_crossing(half_edges) -> Crossing:
    """Crossing from four (angle, edge, incoming, under) half-edges."""
    hes = sorted(half_edges, key=lambda h: h[0] % 360)
    start = next(i for i, h in enumerate(hes) if h[2] and h[3])
    ring = hes[start:] + hes[:start]
    slots = tuple(h[1] for h in ring)
    if not (ring[2][3] and not ring[2][2]) or ring[1][3] or ring[3][3]:
        raise ValueError("half-edges do not form a crossing")
    return Crossing(slots, bool(ring[1][2]))


# ---- site detection ------------------------------------------------------

def r1_sites(d: Diagram) -> list[RSite]:
    out = []
    for f in d.faces:
        if len(f) == 1:
            out.append(RSite("r1", f.index, (f.corners[0][0],)))
    return out


def r2_sites(d: Diagram) -> list[RSite]:
    out = []
    for f in d.faces:
        if len(f) != 2:
            continue
        (x, j), (y, k) = f.corners
        if x == y:
            continue
        if (j + 1) % 2 == k % 2:
            out.append(RSite("r2", f.index, tuple(sorted((x, y)))))
    return out


def _triangle(d: Diagram, f):
    """Side edges of a triangle face as (edge, tail crossing, tail slot, head crossing, head slot)."""
    sides = []
    for ci, j in f.corners:
        k = (j + 1) % 4
        cj, kk = d.partner(ci, k)
        e = d.crossings[ci].slots[k]
        if d.crossings[ci].incoming(k):
            sides.append((e, cj, kk, ci, k))
        else:
            sides.append((e, ci, k, cj, kk))
    return sides


def r3_sites(d: Diagram) -> list[RSite]:
    out = []
    for f in d.faces:
        if len(f) != 3:
            continue
        cs = [c for c, _ in f.corners]
        if len(set(cs)) != 3 or len(set(f.edges)) != 3:
            continue
        sides = _triangle(d, f)
        if any(tc == hc for _, tc, _, hc, _ in sides):
            continue
        # some strand must pass over (equivalently under) both its crossings
        if any(ts % 2 == 1 and hs % 2 == 1 for _, _, ts, _, hs in sides):
            out.append(RSite("r3", f.index, tuple(sorted(cs))))
    return out


def _find(sites, face):
    for s in sites:
        if s.face == face:
            return s
    raise StaleSite(f"no such site at face {face}")


# ---- removals and R3 ------------------------------------------------------

def r1_remove(d: Diagram, face: int) -> Diagram:
    s = _find(r1_sites(d), face)
    dr = d.draft()
    dr.splice_out(s.crossings)
    return dr.build()


def r2_remove(d: Diagram, face: int) -> Diagram:
    s = _find(r2_sites(d), face)
    dr = d.draft()
    dr.splice_out(s.crossings)
    return dr.build()


def r3(d: Diagram, face: int) -> Diagram:
    _find(r3_sites(d), face)
    sides = _triangle(d, d.faces[face])
    slots = [list(c.slots) for c in d.crossings]
    writes = []
    for t, tc, ts, hc, hs in sides:
        p = d.crossings[tc].slots[(ts + 2) % 4]
        q = d.crossings[hc].slots[(hs + 2) % 4]
        # the old first crossing becomes the second one along the strand
        writes += [(tc, (ts + 2) % 4, t), (tc, ts, q), (hc, hs, p), (hc, (hs + 2) % 4, t)]
    for ci, k, e in writes:
        slots[ci][k] = e
    xs = [Crossing(tuple(s), c.ab_in) for s, c in zip(slots, d.crossings)]
    labels = dict(d.component_of)
    loops = [(comp.edges[0], comp.label) for comp in d.components if d.is_free_loop(comp)]
    return Diagram.build(xs, labels, loops)


# ---- additions ------------------------------------------------------------

def face_side(d: Diagram, edge: int, side: str) -> int:
    """Index of the face on the given side (``left``/``right``) of an edge."""
    want = side == "right"
    for f in d.faces:
        for e, a in zip(f.edges, f.agree):
            if e == edge and a == want:
                return f.index
    raise StaleSite(f"edge {edge} has no {side} face")


def r1_add(d: Diagram, edge: int, side: str, sign: int) -> Diagram:
    """Put a curl on ``edge`` lying in the face on ``side``, with crossing sign ``sign``."""
    if edge not in d.component_of:
        raise StaleSite(f"no edge {edge}")
    if side not in ("left", "right") or sign not in (1, -1):
        raise StaleSite("kink needs side left/right and sign +1/-1")
    dr = d.draft()
    e1, e2 = dr.subdivide(edge)
    loop = dr.new_edge(dr.labels[edge])
    back = W if side == "left" else E
    out = E if side == "left" else W
    for under_first in (True, False):
        c = make_crossing([
            (S, e1, True, under_first),
            (N, loop, False, under_first),
            (back, loop, True, not under_first),
            (out, e2, False, not under_first),
        ])
        if c.sign == sign:
            break
    dr.add(c.slots, c.ab_in)
    return dr.build()


def r2_add(d: Diagram, face: int, edge: int, across: int, over: bool = True) -> Diagram:
    """Push a finger of ``edge`` across ``across`` inside ``face``.

    The finger passes over ``across`` when ``over`` is true.
    """
    if not 0 <= face < len(d.faces):
        raise StaleSite(f"no face {face}")
    f = d.faces[face]
    if edge == across or f.edges.count(edge) != 1 or f.edges.count(across) != 1:
        raise StaleSite(f"edges {edge} and {across} must each bound face {face} once")
    a1 = f.agree[f.edges.index(edge)]
    a2 = f.agree[f.edges.index(across)]
    # local picture: edge along the bottom, across along the top, face between
    east1 = not a1
    east2 = a2
    dr = d.draft()
    e1a, rest = dr.subdivide(edge)
    m1, e1b = dr.subdivide(rest)
    e2a, rest2 = dr.subdivide(across)
    m2, e2b = dr.subdivide(rest2)
    u1, u2 = (not over), over
    if east1:
        left1 = [(S, e1a, True, u1), (N, m1, False, u1)]
        right1 = [(N, m1, True, u1), (S, e1b, False, u1)]
    else:
        left1 = [(N, m1, True, u1), (S, e1b, False, u1)]
        right1 = [(S, e1a, True, u1), (N, m1, False, u1)]
    if east2:
        left2 = [(W, e2a, True, u2), (E, m2, False, u2)]
        right2 = [(W, m2, True, u2), (E, e2b, False, u2)]
    else:
        left2 = [(E, m2, True, u2), (W, e2b, False, u2)]
        right2 = [(E, e2a, True, u2), (W, m2, False, u2)]
    for hes in (left1 + left2, right1 + right2):
        c = make_crossing(hes)
        dr.add(c.slots, c.ab_in)
    return dr.build()


# ---- simplification -------------------------------------------------------

def _monotone_step(d: Diagram):
    for finder, fn in ((r1_sites, r1_remove), (r2_sites, r2_remove)):
        sites = finder(d)
        if sites:
            s = sites[0]
            return s.step(), fn(d, s.face)
    return None


def _explore_r3(d: Diagram, limit: int, node_cap: int):
    """Breadth-first R3 search for a diagram admitting a removal."""
    start = canonicalize(d)
    seen = {start}
    queue = deque([(d, [])])
    nodes = 0
    while queue:
        cur, path = queue.popleft()
        if len(path) >= limit:
            continue
        for s in r3_sites(cur):
            nxt = canonical_relabel(r3(cur, s.face))
            key = canonicalize(nxt)
            if key in seen:
                continue
            seen.add(key)
            nodes += 1
            p2 = path + [(s.step(), nxt)]
            if r1_sites(nxt) or r2_sites(nxt):
                return p2
            if nodes >= node_cap:
                return None
            queue.append((nxt, p2))
    return None


def simplify(d: Diagram, budget: int = 1000, trace: bool = False, node_cap: int = 400):
    """Greedy R1/R2 removal with R3 detours; every applied move costs one unit.

    Returns the simplified diagram, or ``(diagram, steps)`` with ``trace``.
    Steps are addressed against the canonical relabelling of each
    intermediate diagram.
    """
    steps = []
    if budget <= 0:
        return (d, steps) if trace else d
    cur = canonical_relabel(d)
    used = 0
    while used < budget:
        mono = _monotone_step(cur)
        if mono is not None:
            step, nxt = mono
            steps.append(step)
            cur = canonical_relabel(nxt)
            used += 1
            continue
        path = _explore_r3(cur, budget - used, node_cap)
        if not path:
            break
        for step, nxt in path:
            steps.append(step)
            cur = nxt
            used += 1
    return (cur, steps) if trace else cur
