"""Oriented link diagrams as planar-diagram codes.

A crossing stores four edge ids in counterclockwise order starting at the
incoming under slot.  Slots 0 and 2 carry the under strand, 1 and 3 the over
strand.  ``X+`` has the over strand entering at slot 1, ``X-`` at slot 3.

Sign convention: +1 when turning the over direction a quarter turn
counterclockwise gives the under direction.  With the slot layout above this
makes every ``X-`` crossing positive and every ``X+`` crossing negative.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DisconnectedSlot,
    EdgeDegreeError,
    MalformedToken,
    NonClosedComponent,
    NonRealizable,
)

__all__ = [
    "Crossing",
    "Component",
    "Face",
    "Diagram",
    "Draft",
    "LkMatrix",
    "parse_pd",
    "serialize_pd",
    "parse_gauss",
    "linking_matrix",
    "is_proper",
    "auto_label",
    "reverse_components",
    "mirror",
]


@dataclass(frozen=True)
class Crossing:
    slots: tuple[int, int, int, int]
    ab_in: bool  # True for X+ (slots 0 and 1 incoming)

    @property
    def sign(self) -> int:
        return -1 if self.ab_in else 1

    @property
    def over_in(self) -> int:
        return 1 if self.ab_in else 3

    def incoming(self, k: int) -> bool:
        return k == 0 or k == self.over_in

    def is_over(self, k: int) -> bool:
        return k % 2 == 1

    def flipped(self) -> "Crossing":
        """Same projection, over and under exchanged."""
        a, b, c, d = self.slots
        if self.ab_in:
            return Crossing((b, c, d, a), False)
        return Crossing((d, a, b, c), True)

    def token(self) -> str:
        return ("X+" if self.ab_in else "X-") + "[" + ",".join(map(str, self.slots)) + "]"


@dataclass(frozen=True)
class Component:
    label: str
    edges: tuple[int, ...]  # in traversal order


@dataclass(frozen=True)
class Face:
    """Complementary region of the projection, traversed with the region on the right."""

    index: int
    corners: tuple[tuple[int, int], ...]  # (crossing, slot j): angle between slot j and j+1
    edges: tuple[int, ...]
    agree: tuple[bool, ...]  # edge direction matches the traversal

    def __len__(self):
        return len(self.corners)


def auto_label(i: int) -> str:
    if i < 26:
        return string.ascii_lowercase[i]
    return f"k{i}"


class LkMatrix:
    """Symmetric table of pairwise linking numbers keyed by component label."""

    def __init__(self, labels: Sequence[str], values: Mapping[tuple[str, str], int]):
        self.labels = tuple(labels)
        self._v = {}
        for (x, y), v in values.items():
            self._v[(x, y)] = v
            self._v[(y, x)] = v

    def __getitem__(self, key):
        x, y = key
        if x not in self.labels or y not in self.labels:
            raise KeyError(key)
        return self._v.get((x, y), 0)

    def pairs(self):
        for i, x in enumerate(self.labels):
            for y in self.labels[i + 1:]:
                yield x, y, self[x, y]

    def row_sum(self, x):
        return sum(self[x, y] for y in self.labels if y != x)

    def __eq__(self, other):
        if not isinstance(other, LkMatrix):
            return NotImplemented
        return set(self.labels) == set(other.labels) and all(
            self[x, y] == other[x, y] for x, y, _ in self.pairs()
        )

    def __sub__(self, other):
        if set(self.labels) != set(other.labels):
            raise ValueError("label sets differ")
        return LkMatrix(self.labels, {(x, y): v - other[x, y] for x, y, v in self.pairs()})

    def to_json(self):
        out = {}
        for x, y, v in self.pairs():
            x, y = sorted((x, y))
            out[f"{x},{y}"] = v
        return dict(sorted(out.items()))

    def __repr__(self):
        inner = ", ".join(f"{x}{y}={v}" for x, y, v in self.pairs())
        return f"LkMatrix({inner})"

    @classmethod
    def zero(cls, labels):
        return cls(labels, {})


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    components: tuple[Component, ...]

    # ---- construction -------------------------------------------------
    @classmethod
    def build(
        cls,
        crossings: Iterable[Crossing | tuple],
        edge_labels: Mapping[int, str] | None = None,
        loops: Iterable[int | tuple[int, str | None]] = (),
    ) -> "Diagram":
        """Validate crossings, trace components and attach labels.

        ``edge_labels`` maps any edge to the label of its component; unmapped
        components get automatic labels.  ``loops`` lists free loop edge ids,
        optionally paired with a label.
        """
        xs = tuple(c if isinstance(c, Crossing) else Crossing(tuple(c[0]), bool(c[1])) for c in crossings)
        edge_labels = dict(edge_labels or {})
        loop_items = []
        for item in loops:
            e, lab = (item, None) if isinstance(item, int) else item
            loop_items.append((e, lab if lab is not None else edge_labels.get(e)))

        heads: dict[int, tuple[int, int]] = {}
        tails: dict[int, tuple[int, int]] = {}
        for ci, c in enumerate(xs):
            if len(c.slots) != 4:
                raise MalformedToken(f"crossing {ci} has {len(c.slots)} slots")
            for k, e in enumerate(c.slots):
                if not isinstance(e, int) or e <= 0:
                    raise MalformedToken(f"edge id {e!r} is not a positive integer")
                side = heads if c.incoming(k) else tails
                if e in side:
                    other = tails if side is heads else heads
                    if e in other:
                        raise EdgeDegreeError(f"edge {e} used more than twice")
                    raise DisconnectedSlot(
                        f"edge {e} is {'incoming' if side is heads else 'outgoing'} at both ends"
                    )
                side[e] = (ci, k)
        for e in set(heads) | set(tails):
            if (e in heads) != (e in tails):
                # an edge seen once, or seen twice with the same direction
                raise EdgeDegreeError(f"edge {e} must appear in exactly two slots")
        loop_ids = [e for e, _ in loop_items]
        if len(set(loop_ids)) != len(loop_ids) or set(loop_ids) & set(heads):
            raise EdgeDegreeError("free loop edge id reused")

        seen: set[int] = set()
        cycles: list[tuple[int, ...]] = []
        for e0 in sorted(heads):
            if e0 in seen:
                continue
            cyc = []
            e = e0
            while True:
                if e in seen:
                    if e != e0:
                        raise NonClosedComponent(f"edge {e} reached twice while tracing")
                    break
                seen.add(e)
                cyc.append(e)
                ci, k = heads[e]
                e = xs[ci].slots[(k + 2) % 4]
                if e not in heads:
                    raise NonClosedComponent(f"edge {e} has no incoming end")
            cycles.append(tuple(cyc))

        labels: list[str | None] = []
        for cyc in cycles:
            found = {edge_labels[e] for e in cyc if e in edge_labels}
            if len(found) > 1:
                raise MalformedToken(f"component through edge {cyc[0]} has labels {sorted(found)}")
            labels.append(found.pop() if found else None)
        order = list(range(len(cycles)))
        comps_raw = [(cycles[i], labels[i]) for i in order] + [((e,), lab) for e, lab in loop_items]
        used = {lab for _, lab in comps_raw if lab is not None}
        if len(used) != sum(1 for _, lab in comps_raw if lab is not None):
            raise MalformedToken("duplicate component label")
        comps = []
        n = 0
        for cyc, lab in comps_raw:
            if lab is None:
                while auto_label(n) in used:
                    n += 1
                lab = auto_label(n)
                used.add(lab)
            comps.append(Component(lab, cyc))
        return cls(xs, tuple(comps))

    def draft(self) -> "Draft":
        return Draft(self)

    # ---- derived structure --------------------------------------------
    @cached_property
    def _ends(self):
        heads, tails = {}, {}
        for ci, c in enumerate(self.crossings):
            for k, e in enumerate(c.slots):
                (heads if c.incoming(k) else tails)[e] = (ci, k)
        return heads, tails

    def head(self, e: int) -> tuple[int, int]:
        return self._ends[0][e]

    def tail(self, e: int) -> tuple[int, int]:
        return self._ends[1][e]

    def partner(self, ci: int, k: int) -> tuple[int, int]:
        """The other slot holding the same edge as slot ``k`` of crossing ``ci``."""
        e = self.crossings[ci].slots[k]
        h = self._ends[0][e]
        return self._ends[1][e] if h == (ci, k) else h

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(e for comp in self.components for e in comp.edges))

    @cached_property
    def component_of(self) -> dict[int, str]:
        return {e: comp.label for comp in self.components for e in comp.edges}

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(comp.label for comp in self.components)

    def component(self, label: str) -> Component:
        for comp in self.components:
            if comp.label == label:
                return comp
        raise KeyError(label)

    @property
    def free_loops(self) -> int:
        return sum(1 for comp in self.components if self.is_free_loop(comp))

    def is_free_loop(self, comp: Component) -> bool:
        return len(comp.edges) == 1 and comp.edges[0] not in self._ends[0]

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    def strand_labels(self, ci: int) -> tuple[str, str]:
        """Component labels of the (under, over) strands at a crossing."""
        c = self.crossings[ci]
        return self.component_of[c.slots[0]], self.component_of[c.slots[1]]

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        succ = {}
        for ci, c in enumerate(self.crossings):
            for j in range(4):
                succ[(ci, j)] = self.partner(ci, (j + 1) % 4)
        seen = set()
        faces = []
        for start in sorted(succ):
            if start in seen:
                continue
            cyc = []
            cur = start
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = succ[cur]
            edges, agree = [], []
            for ci, j in cyc:
                k = (j + 1) % 4
                c = self.crossings[ci]
                edges.append(c.slots[k])
                agree.append(not c.incoming(k))
            faces.append(Face(len(faces), tuple(cyc), tuple(edges), tuple(agree)))
        return tuple(faces)

    @cached_property
    def pieces(self) -> tuple[tuple[int, ...], ...]:
        """Crossing sets of the connected pieces of the projection graph."""
        parent = list(range(len(self.crossings)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, (ci, _) in self._ends[0].items():
            cj, _ = self._ends[1][e]
            ra, rb = find(ci), find(cj)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for ci in range(len(self.crossings)):
            groups.setdefault(find(ci), []).append(ci)
        return tuple(tuple(g) for _, g in sorted(groups.items()))

    def check_planar(self) -> None:
        """Euler characteristic test V - E + F = 2 on every connected piece."""
        owner = {}
        for pi, piece in enumerate(self.pieces):
            for ci in piece:
                owner[ci] = pi
        counts = [0] * len(self.pieces)
        for f in self.faces:
            counts[owner[f.corners[0][0]]] += 1
        for pi, piece in enumerate(self.pieces):
            if counts[pi] != len(piece) + 2:
                raise NonRealizable(
                    f"piece with {len(piece)} crossings has {counts[pi]} faces; not planar"
                )

    def is_split_projection(self) -> bool:
        return len(self.pieces) + self.free_loops > 1

    # ---- presentation -------------------------------------------------
    def __str__(self):
        return serialize_pd(self)

    def __repr__(self):
        return f"Diagram({serialize_pd(self)!r})"


class Draft:
    """Mutable working copy used by local moves; ``build`` re-validates."""

    def __init__(self, d: Diagram):
        self.crossings: list[list] = [[list(c.slots), c.ab_in] for c in d.crossings]
        self.labels: dict[int, str] = dict(d.component_of)
        self.loops: list[int] = [comp.edges[0] for comp in d.components if d.is_free_loop(comp)]
        self.next_id = max(d.edges, default=0) + 1
        self.origin = d

    def new_edge(self, label: str) -> int:
        e = self.next_id
        self.next_id += 1
        self.labels[e] = label
        return e

    def find_slot(self, e: int, incoming: bool) -> tuple[int, int]:
        for ci, (slots, ab_in) in enumerate(self.crossings):
            for k, x in enumerate(slots):
                if x == e and (k == 0 or k == (1 if ab_in else 3)) == incoming:
                    return ci, k
        raise KeyError(e)

    def subdivide(self, e: int) -> tuple[int, int]:
        """Split edge ``e`` into a tail part (keeps the id) and a new head part.

        For a free loop both parts are the same edge, which stops being free.
        """
        if e in self.loops:
            self.loops.remove(e)
            return e, e
        f = self.new_edge(self.labels[e])
        ci, k = self.find_slot(e, incoming=True)
        self.crossings[ci][0][k] = f
        return e, f

    def add(self, slots, ab_in) -> int:
        self.crossings.append([list(slots), bool(ab_in)])
        return len(self.crossings) - 1

    def splice_out(self, remove: Iterable[int]) -> None:
        """Delete crossings, letting each strand run straight through them."""
        remove = set(remove)
        heads, tails = {}, {}
        for ci, (slots, ab_in) in enumerate(self.crossings):
            for k, e in enumerate(slots):
                inc = k == 0 or k == (1 if ab_in else 3)
                (heads if inc else tails)[e] = (ci, k)
        done = set()
        # paths entering the removed region from outside
        for e, (ci, k) in sorted(heads.items()):
            if ci not in remove or tails[e][0] in remove:
                continue
            cur, path = e, [e]
            while True:
                hc, hk = heads[cur]
                if hc not in remove:
                    break
                cur = self.crossings[hc][0][(hk + 2) % 4]
                path.append(cur)
            done.update(path)
            last = path[-1]
            if last != e:
                hc, hk = heads[last]
                self.crossings[hc][0][hk] = e
                for x in path[1:]:
                    self.labels.pop(x, None)
        # cycles lying entirely inside the region become free loops
        for e, (ci, k) in sorted(heads.items()):
            if e in done or ci not in remove or tails[e][0] not in remove:
                continue
            cur, path = e, []
            while cur not in done:
                done.add(cur)
                path.append(cur)
                hc, hk = heads[cur]
                if hc not in remove:
                    raise NonClosedComponent("cycle leaves the removed region")
                cur = self.crossings[hc][0][(hk + 2) % 4]
            self.loops.append(path[0])
            for x in path[1:]:
                self.labels.pop(x, None)
        self.crossings = [c for i, c in enumerate(self.crossings) if i not in remove]

    def build(self) -> Diagram:
        return Diagram.build(
            [Crossing(tuple(s), a) for s, a in self.crossings],
            edge_labels=self.labels,
            loops=[(e, self.labels.get(e)) for e in self.loops],
        )


# ---- PD codec -----------------------------------------------------------

_TOKEN = re.compile(r"\S+")
_X = re.compile(r"^X([+\-−])\[\s*([^\]]*)\]$")
_O = re.compile(r"^O(?:\[(\d+)\])?$")


def _pd_tokens(text: str):
    # commas and spaces inside brackets belong to one token
    text = re.sub(r"\[\s*([^\]]*?)\s*\]", lambda m: "[" + re.sub(r"\s+", "", m.group(1)) + "]", text)
    text = re.sub(r"\s*=\s*", " = ", text)
    text = re.sub(r"\s*,\s*", ",", text)
    return [m.group(0) for m in _TOKEN.finditer(text)]


def parse_pd(text: str) -> Diagram:
    """Parse the whitespace-separated PD grammar.

    Beyond the bare ``O`` token, ``O[e]`` gives a free loop an explicit edge id
    so that a ``C`` declaration can label it.
    """
    toks = _pd_tokens(text)
    crossings, loops, decls = [], [], []
    auto_loops = 0
    i = 0
    while i < len(toks):
        t = toks[i]
        if t == "C":
            if i + 3 >= len(toks) or toks[i + 2] != "=":
                raise MalformedToken("component declaration must read 'C label = e1,e2,...'")
            label = toks[i + 1]
            try:
                edges = [int(x) for x in toks[i + 3].split(",") if x]
            except ValueError:
                raise MalformedToken(f"bad edge list {toks[i + 3]!r}") from None
            if not edges:
                raise MalformedToken("empty component declaration")
            decls.append((label, edges))
            i += 4
            continue
        m = _X.match(t)
        if m:
            try:
                slots = tuple(int(x) for x in m.group(2).split(","))
            except ValueError:
                raise MalformedToken(f"bad crossing token {t!r}") from None
            if len(slots) != 4:
                raise MalformedToken(f"crossing {t!r} needs four slots")
            crossings.append(Crossing(slots, m.group(1) == "+"))
            i += 1
            continue
        m = _O.match(t)
        if m:
            if m.group(1) is not None:
                loops.append(int(m.group(1)))
            else:
                loops.append(None)
                auto_loops += 1
            i += 1
            continue
        raise MalformedToken(f"unrecognised token {t!r}")
    if not crossings and not loops and not decls:
        raise MalformedToken("empty diagram")
    used = {e for c in crossings for e in c.slots} | {e for e in loops if e is not None}
    nxt = max(used, default=0) + 1
    loop_ids = []
    for e in loops:
        if e is None:
            e = nxt
            nxt += 1
        loop_ids.append(e)
    edge_labels = {}
    for label, edges in decls:
        for e in edges:
            if e not in used:
                raise EdgeDegreeError(f"declared edge {e} does not occur")
            if edge_labels.get(e, label) != label:
                raise MalformedToken(f"edge {e} declared in two components")
            edge_labels[e] = label
    d = Diagram.build(crossings, edge_labels, loop_ids)
    for label, edges in decls:
        comp = d.component(label)
        if set(edges) != set(comp.edges):
            raise NonClosedComponent(
                f"declared edges of {label!r} are not one closed cycle (the cycle through "
                f"edge {edges[0]} is {','.join(map(str, comp.edges))})")
    return d


def _default_labels(d: Diagram) -> bool:
    order = sorted(
        d.components, key=lambda comp: (d.is_free_loop(comp), min(comp.edges))
    )
    return all(comp.label == auto_label(i) for i, comp in enumerate(order))


def serialize_pd(d: Diagram, labels: bool | None = None) -> str:
    """PD text for ``d``; component declarations are emitted when labels differ
    from the automatic ones (or always with ``labels=True``)."""
    if labels is None:
        labels = not _default_labels(d)
    parts = []
    loops = [comp for comp in d.components if d.is_free_loop(comp)]
    if labels:
        for comp in d.components:
            parts.append(f"C {comp.label} = " + ",".join(map(str, comp.edges)))
    parts.extend(c.token() for c in d.crossings)
    parts.extend(f"O[{comp.edges[0]}]" if labels else "O" for comp in loops)
    return " ".join(parts)


# ---- Gauss codec --------------------------------------------------------

_G = re.compile(r"^([OU])(\d+)([+\-−])$")


def parse_gauss(text: str) -> Diagram:
    """Signed oriented Gauss code; components separated by ``/``.

    An empty component is a free loop; an empty string is the unknot.
    """
    parts = text.split("/")
    comps = []
    for part in parts:
        toks = part.split()
        parsed = []
        for t in toks:
            m = _G.match(t)
            if not m:
                raise MalformedToken(f"bad Gauss token {t!r}")
            parsed.append((m.group(1) == "O", int(m.group(2)), 1 if m.group(3) == "+" else -1))
        comps.append(parsed)
    info: dict[int, dict] = {}
    next_edge = 1
    loops = []
    edges_of = []
    for comp in comps:
        n = len(comp)
        if n == 0:
            loops.append(next_edge)
            next_edge += 1
            edges_of.append(None)
            continue
        ids = list(range(next_edge, next_edge + n))
        next_edge += n
        edges_of.append(ids)
        for i, (over, k, s) in enumerate(comp):
            rec = info.setdefault(k, {"sign": s})
            if rec["sign"] != s:
                raise NonRealizable(f"crossing {k} carries both signs")
            key = "over" if over else "under"
            if key in rec:
                raise NonRealizable(f"crossing {k} has two {key} passages")
            rec[key] = (ids[i - 1], ids[i])
    crossings = []
    for k in sorted(info):
        rec = info[k]
        if "over" not in rec or "under" not in rec:
            raise NonRealizable(f"crossing {k} lacks an over or an under passage")
        (ui, uo), (oi, oo) = rec["under"], rec["over"]
        if rec["sign"] < 0:
            crossings.append(Crossing((ui, oi, uo, oo), True))
        else:
            crossings.append(Crossing((ui, oo, uo, oi), False))
    edge_labels = {}
    for idx, ids in enumerate(edges_of):
        lab = auto_label(idx)
        if ids is None:
            continue
        for e in ids:
            edge_labels[e] = lab
    loop_items = []
    li = 0
    for idx, ids in enumerate(edges_of):
        if ids is None:
            loop_items.append((loops[li], auto_label(idx)))
            li += 1
    d = Diagram.build(crossings, edge_labels, loop_items)
    d.check_planar()
    return d


# ---- linking numbers ----------------------------------------------------

def linking_matrix(d: Diagram) -> LkMatrix:
    twice: dict[tuple[str, str], int] = {}
    for ci, c in enumerate(d.crossings):
        u, o = d.strand_labels(ci)
        if u != o:
            key = (min(u, o), max(u, o))
            twice[key] = twice.get(key, 0) + c.sign
    for key, v in twice.items():
        if v % 2:
            raise NonRealizable(f"odd crossing count between {key}")
    return LkMatrix(d.labels, {k: v // 2 for k, v in twice.items()})


def is_proper(d: Diagram) -> bool:
    lk = linking_matrix(d)
    return all(lk.row_sum(x) % 2 == 0 for x in lk.labels)


# ---- whole-diagram transforms -------------------------------------------

def reverse_components(d: Diagram, labels: Iterable[str]) -> Diagram:
    """Reverse the orientation of the named components; edge ids are kept."""
    flip = {e for e, lab in d.component_of.items() if lab in set(labels)}
    xs = []
    for c in d.crossings:
        inc = [c.incoming(k) != (c.slots[k] in flip) for k in range(4)]
        r = 0 if inc[0] else 2
        slots = c.slots[r:] + c.slots[:r]
        xs.append(Crossing(slots, inc[(r + 1) % 4]))
    return _rebuild(d, xs)


def _rebuild(d: Diagram, xs) -> Diagram:
    loops = [(comp.edges[0], comp.label) for comp in d.components if d.is_free_loop(comp)]
    return Diagram.build(xs, d.component_of, loops)


def mirror(d: Diagram) -> Diagram:
    """Exchange over and under at every crossing."""
    return _rebuild(d, [c.flipped() for c in d.crossings])
