"""Fusion bands, split unions and the four-fusion realisation of a 1-2 move."""
from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, Draft
from .errors import FaceMismatch, InvariantViolation, OrientationClash, SameComponentBand, StaleSite
from .reidemeister import Step, make_crossing

__all__ = ["BandSpec", "fusion", "split_union", "execute_step", "merged_label", "onetwo_via_fusions"]

NE, NW, SW, SE = 45, 135, 225, 315


@dataclass(frozen=True)
class BandSpec:
    """An untwisted (or twisted) band inside one face joining two edges.

    ``half_twists`` inserts that many crossings between the two new arcs;
    positive twists give positive crossings.
    """

    face: int
    left: int
    right: int
    half_twists: int = 0

    def step(self) -> Step:
        return Step("band", "band", (("face", self.face), ("left", self.left),
                                     ("right", self.right), ("twists", self.half_twists)))


def merged_label(d: Diagram, a: str, b: str) -> str:
    lab = a + b
    taken = set(d.labels) - {a, b}
    while lab in taken:
        lab += "'"
    return lab


def _side(d: Diagram, face: int | None, e: int):
    """Agree flag of ``e`` on ``face``, or None when ``e`` does not bound it."""
    if face is None or not 0 <= face < len(d.faces):
        return None
    f = d.faces[face]
    flags = {a for x, a in zip(f.edges, f.agree) if x == e}
    if len(flags) > 1:
        raise FaceMismatch(f"edge {e} bounds face {face} from both sides")
    return flags.pop() if flags else None


def _piece_of(d: Diagram, e: int):
    if e not in d._ends[0]:
        return None
    ci = d.head(e)[0]
    return next(i for i, p in enumerate(d.pieces) if ci in p)


def fusion(d: Diagram, band: BandSpec) -> Diagram:
    """Join two components by a band; the merged component gets a joined label.

    Both attaching edges must bound ``band.face`` unless they lie on
    different pieces of a split diagram, in which case the second piece is
    placed inside the face, turned so that the band meets it correctly.
    """
    e1, e2, n = band.left, band.right, band.half_twists
    for e in (e1, e2):
        if e not in d.component_of:
            raise StaleSite(f"no edge {e}")
    l1, l2 = d.component_of[e1], d.component_of[e2]
    if l1 == l2:
        raise SameComponentBand(f"edges {e1} and {e2} both lie on component {l1!r}")
    new_label = merged_label(d, l1, l2)
    loop1 = d.is_free_loop(d.component(l1))
    loop2 = d.is_free_loop(d.component(l2))

    dr = d.draft()
    for e, lab in list(dr.labels.items()):
        if lab in (l1, l2):
            dr.labels[e] = new_label
    if loop1 or loop2:
        # a band to a split unknotted circle changes nothing up to isotopy
        drop = e1 if loop1 else e2
        if loop1 and loop2:
            drop = e2
        dr.loops.remove(drop)
        dr.labels.pop(drop)
        return dr.build()

    a1, a2 = _side(d, band.face, e1), _side(d, band.face, e2)
    if _piece_of(d, e1) != _piece_of(d, e2):
        if a1 is None and a2 is None:
            raise FaceMismatch(f"face {band.face} is bounded by neither {e1} nor {e2}")
        # the other piece can be turned either way round inside the face
        if a1 is None:
            a1 = a2 if n % 2 == 0 else not a2
        else:
            a2 = a1 if n % 2 == 0 else not a1
    elif a1 is None or a2 is None:
        raise FaceMismatch(f"edges {e1} and {e2} do not both bound face {band.face}")
    if (a1 == a2) != (n % 2 == 0):
        raise OrientationClash(
            f"band from {e1} to {e2} with {n} half twists joins equally oriented arcs"
        )

    h1 = dr.find_slot(e1, incoming=True)
    h2 = dr.find_slot(e2, incoming=True)
    if n == 0:
        dr.crossings[h1[0]][0][h1[1]] = e2
        dr.crossings[h2[0]][0][h2[1]] = e1
    else:
        _twisted(dr, e1, e2, h1, h2, n, up=a1)
    out = dr.build()
    try:
        out.check_planar()
    except Exception as ex:  # pragma: no cover - guarded by the face checks above
        raise InvariantViolation(f"fusion produced a non-planar code: {ex}") from None
    return out


def _twisted(dr: Draft, e1, e2, h1, h2, n, up):
    """Run the two band arcs through ``|n|`` crossings.

    Local picture: ``e1`` vertical on the left, the face to its right, the
    band running east.  ``x`` continues the incoming part of ``e1`` eastward,
    ``y`` the incoming part of ``e2`` westward.
    """
    lab = dr.labels[e1]
    m = abs(n)
    xs = [e1] + [dr.new_edge(lab) for _ in range(m)]
    ys = [e2] + [dr.new_edge(lab) for _ in range(m)]
    dr.crossings[h2[0]][0][h2[1]] = xs[-1]
    dr.crossings[h1[0]][0][h1[1]] = ys[-1]
    x_low = up  # e1 running north leaves its incoming part at the bottom
    for k in range(m):
        x_in, x_out = xs[k], xs[k + 1]
        y_in, y_out = ys[m - 1 - k], ys[m - k]
        if x_low:
            hes = [(SW, x_in, True), (NE, x_out, False), (SE, y_in, True), (NW, y_out, False)]
        else:
            hes = [(NW, x_in, True), (SE, x_out, False), (NE, y_in, True), (SW, y_out, False)]
        # positive twists put the south-west to north-east arc on top
        rising = {SW, NE} if n > 0 else {NW, SE}
        c = make_crossing([(ang, e, inc, ang not in rising) for ang, e, inc in hes])
        dr.add(c.slots, c.ab_in)
        x_low = not x_low


def split_union(d1: Diagram, d2: Diagram) -> Diagram:
    """Disjoint union; ``d2``'s edges are shifted and clashing labels primed."""
    off = max(d1.edges, default=0)
    taken = set(d1.labels)
    rename = {}
    for lab in d2.labels:
        new = lab
        while new in taken:
            new += "'"
        taken.add(new)
        rename[lab] = new
    xs = [(tuple(e + off for e in c.slots), c.ab_in) for c in d2.crossings]
    labels = dict(d1.component_of)
    labels.update({e + off: rename[lab] for e, lab in d2.component_of.items()})
    loops = [(comp.edges[0], comp.label) for comp in d1.components if d1.is_free_loop(comp)]
    loops += [(comp.edges[0] + off, rename[comp.label]) for comp in d2.components if d2.is_free_loop(comp)]
    return Diagram.build(list(d1.crossings) + xs, labels, loops)


def execute_step(d: Diagram, s: Step):
    """Executor for the ``band`` and ``split`` verbs."""
    if s.verb == "band":
        if s.name != "band":
            raise StaleSite("band takes a band(...) locator")
        spec = BandSpec(s.get("face"), s.get("left"), s.get("right"), int(s.get("twists", 0)))
        return fusion(d, spec), {"added": abs(spec.half_twists)}
    if s.verb == "split":
        if s.name != "split":
            raise StaleSite("split takes a split(...) locator")
        other = resolve_template(s)
        off = max(d.edges, default=0)
        info = {"new_edges": [e + off for e in other.edges], "added": other.n_crossings}
        return split_union(d, other), info
    raise StaleSite(f"verb {s.verb!r} is not a surgery step")


def resolve_template(s: Step) -> Diagram:
    from .catalog import builtin
    from .diagram import mirror, parse_pd, reverse_components

    key = s.get("with")
    if key is None:
        raise StaleSite("split needs with=<catalog key or quoted PD>")
    d = parse_pd(key) if "[" in str(key) or str(key) == "O" else builtin(str(key))
    rev = s.get("reverse", ())
    if isinstance(rev, str):
        rev = (rev,)
    if rev:
        d = reverse_components(d, rev)
    if s.get("mirror", False):
        d = mirror(d)
    return d


# ---- four fusions with L0 ---------------------------------------------------

def _grid_faces(t: Diagram, over_labels):
    """Square faces of the template meeting all four components where the
    components in ``over_labels`` pass over."""
    for f in t.faces:
        if len(f) != 4 or len({t.component_of[e] for e in f.edges}) != 4:
            continue
        ok = True
        for (ci, j), e in zip(f.corners, f.edges):
            k = t.crossings[ci].slots.index(e)
            if (t.component_of[e] in over_labels) != (k % 2 == 1):
                ok = False
        if ok:
            yield f


def _template_for(site):
    """Pick the L0 variant, grid square and side matching for a 1-2 site.

    The band from each site strand goes straight across the site's square to
    the facing side of a grid square of L0 placed inside it.  Going round the
    two squares the facing sides come in opposite cyclic order.
    """
    from .catalog import builtin
    from .diagram import reverse_components

    d = site.diagram
    quad = d.faces[site.face]
    agree = dict(zip(quad.edges, quad.agree))
    p1, p2 = site.p
    q1, q2 = site.q
    base = builtin("L0_fig7")  # a, b parallel copies; c, d anti-parallel copies
    par, anti = ("a", "b"), ("c", "d")
    p_labels = par if site.p_class == "parallel" else anti
    for rev in ((), anti):
        t = reverse_components(base, rev) if rev else base
        for g in _grid_faces(t, p_labels):
            ge = g.edges
            for rot in range(4):
                image = {p1: ge[rot], q1: ge[(rot + 1) % 4], p2: ge[(rot + 2) % 4], q2: ge[(rot + 3) % 4]}
                if t.component_of[image[p1]] not in p_labels:
                    continue
                gagree = dict(zip(ge, g.agree))
                if all(agree[e] == gagree[image[e]] for e in image):
                    return rev, t, image
    raise InvariantViolation("no L0 placement fits this site")  # pragma: no cover


def onetwo_via_fusions(d: Diagram, site):
    """A 1-2 move as a split union with L0 followed by four fusions."""
    from .errors import KindMismatch
    from .moves import MoveKind, MoveScript, Runner

    if site.kind != MoveKind.ONETWO:
        raise KindMismatch(f"expected a 1-2 site, got {site.kind.value}")
    if site.diagram is None:
        site = __import__("dataclasses").replace(site, diagram=d)
    rev, t, image = _template_for(site)
    quad = d.faces[site.face]
    agree = dict(zip(quad.edges, quad.agree))
    r = Runner(d)
    order = (site.p[0], site.q[0], site.p[1], site.q[1])
    for i, e in enumerate(order):
        r.track(f"s{i}", e)
    args = (("with", "L0_fig7"),) + ((("reverse", rev),) if rev else ())
    new = r.do(Step("split", "split", args))
    tmap = dict(zip(t.edges, new))
    for i, e in enumerate(order):
        r.edges[f"t{i}"] = tmap[image[e]]
    for i, e in enumerate(order):
        mine, theirs = r.edges[f"s{i}"], r.edges[f"t{i}"]
        face = _band_face(r.d, mine, theirs, agree[e])
        r.do(Step("band", "band", (("face", face), ("left", mine), ("right", theirs), ("twists", 0))))
    return MoveScript(d, r.steps, r.d, note="1-2 move by four fusions with L0")


def _band_face(d: Diagram, e1: int, e2: int, side: bool) -> int:
    for f in d.faces:
        fl = dict(zip(f.edges, f.agree))
        if f.edges.count(e1) == 1 and fl[e1] == side and (f.edges.count(e2) == 1 or _piece_of(d, e1) != _piece_of(d, e2)):
            return f.index
    raise InvariantViolation(f"no common face for band from {e1} to {e2}")
