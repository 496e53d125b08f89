"""Four-crossing moves (pass, #, 1-2), the step executor and macro expansions."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import reidemeister as R
from .canon import canonical_relabel, canonicalize
from .diagram import Crossing, Diagram
from .errors import KindMismatch, StaleSite, StepFailure
from .reidemeister import Step, simplify

__all__ = [
    "MoveKind",
    "MoveSite",
    "MoveScript",
    "find_sites",
    "apply_move",
    "flip_crossings",
    "projection_key",
    "execute",
    "Runner",
    "expand_pass_as_onetwo",
    "expand_onetwo_as_sharp",
    "expand_script",
    "simplify",
    "SITE_KINDS",
]


class MoveKind(str, Enum):
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    PASS = "pass"
    SHARP = "sharp"
    ONETWO = "onetwo"

    @classmethod
    def parse(cls, text: str) -> "MoveKind":
        t = text.strip().lower().replace("-", "").replace("#", "sharp").replace("_", "")
        aliases = {"12": "onetwo", "onetwomove": "onetwo", "passmove": "pass"}
        return cls(aliases.get(t, t))


SITE_KINDS = (MoveKind.PASS, MoveKind.SHARP, MoveKind.ONETWO)

PARALLEL, ANTIPARALLEL = "parallel", "antiparallel"


@dataclass(frozen=True)
class MoveSite:
    """A quadrilateral face whose four corner crossings can be flipped together.

    The p pair is always the pair passing over.  ``c11`` is where p1 meets q1,
    ``c12`` where p1 meets q2 and so on; p1 runs between c11 and c12 and q1
    between c11 and c21.
    """

    kind: MoveKind
    crossings: tuple[int, int, int, int]  # c11, c12, c21, c22
    p: tuple[int, int]
    q: tuple[int, int]
    p_class: str
    q_class: str
    face: int
    over_side: str = "firstPairOver"
    diagram: Diagram | None = field(default=None, compare=False, repr=False)

    def step(self) -> Step:
        return Step(self.kind.value, "site", (("kind", self.kind.value), ("crossings", self.crossings)))

    def strand_components(self) -> dict[str, str]:
        d = self.diagram
        names = dict(zip(("p1", "p2"), self.p)) | dict(zip(("q1", "q2"), self.q))
        return {k: d.component_of[e] for k, e in names.items()}


def _kind_of(p_class: str, q_class: str) -> MoveKind:
    if p_class == q_class == ANTIPARALLEL:
        return MoveKind.PASS
    if p_class == q_class == PARALLEL:
        return MoveKind.SHARP
    return MoveKind.ONETWO


def find_sites(d: Diagram, kind: MoveKind | str | None = None) -> list[MoveSite]:
    """All 4-crossing sites, one per crossing set, in face order."""
    if kind is not None:
        kind = MoveKind.parse(kind) if isinstance(kind, str) else kind
    out: list[MoveSite] = []
    seen = set()
    for f in d.faces:
        if len(f) != 4:
            continue
        cs = [c for c, _ in f.corners]
        if len(set(cs)) != 4:
            continue
        # side i runs between corner i and corner i+1; over at its start?
        over = []
        for i, (ci, j) in enumerate(f.corners):
            k = (j + 1) % 4
            cj, kk = d.partner(ci, k)
            if cj != cs[(i + 1) % 4]:
                break
            over.append((k % 2 == 1, kk % 2 == 1))
        else:
            if all(o == (True, True) for o in over[0::2]) and all(o == (False, False) for o in over[1::2]):
                pi = 0
            elif all(o == (True, True) for o in over[1::2]) and all(o == (False, False) for o in over[0::2]):
                pi = 1
            else:
                continue
            key = frozenset(cs)
            if key in seen:
                continue
            e, a = f.edges, f.agree
            # p1 = side pi, p2 = side pi+2, q2 = side pi+1, q1 = side pi+3
            p1, q2, p2, q1 = (e[(pi + t) % 4] for t in range(4))
            ap1, aq2, ap2, aq1 = (a[(pi + t) % 4] for t in range(4))
            c11, c12, c22, c21 = (cs[(pi + t) % 4] for t in range(4))
            # opposite sides of a face are traversed in opposite directions
            p_class = PARALLEL if ap1 != ap2 else ANTIPARALLEL
            q_class = PARALLEL if aq1 != aq2 else ANTIPARALLEL
            k = _kind_of(p_class, q_class)
            seen.add(key)
            if kind is None or k == kind:
                out.append(MoveSite(k, (c11, c12, c21, c22), (p1, p2), (q1, q2),
                                    p_class, q_class, f.index, diagram=d))
    return out


def flip_crossings(d: Diagram, idxs) -> Diagram:
    idxs = set(idxs)
    xs = tuple(c.flipped() if i in idxs else c for i, c in enumerate(d.crossings))
    return Diagram(xs, d.components)


def projection_key(d: Diagram) -> tuple:
    """The diagram with crossing information forgotten: each crossing's slots
    up to rotation, edge directions kept."""
    keys = [min(c.slots[k:] + c.slots[:k] for k in range(4)) for c in d.crossings]
    return tuple(sorted(keys)), d.free_loops


def _locate(d: Diagram, crossings, kind: MoveKind | None) -> MoveSite:
    want = frozenset(crossings)
    for s in find_sites(d):
        if frozenset(s.crossings) == want:
            if kind is not None and s.kind != kind:
                raise StaleSite(f"site {sorted(want)} is a {s.kind.value} site, not {kind.value}")
            return s
    raise StaleSite(f"no 4-crossing site on crossings {sorted(want)}")


def apply_move(d: Diagram, site: MoveSite | R.RSite) -> Diagram:
    """Apply a located move; 4-crossing kinds flip the four site crossings."""
    if isinstance(site, R.RSite):
        fn = {"r1": R.r1_remove, "r2": R.r2_remove, "r3": R.r3}[site.kind]
        return fn(d, site.face)
    if site.diagram is not None and site.diagram is not d and canonicalize(site.diagram, True) != canonicalize(d, True):
        raise StaleSite("site belongs to a different diagram")
    found = _locate(d, site.crossings, site.kind)
    return flip_crossings(d, found.crossings)


# ---- step execution -------------------------------------------------------

def _face_check(d: Diagram, s: Step, kind: str):
    face = s.get("face")
    sites = {"r1": R.r1_sites, "r2": R.r2_sites, "r3": R.r3_sites}[kind](d)
    want = tuple(sorted(s.get("crossings", ())))
    for site in sites:
        if (face is None or site.face == face) and (not want or site.crossings == want):
            return site
    raise StaleSite(f"no {kind} site at face {face} on crossings {list(want)}")


def execute(d: Diagram, s: Step):
    """Run one step on ``d`` as given (no relabelling).

    Returns ``(diagram, info)`` where info lists new edge ids and the crossing
    bookkeeping needed to track identities across steps.
    """
    top = max(d.edges, default=0)
    info = {"new_edges": [], "removed": (), "added": 0}
    v = s.verb
    if v == "r1+":
        if s.name != "kink":
            raise StaleSite("r1+ takes a kink(...) locator")
        e = s.get("edge")
        loop = e in d.component_of and any(d.is_free_loop(c) and c.edges[0] == e for c in d.components)
        out = R.r1_add(d, e, s.get("side", "left"), int(s.get("sign", 1)))
        info["new_edges"] = [top + 1] if loop else [top + 1, top + 2]
        info["added"] = 1
    elif v == "r2+":
        if s.name != "finger":
            raise StaleSite("r2+ takes a finger(...) locator")
        out = R.r2_add(d, s.get("face"), s.get("edge"), s.get("across"), bool(s.get("over", True)))
        info["new_edges"] = [top + 1, top + 2, top + 3, top + 4]
        info["added"] = 2
    elif v in ("r1-", "r2-", "r3"):
        kind = {"r1-": "r1", "r2-": "r2", "r3": "r3"}[v]
        if s.get("kind", kind) != kind:
            raise StaleSite(f"verb {v} needs kind={kind}")
        site = _face_check(d, s, kind)
        out = apply_move(d, site)
        if kind != "r3":
            info["removed"] = site.crossings
    elif v in ("pass", "sharp", "onetwo"):
        kind = MoveKind(v)
        if s.get("kind", v) != v:
            raise StaleSite(f"verb {v} needs kind={v}")
        site = _locate(d, s.get("crossings", ()), kind)
        out = flip_crossings(d, site.crossings)
    elif v in ("band", "split"):
        from . import surgery

        out, extra = surgery.execute_step(d, s)
        info.update(extra)
    else:
        raise StepFailure(f"unknown verb {v!r}")
    return out, info


class Runner:
    """Applies steps to canonical diagrams while tracking crossing and edge identities."""

    def __init__(self, d: Diagram):
        self.d, emap, cmap = canonical_relabel(d, maps=True)
        self.tags = [None] * len(cmap)
        for old, new in cmap.items():
            self.tags[new] = old
        self.edges: dict[str, int] = {}
        self.emap0 = emap
        self.steps: list[Step] = []

    def track(self, name: str, original_edge: int):
        self.edges[name] = self.emap0[original_edge]

    def crossing(self, tag) -> int:
        return self.tags.index(tag)

    def do(self, s: Step) -> list[int]:
        raw, info = execute(self.d, s)
        removed = set(info["removed"])
        tags = [t for i, t in enumerate(self.tags) if i not in removed] + ["new"] * info["added"]
        self.d, emap, cmap = canonical_relabel(raw, maps=True)
        self.tags = [None] * len(tags)
        for old, new in cmap.items():
            self.tags[new] = tags[old]
        self.edges = {k: emap[e] for k, e in self.edges.items() if e in emap}
        self.steps.append(s)
        return [emap[e] for e in info["new_edges"] if e in emap]


@dataclass
class MoveScript:
    start: Diagram
    steps: list[Step]
    end: Diagram | None = None
    start_ref: str | None = None  # catalog key, when the start came from the catalog
    end_ref: str | None = None
    note: str = ""

    def count(self, verb: str) -> int:
        return sum(1 for s in self.steps if s.verb.rstrip("+-") == verb.rstrip("+-"))

    def kind_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            k = s.verb.rstrip("+-")
            out[k] = out.get(k, 0) + 1
        return out

    def replay(self) -> Diagram:
        r = Runner(self.start)
        for s in self.steps:
            r.do(s)
        return r.d


# ---- macro expansions -----------------------------------------------------

def _face_with(d: Diagram, *edges) -> int:
    for f in d.faces:
        if all(f.edges.count(e) == 1 for e in edges):
            return f.index
    raise StepFailure(f"no face bounded once by each of {edges}")


def _site_containing(r: Runner, kind: MoveKind, tags) -> MoveSite:
    want = {r.crossing(t) for t in tags}
    for s in find_sites(r.d, kind):
        # the other two corners must come from the finger, not the old diagram
        if want <= set(s.crossings) and all(r.tags[i] == "new" for i in set(s.crossings) - want):
            return s
    raise StepFailure(f"expected {kind.value} site not found")


def _double_pair(site: MoveSite, inner: MoveKind) -> MoveScript:
    """Curl one strand of an anti-parallel pair and stretch the curl across the
    other pair, so the original site splits into two sites of kind ``inner``."""
    d = site.diagram
    c11, c12, c21, c22 = site.crossings
    if site.p_class == ANTIPARALLEL:
        x1, y1, y2, over = site.p[0], site.q[0], site.q[1], True
        pair_a, pair_b = (c11, c12), (c21, c22)
    else:
        x1, y1, y2, over = site.q[0], site.p[0], site.p[1], False
        pair_a, pair_b = (c11, c21), (c12, c22)
    c = d.crossings[c11]
    k = c.slots.index(x1) if x1 in c.slots else None
    if k is None:
        raise StepFailure("site side not incident to its corner")
    arm = c.slots[(k + 2) % 4]
    quad = d.faces[site.face]
    ay = quad.agree[quad.edges.index(y1)]
    outer = next(f for f in d.faces if f.index != quad.index and (y1, not ay) in zip(f.edges, f.agree))
    try:
        a_arm = outer.agree[outer.edges.index(arm)]
    except ValueError:
        raise StepFailure("curl face does not touch the strand arm") from None
    side = "right" if a_arm else "left"

    r = Runner(d)
    r.track("arm", arm)
    r.track("y1", y1)
    r.track("y2", y2)
    new = r.do(Step("r1+", "kink", (("edge", r.edges["arm"]), ("side", side), ("sign", 1))))
    loop = new[-1]
    f1 = _face_with(r.d, loop, r.edges["y1"])
    new = r.do(Step("r2+", "finger", (("face", f1), ("edge", loop), ("across", r.edges["y1"]), ("over", over))))
    tip = new[0]
    f2 = _face_with(r.d, tip, r.edges["y2"])
    r.do(Step("r2+", "finger", (("face", f2), ("edge", tip), ("across", r.edges["y2"]), ("over", over))))
    for pair in (pair_a, pair_b):
        s = _site_containing(r, inner, pair)
        r.do(s.step())
    for _ in range(2):
        for s in R.r2_sites(r.d):
            if all(r.tags[i] == "new" for i in s.crossings):
                r.do(s.step())
                break
        else:
            raise StepFailure("retraction bigon not found")
    for s in R.r1_sites(r.d):
        if r.tags[s.crossings[0]] == "new":
            r.do(s.step())
            break
    else:
        raise StepFailure("curl not found")
    return MoveScript(d, r.steps, r.d)


def expand_pass_as_onetwo(site: MoveSite) -> MoveScript:
    """Pass move as R1, R2, R2, 1-2, 1-2, R2, R2, R1."""
    if site.kind != MoveKind.PASS:
        raise KindMismatch(f"expected a pass site, got {site.kind.value}")
    return _double_pair(site, MoveKind.ONETWO)


def expand_onetwo_as_sharp(site: MoveSite) -> MoveScript:
    """1-2 move as two #-moves plus Reidemeister moves."""
    if site.kind != MoveKind.ONETWO:
        raise KindMismatch(f"expected a 1-2 site, got {site.kind.value}")
    return _double_pair(site, MoveKind.SHARP)


def expand_script(script: MoveScript, source: MoveKind, target: MoveKind) -> MoveScript:
    """Replace every ``source`` step of a script by its expansion into ``target`` steps."""
    table = {(MoveKind.PASS, MoveKind.ONETWO): expand_pass_as_onetwo,
             (MoveKind.ONETWO, MoveKind.SHARP): expand_onetwo_as_sharp}
    r = Runner(script.start)
    for s in script.steps:
        if s.verb == source.value:
            site = _locate(r.d, s.get("crossings"), source)
            sub = table[(source, target)](site)
            for t in sub.steps:
                r.do(t)
        else:
            r.do(s)
    return MoveScript(script.start, r.steps, r.d, script.start_ref, script.end_ref, script.note)
