"""Linking-number obstructions, move-number search and Arf-based equivalence."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .arf import ArfValue, arf
from .canon import canonical_pair, canonical_relabel, canonicalize
from .diagram import Diagram, LkMatrix, is_proper
from .errors import ArfObstruction, ImproperInput, KindMismatch, MalformedShape
from .moves import (ANTIPARALLEL, PARALLEL, MoveKind, MoveScript, MoveSite, apply_move, expand_script,
                    find_sites)
from .reidemeister import Step, r2_add, r3, r3_sites, simplify

__all__ = [
    "SiteShape",
    "DeltaMatrix",
    "CaseRow",
    "ObstructionReport",
    "SearchResult",
    "shape_of",
    "lk_delta",
    "prove_no_single_move",
    "search_move_number",
    "decide_equivalence",
]

OBSTRUCTED, NOT_OBSTRUCTED = "Obstructed", "NotObstructed"


@dataclass(frozen=True)
class SiteShape:
    """An abstract site: the p strands run east-west, the q strands north-south.

    Directions are +1 for east (p) or north (q) and -1 otherwise.  With p on
    top a crossing has sign ``dp * dq``; with q on top the sign flips.
    """

    p: tuple[str, str]
    q: tuple[str, str]
    p_dirs: tuple[int, int]
    q_dirs: tuple[int, int]
    p_over: bool = True

    def __post_init__(self):
        if len(self.p) != 2 or len(self.q) != 2:
            raise MalformedShape("a site has two strands in each pair")
        if any(not isinstance(lab, str) or not lab for lab in self.p + self.q):
            raise MalformedShape("strand labels must be non-empty strings")
        if any(x not in (1, -1) for x in self.p_dirs + self.q_dirs) or len(self.p_dirs + self.q_dirs) != 4:
            raise MalformedShape("strand directions must be +1 or -1")

    @property
    def p_class(self) -> str:
        return PARALLEL if self.p_dirs[0] == self.p_dirs[1] else ANTIPARALLEL

    @property
    def q_class(self) -> str:
        return PARALLEL if self.q_dirs[0] == self.q_dirs[1] else ANTIPARALLEL

    @property
    def kind(self) -> MoveKind:
        classes = {self.p_class, self.q_class}
        if classes == {PARALLEL}:
            return MoveKind.SHARP
        if classes == {ANTIPARALLEL}:
            return MoveKind.PASS
        return MoveKind.ONETWO

    def crossing_signs(self):
        """``((p_i, q_j), sign)`` for the four site crossings."""
        s = 1 if self.p_over else -1
        for i, j in itertools.product(range(2), range(2)):
            yield (i, j), s * self.p_dirs[i] * self.q_dirs[j]


class DeltaMatrix(LkMatrix):
    """Change of every linking number under one move."""

    def row_sums_even(self) -> bool:
        return all(self.row_sum(x) % 2 == 0 for x in self.labels)


def shape_of(site: MoveSite) -> SiteShape:
    """Abstract shape of a located site, with component labels as strand names.

    The site face is traversed clockwise, so its sides p1, q2, p2, q1 sit on
    the top, right, bottom and left of the square.
    """
    d = site.diagram
    f = d.faces[site.face]
    agree = dict(zip(f.edges, f.agree))
    p1, p2 = site.p
    q1, q2 = site.q
    dirs_p = (1 if agree[p1] else -1, -1 if agree[p2] else 1)
    dirs_q = (1 if agree[q1] else -1, -1 if agree[q2] else 1)
    lab = d.component_of
    return SiteShape((lab[p1], lab[p2]), (lab[q1], lab[q2]), dirs_p, dirs_q, True)


def lk_delta(shape: SiteShape, labels=None) -> DeltaMatrix:
    """Linking number changes when all four site crossings are flipped."""
    names = list(labels) if labels is not None else sorted(set(shape.p + shape.q))
    missing = set(shape.p + shape.q) - set(names)
    if missing:
        raise MalformedShape(f"strand labels {sorted(missing)} are not components")
    acc: Counter = Counter()
    for (i, j), sign in shape.crossing_signs():
        x, y = shape.p[i], shape.q[j]
        if x != y:
            acc[tuple(sorted((x, y)))] -= sign
    return DeltaMatrix(names, dict(acc))


# ---- obstruction prover ----------------------------------------------------

@dataclass(frozen=True)
class CaseRow:
    tag: str
    shape: SiteShape
    delta: DeltaMatrix
    match: bool

    def to_json(self):
        s = self.shape
        return {
            "case": self.tag,
            "over": "first" if s.p_over else "second",
            "strands": {"p1": s.p[0], "p2": s.p[1], "q1": s.q[0], "q2": s.q[1]},
            "directions": {"p1": s.p_dirs[0], "p2": s.p_dirs[1], "q1": s.q_dirs[0], "q2": s.q_dirs[1]},
            "delta": self.delta.to_json(),
            "match": self.match,
        }


_CASE_TEXT = {
    MoveKind.ONETWO: ("parallel strands over anti-parallel", "parallel strands under anti-parallel",
                      "parallel", "anti-parallel"),
    MoveKind.PASS: ("first anti-parallel pair over", "first anti-parallel pair under",
                    "first pair", "second pair"),
    MoveKind.SHARP: ("first parallel pair over", "first parallel pair under",
                     "first pair", "second pair"),
}


@dataclass
class ObstructionReport:
    kind: MoveKind
    current: LkMatrix
    target: LkMatrix
    required: DeltaMatrix
    focus: str | None
    cases: list[CaseRow] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return NOT_OBSTRUCTED if any(c.match for c in self.cases) else OBSTRUCTED

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED

    def summary(self) -> list[tuple[str, str, int, int]]:
        """``(tag, description, cases, matches)`` per case tag, in tag order."""
        over_txt, under_txt, first_txt, second_txt = _CASE_TEXT[self.kind]
        counts: dict[str, list[int]] = {}
        for row in self.cases:
            c = counts.setdefault(row.tag, [0, 0])
            c[0] += 1
            c[1] += row.match
        out = []
        for tag in sorted(counts):
            if tag == "Case 0":
                desc = "a component whose linking must change is on no strand"
            else:
                major, minor = tag.split()[1].split(".")
                desc = (over_txt if major == "1" else under_txt) + f"; {self.focus} on the " + (
                    first_txt if minor == "1" else second_txt) + " strands"
            out.append((tag, desc, *counts[tag]))
        return out

    def table(self) -> str:
        lines = [f"move: {self.kind.value}",
                 "required change: " + _fmt(self.required),
                 f"{'case':<9} {'cases':>6} {'match':>6}  description"]
        for tag, desc, n, m in self.summary():
            lines.append(f"{tag:<9} {n:>6} {m:>6}  {desc}")
        witness = next((c for c in self.cases if c.match), None)
        if witness is not None:
            s = witness.shape
            lines.append(f"realised by: p={list(s.p)} q={list(s.q)} p_dirs={list(s.p_dirs)} "
                         f"q_dirs={list(s.q_dirs)} p_over={str(s.p_over).lower()}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)

    def to_json(self):
        return {
            "kind": self.kind.value,
            "current": self.current.to_json(),
            "target": self.target.to_json(),
            "required": self.required.to_json(),
            "focus": self.focus,
            "summary": [{"case": t, "description": d, "cases": n, "matches": m}
                        for t, d, n, m in self.summary()],
            "cases": [c.to_json() for c in self.cases],
            "verdict": self.verdict,
        }


def _fmt(m: LkMatrix) -> str:
    return " ".join(f"{x}{y}={v:+d}" for x, y, v in m.pairs() if v) or "none"


def _direction_patterns(cls: str):
    return ((1, 1), (-1, -1)) if cls == PARALLEL else ((1, -1), (-1, 1))


def prove_no_single_move(current: LkMatrix, target: LkMatrix, kind: MoveKind | str) -> ObstructionReport:
    """Enumerate every abstract site of ``kind`` and test its linking change.

    Strands take any component (repeats allowed), both pairs take every
    direction pattern of their class, and either pair may pass over.  For a
    1-2 move the first pair is the parallel one.
    """
    kind = MoveKind.parse(kind) if isinstance(kind, str) else kind
    if kind not in (MoveKind.PASS, MoveKind.SHARP, MoveKind.ONETWO):
        raise MalformedShape(f"no linking obstruction for {kind.value}")
    if set(current.labels) != set(target.labels):
        raise MalformedShape("current and target matrices have different components")
    labels = current.labels
    req = target - current
    required = DeltaMatrix(labels, {(x, y): v for x, y, v in req.pairs()})
    involved = {x for x, y, v in required.pairs() if v} | {y for x, y, v in required.pairs() if v}
    focus = min(involved) if involved else (labels[0] if labels else None)
    first_cls, second_cls = {
        MoveKind.ONETWO: (PARALLEL, ANTIPARALLEL),
        MoveKind.PASS: (ANTIPARALLEL, ANTIPARALLEL),
        MoveKind.SHARP: (PARALLEL, PARALLEL),
    }[kind]
    report = ObstructionReport(kind, current, target, required, focus)
    for p_over in (True, False):
        for strands in itertools.product(labels, repeat=4):
            p, q = strands[:2], strands[2:]
            for pd in _direction_patterns(first_cls):
                for qd in _direction_patterns(second_cls):
                    shape = SiteShape(p, q, pd, qd, p_over)
                    delta = lk_delta(shape, labels)
                    if not involved <= set(strands):
                        tag = "Case 0"
                    else:
                        tag = f"Case {1 if p_over else 2}.{1 if focus in p else 2}"
                    report.cases.append(CaseRow(tag, shape, delta, delta == required))
    return report


# ---- move-number search --------------------------------------------------

@dataclass
class SearchResult:
    kind: MoveKind
    bound: int | None
    script: MoveScript | None
    nodes: int
    note: str = ""

    @property
    def found(self) -> bool:
        return self.bound is not None

    def to_json(self):
        return {
            "kind": self.kind.value,
            "bound": self.bound,
            "nodes": self.nodes,
            "note": self.note,
            "steps": [str(s) for s in self.script.steps] if self.script else None,
        }


def _free_variants(d: Diagram, radius: int, budget: list[int]):
    """Diagrams reachable by up to ``radius`` R2 additions, each optionally
    followed by one R3 move, with the steps that reach them.  Lazy, so a
    search that succeeds early never builds the rest."""
    yield d, []
    seen = {canonicalize(d)}
    frontier = [(d, [])]
    for _ in range(radius):
        nxt = []
        for cur, path in frontier:
            for step, (x, xkey) in _r2_additions(cur):
                options = [(None, (x, xkey))] + [(s.step(), canonical_pair(r3(x, s.face))) for s in r3_sites(x)]
                for step2, (y, key) in options:
                    if key in seen:
                        continue
                    seen.add(key)
                    budget[0] -= 1
                    p2 = path + [step] + ([step2] if step2 else [])
                    yield y, p2
                    nxt.append((y, p2))
                    if budget[0] <= 0:
                        return
        frontier = nxt


def _r2_additions(d: Diagram):
    for f in d.faces:
        once = [e for e in f.edges if f.edges.count(e) == 1]
        for e1, e2 in itertools.permutations(once, 2):
            for over in (True, False):
                x = canonical_pair(r2_add(d, f.index, e1, e2, over))
                yield Step("r2+", "finger", (("face", f.index), ("edge", e1), ("across", e2), ("over", over))), x


def _bfs(start: Diagram, kind: MoveKind, depth: int, budget: int, radius: int, simplify_budget: int):
    seen = {canonicalize(start)}
    frontier = [(start, [])]
    left = [budget]
    for _ in range(depth):
        nxt = []
        for cur, path in frontier:
            for var, free_steps in _free_variants(cur, radius, left):
                for site in find_sites(var, kind):
                    moved = apply_move(var, site)
                    y, simp = simplify(moved, simplify_budget, trace=True)
                    key = canonicalize(y)
                    left[0] -= 1
                    if key in seen:
                        continue
                    seen.add(key)
                    p2 = path + free_steps + [site.step()] + simp
                    if y.n_crossings == 0:
                        return p2, budget - left[0]
                    nxt.append((y, p2))
                if left[0] <= 0:
                    return None, budget - left[0]
        frontier = nxt
        if not frontier:
            break
    return None, budget - left[0]


def search_move_number(d: Diagram, kind: MoveKind | str, depth: int = 3, budget: int = 100_000,
                       free: int = 2, simplify_budget: int = 1000) -> SearchResult:
    """Least number of ``kind`` moves (Reidemeister moves free) to an unlink.

    Each round of the breadth-first search may first spend up to ``free`` R2
    additions (each optionally followed by an R3 move) to expose sites.  The
    result is an upper bound with a replayable witness, or no witness.
    """
    kind = MoveKind.parse(kind) if isinstance(kind, str) else kind
    if kind not in (MoveKind.PASS, MoveKind.SHARP, MoveKind.ONETWO):
        raise KindMismatch(f"move numbers are searched for pass, sharp and onetwo, not {kind.value}")
    if kind in (MoveKind.PASS, MoveKind.ONETWO):
        a = arf(d)
        if a != ArfValue.ZERO:
            raise ArfObstruction(f"Arf invariant is {a.value}; no sequence of {kind.value} moves reaches an unlink")
    start, steps0 = simplify(d, simplify_budget, trace=True)
    start = canonical_relabel(start)
    if start.n_crossings == 0:
        return SearchResult(kind, 0, MoveScript(d, steps0, start), 0)
    from .diagram import linking_matrix

    lk = linking_matrix(start)
    single_ruled_out = prove_no_single_move(lk, LkMatrix.zero(lk.labels), kind).obstructed
    best: SearchResult | None = None
    total = 0
    if kind == MoveKind.ONETWO:
        # a cheap pass witness doubles into a 1-2 witness
        res = search_move_number(d, MoveKind.PASS, depth, budget, 0, simplify_budget)
        total += res.nodes
        if res.found:
            best = _expanded(res)
    for radius in range(free + 1):
        cap = depth if best is None else min(depth, best.bound - 1)
        if cap < 1 or (cap == 1 and single_ruled_out):
            break
        path, nodes = _bfs(start, kind, cap, budget - total, radius, simplify_budget)
        total += nodes
        if path is not None:
            script = MoveScript(d, steps0 + path)
            script.end = script.replay()
            best = SearchResult(kind, sum(1 for s in path if s.verb == kind.value), script, 0)
        if total >= budget:
            break
    if best is None and kind == MoveKind.ONETWO and free > 0:
        res = search_move_number(d, MoveKind.PASS, depth, budget, free, simplify_budget)
        total += res.nodes
        if res.found:
            best = _expanded(res)
    if best is None:
        return SearchResult(kind, None, None, total, note="no witness within the caps")
    best.nodes = total
    if best.bound == 2 and single_ruled_out:
        best.note = (best.note + "; " if best.note else "") + "exact: one move cannot change the linking numbers"
    return best


def _expanded(res: SearchResult) -> SearchResult:
    script = expand_script(res.script, MoveKind.PASS, MoveKind.ONETWO)
    return SearchResult(MoveKind.ONETWO, 2 * res.bound, script, res.nodes,
                        note="upper bound from expanding a pass witness")


# ---- equivalence -----------------------------------------------------------

def decide_equivalence(d1: Diagram, d2: Diagram, kind: MoveKind | str = MoveKind.ONETWO) -> bool:
    """Pass / 1-2 equivalence of proper links with equal component counts."""
    kind = MoveKind.parse(kind) if isinstance(kind, str) else kind
    if kind not in (MoveKind.PASS, MoveKind.ONETWO):
        raise ImproperInput(f"equivalence is decided for pass and 1-2 moves, not {kind.value}")
    for d in (d1, d2):
        if not is_proper(d):
            raise ImproperInput("both links must be proper")
    if d1.n_components != d2.n_components:
        raise ImproperInput(
            f"component counts differ ({d1.n_components} vs {d2.n_components}); moves preserve them"
        )
    return arf(d1) == arf(d2)
