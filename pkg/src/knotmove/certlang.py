"""Move scripts (.mvs): parser, printer, replay verifier and certificate checks.

A script names a start diagram, optionally an expected end, and then one
step per line::

    note Reconstruction: square knot unknotted by a single pass move
    start square_knot_K
    expect unknot
    r2+ finger(face=3, edge=5, across=9, over=true)
    check X-[1,5,2,4] ...
    pass site(kind=pass, crossings=[0,1,4,5])  # the pass move itself

Crossing indices and face numbers refer to the canonical relabelling of the
running diagram.  ``check`` lines assert the canonical code reached after the
preceding step (or of the start, before any step).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .arf import ArfValue, arf
from .canon import canonicalize
from .diagram import Diagram, is_proper, linking_matrix, parse_gauss, parse_pd
from .errors import (
    ClaimMismatch,
    InvariantViolation,
    KnotMoveError,
    ParseError,
    ScriptSyntaxError,
    StepFailure,
    UnknownCatalogKey,
    UnknownVerb,
)
from .moves import MoveKind, Runner
from .reidemeister import Step, simplify

__all__ = [
    "VERBS",
    "ScriptStep",
    "ScriptDocument",
    "StepRecord",
    "ReplayReport",
    "Claim",
    "parse_script",
    "print_script",
    "normalize",
    "load_script",
    "replay",
    "check_certificate",
    "script_from_move_script",
]

VERBS = ("r1+", "r1-", "r2+", "r2-", "r3", "pass", "sharp", "onetwo", "band", "split")
REIDEMEISTER = {"r1+", "r1-", "r2+", "r2-", "r3"}
HEADERS = ("start", "expect", "note", "check")

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<int>-?\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<punct>[()\[\],=])
    )""",
    re.VERBOSE,
)


# ---- document model -------------------------------------------------------

@dataclass
class ScriptStep:
    step: Step
    line: int
    column: int
    comment: str | None = None
    check: str | None = None

    @property
    def verb(self) -> str:
        return self.step.verb


@dataclass
class Source:
    """A diagram reference from a ``start`` or ``expect`` line."""

    text: str
    ref: str | None  # catalog key
    diagram: Diagram
    gauss: bool = False

    def render(self) -> str:
        if self.ref is not None:
            return self.ref
        return f"gauss {self.text}" if self.gauss else self.text


@dataclass
class ScriptDocument:
    start: Source
    expect: Source | None = None
    steps: list[ScriptStep] = field(default_factory=list)
    note: str = ""
    start_check: str | None = None
    # ordered (kind, payload) entries for printing, comments included
    items: list[tuple[str, object]] = field(default_factory=list, repr=False)

    def kind_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            k = s.verb.rstrip("+-")
            out[k] = out.get(k, 0) + 1
        return out

    def count(self, verb: str) -> int:
        return sum(1 for s in self.steps if s.verb.rstrip("+-") == verb.rstrip("+-"))


# ---- parsing ----------------------------------------------------------------

def _split_comment(raw: str):
    """Split off a trailing ``# comment`` that is not inside quotes."""
    quoted = False
    for i, ch in enumerate(raw):
        if ch == '"' and (i == 0 or raw[i - 1] != "\\"):
            quoted = not quoted
        elif ch == "#" and not quoted:
            return raw[:i].rstrip(), raw[i + 1:].strip()
    return raw.rstrip(), None


_NAMES = {"int": "a number", "ident": "a name", "str": "a quoted string", "end": "end of line"}


class _Lexer:
    def __init__(self, text: str, line: int, col0: int):
        self.text, self.line, self.col0 = text, line, col0
        self.pos = 0
        self.toks = []
        while self.pos < len(text):
            if not text[self.pos:].strip():
                break
            m = _TOKEN.match(text, self.pos)
            if not m or m.end() == self.pos:
                col = self.pos + len(text[self.pos:]) - len(text[self.pos:].lstrip())
                raise ScriptSyntaxError(f"unexpected character {text[col]!r}", line, col0 + col + 1,
                                        expected=("a number", "a name", "a quoted string", "( ) [ ] , ="))
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), col0 + start + 1))
            self.pos = m.end()
        self.toks.append(("end", "", col0 + len(text.rstrip()) + 1))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, *want):
        kind, val, col = self.toks[self.i]
        ok = any(kind == w or (kind == "punct" and val == w) for w in want)
        if not ok:
            shown = "end of line" if kind == "end" else repr(val)
            raise ScriptSyntaxError(f"unexpected {shown}", self.line, col,
                                    expected=tuple(_NAMES.get(w, f"'{w}'") for w in want))
        self.i += 1
        return kind, val, col


def _value(lx: _Lexer):
    kind, val, col = lx.peek()
    if kind == "punct" and val == "[":
        lx.take("[")
        items = []
        if lx.peek()[1] == "]":
            lx.take("]")
            return ()
        while True:
            items.append(_value(lx))
            k, v, _ = lx.take(",", "]")
            if v == "]":
                return tuple(items)
    k, v, _ = lx.take("int", "ident", "str", "[")
    if k == "int":
        return int(v)
    if k == "str":
        return json.loads(v)
    return {"true": True, "false": False}.get(v, v)


def _locator(text: str, line: int, col0: int) -> tuple[str, tuple]:
    lx = _Lexer(text, line, col0)
    _, name, _ = lx.take("ident")
    lx.take("(")
    args = []
    if lx.peek()[1] != ")":
        while True:
            _, key, kcol = lx.take("ident")
            if any(k == key for k, _ in args):
                raise ScriptSyntaxError(f"argument {key!r} given twice", line, kcol)
            lx.take("=")
            args.append((key, _value(lx)))
            _, v, _ = lx.take(",", ")")
            if v == ")":
                break
    else:
        lx.take(")")
    lx.take("end")
    return name, tuple(args)


def _source(rest: str, line: int, col: int, what: str) -> Source:
    from .catalog import builtin

    if not rest:
        raise ScriptSyntaxError(f"{what} needs a diagram", line, col,
                                expected=("a catalog key", "PD text", "gauss <code>"))
    text = rest.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        text = text[1:-1]
    gauss = False
    if text.startswith("gauss "):
        gauss, text = True, text[6:].strip()
        if len(text) >= 2 and text[0] == text[-1] == '"':
            text = text[1:-1]
    try:
        if gauss:
            return Source(text, None, parse_gauss(text), gauss=True)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", text) and text != "O":
            try:
                return Source(text, text, builtin(text))
            except UnknownCatalogKey:
                err = UnknownCatalogKey(f"line {line}, column {col}: unknown catalog key {text!r}")
                err.line, err.column = line, col
                raise err from None
        return Source(text, None, parse_pd(text))
    except ParseError as ex:
        raise ScriptSyntaxError(f"bad {what} diagram: {ex}", line, col) from None


def parse_script(text: str) -> ScriptDocument:
    """Parse .mvs text; every error carries a 1-based line and column."""
    start = expect = None
    note = ""
    steps: list[ScriptStep] = []
    items: list[tuple[str, object]] = []
    start_check = None
    for n, raw in enumerate(text.splitlines(), start=1):
        if raw.strip().startswith("note ") or raw.strip() == "note":
            rest = raw.strip()[5:].strip()
            note = (note + "\n" + rest) if note else rest
            items.append(("note", rest))
            continue
        body, comment = _split_comment(raw)
        if not body.strip():
            if comment is not None:
                items.append(("comment", comment))
            continue
        indent = len(body) - len(body.lstrip())
        word, _, rest = body.strip().partition(" ")
        rest = rest.strip()
        rest_col = indent + len(word) + 2
        if word in HEADERS:
            if word == "check":
                if not rest:
                    raise ScriptSyntaxError("check needs a canonical code", n, rest_col,
                                            expected=("a canonical code",))
                if start is None:
                    raise ScriptSyntaxError("check before start", n, indent + 1, expected=("start",))
                if steps:
                    if steps[-1].check is not None:
                        raise ScriptSyntaxError("two checks for one step", n, indent + 1)
                    steps[-1].check = rest
                elif start_check is None:
                    start_check = rest
                else:
                    raise ScriptSyntaxError("two checks for the start", n, indent + 1)
                items.append(("check", rest))
            elif word == "start":
                if start is not None:
                    raise ScriptSyntaxError("second start line", n, indent + 1)
                if steps:
                    raise ScriptSyntaxError("start after steps", n, indent + 1)
                start = _source(rest, n, rest_col, "start")
                items.append(("start", start))
            else:
                if expect is not None:
                    raise ScriptSyntaxError("second expect line", n, indent + 1)
                expect = _source(rest, n, rest_col, "expect")
                items.append(("expect", expect))
            if comment is not None:
                items.append(("trailing", comment))
            continue
        if word not in VERBS:
            if word.split("(")[0] in VERBS:
                raise ScriptSyntaxError("missing space between verb and locator", n, indent + 1,
                                        expected=("<verb> <locator>",))
            raise UnknownVerb(f"unknown verb {word!r}", n, indent + 1, expected=VERBS)
        if start is None:
            raise ScriptSyntaxError("step before start", n, indent + 1, expected=("start",))
        name, args = _locator(rest, n, rest_col - 1)
        st = ScriptStep(Step(word, name, args), n, indent + 1, comment)
        steps.append(st)
        items.append(("step", st))
    if start is None:
        raise ScriptSyntaxError("script has no start line", max(1, len(text.splitlines())), 1,
                                expected=("start",))
    return ScriptDocument(start, expect, steps, note, start_check, items)


def load_script(path) -> ScriptDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())


# ---- printing -----------------------------------------------------------------

def print_script(doc: ScriptDocument) -> str:
    """Render in normal form; ``parse_script(print_script(doc))`` equals ``doc``."""
    out: list[str] = []
    items = doc.items or _default_items(doc)
    for kind, payload in items:
        if kind == "comment":
            out.append(f"# {payload}".rstrip())
        elif kind == "trailing":
            out[-1] += f"  # {payload}"
        elif kind == "note":
            out.append(f"note {payload}".rstrip())
        elif kind == "check":
            out.append(f"check {payload}")
        elif kind in ("start", "expect"):
            out.append(f"{kind} {payload.render()}")
        else:
            st = payload
            line = f"{st.step.verb} {st.step.locator_text()}"
            if st.comment is not None:
                line += f"  # {st.comment}"
            out.append(line)
    return "\n".join(out) + "\n"


def _default_items(doc: ScriptDocument):
    items: list[tuple[str, object]] = []
    for line in doc.note.splitlines():
        items.append(("note", line))
    items.append(("start", doc.start))
    if doc.expect is not None:
        items.append(("expect", doc.expect))
    if doc.start_check:
        items.append(("check", doc.start_check))
    for st in doc.steps:
        items.append(("step", st))
        if st.check:
            items.append(("check", st.check))
    return items


def normalize(text: str) -> str:
    """Whitespace normal form: trimmed lines, single spaces outside quotes, no blanks."""
    lines = []
    for raw in text.splitlines():
        parts = re.split(r'("(?:[^"\\]|\\.)*")', raw.strip())
        s = "".join(p if i % 2 else re.sub(r"\s+", " ", p) for i, p in enumerate(parts))
        s = re.sub(r"\s*([,=])\s*", r"\1", s)
        s = re.sub(r"([(\[])\s+", r"\1", s)
        s = re.sub(r"\s+([)\]])", r"\1", s)
        if s:
            lines.append(s)
    return "\n".join(lines)


def script_from_move_script(ms, start_ref: str | None = None, expect_ref=None,
                            note: str = "", checks: bool = True) -> str:
    """Script text for a MoveScript, with a canonical-code check after each step.

    ``expect_ref`` is a catalog key or a Diagram written out as PD text.
    """
    from .diagram import serialize_pd

    start_ref = start_ref or ms.start_ref
    start = Source(start_ref or serialize_pd(ms.start), start_ref, ms.start)
    expect = None
    expect_ref = expect_ref if expect_ref is not None else ms.end_ref
    if isinstance(expect_ref, Diagram):
        expect = Source(serialize_pd(expect_ref), None, expect_ref)
    elif expect_ref:
        from .catalog import builtin

        expect = Source(expect_ref, expect_ref, builtin(expect_ref))
    r = Runner(ms.start)
    doc = ScriptDocument(start, expect, note=note,
                         start_check=canonicalize(r.d) if checks else None)
    for i, s in enumerate(ms.steps):
        r.do(s)
        doc.steps.append(ScriptStep(s, 0, 1, check=canonicalize(r.d) if checks else None))
    return print_script(doc)


# ---- replay -----------------------------------------------------------------

@dataclass
class StepRecord:
    index: int
    line: int
    text: str
    code: str
    lk: dict
    arf: str
    proper: bool

    def to_json(self):
        return {"index": self.index, "line": self.line, "step": self.text, "code": self.code,
                "lk": self.lk, "arf": self.arf, "proper": self.proper}


@dataclass
class ReplayReport:
    start: StepRecord
    records: list[StepRecord]
    end: Diagram
    end_code: str
    simplified_code: str
    expect_code: str | None
    endpoint_ok: bool | None
    kind_counts: dict[str, int]
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.endpoint_ok is not False

    @property
    def diff(self) -> str:
        if self.endpoint_ok is not False:
            return ""
        return f"reached {self.simplified_code!r}, expected {self.expect_code!r}"

    def to_json(self):
        return {
            "note": self.note,
            "start": self.start.to_json(),
            "steps": [r.to_json() for r in self.records],
            "end_code": self.end_code,
            "simplified_end": self.simplified_code,
            "expected_end": self.expect_code,
            "endpoint_ok": self.endpoint_ok,
            "kind_counts": self.kind_counts,
            "diff": self.diff,
        }

    def text(self) -> str:
        lines = []
        if self.note:
            lines.append(f"note: {self.note}")
        lines.append(f"start: {self.start.code}  arf={self.start.arf}")
        for r in self.records:
            lines.append(f"{r.index:3d} (line {r.line}) {r.text}  -> {r.code}  arf={r.arf}")
        counts = ", ".join(f"{k}:{v}" for k, v in sorted(self.kind_counts.items()))
        lines.append(f"moves: {counts or 'none'}")
        lines.append(f"end (simplified): {self.simplified_code}")
        if self.endpoint_ok is None:
            lines.append("endpoint: no expectation declared")
        else:
            lines.append("endpoint: " + ("matches" if self.endpoint_ok else "MISMATCH, " + self.diff))
        return "\n".join(lines)


def _snapshot(d: Diagram, index: int, line: int, text: str) -> StepRecord:
    return StepRecord(index, line, text, canonicalize(d), linking_matrix(d).to_json(),
                      arf(d).value, is_proper(d))


def _check_invariants(before: StepRecord, after: StepRecord, s: Step, i: int, other=None):
    v = s.verb
    if v in REIDEMEISTER:
        if before.lk != after.lk:
            raise InvariantViolation(f"step {i}: linking numbers changed across {v}")
        if before.arf != after.arf:
            raise InvariantViolation(f"step {i}: arf changed across {v}")
        return
    if not before.proper:
        return
    if v in ("pass", "onetwo", "band"):
        if not after.proper:
            raise InvariantViolation(f"step {i}: {v} made a proper link improper")
        if before.arf != after.arf:
            raise InvariantViolation(f"step {i}: arf changed across {v}")
    elif v == "sharp":
        # a #-move on a proper link always changes the Arf invariant
        if after.proper and before.arf == after.arf:
            raise InvariantViolation(f"step {i}: arf unchanged across a #-move")
    elif v == "split" and other is not None and is_proper(other):
        want = ArfValue.of(int(before.arf) + int(arf(other).value)).value
        if after.arf != want:
            raise InvariantViolation(f"step {i}: arf not additive under split union")


def _simplified(d: Diagram, budget: int) -> str:
    return canonicalize(simplify(d, budget))


def replay(doc: ScriptDocument, simplify_budget: int = 1000, check_invariants: bool = True) -> ReplayReport:
    """Execute every step, snapshotting invariants, then compare endpoints."""
    r = Runner(doc.start.diagram)
    start = _snapshot(r.d, 0, 0, "start")
    if doc.start_check is not None and doc.start_check != start.code:
        raise StepFailure(f"start code is {start.code!r}, script checks {doc.start_check!r}",
                          step=0, state=start.code)
    prev = start
    records = []
    for i, st in enumerate(doc.steps, start=1):
        s = st.step
        before = r.d
        try:
            r.do(s)
        except (KnotMoveError, KeyError, TypeError, ValueError, IndexError) as ex:
            raise StepFailure(f"line {st.line}: {s} failed: {ex}", step=i,
                              state=canonicalize(before)) from None
        rec = _snapshot(r.d, i, st.line, str(s))
        if check_invariants:
            other = None
            if s.verb == "split":
                from .surgery import resolve_template

                other = resolve_template(s)
            _check_invariants(prev, rec, s, i, other)
        if st.check is not None and st.check != rec.code:
            raise StepFailure(f"line {st.line}: reached {rec.code!r}, script checks {st.check!r}",
                              step=i, state=rec.code)
        records.append(rec)
        prev = rec
    end = r.d
    simplified = _simplified(end, simplify_budget)
    expect_code = ok = None
    if doc.expect is not None:
        expect_code = _simplified(doc.expect.diagram, simplify_budget)
        ok = expect_code == simplified
    return ReplayReport(start, records, end, canonicalize(end), simplified, expect_code, ok,
                        doc.kind_counts(), doc.note)


# ---- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    kind: MoveKind
    count: int
    endpoint: str  # unknot, unlink_n, a catalog key or PD text

    @classmethod
    def parse(cls, text: str) -> "Claim":
        parts = text.split(":", 2)
        if len(parts) != 3:
            raise ScriptSyntaxError(f"claim {text!r} is not kind:count:endpoint",
                                    expected=("kind:count:endpoint",))
        try:
            kind = MoveKind.parse(parts[0])
            count = int(parts[1])
        except ValueError:
            raise ScriptSyntaxError(f"claim {text!r} is not kind:count:endpoint",
                                    expected=("pass|sharp|onetwo", "an integer")) from None
        if kind not in (MoveKind.PASS, MoveKind.SHARP, MoveKind.ONETWO) or count < 0:
            raise ScriptSyntaxError(f"claim kind must be pass, sharp or onetwo with a count >= 0")
        return cls(kind, count, parts[2].strip())

    def __str__(self):
        return f"{self.kind.value}:{self.count}:{self.endpoint}"


def _endpoint_code(endpoint: str, budget: int) -> str:
    from .catalog import builtin

    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", endpoint) and endpoint != "O":
        d = builtin(endpoint)
    else:
        d = parse_pd(endpoint)
    return _simplified(d, budget)


def check_certificate(doc: ScriptDocument, claim, report: ReplayReport | None = None,
                      simplify_budget: int = 1000) -> bool:
    """True when the script proves the claim; otherwise ClaimMismatch names the clause.

    Reidemeister steps are free.  Every other step must be of the claimed
    kind, and there must be exactly ``count`` of them.
    """
    if isinstance(claim, str):
        claim = Claim.parse(claim)
    elif isinstance(claim, dict):
        claim = Claim(MoveKind.parse(str(claim["kind"])), int(claim["count"]), str(claim["endpoint"]))
    want = claim.kind.value
    others = sorted({s.verb for s in doc.steps if s.verb not in REIDEMEISTER and s.verb != want})
    if others:
        raise ClaimMismatch("kind", f"script uses {', '.join(others)} steps, claim counts only {want}")
    n = doc.count(want)
    if n != claim.count:
        raise ClaimMismatch("count", f"script has {n} {want} steps, claim says {claim.count}")
    if report is None:
        report = replay(doc, simplify_budget)
    if report.endpoint_ok is False:
        raise ClaimMismatch("expect", f"declared end not reached: {report.diff}")
    target = _endpoint_code(claim.endpoint, simplify_budget)
    if report.simplified_code != target:
        raise ClaimMismatch("endpoint", f"script ends at {report.simplified_code!r}, not {claim.endpoint}")
    return True
