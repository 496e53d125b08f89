import re

import pytest
from hypothesis import given

from knotmove import errors
from knotmove.canon import canonical_relabel, canonicalize
from knotmove.catalog import builtin
from knotmove.certlang import (Claim, check_certificate, load_script, normalize, parse_script, print_script,
                               replay, script_from_move_script)
from knotmove.errors import ClaimMismatch, ScriptSyntaxError, StepFailure, UnknownVerb
from knotmove.moves import apply_move, find_sites
from knotmove.selftest import fixture_path, fixture_text

from strategies import sited

FIXTURES = ["fig3", "fig4", "fig7", "fig9", "fig10", "involution", "L_pass", "L_nt2"]
ERRORS = ["bad_pd", "missing_paren", "missing_value", "second_start", "step_before_start",
          "trailing_token", "unknown_key", "unknown_verb"]

COUNTS = {
    "fig3": {"r1": 2, "r2": 4, "onetwo": 2},
    "fig4": {"r1": 2, "r2": 4, "sharp": 2},
    "fig7": {"split": 1, "band": 4},
    "fig9": {"r2": 6, "r3": 2, "pass": 1, "r1": 2},
    "fig10": {"r2": 5, "r3": 2, "onetwo": 1, "r1": 4},
    "involution": {"onetwo": 2},
    "L_pass": {"pass": 1, "r2": 4},
    "L_nt2": {"r1": 2, "r2": 8, "onetwo": 2},
}

CLAIMS = {
    "fig9": "pass:1:unknot",
    "fig10": "onetwo:1:unknot",
    "L_pass": "pass:1:unlink_4",
    "L_nt2": "onetwo:2:unlink_4",
}


def doc(name):
    return parse_script(fixture_text(f"{name}.mvs"))


class TestParse:
    @pytest.mark.parametrize("name", FIXTURES)
    def test_fixture_counts(self, name):
        assert doc(name).kind_counts() == COUNTS[name]

    @pytest.mark.parametrize("name", FIXTURES)
    def test_round_trip(self, name):
        text = fixture_text(f"{name}.mvs")
        assert print_script(parse_script(text)) == text

    def test_empty_script(self):
        d = parse_script("start unknot\nexpect unknot\n")
        assert d.steps == [] and replay(d).endpoint_ok

    def test_load(self):
        with fixture_path("fig9.mvs") as p:
            assert load_script(p).kind_counts() == COUNTS["fig9"]

    def test_sources(self):
        a = parse_script('start "X+[1,4,2,5] X+[3,6,4,1] X+[5,2,6,3]"')
        b = parse_script("start gauss O1- U2- O3- U1- O2- U3-")
        c = parse_script("start trefoil_L")
        assert canonicalize(a.start.diagram) == canonicalize(c.start.diagram) == canonicalize(b.start.diagram)

    def test_note_keeps_hash(self):
        assert parse_script("note #-moves are fine here\nstart unknot").note == "#-moves are fine here"

    def test_unknown_verb(self):
        with pytest.raises(UnknownVerb) as ei:
            parse_script("start unknot\nwiggle site(face=1)")
        assert ei.value.line == 2

    def test_missing_start(self):
        with pytest.raises(ScriptSyntaxError):
            parse_script("expect unknot")

    def test_locator_values(self):
        d = parse_script('start unknot\nsplit split(with="O", reverse=[a,b], mirror=true)')
        s = d.steps[0].step
        assert s.get("with") == "O" and tuple(s.get("reverse")) == ("a", "b") and s.get("mirror") is True

    def test_normalize(self):
        a = "start  unknot \n\n  r1+   kink( edge = 1 , side = left , sign = 1 )\n"
        assert normalize(a) == "start unknot\nr1+ kink(edge=1,side=left,sign=1)"
        assert normalize('note a  "b  c"') == 'note a "b  c"'


class TestErrorFixtures:
    @pytest.mark.parametrize("name", ERRORS)
    def test_reported_line(self, name):
        text = fixture_text(f"errors/{name}.mvs")
        kind, line = re.search(r"# error: (\w+) line (\d+)", text).groups()
        with pytest.raises(getattr(errors, kind)) as ei:
            parse_script(text)
        assert ei.value.line == int(line)

    def test_expected_tokens(self):
        with pytest.raises(ScriptSyntaxError) as ei:
            parse_script(fixture_text("errors/missing_paren.mvs"))
        assert ei.value.expected


class TestReplay:
    @pytest.mark.parametrize("name", FIXTURES)
    def test_endpoints(self, name):
        rep = replay(doc(name))
        assert rep.endpoint_ok and rep.ok and rep.diff == ""
        assert len(rep.records) == len(doc(name).steps)

    def test_involution_returns(self):
        rep = replay(doc("involution"))
        assert rep.end_code == rep.start.code

    def test_sharp_steps_flip_arf(self):
        rep = replay(doc("fig4"))
        arfs = [rep.start.arf] + [r.arf for r in rep.records]
        assert "1" in arfs and arfs[0] == arfs[-1] == "0"

    def test_mismatch_reported(self):
        d = parse_script("start trefoil_R\nexpect unknot")
        rep = replay(d)
        assert rep.endpoint_ok is False and "expected" in rep.diff and "MISMATCH" in rep.text()

    def test_stale_step(self):
        with pytest.raises(StepFailure) as ei:
            replay(parse_script("start unknot\nr1- site(kind=r1, face=0)"))
        assert ei.value.step == 1

    def test_failed_check(self):
        with pytest.raises(StepFailure):
            replay(parse_script("start trefoil_R\ncheck O"))

    def test_json(self):
        js = replay(doc("L_pass")).to_json()
        assert js["endpoint_ok"] and js["kind_counts"] == {"pass": 1, "r2": 4}

    @given(sited())
    def test_generated_scripts(self, ds):
        from knotmove.moves import MoveScript

        # steps address crossings of the canonically relabelled start
        d = canonical_relabel(ds[0])
        site = next(s for s in find_sites(d) if s.kind == ds[1].kind)
        ms = MoveScript(d, [site.step()])
        text = script_from_move_script(ms, expect_ref=apply_move(d, site))
        rep = replay(parse_script(text))
        assert rep.endpoint_ok
        assert print_script(parse_script(text)) == text


class TestCertificates:
    @pytest.mark.parametrize("name", sorted(CLAIMS))
    def test_claims(self, name):
        assert check_certificate(doc(name), CLAIMS[name])

    @pytest.mark.parametrize("name,claim,clause", [
        ("fig9", "onetwo:1:unknot", "kind"),
        ("fig10", "onetwo:2:unknot", "count"),
        ("L_nt2", "onetwo:2:unlink_3", "endpoint"),
        ("fig9", "pass:1:trefoil_R", "endpoint"),
    ])
    def test_mismatch(self, name, claim, clause):
        with pytest.raises(ClaimMismatch) as ei:
            check_certificate(doc(name), claim)
        assert ei.value.clause == clause

    def test_expect_clause(self):
        d = parse_script("start trefoil_R\nexpect unknot")
        with pytest.raises(ClaimMismatch) as ei:
            check_certificate(d, "pass:0:unknot")
        assert ei.value.clause == "expect"

    def test_claim_forms(self):
        c = Claim.parse("#:3:unlink_2")
        assert str(c) == "sharp:3:unlink_2"
        assert check_certificate(parse_script("start unknot"), {"kind": "pass", "count": 0, "endpoint": "O"})

    @pytest.mark.parametrize("text", ["pass:1", "r1:1:unknot", "pass:x:unknot", "pass:-1:unknot"])
    def test_bad_claims(self, text):
        with pytest.raises(ScriptSyntaxError):
            Claim.parse(text)

    def test_fusion_script_is_not_a_move_claim(self):
        with pytest.raises(ClaimMismatch):
            check_certificate(doc("fig7"), "onetwo:0:unknot")


def test_l_site_count_matches_shipped_pass():
    d = builtin("L_fig11")
    assert len(find_sites(d, "pass")) == 2
