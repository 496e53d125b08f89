import json
from importlib import resources

import pytest

from knotmove.cli import main
from knotmove.selftest import fixture_path

jsonschema = pytest.importorskip("jsonschema")


def schema(command):
    text = resources.files("knotmove").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)


def run(capsys, *argv, expect=0):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    assert code == expect, out
    data = json.loads(out)
    jsonschema.validate(data, schema(data["command"]))
    return data


def test_info_trefoil(capsys):
    d = run(capsys, "info", "--gauss", "O1+ U2+ O3+ U1+ O2+ U3+")
    assert d["crossings"] == 3 and d["writhe"] == 3 and d["arf"] == "1"


def test_info_l(capsys):
    d = run(capsys, "info", "--catalog", "L_fig11")
    assert len(d["components"]) == 4 and d["proper"] and d["arf"] == "0"
    assert d["lk"]["a,c"] == -1 and d["lk"]["a,d"] == 1


def test_info_pd_and_file(capsys, tmp_path):
    f = tmp_path / "hopf.pd"
    f.write_text("X+[1,3,2,4] X+[4,2,3,1]\n")
    d = run(capsys, "info", "--file", str(f))
    assert d["arf"] == "undefined" and not d["proper"]
    assert run(capsys, "info", "--pd", "O")["crossings"] == 0


def test_sites(capsys):
    d = run(capsys, "sites", "--catalog", "L_fig11")
    assert [s["kind"] for s in d["sites"]] == ["pass", "pass"]
    assert run(capsys, "sites", "--catalog", "L_fig11", "--move", "onetwo")["sites"] == []


def test_apply(capsys):
    d = run(capsys, "apply", "--catalog", "L_fig11", "--move", "pass", "--simplify")
    assert d["simplified"] == "O O O O"


def test_apply_missing_site(capsys):
    assert main(["apply", "--catalog", "unknot", "--move", "pass"]) == 2


def test_expand(capsys, tmp_path):
    out = tmp_path / "x.mvs"
    d = run(capsys, "expand", "--catalog", "closed_pass_tangle", "--move", "pass", "--out", str(out))
    assert d["kind_counts"] == {"r1": 2, "r2": 4, "onetwo": 2} and d["matches_direct"]
    assert out.read_text() == d["script"]
    assert main(["verify", str(out)]) == 0


def test_fuse_band(capsys):
    # face ids come from the canonical diagram that info lists
    face = run(capsys, "info", "--catalog", "hopf")["faces"][0]
    assert face["agree"] == [True, True]
    band = ",".join(map(str, [face["index"], *face["edges"], 0]))
    d = run(capsys, "fuse", "--catalog", "hopf", "--band", band)
    assert d["proper"] and d["arf_after"] != "undefined"
    assert main(["fuse", "--catalog", "hopf", "--band", band[:-1] + "1"]) == 2


def test_fuse_site(capsys):
    d = run(capsys, "fuse", "--catalog", "closed_onetwo_tangle")
    assert d["kind_counts"] == {"split": 1, "band": 4}


def test_search(capsys):
    d = run(capsys, "search", "--catalog", "L_fig11", "--move", "onetwo")
    assert d["bound"] == 2
    assert run(capsys, "search", "--catalog", "unknot", "--move", "pass")["bound"] == 0


def test_search_arf(capsys):
    assert main(["search", "--catalog", "trefoil_R", "--move", "pass"]) == 1


def test_obstruct(capsys):
    d = run(capsys, "obstruct", "--catalog", "L_fig11", "--move", "onetwo")
    assert d["verdict"] == "Obstructed" and d["cases"] == []
    d = run(capsys, "obstruct", "--catalog", "L_fig11", "--move", "pass", expect=1)
    assert d["verdict"] == "NotObstructed" and d["cases"]


def test_verify(capsys):
    with fixture_path("fig10.mvs") as p:
        d = run(capsys, "verify", str(p), "--claim", "onetwo:1:unknot")
        assert d["verified"]
    with fixture_path("fig9.mvs") as p:
        d = run(capsys, "verify", str(p), "--claim", "onetwo:1:unknot", expect=1)
        assert d["failure"].startswith("kind")


def test_catalog(capsys):
    d = run(capsys, "catalog")
    assert any(e["key"] == "square_knot_K" for e in d["entries"])
    assert run(capsys, "catalog", "trefoil_R")["crossings"] == 3


def test_selftest(capsys):
    d = run(capsys, "selftest", "--only", "1,4")
    assert [c["number"] for c in d["checks"]] == [1, 4] and all(c["ok"] for c in d["checks"])


@pytest.mark.parametrize("argv", [
    ["info", "--catalog", "nope"],
    ["info", "--pd", "X+[1,2]"],
    ["verify", "/nonexistent.mvs"],
    ["selftest", "--only", "x"],
    ["search", "--catalog", "unknot", "--move", "r1"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_text_output(capsys):
    assert main(["info", "--catalog", "hopf"]) == 0
    out = capsys.readouterr().out
    assert "command" in out and "hopf" in out
