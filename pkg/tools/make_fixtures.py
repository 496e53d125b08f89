"""Regenerate the shipped .mvs fixtures.

Run from the repository root: ``python3 tools/make_fixtures.py``.  The
Reidemeister steps in these scripts are reconstructions found by the
search engine, not transcriptions of drawings.
"""
from pathlib import Path

from knotmove.catalog import builtin
from knotmove.certlang import script_from_move_script
from knotmove.canon import canonical_relabel
from knotmove.moves import (MoveKind, MoveScript, apply_move, expand_onetwo_as_sharp, expand_pass_as_onetwo,
                            expand_script, find_sites)
from knotmove.reason import search_move_number
from knotmove.surgery import onetwo_via_fusions

OUT = Path(__file__).resolve().parents[1] / "src" / "knotmove" / "fixtures"
RECON = "Reidemeister steps are a machine reconstruction, not read off a drawing"


def write(name, ms, start_ref, expect_ref, note):
    text = script_from_move_script(ms, start_ref, expect_ref, note=f"{note}. {RECON}")
    (OUT / name).write_text(text)
    print(name, ms.kind_counts())


def direct(d, site):
    return canonical_relabel(apply_move(d, site))


def first_site(key, kind):
    d = builtin(key)
    return d, find_sites(d, kind)[0]


def main():
    d, s = first_site("closed_pass_tangle", MoveKind.PASS)
    write("fig3.mvs", expand_pass_as_onetwo(s), "closed_pass_tangle", direct(d, s),
          "Pass move on the closed pass tangle as R1, R2, R2, 1-2, 1-2, R2, R2, R1")
    d, s = first_site("closed_onetwo_tangle", MoveKind.ONETWO)
    write("fig4.mvs", expand_onetwo_as_sharp(s), "closed_onetwo_tangle", direct(d, s),
          "1-2 move on the closed 1-2 tangle as two #-moves plus Reidemeister moves")
    write("fig7.mvs", onetwo_via_fusions(d, s), "closed_onetwo_tangle", direct(d, s),
          "1-2 move on the closed 1-2 tangle as a split union with L0 and four fusions")
    write("involution.mvs", MoveScript(d, [s.step(), s.step()]), "closed_onetwo_tangle",
          "closed_onetwo_tangle", "The same 1-2 move twice returns the start")

    k = builtin("square_knot_K")
    res = search_move_number(k, MoveKind.PASS)
    write("fig9.mvs", res.script, "square_knot_K", "unknot",
          "Square knot unknotted by one pass move")
    res = search_move_number(k, MoveKind.ONETWO)
    write("fig10.mvs", res.script, "square_knot_K", "unknot",
          "Square knot unknotted by one 1-2 move")

    L = builtin("L_fig11")
    res = search_move_number(L, MoveKind.PASS)
    write("L_pass.mvs", res.script, "L_fig11", "unlink_4",
          "Four-component link L made an unlink by one pass move")
    write("L_nt2.mvs", expand_script(res.script, MoveKind.PASS, MoveKind.ONETWO), "L_fig11",
          "unlink_4", "Four-component link L made an unlink by two 1-2 moves")


if __name__ == "__main__":
    main()
