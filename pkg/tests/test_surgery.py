import random

import pytest
from hypothesis import assume, given, strategies as st

from knotmove.arf import ArfValue, arf
from knotmove.canon import canonicalize
from knotmove.catalog import builtin
from knotmove.diagram import is_proper, linking_matrix
from knotmove.errors import FaceMismatch, KindMismatch, OrientationClash, SameComponentBand, StaleSite
from knotmove.moves import apply_move, find_sites
from knotmove.reidemeister import Step, simplify
from knotmove.surgery import BandSpec, execute_step, fusion, merged_label, onetwo_via_fusions, split_union

from strategies import diagrams, seeds, sited


def _bands(d):
    for f in d.faces:
        ends = list(zip(f.edges, f.agree))
        for i, (e1, a1) in enumerate(ends):
            for e2, a2 in ends[i + 1:]:
                if d.component_of[e1] != d.component_of[e2]:
                    yield f, e1, e2, a1 == a2


@st.composite
def banded(draw):
    d = draw(diagrams(strands=(3, 5), length=(3, 8)))
    opts = list(_bands(d))
    assume(opts)
    f, e1, e2, same = opts[draw(st.integers(0, len(opts) - 1))]
    n = draw(st.sampled_from([0, 2, -2] if same else [1, -1, 3]))
    return d, BandSpec(f.index, e1, e2, n)


class TestFusion:
    @given(banded())
    def test_linking_numbers_add(self, db):
        d, band = db
        out = fusion(d, band)
        l1, l2 = d.component_of[band.left], d.component_of[band.right]
        new = merged_label(d, l1, l2)
        before, after = linking_matrix(d), linking_matrix(out)
        assert out.n_components == d.n_components - 1
        assert out.n_crossings == d.n_crossings + abs(band.half_twists)
        for x in out.labels:
            if x != new:
                assert after[new, x] == before[l1, x] + before[l2, x]

    @given(banded())
    def test_properness_and_arf(self, db):
        d, band = db
        assume(is_proper(d))
        out = fusion(d, band)
        assert is_proper(out)
        assert arf(out) == arf(d)

    def test_same_component(self):
        d = builtin("trefoil_R")
        f = next(f for f in d.faces if len(set(f.edges)) >= 2)
        e1, e2 = sorted(set(f.edges))[:2]
        with pytest.raises(SameComponentBand):
            fusion(d, BandSpec(f.index, e1, e2))

    def test_orientation_clash(self):
        d = builtin("hopf")
        f, e1, e2, same = next(b for b in _bands(d))
        with pytest.raises(OrientationClash):
            fusion(d, BandSpec(f.index, e1, e2, 1 if same else 0))

    def test_face_mismatch(self):
        d = builtin("L_fig11")
        a = d.component("a").edges[0]
        c = d.component("c").edges[0]
        bad = next(f.index for f in d.faces if a not in f.edges and c not in f.edges)
        with pytest.raises(FaceMismatch):
            fusion(d, BandSpec(bad, a, c))

    def test_stale_edge(self):
        with pytest.raises(StaleSite):
            fusion(builtin("hopf"), BandSpec(0, 1, 999))

    def test_l0_band_gives_unlink(self):
        d = builtin("L0_fig7")
        opts = [b for b in _bands(d) if {d.component_of[b[1]], d.component_of[b[2]]} == {"c", "d"}]
        assert opts
        for f, e1, e2, same in opts:
            out = fusion(d, BandSpec(f.index, e1, e2, 0 if same else 1))
            assert canonicalize(simplify(out)) == "O O O"

    def test_free_loops(self):
        out = fusion(builtin("unlink_2"), BandSpec(0, *builtin("unlink_2").edges))
        assert canonicalize(out) == "O" and out.n_components == 1


class TestSplitUnion:
    def test_unknots(self):
        u = split_union(builtin("unknot"), builtin("unknot"))
        assert canonicalize(u) == canonicalize(builtin("unlink_2"))

    def test_label_priming(self):
        u = split_union(builtin("hopf"), builtin("hopf"))
        assert u.labels == ("a", "b", "a'", "b'")
        assert linking_matrix(u)["a'", "b'"] == 1 and linking_matrix(u)["a", "b'"] == 0

    def test_trefoils(self):
        u = split_union(builtin("trefoil_R"), builtin("trefoil_L"))
        assert arf(u) == ArfValue.ZERO and u.n_crossings == 6

    @given(diagrams(), diagrams())
    def test_additive(self, d1, d2):
        u = split_union(d1, d2)
        assert u.n_components == d1.n_components + d2.n_components
        assert is_proper(u) == (is_proper(d1) and is_proper(d2))
        if is_proper(u):
            assert int(arf(u).value) == (int(arf(d1).value) + int(arf(d2).value)) % 2

    def test_split_step(self):
        out, info = execute_step(builtin("unknot"), Step("split", "split", (("with", "trefoil_R"),)))
        assert out.n_crossings == 3 and info["added"] == 3

    def test_split_mirror(self):
        out, _ = execute_step(builtin("unknot"), Step("split", "split", (("with", "trefoil_R"), ("mirror", True))))
        assert canonicalize(out) == canonicalize(split_union(builtin("unknot"), builtin("trefoil_L")))

    def test_bad_locator(self):
        with pytest.raises(StaleSite):
            execute_step(builtin("unknot"), Step("split", "other", ()))


class TestFourFusions:
    def test_closed_tangle(self):
        d = builtin("closed_onetwo_tangle")
        site = find_sites(d, "onetwo")[0]
        ms = onetwo_via_fusions(d, site)
        assert ms.kind_counts() == {"split": 1, "band": 4}
        assert canonicalize(simplify(ms.replay())) == canonicalize(simplify(apply_move(d, site)))

    @given(sited(kind="onetwo"))
    def test_random_sites(self, ds):
        d, site = ds
        end = onetwo_via_fusions(d, site).replay()
        direct = apply_move(d, site)
        assert canonicalize(simplify(end)) == canonicalize(simplify(direct))
        assert end.n_components == d.n_components
        if is_proper(d):
            assert arf(end) == arf(d)

    def test_wrong_kind(self):
        d = builtin("L_fig11")
        with pytest.raises(KindMismatch):
            onetwo_via_fusions(d, find_sites(d, "pass")[0])
