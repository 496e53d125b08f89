import pytest
from hypothesis import given

from knotmove.canon import canonicalize
from knotmove.catalog import builtin, catalog_keys, cabled_hopf
from knotmove.diagram import (Crossing, LkMatrix, is_proper, linking_matrix, mirror, parse_gauss, parse_pd,
                              reverse_components, serialize_pd)
from knotmove.errors import (DisconnectedSlot, EdgeDegreeError, MalformedToken, NonClosedComponent,
                             NonRealizable, UnknownCatalogKey)

from strategies import diagrams

TREFOIL_PD = "X+[1,4,2,5] X+[3,6,4,1] X+[5,2,6,3]"


def catalog():
    return [k for k in catalog_keys() if k != "unlink_n"] + ["unlink_3"]


class TestParsePd:
    def test_three_crossing_knot(self):
        d = parse_pd(TREFOIL_PD)
        assert d.n_crossings == 3 and d.n_components == 1
        # hand-traced edge cycle
        assert d.components[0].edges == (1, 2, 3, 4, 5, 6)

    def test_unknot(self):
        d = parse_pd("O")
        assert d.n_crossings == 0 and d.free_loops == 1

    def test_degree_error(self):
        with pytest.raises(EdgeDegreeError):
            parse_pd("X+[1,2,1,2] X+[1,2,1,2]")

    def test_missing_crossing(self):
        with pytest.raises(EdgeDegreeError):
            parse_pd("X+[1,4,2,5] X+[3,6,4,1]")

    @pytest.mark.parametrize("text", ["X+[1,2,3]", "Y[1]", "", "C a 1,2"])
    def test_malformed(self, text):
        with pytest.raises(MalformedToken):
            parse_pd(text)

    def test_both_ends_incoming(self):
        with pytest.raises(DisconnectedSlot):
            parse_pd("X+[1,1,2,2]")

    def test_partial_declaration(self):
        with pytest.raises(NonClosedComponent):
            parse_pd("C a = 1,2 " + TREFOIL_PD)

    def test_declared_labels(self):
        d = parse_pd("C x = 1,2 C y = 3,4 X+[1,3,2,4] X+[4,2,3,1]")
        assert d.labels == ("x", "y")

    def test_labelled_free_loop(self):
        d = parse_pd("C k = 7 O[7]")
        assert d.labels == ("k",) and d.free_loops == 1

    def test_minus_sign_slots(self):
        # X- has slots 0 and 3 incoming
        c = parse_pd("X-[1,1,2,2]").crossings[0]
        assert c.incoming(0) and c.incoming(3) and not c.incoming(1)


class TestSigns:
    def test_flip_negates_sign(self):
        for c in [Crossing((1, 2, 3, 4), True), Crossing((1, 2, 3, 4), False)]:
            assert c.flipped().sign == -c.sign
            assert c.flipped().flipped() == c

    def test_gauss_signs_agree(self):
        d = parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+")
        assert [c.sign for c in d.crossings] == [1, 1, 1]
        assert d.writhe() == 3

    def test_pd_example_is_left_handed_here(self):
        # under the +90 degree rule X+ crossings are negative
        d = parse_pd(TREFOIL_PD)
        assert d.writhe() == -3
        assert canonicalize(d) == canonicalize(builtin("trefoil_L"))
        assert canonicalize(mirror(d)) == canonicalize(builtin("trefoil_R"))


class TestSerialize:
    def test_unknot(self):
        assert serialize_pd(parse_pd("O")) == "O"

    @pytest.mark.parametrize("key", catalog())
    def test_catalog_round_trip(self, key):
        d = builtin(key)
        back = parse_pd(serialize_pd(d))
        assert canonicalize(back) == canonicalize(d)
        assert linking_matrix(back) == linking_matrix(d)

    def test_lk_survives_round_trip(self):
        back = parse_pd(serialize_pd(builtin("L_fig11")))
        m = linking_matrix(back)
        assert (m["a", "c"], m["a", "d"], m["b", "c"], m["b", "d"]) == (-1, 1, 1, -1)

    @given(diagrams())
    def test_round_trip_random(self, d):
        assert canonicalize(parse_pd(serialize_pd(d))) == canonicalize(d)
        assert canonicalize(parse_pd(serialize_pd(d, labels=True)), labels=True) == \
            canonicalize(d, labels=True)


class TestGauss:
    def test_matches_pd(self):
        assert canonicalize(parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+")) == canonicalize(builtin("trefoil_R"))

    def test_empty_is_unknot(self):
        d = parse_gauss("")
        assert d.n_crossings == 0 and d.n_components == 1

    @pytest.mark.parametrize("code", ["O1+ U1−", "O1+ U1-", "O1+ O1+", "O1+ U2+"])
    def test_not_realisable(self, code):
        with pytest.raises(NonRealizable):
            parse_gauss(code)

    def test_bad_token(self):
        with pytest.raises(MalformedToken):
            parse_gauss("Q1+")

    def test_two_components(self):
        d = parse_gauss("O1+ U2+ / U1+ O2+")
        assert d.n_components == 2 and linking_matrix(d)["a", "b"] == 1


class TestCanonicalize:
    def test_rotated_labels(self):
        shifted = "X+[2,5,3,6] X+[4,1,5,2] X+[6,3,1,4]"
        assert canonicalize(parse_pd(shifted)) == canonicalize(parse_pd(TREFOIL_PD))

    def test_kink_differs(self):
        assert canonicalize(builtin("kinked_unknot")) != canonicalize(builtin("unknot"))

    def test_mirror_differs(self):
        assert canonicalize(builtin("trefoil_R")) != canonicalize(builtin("trefoil_L"))

    def test_canonical_code_is_pd(self):
        code = canonicalize(builtin("L_fig11"))
        assert canonicalize(parse_pd(code)) == code


class TestLinking:
    def test_l_matrix(self):
        m = linking_matrix(builtin("L_fig11"))
        assert m["a", "c"] == -1 and m["a", "d"] == 1 and m["b", "c"] == 1 and m["b", "d"] == -1
        assert m["a", "b"] == 0 and m["c", "d"] == 0

    def test_split_unknots(self):
        assert all(v == 0 for _, _, v in linking_matrix(builtin("unlink_2")).pairs())

    def test_hopf(self):
        assert linking_matrix(builtin("hopf"))["a", "b"] == 1

    def test_flipping_one_crossing(self):
        d = builtin("L_fig11")
        before = linking_matrix(d)
        i = next(i for i, c in enumerate(d.crossings) if len(set(d.strand_labels(i))) == 2)
        xs = list(d.crossings)
        xs[i] = xs[i].flipped()
        from knotmove.diagram import Diagram

        after = linking_matrix(Diagram(tuple(xs), d.components))
        diff = [(x, y, v) for x, y, v in (after - before).pairs() if v]
        assert len(diff) == 1 and abs(diff[0][2]) == 1

    @given(diagrams())
    def test_symmetric_and_relabel_invariant(self, d):
        from knotmove.canon import canonical_relabel

        m = linking_matrix(d)
        for x, y, v in m.pairs():
            assert m[y, x] == v
        assert linking_matrix(canonical_relabel(d)) == m


class TestProper:
    def test_knots_are_proper(self):
        for k in ["trefoil_R", "fig8", "square_knot_K", "unknot"]:
            assert is_proper(builtin(k))

    def test_links(self):
        assert is_proper(builtin("L_fig11"))
        assert is_proper(builtin("L0_fig7"))
        assert not is_proper(builtin("hopf"))

    @given(diagrams())
    def test_row_sums(self, d):
        m = linking_matrix(d)
        assert is_proper(d) == all(m.row_sum(x) % 2 == 0 for x in m.labels)


class TestCatalog:
    def test_square_knot(self):
        d = builtin("square_knot_K")
        assert d.n_crossings == 6 and d.n_components == 1
        signs = sorted(c.sign for c in d.crossings)
        assert signs == [-1, -1, -1, 1, 1, 1]

    def test_l(self):
        d = builtin("L_fig11")
        assert d.n_crossings == 8 and d.labels == ("a", "b", "c", "d")

    def test_unlink(self):
        d = builtin("unlink_2")
        assert d.free_loops == 2 and d.n_crossings == 0

    def test_unknown(self):
        with pytest.raises(UnknownCatalogKey):
            builtin("nope")

    def test_l0_cables(self):
        d = builtin("L0_fig7")
        m = linking_matrix(d)
        assert d.n_crossings == 8
        assert {abs(v) for x, y, v in m.pairs() if {x, y} in ({"a", "c"}, {"b", "d"})} == {1}
        assert cabled_hopf(1, (1, 1), (1, -1)) == d


class TestReverse:
    @given(diagrams())
    def test_reverse_twice(self, d):
        labs = d.labels[:1]
        assert canonicalize(reverse_components(reverse_components(d, labs), labs), labels=True) == \
            canonicalize(d, labels=True)

    def test_reverse_negates_lk(self):
        d = builtin("hopf")
        assert linking_matrix(reverse_components(d, ["a"]))["a", "b"] == -1

    def test_mirror_negates_writhe(self):
        d = builtin("fig8")
        assert mirror(d).writhe() == -d.writhe()


def test_lkmatrix_zero():
    z = LkMatrix.zero(["a", "b"])
    assert z["a", "b"] == 0 and z.to_json() == {"a,b": 0}
