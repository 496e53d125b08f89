import random

import pytest
from hypothesis import assume, given, strategies as st

from knotmove.arf import (ArfValue, arf, arf_of_form, arf_oracle_knot, arf_report, knot_determinant,
                          q_form, seifert_matrix, symplectic_reduce)
from knotmove.catalog import builtin
from knotmove.diagram import is_proper
from knotmove.errors import DimensionMismatch, NotAKnot, OddRank
from knotmove.randomgen import random_diagram, scramble

from strategies import diagrams, knots, seeds

sp = pytest.importorskip("sympy")
ZZ = sp.ZZ
DomainMatrix = pytest.importorskip("sympy.polys.matrices").DomainMatrix


@st.composite
def proper_links(draw):
    d = draw(diagrams(strands=(2, 5), length=(2, 10)))
    assume(is_proper(d) and d.n_crossings)
    return d


# ---- independent oracle: Alexander polynomial from Wirtinger arcs ------------

T = sp.symbols("t")


def _poly_det(build, n):
    # integer determinants at n + 1 points, then exact interpolation
    pts = range(-(n // 2), n - n // 2 + 1)
    def det(M):
        return DomainMatrix([[ZZ(v) for v in row] for row in M], (len(M), len(M)), ZZ).det() if M else 1

    return sp.interpolate([(x, int(det(build(x)))) for x in pts], T)


def alexander_wirtinger(d):
    from knotmove.arf import _arcs

    arc, n = _arcs(d)

    def build(t):
        M = [[0] * n for _ in d.crossings]
        for i, c in enumerate(d.crossings):
            over, u_in, u_out = arc[c.slots[1]], arc[c.slots[0]], arc[c.slots[2]]
            M[i][over] += 1 - t
            if c.sign > 0:
                M[i][u_in] += t
                M[i][u_out] -= 1
            else:
                M[i][u_out] += t
                M[i][u_in] -= 1
        return [row[1:] for row in M[1:]]

    return _poly_det(build, n - 1)


def alexander_seifert(d):
    V = seifert_matrix(d).V
    n = len(V)
    return _poly_det(lambda t: [[t * V[i][j] - V[j][i] for j in range(n)] for i in range(n)], n)


def normal(p):
    c = sp.Poly(sp.expand(p), T).all_coeffs()
    while c and c[-1] == 0:
        c.pop()
    return [-x for x in c] if c and c[0] < 0 else c


def arf_from_alexander(p):
    # Levine: Arf is 0 exactly when Delta(-1) = +-1 mod 8
    v = abs(int(sp.expand(p).subs(T, -1)))
    return ArfValue.ZERO if v % 8 in (1, 7) else ArfValue.ONE


KNOTS = {"unknot": "0", "kinked_unknot": "0", "trefoil_R": "1", "trefoil_L": "1", "fig8": "1",
         "square_knot_K": "0", "granny_knot": "0"}


@pytest.mark.parametrize("key,value", sorted(KNOTS.items()))
def test_catalog_knots(key, value):
    d = builtin(key)
    assert arf(d).value == value
    assert arf_oracle_knot(d).value == value


@pytest.mark.parametrize("key,det", [("trefoil_R", 3), ("fig8", 5), ("square_knot_K", 9), ("unknot", 1)])
def test_determinants(key, det):
    assert knot_determinant(builtin(key)) == det


def test_determinant_needs_knot():
    with pytest.raises(NotAKnot):
        knot_determinant(builtin("hopf"))


@pytest.mark.parametrize("key", ["trefoil_R", "fig8", "square_knot_K", "granny_knot"])
def test_seifert_alexander_matches_wirtinger(key):
    d = builtin(key)
    assert normal(alexander_seifert(d)) == normal(alexander_wirtinger(d))


@given(knots())
def test_random_knots_match_oracles(d):
    a = arf(d)
    assert a == arf_oracle_knot(d)
    if d.n_crossings:
        w = alexander_wirtinger(d)
        assert normal(alexander_seifert(d)) == normal(w)
        assert a == arf_from_alexander(w)


def test_hopf_undefined():
    assert arf(builtin("hopf")) == ArfValue.UNDEFINED


@pytest.mark.parametrize("key", ["L_fig11", "L0_fig7", "unlink_3"])
def test_proper_links_with_zero_arf(key):
    assert arf(builtin(key)) == ArfValue.ZERO


@given(proper_links())
def test_defined_on_proper_links(d):
    assert arf(d) in (ArfValue.ZERO, ArfValue.ONE)


@given(proper_links(), seeds)
def test_reidemeister_invariance(d, seed):
    assert arf(scramble(d, random.Random(seed), 4)) == arf(d)


def _unimodular(rng, n):
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-1, 1])
        P[i] = [a + k * b for a, b in zip(P[i], P[j])]
    return P


@given(proper_links(), seeds)
def test_basis_change_invariance(d, seed):
    assume(len(d.pieces) == 1 and not any(d.is_free_loop(c) for c in d.components))
    V = seifert_matrix(d).V
    n = len(V)
    assume(n >= 2)
    P = _unimodular(random.Random(seed), n)
    W = [[sum(P[i][a] * V[a][b] * P[j][b] for a in range(n) for b in range(n)) for j in range(n)]
         for i in range(n)]
    assert arf_of_form(W) == arf_of_form(V)


@given(diagrams())
def test_dimension_formula(d):
    assume(d.n_crossings and len(d.pieces) == 1 and not any(d.is_free_loop(c) for c in d.components))
    sd = seifert_matrix(d)
    assert sd.dim == 2 * sd.genus + sd.components - 1


class TestSymplectic:
    def test_hyperbolic_plane(self):
        b = symplectic_reduce([[0, 1], [1, 0]])
        assert b.genus == 1 and b.radical == ()

    def test_zero_form(self):
        b = symplectic_reduce([[0, 0, 0]] * 3)
        assert b.genus == 0 and len(b.radical) == 3

    def test_mixed(self):
        J = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
        b = symplectic_reduce(J)
        assert b.genus == 1 and len(b.radical) == 1
        z = b.radical[0]
        assert all(sum(z[i] * J[i][j] for i in range(3)) % 2 == 0 for j in range(3))

    @pytest.mark.parametrize("J", [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 1]]])
    def test_rejects(self, J):
        with pytest.raises(OddRank):
            symplectic_reduce(J)

    @given(st.integers(1, 8).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                         min_size=n, max_size=n)))
    def test_random_forms(self, A):
        n = len(A)
        J = [[(A[i][j] + A[j][i]) % 2 for j in range(n)] for i in range(n)]
        b = symplectic_reduce(J)

        def f(u, v):
            return sum(u[i] * J[i][j] * v[j] for i in range(n) for j in range(n)) % 2

        assert 2 * b.genus + len(b.radical) == n
        for x, y in b.pairs:
            assert f(x, y) == 1
        vecs = [v for p in b.pairs for v in p]
        for z in b.radical:
            assert all(f(z, v) == 0 for v in vecs + list(b.radical))


class TestQForm:
    def test_values(self):
        V = [[1, 1], [0, 1]]
        assert q_form(V, (1, 0)) == 1 and q_form(V, (1, 1)) == 1 and q_form(V, (0, 0)) == 0

    @given(st.integers(1, 6).flatmap(lambda n: st.tuples(
        st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n))))
    def test_quadratic_refinement(self, args):
        V, x, y = args
        n = len(V)
        s = [(a + b) % 2 for a, b in zip(x, y)]
        cross = sum(x[i] * (V[i][j] + V[j][i]) * y[j] for i in range(n) for j in range(n)) % 2
        assert q_form(V, s) == (q_form(V, x) + q_form(V, y) + cross) % 2

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            q_form([[0, 1], [0, 0]], (1, 0, 1))


def test_report_fields():
    rep = arf_report(builtin("trefoil_R"))
    assert rep["arf"] == "1" and rep["det_mod8"] == 3 and rep["proper"]
    assert arf_report(builtin("L_fig11"))["det_mod8"] is None
