"""Seifert matrices, mod-2 symplectic reduction and the Arf invariant.

The Seifert matrix is read off a braid-form diagram: Reidemeister II moves on
faces where two Seifert circles meet with the same orientation (Vogel's
moves) make the circles concentric and coherent, after which the braid
word gives the matrix by Collins' formula.

An independent check for knots comes from the coloring matrix, whose minors
give the knot determinant |Delta(-1)|.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum

from .diagram import Diagram, is_proper, linking_matrix
from .errors import DimensionMismatch, DisconnectedDiagram, InvariantViolation, NotAKnot, OddRank
from .reidemeister import r2_add

__all__ = [
    "ArfValue",
    "SeifertData",
    "Mod2Basis",
    "seifert_circles",
    "braid_form",
    "braid_word",
    "seifert_matrix",
    "symplectic_reduce",
    "q_form",
    "arf_of_form",
    "arf",
    "arf_oracle_knot",
    "knot_determinant",
    "coloring_matrix",
    "int_det",
    "pieces_of",
    "arf_report",
]


class ArfValue(str, Enum):
    ZERO = "0"
    ONE = "1"
    UNDEFINED = "undefined"

    @classmethod
    def of(cls, bit: int) -> "ArfValue":
        return cls.ONE if bit % 2 else cls.ZERO


# ---- Seifert circles ------------------------------------------------------

def _next_seifert(d: Diagram, e: int) -> int:
    ci, k = d.head(e)
    c = d.crossings[ci]
    if c.ab_in:
        return c.slots[3] if k == 0 else c.slots[2]
    return c.slots[1] if k == 0 else c.slots[2]


def seifert_circles(d: Diagram) -> list[tuple[int, ...]]:
    """Edge cycles of the oriented smoothing, each starting at its least edge."""
    seen = set()
    out = []
    for e0 in sorted(e for e in d.edges if e in d._ends[0]):
        if e0 in seen:
            continue
        cyc = [e0]
        seen.add(e0)
        e = _next_seifert(d, e0)
        while e != e0:
            cyc.append(e)
            seen.add(e)
            e = _next_seifert(d, e)
        out.append(tuple(cyc))
    return out


def _circle_index(d: Diagram):
    circ = {}
    for i, cyc in enumerate(seifert_circles(d)):
        for e in cyc:
            circ[e] = i
    return circ


def _regions(d: Diagram):
    """Face index -> region of the smoothed diagram."""
    parent = list(range(len(d.faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    face_of = {}
    for f in d.faces:
        for corner in f.corners:
            face_of[corner] = f.index
    for ci, c in enumerate(d.crossings):
        a, b = ((0, 2) if c.ab_in else (1, 3))
        ra, rb = find(face_of[(ci, a)]), find(face_of[(ci, b)])
        parent[max(ra, rb)] = min(ra, rb)
    return [find(i) for i in range(len(d.faces))]


def _defect(d: Diagram, circ):
    for f in d.faces:
        for i in range(len(f)):
            for j in range(i + 1, len(f)):
                e1, e2 = f.edges[i], f.edges[j]
                if circ[e1] == circ[e2] or f.agree[i] != f.agree[j]:
                    continue
                if f.edges.count(e1) == 1 and f.edges.count(e2) == 1:
                    return f.index, e1, e2
    return None


def braid_form(d: Diagram, max_moves: int = 500) -> Diagram:
    """Reidemeister-equivalent diagram whose Seifert circles are concentric."""
    if len(d.pieces) != 1 or d.free_loops:
        raise DisconnectedDiagram("braid form needs a connected diagram")
    for _ in range(max_moves):
        circ = _circle_index(d)
        mv = _defect(d, circ)
        if mv is None:
            return d
        d = r2_add(d, *mv, over=True)
    raise InvariantViolation("Vogel moves did not terminate")


def _chain(d: Diagram):
    """Circles ordered along the nesting chain with a cut edge on each."""
    circles = seifert_circles(d)
    circ = {e: i for i, cyc in enumerate(circles) for e in cyc}
    region = _regions(d)
    left, right = {}, {}
    for f in d.faces:
        for e, a in zip(f.edges, f.agree):
            side = right if a else left
            r = region[f.index]
            if side.setdefault(circ[e], r) != r:
                raise InvariantViolation("Seifert circle with two regions on one side")
    lefts = list(left.values())
    rights = list(right.values())
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        raise InvariantViolation("diagram is not in braid form")
    first = [i for i in range(len(circles)) if left[i] not in rights]
    if len(first) != 1:
        raise InvariantViolation("Seifert circles do not form a chain")
    order = [first[0]]
    while len(order) < len(circles):
        nxt = [i for i in range(len(circles)) if left[i] == right[order[-1]]]
        if len(nxt) != 1:
            raise InvariantViolation("Seifert circles do not form a chain")
        order.append(nxt[0])
    # walk a ray outward: cross each circle into the face on its right
    faces_with = {}
    for f in d.faces:
        for e, a in zip(f.edges, f.agree):
            faces_with[(e, a)] = f
    cuts = [circles[order[0]][0]]
    for i in order[1:]:
        f = faces_with[(cuts[-1], True)]
        cand = [e for e, a in zip(f.edges, f.agree) if circ[e] == i and not a]
        if not cand:
            raise InvariantViolation("no ray through consecutive circles")
        cuts.append(cand[0])
    return circles, order, cuts


def braid_word(d: Diagram):
    """Braid generators of a braid-form diagram as (position, strand, sign).

    Strand i is the gap between the i-th and (i+1)-th circles of the chain.
    Returns the list sorted by position, plus the crossing index of each entry.
    """
    circles, order, cuts = _chain(d)
    rank = {c: i for i, c in enumerate(order)}
    circ = {e: i for i, cyc in enumerate(circles) for e in cyc}
    seqs = []
    for i, cut in zip(order, cuts):
        cyc = circles[i]
        k = cyc.index(cut)
        seqs.append([d.head(e)[0] for e in cyc[k:] + cyc[:k]])
    succ = {c: set() for c in range(len(d.crossings))}
    indeg = {c: 0 for c in range(len(d.crossings))}
    for seq in seqs:
        for a, b in zip(seq, seq[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    heap = [c for c, k in indeg.items() if k == 0]
    heapq.heapify(heap)
    topo = []
    while heap:
        c = heapq.heappop(heap)
        topo.append(c)
        for b in sorted(succ[c]):
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    if len(topo) != len(d.crossings):
        raise InvariantViolation("inconsistent crossing order around the braid axis")
    word = []
    for pos, ci in enumerate(topo):
        c = d.crossings[ci]
        strands = sorted(rank[circ[e]] for e in (c.slots[0], c.slots[c.over_in]))
        if strands[1] != strands[0] + 1:
            raise InvariantViolation("crossing joins non-adjacent circles")
        word.append((pos, strands[0], c.sign, ci))
    return word


# ---- Seifert matrix -------------------------------------------------------

@dataclass(frozen=True)
class SeifertData:
    seifert_circles: int
    genus: int
    components: int
    V: tuple[tuple[int, ...], ...]
    basis_cycles: tuple[tuple[int, int], ...]  # consecutive band pairs on one braid strand
    braid: tuple[int, ...]  # signed generators, 1-based
    diagram: Diagram  # the braid-form diagram the cycles live on

    @property
    def dim(self) -> int:
        return len(self.V)

    @property
    def J(self) -> list[list[int]]:
        n = self.dim
        return [[(self.V[i][j] + self.V[j][i]) % 2 for j in range(n)] for i in range(n)]


def seifert_matrix(d: Diagram) -> SeifertData:
    """Seifert matrix of the surface built by Seifert's algorithm on a braid form of ``d``."""
    if d.n_crossings == 0:
        if d.n_components != 1:
            raise DisconnectedDiagram("crossing-free diagram with several components")
        return SeifertData(1, 0, 1, (), (), (), d)
    if len(d.pieces) != 1 or d.free_loops:
        raise DisconnectedDiagram("diagram projection is split; use arf() for split unions")
    b = braid_form(d)
    word = braid_word(b)
    nstrands = len(seifert_circles(b))
    gens = []  # (strand, pos_a, pos_b, right_a, right_b, crossing_a, crossing_b)
    by_strand = [[w for w in word if w[1] == s] for s in range(nstrands - 1)]
    per_strand = []
    for s, group in enumerate(by_strand):
        row = []
        for x, y in zip(group, group[1:]):
            row.append(len(gens))
            gens.append((s, x[0], y[0], x[2] > 0, y[2] > 0, x[3], y[3]))
        per_strand.append(row)
    n = len(gens)
    V = [[0] * n for _ in range(n)]
    for s, row in enumerate(per_strand):
        for i in row:
            _, _, _, ra, rb, _, _ = gens[i]
            if ra == rb:
                V[i][i] = -1 if ra else 1
        for i, j in zip(row, row[1:]):
            # the two cycles share the crossing between them
            if gens[i][4]:
                V[j][i] = 1
            else:
                V[i][j] = -1
        if s + 1 < len(per_strand):
            for i in row:
                a0, a1 = gens[i][1], gens[i][2]
                for j in per_strand[s + 1]:
                    b0, b1 = gens[j][1], gens[j][2]
                    if b0 < a0 < b1 < a1:
                        V[j][i] = 1
                    elif a0 < b0 < a1 < b1:
                        V[j][i] = -1
    r = d.n_components
    genus2 = n - r + 1
    if genus2 % 2:
        raise InvariantViolation("first Betti number has the wrong parity")
    braid = tuple((w[1] + 1) * (1 if w[2] > 0 else -1) for w in word)
    cycles = tuple((g[5], g[6]) for g in gens)
    return SeifertData(nstrands, genus2 // 2, r, tuple(map(tuple, V)), cycles, braid, b)


# ---- mod 2 linear algebra ---------------------------------------------------

@dataclass(frozen=True)
class Mod2Basis:
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    radical: tuple[tuple[int, ...], ...]

    @property
    def genus(self) -> int:
        return len(self.pairs)


def _bits(v) -> int:
    return sum(1 << i for i, x in enumerate(v) if x % 2)


def _unbits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def symplectic_reduce(J) -> Mod2Basis:
    """Symplectic pairs and a radical basis for an alternating form over Z/2.

    Vectors are held as integer bitsets together with their images under J,
    which transform linearly, so each orthogonalisation step is constant work
    per vector.
    """
    n = len(J)
    rows = []
    for i in range(n):
        if len(J[i]) != n or J[i][i] % 2:
            raise OddRank("form must be square with zero diagonal")
        for j in range(i):
            if (J[i][j] - J[j][i]) % 2:
                raise OddRank("form is not symmetric")
        rows.append(_bits(J[i]))
    pool = [(1 << i, rows[i]) for i in range(n)]
    pairs, radical = [], []

    def form(u, img_v):
        return bin(u & img_v).count("1") & 1

    while pool:
        x, jx = pool.pop(0)
        k = next((k for k, (y, jy) in enumerate(pool) if form(y, jx)), None)
        if k is None:
            # orthogonal to everything still in play, and the pool stays
            # orthogonal to earlier pairs, so x is in the radical
            radical.append(x)
            continue
        y, jy = pool.pop(k)
        pairs.append((x, y))
        rest = []
        for v, jv in pool:
            a, b = form(v, jy), form(v, jx)
            if a:
                v, jv = v ^ x, jv ^ jx
            if b:
                v, jv = v ^ y, jv ^ jy
            rest.append((v, jv))
        pool = rest
    return Mod2Basis(
        tuple((_unbits(x, n), _unbits(y, n)) for x, y in pairs),
        tuple(_unbits(z, n) for z in radical),
    )


def q_form(sd: SeifertData | list, v) -> int:
    V = sd.V if isinstance(sd, SeifertData) else sd
    if len(v) != len(V):
        raise DimensionMismatch(f"vector of length {len(v)} for a {len(V)}-dimensional form")
    s = 0
    for i, vi in enumerate(v):
        if vi % 2:
            for j, vj in enumerate(v):
                if vj % 2:
                    s += V[i][j]
    return s % 2


def pieces_of(d: Diagram) -> list[Diagram]:
    """Sub-diagrams of the connected projection pieces, free loops separately."""
    out = []
    for piece in d.pieces:
        xs = [d.crossings[i] for i in piece]
        labels = {e: d.component_of[e] for c in xs for e in c.slots}
        out.append(Diagram.build(xs, labels))
    for comp in d.components:
        if d.is_free_loop(comp):
            out.append(Diagram.build([], {}, [(comp.edges[0], comp.label)]))
    return out


def arf_of_form(V, check: bool = True) -> int:
    """Arf bit of the quadratic form ``q(v) = v V v^T mod 2``."""
    n = len(V)
    J = [[(V[i][j] + V[j][i]) % 2 for j in range(n)] for i in range(n)]
    basis = symplectic_reduce(J)
    if check:
        for z in basis.radical:
            if q_form(V, z):
                raise InvariantViolation("q does not vanish on the radical of a proper link")
    return sum(q_form(V, x) * q_form(V, y) for x, y in basis.pairs) % 2


def _arf_connected(d: Diagram, check: bool = True) -> int:
    if d.n_crossings == 0:
        return 0
    return arf_of_form(seifert_matrix(d).V, check)


def arf(d: Diagram) -> ArfValue:
    if not is_proper(d):
        return ArfValue.UNDEFINED
    return ArfValue.of(sum(_arf_connected(p) for p in pieces_of(d)))


# ---- determinant oracle -----------------------------------------------------

def int_det(M) -> int:
    """Exact integer determinant by fraction-free elimination."""
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _arcs(d: Diagram):
    parent = {e: e for e in d.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in d.crossings:
        a, b = find(c.slots[1]), find(c.slots[3])
        parent[a] = b
    roots = sorted({find(e) for e in d.edges})
    idx = {r: i for i, r in enumerate(roots)}
    return {e: idx[find(e)] for e in d.edges}, len(roots)


def coloring_matrix(d: Diagram):
    """Fox coloring matrix: one row per crossing, one column per arc."""
    arc, n = _arcs(d)
    rows = []
    for c in d.crossings:
        row = [0] * n
        row[arc[c.slots[1]]] += 2
        row[arc[c.slots[0]]] -= 1
        row[arc[c.slots[2]]] -= 1
        rows.append(row)
    return rows


def knot_determinant(d: Diagram) -> int:
    if d.n_components != 1:
        raise NotAKnot(f"{d.n_components} components")
    if d.n_crossings == 0:
        return 1
    M = coloring_matrix(d)
    minor = [row[1:] for row in M[1:]]
    return abs(int_det(minor))


def arf_oracle_knot(d: Diagram) -> ArfValue:
    det = knot_determinant(d)
    if det % 8 in (1, 7):
        return ArfValue.ZERO
    if det % 8 in (3, 5):
        return ArfValue.ONE
    raise InvariantViolation(f"knot determinant {det} is even")


def arf_report(d: Diagram) -> dict:
    proper = is_proper(d)
    rep = {"components": d.n_components, "proper": proper}
    try:
        if len(pieces_of(d)) == 1 and d.n_crossings:
            sd = seifert_matrix(d)
            rep["genus"], rep["seifert_dim"] = sd.genus, sd.dim
        else:
            dims = [seifert_matrix(p) for p in pieces_of(d) if p.n_crossings]
            rep["genus"] = sum(s.genus for s in dims)
            rep["seifert_dim"] = sum(s.dim for s in dims)
    except DisconnectedDiagram:
        rep["genus"], rep["seifert_dim"] = 0, 0
    rep["arf"] = arf(d).value
    rep["det_mod8"] = knot_determinant(d) % 8 if d.n_components == 1 else None
    return rep
