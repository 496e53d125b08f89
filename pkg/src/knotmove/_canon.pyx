# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled canonical traversal kernel; mirrors ``_canon_py`` exactly."""
from libc.stdlib cimport malloc, free


cdef int _walk(int* slots, int* flags, int* head, int* color, int start,
               int n, int m, int* elab, int* cnum, int* order, int* pend,
               int* out) noexcept nogil:
    # writes the code into out, returns its length
    cdef int i, e, p, c, k, base, nxt = 0, norder = 0, npend = 0, ci = 0
    cdef int ncol = 0, found
    cdef int* colors = out + 5 * n
    for i in range(m):
        elab[i] = -1
    for i in range(n):
        cnum[i] = -1
    pend[npend] = start
    npend += 1
    while True:
        while npend > 0:
            npend -= 1
            e = pend[npend]
            colors[ncol] = color[e]
            ncol += 1
            while elab[e] < 0:
                elab[e] = nxt
                nxt += 1
                p = head[e]
                c = p >> 2
                if cnum[c] < 0:
                    cnum[c] = norder
                    order[norder] = c
                    norder += 1
                e = slots[(c << 2) | (((p & 3) + 2) & 3)]
        if ci >= norder:
            break
        c = order[ci]
        base = c << 2
        found = 0
        for k in range(4):
            e = slots[base + k]
            if elab[e] < 0:
                pend[npend] = e
                npend += 1
                found = 1
                break
        if not found:
            ci += 1
    for i in range(norder):
        c = order[i]
        base = c << 2
        out[5 * i] = flags[c]
        out[5 * i + 1] = elab[slots[base]]
        out[5 * i + 2] = elab[slots[base + 1]]
        out[5 * i + 3] = elab[slots[base + 2]]
        out[5 * i + 4] = elab[slots[base + 3]]
    # colour list immediately follows the crossing block
    if norder < n:
        for i in range(ncol):
            out[5 * norder + i] = colors[i]
    return 5 * norder + ncol


def best_start(slots, flags, head, color, int n, int m):
    code, e, _, _ = canon_piece(slots, flags, head, color, n, m)
    return code, e


def canon_piece(slots, flags, head, color, int n, int m):
    """Least code over start edges with the winning edge labels and crossing order."""
    cdef int cap = 5 * n + m + 4
    cdef int* s = <int*> malloc(sizeof(int) * (4 * n + 1))
    cdef int* f = <int*> malloc(sizeof(int) * (n + 1))
    cdef int* h = <int*> malloc(sizeof(int) * (m + 1))
    cdef int* col = <int*> malloc(sizeof(int) * (m + 1))
    cdef int* elab = <int*> malloc(sizeof(int) * (m + 1))
    cdef int* cnum = <int*> malloc(sizeof(int) * (n + 1))
    cdef int* order = <int*> malloc(sizeof(int) * (n + 1))
    cdef int* pend = <int*> malloc(sizeof(int) * (m + 1))
    cdef int* cur = <int*> malloc(sizeof(int) * cap)
    cdef int* best = <int*> malloc(sizeof(int) * cap)
    cdef int i, e, L, bestlen = -1, beste = -1, j
    cdef int better
    try:
        for i in range(4 * n):
            s[i] = slots[i]
        for i in range(n):
            f[i] = flags[i]
        for i in range(m):
            h[i] = head[i]
            col[i] = color[i]
        with nogil:
            for e in range(m):
                L = _walk(s, f, h, col, e, n, m, elab, cnum, order, pend, cur)
                if bestlen < 0:
                    better = 1
                else:
                    better = 0
                    for j in range(L if L < bestlen else bestlen):
                        if cur[j] != best[j]:
                            better = cur[j] < best[j]
                            break
                    else:
                        better = L < bestlen
                if better:
                    for j in range(L):
                        best[j] = cur[j]
                    bestlen = L
                    beste = e
        _walk(s, f, h, col, beste, n, m, elab, cnum, order, pend, cur)
        return (tuple(best[j] for j in range(bestlen)), beste,
                [elab[j] for j in range(m)], [order[j] for j in range(n)])
    finally:
        free(s); free(f); free(h); free(col); free(elab)
        free(cnum); free(order); free(pend); free(cur); free(best)
