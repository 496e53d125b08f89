"""Pure-Python canonical traversal kernel.

Inputs are flat integer arrays over one connected piece: ``slots`` (4 per
crossing, edges numbered 0..m-1), ``flags`` (1 for X+), ``head`` (slot
position 4*c+k where each edge is incoming) and ``color`` (per-edge component
rank, used only for tie-breaking).
"""


def walk(slots, flags, head, color, start, n, m):
    """Label edges and crossings by traversal from ``start``.

    Returns (code, edge_labels, crossing_order).
    """
    elab = [-1] * m
    cnum = [-1] * n
    order = []
    colors = []
    nxt = 0
    pending = [start]
    ci = 0
    while True:
        while pending:
            e = pending.pop()
            colors.append(color[e])
            while elab[e] < 0:
                elab[e] = nxt
                nxt += 1
                p = head[e]
                c = p >> 2
                if cnum[c] < 0:
                    cnum[c] = len(order)
                    order.append(c)
                e = slots[(c << 2) | (((p & 3) + 2) & 3)]
        if ci >= len(order):
            break
        c = order[ci]
        base = c << 2
        for k in range(4):
            e = slots[base + k]
            if elab[e] < 0:
                pending.append(e)
                break
        else:
            ci += 1
    code = []
    for c in order:
        base = c << 2
        code.append(flags[c])
        code.append(elab[slots[base]])
        code.append(elab[slots[base + 1]])
        code.append(elab[slots[base + 2]])
        code.append(elab[slots[base + 3]])
    code.extend(colors)
    return code, elab, order


def best_start(slots, flags, head, color, n, m):
    """Minimal code over all start edges; returns (code, start)."""
    best = None
    best_e = -1
    for e in range(m):
        code = walk(slots, flags, head, color, e, n, m)[0]
        if best is None or code < best:
            best = code
            best_e = e
    return tuple(best), best_e


def canon_piece(slots, flags, head, color, n, m):
    """Least code over start edges with the winning edge labels and crossing order."""
    code, e = best_start(slots, flags, head, color, n, m)
    _, elab, order = walk(slots, flags, head, color, e, n, m)
    return code, e, elab, order
