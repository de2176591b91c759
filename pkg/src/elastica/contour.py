"""Marching-squares extraction of zero level sets on a rectangular grid.

Used to trace domain boundaries for rendering and for seeding curves from
an implicit description. Crossing points are computed once per grid edge,
so polyline chaining is exact (no floating-point matching of endpoints).
"""

from __future__ import annotations

import numpy as np

# Segment table: cell case -> list of (edge, edge) pairs to connect.
# Edges: 0 = bottom, 1 = right, 2 = top, 3 = left. Corner bits (inside
# means value < 0): 1 = bottom-left, 2 = bottom-right, 4 = top-right,
# 8 = top-left. Cases 5 and 10 are saddles, resolved by the cell center.
_CASES = {
    0: [],
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(3, 2)],
    8: [(2, 3)],
    9: [(0, 2)],
    11: [(1, 2)],
    12: [(1, 3)],
    13: [(0, 1)],
    14: [(0, 3)],
    15: [],
}


def _interp(p0, p1, v0, v1):
    t = v0 / (v0 - v1)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


def zero_contours(xs, ys, vals) -> list[tuple[np.ndarray, bool]]:
    """Trace the zero level set of vals sampled on the grid ys x xs.

    vals[j, i] is the sample at (xs[i], ys[j]). Returns a list of
    (points, closed) polylines; closed loops do not repeat the first point.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    vals = np.asarray(vals, dtype=float)
    ny, nx = vals.shape
    if nx != xs.size or ny != ys.size:
        raise ValueError("grid shape mismatch")
    inside = vals < 0.0

    # Crossing points keyed by grid edge: ('h', i, j) joins node (i,j)-(i+1,j),
    # ('v', i, j) joins node (i,j)-(i,j+1).
    cross: dict[tuple, tuple[float, float]] = {}

    def edge_key(cell_i, cell_j, e):
        if e == 0:
            return ("h", cell_i, cell_j)
        if e == 2:
            return ("h", cell_i, cell_j + 1)
        if e == 3:
            return ("v", cell_i, cell_j)
        return ("v", cell_i + 1, cell_j)

    def edge_point(key):
        if key in cross:
            return cross[key]
        kind, i, j = key
        if kind == "h":
            p = _interp(
                (xs[i], ys[j]), (xs[i + 1], ys[j]), vals[j, i], vals[j, i + 1]
            )
        else:
            p = _interp(
                (xs[i], ys[j]), (xs[i], ys[j + 1]), vals[j, i], vals[j + 1, i]
            )
        cross[key] = p
        return p

    segments: list[tuple[tuple, tuple]] = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            case = (
                (1 if inside[j, i] else 0)
                | (2 if inside[j, i + 1] else 0)
                | (4 if inside[j + 1, i + 1] else 0)
                | (8 if inside[j + 1, i] else 0)
            )
            if case == 0 or case == 15:
                continue
            if case in (5, 10):
                center = 0.25 * (
                    vals[j, i] + vals[j, i + 1] + vals[j + 1, i] + vals[j + 1, i + 1]
                )
                if case == 5:
                    pairs = [(0, 1), (2, 3)] if center < 0 else [(3, 0), (1, 2)]
                else:
                    pairs = [(0, 3), (1, 2)] if center < 0 else [(0, 1), (2, 3)]
            else:
                pairs = _CASES[case]
            for a, b in pairs:
                ka, kb = edge_key(i, j, a), edge_key(i, j, b)
                edge_point(ka)
                edge_point(kb)
                segments.append((ka, kb))

    # Chain segments into paths. Every edge key touches at most two segments.
    adj: dict[tuple, list[int]] = {}
    for idx, (a, b) in enumerate(segments):
        adj.setdefault(a, []).append(idx)
        adj.setdefault(b, []).append(idx)

    used = np.zeros(len(segments), dtype=bool)
    paths: list[tuple[np.ndarray, bool]] = []

    def walk(start_key, seg_idx):
        keys = [start_key]
        cur_key, cur_seg = start_key, seg_idx
        while True:
            used[cur_seg] = True
            a, b = segments[cur_seg]
            nxt_key = b if a == cur_key else a
            keys.append(nxt_key)
            candidates = [s for s in adj[nxt_key] if not used[s]]
            if not candidates:
                return keys
            cur_key, cur_seg = nxt_key, candidates[0]

    for idx in range(len(segments)):
        if used[idx]:
            continue
        a, _ = segments[idx]
        # Walk to one end first so open paths start at a terminus.
        keys = walk(a, idx)
        if keys[0] == keys[-1]:
            pts = np.array([cross[k] for k in keys[:-1]])
            paths.append((pts, True))
            continue
        tail = keys[::-1]
        candidates = [s for s in adj[tail[-1]] if not used[s]]
        if candidates:
            more = walk(tail[-1], candidates[0])
            tail = tail + more[1:]
        if tail[0] == tail[-1]:
            pts = np.array([cross[k] for k in tail[:-1]])
            paths.append((pts, True))
        else:
            pts = np.array([cross[k] for k in tail])
            paths.append((pts, False))
    return paths
