"""Hot numeric kernels, JIT-compiled with numba when available.

Every kernel has two implementations: a numba ``@njit`` loop (``*_nb``)
and a vectorized pure-numpy fallback (``*_np``).  Both produce identical
output arrays; the exported name binds to one of them at import time.

Selection: the environment variable ``GRAPHALIGN_NUMBA`` ("0", "false",
"off" or "no" disables the JIT path).  ``backend()`` reports which path
is active.  ``benchmarks/bench_kernels.py`` times the two side by side.

Graphs enter kernels in two array forms:
  * edge keys: sorted ``int64`` array of ``i * n + j`` with ``i < j``;
  * CSR: ``indptr`` (int64, n+1) and ``indices`` (int64, 2E, each row
    sorted ascending).
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("GRAPHALIGN_NUMBA", "1").strip().lower()
USE_NUMBA = _FLAG not in ("0", "false", "off", "no")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

HAVE_NUMBA = USE_NUMBA


def backend() -> str:
    """Name of the active kernel path: ``"numba"`` or ``"numpy"``."""
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# CSR adjacency from edge keys


def csr_from_keys_np(n, keys):
    rows = keys // n
    cols = keys % n
    src = np.concatenate([rows, cols])
    dst = np.concatenate([cols, rows])
    order = np.argsort(src * n + dst, kind="stable")
    indices = dst[order]
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def _csr_from_keys_loop(n, keys):
    e_count = keys.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for e in range(e_count):
        k = keys[e]
        i = k // n
        j = k % n
        deg[i] += 1
        deg[j] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + deg[v]
    fill = indptr[:n].copy()
    indices = np.empty(2 * e_count, dtype=np.int64)
    # Keys are sorted by (i, j); row r receives its smaller neighbors
    # (from keys (u, r), u < r) before its larger ones, both ascending,
    # so each adjacency row comes out sorted in a single pass.
    for e in range(e_count):
        k = keys[e]
        i = k // n
        j = k % n
        indices[fill[i]] = j
        fill[i] += 1
        indices[fill[j]] = i
        fill[j] += 1
    return indptr, indices


# ---------------------------------------------------------------------------
# Sorted-set merges on edge keys


def intersect_keys_np(a, b):
    return np.intersect1d(a, b, assume_unique=True)


def union_keys_np(a, b):
    return np.union1d(a, b)


def _intersect_keys_loop(a, b):
    na, nb = a.shape[0], b.shape[0]
    out = np.empty(min(na, nb), dtype=np.int64)
    i = j = k = 0
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x == y:
            out[k] = x
            k += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out[:k].copy()


def _union_keys_loop(a, b):
    na, nb = a.shape[0], b.shape[0]
    out = np.empty(na + nb, dtype=np.int64)
    i = j = k = 0
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x == y:
            out[k] = x
            i += 1
            j += 1
        elif x < y:
            out[k] = x
            i += 1
        else:
            out[k] = y
            j += 1
        k += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nb:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k].copy()


# ---------------------------------------------------------------------------
# k-core peeling

def core_peel_mask_np(n, indptr, indices, k):
    deg = (indptr[1:] - indptr[:-1]).astype(np.int64)
    alive = np.ones(n, dtype=np.bool_)
    if n == 0:
        return alive
    srcs = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    while True:
        kill = alive & (deg < k)
        if not kill.any():
            return alive
        alive &= ~kill
        # one decrement per half-edge leaving a killed node; hits on
        # already-dead targets are harmless
        sel = kill[srcs]
        np.subtract.at(deg, indices[sel], 1)


def _core_peel_mask_loop(n, indptr, indices, k):
    deg = (indptr[1:] - indptr[:-1]).astype(np.int64)
    alive = np.ones(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if deg[v] < k:
            alive[v] = False
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if alive[u]:
                deg[u] -= 1
                if deg[u] < k:
                    alive[u] = False
                    stack[top] = u
                    top += 1
    return alive


# ---------------------------------------------------------------------------
# Expansion by absorbing outside nodes with >= 3 inside neighbors

def expand_mask_np(n, indptr, indices, member):
    member = member.copy()
    if n == 0:
        return member
    srcs = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    while True:
        inside = member[srcs]
        cnt = np.bincount(indices[inside], minlength=n)
        add = (~member) & (cnt >= 3)
        if not add.any():
            return member
        member |= add


def _expand_mask_loop(n, indptr, indices, member):
    member = member.copy()
    cnt = np.zeros(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if not member[v]:
            c = 0
            for p in range(indptr[v], indptr[v + 1]):
                if member[indices[p]]:
                    c += 1
            cnt[v] = c
            if c >= 3:
                stack[top] = v
                top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if member[v]:
            continue
        member[v] = True
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if not member[u]:
                cnt[u] += 1
                if cnt[u] == 3:
                    stack[top] = u
                    top += 1
    return member


# ---------------------------------------------------------------------------
# Transitive closure of pairwise partial matchings
#
# M is an int64 tensor of shape (m, m, n): M[a, b, x] is the label in
# graph b matched to label x of graph a, or -1.  The closure runs a
# level-synchronous BFS over the m graph-vertices per (source graph,
# label), visiting frontier vertices and neighbor candidates in
# ascending index order; the first discovered image wins and later
# disagreeing images count as conflicts.  Both implementations follow
# the exact same visit order, so extended tables and conflict counts
# match elementwise.


def closure_np(M):
    m, _, n = M.shape
    ext = np.full((m, m, n), -1, dtype=np.int64)
    node_ids = np.arange(n, dtype=np.int64)
    conflicts = 0
    for a in range(m):
        lab = np.full((m, n), -1, dtype=np.int64)
        lab[a] = node_ids
        front = np.zeros((m, n), dtype=np.bool_)
        front[a] = True
        while front.any():
            nxt = np.zeros((m, n), dtype=np.bool_)
            for b in range(m):
                fmask = front[b]
                if not fmask.any():
                    continue
                xb = lab[b]
                safe = np.where(fmask, xb, 0)
                for c in range(m):
                    if c == b:
                        continue
                    y = M[b, c, safe]
                    has = fmask & (y >= 0)
                    newly = has & (lab[c] < 0)
                    clash = has & (lab[c] >= 0) & (lab[c] != y)
                    conflicts += int(np.count_nonzero(clash))
                    if newly.any():
                        lab[c, newly] = y[newly]
                        nxt[c] |= newly
            front = nxt
        for c in range(m):
            if c != a:
                ext[a, c] = lab[c]
    return ext, conflicts


def _closure_loop(M):
    m = M.shape[0]
    n = M.shape[2]
    ext = np.full((m, m, n), -1, dtype=np.int64)
    lab = np.empty(m, dtype=np.int64)
    frontier = np.empty(m, dtype=np.int64)
    nxt = np.zeros(m, dtype=np.bool_)
    conflicts = 0
    for a in range(m):
        for x in range(n):
            for b in range(m):
                lab[b] = -1
                nxt[b] = False
            lab[a] = x
            frontier[0] = a
            fcount = 1
            while fcount > 0:
                for fi in range(fcount):
                    b = frontier[fi]
                    xb = lab[b]
                    for c in range(m):
                        if c == b:
                            continue
                        y = M[b, c, xb]
                        if y >= 0:
                            if lab[c] < 0:
                                lab[c] = y
                                nxt[c] = True
                            elif lab[c] != y:
                                conflicts += 1
                fcount = 0
                for c in range(m):
                    if nxt[c]:
                        frontier[fcount] = c
                        fcount += 1
                        nxt[c] = False
            for c in range(m):
                if c != a and lab[c] >= 0:
                    ext[a, c, x] = lab[c]
    return ext, conflicts


# ---------------------------------------------------------------------------
# Candidate pairs within distance r, via a uniform grid on the unit square
#
# Points arrive sorted by cell id (row-major cy * ncell + cx); cell_start
# delimits each cell's slice.  Returned keys are sorted ascending.

_FWD_NBRS = ((1, -1), (1, 0), (1, 1), (0, 1))


def rgg_candidate_keys_np(n, xs, ys, ids, cell_start, ncell, r):
    r2 = r * r
    chunks = []
    for cy in range(ncell):
        for cx in range(ncell):
            c0 = cy * ncell + cx
            s0, e0 = cell_start[c0], cell_start[c0 + 1]
            if s0 == e0:
                continue
            ax = xs[s0:e0]
            ay = ys[s0:e0]
            aid = ids[s0:e0]
            # pairs within the cell
            dx = ax[:, None] - ax[None, :]
            dy = ay[:, None] - ay[None, :]
            hit = (dx * dx + dy * dy) <= r2
            iu, ju = np.nonzero(np.triu(hit, 1))
            if iu.size:
                u = aid[iu]
                v = aid[ju]
                lo = np.minimum(u, v)
                hi = np.maximum(u, v)
                chunks.append(lo * n + hi)
            for ddx, ddy in _FWD_NBRS:
                nx_, ny_ = cx + ddx, cy + ddy
                if nx_ < 0 or nx_ >= ncell or ny_ < 0 or ny_ >= ncell:
                    continue
                c1 = ny_ * ncell + nx_
                s1, e1 = cell_start[c1], cell_start[c1 + 1]
                if s1 == e1:
                    continue
                bx = xs[s1:e1]
                by = ys[s1:e1]
                bid = ids[s1:e1]
                dx = ax[:, None] - bx[None, :]
                dy = ay[:, None] - by[None, :]
                iu, ju = np.nonzero((dx * dx + dy * dy) <= r2)
                if iu.size:
                    u = aid[iu]
                    v = bid[ju]
                    lo = np.minimum(u, v)
                    hi = np.maximum(u, v)
                    chunks.append(lo * n + hi)
    if not chunks:
        return np.empty(0, dtype=np.int64)
    keys = np.concatenate(chunks)
    keys.sort()
    return keys


def _rgg_candidate_count_loop(xs, ys, cell_start, ncell, r):
    r2 = r * r
    total = 0
    for cy in range(ncell):
        for cx in range(ncell):
            c0 = cy * ncell + cx
            s0, e0 = cell_start[c0], cell_start[c0 + 1]
            for p in range(s0, e0):
                for q in range(p + 1, e0):
                    dx = xs[p] - xs[q]
                    dy = ys[p] - ys[q]
                    if dx * dx + dy * dy <= r2:
                        total += 1
            for t in range(4):
                if t == 0:
                    nx_, ny_ = cx + 1, cy - 1
                elif t == 1:
                    nx_, ny_ = cx + 1, cy
                elif t == 2:
                    nx_, ny_ = cx + 1, cy + 1
                else:
                    nx_, ny_ = cx, cy + 1
                if nx_ < 0 or nx_ >= ncell or ny_ < 0 or ny_ >= ncell:
                    continue
                c1 = ny_ * ncell + nx_
                s1, e1 = cell_start[c1], cell_start[c1 + 1]
                for p in range(s0, e0):
                    for q in range(s1, e1):
                        dx = xs[p] - xs[q]
                        dy = ys[p] - ys[q]
                        if dx * dx + dy * dy <= r2:
                            total += 1
    return total


def _rgg_candidate_fill_loop(n, xs, ys, ids, cell_start, ncell, r, out):
    r2 = r * r
    w = 0
    for cy in range(ncell):
        for cx in range(ncell):
            c0 = cy * ncell + cx
            s0, e0 = cell_start[c0], cell_start[c0 + 1]
            for p in range(s0, e0):
                for q in range(p + 1, e0):
                    dx = xs[p] - xs[q]
                    dy = ys[p] - ys[q]
                    if dx * dx + dy * dy <= r2:
                        u = ids[p]
                        v = ids[q]
                        if u < v:
                            out[w] = u * n + v
                        else:
                            out[w] = v * n + u
                        w += 1
            for t in range(4):
                if t == 0:
                    nx_, ny_ = cx + 1, cy - 1
                elif t == 1:
                    nx_, ny_ = cx + 1, cy
                elif t == 2:
                    nx_, ny_ = cx + 1, cy + 1
                else:
                    nx_, ny_ = cx, cy + 1
                if nx_ < 0 or nx_ >= ncell or ny_ < 0 or ny_ >= ncell:
                    continue
                c1 = ny_ * ncell + nx_
                s1, e1 = cell_start[c1], cell_start[c1 + 1]
                for p in range(s0, e0):
                    for q in range(s1, e1):
                        dx = xs[p] - xs[q]
                        dy = ys[p] - ys[q]
                        if dx * dx + dy * dy <= r2:
                            u = ids[p]
                            v = ids[q]
                            if u < v:
                                out[w] = u * n + v
                            else:
                                out[w] = v * n + u
                            w += 1
    return w


def _make_rgg_candidate_keys(count_fn, fill_fn):
    def rgg_candidate_keys(n, xs, ys, ids, cell_start, ncell, r):
        total = count_fn(xs, ys, cell_start, ncell, r)
        out = np.empty(total, dtype=np.int64)
        fill_fn(n, xs, ys, ids, cell_start, ncell, r, out)
        out.sort()
        return out

    return rgg_candidate_keys


# ---------------------------------------------------------------------------
# binding

if USE_NUMBA:
    _jit = njit(cache=True)
    csr_from_keys_nb = _jit(_csr_from_keys_loop)
    intersect_keys_nb = _jit(_intersect_keys_loop)
    union_keys_nb = _jit(_union_keys_loop)
    core_peel_mask_nb = _jit(_core_peel_mask_loop)
    expand_mask_nb = _jit(_expand_mask_loop)
    closure_nb = _jit(_closure_loop)
    rgg_candidate_keys_nb = _make_rgg_candidate_keys(
        _jit(_rgg_candidate_count_loop), _jit(_rgg_candidate_fill_loop)
    )

    csr_from_keys = csr_from_keys_nb
    intersect_keys = intersect_keys_nb
    union_keys = union_keys_nb
    core_peel_mask = core_peel_mask_nb
    expand_mask = expand_mask_nb
    closure = closure_nb
    rgg_candidate_keys = rgg_candidate_keys_nb
else:
    csr_from_keys = csr_from_keys_np
    intersect_keys = intersect_keys_np
    union_keys = union_keys_np
    core_peel_mask = core_peel_mask_np
    expand_mask = expand_mask_np
    closure = closure_np
    rgg_candidate_keys = rgg_candidate_keys_np
