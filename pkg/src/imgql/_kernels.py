"""Compiled inner loops.

All kernels see the grid as a flat C-ordered array over a 3D shape
``(nz, ny, nx)``; 2D grids are lifted by a leading axis of length 1.
Neighbor offsets arrive as ``(K, 3)`` integer arrays.
"""

from __future__ import annotations

import heapq

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _step(p, k, shape, offs):
    """Flat index of neighbor ``k`` of ``p``, or -1 when it leaves the grid."""
    ny, nx = shape[1], shape[2]
    z = p // (ny * nx)
    rem = p - z * ny * nx
    y = rem // nx
    x = rem - y * nx
    zz = z + offs[k, 0]
    yy = y + offs[k, 1]
    xx = x + offs[k, 2]
    if zz < 0 or zz >= shape[0] or yy < 0 or yy >= ny or xx < 0 or xx >= nx:
        return -1
    return (zz * ny + yy) * nx + xx


@njit(cache=True)
def propagate_bad(allowed, bad, shape, offs):
    """Grow ``bad`` in place into ``allowed`` points adjacent to it, to fixpoint.

    Worklist form of ``Bad := Bad | (allowed & C(Bad))``: each point is
    enqueued at most once, so the cost is O(|X| * K).
    """
    n = bad.size
    queue = np.empty(n, dtype=np.int64)
    tail = 0
    for p in range(n):
        if bad[p]:
            queue[tail] = p
            tail += 1
    head = 0
    nk = offs.shape[0]
    while head < tail:
        p = queue[head]
        head += 1
        for k in range(nk):
            q = _step(p, k, shape, offs)
            if q >= 0 and allowed[q] and not bad[q]:
                bad[q] = True
                queue[tail] = q
                tail += 1
    return bad


@njit(cache=True)
def chamfer(seed, shape, offs, weights):
    """Weighted shortest-path distance from the seed set (modified Dijkstra).

    The heap starts with the seed points that have a non-seed neighbor,
    all at priority 0; interior seeds are already final at 0.
    """
    n = seed.size
    dist = np.full(n, np.inf)
    nk = offs.shape[0]
    heap = [(0.0, np.int64(0))]
    heap.pop()
    for p in range(n):
        if seed[p]:
            dist[p] = 0.0
    for p in range(n):
        if seed[p]:
            for k in range(nk):
                q = _step(p, k, shape, offs)
                if q >= 0 and not seed[q]:
                    heap.append((0.0, np.int64(p)))
                    break
    while len(heap) > 0:
        d, p = heapq.heappop(heap)
        if d > dist[p]:
            continue
        for k in range(nk):
            q = _step(p, k, shape, offs)
            if q >= 0:
                nd = d + weights[k]
                if nd < dist[q]:
                    dist[q] = nd
                    heapq.heappush(heap, (nd, q))
    return dist


@njit(cache=True)
def _remove(gu, gv, gw, hu, hv, hw):
    a = hv - hu
    b = hw - hv
    c = hw - hu
    return c * gv - b * gu - a * gw - a * b * c > 0.0


@njit(cache=True)
def voronoi_lines(lines, step):
    """One dimension of the separable Euclidean transform, in place.

    ``lines`` has shape ``(m, L)`` and holds squared distances computed over
    the previously processed axes (``inf`` where no seed is visible).  Each
    row is replaced by ``min_j lines[j] + ((i - j) * step)**2`` using the
    partial-Voronoi site list with the removal test of Maurer et al.
    """
    m, length = lines.shape
    g = np.empty(length)
    h = np.empty(length)
    for r in range(m):
        f = lines[r]
        ns = -1
        for i in range(length):
            fi = f[i]
            if fi == np.inf:
                continue
            xi = i * step
            while ns >= 1 and _remove(g[ns - 1], g[ns], fi, h[ns - 1], h[ns], xi):
                ns -= 1
            ns += 1
            g[ns] = fi
            h[ns] = xi
        if ns < 0:
            continue
        l = 0
        for i in range(length):
            xi = i * step
            best = g[l] + (h[l] - xi) * (h[l] - xi)
            while l < ns:
                nxt = g[l + 1] + (h[l + 1] - xi) * (h[l + 1] - xi)
                if best <= nxt:
                    break
                l += 1
                best = nxt
            f[i] = best
    return lines


@njit(cache=True)
def scmp_points(bins, restrict, target_hist, shape, offs, k, cmp_code, threshold):
    """For each restricted point, compare its sphere histogram with the target.

    ``bins`` holds each point's precomputed bin index (-1 when out of
    range); ``offs`` lists the sphere displacements.  Comparator codes:
    0 '=', 1 '<', 2 '>', 3 '<=', 4 '>='.
    """
    n = bins.size
    out = np.zeros(n, dtype=np.bool_)
    hist = np.zeros(k)
    nk = offs.shape[0]
    for p in range(n):
        if not restrict[p]:
            continue
        for i in range(k):
            hist[i] = 0.0
        for j in range(nk):
            q = _step(p, j, shape, offs)
            if q >= 0:
                b = bins[q]
                if b >= 0:
                    hist[b] += 1.0
        r = correlation(hist, target_hist)
        if cmp_code == 0:
            ok = r == threshold
        elif cmp_code == 1:
            ok = r < threshold
        elif cmp_code == 2:
            ok = r > threshold
        elif cmp_code == 3:
            ok = r <= threshold
        else:
            ok = r >= threshold
        out[p] = ok
    return out


@njit(cache=True)
def correlation(h1, h2):
    """Pearson coefficient of two equal-length histograms.

    Constant inputs have no defined coefficient: two constant histograms
    score 1, one constant histogram scores 0.
    """
    k = h1.size
    c1 = True
    c2 = True
    for i in range(1, k):
        if h1[i] != h1[0]:
            c1 = False
        if h2[i] != h2[0]:
            c2 = False
    if c1 and c2:
        return 1.0
    if c1 or c2:
        return 0.0
    m1 = 0.0
    m2 = 0.0
    for i in range(k):
        m1 += h1[i]
        m2 += h2[i]
    m1 /= k
    m2 /= k
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for i in range(k):
        d1 = h1[i] - m1
        d2 = h2[i] - m2
        sxy += d1 * d2
        sxx += d1 * d1
        syy += d2 * d2
    r = sxy / (np.sqrt(sxx) * np.sqrt(syy))
    if r > 1.0:
        return 1.0
    if r < -1.0:
        return -1.0
    return r
