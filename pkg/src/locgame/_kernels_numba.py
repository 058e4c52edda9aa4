"""Numba-compiled implementations of the hot kernels.

Semantics match :mod:`locgame._kernels_numpy` exactly; the test suite checks
both paths against each other.
"""
import numpy as np

from ._backend import njit


@njit
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit
def popcount_rows(words):
    out = np.zeros(words.shape[0], dtype=np.int64)
    for i in range(words.shape[0]):
        s = 0
        for j in range(words.shape[1]):
            s += _popcount64(words[i, j])
        out[i] = s
    return out


@njit
def union_classes(rows, members, starts):
    ncls = starts.shape[0]
    nw = rows.shape[1]
    out = np.zeros((ncls, nw), dtype=np.uint64)
    for c in range(ncls):
        hi = members.shape[0] if c + 1 == ncls else starts[c + 1]
        for t in range(starts[c], hi):
            v = members[t]
            for j in range(nw):
                out[c, j] |= rows[v, j]
    return out


@njit
def class_union_counts(rows, members, starts):
    ncls = starts.shape[0]
    nw = rows.shape[1]
    out = np.zeros(ncls, dtype=np.int64)
    acc = np.zeros(nw, dtype=np.uint64)
    for c in range(ncls):
        acc[:] = 0
        hi = members.shape[0] if c + 1 == ncls else starts[c + 1]
        for t in range(starts[c], hi):
            v = members[t]
            for j in range(nw):
                acc[j] |= rows[v, j]
        s = 0
        for j in range(nw):
            s += _popcount64(acc[j])
        out[c] = s
    return out


@njit
def probe_distances_d2(adj, cands, probe):
    m = cands.shape[0]
    k = probe.shape[0]
    out = np.empty((m, k), dtype=np.int32)
    for i in range(m):
        v = cands[i]
        for j in range(k):
            w = probe[j]
            if v == w:
                out[i, j] = 0
            elif adj[v, w]:
                out[i, j] = 1
            else:
                out[i, j] = 2
    return out


@njit
def bfs(bits, n, src, unreachable):
    nw = bits.shape[1]
    dist = np.full(n, unreachable, dtype=np.int32)
    seen = np.zeros(nw, dtype=np.uint64)
    nxt = np.zeros(nw, dtype=np.uint64)
    frontier = np.empty(n, dtype=np.int64)
    dist[src] = 0
    seen[src >> 6] |= np.uint64(1) << np.uint64(src & 63)
    frontier[0] = src
    size = 1
    level = 0
    while size > 0:
        level += 1
        nxt[:] = 0
        for t in range(size):
            v = frontier[t]
            for j in range(nw):
                nxt[j] |= bits[v, j]
        size = 0
        for j in range(nw):
            fresh = nxt[j] & ~seen[j]
            seen[j] |= fresh
            while fresh:
                low = fresh & (~fresh + np.uint64(1))
                b = 0
                while (low >> np.uint64(b)) != np.uint64(1):
                    b += 1
                u = j * 64 + b
                dist[u] = level
                frontier[size] = u
                size += 1
                fresh ^= low
    return dist


@njit
def _codegree_bits(bits):
    n = bits.shape[0]
    nw = bits.shape[1]
    out = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(u, n):
            s = 0
            for j in range(nw):
                s += _popcount64(bits[u, j] & bits[v, j])
            out[u, v] = s
            out[v, u] = s
    return out


def codegree_matrix(adj):
    # bit rows are packed here so the signature matches the numpy path
    n = adj.shape[0]
    packed = np.packbits(adj.astype(bool), axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    bits = np.ascontiguousarray(packed).view("<u8").reshape(n, -1)
    return _codegree_bits(bits)


@njit
def separation_gains(codes, labels, nclasses, nvals):
    m, n = codes.shape
    sizes = np.zeros(nclasses, dtype=np.int64)
    for i in range(m):
        sizes[labels[i]] += 1
    total = 0
    for c in range(nclasses):
        total += sizes[c] * (sizes[c] - 1) // 2
    cnt = np.zeros((nclasses, nvals), dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    for w in range(n):
        cnt[:, :] = 0
        for i in range(m):
            cnt[labels[i], codes[i, w]] += 1
        same = 0
        for c in range(nclasses):
            for d in range(nvals):
                x = cnt[c, d]
                same += x * (x - 1) // 2
        out[w] = total - same
    return out
