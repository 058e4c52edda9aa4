"""Pure-numpy implementations of the hot kernels."""
import numpy as np


def popcount_rows(words):
    return np.bitwise_count(words).sum(axis=1, dtype=np.int64)


def union_classes(rows, members, starts):
    if len(members) == 0:
        return np.zeros((0, rows.shape[1]), dtype=np.uint64)
    return np.bitwise_or.reduceat(rows[members], starts, axis=0)


def class_union_counts(rows, members, starts):
    return popcount_rows(union_classes(rows, members, starts))


def probe_distances_d2(adj, cands, probe):
    out = 2 - adj[np.ix_(cands, probe)].astype(np.int32)
    out[cands[:, None] == probe[None, :]] = 0
    return out


def bfs(bits, n, src, unreachable):
    dist = np.full(n, unreachable, dtype=np.int32)
    dist[src] = 0
    seen = np.zeros(bits.shape[1], dtype=np.uint64)
    seen[src >> 6] |= np.uint64(1) << np.uint64(src & 63)
    frontier = np.array([src])
    level = 0
    while frontier.size:
        level += 1
        fresh = np.bitwise_or.reduce(bits[frontier], axis=0) & ~seen
        seen |= fresh
        frontier = np.flatnonzero(np.unpackbits(fresh.view(np.uint8), bitorder="little")[:n])
        dist[frontier] = level
    return dist


def codegree_matrix(adj):
    a = adj.astype(np.float32)
    return np.rint(a @ a.T).astype(np.int64)


def separation_gains(codes, labels, nclasses, nvals):
    # codes: (m, n) compact distance codes of each candidate to every vertex
    m, n = codes.shape
    onehot = np.zeros((m, nclasses), dtype=np.float64)
    onehot[np.arange(m), labels] = 1.0
    sizes = onehot.sum(axis=0)
    total = float((sizes * (sizes - 1) / 2).sum())
    same = np.zeros(n, dtype=np.float64)
    for d in range(nvals):
        cnt = onehot.T @ (codes == d).astype(np.float64)
        same += (cnt * (cnt - 1) / 2).sum(axis=0)
    return np.rint(total - same).astype(np.int64)
