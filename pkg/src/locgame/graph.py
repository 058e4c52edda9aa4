"""Graphs, G(n, p) sampling, distances and signatures.

A :class:`Graph` keeps two views of the same adjacency: a dense read-only
boolean matrix (for fancy indexing) and bit-packed rows of ``ceil(n/64)``
little-endian ``uint64`` words (for unions and popcounts). Vertex ``v`` of a
bit row lives in word ``v // 64`` at bit ``v % 64``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from . import kernels
from .errors import GraphFormatError, ParameterError
from .rng import make_rng

#: Distance reported between vertices in different components. It exceeds
#: every real distance, so signatures on disconnected graphs still compare.
UNREACHABLE = np.iinfo(np.int32).max

Signature = tuple  # ordered tuple of ints, one entry per probe vertex


def pack_rows(mask: np.ndarray) -> np.ndarray:
    """Pack a boolean ``(r, n)`` matrix into ``(r, ceil(n/64))`` uint64 words."""
    mask = np.atleast_2d(np.asarray(mask, dtype=bool))
    packed = np.packbits(mask, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view("<u8").reshape(mask.shape[0], -1).astype(np.uint64)


def to_bits(n: int, ids) -> np.ndarray:
    """Bitset (1-D uint64 words) holding the vertex ids."""
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64)] = True
    return pack_rows(mask)[0]


def from_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Sorted vertex ids stored in a bitset."""
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    mask = np.unpackbits(raw, bitorder="little")[:n].astype(bool)
    return np.flatnonzero(mask)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    def __init__(self, adj):
        a = np.array(adj, dtype=bool, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ParameterError("adjacency must be a non-empty square matrix")
        if a.diagonal().any():
            raise ParameterError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise ParameterError("adjacency must be symmetric")
        a.flags.writeable = False
        self.adj = a
        self.n = a.shape[0]
        bits = pack_rows(a)
        bits.flags.writeable = False
        self.bits = bits
        self._dist_rows: dict[int, np.ndarray] = {}

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            a[u, v] = a[v, u] = True
        return cls(a)

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"

    @cached_property
    def closed_bits(self) -> np.ndarray:
        """Bit rows of closed neighbourhoods N[v] = N(v) + v."""
        rows = pack_rows(self.adj | np.eye(self.n, dtype=bool))
        rows.flags.writeable = False
        return rows

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    @cached_property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def edges(self) -> np.ndarray:
        u, v = np.nonzero(np.triu(self.adj, 1))
        return np.stack([u, v], axis=1)

    @cached_property
    def diameter2(self) -> bool:
        """True when every pair of distinct vertices is at distance at most 2."""
        return diameter_at_most(self, 2)

    def distance_row(self, v: int) -> np.ndarray:
        row = self._dist_rows.get(v)
        if row is None:
            row = kernels.bfs(self.bits, self.n, int(v), UNREACHABLE)
            row.flags.writeable = False
            self._dist_rows[v] = row
        return row


def complete_graph(n: int) -> Graph:
    return Graph(~np.eye(n, dtype=bool))


def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with centre 0 and leaves ``1..leaves``."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n!r}")
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"p must lie in (0, 1), got {self.p!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError("seed must be an unsigned 64-bit integer")


@lru_cache(maxsize=8)
def _upper_pairs(n: int):
    iu, ju = np.triu_indices(n, 1)
    iu.flags.writeable = False
    ju.flags.writeable = False
    return iu, ju


def sample_gnp(params: GnpParams) -> Graph:
    """Sample G(n, p).

    One uniform draw per unordered pair, consumed in row-major ``u < v``
    order from ``PCG64(seed)``; a pair is an edge iff its draw is below ``p``.
    """
    n = params.n
    rng = np.random.Generator(np.random.PCG64(int(params.seed)))
    draws = rng.random(n * (n - 1) // 2)
    iu, ju = _upper_pairs(n)
    a = np.zeros((n, n), dtype=bool)
    hit = draws < params.p
    a[iu[hit], ju[hit]] = True
    a |= a.T
    return Graph(a)


def bfs_distances(g: Graph, v: int) -> np.ndarray:
    if not 0 <= v < g.n:
        raise ParameterError(f"vertex {v} out of range for n={g.n}")
    return g.distance_row(int(v)).copy()


def diameter_at_most(g: Graph, d: int) -> bool:
    if d < 1:
        raise ParameterError("d must be >= 1")
    n = g.n
    if n == 1:
        return True
    off = ~np.eye(n, dtype=bool)
    if d == 1:
        return bool(g.adj[off].all())
    if d == 2:
        a = g.adj.astype(np.float32)
        reach = g.adj | ((a @ a) > 0.5)
        return bool(reach[off].all())
    return all(int(g.distance_row(v).max()) <= d for v in range(n))


def _as_ids(ids, n: int) -> np.ndarray:
    arr = np.asarray(ids, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ParameterError(f"vertex id out of range for n={n}")
    return arr


def signature_matrix(g: Graph, cands, probe, method: str = "auto") -> np.ndarray:
    """Distances from every candidate (rows) to every probe vertex (columns).

    ``method="auto"`` uses the adjacency bit test on diameter-2 graphs and BFS
    rows otherwise; ``"fast"`` and ``"bfs"`` force one path.
    """
    cands = _as_ids(cands, g.n)
    probe = _as_ids(probe, g.n)
    if method == "auto":
        method = "fast" if g.diameter2 else "bfs"
    if method == "fast":
        return kernels.probe_distances_d2(g.adj, cands, probe)
    if method != "bfs":
        raise ParameterError(f"unknown signature method {method!r}")
    if probe.size == 0:
        return np.zeros((cands.size, 0), dtype=np.int32)
    rows = np.stack([g.distance_row(int(w)) for w in probe])
    return np.ascontiguousarray(rows[:, cands].T)


def signature(g: Graph, v: int, w_set, method: str = "auto") -> Signature:
    """Ordered distances from ``v`` to each probe vertex."""
    if not 0 <= v < g.n:
        raise ParameterError(f"vertex {v} out of range for n={g.n}")
    return tuple(int(x) for x in signature_matrix(g, [v], w_set, method)[0])


def codegree(g: Graph, v: int, w: int) -> int:
    if v == w:
        raise ParameterError("codegree needs two distinct vertices")
    both = (g.bits[v] & g.bits[w])[None, :]
    return int(np.bitwise_count(both).sum())


@dataclass(frozen=True)
class ConcentrationReport:
    all_degrees_pass: bool
    all_codegrees_pass: bool
    worst_degree_deviation: float
    worst_codegree_deviation: float
    constant_used: float

    @property
    def passed(self) -> bool:
        return self.all_degrees_pass and self.all_codegrees_pass


def check_concentration(g: Graph, p: float, constant: float = 3.0) -> ConcentrationReport:
    """Compare degrees with ``np`` and codegrees with ``np^2``.

    Deviations are measured in units of ``sqrt(np ln n)`` and
    ``sqrt(np^2 ln n)`` respectively.
    """
    n = g.n
    if not 0.0 < p <= 1.0:
        raise ParameterError("p must lie in (0, 1]")
    log_n = math.log(n)
    deg_scale = math.sqrt(n * p * log_n)
    worst_deg = float(np.abs(g.degrees - n * p).max()) / deg_scale
    if n >= 2:
        co = kernels.codegree_matrix(g.adj)
        iu = np.triu_indices(n, 1)
        co_scale = math.sqrt(n * p * p * log_n)
        worst_co = float(np.abs(co[iu] - n * p * p).max()) / co_scale
    else:
        worst_co = 0.0
    return ConcentrationReport(
        all_degrees_pass=worst_deg <= constant,
        all_codegrees_pass=worst_co <= constant,
        worst_degree_deviation=worst_deg,
        worst_codegree_deviation=worst_co,
        constant_used=float(constant),
    )


def sample_collision_frequency(p: float, k: int, samples: int, seed: int,
                               chunk: int = 1 << 16) -> float:
    """Fraction of fresh vertex pairs ``u, v`` outside a k-probe set that agree on it.

    On a diameter-2 graph the signature of a non-probe vertex is determined
    by its adjacency to each probe, so each sample draws only the ``2k``
    independent edge indicators between ``{u, v}`` and the probe set.
    """
    if not 0.0 < p < 1.0:
        raise ParameterError("p must lie in (0, 1)")
    rng = make_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(chunk, left)
        eu = rng.random((m, k)) < p
        ev = rng.random((m, k)) < p
        hits += int((eu == ev).all(axis=1).sum())
        left -= m
    return hits / samples


def write_edgelist(g: Graph, path) -> None:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_edgelist(path) -> Graph:
    text = Path(path).read_text(encoding="ascii")
    return parse_edgelist(text)


def parse_edgelist(text: str) -> Graph:
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad header line {lines[0]!r}") from None
    if n < 1 or m < 0:
        raise GraphFormatError("header needs n >= 1 and m >= 0")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}")
    seen = set()
    for ln in body:
        try:
            u, v = (int(x) for x in ln.split())
        except ValueError:
            raise GraphFormatError(f"bad edge line {ln!r}") from None
        if u == v:
            raise GraphFormatError(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
        if u > v:
            raise GraphFormatError(f"edge ({u}, {v}) must be written with u < v")
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
    return Graph.from_edges(n, seen)
