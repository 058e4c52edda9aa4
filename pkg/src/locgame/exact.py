"""Exact game values on small graphs.

Candidate sets are bitmasks over ``n <= 10`` vertices. The set of winning
candidate sets is the least fixed point of

    C wins  <=>  some probe W of size k splits C into classes R that are
                 singletons or whose one-step expansion already wins,

started from the singletons, so a robber that survives forever wins.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import ParameterError, ResourceError
from .game import RobberRule, group_rows
from .graph import Graph, signature_matrix

ZETA_LIMIT = 10
BETA_LIMIT = 16


def _mask(ids) -> int:
    m = 0
    for v in ids:
        m |= 1 << int(v)
    return m


@dataclass(frozen=True)
class WinTable:
    """Winning candidate sets for one (graph, k, rule).

    ``rounds[mask]`` is the number of rounds the cop needs from ``mask``
    (0 for sets of size <= 1) or -1 if the robber escapes forever.
    """

    n: int
    k: int
    rule: RobberRule
    rounds: np.ndarray

    @property
    def winning(self) -> np.ndarray:
        return self.rounds >= 0

    def __contains__(self, mask: int) -> bool:
        return bool(self.rounds[int(mask)] >= 0)

    def winning_sets(self):
        return [int(m) for m in np.flatnonzero(self.rounds[1:] >= 0) + 1]

    def summary(self) -> dict:
        full = (1 << self.n) - 1
        states = np.arange(1, 1 << self.n)
        return {
            "k": self.k,
            "rule": self.rule.value,
            "states": int(states.size),
            "winning_states": int((self.rounds[1:] >= 0).sum()),
            "full_set_wins": bool(self.rounds[full] >= 0),
            "rounds_from_full_set": int(self.rounds[full]),
        }


def _check_size(g: Graph, limit: int):
    if g.n > limit:
        raise ResourceError(f"exact solver limited to n <= {limit}, got n={g.n}")


def _expansion_table(g: Graph, rule: RobberRule) -> np.ndarray:
    n = g.n
    masks = np.arange(1 << n, dtype=np.int64)
    rows = g.adj | np.eye(n, dtype=bool) if rule is RobberRule.MAY_STAY else g.adj
    nb = [_mask(np.flatnonzero(rows[v])) for v in range(n)]
    out = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        out[(masks >> v) & 1 == 1] |= nb[v]
    return out


def _class_masks(g: Graph, k: int) -> np.ndarray:
    """(number of probes, n) array of the signature classes of V per probe,
    padded with empty masks."""
    n = g.n
    everyone = np.arange(n)
    probes = list(combinations(range(n), k))
    out = np.zeros((len(probes), n), dtype=np.int64)
    for i, w in enumerate(probes):
        labels, _ = group_rows(signature_matrix(g, everyone, np.array(w, dtype=np.int64)))
        for v in range(n):
            out[i, labels[v]] |= 1 << v
    return out


@lru_cache(maxsize=256)
def win_table(g: Graph, k: int, rule: RobberRule = RobberRule.MAY_STAY,
              limit: int = ZETA_LIMIT) -> WinTable:
    _check_size(g, limit)
    n = g.n
    if not 1 <= k <= n:
        raise ParameterError(f"k must lie in [1, n={n}], got {k}")
    masks = np.arange(1 << n, dtype=np.int64)
    small = np.bitwise_count(masks) <= 1
    grow = _expansion_table(g, rule)
    classes = _class_masks(g, k)
    parts = masks[None, None, :] & classes[:, :, None]
    part_small = small[parts]
    part_next = grow[parts]
    rounds = np.where(small, 0, -1).astype(np.int64)
    it = 0
    while True:
        it += 1
        win = rounds >= 0
        good = (part_small | win[part_next]).all(axis=1).any(axis=0)
        fresh = good & ~win
        if not fresh.any():
            break
        rounds[fresh] = it
    return WinTable(n, k, rule, rounds)


def cop_wins(g: Graph, k: int, c0, rule: RobberRule = RobberRule.MAY_STAY,
             limit: int = ZETA_LIMIT) -> bool:
    """Whether the cop can force a win from candidate set ``c0`` with budget ``k``."""
    _check_size(g, limit)
    c = _mask(c0) if not isinstance(c0, (int, np.integer)) else int(c0)
    if bin(c).count("1") <= 1:
        return True
    return c in win_table(g, min(k, g.n), rule, limit)


def localization_number(g: Graph, rule: RobberRule = RobberRule.MAY_STAY,
                        limit: int = ZETA_LIMIT) -> int:
    _check_size(g, limit)
    full = (1 << g.n) - 1
    for k in range(1, g.n + 1):
        if cop_wins(g, k, full, rule, limit):
            return k
    raise AssertionError("probing every vertex always wins")  # pragma: no cover


def resolving_set(g: Graph, limit: int = BETA_LIMIT) -> tuple:
    """A smallest probe set under which all signatures differ."""
    _check_size(g, limit)
    n = g.n
    if n == 1:
        return ()
    dist = signature_matrix(g, np.arange(n), np.arange(n), method="bfs")
    iu, ju = np.triu_indices(n, 1)
    weights = (1 << np.arange(n, dtype=np.int64))
    sep = ((dist[iu] != dist[ju]) * weights).sum(axis=1)
    # disjoint separator sets each need their own probe vertex
    lower, taken = 0, 0
    for s in sorted(sep.tolist(), key=lambda x: bin(x).count("1")):
        if s & taken == 0:
            taken |= s
            lower += 1
    for size in range(max(1, lower), n + 1):
        cand = np.array([_mask(w) for w in combinations(range(n), size)], dtype=np.int64)
        ok = ((cand[:, None] & sep[None, :]) != 0).all(axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            m = int(cand[hit[0]])
            return tuple(v for v in range(n) if m >> v & 1)
    raise AssertionError("V itself resolves every graph")  # pragma: no cover


def metric_dimension(g: Graph, limit: int = BETA_LIMIT) -> int:
    return len(resolving_set(g, limit))


def zeta_leq_beta_check(g: Graph) -> bool:
    return localization_number(g, RobberRule.MAY_STAY) <= metric_dimension(g)


def lemma6_certificate(g: Graph, u: int, s) -> int:
    """Unordered pairs of neighbours of ``u`` that share a signature under ``s``."""
    nbrs = g.neighbors(u)
    if nbrs.size < 2:
        return 0
    labels, _ = group_rows(signature_matrix(g, nbrs, np.asarray(s, dtype=np.int64)))
    counts = np.bincount(labels)
    return int((counts * (counts - 1) // 2).sum())


class OptimalAdversary:
    """Phantom robber that stays inside losing candidate sets of a WinTable.

    When the current set is already winning for the cop it delays, picking
    the class whose expansion needs the most rounds.
    """

    name = "optimal-adversary"

    def __init__(self, table: WinTable):
        self.table = table

    def choose(self, g, partition, rule):
        best, best_key = 0, None
        for i in range(len(partition)):
            r = partition.class_members(i)
            if r.size < 2:
                key = (-2, 0)
            else:
                nxt = 0
                rows = g.adj | np.eye(g.n, dtype=bool) if rule is RobberRule.MAY_STAY else g.adj
                nxt = _mask(np.flatnonzero(rows[r].any(axis=0)))
                rank = int(self.table.rounds[nxt])
                key = (1, 0) if rank < 0 else (0, rank)
            if best_key is None or key > best_key:
                best, best_key = i, key
        return best
