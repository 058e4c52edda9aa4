"""Cop and robber policies.

Every strategy object is immutable and draws its randomness from a fresh
generator derived from ``(seed, round)``, so a move depends only on the
inputs it is handed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, NoMoveError, ParameterError
from .game import KnowledgeState, Mode, Partition, RobberRule, group_rows
from .graph import Graph, signature_matrix
from .rng import make_rng


def random_set_cop(state: KnowledgeState, g: Graph, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform k-subset of V; the candidate set is ignored on purpose."""
    if k > g.n:
        raise ParameterError(f"k={k} exceeds n={g.n}")
    return np.sort(rng.choice(g.n, size=k, replace=False))


def greedy_split_cop(state: KnowledgeState, g: Graph, k: int, rng=None) -> np.ndarray:
    """Build a probe one vertex at a time, each time splitting the most
    still-indistinguishable candidate pairs. Ties go to the smallest id."""
    if k > g.n:
        raise ParameterError(f"k={k} exceeds n={g.n}")
    cands = state.members()
    m = cands.size
    dist = signature_matrix(g, cands, np.arange(g.n))
    vals, codes = np.unique(dist, return_inverse=True)
    codes = codes.reshape(dist.shape).astype(np.int64)
    labels = np.zeros(m, dtype=np.int64)
    ncls = 1
    chosen: list[int] = []
    used = np.zeros(g.n, dtype=bool)
    for _ in range(k):
        if ncls == m:
            rest = np.flatnonzero(~used)[: k - len(chosen)]
            chosen.extend(int(w) for w in rest)
            break
        gains = kernels.separation_gains(codes, labels, ncls, len(vals))
        gains[used] = -1
        w = int(np.argmax(gains))
        chosen.append(w)
        used[w] = True
        labels, first = group_rows(np.column_stack([labels, codes[:, w]]))
        ncls = len(first)
    return np.asarray(chosen, dtype=np.int64)


def greedy_adversary(classes: Partition, g: Graph, rule: RobberRule = RobberRule.MAY_STAY) -> int:
    """Index of the class whose one-step expansion is largest.

    Singletons are only chosen when every class is a singleton. Ties go to
    the larger class, then to the class with the smaller minimum vertex.
    """
    rows = g.closed_bits if rule is RobberRule.MAY_STAY else g.bits
    grown = kernels.class_union_counts(rows, classes.members, classes.starts)
    sizes = classes.sizes
    eligible = sizes >= 2
    if not eligible.any():
        return 0
    # classes are ordered by smallest member, so the first maximum wins ties
    key = np.where(eligible, grown * (g.n + 1) + sizes, -1)
    return int(np.argmax(key))


def random_walker_robber(position: int, g: Graph, rule: RobberRule, rng: np.random.Generator) -> int:
    nbrs = g.neighbors(position)
    if rule is RobberRule.MAY_STAY:
        nbrs = np.append(nbrs, position)
    elif nbrs.size == 0:
        raise NoMoveError(f"vertex {position} is isolated")
    return int(nbrs[rng.integers(nbrs.size)])


@dataclass(frozen=True)
class RandomSetCop:
    seed: int = 0
    name = "random-set"

    def probe(self, g, state, k):
        return random_set_cop(state, g, k, make_rng(self.seed, state.round))


@dataclass(frozen=True)
class GreedySplitCop:
    seed: int = 0
    name = "greedy-split"

    def probe(self, g, state, k):
        return greedy_split_cop(state, g, k)


@dataclass(frozen=True)
class GreedyAdversary:
    seed: int = 0
    name = "greedy-adversary"
    modes = frozenset({Mode.PHANTOM})

    def choose(self, g, partition, rule):
        return greedy_adversary(partition, g, rule)


@dataclass(frozen=True)
class RandomWalker:
    seed: int = 0
    name = "random-walker"
    modes = frozenset({Mode.EMBODIED})

    def start(self, g):
        return int(make_rng(self.seed, 0).integers(g.n))

    def move(self, g, position, rule, round):
        return random_walker_robber(position, g, rule, make_rng(self.seed, round + 1))


COPS = {"random-set": RandomSetCop, "greedy-split": GreedySplitCop}
ROBBERS = {"greedy-adversary": GreedyAdversary, "random-walker": RandomWalker}


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    seed: int = 0
    k: int = 1

    def __post_init__(self):
        if self.kind not in COPS and self.kind not in ROBBERS:
            raise ConfigError(f"unknown strategy {self.kind!r}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")

    def build(self):
        return make_strategy(self.kind, self.seed)


def make_strategy(name: str, seed: int = 0):
    cls = COPS.get(name) or ROBBERS.get(name)
    if cls is None:
        raise ConfigError(
            f"unknown strategy {name!r}; expected one of {sorted(COPS) + sorted(ROBBERS)}")
    return cls(seed)
