"""Round structure of the localization game.

Each round the cop names a probe set, the candidate set (every vertex still
consistent with past answers) is split into signature classes, and the
observed class survives. A singleton class means the cop has located the
robber; otherwise the surviving class is grown by one robber step.

In ``EMBODIED`` mode a robber strategy holds a real position and the answer is
its signature. In ``PHANTOM`` mode there is no position: an adversary picks
which class to inhabit after seeing the probe, which models the worst case.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional, Protocol

import numpy as np

from . import kernels
from .errors import NoMoveError, ParameterError, ProtocolError
from .graph import Graph, Signature, from_bits, signature_matrix, to_bits


class RobberRule(enum.Enum):
    MAY_STAY = "stay"
    MUST_MOVE = "move"


class Mode(enum.Enum):
    EMBODIED = "embodied"
    PHANTOM = "phantom"


class Winner(enum.Enum):
    COP = "cop"
    ROBBER = "robber"


@dataclass(frozen=True)
class GameConfig:
    k: int
    max_rounds: int = 30
    rule: RobberRule = RobberRule.MAY_STAY
    mode: Mode = Mode.PHANTOM

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.max_rounds < 1:
            raise ParameterError("max_rounds must be >= 1")


@dataclass(frozen=True)
class KnowledgeState:
    """The cop's information: a bitset of candidate vertices and the round."""

    n: int
    candidates: np.ndarray
    round: int = 0

    @classmethod
    def initial(cls, n: int) -> "KnowledgeState":
        return cls(n, to_bits(n, np.arange(n)), 0)

    @classmethod
    def from_members(cls, n: int, members, round: int = 0) -> "KnowledgeState":
        return cls(n, to_bits(n, members), round)

    def members(self) -> np.ndarray:
        return from_bits(self.candidates, self.n)

    @property
    def size(self) -> int:
        return int(np.bitwise_count(self.candidates).sum())


@dataclass(frozen=True)
class RoundRecord:
    round: int
    probe: tuple
    observed: Signature
    filtered_size: int
    expanded_size: Optional[int]
    robber_position: Optional[int] = None

    def to_dict(self) -> dict:
        d = {
            "round": self.round,
            "probe": list(self.probe),
            "observed": list(self.observed),
            "filtered_size": self.filtered_size,
            "expanded_size": self.expanded_size,
        }
        if self.robber_position is not None:
            d["robber_position"] = self.robber_position
        return d


@dataclass
class GameOutcome:
    winner: Winner
    rounds_used: int
    located_vertex: Optional[int]
    trace: list = field(default_factory=list)

    def trace_json_lines(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=False) + "\n" for r in self.trace)


class Partition:
    """Signature classes of a candidate set under one probe.

    Classes are ordered by their smallest member. ``members`` holds all
    candidates grouped by class; class ``i`` is
    ``members[starts[i]:starts[i + 1]]``.
    """

    def __init__(self, probe, members, starts, signatures):
        self.probe = probe
        self.members = members
        self.starts = starts
        self.signatures = signatures

    def __len__(self):
        return len(self.starts)

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(np.append(self.starts, len(self.members)))

    def class_members(self, i: int) -> np.ndarray:
        hi = self.starts[i + 1] if i + 1 < len(self.starts) else len(self.members)
        return self.members[self.starts[i]:hi]

    def class_signature(self, i: int) -> Signature:
        return tuple(int(x) for x in self.signatures[i])

    def __getitem__(self, i: int):
        if not -len(self) <= i < len(self):
            raise IndexError(i)
        i %= len(self)
        return self.class_signature(i), self.class_members(i)

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def group_rows(rows: np.ndarray):
    """Label equal rows 0, 1, ... in order of first appearance.

    Returns ``(labels, first_index)`` where ``first_index[c]`` is the first
    row with label ``c``.
    """
    m, k = rows.shape
    if m == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if k == 0:
        return np.zeros(m, dtype=np.int64), np.zeros(1, dtype=np.int64)
    rows = np.ascontiguousarray(rows)
    keys = rows.view(np.dtype((np.void, rows.dtype.itemsize * k))).ravel()
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[inv.ravel()], first[order]


def _check_probe(g: Graph, probe, k: Optional[int] = None) -> np.ndarray:
    arr = np.asarray(probe, dtype=np.int64).reshape(-1)
    if k is not None and arr.size > k:
        raise ProtocolError(f"probe of size {arr.size} exceeds budget k={k}")
    if arr.size and (arr.min() < 0 or arr.max() >= g.n):
        raise ProtocolError("probe contains an invalid vertex id")
    return arr


def partition_by_signature(g: Graph, candidates, probe) -> Partition:
    cands = np.unique(np.asarray(candidates, dtype=np.int64))
    if cands.size == 0:
        raise ParameterError("candidate set must be non-empty")
    probe = _check_probe(g, probe)
    dist = signature_matrix(g, cands, probe)
    labels, first = group_rows(dist)
    order = np.argsort(labels, kind="stable")
    starts = np.searchsorted(labels[order], np.arange(len(first)))
    return Partition(probe, cands[order], starts, dist[first])


def filter_candidates(g: Graph, candidates, probe, observed) -> np.ndarray:
    """Candidates whose signature under ``probe`` equals ``observed``."""
    cands = np.unique(np.asarray(candidates, dtype=np.int64))
    probe = _check_probe(g, probe)
    obs = np.asarray(observed, dtype=np.int64)
    if obs.shape != (probe.size,):
        raise ProtocolError("observed signature length differs from the probe size")
    dist = signature_matrix(g, cands, probe)
    keep = cands[(dist == obs[None, :]).all(axis=1)]
    if keep.size == 0:
        raise ProtocolError("no candidate is consistent with the observed signature")
    return keep


def expand_bits(g: Graph, r, rule: RobberRule) -> np.ndarray:
    rows = g.closed_bits if rule is RobberRule.MAY_STAY else g.bits
    r = np.asarray(r, dtype=np.int64)
    return kernels.union_classes(rows, r, np.zeros(1, dtype=np.int64))[0]


def expand_candidates(g: Graph, r, rule: RobberRule = RobberRule.MAY_STAY) -> np.ndarray:
    """Vertices the robber can occupy next, starting anywhere in ``r``.

    Under ``MUST_MOVE`` an all-isolated ``r`` yields an empty array: the
    robber has no legal move.
    """
    r = np.asarray(r, dtype=np.int64).reshape(-1)
    if r.size == 0:
        raise ParameterError("expand_candidates needs a non-empty set")
    return from_bits(expand_bits(g, r, rule), g.n)


class CopStrategy(Protocol):
    def probe(self, g: Graph, state: KnowledgeState, k: int): ...


class PhantomRobber(Protocol):
    def choose(self, g: Graph, partition: Partition, rule: RobberRule) -> int: ...


class EmbodiedRobber(Protocol):
    def start(self, g: Graph) -> int: ...

    def move(self, g: Graph, position: int, rule: RobberRule, round: int) -> int: ...


def play_game(g: Graph, cop, robber, cfg: GameConfig) -> GameOutcome:
    if cfg.mode is Mode.PHANTOM:
        if not hasattr(robber, "choose"):
            raise ProtocolError(f"{type(robber).__name__} cannot play in phantom mode")
        return _play_phantom(g, cop, robber, cfg)
    if not (hasattr(robber, "start") and hasattr(robber, "move")):
        raise ProtocolError(f"{type(robber).__name__} cannot play in embodied mode")
    return _play_embodied(g, cop, robber, cfg)


def _play_phantom(g, cop, robber, cfg):
    state = KnowledgeState.initial(g.n)
    trace = []
    for rnd in range(1, cfg.max_rounds + 1):
        state = KnowledgeState(g.n, state.candidates, rnd)
        probe = _check_probe(g, cop.probe(g, state, cfg.k), cfg.k)
        part = partition_by_signature(g, state.members(), probe)
        idx = int(robber.choose(g, part, cfg.rule))
        sig, r = part[idx]
        if r.size == 1:
            trace.append(RoundRecord(rnd, tuple(probe.tolist()), sig, 1, None))
            return GameOutcome(Winner.COP, rnd, int(r[0]), trace)
        nxt = expand_bits(g, r, cfg.rule)
        size = int(np.bitwise_count(nxt).sum())
        trace.append(RoundRecord(rnd, tuple(probe.tolist()), sig, int(r.size), size))
        if size == 0:
            return GameOutcome(Winner.COP, rnd, None, trace)
        state = KnowledgeState(g.n, nxt, rnd)
    return GameOutcome(Winner.ROBBER, cfg.max_rounds, None, trace)


def _play_embodied(g, cop, robber, cfg):
    pos = int(robber.start(g))
    state = KnowledgeState.initial(g.n)
    trace = []
    for rnd in range(1, cfg.max_rounds + 1):
        state = KnowledgeState(g.n, state.candidates, rnd)
        probe = _check_probe(g, cop.probe(g, state, cfg.k), cfg.k)
        observed = tuple(int(x) for x in signature_matrix(g, [pos], probe)[0])
        r = filter_candidates(g, state.members(), probe, observed)
        if r.size == 1:
            trace.append(RoundRecord(rnd, tuple(probe.tolist()), observed, 1, None, pos))
            return GameOutcome(Winner.COP, rnd, int(r[0]), trace)
        try:
            new_pos = int(robber.move(g, pos, cfg.rule, rnd))
        except NoMoveError:
            trace.append(RoundRecord(rnd, tuple(probe.tolist()), observed, int(r.size), 0, pos))
            return GameOutcome(Winner.COP, rnd, pos, trace)
        nxt = expand_bits(g, r, cfg.rule)
        members = from_bits(nxt, g.n)
        if new_pos not in set(members.tolist()):
            raise ProtocolError(f"robber moved illegally from {pos} to {new_pos}")
        trace.append(RoundRecord(rnd, tuple(probe.tolist()), observed, int(r.size),
                                 int(members.size), pos))
        pos = new_pos
        state = KnowledgeState(g.n, nxt, rnd)
    return GameOutcome(Winner.ROBBER, cfg.max_rounds, None, trace)
