import math

import numpy as np
import pytest

from locgame import theory
from locgame.errors import ConfigError, NoMoveError, ParameterError
from locgame.game import (
    GameConfig, KnowledgeState, Mode, RobberRule, Winner, expand_candidates,
    partition_by_signature, play_game,
)
from locgame.graph import (
    GnpParams, Graph, bfs_distances, complete_graph, cycle_graph, empty_graph, sample_gnp, star_graph,
)
from locgame.rng import make_rng
from locgame.strategies import (
    GreedyAdversary, GreedySplitCop, RandomSetCop, RandomWalker, StrategySpec, greedy_adversary,
    greedy_split_cop, make_strategy, random_set_cop, random_walker_robber,
)


def state(n, members=None, rnd=1):
    return KnowledgeState.from_members(n, range(n) if members is None else members, rnd)


class TestRandomSetCop:
    def test_k_equals_n_wins_immediately(self):
        g = sample_gnp(GnpParams(20, 0.3, 1))
        probe = random_set_cop(state(20), g, 20, make_rng(0))
        assert sorted(probe.tolist()) == list(range(20))
        assert all(m.size == 1 for _, m in partition_by_signature(g, range(20), probe))

    def test_deterministic_per_round(self):
        g = complete_graph(30)
        cop = RandomSetCop(5)
        assert np.array_equal(cop.probe(g, state(30, rnd=3), 7), cop.probe(g, state(30, rnd=3), 7))
        assert not np.array_equal(cop.probe(g, state(30, rnd=3), 7), cop.probe(g, state(30, rnd=4), 7))

    def test_distinct_vertices(self):
        g = complete_graph(50)
        p = RandomSetCop(2).probe(g, state(50), 20)
        assert len(set(p.tolist())) == 20

    def test_k_too_large(self):
        with pytest.raises(ParameterError):
            random_set_cop(state(4), complete_graph(4), 5, make_rng(0))

    def test_uniform_frequency(self):
        n, k, rounds = 512, 18, 1000
        g = empty_graph(n)
        cop = RandomSetCop(77)
        counts = np.zeros(n)
        for r in range(rounds):
            counts[cop.probe(g, state(n, [0], r), k)] += 1
        freq = counts / rounds
        sigma = math.sqrt((k / n) * (1 - k / n) / rounds)
        assert np.abs(freq - k / n).max() <= 4 * sigma

    def test_ignores_knowledge(self):
        g = sample_gnp(GnpParams(64, 0.5, 3))
        cop = RandomSetCop(9)
        a = cop.probe(g, state(64, [1, 2, 3], 5), 6)
        b = cop.probe(g, state(64, range(40), 5), 6)
        assert np.array_equal(a, b)

    def test_oblivious_across_robbers(self):
        g = sample_gnp(GnpParams(80, 0.5, 4))
        cfg_p = GameConfig(5, 6, mode=Mode.PHANTOM)
        cfg_e = GameConfig(5, 6, mode=Mode.EMBODIED)
        runs = [
            play_game(g, RandomSetCop(11), GreedyAdversary(), cfg_p),
            play_game(g, RandomSetCop(11), RandomWalker(1), cfg_e),
            play_game(g, RandomSetCop(11), RandomWalker(2), cfg_e),
        ]
        common = min(len(r.trace) for r in runs)
        for i in range(common):
            assert len({runs[j].trace[i].probe for j in range(3)}) == 1


class TestGreedySplit:
    def test_pair_separated(self):
        g = star_graph(3)
        probe = greedy_split_cop(state(4, [1, 2]), g, 1)
        part = partition_by_signature(g, [1, 2], probe)
        assert all(m.size == 1 for _, m in part)

    def test_triangle_tie_break(self):
        g = complete_graph(3)
        probe = greedy_split_cop(state(3), g, 1)
        assert probe.tolist() == [0]
        classes = sorted(m.tolist() for _, m in partition_by_signature(g, range(3), probe))
        assert classes == [[0], [1, 2]]

    def test_singleton_any_probe(self):
        g = complete_graph(5)
        probe = greedy_split_cop(state(5, [3]), g, 2)
        assert len(probe) == 2

    def test_fills_budget_without_repeats(self):
        g = sample_gnp(GnpParams(40, 0.5, 2))
        probe = greedy_split_cop(state(40), g, 12)
        assert len(set(probe.tolist())) == 12

    def test_greedy_first_choice_brute_force(self):
        g = sample_gnp(GnpParams(25, 0.2, 6))
        cands = list(range(25))
        best, best_w = -1, None
        for w in range(25):
            d = bfs_distances(g, w)
            sep = sum(1 for i in cands for j in cands if i < j and d[i] != d[j])
            if sep > best:
                best, best_w = sep, w
        assert greedy_split_cop(state(25), g, 1).tolist() == [best_w]

    def test_beats_random_on_average(self):
        g = sample_gnp(GnpParams(128, 0.5, 3))
        sizes_g, sizes_r = [], []
        for r in range(10):
            st = state(128, rnd=r)
            for cop, acc in ((GreedySplitCop(), sizes_g), (RandomSetCop(r), sizes_r)):
                part = partition_by_signature(g, range(128), cop.probe(g, st, 8))
                acc.append(int((part.sizes * (part.sizes - 1) // 2).sum()))
        assert np.mean(sizes_g) <= np.mean(sizes_r)


class TestGreedyAdversary:
    def test_triangle(self):
        g = complete_graph(3)
        part = partition_by_signature(g, range(3), [0])
        assert part.class_members(greedy_adversary(part, g)).tolist() == [1, 2]

    def test_all_singletons(self):
        g = complete_graph(3)
        part = partition_by_signature(g, range(3), [0, 1])
        assert part.class_members(greedy_adversary(part, g)).size == 1

    def test_star_leaf_class(self):
        g = star_graph(2)
        part = partition_by_signature(g, range(3), [0])
        chosen = part.class_members(greedy_adversary(part, g, RobberRule.MAY_STAY))
        assert chosen.tolist() == [1, 2]

    def test_maximizes_expansion(self):
        for seed in range(20):
            g = sample_gnp(GnpParams(60, 0.15, seed))
            part = partition_by_signature(g, range(60), RandomSetCop(seed).probe(g, state(60), 3))
            for rule in RobberRule:
                idx = greedy_adversary(part, g, rule)
                sizes = [expand_candidates(g, m, rule).size if m.size > 1 else -1
                         for _, m in part]
                if max(part.sizes) > 1:
                    assert part.class_members(idx).size > 1
                    assert sizes[idx] == max(sizes)


class TestRandomWalker:
    def test_k2_must_move(self):
        g = complete_graph(2)
        assert random_walker_robber(0, g, RobberRule.MUST_MOVE, make_rng(0)) == 1

    def test_isolated_may_stay(self):
        assert random_walker_robber(0, empty_graph(3), RobberRule.MAY_STAY, make_rng(0)) == 0

    def test_isolated_must_move(self):
        with pytest.raises(NoMoveError):
            random_walker_robber(0, empty_graph(3), RobberRule.MUST_MOVE, make_rng(0))

    def test_cycle_frequencies(self):
        g = cycle_graph(4)
        walker = RandomWalker(3)
        steps = 10_000
        hits = sum(walker.move(g, 0, RobberRule.MUST_MOVE, r) == 1 for r in range(steps))
        sigma = math.sqrt(0.25 / steps)
        assert abs(hits / steps - 0.5) <= 4 * sigma

    def test_may_stay_includes_self(self):
        g = cycle_graph(4)
        seen = {RandomWalker(1).move(g, 0, RobberRule.MAY_STAY, r) for r in range(200)}
        assert seen == {0, 1, 3}


class TestRegistry:
    @pytest.mark.parametrize("name", ["random-set", "greedy-split", "greedy-adversary",
                                      "random-walker"])
    def test_names(self, name):
        assert make_strategy(name, 1).name == name

    def test_unknown(self):
        with pytest.raises(ConfigError):
            make_strategy("clever")
        with pytest.raises(ConfigError):
            StrategySpec("clever")

    def test_spec_build(self):
        assert StrategySpec("random-set", 4, 3).build() == RandomSetCop(4)


def test_median_candidate_sizes_contract():
    # sparse diameter-2 regime with k from the upper-bound formula
    n, p = 600, 0.2
    tp = theory.derive_params(n, p, c=0.5)
    k = math.ceil(theory.zeta_window(tp).upper)
    by_round = {}
    for seed in range(40):
        g = sample_gnp(GnpParams(n, p, seed))
        assert g.diameter2
        out = play_game(g, RandomSetCop(seed), GreedyAdversary(), GameConfig(k, 20))
        assert out.winner is Winner.COP
        for rec in out.trace:
            by_round.setdefault(rec.round, []).append(rec.filtered_size)
    medians = [np.median(by_round[r]) for r in sorted(by_round)]
    assert all(a >= b for a, b in zip(medians, medians[1:]))
