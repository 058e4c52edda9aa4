"""Simulator, exact solver and numeric checks for the localization game."""
from ._backend import BACKEND
from .errors import (
    ConfigError, GraphFormatError, LocGameError, NoMoveError, ParameterError, ProtocolError,
    ResourceError,
)
from .exact import (
    OptimalAdversary, WinTable, cop_wins, lemma6_certificate, localization_number,
    metric_dimension, resolving_set, win_table, zeta_leq_beta_check,
)
from .game import (
    GameConfig, GameOutcome, KnowledgeState, Mode, Partition, RobberRule, RoundRecord, Winner,
    expand_candidates, filter_candidates, partition_by_signature, play_game,
)
from .graph import (
    UNREACHABLE, ConcentrationReport, GnpParams, Graph, bfs_distances, check_concentration,
    codegree, complete_graph, cycle_graph, diameter_at_most, empty_graph, path_graph,
    read_edgelist, sample_gnp, signature, star_graph, write_edgelist,
)
from .harness import EstimateRow, ExperimentConfig, estimate_zeta, run_trials, verify_suite
from .strategies import (
    GreedyAdversary, GreedySplitCop, RandomSetCop, RandomWalker, StrategySpec, make_strategy,
)

__version__ = "0.1.0"
