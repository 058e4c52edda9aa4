"""Monte Carlo experiments and the verification suite.

Trial ``i`` of an experiment uses ``seed_i = mix64(master_seed, i)``; its
graph, cop and robber streams are ``mix64(seed_i, 0..2)``. Streams do not
depend on ``k``, so every ``k`` sees the same graphs (common random
numbers), and results are identical however trials are scheduled.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional

import numpy as np

from . import exact, theory
from .errors import ConfigError, ParameterError
from .game import GameConfig, Mode, RobberRule, Winner, play_game
from .graph import (
    GnpParams, Graph, check_concentration, complete_graph, cycle_graph, diameter_at_most,
    empty_graph, path_graph, read_edgelist, sample_collision_frequency, sample_gnp, star_graph,
)
from .rng import derive, make_rng, mix64
from .strategies import COPS, ROBBERS, make_strategy

FIXTURES = {
    "complete": complete_graph,
    "path": path_graph,
    "cycle": cycle_graph,
    "star": star_graph,
    "empty": empty_graph,
}

# stream indices below seed_i
GRAPH_STREAM, COP_STREAM, ROBBER_STREAM = 0, 1, 2
FIXED_GRAPH_INDEX = 2**63  # trial index reserved for the shared graph


def fixture_graph(spec: str) -> Graph:
    """``name:size`` fixture (``complete:5``, ``path:8``, ``star:3``) or an
    edge-list path."""
    if ":" in spec:
        name, _, size = spec.partition(":")
        if name in FIXTURES:
            try:
                return FIXTURES[name](int(size))
            except ValueError:
                raise ConfigError(f"bad fixture size in {spec!r}") from None
    try:
        return read_edgelist(spec)
    except OSError as exc:
        raise ConfigError(f"cannot read graph {spec!r}: {exc}") from None


def _parse_rule(x) -> RobberRule:
    if isinstance(x, RobberRule):
        return x
    try:
        return RobberRule(str(x))
    except ValueError:
        raise ConfigError(f"rule must be 'stay' or 'move', got {x!r}") from None


def _parse_mode(x) -> Mode:
    if isinstance(x, Mode):
        return x
    try:
        return Mode(str(x))
    except ValueError:
        raise ConfigError(f"mode must be 'embodied' or 'phantom', got {x!r}") from None


def _parse_bool(x) -> bool:
    if isinstance(x, bool):
        return x
    s = str(x).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {x!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 256
    p: float = 0.5
    seed: int = 0
    trials: int = 200
    k_min: int = 1
    k_max: Optional[int] = None
    win_threshold: float = 0.95
    rounds: int = 30
    rule: RobberRule = RobberRule.MAY_STAY
    mode: Mode = Mode.PHANTOM
    cop: str = "random-set"
    robber: str = "greedy-adversary"
    fresh_graph_per_trial: bool = True
    graph: Optional[str] = None
    workers: int = 1
    # verification suite
    cert_k: Optional[int] = None
    cert_graphs: int = 10
    cert_pairs: int = 100
    conc_samples: int = 100
    conc_constant: float = 3.0
    diameter_p: Optional[float] = None
    diameter_samples: int = 100
    collision_k: int = 10
    collision_samples: int = 10**6
    beta_n: int = 7
    beta_p: float = 0.5
    beta_graphs: int = 50

    def __post_init__(self):
        conv = {
            "n": int, "seed": int, "trials": int, "k_min": int, "rounds": int,
            "workers": int, "cert_graphs": int, "cert_pairs": int, "conc_samples": int,
            "diameter_samples": int, "collision_k": int, "collision_samples": int,
            "beta_n": int, "beta_graphs": int, "p": float, "win_threshold": float,
            "conc_constant": float, "beta_p": float,
        }
        try:
            for name, fn in conv.items():
                object.__setattr__(self, name, fn(getattr(self, name)))
            for name in ("k_max", "cert_k"):
                v = getattr(self, name)
                object.__setattr__(self, name, None if v in (None, "", "none") else int(v))
            if self.diameter_p not in (None, "", "none"):
                object.__setattr__(self, "diameter_p", float(self.diameter_p))
            else:
                object.__setattr__(self, "diameter_p", None)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        object.__setattr__(self, "rule", _parse_rule(self.rule))
        object.__setattr__(self, "mode", _parse_mode(self.mode))
        object.__setattr__(self, "fresh_graph_per_trial", _parse_bool(self.fresh_graph_per_trial))
        if self.graph in ("", "none", "gnp"):
            object.__setattr__(self, "graph", None)
        if self.k_max is None:
            object.__setattr__(self, "k_max", self.graph_n)
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 1 <= self.k_min <= self.k_max <= self.graph_n:
            raise ConfigError(f"k range [{self.k_min}, {self.k_max}] must lie within [1, {self.graph_n}]")
        if not 0.0 < self.win_threshold <= 1.0:
            raise ConfigError("win_threshold must lie in (0, 1]")
        if self.rounds < 1 or self.workers < 1:
            raise ConfigError("rounds and workers must be >= 1")
        if self.cop not in COPS:
            raise ConfigError(f"unknown cop strategy {self.cop!r}")
        if self.robber not in ROBBERS:
            raise ConfigError(f"unknown robber strategy {self.robber!r}")
        if self.graph is None:
            try:
                GnpParams(self.n, self.p, 0)
            except ParameterError as exc:
                raise ConfigError(str(exc)) from None

    @property
    def graph_n(self) -> int:
        if self.graph is None:
            return self.n
        return fixture_graph(self.graph).n

    @classmethod
    def from_mapping(cls, values: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        clean = {}
        for key, value in values.items():
            name = key.replace("-", "_")
            if name == "threshold":
                name = "win_threshold"
            if name not in known:
                raise ConfigError(f"unknown config key {key!r}")
            clean[name] = value
        return cls(**clean)


def load_config_file(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class EstimateRow:
    k: int
    trials: int
    wins: int
    win_rate: float
    mean_rounds: float
    seed: int


def trial_graph(cfg: ExperimentConfig, i: int) -> Graph:
    if cfg.graph is not None:
        return fixture_graph(cfg.graph)
    index = i if cfg.fresh_graph_per_trial else FIXED_GRAPH_INDEX
    return sample_gnp(GnpParams(cfg.n, cfg.p, derive(cfg.seed, index, GRAPH_STREAM)))


def play_trial(cfg: ExperimentConfig, k: int, i: int, g: Optional[Graph] = None):
    """One game; returns ``(cop_won, rounds_used)``."""
    g = trial_graph(cfg, i) if g is None else g
    seed_i = mix64(cfg.seed, i)
    cop = make_strategy(cfg.cop, mix64(seed_i, COP_STREAM))
    robber = make_strategy(cfg.robber, mix64(seed_i, ROBBER_STREAM))
    out = play_game(g, cop, robber, GameConfig(k, cfg.rounds, cfg.rule, cfg.mode))
    return out.winner is Winner.COP, out.rounds_used


def _trial_block(cfg: ExperimentConfig, k: int, lo: int, hi: int):
    shared = None
    if cfg.graph is not None or not cfg.fresh_graph_per_trial:
        shared = trial_graph(cfg, 0)
    return [play_trial(cfg, k, i, shared) for i in range(lo, hi)]


def _run_outcomes(cfg: ExperimentConfig, k: int):
    if cfg.workers == 1 or cfg.trials < 2:
        return _trial_block(cfg, k, 0, cfg.trials)
    step = math.ceil(cfg.trials / (4 * cfg.workers))
    bounds = [(lo, min(lo + step, cfg.trials)) for lo in range(0, cfg.trials, step)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(_trial_block, cfg, k, lo, hi) for lo, hi in bounds]
        blocks = [f.result() for f in futures]  # collected in trial-index order
    return [r for block in blocks for r in block]


def run_trials(cfg: ExperimentConfig, k: int) -> EstimateRow:
    if not 1 <= k <= cfg.graph_n:
        raise ConfigError(f"k={k} outside [1, {cfg.graph_n}]")
    results = _run_outcomes(cfg, k)
    rounds = [r for won, r in results if won]
    wins = len(rounds)
    return EstimateRow(
        k=k, trials=cfg.trials, wins=wins, win_rate=wins / cfg.trials,
        mean_rounds=float(np.mean(rounds)) if rounds else float("nan"), seed=cfg.seed,
    )


def _violations(rows: list) -> bool:
    """True if a smaller k beats a larger k by more than three standard errors."""
    rows = sorted(rows, key=lambda r: r.k)
    for a_idx, a in enumerate(rows):
        for b in rows[a_idx + 1:]:
            se = math.sqrt(a.win_rate * (1 - a.win_rate) / a.trials
                           + b.win_rate * (1 - b.win_rate) / b.trials)
            if a.win_rate - b.win_rate > 3.0 * se:
                return True
    return False


def estimate_zeta(cfg: ExperimentConfig):
    """Smallest k in the range whose win rate reaches the threshold.

    Binary search over the (noisy but monotone) win-rate frontier; if the
    evaluated rows contradict monotonicity beyond noise, every k is scanned.
    Returns ``(zeta_hat or None, rows sorted by k)``.
    """
    cache: dict[int, EstimateRow] = {}

    def row(k):
        if k not in cache:
            cache[k] = run_trials(cfg, k)
        return cache[k]

    lo, hi = cfg.k_min, cfg.k_max
    if row(hi).win_rate >= cfg.win_threshold:
        while lo < hi:
            mid = (lo + hi) // 2
            if row(mid).win_rate >= cfg.win_threshold:
                hi = mid
            else:
                lo = mid + 1
    if _violations(list(cache.values())):
        for k in range(cfg.k_min, cfg.k_max + 1):
            row(k)
    rows = sorted(cache.values(), key=lambda r: r.k)
    passing = [r.k for r in rows if r.win_rate >= cfg.win_threshold]
    return (min(passing) if passing else None), rows


# --- verification suite -------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    samples: int
    successes: int
    statistic: float
    threshold: float
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def default_cert_k(n: int, p: float) -> int:
    """Half the dense prediction ``2 ln n / ln(1/rho)``, rounded down."""
    return max(1, int(math.log(n) / theory.log_inv_rho(p)))


def check_lemma6_positivity(n, p, k, graphs, pairs, seed) -> CheckResult:
    per_graph = max(1, pairs // graphs)
    total = hits = 0
    smallest = math.inf
    for j in range(graphs):
        g = sample_gnp(GnpParams(n, p, derive(seed, j, 0)))
        rng = make_rng(seed, j, 1)
        for _ in range(per_graph):
            u = int(rng.integers(n))
            others = np.delete(np.arange(n), u)
            s = np.sort(rng.choice(others, size=k, replace=False))
            x = exact.lemma6_certificate(g, u, s)
            smallest = min(smallest, x)
            hits += x > 0
            total += 1
    return CheckResult("lemma6_positivity", hits == total, total, hits, float(smallest), 1.0,
                       f"k={k}; statistic is the smallest pair count seen")


def check_concentration_rate(n, p, samples, constant, seed, required=0.99) -> CheckResult:
    ok = 0
    worst = 0.0
    for j in range(samples):
        g = sample_gnp(GnpParams(n, p, derive(seed, j)))
        rep = check_concentration(g, p, constant)
        ok += rep.passed
        worst = max(worst, rep.worst_degree_deviation, rep.worst_codegree_deviation)
    rate = ok / samples
    return CheckResult("concentration", rate >= required, samples, ok, rate, required,
                       f"constant={constant:g}; worst normalized deviation {worst:.6g}")


def diameter_threshold_p(n: int, omega: Optional[float] = None) -> float:
    """``sqrt((2 ln n + omega) / n)`` with ``omega`` defaulting to ``ln ln n``."""
    omega = theory.default_omega(n) if omega is None else omega
    return math.sqrt((2.0 * math.log(n) + omega) / n)


def check_diameter_rate(n, p, samples, seed, required=0.99) -> CheckResult:
    ok = sum(diameter_at_most(sample_gnp(GnpParams(n, p, derive(seed, j))), 2)
             for j in range(samples))
    rate = ok / samples
    return CheckResult("diameter", rate >= required, samples, ok, rate, required, f"p={p:.6g}")


def check_collision_rate(p, k, samples, seed) -> CheckResult:
    rho_k = (1.0 - 2.0 * p * (1.0 - p)) ** k
    freq = sample_collision_frequency(p, k, samples, seed)
    sigma = math.sqrt(rho_k * (1.0 - rho_k) / samples)
    z = (freq - rho_k) / sigma
    return CheckResult("collision_rate", abs(z) <= 4.0, samples, round(freq * samples), freq,
                       rho_k, f"z={z:.6g}")


def check_zeta_leq_beta(n, p, graphs, seed) -> CheckResult:
    ok = 0
    for j in range(graphs):
        g = sample_gnp(GnpParams(n, p, derive(seed, j)))
        ok += exact.zeta_leq_beta_check(g)
    return CheckResult("zeta_leq_beta", ok == graphs, graphs, ok, ok / graphs, 1.0, f"n={n}")


def verify_suite(cfg: ExperimentConfig) -> VerifyReport:
    if cfg.graph is not None:
        raise ConfigError("verify samples G(n, p); a fixed graph cannot be used")
    k = cfg.cert_k if cfg.cert_k is not None else default_cert_k(cfg.n, cfg.p)
    report = VerifyReport()
    report.checks.append(check_lemma6_positivity(
        cfg.n, cfg.p, k, cfg.cert_graphs, cfg.cert_pairs, derive(cfg.seed, 1)))
    report.checks.append(check_concentration_rate(
        cfg.n, cfg.p, cfg.conc_samples, cfg.conc_constant, derive(cfg.seed, 2)))
    dp = cfg.p if cfg.diameter_p is None else cfg.diameter_p
    report.checks.append(check_diameter_rate(cfg.n, dp, cfg.diameter_samples, derive(cfg.seed, 3)))
    report.checks.append(check_collision_rate(
        cfg.p, cfg.collision_k, cfg.collision_samples, derive(cfg.seed, 4)))
    report.checks.append(check_zeta_leq_beta(
        cfg.beta_n, cfg.beta_p, cfg.beta_graphs, derive(cfg.seed, 5)))
    return report


# --- output -------------------------------------------------------------

CSV_HEADER = ("k", "trials", "wins", "win_rate", "mean_rounds", "seed")


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([fmt(getattr(r, h)) for h in CSV_HEADER])
    return buf.getvalue()


def _json_float(x):
    if isinstance(x, float):
        return None if math.isnan(x) else float(fmt(x))
    return x


def estimate_to_json(zeta_hat, rows) -> str:
    body = {
        "zeta_hat": zeta_hat,
        "rows": [{h: _json_float(getattr(r, h)) for h in CSV_HEADER} for r in rows],
    }
    return json.dumps(body, indent=2) + "\n"


def report_to_csv(report: VerifyReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ("name", "passed", "samples", "successes", "statistic", "threshold", "detail")
    w.writerow(("check",) + cols[1:])
    for c in report.checks:
        w.writerow([fmt(getattr(c, h)) for h in cols])
    return buf.getvalue()


def report_to_json(report: VerifyReport) -> str:
    body = {
        "passed": report.passed,
        "checks": [{k: _json_float(v) for k, v in asdict(c).items()} for c in report.checks],
    }
    return json.dumps(body, indent=2) + "\n"


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **kw)
