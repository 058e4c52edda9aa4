"""Command-line interface: ``locgame {gen,play,estimate,exact,theory,verify}``.

Settings come from the built-in defaults, then an optional ``--config``
file of ``key = value`` lines, then command-line flags.

Exit codes: 0 success, 1 a verification check failed, 2 configuration
error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import exact, theory
from .errors import ConfigError, ParameterError, ResourceError
from .game import GameConfig, Mode, play_game
from .graph import GnpParams, sample_gnp, write_edgelist
from .harness import (
    ExperimentConfig, estimate_to_json, estimate_zeta, fixture_graph, load_config_file,
    report_to_csv, report_to_json, rows_to_csv, verify_suite,
)
from .rng import mix64
from .strategies import make_strategy

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3

# flag dest -> ExperimentConfig field
FLAG_FIELDS = {
    "n": "n", "p": "p", "seed": "seed", "trials": "trials", "rounds": "rounds",
    "rule": "rule", "mode": "mode", "cop": "cop", "robber": "robber", "graph": "graph",
    "k_min": "k_min", "k_max": "k_max", "threshold": "win_threshold", "workers": "workers",
    "fixed_graph": "fresh_graph_per_trial", "cert_k": "cert_k",
    "diameter_p": "diameter_p", "collision_samples": "collision_samples",
}


def _common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="file of 'key = value' lines")
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--rounds", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--rule", choices=["stay", "move"])
    sp.add_argument("--mode", choices=["embodied", "phantom"])
    sp.add_argument("--cop")
    sp.add_argument("--robber")
    sp.add_argument("--graph", help="fixture like complete:5 / path:8, or an edge-list file")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="sample G(n, p) and write an edge list")
    _common(sp)

    sp = sub.add_parser("play", help="play one traced game")
    _common(sp)

    sp = sub.add_parser("estimate", help="Monte Carlo estimate of the localization number")
    _common(sp)
    sp.add_argument("--k-min", dest="k_min", type=int)
    sp.add_argument("--k-max", dest="k_max", type=int)
    sp.add_argument("--threshold", type=float)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--fixed-graph", dest="fixed_graph", action="store_const", const=False,
                    help="reuse one sampled graph for every trial")

    sp = sub.add_parser("exact", help="exact localization number and metric dimension")
    _common(sp)

    sp = sub.add_parser("theory", help="closed-form bounds for (n, p)")
    _common(sp)
    sp.add_argument("--c", type=float)
    sp.add_argument("--omega", type=float)

    sp = sub.add_parser("verify", help="run the certificate checks")
    _common(sp)
    sp.add_argument("--cert-k", dest="cert_k", type=int)
    sp.add_argument("--diameter-p", dest="diameter_p", type=float)
    sp.add_argument("--collision-samples", dest="collision_samples", type=int)
    return parser


def _settings(args) -> dict:
    values = load_config_file(args.config) if args.config else {}
    values = {k.replace("-", "_"): v for k, v in values.items()}
    for dest, name in FLAG_FIELDS.items():
        v = getattr(args, dest, None)
        if v is not None:
            values[name] = v
    return values


def _config(args, **defaults) -> ExperimentConfig:
    values = dict(defaults)
    values.update(_settings(args))
    values.pop("k", None)
    return ExperimentConfig.from_mapping(values)


def _k(args, fallback: int) -> int:
    if args.k is not None:
        return args.k
    if args.config:
        raw = load_config_file(args.config).get("k")
        if raw is not None:
            try:
                return int(raw)
            except ValueError:
                raise ConfigError(f"bad k {raw!r}") from None
    return fallback


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph(cfg: ExperimentConfig):
    if cfg.graph is not None:
        return fixture_graph(cfg.graph)
    return sample_gnp(GnpParams(cfg.n, cfg.p, cfg.seed))


def _kv_csv(pairs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    for key, value in pairs:
        w.writerow((key, f"{value:.6g}" if isinstance(value, float) else value))
    return buf.getvalue()


def cmd_gen(args) -> int:
    cfg = _config(args)
    g = _graph(cfg)
    if args.out:
        write_edgelist(g, args.out)
    else:
        edges = g.edges()
        sys.stdout.write(f"{g.n} {len(edges)}\n" + "".join(f"{u} {v}\n" for u, v in edges))
    return EXIT_OK


def cmd_play(args) -> int:
    cfg = _config(args)
    robber_name = cfg.robber
    if args.robber is None and cfg.mode is Mode.EMBODIED and robber_name == "greedy-adversary":
        robber_name = "random-walker"
    g = _graph(cfg)
    k = _k(args, max(1, min(g.n, round(theory.dense_prediction(g.n)))))
    out = play_game(g, make_strategy(cfg.cop, mix64(cfg.seed, 1)),
                    make_strategy(robber_name, mix64(cfg.seed, 2)),
                    GameConfig(k, cfg.rounds, cfg.rule, cfg.mode))
    summary = {"winner": out.winner.value, "rounds_used": out.rounds_used,
               "located_vertex": out.located_vertex}
    if args.format == "json":
        text = out.trace_json_lines() + json.dumps(summary) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("round", "probe", "observed", "filtered_size", "expanded_size"))
        for r in out.trace:
            w.writerow((r.round, " ".join(map(str, r.probe)), " ".join(map(str, r.observed)),
                        r.filtered_size, "" if r.expanded_size is None else r.expanded_size))
        text = buf.getvalue() + f"# winner={summary['winner']} rounds_used={out.rounds_used} " \
                                f"located_vertex={out.located_vertex}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    cfg = _config(args, rounds=20)
    zeta_hat, rows = estimate_zeta(cfg)
    if args.format == "json":
        _emit(estimate_to_json(zeta_hat, rows), args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
        print(f"zeta_hat={zeta_hat}", file=sys.stderr)
    return EXIT_OK


def cmd_exact(args) -> int:
    cfg = _config(args, n=8)
    g = _graph(cfg)
    zeta = exact.localization_number(g, cfg.rule)
    res = exact.resolving_set(g)
    result = {
        "n": g.n,
        "edges": g.num_edges,
        "rule": cfg.rule.value,
        "zeta": zeta,
        "beta": len(res),
        "resolving_set": list(res),
        "zeta_leq_beta": zeta <= len(res) if cfg.rule.value == "stay" else None,
        "win_table": exact.win_table(g, zeta, cfg.rule).summary(),
    }
    if zeta > 1:
        result["win_table_below"] = exact.win_table(g, zeta - 1, cfg.rule).summary()
    if args.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        flat = []
        for key, value in result.items():
            if isinstance(value, dict):
                flat += [(f"{key}.{k2}", v2) for k2, v2 in value.items()]
            elif isinstance(value, list):
                flat.append((key, " ".join(map(str, value))))
            else:
                flat.append((key, value))
        _emit(_kv_csv(flat), args.out)
    return EXIT_OK


def cmd_theory(args) -> int:
    values = _settings(args)
    n = float(values.get("n", 512))
    p = float(values.get("p", 0.5))
    table = theory.theory_table(n, p, c=args.c, omega_value=args.omega)
    if args.format == "json":
        _emit(json.dumps(table, indent=2) + "\n", args.out)
    else:
        _emit(_kv_csv(table.items()), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args, n=512)
    report = verify_suite(cfg)
    _emit(report_to_json(report) if args.format == "json" else report_to_csv(report), args.out)
    return EXIT_OK if report.passed else EXIT_CHECK


COMMANDS = {
    "gen": cmd_gen, "play": cmd_play, "estimate": cmd_estimate,
    "exact": cmd_exact, "theory": cmd_theory, "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
