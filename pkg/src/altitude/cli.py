"""Command-line entry point.

Subcommands: heights, extend, exact, adversarial, token, experiment,
verify.  Reports are JSON (one object, or one object per line for
streaming runs) with the invoked configuration echoed in a header, so any
run is reproducible from its own output.  Exit codes: 0 success, 1 invalid
input, 2 a violated internal guarantee (always a bug).

Set ALTITUDE_LOG to error, info, or debug to control logging.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time

from . import verify as verify_mod
from .errors import AltitudeError, InternalInvariantError
from .graph import generate, graph_stats, graph_to_json, read_graph, reorder_edges, write_graph
from .heights import build_height_table, table_to_json_dict
from .holes import deletion_pipeline, measure_drop
from .oracle import adversarial_ordering, altitude_exact, longest_monotone_trail, random_ordering_stats
from .paths import guaranteed_bounds, long_path_delete, long_path_rodl, pedestrian_trails, validate_path
from .rng import SplitMix64
from .tokens import check_net_gain_bound, corollary_drop_bound, random_game, triangular_k, triangular_strategy

log = logging.getLogger("altitude")


class CliUsageError(AltitudeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        raise CliUsageError(message)


def _add_graph_source(p: _Parser, with_seed: bool = True) -> None:
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--family", help="generator family (complete, hypercube, gnp, path, cycle, cycle_join, star)")
    p.add_argument("--n", type=int, help="size parameter (dimension for hypercube)")
    p.add_argument("--p", type=float, help="edge probability for gnp")
    if with_seed:
        p.add_argument("--seed", type=int, default=0, help="seed for generation and orderings")


def _load_graph(args):
    if args.graph and args.family:
        raise CliUsageError("pass either --graph or --family, not both")
    if args.graph:
        return read_graph(args.graph)
    if args.family:
        return generate(args.family, args.n, p=args.p, seed=getattr(args, "seed", 0))
    raise CliUsageError("a graph source is required: --graph FILE or --family NAME --n N")


class _Sink:
    """Writes JSON lines or a CSV projection of flat fields."""

    def __init__(self, path: str | None, fmt: str):
        self.fmt = fmt
        self.fh = open(path, "w", encoding="utf-8") if path else sys.stdout
        self.owns = path is not None
        self.csv_writer = None

    def emit(self, record: dict) -> None:
        if self.fmt == "csv":
            flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list, tuple))}
            if self.csv_writer is None:
                self.csv_writer = csv.DictWriter(self.fh, fieldnames=list(flat))
                self.csv_writer.writeheader()
            self.csv_writer.writerow(flat)
        else:
            self.fh.write(json.dumps(record) + "\n")

    def close(self) -> None:
        if self.owns:
            self.fh.close()


def _config_header(args, command: str) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    config["command"] = command
    return config


def _cmd_heights(args) -> int:
    g = _load_graph(args)
    if args.reorder_seed is not None:
        g = reorder_edges(g, seed=args.reorder_seed)
    table = build_height_table(g)
    payload = {"config": _config_header(args, "heights")}
    payload.update(table_to_json_dict(table))
    print(json.dumps(payload))
    return 0


def _cmd_extend(args) -> int:
    g = _load_graph(args)
    sink = _Sink(args.out, args.format)
    sink.emit({"config": _config_header(args, "extend")})
    try:
        for trial in range(args.trials):
            h = reorder_edges(g, seed=args.seed + trial) if g.m else g
            if args.algo == "rodl":
                path = long_path_rodl(h)
                validate_path(h, path)
                guarantee = math.floor(0.5 + math.sqrt(h.average_degree))
                record = {"trial": trial, "length": path.length, "guarantee": guarantee, "drops": []}
            else:
                path, runlog = long_path_delete(h, args.s)
                validate_path(h, path)
                record = {
                    "trial": trial,
                    "length": path.length,
                    "guarantee": runlog.guarantee,
                    "drops": list(runlog.drops),
                }
            sink.emit(record)
    finally:
        sink.close()
    return 0


def _cmd_exact(args) -> int:
    g = _load_graph(args)
    report = altitude_exact(g, mode=args.mode, max_edges=args.max_edges, prune=not args.no_prune, jobs=args.jobs)
    payload = {"config": _config_header(args, "exact")}
    payload.update(report.to_json_dict())
    print(json.dumps(payload))
    return 0


def _cmd_adversarial(args) -> int:
    g = _load_graph(args)
    report = adversarial_ordering(
        g,
        iterations=args.iterations,
        seed=args.seed,
        t0=args.t0,
        cooling=args.cooling,
        path_budget=args.path_budget,
    )
    payload = {"config": _config_header(args, "adversarial")}
    payload.update(report.to_json_dict())
    print(json.dumps(payload))
    return 0


def _cmd_token_triangular(args) -> int:
    transcript = triangular_strategy(args.n, args.s)
    k = triangular_k(args.n, args.s)
    payload = {
        "config": _config_header(args, "token triangular"),
        "n": args.n,
        "s": args.s,
        "k": k,
        "final_column_tokens": max(transcript.final_counts()),
        "steps": transcript.n_steps,
        "transfers": transcript.transfer_count,
        "gain_bound": check_net_gain_bound(transcript),
    }
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            json.dump(transcript.to_json_dict(), fh)
        payload["export"] = args.export
    print(json.dumps(payload))
    return 0


def _cmd_token_sweep(args) -> int:
    sink = _Sink(args.out, args.format)
    sink.emit({"config": _config_header(args, "token sweep")})
    rng = SplitMix64(args.seed)
    try:
        for s in range(1, args.smax + 1):
            for n in range(s, args.nmax + 1):
                constructed = max(triangular_strategy(n, s).final_counts())
                best_random = 0
                for _ in range(args.games):
                    t = random_game(n, s, seed=rng.next_u64())
                    check_net_gain_bound(t)
                    best_random = max(best_random, max(t.final_counts()))
                sink.emit(
                    {
                        "n": n,
                        "s": s,
                        "k": triangular_k(n, s),
                        "triangular": constructed,
                        "random_best": best_random,
                        "lower_formula": math.sqrt(2 * n * s) - 1.5 * s,
                        "upper_formula": corollary_drop_bound(n, s) if n >= max(2, s) else None,
                    }
                )
    finally:
        sink.close()
    return 0


def _cmd_token_from_graph(args) -> int:
    g = read_graph(args.graph)
    deleted = [int(v) for v in args.delete.split(",") if v != ""]
    result = deletion_pipeline(g, deleted, validate=True)
    payload = {
        "config": _config_header(args, "token from-graph"),
        "n": g.n,
        "deleted": deleted,
        "columns": len(result.sequence.alive),
        "steps": result.transcript.n_steps,
        "transfers": result.transcript.transfer_count,
        "max_drop": result.max_drop,
        "drops": [
            {"edge": d.rank, "height_full": d.height_full, "height_deleted": d.height_deleted, "drop": d.drop}
            for d in result.drops
        ],
    }
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            json.dump(result.transcript.to_json_dict(), fh)
        payload["export"] = args.export
    print(json.dumps(payload))
    return 0


def _cmd_experiment(args) -> int:
    sink = _Sink(args.out, args.format)
    sink.emit({"config": _config_header(args, f"experiment {args.name}")})
    try:
        if args.name == "rodl-vs-delete":
            g = _load_graph(args)
            for trial in range(args.trials):
                h = reorder_edges(g, seed=args.seed + trial)
                guided = long_path_rodl(h)
                deleted, runlog = long_path_delete(h, args.s)
                sink.emit(
                    {
                        "trial": trial,
                        "rodl_length": guided.length,
                        "delete_length": deleted.length,
                        "delete_guarantee": runlog.guarantee,
                        "max_drop": max(runlog.drops, default=0),
                    }
                )
        elif args.name == "drop-scan":
            rng = SplitMix64(args.seed)
            worst = {}
            for trial in range(args.trials):
                n = rng.randint(4, args.nmax)
                s = rng.randint(1, min(args.smax, n - 2))
                g = generate("gnp", n, p=(rng.below(8) + 2) / 10.0, seed=rng.next_u64())
                if g.m == 0:
                    continue
                g = reorder_edges(g, seed=rng.next_u64())
                result = deletion_pipeline(g, rng.sample(n, s), validate=False)
                key = (n, s)
                worst[key] = max(worst.get(key, 0), result.max_drop)
            for (n, s), drop in sorted(worst.items()):
                sink.emit({"n": n, "s": s, "max_drop_observed": drop})
        elif args.name == "random-ordering":
            g = _load_graph(args)
            sink.emit(random_ordering_stats(g, trials=args.trials, seed=args.seed))
        else:
            raise CliUsageError(f"unknown experiment {args.name!r}")
    finally:
        sink.close()
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_criteria(level=args.level)
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(r.name for r in failed)}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="altitude", description="Monotone-path experiments on edge-ordered graphs")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("heights", parents=[], help="emit a graph's height table as JSON")
    _add_graph_source(p)
    p.add_argument("--reorder-seed", type=int, help="apply a seeded random edge reordering first")
    p.set_defaults(func=_cmd_heights)

    p = sub.add_parser("extend", help="run the path-extension algorithms over random orderings")
    _add_graph_source(p)
    p.add_argument("--algo", choices=("rodl", "delete"), default="rodl")
    p.add_argument("--s", type=int, default=1, help="deletion block size for --algo delete")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("exact", help="exact altitude by enumerating all edge orderings")
    _add_graph_source(p)
    p.add_argument("--mode", choices=("trail", "path"), default="trail")
    p.add_argument("--max-edges", type=int, default=10)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--no-prune", action="store_true", help="disable symmetry pruning")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("adversarial", help="anneal towards orderings with short longest paths")
    _add_graph_source(p)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--t0", type=float, default=2.0)
    p.add_argument("--cooling", type=float, default=0.9995)
    p.add_argument("--path-budget", type=int, default=500_000)
    p.set_defaults(func=_cmd_adversarial)

    p = sub.add_parser("token", help="token game strategies and sweeps")
    tsub = p.add_subparsers(dest="token_command", required=True)

    t = tsub.add_parser("triangular", help="run the staircase construction")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--s", type=int, required=True)
    t.add_argument("--export", help="write the transcript JSON here")
    t.set_defaults(func=_cmd_token_triangular)

    t = tsub.add_parser("sweep", help="tabulate collectible tokens over an (n, s) grid")
    t.add_argument("--nmax", type=int, required=True)
    t.add_argument("--smax", type=int, required=True)
    t.add_argument("--games", type=int, default=20, help="random games per grid point")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.add_argument("--format", choices=("json", "csv"), default="json")
    t.set_defaults(func=_cmd_token_sweep)

    t = tsub.add_parser("from-graph", help="play the game induced by deleting vertices")
    t.add_argument("--graph", required=True)
    t.add_argument("--delete", required=True, help="comma-separated vertex ids")
    t.add_argument("--export", help="write the transcript JSON here")
    t.set_defaults(func=_cmd_token_from_graph)

    p = sub.add_parser("experiment", help="named experiment bundles")
    p.add_argument("name", choices=("rodl-vs-delete", "drop-scan", "random-ordering"))
    _add_graph_source(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--smax", type=int, default=2)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("ALTITUDE_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AltitudeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalInvariantError as exc:
        print(f"internal invariant violated (this is a bug): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
