"""Command-line pipeline: gen -> dist -> sample -> check, plus studies.

Every output file is accompanied by a .manifest.json recording the command,
the resolved configuration, the seed, the tool version, and a timestamp; data
files never embed timestamps, so reruns with the same seed are byte-identical
(for any --jobs value).

Exit codes: 0 success, 2 usage, 3 validation, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .algorithms import TiebreakMode
from .distributions import (
    RerunStudyConfig,
    build_empirical,
    distributions_from_json,
    distributions_to_json,
    rerun_divergence_study,
)
from .evaluation import (
    EvalConfig,
    accuracy_table,
    coverage_study,
    diversity_table,
    edge_reuse_evolution,
)
from .graphs import GraphSpec, Task, generate_graph, graphs_from_json, graphs_to_json
from .parallel import parallel_map
from .samplers import METHODS, SamplerConfig, draw_samples
from .seeding import derive_rng, derive_seed
from .validity import check_bf_valid, check_dfs_valid

OUTPUT_DIR_ENV = "TREESAMPLE_OUT"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4

DEFAULT_METHODS = {
    Task.BF: ("argmax", "beam", "greedy", "random"),
    Task.DFS: ("argmax", "upwards", "alt-upwards", "random"),
}
DIVERSITY_METHODS = ("greedy", "beam", "upwards", "alt-upwards")


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every output file."""

    command: str
    config: dict
    seed: int | None
    tool_version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        return cls(
            command=data["command"],
            config=data["config"],
            seed=data["seed"],
            tool_version=data["tool_version"],
            timestamp=data["timestamp"],
        )


def _resolve_output(raw: str) -> Path:
    path = Path(raw)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _jsonable(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Task):
        return value.value
    if isinstance(value, TiebreakMode):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_manifest(out_path: Path, args: argparse.Namespace, command: str) -> None:
    config = {
        k: _jsonable(v)
        for k, v in sorted(vars(args).items())
        if k not in ("func", "command") and not callable(v)
    }
    manifest = RunManifest(
        command=command,
        config=config,
        seed=getattr(args, "seed", None),
        tool_version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest.to_dict(), indent=1) + "\n")


def _int_list(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}")


def _method_list(raw: str) -> tuple[str, ...]:
    methods = tuple(part.strip() for part in raw.split(",") if part.strip())
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}; choose from {', '.join(METHODS)}"
            )
    return methods


def _task(raw: str) -> Task:
    return Task(raw)


def _mode(raw: str) -> TiebreakMode:
    return TiebreakMode(raw)


def _sampler_config(args: argparse.Namespace, method: str) -> SamplerConfig:
    return SamplerConfig(
        method=method,
        beam_width=args.beam_width,
        beam_branch=args.beam_branch,
        greedy_parent_samples=args.greedy_samples,
        greedy_max_resamples=args.greedy_resamples,
        seed=args.seed,
    )


def _add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beam-width", type=int, default=3)
    parser.add_argument("--beam-branch", type=int, default=3)
    parser.add_argument("--greedy-samples", type=int, default=3)
    parser.add_argument("--greedy-resamples", type=int, default=10)


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--task", type=_task, choices=list(Task), metavar="{dfs,bf}", default=Task.BF)
    parser.add_argument("-n", type=int, default=5, help="graph size")
    parser.add_argument("--graphs", type=int, default=50, help="graphs per run")
    parser.add_argument("--p", type=float, default=None, help="edge probability (default: per-task density)")
    parser.add_argument("--dist-runs", type=int, default=20, help="reruns per distribution")
    parser.add_argument("--alpha", type=float, default=0.0, help="row perturbation strength")
    _add_sampler_flags(parser)


# ---------------------------------------------------------------- commands


def cmd_gen(args: argparse.Namespace) -> int:
    graphs = []
    for index in range(args.count):
        spec = GraphSpec(
            n=args.n,
            edge_probability=args.p,
            task=args.task,
            weight_set=args.weights,
            normalize=not args.no_normalize,
            seed=derive_seed(args.seed, "graph", index),
        )
        graphs.append(generate_graph(spec))
    out = _resolve_output(args.output)
    graphs_to_json(graphs, out)
    _write_manifest(out, args, "gen")
    print(f"wrote {len(graphs)} graphs to {out}")
    return EXIT_OK


def _dist_item(args_tuple):
    g, task, runs, mode, seed = args_tuple
    return build_empirical(g, task, runs=runs, seed=seed, mode=mode)


def cmd_dist(args: argparse.Namespace) -> int:
    graphs = graphs_from_json(args.input)
    items = [
        (g, args.task, args.runs, args.mode, derive_seed(args.seed, "dist", i))
        for i, g in enumerate(graphs)
    ]
    dists = parallel_map(_dist_item, items, args.jobs)
    out = _resolve_output(args.output)
    distributions_to_json(dists, out)
    _write_manifest(out, args, "dist")
    print(f"wrote {len(dists)} distributions to {out}")
    return EXIT_OK


def _sample_item(args_tuple):
    g, dist, task, cfg, k, seed = args_tuple
    rng = derive_rng(seed)
    solutions = draw_samples(cfg.method, dist, g, cfg, k, rng)
    entry: dict = {"solutions": [list(s) for s in solutions]}
    if task is Task.DFS:
        verdicts = [check_dfs_valid(g, s) for s in solutions]
        entry["valid"] = [v.valid for v in verdicts]
        entry["failed_tags"] = [v.tags() for v in verdicts]
    else:
        entry["valid"] = [check_bf_valid(g, s) for s in solutions]
    return entry


def cmd_sample(args: argparse.Namespace) -> int:
    graphs = graphs_from_json(args.input)
    dists = distributions_from_json(args.dists)
    if len(graphs) != len(dists):
        raise ValueError(
            f"graph file has {len(graphs)} entries but distribution file has {len(dists)}"
        )
    for i, (g, d) in enumerate(zip(graphs, dists)):
        if g.n != d.n:
            raise ValueError(f"entry {i}: graph has n={g.n} but distribution has n={d.n}")
    cfg = _sampler_config(args, args.method)
    items = [
        (g, d, args.task, cfg, args.k, derive_seed(args.seed, "sample", args.method, i))
        for i, (g, d) in enumerate(zip(graphs, dists))
    ]
    entries = parallel_map(_sample_item, items, args.jobs)
    for i, entry in enumerate(entries):
        entry["graph_index"] = i
    payload = {
        "task": args.task.value,
        "method": args.method,
        "k": args.k,
        "entries": entries,
    }
    out = _resolve_output(args.output)
    out.write_text(json.dumps(payload, indent=1) + "\n")
    _write_manifest(out, args, "sample")
    valid_total = sum(sum(e["valid"]) for e in entries)
    print(f"wrote {len(entries)} x {args.k} solutions to {out} ({valid_total} valid)")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    graphs = graphs_from_json(args.input)
    payload = json.loads(Path(args.solutions).read_text())
    task = Task(payload["task"])
    lines = []
    index = 0
    for entry in payload["entries"]:
        g = graphs[entry["graph_index"]]
        for solution in entry["solutions"]:
            pi = tuple(solution)
            if task is Task.DFS:
                verdict = check_dfs_valid(g, pi)
                ok, tags = verdict.valid, ";".join(verdict.tags())
            else:
                ok, tags = check_bf_valid(g, pi), ""
            lines.append(f"{index},{str(ok).lower()},{tags}")
            index += 1
    text = "\n".join(lines) + "\n"
    if args.output:
        out = _resolve_output(args.output)
        out.write_text(text)
        _write_manifest(out, args, "check")
        print(f"checked {index} solutions; verdicts in {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _eval_config(args: argparse.Namespace, runs: int, samples: int) -> EvalConfig:
    return EvalConfig(
        task=args.task,
        graph_spec=GraphSpec(n=args.n, edge_probability=args.p, task=args.task),
        sampler=_sampler_config(args, "argmax"),
        graph_count=args.graphs,
        samples_per_graph=samples,
        runs=runs,
        dist_runs=args.dist_runs,
        perturb_alpha=args.alpha,
        seed=args.seed,
    )


def _finish_table(table, args: argparse.Namespace, command: str) -> int:
    out = _resolve_output(args.output)
    table.write_csv(out)
    _write_manifest(out, args, command)
    print(f"wrote {len(table.rows)} rows to {out}")
    return EXIT_OK


def cmd_study_reruns(args: argparse.Namespace) -> int:
    cfg = RerunStudyConfig(
        sizes=args.sizes,
        graphs_per_size=args.graphs,
        rerun_counts=args.counts,
        task=args.task,
        edge_probability=args.p,
        seed=args.seed,
    )
    table = rerun_divergence_study(cfg, jobs=args.jobs)
    return _finish_table(table, args, "study reruns")


def cmd_study_coverage(args: argparse.Namespace) -> int:
    methods = args.methods or DEFAULT_METHODS[args.task]
    cfg = _eval_config(args, runs=1, samples=args.samples)
    table = coverage_study(cfg, list(methods), jobs=args.jobs)
    return _finish_table(table, args, "study coverage")


def cmd_study_edge_reuse(args: argparse.Namespace) -> int:
    methods = args.methods or DEFAULT_METHODS[args.task]
    cfg = _eval_config(args, runs=1, samples=args.samples)
    table = edge_reuse_evolution(cfg, list(methods), denominator=args.denominator, jobs=args.jobs)
    return _finish_table(table, args, "study edge-reuse")


def cmd_study_table1(args: argparse.Namespace) -> int:
    methods = args.methods or DIVERSITY_METHODS
    cfg = _eval_config(args, runs=args.runs, samples=args.samples)
    table = diversity_table(cfg, list(methods), jobs=args.jobs)
    return _finish_table(table, args, "study table1")


def cmd_study_table2(args: argparse.Namespace) -> int:
    methods = args.methods or DEFAULT_METHODS[args.task]
    cfg = _eval_config(args, runs=args.runs, samples=args.samples)
    table = accuracy_table(cfg, list(methods), jobs=args.jobs)
    return _finish_table(table, args, "study table2")


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treesample",
        description="Parent distributions from randomized graph algorithms and "
        "multi-solution extraction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate random graphs")
    p.add_argument("-n", type=int, required=True, help="graph size")
    p.add_argument("--count", type=int, default=1, help="number of graphs")
    p.add_argument("--p", type=float, default=None, help="edge probability (default: per-task density)")
    p.add_argument("--task", type=_task, choices=list(Task), metavar="{dfs,bf}", default=Task.BF)
    p.add_argument("--weights", type=_int_list, default=(1, 2, 3), help="weight set, e.g. 1,2,3")
    p.add_argument("--no-normalize", action="store_true", help="keep raw integer weights")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dist", help="build empirical parent distributions")
    p.add_argument("-i", "--input", required=True, help="graph JSON file")
    p.add_argument("--task", type=_task, choices=list(Task), metavar="{dfs,bf}", default=Task.BF)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument(
        "--mode", type=_mode, choices=list(TiebreakMode), metavar="{per-run-global,per-node}", default=TiebreakMode.PER_RUN_GLOBAL
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("sample", help="extract candidate solutions")
    p.add_argument("-i", "--input", required=True, help="graph JSON file")
    p.add_argument("-d", "--dists", required=True, help="distribution JSON file")
    p.add_argument("--task", type=_task, choices=list(Task), metavar="{dfs,bf}", default=Task.BF)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("-k", type=int, default=5, help="samples per graph")
    _add_sampler_flags(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check", help="validate solutions against graphs")
    p.add_argument("-i", "--input", required=True, help="graph JSON file")
    p.add_argument("-s", "--solutions", required=True, help="solutions JSON file")
    p.add_argument("-o", "--output", help="verdict CSV; stdout when omitted")
    p.set_defaults(func=cmd_check)

    study = sub.add_parser("study", help="run an evaluation study")
    which = study.add_subparsers(dest="which", required=True)

    p = which.add_parser("reruns", help="distribution stability vs rerun budget")
    p.add_argument("--sizes", type=_int_list, default=(5, 10, 16, 32))
    p.add_argument("--graphs", type=int, default=20, help="graphs per size")
    p.add_argument("--counts", type=_int_list, default=(20, 50, 100), help="rerun budgets")
    p.add_argument("--task", type=_task, choices=list(Task), metavar="{dfs,bf}", default=Task.DFS)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_reruns)

    p = which.add_parser("coverage", help="cumulative unique valid solutions")
    _add_eval_flags(p)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--methods", type=_method_list, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_coverage)

    p = which.add_parser("edge-reuse", help="pairwise edge reuse as samples accumulate")
    _add_eval_flags(p)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--methods", type=_method_list, default=None)
    p.add_argument("--denominator", choices=("union", "first"), default="union")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_edge_reuse)

    p = which.add_parser("table1", help="uniques/valids per sample batch")
    _add_eval_flags(p)
    p.add_argument("--runs", type=int, default=5, help="evaluation runs")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--methods", type=_method_list, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_table1)

    p = which.add_parser("table2", help="single-draw validity rates")
    _add_eval_flags(p)
    p.add_argument("--runs", type=int, default=5, help="evaluation runs")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--methods", type=_method_list, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_table2)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    # JSONDecodeError subclasses ValueError, so the I/O arm must come first.
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
