"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 scoring finished but too many boundary nodes failed to converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .boundary import boundary_edges
from .centrality import betweenness_brandes, betweenness_bruteforce, rank_overlap
from .community import DEFAULT_Q_THRESHOLD, CommunityLabeling, modularity
from .generators import connect_communities, erdos_renyi, preferential_attachment
from .graph import Graph, load_edge_list, write_edge_list
from .pipeline import (
    build_manifest,
    detect_all_communities,
    run_pipeline,
    write_betweenness_csv,
    write_boundary_csv,
    write_boundary_nodes_csv,
    write_communities_csv,
    write_components_csv,
    write_scores_csv,
    write_scores_dot,
    write_scores_json,
)
from .temporal import bin_events, control_series, detect_spikes
from .walker import WalkConfig

USAGE_ERROR = 1
INPUT_ERROR = 2
UNCONVERGED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    pass


def _load_graph(path: str) -> Graph:
    try:
        with open(path) as handle:
            return load_edge_list(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_labels(path: str, g: Graph) -> CommunityLabeling:
    """Load a node_id,community_id CSV produced by the communities command."""
    by_name = {g.name_of(v): v for v in range(g.num_nodes)}
    labels = [-1] * g.num_nodes
    try:
        with open(path) as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#") or text == "node_id,community_id":
                    continue
                name, _, label = text.partition(",")
                if name not in by_name:
                    raise InputError(f"{path}: line {line_number}: unknown node {name!r}")
                labels[by_name[name]] = int(label)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if any(v < 0 for v in labels):
        raise InputError(f"{path}: does not label every node of the graph")
    num = max(labels) + 1
    q = modularity(g, labels) if g.num_edges > 0 else 0.0
    return CommunityLabeling(labels=tuple(labels), modularity=q, num_communities=num)


def _read_scores(path: str) -> dict[str, float]:
    """Node score map from a CSV; the last column is the value."""
    scores: dict[str, float] = {}
    try:
        with open(path) as handle:
            for line in handle:
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                fields = text.split(",")
                try:
                    value = float(fields[-1])
                except ValueError:
                    continue  # header row
                scores[fields[0]] = value
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not scores:
        raise InputError(f"{path}: no score rows found")
    return scores


def _read_events(path: str, g: Graph) -> list[tuple[int, int]]:
    by_name = {g.name_of(v): v for v in range(g.num_nodes)}
    events = []
    try:
        with open(path) as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#") or text == "epoch_seconds,node_id":
                    continue
                stamp, _, name = text.partition(",")
                if name not in by_name:
                    raise InputError(f"{path}: line {line_number}: unknown node {name!r}")
                events.append((int(stamp), by_name[name]))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not events:
        raise InputError(f"{path}: no events found")
    return events


def _walk_config(args) -> WalkConfig:
    return WalkConfig(
        walknum=args.walknum,
        stepnum=args.stepnum,
        psrf_low=args.psrf_low,
        psrf_high=args.psrf_high,
        max_batches=args.max_batches,
        seed=args.seed,
    )


def cmd_pipeline(args) -> int:
    g = _load_graph(args.input)
    result = run_pipeline(
        g, seed=args.seed, q_threshold=args.q_threshold,
        walk=_walk_config(args), threads=args.threads,
    )
    out = _out_dir(args)
    with open(out / "scores.csv", "w") as handle:
        write_scores_csv(result, handle)
    if args.format == "json":
        with open(out / "scores.json", "w") as handle:
            write_scores_json(result, handle)
    elif args.format == "dot":
        with open(out / "scores.dot", "w") as handle:
            write_scores_dot(g, result.scores.normalized, handle)
    with open(out / "communities.csv", "w") as handle:
        write_communities_csv(g, result.labeling, handle,
                              seed=args.seed, q_threshold=args.q_threshold)
    with open(out / "boundary.csv", "w") as handle:
        write_boundary_csv(g, result.labeling, result.bset, handle)
    with open(out / "manifest.json", "w") as handle:
        json.dump(build_manifest(result), handle, indent=2)
        handle.write("\n")
    if result.scores.warning:
        print(f"warning: {result.scores.warning}", file=sys.stderr)
    if result.unconverged_fraction > args.unconverged_tolerance:
        print(
            f"warning: {result.unconverged_fraction:.1%} of boundary nodes "
            "did not converge", file=sys.stderr,
        )
        return UNCONVERGED
    return 0


def cmd_components(args) -> int:
    g = _load_graph(args.input)
    with open(_out_dir(args) / "components.csv", "w") as handle:
        write_components_csv(g, handle)
    return 0


def cmd_communities(args) -> int:
    g = _load_graph(args.input)
    labeling, reports = detect_all_communities(
        g, seed=args.seed, q_threshold=args.q_threshold
    )
    out = _out_dir(args)
    with open(out / "communities.csv", "w") as handle:
        write_communities_csv(g, labeling, handle,
                              seed=args.seed, q_threshold=args.q_threshold)
    summary = {
        "num_communities": labeling.num_communities,
        "modularity": labeling.modularity,
        "passes": sum(r.passes for r in reports),
        "seed": args.seed,
        "q_threshold": args.q_threshold,
        "components": len(reports),
    }
    with open(out / "communities.json", "w") as handle:
        json.dump(summary, handle, indent=2)
        handle.write("\n")
    return 0


def cmd_boundary(args) -> int:
    g = _load_graph(args.input)
    labeling = _read_labels(args.labels, g)
    bset = boundary_edges(g, labeling)
    out = _out_dir(args)
    with open(out / "boundary.csv", "w") as handle:
        write_boundary_csv(g, labeling, bset, handle)
    with open(out / "boundary_nodes.csv", "w") as handle:
        write_boundary_nodes_csv(g, bset, handle)
    return 0


def cmd_betweenness(args) -> int:
    g = _load_graph(args.input)
    values = betweenness_bruteforce(g) if args.oracle else betweenness_brandes(g)
    with open(_out_dir(args) / "betweenness.csv", "w") as handle:
        write_betweenness_csv(g, values, handle)
    return 0


def cmd_overlap(args) -> int:
    a = _read_scores(args.a)
    b = _read_scores(args.b)
    if set(a) != set(b):
        raise InputError("score files cover different node sets")
    try:
        names = sorted(a, key=int)
    except ValueError:
        names = sorted(a)
    vec_a = [a[name] for name in names]
    vec_b = [b[name] for name in names]
    if args.ks:
        ks = [int(k) for k in args.ks.split(",")]
    else:
        ks = list(range(1, min(args.max_k, len(names)) + 1))
    curve = rank_overlap(vec_a, vec_b, ks)
    with open(_out_dir(args) / "overlap.csv", "w") as handle:
        handle.write("k,proportion\n")
        for k, proportion in zip(curve.ks, curve.proportions):
            handle.write(f"{k},{proportion!r}\n")
    return 0


def cmd_generate(args) -> int:
    out = _out_dir(args)
    if args.kind == "er":
        recipe = f"kind=er n={args.n} p={args.p} seed={args.seed}"
        g = erdos_renyi(args.n, args.p, seed=args.seed)
    elif args.kind == "pa":
        recipe = f"kind=pa n={args.n} m={args.m} seed={args.seed}"
        g = preferential_attachment(args.n, args.m, seed=args.seed)
    else:
        param = f"p={args.p}" if args.part_kind == "er" else f"m={args.m}"
        recipe = (f"kind=planted parts={args.parts} part_kind={args.part_kind} "
                  f"n={args.n} {param} k={args.k} seed={args.seed}")
        if args.part_kind == "er":
            parts = [
                erdos_renyi(args.n, args.p, seed=args.seed * 7919 + i)
                for i in range(args.parts)
            ]
        else:
            parts = [
                preferential_attachment(args.n, args.m, seed=args.seed * 7919 + i)
                for i in range(args.parts)
            ]
        planted = connect_communities(parts, args.k, seed=args.seed)
        g = planted.graph
        with open(out / "planted_labels.csv", "w") as handle:
            handle.write(f"# {recipe}\n")
            handle.write("node_id,community_id\n")
            for v in range(g.num_nodes):
                handle.write(f"{v},{planted.planted_labels[v]}\n")
        with open(out / "planted_boundary.csv", "w") as handle:
            handle.write(f"# {recipe}\n")
            handle.write("node_id\n")
            for v in planted.planted_boundary:
                handle.write(f"{v}\n")
    with open(out / "graph.edges", "w") as handle:
        handle.write(f"# {recipe}\n")
        write_edge_list(g, handle)
    return 0


def cmd_temporal(args) -> int:
    g = _load_graph(args.input)
    events = _read_events(args.events, g)
    # TODO: optional per-window boundary recomputation for evolving networks
    labeling, _ = detect_all_communities(g, seed=args.seed, q_threshold=args.q_threshold)
    bset = boundary_edges(g, labeling)
    boundary_nodes = set(bset.boundary_nodes)
    totals = bin_events(events, args.window)
    boundary_series = bin_events(events, args.window, node_filter=boundary_nodes)
    control = control_series(
        events, boundary_nodes, set(range(g.num_nodes)), args.window, seed=args.seed
    )
    out = _out_dir(args)
    with open(out / "temporal.csv", "w") as handle:
        handle.write(f"# seed={args.seed} window={args.window} "
                     f"q_threshold={args.q_threshold} z_threshold={args.z_threshold}\n")
        handle.write("window_index,total,boundary_active,control_active\n")
        for w in range(totals.num_windows):
            handle.write(
                f"{w},{totals.totals[w]},{boundary_series.actives[w]},"
                f"{control.actives[w]}\n"
            )
    report = {
        "seed": args.seed,
        "window_seconds": args.window,
        "z_threshold": args.z_threshold,
        "num_boundary_nodes": len(boundary_nodes),
        "series": {},
    }
    for label, counts in (
        ("total", totals.totals),
        ("boundary_active", boundary_series.actives),
        ("control_active", control.actives),
    ):
        spikes = detect_spikes(counts, z_threshold=args.z_threshold)
        report["series"][label] = {
            "spike_windows": list(spikes.spike_windows),
            "zscores": [z if z != float("inf") else "inf" for z in spikes.zscores],
        }
    with open(out / "spikes.json", "w") as handle:
        json.dump(report, handle, indent=2)
        handle.write("\n")
    return 0


def _add_walk_flags(parser):
    parser.add_argument("--walknum", type=int, default=50,
                        help="walkers per convergence batch (default 50)")
    parser.add_argument("--stepnum", type=int, default=None,
                        help="steps per walk (default: derived from graph size)")
    parser.add_argument("--psrf-low", type=float, default=0.95)
    parser.add_argument("--psrf-high", type=float, default=1.05)
    parser.add_argument("--max-batches", type=int, default=20)


def build_parser() -> _Parser:
    parser = _Parser(prog="bva", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_flag=True):
        if input_flag:
            p.add_argument("--input", "-i", required=True, help="edge-list file")
        p.add_argument("--out", "-o", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pipeline", help="communities, boundary, and walker scores")
    common(p)
    p.add_argument("--q-threshold", type=float, default=DEFAULT_Q_THRESHOLD)
    _add_walk_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json", "dot"), default="csv")
    p.add_argument("--unconverged-tolerance", type=float, default=0.0,
                   help="max tolerated fraction of unconverged boundary nodes")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("components", help="connected components CSV")
    common(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("communities", help="community labels CSV + JSON summary")
    common(p)
    p.add_argument("--q-threshold", type=float, default=DEFAULT_Q_THRESHOLD)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("boundary", help="boundary edges/nodes from a labels CSV")
    common(p)
    p.add_argument("--labels", required=True, help="node_id,community_id CSV")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("betweenness", help="shortest-path betweenness CSV")
    common(p)
    p.add_argument("--oracle", action="store_true",
                   help="use the brute-force path-counting route (small graphs)")
    p.set_defaults(func=cmd_betweenness)

    p = sub.add_parser("overlap", help="top-k overlap curve between two score CSVs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--ks", default=None, help="comma-separated k values")
    p.add_argument("--max-k", type=int, default=50)
    p.add_argument("--out", "-o", default=".")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("generate", help="synthetic graphs (er | pa | planted)")
    p.add_argument("kind", choices=("er", "pa", "planted"))
    p.add_argument("--n", type=int, default=100, help="nodes per graph/part")
    p.add_argument("--p", type=float, default=0.06, help="ER edge probability")
    p.add_argument("--m", type=int, default=2, help="PA edges per arrival")
    p.add_argument("--parts", type=int, default=3, help="planted: number of parts")
    p.add_argument("--part-kind", choices=("er", "pa"), default="er",
                   help="planted: generator for each part")
    p.add_argument("--k", type=int, default=26, help="planted: cross-linker count")
    p.add_argument("--out", "-o", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("temporal", help="windowed boundary activity vs control")
    common(p)
    p.add_argument("--events", required=True, help="epoch_seconds,node_id CSV")
    p.add_argument("--window", type=int, default=60, help="window size in seconds")
    p.add_argument("--q-threshold", type=float, default=DEFAULT_Q_THRESHOLD)
    p.add_argument("--z-threshold", type=float, default=3.0)
    p.set_defaults(func=cmd_temporal)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
