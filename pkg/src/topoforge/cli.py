"""Command-line entry point: ``topoforge <subcommand> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 domain error, 4 when a
size or budget guard is exceeded.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

from . import netsim
from .bounds import diameter_lower_bound, gap_report, mpl_lower_bound, shell_profile
from .errors import ParseError, TooLarge, TopologyError
from .generators import generate, ring, torus
from .graph import RegularGraph, compute_metrics, round_half_up
from .graphio import load_graph, to_dot, write_graph_files
from .optimizer import SAConfig, multi_start
from .partition import EXACT_MAX_N, bisection
from .routing import TIE_BREAKS, alltoall_loads, build_routing

DEFAULT_SEED = 20190
GRAPH_SUFFIXES = (".edges", ".json", ".txt")


def _version() -> str:
    try:
        return metadata.version("topoforge")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunManifest:
    command: list[str]
    seeds: list[int]
    version: str = field(default_factory=_version)
    inputs: dict[str, str] = field(default_factory=dict)  # path -> sha256
    timestamp: str = ""

    def write(self, path: Path) -> None:
        self.timestamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        _write_text(path, json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def _digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_text(path: str | Path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        _write_text(out, text)
    else:
        sys.stdout.write(text)


def _fmt(x, places: int) -> str:
    return str(round_half_up(x, places))


def _graph_arg(text: str) -> RegularGraph:
    """A graph file path, or a generator spec string."""
    p = Path(text)
    if p.is_file():
        return load_graph(p)
    return generate(text)


def _inputs(*items: str) -> dict[str, str]:
    return {s: _digest(s) for s in items if Path(s).is_file()}


def _metrics_line(label: str, g: RegularGraph, places: int) -> str:
    m = compute_metrics(g)
    return f"{label} n={g.n} k={g.k} D={m.diameter} MPL={_fmt(m.mpl_exact, places)} girth={m.girth}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    g = generate(args.spec)
    label = g.name
    if args.out:
        write_graph_files(g, args.out)
        label = Path(args.out).name
        RunManifest(args.argv, [], inputs={}).write(Path(f"{args.out}.manifest.json"))
    print(_metrics_line(label, g, args.precision))
    return 0


def cmd_metrics(args) -> int:
    g = _graph_arg(args.graph)
    if args.json:
        m = compute_metrics(g)
        doc = {
            "name": g.name, "n": g.n, "k": g.k, "diameter": m.diameter, "girth": m.girth,
            "distance_sum": m.distance_sum, "mpl": _fmt(m.mpl_exact, args.precision),
            "mpl_exact": str(m.mpl_exact), "cable_1d": m.cable_1d,
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        print(_metrics_line(g.name, g, args.precision))
    return 0


def cmd_bounds(args) -> int:
    if args.graph:
        g = _graph_arg(args.graph)
        rep = gap_report(g)
        p = args.precision
        print(f"{g.name} n={g.n} k={g.k} D={rep.diameter_achieved} D_bound={rep.diameter_lower} "
              f"D_gap={rep.diameter_gap} MPL={_fmt(rep.mpl_achieved, p)} MPL_bound={_fmt(rep.mpl_lower, p)} "
              f"MPL_gap={_fmt(rep.mpl_gap, p)}")
        return 0
    if args.n is None or args.k is None:
        raise argparse.ArgumentTypeError("bounds needs N K or --graph")
    prof = shell_profile(args.n, args.k)
    print(f"n={args.n} k={args.k} MPL_bound={_fmt(mpl_lower_bound(args.n, args.k), args.precision)} "
          f"D_bound={diameter_lower_bound(args.n, args.k)} shells={','.join(map(str, prof.shell_sizes))}")
    return 0


def _sa_config(args) -> SAConfig:
    return SAConfig(
        n=args.n, k=args.k, t_start=args.t_start, t_end=args.t_end, n_iter=args.iters,
        symmetry=args.symmetry, seed=args.seed, stop_at_bound=args.stop_at_bound,
        trace_every=args.trace_every,
    )


def _search_report(res, places: int) -> dict:
    m = compute_metrics(res.best)
    rep = gap_report(res.best, m)
    return {
        "n": res.best.n, "k": res.best.k, "seed": res.seed,
        "mpl": _fmt(res.best_mpl, places), "mpl_exact": str(res.best_mpl),
        "diameter": m.diameter, "girth": m.girth, "cable_1d": m.cable_1d,
        "mpl_bound": _fmt(rep.mpl_lower, places), "diameter_bound": rep.diameter_lower,
        "mpl_gap": _fmt(rep.mpl_gap, places), "diameter_gap": rep.diameter_gap,
        "iterations": res.iterations_used, "accepted": res.accept_count,
        "acceptance_ratio": round(res.acceptance_ratio, 6),
    }


def _run_search(args):
    cfg = _sa_config(args)
    res = multi_start(cfg, chains=args.chains, jobs=args.jobs)
    stem = args.out or f"sa_{args.n}_{args.k}"
    write_graph_files(res.best, stem)
    report = _search_report(res, args.precision)
    report["chains"] = args.chains
    _write_text(f"{stem}.report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    if res.trace is not None:
        rows = [(int(r[0]), f"{r[1]:.6e}", f"{r[2]:.6f}", f"{r[3]:.6f}") for r in res.trace]
        _write_text(f"{stem}.trace.csv", _csv_text(["iter", "temperature", "current_mpl", "best_mpl"], rows))
    seeds = [args.seed + i for i in range(args.chains)]
    RunManifest(args.argv, seeds).write(Path(f"{stem}.manifest.json"))
    return res, report, stem


def cmd_optimize(args) -> int:
    res, report, stem = _run_search(args)
    print(f"{Path(stem).name} n={args.n} k={args.k} D={report['diameter']} MPL={report['mpl']} "
          f"bound={report['mpl_bound']} gap={report['mpl_gap']}")
    return 0


def _torus_preset(n: int) -> RegularGraph | None:
    """Most square 2D torus with n vertices, if one exists."""
    best = None
    for a in range(3, int(n ** 0.5) + 1):
        if n % a == 0 and n // a >= 3:
            best = (a, n // a)
    return torus(best) if best else None


def _sim_rows(reports, places: int):
    for r in reports:
        yield (r.topology, r.n, r.k, _fmt(r.mpl, places), r.diameter, "" if r.bw is None else r.bw,
               r.benchmark, r.msg_bytes, f"{r.abs_value:.6e}", f"{r.ratio_to_ring:.6f}")


SIM_HEADER = ["topology", "n", "k", "mpl", "diameter", "bw", "benchmark", "msg_bytes", "abs_value", "ratio_to_ring"]


def cmd_pipeline(args) -> int:
    res, report, stem = _run_search(args)
    roster = [res.best, ring(args.n)]
    t = _torus_preset(args.n)
    if t is not None:
        roster.append(t)
    sim = netsim.compare_topologies(roster, p=netsim.preset(args.params), msg_bytes=args.msg_size,
                                    seed=args.seed, routing=args.routing)
    _write_text(f"{stem}.sim.csv", _csv_text(SIM_HEADER, _sim_rows(sim, args.precision)))
    print(f"{Path(stem).name} n={args.n} k={args.k} D={report['diameter']} MPL={report['mpl']} "
          f"bound={report['mpl_bound']} gap={report['mpl_gap']}")
    return 0


def cmd_bisection(args) -> int:
    g = _graph_arg(args.graph)
    exact = True if args.exact else (False if args.heuristic else None)
    if exact and g.n > EXACT_MAX_N:
        raise TooLarge(f"exact bisection limited to n <= {EXACT_MAX_N}, got {g.n}")
    res = bisection(g, exact=exact, restarts=args.restarts, seed=args.seed)
    if args.json:
        print(json.dumps({"name": g.name, **res.as_dict()}, sort_keys=True))
    else:
        print(f"{g.name} BW={res.cut} exact={str(res.exact).lower()}")
    return 0


def cmd_route(args) -> int:
    g = _graph_arg(args.graph)
    rt = build_routing(g, args.routing)
    if args.dump:
        rows = [[s, *rt.next_hop[s].tolist()] for s in range(g.n)]
        _emit(_csv_text(["src", *range(g.n)], rows), args.out)
    else:
        s, d = args.pair
        print(" ".join(map(str, rt.path(s, d))))
    return 0


def cmd_loads(args) -> int:
    g = _graph_arg(args.graph)
    rt = build_routing(g, args.routing)
    load = alltoall_loads(rt, 1)
    rows = [(u, v, int(load[u, v])) for u in range(g.n) for v in g.adjacency[u]]
    _emit(_csv_text(["src", "dst", "load"], rows), args.out)
    return 0


def _roster_paths(items) -> list[str]:
    """Expand directories to one graph file per stem (JSON preferred, manifests skipped)."""
    out = []
    for it in items:
        p = Path(it)
        if not p.is_dir():
            out.append(it)
            continue
        stems: dict[str, Path] = {}
        for f in sorted(p.iterdir()):
            if f.suffix not in GRAPH_SUFFIXES or f.name.endswith(".manifest.json") or f.name.endswith(".report.json"):
                continue
            if f.stem not in stems or f.suffix == ".json":
                stems[f.stem] = f
        out += [str(stems[k]) for k in sorted(stems)]
    return out


def cmd_simulate(args) -> int:
    items = _roster_paths(args.roster)
    graphs = [_graph_arg(x) for x in items]
    benches = [b.strip() for b in args.benchmarks.split(",") if b.strip()]
    reports = netsim.compare_topologies(graphs, benches, p=netsim.preset(args.params),
                                        msg_bytes=args.msg_size, seed=args.seed, routing=args.routing)
    _emit(_csv_text(SIM_HEADER, _sim_rows(reports, args.precision)), args.out)
    if args.scatter:
        rows = [(r.benchmark, r.topology, _fmt(r.mpl, args.precision), f"{r.ratio_to_ring:.6f}") for r in reports]
        _write_text(args.scatter, _csv_text(["benchmark", "topology", "mpl", "ratio_to_ring"], rows))
    if args.out:
        RunManifest(args.argv, [args.seed], inputs=_inputs(*items)).write(Path(f"{args.out}.manifest.json"))
    return 0


TABLE_HEADER = ["name", "n", "k", "diameter", "mpl", "bw", "bw_exact", "girth",
                "mpl_bound", "diameter_bound", "mpl_gap", "diameter_gap"]


def table_rows(graphs, places: int = 2, restarts: int = 64, seed: int = DEFAULT_SEED):
    for g in graphs:
        m = compute_metrics(g)
        rep = gap_report(g, m)
        bw = bisection(g, restarts=restarts, seed=seed)
        yield (g.name, g.n, g.k, m.diameter, _fmt(m.mpl_exact, places), bw.cut, str(bw.exact).lower(), m.girth,
               _fmt(rep.mpl_lower, places), rep.diameter_lower, _fmt(rep.mpl_gap, places), rep.diameter_gap)


def cmd_table(args) -> int:
    items = _roster_paths(args.roster)
    graphs = [_graph_arg(x) for x in items]
    text = _csv_text(TABLE_HEADER, table_rows(graphs, args.precision, args.restarts, args.seed))
    _emit(text, args.out)
    if args.out:
        RunManifest(args.argv, [args.seed], inputs=_inputs(*items)).write(Path(f"{args.out}.manifest.json"))
    return 0


def cmd_export_dot(args) -> int:
    g = _graph_arg(args.graph)
    _emit(to_dot(g), args.out)
    return 0


# ---------------------------------------------------------------------------

def _add_sa_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--iters", type=int, default=1_000_000)
    p.add_argument("--t-start", type=float, default=1.0)
    p.add_argument("--t-end", type=float, default=1e-4)
    p.add_argument("--symmetry", type=int, default=1, help="rotation order s (s divides n)")
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--stop-at-bound", action="store_true")
    p.add_argument("--trace-every", type=int, default=0)
    p.add_argument("-o", "--out", help="output stem")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--precision", type=int, default=2, help="decimals for MPL columns")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: $TOPOFORGE_JOBS or 1)")

    ap = argparse.ArgumentParser(prog="topoforge", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=_version())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="build a named topology")
    p.add_argument("spec")
    p.add_argument("-o", "--out", help="output stem for .edges/.json/.dot")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("metrics", parents=[common], help="diameter, MPL, girth")
    p.add_argument("graph")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bounds", parents=[common], help="Moore-type lower bounds")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("--graph", help="report gaps for this graph instead")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("optimize", parents=[common], help="simulated annealing search")
    _add_sa_args(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("pipeline", parents=[common], help="optimize, then compare against ring/torus")
    _add_sa_args(p)
    p.add_argument("--params", default="default", choices=sorted(netsim.PRESETS))
    p.add_argument("--msg-size", type=int, default=1 << 20)
    p.add_argument("--routing", default="lowest", choices=TIE_BREAKS)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("bisection", parents=[common], help="bisection width")
    p.add_argument("graph")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--heuristic", action="store_true")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bisection)

    p = sub.add_parser("route", parents=[common], help="shortest-path routing table")
    p.add_argument("graph")
    p.add_argument("--dump", action="store_true", help="emit the next-hop matrix as CSV")
    p.add_argument("--pair", type=int, nargs=2, metavar=("S", "D"), default=(0, 1))
    p.add_argument("--routing", default="lowest", choices=TIE_BREAKS)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("loads", parents=[common], help="directed link loads")
    p.add_argument("graph")
    p.add_argument("--pattern", default="alltoall", choices=["alltoall"])
    p.add_argument("--routing", default="lowest", choices=TIE_BREAKS)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_loads)

    p = sub.add_parser("simulate", parents=[common], help="analytic benchmark comparison")
    p.add_argument("--roster", nargs="+", required=True, help="graph files, directories or specs")
    p.add_argument("--benchmarks", default=",".join(netsim.BENCHMARKS))
    p.add_argument("--msg-size", type=int, default=1 << 20)
    p.add_argument("--params", default="default", choices=sorted(netsim.PRESETS))
    p.add_argument("--routing", default="lowest", choices=TIE_BREAKS)
    p.add_argument("--scatter", help="also write (mpl, ratio) pairs to this CSV")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", parents=[common], help="metrics and bounds table")
    p.add_argument("roster", nargs="*", help="graph files, directories or specs")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz rendering")
    p.add_argument("graph")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = ap.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except (ParseError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except TooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except (TopologyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
