"""Command-line front end: ``rwmeet generate|analyze|simulate|sweep|oracle``.

Node ids on the command line and in CSV output are 1-based unless
``--zero-based`` is given; edge-list files are always 0-based. Every CSV
starts with a ``#`` line recording the tool version, the full configuration
and the RNG family, followed by a header row.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from ._rng import RNG_FAMILY, derive_seed
from .errors import DomainError, GenerationError, ParityWarning
from .experiments import DEFAULT_RUNS, CellResult, build_graph, pick_partners, run_cell
from .generators import DEFAULT_MAX_RETRIES, params_for_target_degree
from .graph import GraphStats, check_assumptions, compute_stats, load_edge_list, save_edge_list
from .meeting import MeetingAnalysis, analyze_pairs, first_meeting_time_spectral, principal_component
from .oracle import PAIR_MAX_NODES, ProductChain
from .simulation import DEFAULT_T_MAX, SimulationReport, monte_carlo_meeting
from .spectral import decompose

SEED_ENV = "RWMEET_SEED"


def fmt(v) -> str:
    """Numbers with 9 significant digits in positional notation."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return np.format_float_positional(float(v), precision=9, unique=False,
                                          fractional=False, trim="-")
    s = str(v)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


class CsvWriter:
    def __init__(self, stream, command: str, config: dict):
        self.stream = stream
        meta = json.dumps(config, sort_keys=True, default=str)
        stream.write(f"# rwmeet {__version__} {command} rng={RNG_FAMILY} config={meta}\n")

    def header(self, cols):
        self.stream.write(",".join(cols) + "\n")

    def row(self, values):
        self.stream.write(",".join(fmt(v) for v in values) + "\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw else 1


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _add_common(p):
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default: ${SEED_ENV} or 1)")
    p.add_argument("--zero-based", action="store_true", help="node ids on the command line and in output are 0-based")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def _add_source(p, n=1000):
    p.add_argument("--graph", help="edge-list file (0-based ids); overrides --model")
    p.add_argument("--model", choices=["ba", "er"], default="ba")
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--davg", type=float, default=6.0)
    p.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _offset(args) -> int:
    return 0 if args.zero_based else 1


def _load_graph(args):
    if args.graph:
        with open(args.graph) as fh:
            return load_edge_list(fh.read())
    params = params_for_target_degree(args.model, args.n, args.davg, _seed(args), args.max_retries)
    return params.generate()


def _node(args, g, value, name):
    v = value - _offset(args)
    if not 0 <= v < g.n:
        raise DomainError(f"--{name} {value} is out of range for n={g.n}")
    return v


def _config(args, **extra):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",)}
    cfg["seed"] = _seed(args)
    cfg.update(extra)
    return cfg


def cmd_generate(args) -> int:
    params = params_for_target_degree(args.model, args.n, args.davg, _seed(args), args.max_retries)
    g = params.generate()
    with open(args.graph_out, "w") as fh:
        fh.write(save_edge_list(g))
    out, close = _open_out(args.out)
    try:
        w = CsvWriter(out, "generate", _config(args, m=params.m, p=params.p))
        w.header(GraphStats.CSV_HEADER)
        w.row(compute_stats(g).csv_row())
    finally:
        if close:
            out.close()
    return 0


def _require_meetable(g):
    report = check_assumptions(g)
    if not report.connected:
        raise DomainError("graph is disconnected; meeting analysis needs a connected graph")
    if report.bipartite:
        raise DomainError("graph is bipartite; walkers on opposite sides never meet "
                          "and the meeting formula is undefined")


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    _require_meetable(g)
    a = _node(args, g, args.a, "a")
    if args.b == "sweep":
        bs = pick_partners(g.n, a, args.count, _seed(args))
    else:
        bs = [_node(args, g, b, "b") for b in _int_list(args.b)]
    dec = decompose(g)
    stats = compute_stats(g)
    rows = analyze_pairs(dec, stats, [(a, b) for b in bs])
    out, close = _open_out(args.out)
    try:
        w = CsvWriter(out, "analyze", _config(args))
        w.header(MeetingAnalysis.CSV_HEADER)
        for r in rows:
            w.row(r.csv_row(_offset(args)))
    finally:
        if close:
            out.close()
    return 0


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    a = _node(args, g, args.a, "a")
    b = _node(args, g, args.b, "b")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = monte_carlo_meeting(g, a, b, args.runs, _seed(args), args.t_max)
    off = _offset(args)
    for wmsg in caught:
        if issubclass(wmsg.category, ParityWarning):
            print(f"warning: nodes {args.a} and {args.b} are on opposite sides of a bipartite "
                  "graph; the walkers can never meet", file=sys.stderr)
        else:
            print(f"warning: {wmsg.message}", file=sys.stderr)
    cfg = _config(args)
    out, close = _open_out(args.out)
    try:
        w = CsvWriter(out, "simulate", cfg)
        w.header(SimulationReport.CSV_HEADER)
        w.row(report.csv_row(off))
    finally:
        if close:
            out.close()
    if args.freq_out:
        with open(args.freq_out, "w", newline="") as fh:
            w = CsvWriter(fh, "simulate-frequency", cfg)
            w.header(("node", "frequency", "degree"))
            for c, k in report.frequency_rows():
                w.row((c + off, k, float(g.degrees[c])))
    return 0


def _sweep_job(job):
    model, n, davg, seed, pairs, runs, a, t_max = job
    return run_cell(model, n, davg, seed, pairs=pairs, runs=runs, a=a, t_max=t_max)


def cmd_sweep(args) -> int:
    seed = _seed(args)
    a = args.a - _offset(args)
    jobs = [(model, n, davg, seed, args.pairs, args.runs, a, args.t_max)
            for n in _int_list(args.n) for davg in _float_list(args.davg)
            for model in [m.upper() for m in args.models.split(",")]]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            cells = list(pool.map(_sweep_job, jobs))
    else:
        cells = [_sweep_job(j) for j in jobs]
    cells.sort(key=lambda c: (c.n, c.d_avg_target, c.model))
    out, close = _open_out(args.out)
    try:
        w = CsvWriter(out, "sweep", _config(args))
        w.header(CellResult.CSV_HEADER)
        for c in cells:
            w.row(c.csv_row())
    finally:
        if close:
            out.close()
    if args.pairs_out:
        off = _offset(args)
        with open(args.pairs_out, "w", newline="") as fh:
            w = CsvWriter(fh, "sweep-pairs", _config(args))
            w.header(("n", "d_avg", "model", "a", "b", "mu_spectral", "mu_sim", "std_err",
                      "truncated", "eps", "eps_prime", "principal"))
            for c in cells:
                for p in c.pairs:
                    w.row((c.n, c.d_avg_target, c.model, p.a + off, p.b + off, p.mu_spectral,
                           p.mu_sim, p.std_error, p.truncated, p.eps, p.eps_prime, c.principal))
    failed = [c for c in cells if not c.ok]
    for c in failed:
        print(f"cell {c.model} n={c.n} d_avg={c.d_avg_target:g} failed: {c.error}", file=sys.stderr)
    return 1 if failed else 0


def cmd_oracle(args) -> int:
    g = _load_graph(args)
    if g.n > args.cap:
        raise DomainError(f"n={g.n} exceeds the oracle cap {args.cap}")
    a = _node(args, g, args.a, "a")
    b = _node(args, g, args.b, "b")
    chain = ProductChain(g, max_nodes=args.cap)
    exact = chain.meeting_time(a, b)
    stats = compute_stats(g)
    report = check_assumptions(g)
    spectral = math.nan
    if report.ok:
        spectral = first_meeting_time_spectral(decompose(g), stats, a, b)
    gap = abs(spectral - exact) / exact if math.isfinite(exact) else math.nan
    off = _offset(args)
    out, close = _open_out(args.out)
    try:
        w = CsvWriter(out, "oracle", _config(args))
        w.header(("a", "b", "exact", "spectral", "relative_gap", "principal"))
        w.row((a + off, b + off, exact, spectral, gap, principal_component(stats)))
    finally:
        if close:
            out.close()
    if args.nodes_out and math.isfinite(exact):
        dist = chain.meeting_node_distribution(a, b)
        share = g.degrees ** 2 / stats.s2
        with open(args.nodes_out, "w", newline="") as fh:
            w = CsvWriter(fh, "oracle-nodes", _config(args))
            w.header(("node", "probability", "degree_sq_share"))
            for c in range(g.n):
                w.row((c + off, float(dist[c]), float(share[c])))
    if not math.isfinite(exact):
        print(f"warning: walkers from {args.a} and {args.b} never meet", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwmeet", description="First meeting times of two random walkers.")
    parser.add_argument("--version", action="version", version=f"rwmeet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a BA or ER graph and print its degree statistics")
    p.add_argument("--model", choices=["ba", "er"], default="ba")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--davg", type=float, default=6.0)
    p.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)
    p.add_argument("--graph-out", required=True, help="edge-list file to write")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="spectral meeting times, principal component and error bound")
    _add_source(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", default="sweep", help="comma-separated partner nodes, or 'sweep'")
    p.add_argument("--count", type=int, default=10, help="partners drawn for --b sweep")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo first meeting times")
    _add_source(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    p.add_argument("--t-max", type=int, default=DEFAULT_T_MAX)
    p.add_argument("--freq-out", help="CSV of meeting counts per node")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="spectral vs simulation over models, sizes and degrees")
    p.add_argument("--models", default="ba,er")
    p.add_argument("--n", default="1000", help="comma-separated node counts")
    p.add_argument("--davg", default="4,6,8,10", help="comma-separated target average degrees")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--pairs", type=int, default=10, help="partners b per cell")
    p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    p.add_argument("--t-max", type=int, default=DEFAULT_T_MAX)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pairs-out", help="CSV with one row per (cell, b)")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exact meeting time by absorbing-chain solve (small graphs)")
    _add_source(p, n=30)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--cap", type=int, default=PAIR_MAX_NODES)
    p.add_argument("--nodes-out", help="CSV of exact meeting-node probabilities")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
