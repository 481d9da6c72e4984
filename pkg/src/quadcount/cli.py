"""Command-line entry point: ``quadcount <command> [options]``.

Reports go to stdout (or to ``--output``); the effective configuration and
per-phase wall-times go to stderr so reports stay byte-identical across runs
and thread counts.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds as B
from . import report as R
from .codes import ORBITS3, ORBITS4
from .comm import comm_costs, comm_tsv
from .engine import default_workers
from .errors import ArgumentError, QuadcountError
from .four import compute_profiles
from .graph import read_graph
from .oracle import DEFAULT_GUARD, brute_force_profiles
from .sparsify import run_trials

DEFAULT_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _grid(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not vals or any(not 0 < v <= 1 for v in vals):
        raise argparse.ArgumentTypeError("grid values must lie in (0, 1]")
    return vals


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="edge-list file")
    common.add_argument("--output", help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("tsv", "json"), default="json")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: $QUADCOUNT_THREADS or 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timings", action="store_true",
                        help="also embed per-phase wall-times in JSON reports")

    p = _Parser(prog="quadcount", description="Exact and sampled 4-vertex subgraph profiles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("profiles", parents=[common], help="exact local and global profiles")
    s.add_argument("--emit-orbits", action="store_true", help="add the 20 orbit columns")
    s.add_argument("--emit-comm", action="store_true", help="also write per-vertex comm TSV")

    s = sub.add_parser("oracle", parents=[common], help="brute-force enumeration")
    s.add_argument("--emit-orbits", action="store_true")
    s.add_argument("--guard", type=int, default=DEFAULT_GUARD)

    s = sub.add_parser("verify", parents=[common], help="diff pipeline against brute force")
    s.add_argument("--guard", type=int, default=DEFAULT_GUARD)

    s = sub.add_parser("sparsify", parents=[common], help="sampled global estimate")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--trials", type=_positive_int, default=1)
    s.add_argument("--with-truth", action="store_true", help="compute exact N and report ratios")

    s = sub.add_parser("bounds", parents=[common], help="concentration bounds")
    s.add_argument("--mode", choices=("readk", "kimvu", "compare"), default="compare")
    s.add_argument("--grid", type=_grid, default=list(DEFAULT_GRID))
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--delta", type=float, default=0.1)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--c", type=float, default=1.0, help="constant in the hypothesis checks")
    s.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    s.add_argument("--k10", type=int, default=None, help="override the measured k10")
    s.add_argument("--k", type=str, default=None, help="override k1..k10, comma separated")
    s.add_argument("--n10", type=int, default=None, help="override the exact N10")
    s.add_argument("--trials", type=int, default=0,
                   help="sampling trials per grid point for the measured column")

    s = sub.add_parser("comm", parents=[common], help="histogram versus naive payload")
    return p


# ---------------------------------------------------------------- commands


class _Out:
    """Collects named report files; writes them under --output or to stdout."""

    def __init__(self, args):
        self.args = args
        self.files = []

    def add(self, suffix, text):
        self.files.append((suffix, text))

    def flush(self, stdout):
        if self.args.output is None:
            for _, text in self.files:
                stdout.write(text)
            return
        base = Path(self.args.output)
        if len(self.files) == 1:
            base.write_text(self.files[0][1])
            return
        for suffix, text in self.files:
            Path(f"{base}{suffix}").write_text(text)


def _workers(args):
    return default_workers() if args.threads is None else args.threads


def _cmd_profiles(args, g, out, log):
    res = compute_profiles(g, workers=_workers(args), schedule_seed=args.seed or None)
    log["timings"] = {k: round(v, 6) for k, v in res.timings.items()}
    rec = R.pipeline_record(res)
    if args.timings:
        rec["timings"] = log["timings"]
    orbits = res.orbits if args.emit_orbits else None
    if args.format == "json":
        rec["local"] = _local_json(g, res.profile, orbits)
        rec["local3"] = {str(g.labels[v]): res.local3[v].tolist() for v in range(g.n)}
        out.add(".json", R.dumps(rec))
    else:
        out.add(".global.json", R.dumps(rec))
        out.add(".local.tsv", R.local_tsv(g, res.profile, orbits))
        out.add(".local3.tsv", R.local3_tsv(g, res.local3))
    if args.emit_comm:
        out.add(".comm.tsv", comm_tsv(g, comm_costs(g, workers=_workers(args))))
    return 0


def _local_json(g, profile, orbits):
    rows = {}
    for v in range(g.n):
        row = {"profile": profile[v].tolist()}
        if orbits is not None:
            row["orbits"] = orbits[v].tolist()
        rows[str(g.labels[v])] = row
    return rows


def _cmd_oracle(args, g, out, log):
    res = brute_force_profiles(g, guard=args.guard, workers=_workers(args))
    rec = R.oracle_record(g, res)
    orbits = res.orbits if args.emit_orbits else None
    if args.format == "json":
        rec["local"] = _local_json(g, res.profile, orbits)
        rec["local3"] = {str(g.labels[v]): res.local3[v].tolist() for v in range(g.n)}
        out.add(".json", R.dumps(rec))
    else:
        out.add(".global.json", R.dumps(rec))
        out.add(".local.tsv", R.local_tsv(g, res.profile, orbits))
        out.add(".local3.tsv", R.local3_tsv(g, res.local3))
    return 0


def verify_graph(g, workers=1, schedule_seed=None, guard=DEFAULT_GUARD):
    """List of human-readable differences between the pipeline and brute force."""
    res = compute_profiles(g, workers=workers, schedule_seed=schedule_seed)
    ora = brute_force_profiles(g, guard=guard)
    diffs = []
    for name, a, b, labels in (("orbit", res.orbits, ora.orbits, ORBITS4),
                               ("local3", res.local3, ora.local3, ORBITS3)):
        for v, c in zip(*np.nonzero(a != b)):
            diffs.append(f"vertex {g.labels[v]} {name} {labels[c]}: "
                         f"pipeline {a[v, c]} oracle {b[v, c]}")
    if list(res.global4.N) != ora.global4:
        diffs.append(f"global4: pipeline {list(res.global4.N)} oracle {ora.global4}")
    if res.global3.as_list() != ora.global3:
        diffs.append(f"global3: pipeline {res.global3.as_list()} oracle {ora.global3}")
    return diffs


def _cmd_verify(args, g, out, log):
    diffs = verify_graph(g, workers=_workers(args), schedule_seed=args.seed or None,
                         guard=args.guard)
    if args.format == "json":
        out.add(".json", R.dumps({"n": g.n, "m": g.m, "result": "MISMATCH" if diffs else "MATCH",
                                  "differences": diffs}))
    else:
        out.add(".txt", "".join(d + "\n" for d in diffs) + ("MISMATCH\n" if diffs else "MATCH\n"))
    return 1 if diffs else 0


def _cmd_sparsify(args, g, out, log):
    truth = None
    if args.with_truth:
        truth = compute_profiles(g, workers=_workers(args)).global4.N
    rep = run_trials(g, args.p, trials=args.trials, seed=args.seed, truth=truth,
                     workers=_workers(args))
    rep["n"], rep["m"] = g.n, g.m
    if args.format == "json":
        out.add(".json", R.dumps(rep))
    else:
        cols = ["trial", "seed", "sampled_edges", *[f"X{i}" for i in range(11)]]
        lines = ["\t".join(cols)]
        for t, (sd, me, x) in enumerate(zip(rep["trial_seeds"], rep["sampled_edges"], rep["X"])):
            lines.append("\t".join([str(t), str(sd), str(me), *(repr(float(v)) for v in x)]))
        out.add(".tsv", "\n".join(lines) + "\n")
    return 0


def _maxima(args, g):
    if args.k is not None:
        return B.edge_share_maxima(g, override=[int(x) for x in args.k.split(",")])
    if args.k10 is not None:
        return B.edge_share_maxima(g, override=[0] * 9 + [args.k10])
    return B.edge_share_maxima(g, guard=args.guard, workers=_workers(args))


def _cmd_bounds(args, g, out, log):
    maxima = _maxima(args, g)
    if args.n10 is not None:
        N = [0] * 10 + [args.n10]
        full = None
    else:
        N = list(compute_profiles(g, workers=_workers(args)).global4.N)
        full = B.readk_full_profile_min_p(maxima.k, N, args.epsilon, args.delta, g.n)
    k10, N10 = maxima.k10, N[10]
    m = max(g.m, 2)
    rec = {"n": g.n, "m": g.m, "k": list(maxima.k), "k_manual": maxima.manual, "N10": N10,
           "mode": args.mode, "epsilon": args.epsilon, "delta": args.delta, "gamma": args.gamma}

    if args.mode == "readk":
        rec["readk_min_p"] = B.readk_min_p(k10, N10, args.epsilon, args.delta)
        rec["eps_readk"] = {str(p): B.readk_epsilon(p, args.delta, k10, N10) for p in args.grid}
        rec["eps_readk_kl"] = {str(p): B.readk_epsilon(p, args.delta, k10, N10, kl=True)
                               for p in args.grid}
        if full is not None:
            rec["full_profile"] = {
                "thresholds": {f"Y{i}": t for i, t in full.thresholds.items()},
                "vacuous": {f"Y{i}": v for i, v in full.vacuous.items()},
                "n0_ceiling": full.n0_ceiling, "n0": N[0],
                "error_scale": full.error_scale,
            }
        out.add(".json", R.dumps(rec))
        return 0
    if args.mode == "kimvu":
        rec["eps_kimvu"] = {str(p): B.kimvu_epsilon(p, m, args.gamma, k10, N10) for p in args.grid}
        out.add(".json", R.dumps(rec))
        return 0

    measured = None
    if args.trials > 0:
        measured = {}
        for p in args.grid:
            rep = run_trials(g, p, trials=args.trials, seed=args.seed, workers=_workers(args))
            measured[p] = B.measured_error([x[10] for x in rep["X"]], N10, args.delta)
    rows = B.bounds_grid(args.grid, maxima, N, args.delta, args.gamma, m, measured)
    if args.format == "tsv":
        out.add(".tsv", B.grid_tsv(rows))
    else:
        rec["grid"] = [dict(zip(B.GRID_COLUMNS, r)) for r in rows]
        p0 = args.p if args.p is not None else args.grid[-1]
        rec["compare"] = B.compare_bounds(
            B.BoundQuery(epsilon=args.epsilon, delta=args.delta, p=p0, gamma=args.gamma, m=m),
            maxima, N, c=args.c)
        out.add(".json", R.dumps(rec))
    return 0


def _cmd_comm(args, g, out, log):
    costs = comm_costs(g, workers=_workers(args))
    if args.format == "tsv":
        out.add(".tsv", comm_tsv(g, costs))
    else:
        rec = {"n": g.n, "m": g.m, "totals": costs.totals(),
               "vertices": {str(g.labels[v]): {"degree": int(costs.degree[v]),
                                               "h_v": int(costs.h_v[v]),
                                               "naive_units": int(costs.naive[v]),
                                               "histogram_units": int(costs.histogram[v])}
                            for v in range(g.n)}}
        out.add(".json", R.dumps(rec))
    return 0


COMMANDS = {
    "profiles": _cmd_profiles, "oracle": _cmd_oracle, "verify": _cmd_verify,
    "sparsify": _cmd_sparsify, "bounds": _cmd_bounds, "comm": _cmd_comm,
}


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if v is not None}
    cfg["threads"] = _workers(args)
    return cfg


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv`` and execute; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        log = {"config": _config(args)}
        t0 = time.perf_counter()
        g = read_graph(args.input)
        out = _Out(args)
        code = COMMANDS[args.command](args, g, out, log)
        out.flush(stdout)
        log["wall_time"] = round(time.perf_counter() - t0, 6)
        stderr.write("quadcount: " + json.dumps(log, sort_keys=True) + "\n")
        return code
    except QuadcountError as exc:
        stderr.write(f"quadcount: error: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main():
    sys.exit(run())
