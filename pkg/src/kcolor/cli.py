"""Command-line surface: generate, solve, benchmark, study, diagnose.

Exit codes: 0 success, 2 usage or input error, 1 internal failure. Every
randomized command takes an explicit ``--seed`` (default 0) and is
reproducible byte-for-byte given the same arguments.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import instances
from .coloring import HardColoring, k_d, loss_hard, write_hard_coloring
from .gcn import TrainConfig
from .generators import (
    DegreeSequence,
    FamilySpec,
    gen_erdos_renyi,
    gen_family,
    gen_max_planar,
    gen_regular,
    gen_replica,
)
from .graph import Graph, parse_graph, write_dimacs, write_edge_list
from .experiments import (
    ALGORITHMS,
    GraphSpec,
    case_study,
    oversmoothing_threshold,
    parse_config,
    run_trials,
    solve_with,
    summarize_records,
    write_records,
)

__all__ = ["main"]


class InputError(Exception):
    """User-facing input problem: exit code 2."""


def _read_graph(path: str, fmt: str, drop_isolated: bool) -> Graph:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    if fmt == "auto":
        fmt = "dimacs" if p.suffix == ".col" else "edge-list"
    try:
        with open(p) as fh:
            return parse_graph(fh, fmt=fmt, drop_isolated=drop_isolated)
    except ValueError as exc:
        raise InputError(f"cannot parse {path}: {exc}") from exc


def _train_config(args) -> TrainConfig:
    kwargs = {}
    for attr, name in [
        ("depth", "depth"),
        ("features", "features"),
        ("init", "init"),
        ("loss", "loss_kind"),
        ("power", "loss_power"),
        ("lr", "learning_rate"),
        ("dropout", "dropout"),
        ("max_epochs", "max_epochs"),
        ("patience", "patience"),
        ("weight_decay", "weight_decay"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            kwargs[name] = value
    try:
        return TrainConfig(**kwargs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _add_gcn_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--depth", type=int, help="number of convolution layers (0-4)")
    p.add_argument("--features", type=int, help="feature width")
    p.add_argument("--init", choices=["orthogonal", "identity", "normal"])
    p.add_argument("--loss", choices=["standard", "degree-power", "triangle"])
    p.add_argument("--power", type=int, help="degree-power exponent")
    p.add_argument("--lr", type=float, help="learning rate")
    p.add_argument("--dropout", type=float)
    p.add_argument("--max-epochs", dest="max_epochs", type=int)
    p.add_argument("--patience", type=int)
    p.add_argument("--weight-decay", dest="weight_decay", type=float)


def cmd_gen(args) -> int:
    fam = args.family
    seed = args.seed
    try:
        if fam == "cycle":
            g = gen_family(FamilySpec("cycle", (args.n,)))
        elif fam == "complete":
            g = gen_family(FamilySpec("complete", (args.n,)))
        elif fam == "grid":
            if not args.dims:
                raise InputError("grid needs --dims, e.g. --dims 14,14")
            g = gen_family(FamilySpec("grid", tuple(int(x) for x in args.dims.split(","))))
        elif fam == "hypercube":
            g = gen_family(FamilySpec("grid", tuple([2] * args.n)))
        elif fam in ("hex", "tri"):
            g = gen_family(FamilySpec(fam, (args.rows, args.cols)))
        elif fam == "er":
            g = gen_erdos_renyi(args.n, args.d, seed)
        elif fam == "regular":
            g = gen_regular(args.n, args.r, seed)
        elif fam == "max-planar":
            g = gen_max_planar(args.n, seed)
        elif fam == "replica":
            if not args.like:
                raise InputError("replica needs --like GRAPHFILE")
            source = _read_graph(args.like, args.format, False)
            g = gen_replica(DegreeSequence(tuple(source.degree)), seed)
        elif fam == "instance":
            if not args.name:
                raise InputError("instance needs --name, e.g. --name myciel5")
            g = instances.load_instance(args.name)
        else:  # pragma: no cover - argparse restricts choices
            raise InputError(f"unknown family {fam}")
    except (ValueError, FileNotFoundError) as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        with open(args.out, "w") as fh:
            if args.out.endswith(".col"):
                write_dimacs(g, fh)
            else:
                write_edge_list(g, fh)
    print(f"n={g.n} m={g.m}")
    return 0


def cmd_solve(args) -> int:
    if args.algo not in ALGORITHMS:
        raise InputError(f"unknown algorithm {args.algo!r}")
    g = _read_graph(args.graph, args.format, args.drop_isolated)
    if args.k < 1:
        raise InputError("k must be >= 1")
    cfg = _train_config(args)
    if args.trace and args.algo not in ("mod-gcn", "full-gcn"):
        raise InputError("--trace is only available for the gcn solvers")
    if args.trace:
        from .train import full_gcn, mod_gcn, write_trace

        runner = mod_gcn if args.algo == "mod-gcn" else full_gcn
        result = runner(g, args.k, replace(cfg, seed=args.seed))
        coloring = result.hard
        with open(args.trace, "w") as fh:
            write_trace(result.trace, fh)
    else:
        coloring = solve_with(args.algo, g, args.k, args.seed, cfg)
    out = args.out or (args.graph + ".coloring")
    with open(out, "w") as fh:
        write_hard_coloring(coloring, fh)
    loss = loss_hard(g, coloring)
    print(f"loss={loss} proper={str(loss == 0).lower()} k={args.k} seed={args.seed}")
    return 0


_BENCH_KEYS = {"algo", "family", "n", "d", "r", "k", "trials", "seed", "args", "name"}


def cmd_bench(args) -> int:
    path = Path(args.config)
    if not path.exists():
        raise InputError(f"no such file: {args.config}")
    try:
        conf = parse_config(path.read_text())
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    unknown = set(conf) - _BENCH_KEYS
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("algo", "family", "trials", "seed"):
        if key not in conf:
            raise InputError(f"missing config key {key!r}")
    algos = [a.strip() for a in conf["algo"].split(",")]
    for a in algos:
        if a not in ALGORITHMS:
            raise InputError(f"unknown algorithm {a!r}")
    family = conf["family"]
    ns = [int(x) for x in conf.get("n", "0").split(",")]
    ds = [float(x) for x in conf.get("d", conf.get("r", "0")).split(",")]
    trials = int(conf["trials"])
    base_seed = int(conf["seed"])
    records = []
    try:
        for algo in algos:
            for n in ns:
                for d in ds:
                    if conf.get("k", "auto") == "auto":
                        k = k_d(d) + 1 if d > 0 else 1
                    else:
                        k = int(conf["k"])
                    spec = GraphSpec(family=family, n=n, d=d, name=conf.get("name", ""))
                    records.extend(
                        run_trials(algo, spec, k, trials, base_seed, jobs=args.jobs)
                    )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        with open(args.out, "w") as fh:
            write_records(records, fh)
    else:
        write_records(records, sys.stdout)
    if args.summary:
        csv_text, aligned = summarize_records(records)
        if args.summary.endswith(".csv"):
            Path(args.summary).write_text(csv_text)
        else:
            Path(args.summary).write_text(aligned)
        print(aligned, file=sys.stderr, end="")
    return 0


def cmd_case_study(args) -> int:
    if args.algo not in ALGORITHMS:
        raise InputError(f"unknown algorithm {args.algo!r}")
    if args.instance:
        try:
            g = instances.load_instance(args.instance)
        except (ValueError, FileNotFoundError) as exc:
            raise InputError(str(exc)) from exc
        name = args.instance
    elif args.graph:
        g = _read_graph(args.graph, args.format, args.drop_isolated)
        name = Path(args.graph).stem
    else:
        raise InputError("need a graph file or --instance NAME")
    if ":" in args.k_range:
        lo, hi = args.k_range.split(":")
        ks = list(range(int(lo), int(hi) + 1))
    else:
        ks = [int(x) for x in args.k_range.split(",")]
    cfg = _train_config(args)
    row = case_study(g, args.algo, ks, args.runs, args.seed, name=name, cfg=cfg)
    if args.witness_dir:
        wdir = Path(args.witness_dir)
        wdir.mkdir(parents=True, exist_ok=True)
        for k, coloring in row.witnesses.items():
            with open(wdir / f"{name}.k{k}.coloring", "w") as fh:
                write_hard_coloring(coloring, fh)
    chi = row.chi if row.chi is not None else "none"
    chi_star = row.chi_star if row.chi_star is not None else "none"
    print("name,order,size,k,best_loss,chi,chi_star")
    print(f"{row.name},{row.order},{row.size},{row.k},{row.best_loss},{chi},{chi_star}")
    return 0


def cmd_oversmooth(args) -> int:
    cfg = _train_config(args)
    depth = args.depth if args.depth is not None else 2
    dropout = args.dropout if args.dropout is not None else 0.0
    try:
        threshold = oversmoothing_threshold(args.n, depth, dropout, args.seed, cfg=cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rendered = threshold if threshold is not None else "none"
    if args.out:
        path = Path(args.out)
        row = f"{args.n},{depth},{dropout},{rendered}\n"
        if path.exists():
            with open(path, "a") as fh:
                fh.write(row)
        else:
            path.write_text("n,depth,dropout,density\n" + row)
    print(f"threshold={rendered}")
    return 0


def cmd_grad_check(args) -> int:
    from .gradcheck import run_battery

    results = run_battery(seed=args.seed)
    worst = 0.0
    for r in results:
        print(f"{r.label}: max_rel_error={r.max_rel_error:.3e}")
        worst = max(worst, r.max_rel_error)
    print(f"worst={worst:.3e} tolerance=1e-4")
    return 0 if worst <= 1e-4 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kcolor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph and write it out")
    p.add_argument(
        "--family",
        required=True,
        choices=[
            "cycle", "complete", "grid", "hypercube", "hex", "tri",
            "er", "regular", "max-planar", "replica", "instance",
        ],
    )
    p.add_argument("-n", type=int, default=0)
    p.add_argument("-r", type=int, default=0, help="degree for regular graphs")
    p.add_argument("-d", type=float, default=0.0, help="average degree for er")
    p.add_argument("--dims", help="comma-separated grid dimensions")
    p.add_argument("--rows", type=int, default=1)
    p.add_argument("--cols", type=int, default=1)
    p.add_argument("--like", help="source graph file for replica degrees")
    p.add_argument("--name", help="named instance (myciel5, queen7-7, jean, ...)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="auto", choices=["auto", "dimacs", "edge-list"])
    p.add_argument("--out", help="output path (.col writes DIMACS, else edge list)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="color a graph file")
    p.add_argument("graph")
    p.add_argument("--algo", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="coloring output path")
    p.add_argument("--format", default="auto", choices=["auto", "dimacs", "edge-list"])
    p.add_argument("--drop-isolated", action="store_true")
    p.add_argument("--trace", help="CSV path for the per-epoch loss trace (gcn solvers)")
    _add_gcn_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a trial battery from a config file")
    p.add_argument("config")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--summary", help="summary table path (.csv for CSV, else aligned text)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("case-study", help="chromatic-bound table row for one graph")
    p.add_argument("graph", nargs="?")
    p.add_argument("--instance", help="named instance instead of a file")
    p.add_argument("--algo", required=True)
    p.add_argument("--k-range", dest="k_range", required=True, help="lo:hi or comma list")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--witness-dir", help="directory for best colorings per k")
    p.add_argument("--format", default="auto", choices=["auto", "dimacs", "edge-list"])
    p.add_argument("--drop-isolated", action="store_true")
    _add_gcn_flags(p)
    p.set_defaults(func=cmd_case_study)

    p = sub.add_parser("oversmooth", help="density threshold search for uniformity collapse")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="append the result as a CSV row (n,depth,dropout,density)")
    _add_gcn_flags(p)
    p.set_defaults(func=cmd_oversmooth)

    p = sub.add_parser("grad-check", help="verify gradients against finite differences")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_grad_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
