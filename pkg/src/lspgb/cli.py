"""Command line: ``lspgb {gen,run,verify,ratio-table}``.

Exit codes: 0 success, 1 usage error, 2 data or config error, 3 property violation.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .algorithms import bounds
from .dataio import ConfigError, DataError, parse_experiment_config, write_edge_list, write_results_csv
from .generators import BA_M, ER_P, WS_P, WS_RING_DEGREE, generate_graph
from .harness import format_aggregate, run_experiment
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _eps_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lspgb", description="Parallel submodular maximization benchmarks.")
    p.add_argument("--seed", type=int, default=None, help="global seed (default 0)")
    p.add_argument("--threads", type=_positive_int, default=None, help="oracle worker threads")
    p.add_argument("--out", default=None, help="output path")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random graph and write it as an edge list")
    g.add_argument("--model", choices=("er", "ws", "ba"), required=True)
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--p", type=float, default=None, help=f"ER edge / WS rewiring probability "
                                                         f"(defaults {ER_P} / {WS_P})")
    g.add_argument("--m", type=int, default=BA_M, help="BA edges per new node")
    g.add_argument("--ring", type=int, default=WS_RING_DEGREE, help="WS ring degree")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("--config", required=True)
    r.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS)
    r.add_argument("--out", default=argparse.SUPPRESS, help="CSV path (overrides the config)")

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--trials", type=_positive_int, default=None)
    v.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    v.add_argument("--quiet", action="store_true", help="print only the summary line")

    t = sub.add_parser("ratio-table", help="print approximation ratios for each epsilon")
    t.add_argument("--eps", type=_eps_list, required=True, help="comma-separated epsilons")
    return p


def ratio_rows(eps_values) -> list[tuple[float, float, float, float]]:
    """``(eps, ls bound, low-adaptivity bound, 1 - 1/e - eps)`` per epsilon."""
    rows = []
    for eps in eps_values:
        if not 0 < eps < 0.5:
            raise UsageError(f"epsilon {eps} outside (0, 1/2)")
        rows.append((eps, bounds.ls_ratio_bound(eps), bounds.low_adap_ratio_bound(eps),
                     bounds.boost_ratio(eps)))
    return rows


def cmd_gen(args) -> int:
    if args.out is None:
        raise UsageError("gen: --out is required")
    seed = 0 if args.seed is None else args.seed
    params = {}
    if args.model == "er":
        params["p"] = ER_P if args.p is None else args.p
    elif args.model == "ws":
        params.update(ring=args.ring, p=WS_P if args.p is None else args.p)
    else:
        params["m"] = args.m
    try:
        graph = generate_graph(args.model, args.n, seed=seed, **params)
    except ValueError as exc:
        raise UsageError(f"gen: {exc}") from exc
    write_edge_list(graph, args.out)
    print(f"model={args.model} n={graph.n} edges={graph.num_edges} seed={seed} -> {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = parse_experiment_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    out = args.out or cfg.output

    def progress(row):
        logging.getLogger("lspgb").info("%s k=%d rep=%d value=%.6g queries=%d rounds=%d%s",
                                        row.algorithm, row.k, row.rep, row.value, row.queries,
                                        row.rounds, " FAILED" if row.failed else "")

    table = run_experiment(cfg, threads=args.threads, progress=progress)
    print(format_aggregate(table))
    if out:
        write_results_csv(table, out, timing=cfg.timing)
        print(f"wrote {len(table.rows)} rows to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.trials, 0 if args.seed is None else args.seed)
    if not args.quiet:
        for line in report.lines:
            print(line)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_ratio_table(args) -> int:
    rows = ratio_rows(args.eps)
    print(f"{'epsilon':>10}{'linear_seq':>14}{'low_adap':>14}{'1-1/e-eps':>14}")
    for eps, ls, low, boost in rows:
        print(f"{eps:>10g}{ls:>14.6f}{low:>14.6f}{boost:>14.6f}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "verify": cmd_verify, "ratio-table": cmd_ratio_table}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DataError) as exc:
        print(f"lspgb: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
