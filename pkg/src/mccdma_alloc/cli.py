"""Command-line entry point: ``mccdma-alloc {sweep,compare,oracle-check,gen-config}``.

Exit codes: 0 success, 1 validation/configuration/I-O failure, 2 regression
guard tripped (improved mean below original mean at some sweep point).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .allocation import AllocationError
from .experiment import (
    DEFAULT_CONFIG,
    ConfigError,
    compare_report,
    oracle_check,
    parse_config,
    run_sweep,
    write_sweep_csv,
)
from .model import ModelError, PowerMatrix
from .oracle import OracleSizeError, exhaustive_optimal

EXIT_OK, EXIT_INVALID, EXIT_REGRESSION = 0, 1, 2


def _run_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="flat YAML key/value config file")
    p.add_argument("--scheme", choices=["mrc", "egc", "zfc", "all"])
    p.add_argument("--algorithm", choices=["original", "improved", "both"])
    p.add_argument(
        "--pmax-dbw",
        nargs=3,
        type=float,
        metavar=("START", "STOP", "STEP"),
        help="budget sweep in dBW, stop inclusive",
    )
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--common-random-numbers",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="reuse each trial's channel across budget points (default: on)",
    )
    p.add_argument("--output", type=Path, help="CSV destination (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mccdma-alloc",
        description="Greedy group/channel allocation for downlink MC-CDMA.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="throughput vs budget sweep, CSV output")
    _run_flags(sweep)

    compare = sub.add_parser("compare", help="original vs improved report")
    _run_flags(compare)

    oc = sub.add_parser("oracle-check", help="greedy algorithms vs exhaustive optimum")
    oc.add_argument("--instances", type=int, default=300)
    oc.add_argument("--groups", type=int, default=3)
    oc.add_argument("--users", type=int, default=3)
    oc.add_argument("--subcarriers", type=int, default=4)
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument(
        "--relaxed", action="store_true", help="let one user own several groups in the oracle"
    )

    gen = sub.add_parser("gen-config", help="print the default config document")
    gen.add_argument("--output", type=Path)
    return parser


def _load_run(args):
    text = args.config.read_text(encoding="utf-8") if args.config else ""
    overrides = {
        "trials": args.trials,
        "seed": args.seed,
        "common_random_numbers": args.common_random_numbers,
    }
    if args.scheme:
        overrides["schemes"] = args.scheme
    if args.algorithm:
        overrides["algorithms"] = args.algorithm
    if args.pmax_dbw:
        start, stop, step = args.pmax_dbw
        overrides.update(pmax_dbw_start=start, pmax_dbw_stop=stop, pmax_dbw_step=step)
    return parse_config(text, **overrides)


def _open_output(path):
    # opened before any computation so a bad path fails fast
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_sweep(args) -> int:
    run = _load_run(args)
    fh, close = _open_output(args.output)
    try:
        write_sweep_csv(fh, run_sweep(run))
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_compare(args) -> int:
    run = _load_run(args)
    fh, close = _open_output(args.output)
    try:
        text, csv_text, _, ok = compare_report(run)
        if close:
            fh.write(csv_text)
            sys.stdout.write(text)
        else:
            sys.stdout.write(text + "\n" + csv_text)
    finally:
        if close:
            fh.close()
    if not ok:
        print("regression: improved mean below original mean", file=sys.stderr)
        return EXIT_REGRESSION
    return EXIT_OK


FIXTURE = [[10.0, 11.0], [1.0, 100.0]]


def cmd_oracle_check(args) -> int:
    res = oracle_check(
        n_instances=args.instances,
        n_groups=args.groups,
        n_users=args.users,
        s=args.subcarriers,
        seed=args.seed,
        relaxed=args.relaxed,
    )
    fx = exhaustive_optimal(PowerMatrix(FIXTURE), 12.0, 4)
    print(
        f"fixture p={FIXTURE} p_max=12 s=4: original={fx.original.throughput} "
        f"improved={fx.improved.throughput} oracle={fx.best.throughput}"
    )
    print(
        f"instances={res.instances} G={args.groups} U={args.users} S={args.subcarriers} "
        f"relaxed={args.relaxed}"
    )
    print(
        f"mean gap vs original={res.gaps_original.mean():.4f} "
        f"(optimal in {(res.gaps_original == 0).mean():.1%})"
    )
    print(
        f"mean gap vs improved={res.gaps_improved.mean():.4f} "
        f"(optimal in {(res.gaps_improved == 0).mean():.1%})"
    )
    print(f"violations={len(res.violations)}")
    for v in res.violations[:10]:
        print(f"  {v}")
    return EXIT_OK if res.ok else EXIT_INVALID


def cmd_gen_config(args) -> int:
    if args.output:
        args.output.write_text(DEFAULT_CONFIG, encoding="utf-8")
    else:
        sys.stdout.write(DEFAULT_CONFIG)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "oracle-check": cmd_oracle_check,
    "gen-config": cmd_gen_config,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ModelError, AllocationError, OracleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
