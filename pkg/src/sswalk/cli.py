"""Command line interface: scenario runs, verification, qubit compilation."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenarios import (
    BUILTIN_CONFIGS,
    ConfigError,
    builtin_scenario,
    load_config,
    probability_csv,
    run_scenario,
    write_artifacts,
)


def _add_run_parser(sub):
    p = sub.add_parser("run", help="run a scenario and write CSV/figure artifacts")
    p.add_argument("config", nargs="?", help="path to a scenario config file")
    p.add_argument("--builtin", choices=sorted(BUILTIN_CONFIGS),
                   help="run a built-in scenario instead of a config file")
    p.add_argument("--out", default=None, help="output directory (default: ./out/<name>)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.add_argument("--seedless", action="store_true",
                   help="run twice and fail unless the CSVs are byte-identical")


def _add_verify_parser(sub):
    p = sub.add_parser("verify", help="run the acceptance battery")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--quick", action="store_true", help="fast subset (default)")
    group.add_argument("--full", action="store_true", help="all checks")
    p.add_argument("--out", default=None, help="directory for report.json and CSVs")


def _add_decompose_parser(sub):
    p = sub.add_parser("decompose",
                       help="emit Pauli-string expansions of the shift operators")
    p.add_argument("--qubits", type=int, required=True, help="position qubits")
    p.add_argument("--out", default=None, help="directory for the term files")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sswalk",
        description="Split-step quantum walk simulator with curved-space coin fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    _add_verify_parser(sub)
    _add_decompose_parser(sub)
    args = parser.parse_args(argv)

    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "decompose":
        return _cmd_decompose(args)
    return 2


def _cmd_run(args) -> int:
    try:
        if args.builtin:
            spec = builtin_scenario(args.builtin)
        elif args.config:
            spec = load_config(args.config)
        else:
            print("error: give a config path or --builtin", file=sys.stderr)
            return 2
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_scenario(spec)
    if args.seedless:
        repeat = run_scenario(spec)
        if probability_csv(result) != probability_csv(repeat):
            print("determinism check FAILED: repeated run differs", file=sys.stderr)
            return 1
        print("determinism check passed: repeated run is byte-identical")

    out_dir = Path(args.out) if args.out else Path("out") / spec.name
    written = write_artifacts(result, out_dir, plots=not args.no_plot)
    drift = result.summary["max_norm_drift"]
    wrap = result.summary["wrap_step"]
    print(f"{spec.name}: {spec.n_steps} steps on {spec.n_sites} sites "
          f"(L = {spec.L}); norm drift {drift:.2e}"
          + (f"; support reached boundary at step {wrap}" if wrap else ""))
    print(f"wrote {', '.join(written)} to {out_dir}")
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_verification_suite

    level = "full" if args.full else "quick"
    report = run_verification_suite(level, out_dir=args.out)
    for line in report.lines():
        print(line)
    if args.out:
        print(f"report written to {args.out}")
    return 0 if report.all_passed else 1


def _cmd_decompose(args) -> int:
    from . import qubit

    if args.qubits < 1:
        print("error: --qubits must be at least 1", file=sys.stderr)
        return 2
    outputs = {
        "shift_plus_coin.txt": qubit.shift_with_coin(args.qubits, "plus"),
        "shift_minus_coin.txt": qubit.shift_with_coin(args.qubits, "minus"),
        "shift_plus.txt": qubit.decompose(qubit.position_shift_matrix(args.qubits, "plus")),
        "shift_minus.txt": qubit.decompose(qubit.position_shift_matrix(args.qubits, "minus")),
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, decomp in outputs.items():
            (out / name).write_text(qubit.export_text(decomp))
        print(f"wrote {len(outputs)} term files to {out}")
    else:
        for name, decomp in outputs.items():
            print(f"# {name}")
            print(qubit.export_text(decomp), end="")
    return 0
