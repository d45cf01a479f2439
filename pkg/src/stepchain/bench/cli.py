"""`bench` command-line entry point."""
from __future__ import annotations

import argparse
import sys

from .harness import BenchConfig, BenchError, run_bench
from .report import compare, emit_report, render_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Measure direct calls against one-step pipelines.")
    parser.add_argument("--mode", required=True, choices=("time", "space"))
    parser.add_argument("--workload", required=True, choices=("nonio", "io"))
    parser.add_argument("--subject", default="both",
                        choices=("native", "refinable", "both"))
    parser.add_argument("--phases", type=int, default=100)
    parser.add_argument("--iterations", type=int, default=100)
    parser.add_argument("--alleviated", action="store_true",
                        help="use the reduced schedule: 500 phases of "
                             "10 iterations")
    parser.add_argument("--io-file-size", type=int, default=1024,
                        help="scratch file size in bytes for the io workload")
    parser.add_argument("--out", required=True, help="report file path")
    parser.add_argument("--format", default="csv", choices=("csv", "text"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    phases, iterations = args.phases, args.iterations
    if args.alleviated:
        phases, iterations = 500, 10

    def config(subject):
        return BenchConfig(
            mode=args.mode, workload=args.workload, subject=subject,
            phases=phases, iterations=iterations,
            io_file_size=args.io_file_size, output_path=args.out)

    try:
        if args.subject == "both":
            native = run_bench(config("native"))
            refinable = run_bench(config("refinable"))
            report = compare(native, refinable)
            emit_report(report, args.out, args.format)
            print(f"iterations per phase: {iterations}")
            print(render_text(report))
        else:
            samples = run_bench(config(args.subject))
            emit_report(samples, args.out, args.format)
            print(f"iterations per phase: {iterations}")
            print(render_text(samples))
    except (BenchError, ValueError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    print(f"report written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
