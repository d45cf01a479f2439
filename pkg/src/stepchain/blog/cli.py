"""`blogdemo` command-line entry point."""
from __future__ import annotations

import argparse
import sys

from ..errors import PipelineError
from .datastore import StoreError
from .scenarios import SCENARIOS, ScenarioFailed, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blogdemo",
        description="Run the demo blog scenarios.")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("list", help="print the scenario names")
    runner = commands.add_parser("run-scenario", help="run one scenario")
    runner.add_argument("name")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in SCENARIOS:
            print(name)
        return 0
    try:
        summary = run_scenario(args.name)
    except KeyError:
        print(f"blogdemo: unknown scenario {args.name!r}; "
              f"choose from {', '.join(SCENARIOS)}", file=sys.stderr)
        return 2
    except (ScenarioFailed, PipelineError, StoreError) as exc:
        print(f"scenario {args.name}: FAILED: {exc}", file=sys.stderr)
        return 1
    print(f"scenario {args.name}: ok ({summary})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
