"""
Command-line interface of the stability lab.

    mptcp-lab run <config> [--seed N] [--format csv|json] [--out PATH]
    mptcp-lab preset <name> [--out PATH]
    mptcp-lab validate <config>
    mptcp-lab trajectory <config> [--run-id N] [--seed N] --out PATH

Exit codes: 0 on success, 1 on a configuration error, 2 on any other failure.
"""

import argparse
import sys
from typing import Optional, Sequence

from app.config import get_logger, setup_logging
from app.config.presets import PRESETS, preset
from app.errors import ConfigError
from app.services.experiment_service import ExperimentService, member_trajectory
from app.services.report_service import (
    dump_config,
    emit_report,
    export_trajectory_csv,
    load_config,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mptcp-lab",
        description="Fluid-model multipath TCP stability experiments",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log at DEBUG level"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run an experiment ensemble")
    run.add_argument("config", help="Path to a JSON experiment configuration")
    run.add_argument("--seed", type=int, help="Seed of member 0 (overrides all)")
    run.add_argument(
        "--format", choices=("csv", "json"), default="json", help="Report format"
    )
    run.add_argument("--out", help="Report file (stdout when omitted)")

    preset_cmd = commands.add_parser("preset", help="Print a calibrated preset")
    preset_cmd.add_argument("name", help=f"One of {', '.join(sorted(PRESETS))}")
    preset_cmd.add_argument("--out", help="Configuration file (stdout when omitted)")

    validate = commands.add_parser("validate", help="Validate a configuration")
    validate.add_argument("config", help="Path to a JSON experiment configuration")

    trajectory = commands.add_parser(
        "trajectory", help="Export one member's dynamics trajectory as CSV"
    )
    trajectory.add_argument("config", help="Path to a JSON experiment configuration")
    trajectory.add_argument("--run-id", type=int, default=0, help="Ensemble member")
    trajectory.add_argument("--seed", type=int, help="Seed of member 0")
    trajectory.add_argument("--out", required=True, help="Trajectory CSV file")

    return parser


def _run(args: argparse.Namespace):
    cfg = load_config(args.config)
    summary = ExperimentService().run_experiment(cfg, seed=args.seed)
    emit_report(summary, args.format, args.out or sys.stdout)


def _preset(args: argparse.Namespace):
    text = dump_config(preset(args.name))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _validate(args: argparse.Namespace):
    cfg = load_config(args.config)
    print(
        f"{args.config}: valid ({cfg.scenario.variant} scenario, "
        f"{cfg.controller.variant} controller, {cfg.ensemble_size} members)"
    )


def _trajectory(args: argparse.Namespace):
    cfg = load_config(args.config)
    export_trajectory_csv(member_trajectory(cfg, args.run_id, args.seed), args.out)


COMMANDS = {
    "run": _run,
    "preset": _preset,
    "validate": _validate,
    "trajectory": _trajectory,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the subcommand and return the exit code."""
    args = build_parser().parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)

    try:
        COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception as e:
        logger.error(f"{args.command} failed: {str(e)}", exc_info=args.verbose)
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
