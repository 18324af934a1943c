import argparse
import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from config import (
    CLI_LOGS_DIR,
    EXIT_CLAIM_FAILED,
    EXIT_INVALID_INPUT,
    EXIT_IO_ERROR,
    EXIT_OK,
    EXIT_SINGULAR,
    LOG_FORMAT,
    MAX_CONCURRENCY,
)
from src.tools.claims_tool import check_claims
from src.tools.reconstruction_tool import run_reconstruction
from src.tools.scan_tool import scan
from src.tools.table_tool import emit
from src.tools.zeros_tool import find_entanglement_zeros
from src.utils.displays import (
    display_claims,
    display_reconstruction,
    display_scan_summary,
    display_zeros,
)
from src.utils.file_utils import save_json_file
from src.utils.linalg_utils import SingularMatrixError
from src.utils.scenario_utils import build_runtime, load_scenario

# Add project root to path
project_root = Path(__file__).parent
sys.path.append(str(project_root))

logger = logging.getLogger(__name__)


def setup_logging(console_level: int = logging.INFO) -> Path:
    """Console at INFO, everything at DEBUG to a timestamped file in logs/cli_logs."""
    CLI_LOGS_DIR.mkdir(parents=True, exist_ok=True)
    cli_timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    debug_log_path = CLI_LOGS_DIR / f"cli_log_{cli_timestamp}.txt"

    console_handler = logging.StreamHandler()
    console_handler.setLevel(console_level)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    file_handler = logging.FileHandler(debug_log_path, mode="a", encoding="utf-8")
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    root_logger.handlers.clear()
    root_logger.addHandler(console_handler)
    root_logger.addHandler(file_handler)
    return debug_log_path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ancilla-tomography",
        description="Single-apparatus state determination of a qubit (or qudit) coupled to an ancilla",
    )
    parser.add_argument("--quiet", action="store_true", help="Only warnings on the console")
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="Entanglement, det Omega and its derivative over the time grid")
    p_scan.add_argument("config", type=Path, help="Scenario JSON file")
    p_scan.add_argument("--out", type=Path, default=None, help="Output file (stdout when absent)")
    p_scan.add_argument("--format", choices=["csv", "json"], default="csv")
    p_scan.add_argument(
        "--workers", type=int, default=None, help="Parallel grid workers (env ANCILLA_MAX_WORKERS)"
    )

    p_zeros = sub.add_parser("zeros", help="Locate instants of vanishing entanglement")
    p_zeros.add_argument("config", type=Path, help="Scenario JSON file")
    p_zeros.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"), default=None)

    p_claims = sub.add_parser("claims", help="Check the vanishing theorem and its counterexamples")
    p_claims.add_argument("--scenario", default="builtin", help="'builtin' or a scenario JSON file")
    p_claims.add_argument("--out", type=Path, default=None, help="Write the verdicts as JSON")

    p_rec = sub.add_parser("reconstruct", help="Recover the initial system state from p(t)")
    p_rec.add_argument("config", type=Path, help="Scenario JSON file")
    p_rec.add_argument("--t", type=float, required=True, dest="time", help="Measurement time")
    p_rec.add_argument("--out", type=Path, default=None, help="Write the report as JSON")
    return parser


def _run_scan(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    runtime = build_runtime(cfg)
    workers = args.workers or int(os.getenv("ANCILLA_MAX_WORKERS", MAX_CONCURRENCY))
    records = scan(runtime, max_workers=workers)
    text = emit(records, args.format, args.out, scenario=cfg.name, overrides=runtime.overrides)
    if args.out is None:
        sys.stdout.write(text)
    else:
        display_scan_summary(records, cfg.name, str(args.out))
    return EXIT_OK


def _run_zeros(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    result = find_entanglement_zeros(cfg, tuple(args.interval) if args.interval else None)
    display_zeros(result, cfg.name)
    return EXIT_OK


def _run_claims(args: argparse.Namespace) -> int:
    report = check_claims(args.scenario)
    display_claims(report)
    if args.out is not None:
        save_json_file(args.out, report.model_dump())
    return EXIT_OK if report.all_passed else EXIT_CLAIM_FAILED


def _run_reconstruct(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    report = run_reconstruction(cfg, args.time)
    display_reconstruction(report)
    if args.out is not None:
        save_json_file(args.out, report.model_dump())
    return EXIT_OK


COMMANDS = {
    "scan": _run_scan,
    "zeros": _run_zeros,
    "claims": _run_claims,
    "reconstruct": _run_reconstruct,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point; returns the process exit code"""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID_INPUT

    setup_logging(logging.WARNING if args.quiet else logging.INFO)
    load_dotenv()

    try:
        return COMMANDS[args.command](args)
    except SingularMatrixError as e:
        logger.error(f"Map is not invertible: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_SINGULAR
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
