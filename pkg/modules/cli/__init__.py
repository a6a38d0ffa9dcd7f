"""
CLI Registration Module
"""

import argparse
import sys
import time
from typing import List, Optional, Sequence

import structlog

from modules import __version__, app
from modules.exceptions.general_exceptions import EngineException
from modules.utils.report import RunReport, Verdict, render_text, to_json

log = structlog.get_logger(__name__)

COMMANDS = ('models', 'homology', 'ih', 'pairing', 'les', 'obstruction')

UNEXPECTED_ERROR_EXIT = 70
FAILED_VERDICT_EXIT = 1


def register_commands(subparsers):
    """Register every command parser"""
    from modules.cli import duality, homology, models

    models.register(subparsers)
    homology.register(subparsers)
    duality.register(subparsers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='ihx', description="Z/2 intersection homology engine")
    parser.add_argument('--json', action='store_true', help="print the JSON report")
    parser.add_argument('--timing', action='store_true', help="include timing in the JSON report")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest='command', required=True)
    register_commands(subparsers)
    return parser


def _split_globals(argv: Sequence[str]):
    """Accept --json and --timing anywhere on the command line"""
    flags = [a for a in argv if a in ('--json', '--timing')]
    rest = [a for a in argv if a not in ('--json', '--timing')]
    return flags + rest


def run(command: str, args: Sequence[str] = ()) -> RunReport:
    """
    Run one command and return its report

    Args:
        command (str): one of COMMANDS
        args (Sequence[str]): the command's flags

    Returns:
        RunReport
    """
    argv = [command, *args]
    namespace = build_parser().parse_args(_split_globals(argv))
    report = RunReport(schema=app.settings.report_schema_version, command=command,
                       argv=[a for a in argv if a not in ('--json', '--timing')])
    started = time.perf_counter()
    with structlog.contextvars.bound_contextvars(command=command):
        namespace.handler(namespace, report)
    report.timing = round(time.perf_counter() - started, 3)
    log.info("cli.finished", command=command, verdict=report.verdict.value, seconds=report.timing)
    return report


def main(argv: Optional[List[str]] = None) -> int:
    """Run from the command line; returns the exit status"""
    argv = list(sys.argv[1:] if argv is None else argv)
    namespace = build_parser().parse_args(_split_globals(argv))
    rest = [a for a in argv if a not in ('--json', '--timing')]
    command_args = rest[rest.index(namespace.command) + 1:]
    try:
        report = run(namespace.command, command_args)
    except EngineException as exc:
        log.error("cli.engine_error", command=namespace.command, error=str(exc), exit_code=exc.exit_code,
                  stage=exc.stage)
        where = f" ({exc.stage})" if exc.stage else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        log.exception("cli.unexpected_error", command=namespace.command)
        print(f"unexpected error: {exc}", file=sys.stderr)
        return UNEXPECTED_ERROR_EXIT

    if namespace.json:
        sys.stdout.write(to_json(report, with_timing=namespace.timing))
    else:
        sys.stdout.write(render_text(report))
    return FAILED_VERDICT_EXIT if report.verdict == Verdict.FAIL else 0
