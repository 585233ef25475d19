import argparse
import json
import logging
import sys
from typing import List, Optional

from analysis_service import AnalysisService
from config import EXIT_CODES, GENERATOR_CONFIG, GENERATOR_MODES, FORM_KINDS, LOGGING_CONFIG, REPORT_CONFIG
from errors import FCrystalError, InputError
from populate_models import populate_models
from schemas import report_schema
from view_report import display_report


class UsageParser(argparse.ArgumentParser):
    """argparse with the usage exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        sys.exit(EXIT_CODES["usage"])


def parse_mu(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"--mu must be comma-separated integers (got {text!r})") from e


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog="fcrystal", description="F-crystals and their Newton-Hodge decompositions")
    parser.add_argument("--seed", type=int, default=GENERATOR_CONFIG["default_seed"])
    parser.add_argument("--out", help="write the JSON result here instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--quiet", action="store_true", help="no human-readable summary on stderr")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)

    for name in ("info", "validate", "family"):
        commands.add_parser(name).add_argument("file")

    decompose = commands.add_parser("decompose")
    decompose.add_argument("file")
    decompose.add_argument("--break", dest="breakpoint", required=True, metavar="A,B")
    decompose.add_argument("--self-dual", action="store_true")
    decompose.add_argument("--probe", type=int, default=0, metavar="K")

    generate = commands.add_parser("generate")
    generate.add_argument("--p", type=int, required=True)
    generate.add_argument("--a", type=int, default=1)
    generate.add_argument("--N", type=int)
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--mu", type=parse_mu, required=True, metavar="MU1,...,MUn")
    generate.add_argument("--kind", choices=FORM_KINDS, default="symplectic")
    generate.add_argument("--mode", choices=GENERATOR_MODES, default="cartan")
    generate.add_argument("--unit", type=int, default=1)

    commands.add_parser("schema")
    commands.add_parser("populate").add_argument("--dir", default="models")
    return parser


def setup_logging(verbose: bool):
    level = LOGGING_CONFIG["verbose_level"] if verbose else LOGGING_CONFIG["level"]
    logging.basicConfig(level=level, format=LOGGING_CONFIG["format"], stream=sys.stderr)


def emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def read_input(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    service = AnalysisService(seed=args.seed)

    try:
        if args.command == "schema":
            emit(json.dumps(report_schema(), indent=REPORT_CONFIG["indent"]) + "\n", args.out)
            return EXIT_CODES["pass"]
        if args.command == "populate":
            populate_models(args.dir)
            return EXIT_CODES["pass"]
        if args.command == "generate":
            emit(service.generate(args.p, args.a, args.N, args.n, args.mu,
                                  kind=args.kind, mode=args.mode, unit=args.unit), args.out)
            if not args.quiet:
                print(f"✅ Generated {args.kind} crystal n={args.n} mu={args.mu} seed={args.seed}",
                      file=sys.stderr)
            return EXIT_CODES["pass"]

        raw = read_input(args.file)
    except FCrystalError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CODES["usage"] if isinstance(e, InputError) else EXIT_CODES["verdict_failure"]

    if args.command == "decompose":
        report = service.decompose(raw, args.breakpoint, self_dual=args.self_dual, probe=args.probe)
    else:
        report = getattr(service, args.command)(raw)

    emit(report.to_json(REPORT_CONFIG["indent"]), args.out)
    if not args.quiet:
        display_report(report)
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
