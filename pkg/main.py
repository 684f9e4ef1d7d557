"""
Syntomic engine command line

    python main.py zpi --p 3 --e 2 --i 2
    python main.py table --p 5 --imax 6 --format csv
    python main.py verify
    python main.py tc --p 3 --f 2

Exit codes: 0 success, 1 usage error, 2 validation mismatch.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.api.commands import COMMANDS, EXIT_MISMATCH, EXIT_USAGE
from app.config import settings
from app.errors import SyntomicError, Unsupported, ValidationMismatch
from app.schemas.schemas import RunConfig


class UsageErrorParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; here usage errors are exit 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="Prime p (default 3)")
    common.add_argument("--e", type=int, default=None, help="Truncation exponent e of k[x]/x^e (default 2)")
    common.add_argument("--i", type=int, default=None, help="Weight i (default 1)")
    common.add_argument("--imax", type=int, default=None, help="Largest weight for table/verify")
    common.add_argument("--f", type=int, default=None, help="Residue degree, k = F_(p^f) (default 1)")
    common.add_argument("--precision", type=int, default=None, help="Initial precision N0 (default auto)")
    common.add_argument("--wmax", type=int, default=None, help="Weight window (default auto)")
    common.add_argument("--jmin", type=int, default=None, help="tc: lowest j (degree 2j)")
    common.add_argument("--jmax", type=int, default=None, help="tc: highest j")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json", dest="output_format")
    common.add_argument("--json-indent", type=int, default=2)
    common.add_argument("--jobs", type=int, default=None, help="Towers evaluated concurrently")
    common.add_argument("--strict", action="store_true", help="Refuse parameters without a closed form")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = UsageErrorParser(description="Exact p-adic syntomic cohomology of k[x]/x^e")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=UsageErrorParser)
    commands.add_parser("zpi", parents=[common], help="Z_p(i)(k[x]/x^e) for one weight")
    commands.add_parser("table", parents=[common], help="H^1 and relative K-group orders for i = 1..imax")
    commands.add_parser("verify", parents=[common], help="Run the acceptance sweep")
    commands.add_parser("tc", parents=[common], help="pi_* TC(F_q; Z_p) of the base field")
    return parser


def configure_logging(verbose: int) -> None:
    level = settings.LOG_LEVEL
    if verbose == 1:
        level = "INFO"
    elif verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, stream=sys.stderr)


def to_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        "command": args.command,
        "p": args.p,
        "e": args.e,
        "i": args.i,
        "i_max": args.imax,
        "f": args.f,
        "precision": args.precision,
        "wmax": args.wmax,
        "j_min": args.jmin,
        "j_max": args.jmax,
        "output_format": args.output_format,
        "json_indent": args.json_indent,
        "jobs": args.jobs,
        "verbosity": args.verbose,
        "strict": args.strict,
    }
    return RunConfig(**{k: v for k, v in fields.items() if v is not None})


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.verbose)
    try:
        config = to_config(args)
    except ValidationError as exc:
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"]) or "arguments"
            print(f"✗ {location}: {error['msg']}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[config.command](config)
    except Unsupported as exc:
        print(f"✗ unsupported: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationMismatch as exc:
        print(f"✗ validation mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except SyntomicError as exc:
        print(f"✗ {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
