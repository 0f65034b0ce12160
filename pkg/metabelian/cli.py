import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .base import (
    AlgebraConfig,
    DomainError,
    InvariantViolation,
    ParseError,
    RenderParam,
)
from .metabelian import MetabelianAut
from .utils import logger

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_INVARIANT = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors share the exit code of parse errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


@dataclass
class Command:
    name: str
    config: AlgebraConfig
    inputs: dict = field(default_factory=dict)
    param: RenderParam = field(default_factory=RenderParam)
    log_level: Optional[str] = None
    log_file: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="metabelian",
        description="Automorphisms of free metabelian nilpotent Lie algebras",
    )
    parser.add_argument("--rank", type=int, required=True)
    parser.add_argument("--class", dest="nil_class", type=int, required=True)
    parser.add_argument("--output", choices=["text", "json"], default="text")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    parser.add_argument("--log-file", default=None)
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in ("normalize", "embed", "partials", "exp-ad", "inner-jacobian"):
        sub = subparsers.add_parser(name)
        sub.add_argument("expr", help="Lie expression, e.g. 'y1 + 1/2*[y2,y1]'")

    for name in ("bracket", "bch"):
        sub = subparsers.add_parser(name)
        sub.add_argument("left")
        sub.add_argument("right")
        if name == "bch":
            sub.add_argument(
                "--verify",
                action="store_true",
                help="cross-check against the envelope oracle",
            )

    sub = subparsers.add_parser("gerritzen-table")
    sub.add_argument("--cap", type=int, default=None)

    for name in ("jacobian", "inverse"):
        sub = subparsers.add_parser(name)
        sub.add_argument("--phi", required=True)

    sub = subparsers.add_parser("compose")
    sub.add_argument("--phi", required=True)
    sub.add_argument("--psi", required=True)

    sub = subparsers.add_parser("from-jacobian")
    sub.add_argument("--matrix", required=True, help="JSON rows of polynomials")

    for name in ("reduce", "is-inner", "shape-check"):
        sub = subparsers.add_parser(name)
        sub.add_argument("--psi", required=True)

    sub = subparsers.add_parser("same-coset")
    sub.add_argument("--psi", required=True)
    sub.add_argument("--psi2", required=True)
    return parser


def parse_command(argv: Optional[Sequence[str]] = None) -> Command:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = AlgebraConfig(args.rank, args.nil_class)
    except DomainError as e:
        parser.error(str(e))
    inputs = {
        k: v
        for k, v in vars(args).items()
        if k
        not in ("rank", "nil_class", "output", "log_level", "log_file", "command", "verify")
    }
    return Command(
        name=args.command,
        config=config,
        inputs=inputs,
        param=RenderParam(output=args.output, verify=getattr(args, "verify", False)),
        log_level=args.log_level,
        log_file=args.log_file,
    )


def run(cmd: Command) -> tuple[str, int]:
    """Rendered output and exit code."""
    try:
        options = {"log_file": cmd.log_file}
        if cmd.log_level:
            options["log_level"] = cmd.log_level
        engine = MetabelianAut(cmd.config.rank, cmd.config.nil_class, **options)
        return engine.run_command(cmd.name, cmd.inputs, cmd.param), EXIT_OK
    except ParseError as e:
        return f"parse error: {e}", EXIT_PARSE
    except DomainError as e:
        return f"domain error: {e}", EXIT_DOMAIN
    except InvariantViolation as e:
        logger.error(f"Invariant violation in {cmd.name}: {e}")
        return f"internal error: {e}", EXIT_INVARIANT


def main(argv: Optional[Sequence[str]] = None) -> int:
    cmd = parse_command(argv)
    output, code = run(cmd)
    print(output, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
