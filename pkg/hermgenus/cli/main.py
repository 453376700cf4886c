import argparse
import logging
import sys
import typing as t

from sympy import isprime  # type: ignore

from ..classgroup import c0_subgroup, class_group
from ..config import HermGenusConfig, OutputFormat, parse_config
from ..exceptions import ExitCode, HermGenusError, InputError
from ..field import make_field
from ..genus import det_profile, neighbour, special_genera
from ..ideal import primes_above
from ..parse import read_lattice
from ..report import (
    Report,
    analyze_sections,
    class_group_sections,
    field_info_sections,
    special_genera_sections,
)
from ..selftest import run_suites, suites
from ..utils.enum import BaseStrEnum


__all__ = ("Verb", "ArgumentParser", "get_args", "execute", "main", "run")


logger = logging.getLogger(__name__)


class Verb(BaseStrEnum):
    FIELD_INFO = "field-info"
    CLASS_GROUP = "class-group"
    ANALYZE = "analyze"
    SPECIAL_GENERA = "special-genera"
    NEIGHBOUR = "neighbour"
    SELFTEST = "selftest"


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the input error code."""

    def error(self, message: str) -> t.NoReturn:
        self.print_usage(sys.stderr)
        self.exit(
            int(ExitCode.INPUT_ERROR),
            "%s: error: %s\n" % (self.prog, message),
        )


def _add_common(parser: argparse.ArgumentParser, **defaults: t.Any) -> None:
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=defaults.get("verbose", False),
    )
    parser.add_argument(
        "--format",
        type=str,
        choices=OutputFormat.values(),
        default=defaults.get("format", OutputFormat.TEXT.value),
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=defaults.get("seed"),
    )


def get_args(argv: t.Optional[t.Sequence[str]] = None) -> argparse.Namespace:
    parser = ArgumentParser(prog="herm-genus")
    _add_common(parser)
    # after the verb, only options actually given override the global ones
    common = ArgumentParser(add_help=False)
    _add_common(
        common,
        verbose=argparse.SUPPRESS,
        format=argparse.SUPPRESS,
        seed=argparse.SUPPRESS,
    )
    sub = parser.add_subparsers(dest="verb")
    sub.required = True

    for verb in (Verb.FIELD_INFO, Verb.CLASS_GROUP):
        cmd = sub.add_parser(verb.value, parents=[common])
        cmd.add_argument("--d", type=int, required=True)

    cmd = sub.add_parser(Verb.ANALYZE.value, parents=[common])
    cmd.add_argument("path", type=str)

    cmd = sub.add_parser(Verb.SPECIAL_GENERA.value, parents=[common])
    cmd.add_argument("path", type=str)
    cmd.add_argument("--prime-bound", type=int)

    cmd = sub.add_parser(Verb.NEIGHBOUR.value, parents=[common])
    cmd.add_argument("path", type=str)
    cmd.add_argument("--p", type=int, required=True)
    cmd.add_argument(
        "--index",
        type=int,
        choices=(0, 1),
        default=0,
        help="which of two conjugate primes above p to use",
    )
    cmd.add_argument("--avoid", type=str)

    cmd = sub.add_parser(Verb.SELFTEST.value, parents=[common])
    cmd.add_argument("--oracle-depth", type=int)
    cmd.add_argument("--suite", action="append", choices=sorted(suites))

    return parser.parse_args(argv)


def _config(args: argparse.Namespace) -> HermGenusConfig:
    try:
        return parse_config(
            prime_bound=getattr(args, "prime_bound", None),
            oracle_depth=getattr(args, "oracle_depth", None),
            seed=args.seed,
            output_format=args.format,
        )
    except ValueError as error:
        raise InputError(str(error)) from error


def execute(args: argparse.Namespace) -> Report:
    config = _config(args)
    verb = Verb(args.verb)

    if verb in (Verb.FIELD_INFO, Verb.CLASS_GROUP):
        field = make_field(args.d)
        cg = class_group(field)
        if verb is Verb.FIELD_INFO:
            return Report(verb.value, field_info_sections(field, cg))
        c0 = c0_subgroup(cg, config.prime_bound)
        return Report(verb.value, class_group_sections(cg, c0))

    if verb is Verb.SELFTEST:
        results = run_suites(config, args.suite)
        failed = any(not r["passed"] for r in results.values())
        code = ExitCode.VERIFICATION if failed else ExitCode.SUCCESS
        return Report(verb.value, {"suites": results}, code)

    L = read_lattice(args.path)

    if verb is Verb.ANALYZE:
        return Report(verb.value, analyze_sections(L, det_profile(L)))

    if verb is Verb.SPECIAL_GENERA:
        result = special_genera(L, config.prime_bound, config.verify)
        return Report(verb.value, special_genera_sections(result))

    if not isprime(args.p):
        raise InputError("--p must be a rational prime, got %d" % args.p)
    primes = primes_above(L.field, args.p)
    if args.index >= len(primes):
        raise InputError("Only one prime of O lies above %d" % args.p)
    prime = primes[args.index]
    avoid = read_lattice(args.avoid) if args.avoid else None
    L2 = neighbour(L, prime, avoid=avoid, verify=config.verify)
    return Report(verb.value, {
        "prime": prime.asdict(),
        "neighbour": L2.asdict(),
    })


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    args = get_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        report = execute(args)
    except HermGenusError as error:
        logger.debug("Command failed", exc_info=True)
        print("error: %s" % error, file=sys.stderr)
        return int(error.exit_code)
    print(report.render(OutputFormat(args.format)))
    return int(report.exit_code)


def run():
    sys.exit(main())
