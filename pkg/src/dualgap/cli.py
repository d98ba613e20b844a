"""Command-line front end.

Exit status: 0 when every verdict passes, 1 when some check fails, 2 on
input or usage errors.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .exact import MalformedInput, rational
from .gallery import GALLERIES, run_gallery
from .instance import InstanceError, ParsedInstance, Query, load, loads, packaged
from .report import FORMATS, Report
from .runner import Runner, gap_table, verify_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _point(text: str):
    try:
        return tuple(rational(c.strip()) for c in text.split(","))
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scalar(text: str):
    try:
        return rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _open_instance(path: str) -> tuple[ParsedInstance, str]:
    """Load ``path``; bare names of shipped files (``example33.json``) also work."""
    if Path(path).exists():
        return load(path), path
    data = resources.files("dualgap.data")
    for candidate in (path, f"corpus/{path}"):
        if data.joinpath(candidate).is_file():
            return loads(packaged(candidate)), path
    return load(path), path  # raises with the missing-file diagnostic


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dualgap", description="Exact convex duality checks on instance files.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def output_opts(p):
        p.add_argument("--format", choices=FORMATS, default="markdown")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    def instance_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--instance", required=True, metavar="PATH")
        output_opts(p)
        return p

    p = instance_cmd("conjugate", "conjugate of the sum (or of one block) at a dual point")
    p.add_argument("--y", type=_point, required=True)
    p.add_argument("--function", metavar="NAME")

    p = instance_cmd("epssub", "eps-subdifferential at x, optionally testing membership of y")
    p.add_argument("--x", type=_point)
    p.add_argument("--eps", type=_scalar, default=rational(0))
    p.add_argument("--y", type=_point)
    p.add_argument("--function", metavar="NAME")

    p = instance_cmd("infconv", "inf-convolution of the conjugates at y, with attainment")
    p.add_argument("--y", type=_point, required=True)

    p = instance_cmd("sumrule", "compare the subdifferential of the sum with the sum of subdifferentials")
    p.add_argument("--x", type=_point)

    instance_cmd("duality", "primal and dual values, witnesses and qualification diagnostics")

    p = instance_cmd("verify", "conditions (i)-(iv) at one (x, eps, eta, K)")
    p.add_argument("--x", type=_point)
    p.add_argument("--eps", type=_scalar)
    p.add_argument("--eta", type=_scalar)
    p.add_argument("--K", type=_scalar)
    p.add_argument("--queries", action="store_true", help="also run the queries stored in the instance file")

    p = sub.add_parser("gallery", help="reproduction gallery")
    p.add_argument("name", choices=GALLERIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    output_opts(p)
    return parser


def _single(runner: Runner, check: str, args, keys) -> Report:
    params = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    rep = Report(f"{check} on {runner.source}")
    rep.add(runner.run(Query(check, check, params)))
    return rep


def dispatch(args) -> Report:
    if args.command == "gallery":
        return run_gallery(args.name, args.seed, args.count)
    parsed, source = _open_instance(args.instance)
    runner = Runner(parsed, source)
    if args.command == "conjugate":
        return _single(runner, "conjugate", args, ("y", "function"))
    if args.command == "epssub":
        return _single(runner, "epssub", args, ("x", "eps", "y", "function"))
    if args.command == "infconv":
        return _single(runner, "infconv", args, ("y",))
    if args.command == "sumrule":
        return _single(runner, "sumrule", args, ("x",))
    if args.command == "duality":
        return gap_table(runner)
    rep = verify_report(runner, args.x, args.eps, args.eta, args.K)
    if args.queries:
        rep.extend(runner.run_all(source).rows)
    return rep


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = dispatch(args)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MalformedInput, ValueError) as exc:
        print(f"error: E_INPUT: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.render(args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.all_pass else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
