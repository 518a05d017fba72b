"""Command-line front end: ``gsp check|run|dump-bc|fmt|fuzz|corpus|serve``."""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from gsp import __version__
from gsp.config import get_settings
from gsp.core.errors import CheckError, GspRuntimeError, GspSyntaxError
from gsp.core.logging import configure_logging
from gsp.core.pipeline import build, check, run_module
from gsp.harness.corpus import CorpusError, run_corpus
from gsp.harness.fuzz import fuzz
from gsp.schemas.diagnostic import E_SYNTAX, Diagnostic
from gsp.syntax import parse, unparse
from gsp.vm import dump_module

EXIT_OK = 0
EXIT_STATIC = 1
EXIT_RUNTIME = 2
EXIT_TIMEOUT = 3
EXIT_INTERNAL = 4

_RUN_EXIT = {"ok": EXIT_OK, "runtime": EXIT_RUNTIME, "timeout": EXIT_TIMEOUT, "internal": EXIT_INTERNAL}
_JSON_FIELDS = {"code", "message", "line", "col"}


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise GspSyntaxError(
            [Diagnostic(code=E_SYNTAX, message=f"source is not valid UTF-8: {exc.reason}", line=1, col=1)]
        ) from None


def _report(diagnostics: Sequence[Diagnostic], filename: str) -> None:
    for d in diagnostics:
        print(d.render(filename), file=sys.stderr)


def cmd_check(args: argparse.Namespace) -> int:
    diagnostics: List[Diagnostic] = []
    try:
        check(parse(_read(args.file)))
    except (GspSyntaxError, CheckError) as exc:
        diagnostics = exc.diagnostics
    if args.json:
        print(json.dumps([d.model_dump(include=_JSON_FIELDS) for d in diagnostics], indent=2))
    else:
        _report(diagnostics, str(args.file))
    return EXIT_STATIC if diagnostics else EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    try:
        module = build(_read(args.file), optimized=not args.no_opt)
    except (GspSyntaxError, CheckError) as exc:
        _report(exc.diagnostics, str(args.file))
        return EXIT_STATIC
    result = run_module(module, step_budget=args.budget)
    for line in result.output:
        print(line)
    if args.metrics is not None:
        args.metrics.write_text(json.dumps(result.metrics.as_dict(), indent=2) + "\n", encoding="utf-8")
    if isinstance(result.error, GspRuntimeError):
        print(result.error.render(), file=sys.stderr)
    elif result.error is not None:
        print(f"{type(result.error).__name__}: {result.error}", file=sys.stderr)
    return _RUN_EXIT[result.outcome]


def cmd_dump_bc(args: argparse.Namespace) -> int:
    try:
        module = build(_read(args.file), optimized=not args.no_opt)
    except (GspSyntaxError, CheckError) as exc:
        _report(exc.diagnostics, str(args.file))
        return EXIT_STATIC
    sys.stdout.write(dump_module(module))
    return EXIT_OK


def cmd_fmt(args: argparse.Namespace) -> int:
    try:
        program = parse(_read(args.file))
    except GspSyntaxError as exc:
        _report(exc.diagnostics, str(args.file))
        return EXIT_STATIC
    sys.stdout.write(unparse(program))
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace) -> int:
    report = fuzz(args.count, args.seed, args.dyn_bias, workers=args.workers, step_budget=args.budget)
    print(report.summary())
    for v in report.violations:
        print(f"violation at index {v.index} (seed {v.seed}): {v.detail}")
        print(v.source)
    return EXIT_OK if report.ok else 1


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        report = run_corpus(args.dir, step_budget=args.budget)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.render())
    return EXIT_OK if report.ok else 1


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("gsp.main:app", host=args.host, port=args.port, reload=args.reload)
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsp", description="Gradually-sound core language toolchain")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Override GSP_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Type-check a program")
    p.add_argument("file", type=Path)
    p.add_argument("--json", action="store_true", help="Print diagnostics as JSON on stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("run", help="Check, compile and run a program")
    p.add_argument("file", type=Path)
    p.add_argument("--no-opt", action="store_true", help="Skip the fast-entry optimizer")
    p.add_argument("--metrics", type=Path, default=None, help="Write execution counters as JSON")
    p.add_argument("--budget", type=_positive, default=None, help="Instruction budget")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("dump-bc", help="Print the compiled bytecode")
    p.add_argument("file", type=Path)
    p.add_argument("--no-opt", action="store_true")
    p.set_defaults(func=cmd_dump_bc)

    p = sub.add_parser("fmt", help="Print a program in canonical form")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("fuzz", help="Run a soundness fuzz campaign")
    p.add_argument("--count", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dyn-bias", type=_probability, default=0.3)
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--budget", type=_positive, default=None, help="Per-program instruction budget")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("corpus", help="Run a golden-expectation corpus")
    p.add_argument("dir", type=Path)
    p.add_argument("--budget", type=_positive, default=None)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("serve", help="Serve the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--reload", action="store_true")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
