"""Command line front end.

Subcommands: ``validate`` checks a model file, ``query`` answers one query,
``repl`` opens an interactive loop with sticky assumptions, ``serve`` runs
the HTTP service.  Exit codes: 0 success, 1 model or query problems,
2 usage errors (argparse), 3 capacity limits.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DogwatchError, ParseError
from .limits import limits_from_env
from .model import Attribution, Dog
from .session import QueryResult, Session
from .textfmt import parse_model
from .validate import validate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAPACITY = 3


def _load_model(path: str) -> tuple[Dog, Attribution]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise DogwatchError(f"cannot read model file {path}: {err}")
    dog, attribution = parse_model(text)
    report = validate(dog, attribution)
    if not report.ok:
        raise DogwatchError(
            "model validation failed:\n" + report.render())
    return dog, attribution


def _print_diagnostics(result: QueryResult) -> None:
    for diag in result.diagnostics:
        print(f"error: {diag.render()}", file=sys.stderr)


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        if not value:
            return "(none)"
        lines = []
        for item in value:
            if isinstance(item, dict):
                lines.append("  " + " ".join(f"{k}={v}"
                                             for k, v in sorted(item.items())))
            else:
                lines.append(f"  {item}")
        return "\n" + "\n".join(lines)
    return str(value)


def _print_result(result: QueryResult, as_json: bool,
                  include_witnesses: bool) -> None:
    if as_json:
        print(result.to_json_text(include_witnesses))
        return
    if not result.ok:
        _print_diagnostics(result)
        return
    print(f"value: {_format_value(result.value)}")
    if include_witnesses and result.witnesses:
        for key, val in sorted(result.witnesses.items()):
            if isinstance(val, dict):
                rendered = " ".join(f"{k}={v}" for k, v in sorted(val.items()))
            else:
                rendered = _format_value(val).strip()
            print(f"{key}: {rendered}")


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        text = Path(args.model).read_text(encoding="utf-8")
    except OSError as err:
        print(f"error: cannot read model file {args.model}: {err}",
              file=sys.stderr)
        return EXIT_ERROR
    try:
        dog, attribution = parse_model(text)
    except ParseError as err:
        if args.json:
            import json
            print(json.dumps({
                "valid": False,
                "violations": [dict(d.to_json(), rule="syntax")
                               for d in err.diagnostics],
            }, indent=2, sort_keys=True))
        else:
            for diag in err.diagnostics:
                print(f"error: {diag.render()}", file=sys.stderr)
        return EXIT_ERROR
    report = validate(dog, attribution)
    if args.json:
        import json
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(report.render())
    return EXIT_OK if report.ok else EXIT_ERROR


def cmd_query(args: argparse.Namespace) -> int:
    limits = limits_from_env(args.max_leaves, args.max_props)
    try:
        dog, attribution = _load_model(args.model)
    except DogwatchError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return EXIT_ERROR
    if args.expr is not None:
        text = args.expr
    else:
        try:
            text = Path(args.query_file).read_text(encoding="utf-8")
        except OSError as err:
            print(f"error: cannot read query file {args.query_file}: {err}",
                  file=sys.stderr)
            return EXIT_ERROR
    session = Session(dog, attribution, limits)
    result = session.run_text(text)
    _print_result(result, args.json, not args.no_witness)
    if result.ok:
        return EXIT_OK
    if args.json:
        _print_diagnostics(result)
    return EXIT_CAPACITY if result.error_kind == "capacity" else EXIT_ERROR


REPL_HELP = """\
Queries: a single line like `check: TLE1 or TLE2`, or start with `assume:`
on its own line and finish the multi-line query with an empty line.
Commands:
  :assume set <label> = 0|1      add a sticky Boolean assumption
  :assume set_prob <label> = q   add a sticky probability assumption
  :assume clear                  drop all sticky assumptions
  :show assumptions              list sticky assumptions
  :reload                        re-read the model file
  :help                          this text
  :quit                          leave
"""


def _repl_command(line: str, session: Session, model_path: str,
                  make_session) -> Session:
    if line in (":quit", ":q", ":exit"):
        raise EOFError
    if line == ":help":
        print(REPL_HELP, end="")
        return session
    if line == ":show assumptions":
        lines = session.sticky_lines()
        if not lines:
            print("(no sticky assumptions)")
        for text in lines:
            print(f"  {text}")
        return session
    if line == ":assume clear":
        session.clear_sticky()
        print("assumptions cleared")
        return session
    if line.startswith(":assume "):
        from .queries import parse_assumptions
        rest = line[len(":assume "):].strip()
        try:
            for assumption in parse_assumptions(rest):
                session.add_sticky(rest, assumption)
            print(f"assuming {rest}")
        except DogwatchError as err:
            for diag in err.diagnostics:
                print(f"error: {diag.render()}", file=sys.stderr)
        return session
    if line == ":reload":
        try:
            fresh = make_session()
        except DogwatchError as err:
            print(f"error: {err.message}", file=sys.stderr)
            return session
        fresh.sticky = list(session.sticky)
        print(f"reloaded {model_path}")
        return fresh
    print(f"unknown command {line.split()[0]!r}; :help lists commands",
          file=sys.stderr)
    return session


def _read_query(first_line: str) -> str:
    """Queries may span lines: `assume:` or a bare directive opens a block
    that an empty line closes."""
    stripped = first_line.strip()
    bare_directive = stripped.rstrip() in ("assume:", "check:", "compute:",
                                           "computeall:")
    if not (stripped.startswith("assume:") or bare_directive):
        return first_line
    lines = [first_line]
    while True:
        try:
            nxt = input("...> ")
        except EOFError:
            break
        if not nxt.strip():
            break
        lines.append(nxt)
    return "\n".join(lines)


def cmd_repl(args: argparse.Namespace) -> int:
    limits = limits_from_env(args.max_leaves, args.max_props)

    def make_session() -> Session:
        dog, attribution = _load_model(args.model)
        return Session(dog, attribution, limits)

    try:
        session = make_session()
    except DogwatchError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return EXIT_ERROR
    print(f"model {session.dog.name!r} loaded "
          f"({len(session.dog.elements)} elements, "
          f"{len(session.dog.properties)} properties); :help for commands")
    while True:
        try:
            line = input("dog> ")
        except (EOFError, KeyboardInterrupt):
            print()
            break
        if not line.strip():
            continue
        if line.strip().startswith(":"):
            try:
                session = _repl_command(line.strip(), session, args.model,
                                        make_session)
            except EOFError:
                break
            continue
        text = _read_query(line)
        result = session.run_text(text)
        _print_result(result, as_json=False, include_witnesses=True)
        if not result.ok:
            continue
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    limits = limits_from_env(args.max_leaves, args.max_props)
    try:
        app = create_app(args.model, limits)
    except DogwatchError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return EXIT_ERROR
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _add_limit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-leaves", type=int, default=None,
                        help="largest basic-event count enumerations accept")
    parser.add_argument("--max-props", type=int, default=None,
                        help="largest property count enumerations accept")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dogwatch",
        description="Risk analysis over object-oriented disruption graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model", help="model file")
    p.add_argument("--json", action="store_true", help="machine output")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="answer one query")
    p.add_argument("model", help="model file")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("-e", "--expr", help="query text inline")
    source.add_argument("-q", "--query-file", help="file with the query")
    p.add_argument("--json", action="store_true", help="machine output")
    p.add_argument("--no-witness", action="store_true",
                   help="drop witnesses from the output")
    _add_limit_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("repl", help="interactive query loop")
    p.add_argument("model", help="model file")
    _add_limit_flags(p)
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("model", help="model file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_limit_flags(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
