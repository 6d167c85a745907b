"""Command-line front end.

    friendsim run   [FILE | --scenario NAME] [--perspective NAME|all] [--format text|json] [--float]
    friendsim check [FILE | --scenario NAME] [--perspectives A,B,...] [--event EV ...] [--postselect EV]
    friendsim trace-diff [FILE | --scenario NAME] A B
    friendsim scenarios

Exit codes: 0 ok, 1 parse error, 2 step error, 3 contradiction found, 64 usage.
Diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import FriendSimError, ProtocolError, SemanticError, StepError
from .protocol import (
    contradiction_report,
    diff_traces,
    dumps_json,
    parse_event,
    parse_protocol,
    render_diff,
    render_report,
    render_trace,
    report_to_json,
    run,
    trace_to_json,
)
from .scenarios import SCENARIOS, scenario_text

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_STEP = 2
EXIT_CONTRADICTION = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    input: Optional[str]
    scenario: Optional[str]
    perspective: Optional[str] = None
    format: str = "text"
    float_echo: bool = False
    output: Optional[str] = None


def _build_parser():
    parser = _ArgumentParser(prog="friendsim", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(p):
        p.add_argument("input", nargs="?", help="protocol file")
        p.add_argument("--scenario", choices=sorted(SCENARIOS), help="built-in scenario")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--float", dest="float_echo", action="store_true",
                       help="echo float values next to exact amplitudes")
        p.add_argument("-o", "--output", help="write to this path instead of stdout")

    p = sub.add_parser("run", help="run a protocol and print its trace")
    common(p)
    p.add_argument("--perspective", help="perspective name, or 'all'")

    p = sub.add_parser("check", help="compare perspectives for contradictory predictions")
    common(p)
    p.add_argument("--perspectives", help="comma-separated perspective names (default: all declared)")
    p.add_argument("--event", action="append", default=None,
                   help="event to compare, e.g. 'W_L=ok' (repeatable)")
    p.add_argument("--postselect", help="event every perspective is conditioned on")

    p = sub.add_parser("trace-diff", help="step-aligned diff of two perspectives")
    common(p)
    p.add_argument("a", help="first perspective")
    p.add_argument("b", help="second perspective")

    sub.add_parser("scenarios", help="list built-in scenarios")
    return parser


def _load(config: RunConfig):
    if config.input and config.scenario:
        raise UsageError("give either a protocol file or --scenario, not both")
    if config.scenario:
        return parse_protocol(scenario_text(config.scenario))
    if not config.input:
        raise UsageError("need a protocol file or --scenario")
    try:
        text = Path(config.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProtocolError(f"cannot read {config.input}: {exc.strerror}") from None
    return parse_protocol(text)


def _emit(config: RunConfig, text: str):
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_run(config: RunConfig) -> int:
    spec = _load(config)
    if config.perspective == "all":
        names = [p.name for p in spec.perspectives] or [None]
    else:
        names = [config.perspective]
    for name in names:
        if name is not None and name not in [p.name for p in spec.perspectives]:
            raise UsageError(f"unknown perspective {name!r}")
    traces = [run(spec, name) for name in names]
    if config.format == "json":
        body = [trace_to_json(t) for t in traces]
        _emit(config, dumps_json(body[0] if len(body) == 1 else body))
    else:
        _emit(config, "\n".join(render_trace(t, config.float_echo) for t in traces))
    return EXIT_OK


def cmd_check(config: RunConfig, perspectives=None, events=None, postselect=None) -> int:
    spec = _load(config)
    declared = [p.name for p in spec.perspectives]
    names = [n.strip() for n in perspectives.split(",")] if perspectives else declared
    for n in names:
        if n not in declared:
            raise UsageError(f"unknown perspective {n!r}")
    if len(names) < 2:
        raise UsageError("check needs at least two perspectives")
    if events:
        evs = [parse_event(e, spec) for e in events]
    elif spec.check is not None:
        evs = list(spec.check.events)
    else:
        evs = [q.event for q in spec.queries if q.given is None]
    if not evs:
        raise UsageError("no events to compare; pass --event")
    if postselect is not None:
        post = parse_event(postselect, spec)
    else:
        post = spec.check.postselect if spec.check is not None else None
    report = contradiction_report(spec, names, evs, post)
    if config.format == "json":
        _emit(config, dumps_json(report_to_json(report)))
    else:
        _emit(config, render_report(report))
    return EXIT_OK if report.consistent else EXIT_CONTRADICTION


def cmd_trace_diff(config: RunConfig, a: str, b: str) -> int:
    spec = _load(config)
    declared = [p.name for p in spec.perspectives]
    for n in (a, b):
        if n not in declared:
            raise UsageError(f"unknown perspective {n!r}")
    diff = diff_traces(run(spec, a), run(spec, b))
    if config.format == "json":
        _emit(config, dumps_json(diff))
    else:
        _emit(config, render_diff(diff))
    return EXIT_OK


def cmd_scenarios() -> int:
    for name, blurb in SCENARIOS.items():
        sys.stdout.write(f"{name}\t{blurb}\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "scenarios":
            return cmd_scenarios()
        config = RunConfig(
            input=args.input,
            scenario=args.scenario,
            perspective=getattr(args, "perspective", None),
            format=args.format,
            float_echo=args.float_echo,
            output=args.output,
        )
        if args.command == "run":
            return cmd_run(config)
        if args.command == "check":
            return cmd_check(config, args.perspectives, args.event, args.postselect)
        return cmd_trace_diff(config, args.a, args.b)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except StepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STEP
    except (ProtocolError, SemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FriendSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STEP


if __name__ == "__main__":
    raise SystemExit(main())
