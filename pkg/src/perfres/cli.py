"""Command-line entry point: decide, synth, route, verify, gadget."""
from __future__ import annotations

import argparse
import sys

from .errors import ParseError, PerfresError
from .graph import fmt_link, format_rooted_graph, link, parse_failure_set, parse_rooted_graph
from .patterns import format_pattern, parse_pattern, route
from .synth import Decision, decide, decide_all_targets, synthesize
from .verify import GADGETS, Ok, gadget, skipping_pattern_fixture, verify_exhaustive

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path):
    return parse_rooted_graph(_read(path))


def parse_fail_arg(text: str) -> list:
    """'1-2,3-4' -> [(1, 2), (3, 4)]"""
    out = []
    for token in filter(None, (x.strip() for x in text.split(","))):
        a, sep, b = token.partition("-")
        if not sep or not a.isdigit() or not b.isdigit():
            raise ParseError(f"bad link {token!r}, expected u-v")
        out.append(link(int(a), int(b)))
    return out


def explain_lines(decision: Decision) -> list:
    lines = []
    if decision.outside:
        lines.append(f"outside t's component: {' '.join(map(str, sorted(decision.outside)))}")
    for b in decision.blocks:
        g, rep = b.graph, b.report
        lines.append(f"block {b.index}: target {g.target}, {g.n} nodes, {g.m} links, class {b.kind}")
        if rep.sep_t:
            lines.append("  separating t-links: " + " ".join(fmt_link(e) for e in sorted(rep.sep_t)))
        for e in sorted(rep.sep_other):
            inner = " ".join(fmt_link(f) for f in sorted(rep.s(e)))
            mu = f" exit {b.mu[e]}" if e in b.mu else ""
            lines.append(f"  separating {fmt_link(e)}{mu}: cuts off {inner}")
    return ["# " + s for s in lines]


def cmd_decide(args) -> int:
    g = _load_graph(args.graph)
    if args.all_targets:
        verdicts = decide_all_targets(g)
        for t, d in verdicts.items():
            print(f"t={t} {d.describe()}")
        return EXIT_OK if all(d.yes for d in verdicts.values()) else EXIT_NO
    d = decide(g)
    if args.explain:
        print("\n".join(explain_lines(d)))
    print(d.describe())
    return EXIT_OK if d.yes else EXIT_NO


def cmd_synth(args) -> int:
    g = _load_graph(args.graph)
    result = synthesize(g)
    if args.explain:
        print("\n".join(explain_lines(result.decision)), file=sys.stderr)
    if result.pattern is None:
        print(f"NOT-RESILIENT {result.decision.describe()}")
        return EXIT_NO
    text = format_pattern(result.pattern)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_route(args) -> int:
    g = _load_graph(args.graph)
    p = parse_pattern(_read(args.pattern))
    failed = parse_fail_arg(args.fail) if args.fail else []
    if args.fail_file:
        failed += parse_failure_set(_read(args.fail_file), g)
    r = route(g, p, args.source, failed)
    print(r)
    return EXIT_OK if r.reached else EXIT_NO


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    p = parse_pattern(_read(args.pattern))
    res = verify_exhaustive(g, p, cap=args.cap)
    print(res)
    return EXIT_OK if isinstance(res, Ok) else EXIT_NO


def cmd_gadget(args) -> int:
    if args.pattern:
        sys.stdout.write(format_pattern(skipping_pattern_fixture(args.name)))
    else:
        sys.stdout.write(format_rooted_graph(gadget(args.name)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perfres", description="Perfectly resilient forwarding on rooted graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="print YES or NO with the reason")
    d.add_argument("graph")
    d.add_argument("--explain", action="store_true", help="dump blocks, separators and classes")
    d.add_argument("--all-targets", action="store_true", help="decide for every node as the target")
    d.set_defaults(func=cmd_decide)

    s = sub.add_parser("synth", help="write a resilient pattern, or NOT-RESILIENT")
    s.add_argument("graph")
    s.add_argument("-o", "--output", help="pattern file (default: stdout)")
    s.add_argument("--explain", action="store_true", help="stage diagnostics on stderr")
    s.set_defaults(func=cmd_synth)

    r = sub.add_parser("route", help="follow a pattern from a source under failures")
    r.add_argument("graph")
    r.add_argument("pattern")
    r.add_argument("--source", type=int, required=True)
    r.add_argument("--fail", default="", help="failed links as u-v,u-v")
    r.add_argument("--fail-file", help="failure set file with 'f u v' lines")
    r.set_defaults(func=cmd_route)

    v = sub.add_parser("verify", help="check a pattern against every failure set")
    v.add_argument("graph")
    v.add_argument("pattern")
    v.add_argument("--cap", type=int, default=20, help="refuse graphs with more links (default 20)")
    v.set_defaults(func=cmd_verify)

    gd = sub.add_parser("gadget", help="print a fixture graph")
    gd.add_argument("name", choices=sorted(GADGETS))
    gd.add_argument("--pattern", action="store_true", help="print the hand-written looping pattern instead")
    gd.set_defaults(func=cmd_gadget)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (PerfresError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
