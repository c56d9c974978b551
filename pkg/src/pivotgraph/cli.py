"""Command-line front end: analyze, gen, verify, fiber.

Exit codes: 0 when every applicable check holds, 1 on a check failure or
counterexample, 2 on malformed input or configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path
from typing import Sequence

from pivotgraph import __version__
from pivotgraph.autgroup import POLICIES, automorphism_group
from pivotgraph.errors import CapacityError, InputError
from pivotgraph.fiber import NonMinimalWarning, bound_report
from pivotgraph.io import digest, dumps, fiber_from_json, graph_from_json, group_from_json, read_json
from pivotgraph.permgroup import default_cap
from pivotgraph.pivot import gen_circle, gen_necklace, gen_path, gen_star, pivot_report
from pivotgraph.verifier import MAX_N, EnumerationSpec, run_property_suite, run_suite

log = logging.getLogger("pivotgraph")

FAMILIES = {"circle": gen_circle, "necklace": gen_necklace, "path": gen_path, "star": gen_star}

OK, FAIL, BAD_INPUT = 0, 1, 2


def _tool() -> dict:
    return {"name": "pivotgraph", "version": __version__}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from None


def cmd_analyze(args: argparse.Namespace) -> int:
    data, raw = read_json(args.graph)
    g = graph_from_json(data)
    cap = default_cap()
    if args.group:
        gdata, graw = read_json(args.group)
        G = group_from_json(gdata, g.vertices, cap=cap)
        source = "supplied"
        dig = digest(raw, graw)
    else:
        G = automorphism_group(g, cap=cap)
        source = "automorphisms"
        dig = digest(raw)
    report = pivot_report(g, G)
    body = {
        "tool": _tool(),
        "input_digest": dig,
        "group_source": source,
        **report.to_dict(),
        "status": "fail" if report.failed else "pass",
    }
    _emit(dumps(body), args.out)
    return FAIL if report.failed else OK


def cmd_gen(args: argparse.Namespace) -> int:
    g = FAMILIES[args.family](args.n)
    _emit(dumps(g.to_dict()), args.out)
    return OK


def cmd_verify(args: argparse.Namespace) -> int:
    spec = EnumerationSpec(
        max_n=args.max_n,
        policy=args.policy,
        cap=default_cap(),
        jobs=args.jobs,
        up_to_conjugacy=not args.all_conjugates,
    )
    report = run_suite(spec)
    if args.random_cases:
        report.property_suite = run_property_suite(cases=args.random_cases, seed=args.seed)
    if args.dump_dir and report.counterexamples:
        _dump_bundles(Path(args.dump_dir), report.counterexamples)
    _emit(dumps(report.to_dict()), args.out)
    for ce in report.counterexamples:
        log.error("counterexample to %s: %s", ce["check"], ce["graph"]["edges"])
    return OK if report.ok else FAIL


def _dump_bundles(root: Path, bundles: list[dict]) -> None:
    """One graph file and one group file per counterexample, replayable with ``analyze``."""
    try:
        root.mkdir(parents=True, exist_ok=True)
        for k, b in enumerate(bundles):
            (root / f"ce{k:04d}.graph.json").write_text(dumps(b["graph"]))
            (root / f"ce{k:04d}.group.json").write_text(dumps(b["group"]))
            (root / f"ce{k:04d}.json").write_text(dumps(b))
    except OSError as exc:
        raise InputError(f"cannot write bundles to {root}: {exc.strerror}") from None


def cmd_fiber(args: argparse.Namespace) -> int:
    data, raw = read_json(args.input)
    f = fiber_from_json(data, strict=args.strict)
    with warnings.catch_warnings():
        # surfaced in the report's warnings list instead
        warnings.simplefilter("ignore", NonMinimalWarning)
        report = bound_report(f)
    body = {"tool": _tool(), "input_digest": digest(raw), "strict": args.strict, **report.to_dict()}
    _emit(dumps(body), args.out)
    return FAIL if report.status == "fail" else OK


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pivotgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="pivot set and bounds for a graph and a group action")
    p.add_argument("--graph", required=True, help="graph JSON file")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--group", help="group JSON file (generators as partial mappings)")
    which.add_argument("--aut", action="store_true", help="use the full automorphism group")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="emit an example graph family member")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check every bound on all small connected graphs")
    p.add_argument("--max-n", required=True, type=int, help=f"largest vertex count (at most {MAX_N})")
    p.add_argument("--policy", choices=POLICIES, default="pairs")
    p.add_argument("--seed", type=int, default=0, help="seed for the random property suite")
    p.add_argument("--random-cases", type=_nonnegative, default=1000, help="property-suite cases (0 to skip)")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--all-conjugates", action="store_true", help="test every subgroup, not one per conjugacy class")
    p.add_argument("--dump-dir", help="write each counterexample as replayable graph/group files")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fiber", help="evaluate special-fiber data")
    p.add_argument("input", help="fiber JSON file")
    p.add_argument("--strict", action="store_true", help="also require per-component balance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fiber)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, CapacityError) as exc:
        print(f"pivotgraph: error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
