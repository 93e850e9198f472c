"""Command-line interface.

Exit status: 0 on success, 1 on domain errors (bad strategy file, chip out of
range, scope guard), 2 on usage errors (argparse).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .engine import Strategy, canonical_strategy, random_strategy, run_strategy
from .errors import ChipFiringError
from .formulas import (
    boundary_diagnostic,
    extreme_range_lengths,
    extreme_spreads,
    group_partition,
    spread_profile,
    terminal_ranges,
)
from .oracle import (
    DEFAULT_GUARD,
    REACHABILITY_GUARD,
    EnumerationScope,
    enumerate_stable,
    reachability_certificate,
)
from .tree import (
    GameParams,
    LandingOrder,
    format_traversal,
    landing_order_index,
    parse_traversal,
    vertex_index,
)
from .witness import verify_witness, witness_strategy


@dataclass
class OutputDocument:
    format: str
    columns: list[str] | None = None
    rows: list[list] | None = None
    payload: dict | None = None

    def render(self) -> str:
        if self.format == "json":
            if self.payload is not None:
                return json.dumps(self.payload, indent=2)
            return json.dumps([dict(zip(self.columns, row)) for row in self.rows], indent=2)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue().rstrip("\n")


def render_ranges_table(params: GameParams, by_multiset: bool, fmt: str = "csv") -> OutputDocument:
    if params.n < 1:
        raise ChipFiringError("ranges need n >= 1")
    rows = [
        [format_traversal(r.t), r.lo, r.hi, r.length]
        for r in sorted(terminal_ranges(params, by_multiset), key=lambda r: r.t)
    ]
    return OutputDocument(fmt, ["t", "a", "b", "length"], rows)


def format_permutation(perm) -> str:
    if all(c < 10 for c in perm):
        return "".join(map(str, perm))
    return ",".join(map(str, perm))


def parse_permutation(text: str) -> tuple[int, ...]:
    """Comma-separated labels, or the compact digit form printed when every label is below 10."""
    text = text.replace(" ", "")
    if "," not in text and len(text) > 1 and text.isdigit():
        return tuple(int(d) for d in text)
    try:
        return tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise ChipFiringError(f"not a comma-separated permutation: {text!r}") from None


def _params(args) -> GameParams:
    return GameParams(args.k, args.n)


def _profile_row(c: int, params: GameParams) -> list:
    if c in (1, params.total_chips):
        t = (1,) * params.n if c == 1 else (params.k,) * params.n
        idx = vertex_index(t, params)
        s = format_traversal(t)
        return [c, "", "", "", "", s, s, idx, idx, 1]
    p = spread_profile(c, params)
    return [
        c, p.m, p.y, p.j, p.x,
        format_traversal(p.leftmost), format_traversal(p.rightmost),
        vertex_index(p.leftmost, params), vertex_index(p.rightmost, params), p.spread,
    ]


PROFILE_COLUMNS = ["c", "m", "y", "j", "x", "leftmost", "rightmost", "left_index", "right_index", "spread"]


def cmd_ranges(args):
    params = _params(args)
    print(render_ranges_table(params, args.by_multiset, args.format).render())
    if args.extremes:
        ext = extreme_range_lengths(params)
        print(f"# shortest nontrivial: {ext.shortest}", file=sys.stderr)
        print(f"# longest: {ext.longest}", file=sys.stderr)


def cmd_index(args):
    params = _params(args)
    t = parse_traversal(args.t, params)
    print(landing_order_index(LandingOrder(t, args.x), params))


def cmd_simulate(args):
    params = _params(args)
    if args.strategy:
        strategy = Strategy.from_json(Path(args.strategy).read_text())
        if strategy.params != params:
            raise ChipFiringError(f"strategy file is for k={strategy.params.k}, n={strategy.params.n}")
    elif args.random:
        strategy = random_strategy(params, random.Random(args.seed))
    else:
        strategy = canonical_strategy(params)
    result = run_strategy(params, strategy)
    if args.format == "json":
        doc = {"permutation": list(result.permutation)}
        if args.record:
            doc["record"] = {
                str(c): [[format_traversal(o.t), o.x] for o in orders]
                for c, orders in sorted(result.record.items())
            }
        print(json.dumps(doc, indent=2))
        return
    print(format_permutation(result.permutation))
    if args.record:
        for c, orders in sorted(result.record.items()):
            print(c, " ".join(f"({format_traversal(o.t)},{o.x})" for o in orders))


def cmd_witness(args):
    params = _params(args)
    t = parse_traversal(args.t, params)
    strategy = witness_strategy(t, args.x, args.c, params)
    text = strategy.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.verify:
        if not verify_witness(strategy, t, args.x, args.c):
            raise ChipFiringError("verification failed: engine run did not place the chip")
        print(f"VERIFIED chip {args.c} at ({format_traversal(t)},{args.x})", file=sys.stderr)


def cmd_spread(args):
    params = _params(args)
    doc = OutputDocument(args.format, PROFILE_COLUMNS, [_profile_row(args.c, params)])
    print(doc.render())


def _extremes_payload(params: GameParams) -> dict:
    ext = extreme_spreads(params)
    return {
        name: {"spread": e.spread, "chips": list(e.chips)}
        for name, e in (
            ("smallest", ext.smallest),
            ("second_smallest", ext.second_smallest),
            ("largest", ext.largest),
        )
    }


def cmd_spreads(args):
    params = _params(args)
    rows = [_profile_row(c, params) for c in range(1, params.total_chips + 1)]
    extremes = _extremes_payload(params) if params.n >= 2 else None
    if args.format == "json":
        doc = {"profiles": [dict(zip(PROFILE_COLUMNS, r)) for r in rows], "extremes": extremes}
        print(json.dumps(doc, indent=2))
        return
    print(OutputDocument("csv", PROFILE_COLUMNS, rows).render())
    if extremes:
        for name, e in extremes.items():
            print(f"# {name}: spread {e['spread']} on chips {e['chips']}")


def cmd_groups(args):
    params = _params(args)
    part = group_partition(params)
    diag = boundary_diagnostic(params)
    rows = [[i + 1, lo, hi] for i, (lo, hi) in enumerate(part.groups)]
    if args.format == "json":
        doc = {
            "boundaries": list(part.boundaries),
            "groups": [{"group": g, "first": lo, "last": hi} for g, lo, hi in rows],
            "diagnostic": {
                "boundaries_equal_group_starts": diag.agree,
                "boundaries_not_starting_group": list(diag.boundaries_not_starting_group),
                "group_starts_not_in_boundaries": list(diag.group_starts_not_in_boundaries),
                "a_and_b_plus_one_equal_group_starts": diag.shifted_agree,
            },
        }
        print(json.dumps(doc, indent=2))
        return
    print(OutputDocument("csv", ["group", "first", "last"], rows).render())
    print(f"# boundaries: {' '.join(map(str, part.boundaries))}")
    print(f"# boundaries equal group starts: {diag.agree}")
    if not diag.agree:
        print(f"#   boundaries not starting a group: {list(diag.boundaries_not_starting_group)}")
        print(f"#   group starts not in boundaries: {list(diag.group_starts_not_in_boundaries)}")
    print(f"# a-values and b+1 equal group starts: {diag.shifted_agree}")


def cmd_enumerate(args):
    params = _params(args)
    perms = sorted(enumerate_stable(EnumerationScope(params, args.guard), workers=args.workers))
    if args.format == "json":
        print(json.dumps({"count": len(perms), "permutations": [list(p) for p in perms]}, indent=2))
        return
    for p in perms:
        print(format_permutation(p))
    print(f"# {len(perms)} stable permutations", file=sys.stderr)


def cmd_check(args):
    params = _params(args)
    perm = parse_permutation(args.perm)
    cert = reachability_certificate(perm, EnumerationScope(params, args.guard))
    if cert.reachable:
        print("REACHABLE")
        if args.certificate:
            Path(args.certificate).write_text(cert.strategy.to_json() + "\n")
    else:
        print("UNREACHABLE")
        print(f"reason: {cert.reason}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kary-chipfiring",
        description="Labeled chip-firing on directed k-ary trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def game(name, help, fmt=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        if fmt:
            p.add_argument("--format", choices=["csv", "json"], default="csv")
        return p

    p = game("ranges", "landing range of every terminal vertex")
    p.add_argument("--by-multiset", action="store_true", help="one row per digit multiset")
    p.add_argument("--extremes", action="store_true", help="also report extreme lengths on stderr")
    p.set_defaults(func=cmd_ranges)

    p = game("index", "left-to-right index of a landing order", fmt=False)
    p.add_argument("--t", required=True, help="traversal string ('' for the root)")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_index)

    p = game("simulate", "run a strategy and print the stable permutation")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--canonical", action="store_true")
    how.add_argument("--strategy", metavar="FILE")
    how.add_argument("--random", action="store_true", help="random k-set partitions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--record", action="store_true", help="print every chip's landing orders")
    p.set_defaults(func=cmd_simulate)

    p = game("witness", "strategy placing chip C at landing order (T, X)", fmt=False)
    p.add_argument("--t", required=True)
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = game("spread", "spread profile of one chip")
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(func=cmd_spread)

    p = game("spreads", "spread profiles of all chips and the extreme spreads")
    p.set_defaults(func=cmd_spreads)

    p = game("groups", "chip groups sharing terminal landing sets")
    p.set_defaults(func=cmd_groups)

    p = game("enumerate", "all stable permutations (exhaustive)")
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = game("check", "decide whether a stable permutation is reachable", fmt=False)
    p.add_argument("--perm", required=True, help="comma-separated labels, left to right")
    p.add_argument("--guard", type=int, default=REACHABILITY_GUARD)
    p.add_argument("--certificate", metavar="FILE", help="write a witnessing strategy here")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ChipFiringError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
