"""
Command-line surface.

parse_args turns argv into a validated Command; execute runs it and returns
the exit code:

    0  success, no violation found
    1  a bound violation or a structure-claim failure on a member, or a
       replayed violation that still reproduces
    2  invalid input (bad flags, malformed graph, size cap, non-member)
    3  internal consistency failure (e.g. the chromatic engines disagree)

Records go to stdout (or --out) as JSON lines; text output is rendered from
the same records. Errors go to stderr as a JSON {"type": "error"} record.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import BaseModel

from chibound.core.codecs import (
    dimacs_read,
    dimacs_write,
    graph6_decode,
    graph6_encode,
    graph6_lines,
    looks_like_dimacs,
)
from chibound.core.config import settings
from chibound.core.errors import ChiboundError, GraphFormatError, NotAMemberError, UsageError
from chibound.core.graph import Graph
from chibound.models.schemas import (
    ALL_CHECKS,
    Command,
    DecompositionRecord,
    GeneratedGraph,
    InvariantRecord,
    MembershipRecord,
)
from chibound.services.generators import build_spec, generate
from chibound.services.invariants import invariant_report
from chibound.services.recognition import classify_membership
from chibound.services.structure import (
    check_partition,
    check_structure,
    clique_cover_bound,
    lemma1_partition,
    proof_decomposition,
)
from chibound.services.verify import (
    build_campaign_config,
    remark_experiment,
    replay_report,
    run_campaign,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDING = 1

_GRAPH_COMMANDS = ("check", "invariants", "decompose")
_DIMACS_SUFFIXES = (".col", ".dimacs")


# ============================================================================
# Argument parsing
# ============================================================================

class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", type=Path, default=None, help="Write records here")


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--g6", default=None, help="Inline graph6 string")
    source.add_argument("--file", default=None, help="graph6 lines or DIMACS .col; '-' reads stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=settings.app_name, description="Toolkit for {3K1, K1+C4}-free graphs")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    check = sub.add_parser("check", help="Membership verdict with a witness when excluded")
    _add_input_flags(check)
    _add_output_flags(check)

    invariants = sub.add_parser("invariants", help="Exact alpha, omega, chi with certificates")
    _add_input_flags(invariants)
    _add_output_flags(invariants)

    decompose = sub.add_parser("decompose", help="Clique partition, decomposition and claims")
    _add_input_flags(decompose)
    _add_output_flags(decompose)
    decompose.add_argument("--v", type=int, default=None, help="Anchor vertex v")
    decompose.add_argument("--w", type=int, default=None, help="Anchor vertex w")
    decompose.add_argument("--force", action="store_true", help="Decompose non-members too")

    verify = sub.add_parser("verify-bound", help="Exhaustive or random bound campaign")
    mode = verify.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", action="store_true")
    verify.add_argument("--min-n", type=int, default=1)
    verify.add_argument("--max-n", type=int, default=None)
    verify.add_argument("--count", type=int, default=1000)
    verify.add_argument("--p", type=float, default=settings.default_edge_probability)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--checks", default=",".join(ALL_CHECKS), help="Comma-separated")
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--timings", action="store_true", help="Record wall-clock time")
    _add_output_flags(verify)

    gen = sub.add_parser("generate", help="Build a graph from a generator spec")
    gen.add_argument(
        "--kind", required=True, choices=("cycle", "complete", "wheel", "join_power", "random")
    )
    gen.add_argument("--size", type=int, default=None)
    gen.add_argument("--copies", type=int, default=None)
    gen.add_argument("--factor-kind", choices=("cycle", "complete", "wheel"), default=None)
    gen.add_argument("--factor-size", type=int, default=None)
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--p", type=float, default=None)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--emit", choices=("graph6", "dimacs"), default="graph6")
    _add_output_flags(gen)

    replay = sub.add_parser("replay", help="Re-run the violations recorded in a campaign JSONL")
    replay.add_argument("--file", required=True, help="verify-bound JSONL output")
    _add_output_flags(replay)

    remark = sub.add_parser("remark", help="Join powers of C5 and the wheels")
    remark.add_argument("--k-max", type=int, default=3)
    _add_output_flags(remark)

    return parser


def parse_args(argv: Sequence[str]) -> Command:
    """
    Parse argv into a Command.

    Raises:
        UsageError: unknown subcommand or flag, conflicting or missing input
    """
    args = build_parser().parse_args(list(argv))
    if args.subcommand is None:
        raise UsageError(f"{settings.app_name}: a subcommand is required")

    options: dict[str, Any] = {}
    g6 = getattr(args, "g6", None)
    file = getattr(args, "file", None)

    if args.subcommand in _GRAPH_COMMANDS and g6 is None and file is None:
        raise UsageError(f"{args.subcommand}: one of the arguments --g6 --file is required")

    if args.subcommand == "decompose":
        if (args.v is None) != (args.w is None):
            raise UsageError("decompose: arguments --v and --w must be given together")
        options = {"v": args.v, "w": args.w, "force": args.force}

    elif args.subcommand == "verify-bound":
        if not (args.exhaustive or args.random):
            raise UsageError("verify-bound: one of the arguments --exhaustive --random is required")
        if args.max_n is None:
            raise UsageError("verify-bound: argument --max-n is required")
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in ALL_CHECKS]
        if unknown:
            raise UsageError(f"verify-bound: argument --checks: unknown checks {unknown}")
        options = {
            "mode": "exhaustive" if args.exhaustive else "random",
            "min_n": args.min_n,
            "max_n": args.max_n,
            "count": args.count,
            "p": args.p,
            "seed": args.seed,
            "checks": checks,
            "workers": args.workers,
            "record_timings": args.timings,
        }

    elif args.subcommand == "generate":
        options = {
            "kind": args.kind,
            "size": args.size,
            "copies": args.copies,
            "factor_kind": args.factor_kind,
            "factor_size": args.factor_size,
            "n": args.n,
            "p": args.p,
            "seed": args.seed,
            "emit": args.emit,
        }

    elif args.subcommand == "remark":
        options = {"k_max": args.k_max}

    return Command(
        subcommand=args.subcommand,
        g6=g6,
        file=file,
        format=args.format,
        out=args.out,
        options=options,
    )


# ============================================================================
# Input / output
# ============================================================================

def load_graphs(cmd: Command, stdin=None) -> list[Graph]:
    """Decode the single input source of cmd."""
    if cmd.g6 is not None:
        return [graph6_decode(cmd.g6)]
    if cmd.file == "-":
        try:
            return graph6_lines((stdin or sys.stdin).read())
        except UnicodeDecodeError as e:
            raise GraphFormatError(f"stdin is not valid UTF-8: {e.reason} at byte {e.start}") from e

    path = Path(cmd.file)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"{path} is not valid UTF-8: {e.reason} at byte {e.start}") from e
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e.strerror or e}") from e
    if path.suffix.lower() in _DIMACS_SUFFIXES or looks_like_dimacs(text):
        return [dimacs_read(text)]
    return graph6_lines(text)


def render_text(record: BaseModel) -> str:
    """One 'key: value' line per top-level field of the record's JSON form."""
    data = record.model_dump(mode="json")
    lines = []
    for key, value in data.items():
        scalar = value is None or isinstance(value, (str, int, float, bool))
        shown = value if scalar else json.dumps(value)
        lines.append(f"{key}: {shown}")
    return "\n".join(lines) + "\n"


def render(records: list[BaseModel], fmt: str) -> str:
    if fmt == "text":
        return "\n".join(render_text(r) for r in records)
    return "".join(r.model_dump_json() + "\n" for r in records)


def _emit(cmd: Command, payload: str, stdout) -> None:
    if cmd.out is not None:
        cmd.out.parent.mkdir(parents=True, exist_ok=True)
        cmd.out.write_text(payload, encoding="utf-8")
    else:
        stdout.write(payload)


# ============================================================================
# Subcommands
# ============================================================================

def _run_check(graphs: list[Graph]) -> tuple[list[BaseModel], int]:
    records = []
    for g in graphs:
        verdict = classify_membership(g)
        records.append(MembershipRecord(
            graph6=graph6_encode(g), n=g.n, m=g.m, member=verdict.member, witness=verdict.witness
        ))
    return records, EXIT_OK


def _run_invariants(graphs: list[Graph]) -> tuple[list[BaseModel], int]:
    records = [InvariantRecord(graph6=graph6_encode(g), report=invariant_report(g)) for g in graphs]
    return records, EXIT_OK


def _decompose_one(g: Graph, pair: Optional[tuple[int, int]], force: bool) -> DecompositionRecord:
    verdict = classify_membership(g)
    if not verdict.member and not force:
        raise NotAMemberError(
            f"decompose needs a {{3K1, K1+C4}}-free graph; found {verdict.witness.kind} "
            f"at {verdict.witness.vertices} (use --force)",
            witness=verdict.witness,
        )

    partition = lemma1_partition(g, pair=pair, check_membership=False)
    issues = check_partition(g, partition)
    record = DecompositionRecord(
        graph6=graph6_encode(g),
        member=verdict.member,
        witness=verdict.witness,
        partition=partition,
        partition_issues=issues,
        clique_cover_bound=clique_cover_bound(g) if verdict.member else None,
    )
    if not g.is_complete():
        decomposition = proof_decomposition(g, pair=pair, force=True)
        record.decomposition = decomposition
        record.structure = check_structure(g, decomposition)
    return record


def _run_decompose(graphs: list[Graph], options: dict) -> tuple[list[BaseModel], int]:
    pair = (options["v"], options["w"]) if options.get("v") is not None else None
    records = [_decompose_one(g, pair, options.get("force", False)) for g in graphs]
    failed = any(
        r.member and (r.partition_issues or (r.structure is not None and not r.structure.holds))
        for r in records
    )
    return records, EXIT_FINDING if failed else EXIT_OK


def _run_verify(cmd: Command) -> tuple[list[BaseModel], int]:
    cfg = build_campaign_config(**cmd.options, output=cmd.out if cmd.format == "json" else None)
    report = run_campaign(cfg)
    records = [*report.extremal, *report.violations, report]
    return records, EXIT_OK if report.clean else EXIT_FINDING


def _run_replay(cmd: Command) -> tuple[list[BaseModel], int]:
    rows = replay_report(cmd.file)
    reproduced = any(row.fresh is not None for row in rows)
    return rows, EXIT_FINDING if reproduced else EXIT_OK


def _run_generate(options: dict) -> tuple[list[BaseModel], int, Optional[str]]:
    kind = options["kind"]
    fields: dict[str, Any] = {"kind": kind}
    if kind in ("cycle", "complete", "wheel"):
        fields["size"] = options["size"]
    elif kind == "join_power":
        if options["factor_kind"] is None:
            raise UsageError("generate: argument --factor-kind is required for join_power")
        fields["factor"] = build_spec(kind=options["factor_kind"], size=options["factor_size"])
        fields["copies"] = options["copies"]
    else:
        fields["n"] = options["n"]
        p = options["p"]
        fields["p"] = p if p is not None else settings.default_edge_probability
        fields["seed"] = options["seed"] if options["seed"] is not None else 0
    spec = build_spec(**fields)
    g = generate(spec)
    raw = dimacs_write(g) if options.get("emit") == "dimacs" else None
    return [GeneratedGraph(graph6=graph6_encode(g), n=g.n, m=g.m, spec=spec)], EXIT_OK, raw


def execute(cmd: Command, stdout=None, stderr=None, stdin=None) -> int:
    """
    Run cmd, writing records to stdout (or cmd.out) and errors to stderr.

    Returns:
        Exit code 0, 1, 2 or 3
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        raw: Optional[str] = None
        if cmd.subcommand == "check":
            records, code = _run_check(load_graphs(cmd, stdin))
        elif cmd.subcommand == "invariants":
            records, code = _run_invariants(load_graphs(cmd, stdin))
        elif cmd.subcommand == "decompose":
            records, code = _run_decompose(load_graphs(cmd, stdin), cmd.options)
        elif cmd.subcommand == "verify-bound":
            records, code = _run_verify(cmd)
            if cmd.out is not None and cmd.format == "json":
                # run_campaign already wrote the JSONL file
                return code
        elif cmd.subcommand == "replay":
            records, code = _run_replay(cmd)
        elif cmd.subcommand == "generate":
            records, code, raw = _run_generate(cmd.options)
        else:
            report = remark_experiment(cmd.options["k_max"])
            records, code = list(report.rows), EXIT_OK

        _emit(cmd, raw if raw is not None else render(records, cmd.format), stdout)
        return code

    except ChiboundError as e:
        logger.error(f"{cmd.subcommand} failed: {e}")
        stderr.write(json.dumps(e.to_record()) + "\n")
        return e.exit_code
    except OSError as e:
        logger.error(f"{cmd.subcommand} failed: {e}")
        stderr.write(json.dumps({"type": "error", "error": "OSError", "message": str(e)}) + "\n")
        return 2


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None, stdin=None) -> int:
    """parse_args then execute; usage errors exit 2 with the JSON error record."""
    stderr = stderr or sys.stderr
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        stderr.write(json.dumps(e.to_record()) + "\n")
        return e.exit_code
    return execute(cmd, stdout=stdout, stderr=stderr, stdin=stdin)
