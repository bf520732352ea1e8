"""Command-line interface.

Subcommands: `validate`, `solve`, `whatif`, `check`, `explain`.  Exit codes
are distinct per failure class: 0 success, 2 parse error, 3 validation
error, 4 unsatisfiable constraints.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from . import casefile, explain as explain_mod, scheme as scheme_mod, solver
from .casefile import CaseDocument, CaseParseError, SessionLog
from .dsl import ConstraintSyntaxError, parse_constraint
from .graph import GraphError
from .rationals import as_rat, fmt_display, fmt_exact, fmt_interval
from .scheme import CaseUnsatisfiableError, LegalCase, SchemeError, Verdict

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNSAT = 4

BUNDLED_DIR = Path(__file__).parent / "cases"


def bundled_case_path(name: str) -> Path:
    return BUNDLED_DIR / f"{name}.case"


def belief_rows(case: LegalCase, verdict: Verdict, exact: bool) -> list[str]:
    """One row per argument in declaration order, Innocence as the scalar
    belief, assumption-constrained arguments marked with an asterisk."""
    constrained = case.constrained_args()
    rows = []
    for name in case.graph.arguments:
        lo, hi = verdict.bounds[name]
        if name == scheme_mod.INNOCENCE and not case.raw:
            text = fmt_exact(hi) if exact else fmt_display(hi)
        else:
            text = fmt_interval(lo, hi, exact=exact)
        mark = " *" if name in constrained else ""
        rows.append(f"{name}: {text}{mark}")
    return rows


def _load_document(path: str) -> CaseDocument:
    return casefile.load(path)


def _apply_cli_assumptions(case: LegalCase, texts: Sequence[str]) -> LegalCase:
    for text in texts:
        case, _ = scheme_mod.assume(case, parse_constraint(text))
    return case


def _print_unsat(exc: CaseUnsatisfiableError, out: TextIO) -> None:
    if exc.assumption_refs:
        out.write(
            "unsatisfiable: conflicting assumptions: "
            + ", ".join(exc.assumption_refs)
            + "\n"
        )
    else:
        out.write("unsatisfiable\n")


# -- subcommands ------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    doc = _load_document(args.case)
    case = doc.to_case()
    n_scheme = len(case.scheme_constraints)
    out.write(
        f"ok: {len(case.graph)} arguments, {sum(1 for _ in case.graph.edges())} edges, "
        f"{n_scheme} scheme constraints, {len(doc.assumptions)} assumptions\n"
    )
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, out: TextIO) -> int:
    doc = _load_document(args.case)
    case = _apply_cli_assumptions(doc.to_case(), args.assume)
    verdict = scheme_mod.beliefs(case)
    for row in belief_rows(case, verdict, args.exact):
        out.write(row + "\n")
    return EXIT_OK


def cmd_explain(args: argparse.Namespace, out: TextIO) -> int:
    doc = _load_document(args.case)
    case = _apply_cli_assumptions(doc.to_case(), args.assume)
    verdict = scheme_mod.beliefs(case)
    if args.argument == "verdict":
        threshold = as_rat(args.threshold) if args.threshold else doc.threshold
        e = explain_mod.explain_verdict(case, verdict.bounds, threshold)
    elif args.bound == "lower":
        e = explain_mod.explain_lower(case, verdict.bounds, args.argument)
    else:
        e = explain_mod.explain_upper(case, verdict.bounds, args.argument)
    out.write(explain_mod.render(e, depth=args.depth) + "\n")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    doc = _load_document(args.case)
    case = doc.to_case()
    report: dict = {"validation": "ok"}
    failures = 0
    if not case.raw:
        verdict = scheme_mod.beliefs(case)
        checks = scheme_mod.check_consequences(case, verdict.bounds)
        report["consequences"] = [
            {"name": c.name, "lhs": fmt_exact(c.lhs), "rhs": fmt_exact(c.rhs), "holds": c.holds}
            for c in checks
        ]
        failures += sum(1 for c in checks if not c.holds)
    else:
        verdict = scheme_mod.beliefs(case)
        report["consequences"] = []
    use_oracle = args.oracle or doc.oracle
    if use_oracle:
        n = len(case.graph)
        cs = case.all_constraints()
        if n <= solver.ORACLE_MAX_ARGS:
            oracle_bounds = solver.oracle_entail_all(case.graph, cs)
            mode = "explicit"
        elif n <= solver.WORLD_CG_MAX_ARGS:
            oracle_bounds = solver.world_bounds_cg(case.graph, cs)
            mode = "column-generation"
        else:
            oracle_bounds = None
            mode = "skipped"
        if oracle_bounds is None:
            report["oracle"] = {"mode": mode, "match": None}
        else:
            mismatches = [
                name
                for name in case.graph.arguments
                if oracle_bounds[name] != verdict.bounds[name]
            ]
            report["oracle"] = {"mode": mode, "match": not mismatches, "mismatches": mismatches}
            failures += len(mismatches)
    out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


WHATIF_HELP = """commands:
  assume <constraint>     add an assumption (e.g. assume p(T3) >= 0.7)
  retract <id>            drop an assumption by id
  solve                   compute and print the belief table
  verdict                 classify the case at the current threshold
  explain <arg> [lower|upper] [depth]   explain a bound (default upper)
  list                    list active assumptions
  undo                    revert the last assume/retract
  save-session <path>     write the session log
  help                    this text
  quit                    leave the loop
"""


def cmd_whatif(args: argparse.Namespace, out: TextIO, inp: TextIO | None = None) -> int:
    doc = _load_document(args.case)
    case = doc.to_case()
    threshold = as_rat(args.threshold) if args.threshold else doc.threshold
    log = SessionLog()
    if args.session and Path(args.session).exists():
        replayed = casefile.replay(doc, SessionLog.load(args.session).entries)
        for entry, replay_case, verdict in replayed:
            case = replay_case
            log.entries.append(entry)
            if verdict is not None:
                for row in belief_rows(case, verdict, args.exact):
                    out.write(row + "\n")
    stream = inp if inp is not None else sys.stdin
    interactive = stream.isatty()
    undo_stack: list[tuple[LegalCase, int]] = []
    last_verdict: Verdict | None = None

    def solve_now() -> Verdict | None:
        nonlocal last_verdict
        try:
            verdict = scheme_mod.beliefs(case)
        except CaseUnsatisfiableError as exc:
            _print_unsat(exc, out)
            log.record("solve", innocence=None)
            last_verdict = None
            return None
        last_verdict = verdict
        innocence = fmt_exact(verdict.innocence_belief) if verdict.innocence_belief is not None else None
        log.record("solve", innocence=innocence)
        for row in belief_rows(case, verdict, args.exact):
            out.write(row + "\n")
        return verdict

    while True:
        if interactive:
            out.write("whatif> ")
            out.flush()
        line = stream.readline()
        if not line:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        op, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if op in ("quit", "exit"):
                break
            elif op == "help":
                out.write(WHATIF_HELP)
            elif op == "assume":
                constraints = parse_constraint(rest)
                undo_stack.append((case, len(log.entries)))
                case, ref = scheme_mod.assume(case, constraints)
                log.record("assume", payload=rest, ref=ref)
                out.write(f"assumed {ref}: {rest}\n")
            elif op == "retract":
                undo_stack.append((case, len(log.entries)))
                case = scheme_mod.retract(case, rest)
                log.record("retract", payload=rest)
                out.write(f"retracted {rest}\n")
            elif op == "solve":
                solve_now()
            elif op == "verdict":
                verdict = last_verdict
                if verdict is None:
                    verdict = solve_now()
                if verdict is not None:
                    if case.raw:
                        out.write("verdict needs a scheme case\n")
                    else:
                        e = explain_mod.explain_verdict(case, verdict.bounds, threshold)
                        out.write(explain_mod.render(e, depth=2) + "\n")
            elif op == "explain":
                parts = rest.split()
                if not parts:
                    out.write("error: explain needs an argument name\n")
                    continue
                arg = parts[0]
                bound = parts[1] if len(parts) > 1 else "upper"
                depth = int(parts[2]) if len(parts) > 2 else 2
                verdict = last_verdict
                if verdict is None:
                    verdict = solve_now()
                if verdict is not None:
                    if bound == "lower":
                        e = explain_mod.explain_lower(case, verdict.bounds, arg)
                    else:
                        e = explain_mod.explain_upper(case, verdict.bounds, arg)
                    out.write(explain_mod.render(e, depth=depth) + "\n")
            elif op == "list":
                refs = case.assumption_refs()
                if not refs:
                    out.write("no assumptions\n")
                for ref in refs:
                    texts = [
                        entry.payload
                        for entry in log.entries
                        if entry.action == "assume" and entry.ref == ref
                    ]
                    doc_texts = [t for r, t in doc.assumptions if r == ref]
                    text = (texts or doc_texts or ["?"])[-1]
                    out.write(f"{ref}: {text}\n")
            elif op == "undo":
                if not undo_stack:
                    out.write("nothing to undo\n")
                else:
                    case, log_len = undo_stack.pop()
                    del log.entries[log_len:]
                    last_verdict = None
                    out.write("undone\n")
            elif op == "save-session":
                if not rest:
                    out.write("error: save-session needs a path\n")
                else:
                    log.dump(rest)
                    out.write(f"session saved to {rest}\n")
            else:
                out.write(f"error: unknown command {op!r} (try help)\n")
        except (ConstraintSyntaxError, CaseParseError) as exc:
            out.write(f"error: {exc}\n")
        except (SchemeError, GraphError, explain_mod.ExplainError, ValueError) as exc:
            out.write(f"error: {exc}\n")
    if args.session:
        log.dump(args.session)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legalarg",
        description="Exact belief intervals over weighted argument graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, assume: bool = False) -> None:
        p.add_argument("--case", required=True, help="case file path")
        p.add_argument("--exact", action="store_true", help="print exact rationals")
        p.add_argument("--threshold", default=None, help="verdict threshold, e.g. 3/4")
        if assume:
            p.add_argument(
                "--assume", action="append", default=[], metavar="CONSTRAINT",
                help="extra assumption (repeatable)",
            )

    p = sub.add_parser("validate", help="parse and structurally validate a case file")
    common(p)
    p = sub.add_parser("solve", help="print the belief table")
    common(p, assume=True)
    p = sub.add_parser("whatif", help="interactive assumption loop")
    common(p)
    p.add_argument("--session", default=None, help="session log to replay and append")
    p = sub.add_parser("check", help="structural checks and oracle comparison")
    common(p)
    p.add_argument("--oracle", action="store_true", help="force the world-LP comparison")
    p = sub.add_parser("explain", help="explain a bound or the verdict")
    common(p, assume=True)
    p.add_argument("argument", help="argument name, or 'verdict'")
    p.add_argument("bound", nargs="?", choices=("lower", "upper"), default="upper")
    p.add_argument("--depth", type=int, default=2)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         inp: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "validate": cmd_validate,
        "solve": cmd_solve,
        "check": cmd_check,
        "explain": cmd_explain,
    }
    try:
        if args.command == "whatif":
            return cmd_whatif(args, out, inp)
        return handlers[args.command](args, out)
    except (CaseParseError, ConstraintSyntaxError) as exc:
        out.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except FileNotFoundError as exc:
        out.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except CaseUnsatisfiableError as exc:
        _print_unsat(exc, out)
        return EXIT_UNSAT
    except (SchemeError, GraphError, solver.SolverError, explain_mod.ExplainError) as exc:
        out.write(f"validation error: {exc}\n")
        return EXIT_VALIDATION


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
