"""Case files and session logs.

A case file is a line-oriented text document::

    case v1
    scheme blaf            # or: raw
    threshold 3/4
    oracle off

    arg Innocence meta label "The defendant is innocent"
    arg T1 evidence
    edge T1 Einc 0.9
    group Ec Motive 0.3 Opportunity 0.3
    assume a1: p(T3) >= 0.7

Numbers are exact rationals; decimal literals parse exactly (0.9 is 9/10).
`#` starts a comment.  Parsing reports 1-based line numbers; structural
problems (scheme violations) are reported separately from syntax errors so
callers can distinguish the two failure classes.

A session log is append-only JSON lines recording assume/retract/solve
actions; replaying a log against the base document reproduces the same case
state and the same beliefs, which the tests rely on.
"""

from __future__ import annotations

import json
import shlex
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import scheme as scheme_mod
from .dsl import ConstraintSyntaxError, parse_constraint
from .rationals import as_rat, fmt_exact
from .scheme import CsGroup, LegalCase, SchemeError, Verdict

SCHEMA_VERSION = 1


class CaseParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"{message} (line {line})")
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class ArgDecl:
    name: str
    role: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class CaseDocument:
    scheme: str = "blaf"  # "blaf" | "raw"
    threshold: Fraction = Fraction(3, 4)
    oracle: bool = False
    arguments: tuple[ArgDecl, ...] = ()
    edges: tuple[tuple[str, str, Fraction], ...] = ()
    groups: tuple[CsGroup, ...] = ()
    assumptions: tuple[tuple[str, str], ...] = ()  # (id, constraint text)
    version: int = SCHEMA_VERSION

    def to_case(self) -> LegalCase:
        """Build and validate; raises SchemeError on structural problems."""
        case = scheme_mod.build_case(
            arguments=[(a.name, a.role) for a in self.arguments],
            edges=self.edges,
            cs_groups=self.groups,
            raw=self.scheme == "raw",
            labels={a.name: a.label for a in self.arguments if a.label},
        )
        for ref, text in self.assumptions:
            try:
                constraints = parse_constraint(text)
            except ConstraintSyntaxError as exc:
                raise SchemeError(f"assumption {ref}: {exc}") from exc
            case, _ = scheme_mod.assume(case, constraints, ref=ref)
        return case

    def with_assumption(self, ref: str, text: str) -> "CaseDocument":
        return replace(self, assumptions=self.assumptions + ((ref, text),))


def loads(text: str) -> CaseDocument:
    doc_scheme = "blaf"
    threshold = Fraction(3, 4)
    oracle = False
    version: int | None = None
    arguments: list[ArgDecl] = []
    edges: list[tuple[str, str, Fraction]] = []
    groups: list[CsGroup] = []
    assumptions: list[tuple[str, str]] = []
    auto_ref = 0

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split(None, 1)[0]
        if head == "assume":
            rest = line[len("assume"):].strip()
            if "#" in rest:
                rest = rest[: rest.index("#")].strip()
            ref: str | None = None
            if ":" in rest.split("(")[0]:
                ref, rest = (part.strip() for part in rest.split(":", 1))
            if not rest:
                raise CaseParseError("assume needs a constraint", lineno)
            try:
                parse_constraint(rest)
            except ConstraintSyntaxError as exc:
                raise CaseParseError(f"bad constraint: {exc.reason}", lineno) from exc
            if ref is None:
                auto_ref += 1
                while any(r == f"a{auto_ref}" for r, _ in assumptions):
                    auto_ref += 1
                ref = f"a{auto_ref}"
            if any(r == ref for r, _ in assumptions):
                raise CaseParseError(f"duplicate assumption id {ref!r}", lineno)
            assumptions.append((ref, rest))
            continue
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            raise CaseParseError(str(exc), lineno) from exc
        if not tokens:
            continue
        kind, args = tokens[0], tokens[1:]
        if kind == "case":
            if len(args) != 1 or not args[0].startswith("v"):
                raise CaseParseError("expected: case v<N>", lineno)
            try:
                version = int(args[0][1:])
            except ValueError as exc:
                raise CaseParseError("expected: case v<N>", lineno) from exc
            if version != SCHEMA_VERSION:
                raise CaseParseError(
                    f"unsupported schema version {version} (supported: {SCHEMA_VERSION})",
                    lineno,
                )
        elif kind == "scheme":
            if len(args) != 1 or args[0] not in ("blaf", "raw"):
                raise CaseParseError("expected: scheme blaf|raw", lineno)
            doc_scheme = args[0]
        elif kind == "threshold":
            if len(args) != 1:
                raise CaseParseError("expected: threshold <rational>", lineno)
            try:
                threshold = as_rat(args[0])
            except ValueError as exc:
                raise CaseParseError(str(exc), lineno) from exc
        elif kind == "oracle":
            if len(args) != 1 or args[0] not in ("on", "off"):
                raise CaseParseError("expected: oracle on|off", lineno)
            oracle = args[0] == "on"
        elif kind == "arg":
            if not args:
                raise CaseParseError("expected: arg <name> [role] [label \"...\"]", lineno)
            name = args[0]
            role: str | None = None
            label: str | None = None
            rest = args[1:]
            if rest and rest[0] != "label":
                role = rest[0]
                rest = rest[1:]
            if rest:
                if rest[0] != "label" or len(rest) != 2:
                    raise CaseParseError("expected: label \"...\"", lineno)
                label = rest[1]
            if any(d.name == name for d in arguments):
                raise CaseParseError(f"duplicate argument {name!r}", lineno)
            arguments.append(ArgDecl(name, role, label))
        elif kind == "edge":
            if len(args) != 3:
                raise CaseParseError("expected: edge <source> <target> <weight>", lineno)
            try:
                weight = as_rat(args[2])
            except ValueError as exc:
                raise CaseParseError(str(exc), lineno) from exc
            edges.append((args[0], args[1], weight))
        elif kind == "group":
            if len(args) < 3 or len(args) % 2 == 0:
                raise CaseParseError(
                    "expected: group <target> <member> <weight> [...]", lineno
                )
            target = args[0]
            members = []
            for i in range(1, len(args), 2):
                try:
                    members.append((args[i], as_rat(args[i + 1])))
                except ValueError as exc:
                    raise CaseParseError(str(exc), lineno) from exc
            groups.append(CsGroup(target, tuple(members)))
        else:
            raise CaseParseError(f"unknown directive {kind!r}", lineno)

    if version is None:
        raise CaseParseError("missing `case v1` header", 1)
    return CaseDocument(
        scheme=doc_scheme,
        threshold=threshold,
        oracle=oracle,
        arguments=tuple(arguments),
        edges=tuple(edges),
        groups=tuple(groups),
        assumptions=tuple(assumptions),
        version=version,
    )


def dumps(doc: CaseDocument) -> str:
    lines = [f"case v{doc.version}", f"scheme {doc.scheme}"]
    lines.append(f"threshold {fmt_exact(doc.threshold)}")
    lines.append(f"oracle {'on' if doc.oracle else 'off'}")
    lines.append("")
    for a in doc.arguments:
        line = f"arg {a.name}"
        if a.role:
            line += f" {a.role}"
        if a.label:
            line += f' label "{a.label}"'
        lines.append(line)
    if doc.edges:
        lines.append("")
        for s, t, w in doc.edges:
            lines.append(f"edge {s} {t} {fmt_exact(w)}")
    if doc.groups:
        lines.append("")
        for g in doc.groups:
            members = " ".join(f"{m} {fmt_exact(w)}" for m, w in g.members)
            lines.append(f"group {g.target} {members}")
    if doc.assumptions:
        lines.append("")
        for ref, text in doc.assumptions:
            lines.append(f"assume {ref}: {text}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> CaseDocument:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(doc: CaseDocument, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


# -- session logs -------------------------------------------------------------------


@dataclass(frozen=True)
class SessionEntry:
    action: str  # "assume" | "retract" | "solve"
    payload: str  # constraint text, assumption id, or ""
    ref: str = ""  # assumption id for assume entries
    innocence: str | None = None  # exact rational string recorded at solves
    timestamp: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "ts": self.timestamp,
                "action": self.action,
                "ref": self.ref,
                "payload": self.payload,
                "innocence": self.innocence,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(line: str) -> "SessionEntry":
        data = json.loads(line)
        return SessionEntry(
            action=data["action"],
            payload=data.get("payload", ""),
            ref=data.get("ref", ""),
            innocence=data.get("innocence"),
            timestamp=data.get("ts", ""),
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class SessionLog:
    entries: list[SessionEntry] = field(default_factory=list)

    def record(self, action: str, payload: str = "", ref: str = "",
               innocence: str | None = None) -> SessionEntry:
        entry = SessionEntry(action, payload, ref, innocence, _now())
        self.entries.append(entry)
        return entry

    def dump(self, path: str | Path) -> None:
        text = "".join(e.to_json() + "\n" for e in self.entries)
        Path(path).write_text(text, encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "SessionLog":
        entries = [
            SessionEntry.from_json(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        return SessionLog(entries)


def replay(
    doc: CaseDocument, entries: Iterable[SessionEntry]
) -> list[tuple[SessionEntry, LegalCase, Verdict | None]]:
    """Apply a session log to the document's base case, solving where logged.

    Returns one row per entry with the case state after the action and the
    verdict for solve actions.  Raises on malformed entries; replay of a log
    produced by this package is deterministic.
    """
    case = doc.to_case()
    out: list[tuple[SessionEntry, LegalCase, Verdict | None]] = []
    for entry in entries:
        verdict: Verdict | None = None
        if entry.action == "assume":
            constraints = parse_constraint(entry.payload)
            case, _ = scheme_mod.assume(case, constraints, ref=entry.ref or None)
        elif entry.action == "retract":
            case = scheme_mod.retract(case, entry.payload or entry.ref)
        elif entry.action == "solve":
            verdict = scheme_mod.beliefs(case)
        else:
            raise SchemeError(f"unknown session action {entry.action!r}")
        out.append((entry, case, verdict))
    return out
