"""Verdict classification and automatically generated bound explanations.

The verdict over a solved case falls into exactly one of three classes,
driven by the floors of the two evidence hypotheses against a threshold T in
(1/2, 1): convincing exculpatory evidence, convincing inculpatory evidence,
or neither.

Bound explanations are rule-based over the solved intervals plus constraint
provenance, not over LP internals, which keeps them deterministic and
human-checkable:

  * a nontrivial floor comes from supporters (weighted source floors), a
    collective-support group (weighted member floors, counted jointly) or a
    direct assumption; the reasons inducing the largest floor are reported,
    ties together;
  * a nontrivial cap comes from attackers (one minus their weighted floor),
    supported children (their cap divided by the edge weight: pushing the
    source higher would push the child past its cap), a direct assumption,
    or, for the two evidence hypotheses, the chain through Innocence; the
    reasons inducing the smallest cap are reported, ties together.

Caps on members of a collective-support group interact in ways these local
rules do not capture, so that configuration reports itself as unavailable
rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rationals import fmt_display
from .scheme import (
    EXCULPATORY,
    INCULPATORY,
    INNOCENCE,
    LegalCase,
)
from .solver import BeliefBounds

LACK_OF_EVIDENCE = "lack-of-evidence"
INNOCENT_BY_EXCULPATORY = "innocent-by-exculpatory"
GUILTY_BY_INCULPATORY = "guilty-by-inculpatory"

CS_UPPER_UNAVAILABLE = "explanation unavailable: collective-support interaction"

_HALF = Fraction(1, 2)
_ONE = Fraction(1)


class ExplainError(ValueError):
    pass


@dataclass(frozen=True)
class VerdictClass:
    kind: str
    threshold: Fraction


def classify(bounds: BeliefBounds, threshold: Fraction) -> VerdictClass:
    """Exactly one class fires for every satisfiable scheme case."""
    if not _HALF < threshold < _ONE:
        raise ExplainError(f"threshold must lie strictly between 1/2 and 1, got {threshold}")
    lower_inc = bounds.lower(INCULPATORY)
    lower_exc = bounds.lower(EXCULPATORY)
    if lower_exc > _HALF:
        return VerdictClass(INNOCENT_BY_EXCULPATORY, threshold)
    if lower_inc > threshold:
        return VerdictClass(GUILTY_BY_INCULPATORY, threshold)
    return VerdictClass(LACK_OF_EVIDENCE, threshold)


@dataclass(frozen=True)
class Reason:
    kind: str  # supporter | cs-group | attacker | supported-child | meta-chain | assumption
    arguments: tuple[str, ...]
    induced: Fraction
    subs: tuple["Explanation", ...] = ()
    note: str = ""


@dataclass(frozen=True)
class Explanation:
    subject: str
    bound: str  # "lower" | "upper" | "verdict"
    value: Fraction
    reasons: tuple[Reason, ...]
    note: str = ""


def _sorted_reasons(reasons: list[Reason]) -> tuple[Reason, ...]:
    return tuple(sorted(reasons, key=lambda r: (r.arguments, r.kind, r.note)))


def _direct_assumptions(case: LegalCase, arg: str) -> list[tuple[str, Fraction, Fraction]]:
    """(ref, coeff, bound) of single-variable assumption rows on `arg`."""
    out = []
    for tagged in case.assumptions:
        c = tagged.constraint
        if len(c.terms) == 1 and c.terms[0][0] == arg:
            out.append((tagged.provenance.ref, c.terms[0][1], c.bound))
    return out


def explain_lower(
    case: LegalCase,
    solved: BeliefBounds,
    arg: str,
    _visited: set[str] | None = None,
) -> Explanation:
    """Reasons inducing the largest floor on `arg`."""
    if arg not in case.graph:
        raise ExplainError(f"unknown argument {arg!r}")
    visited = _visited if _visited is not None else set()
    visited.add(arg)
    value = solved.lower(arg)
    if value == 0:
        return Explanation(arg, "lower", value, (), note="trivial lower bound")
    grouped = {(m, g.target) for g in case.cs_groups for m, _ in g.members}
    candidates: list[Reason] = []
    for source, weight in sorted(case.graph.supporters(arg)):
        if (source, arg) in grouped:
            continue
        induced = weight * solved.lower(source)
        subs: tuple[Explanation, ...] = ()
        if induced > 0 and source not in visited:
            subs = (explain_lower(case, solved, source, visited),)
        candidates.append(Reason("supporter", (source,), induced, subs))
    for g in case.cs_groups:
        if g.target != arg:
            continue
        induced = sum((w * solved.lower(m) for m, w in g.members), Fraction(0))
        subs = tuple(
            explain_lower(case, solved, m, visited)
            for m, _ in g.members
            if solved.lower(m) > 0 and m not in visited
        )
        candidates.append(Reason("cs-group", tuple(m for m, _ in g.members), induced, subs))
    for ref, coeff, bound in _direct_assumptions(case, arg):
        if coeff < 0:  # -c * p(arg) <= -b  means  p(arg) >= b/c
            candidates.append(Reason("assumption", (arg,), bound / coeff, note=ref))
    if not candidates:
        return Explanation(arg, "lower", value, (), note="no structural reason found")
    best = max(r.induced for r in candidates)
    reasons = _sorted_reasons([r for r in candidates if r.induced == best])
    return Explanation(arg, "lower", value, reasons)


def explain_upper(
    case: LegalCase,
    solved: BeliefBounds,
    arg: str,
    _visited: set[str] | None = None,
) -> Explanation:
    """Reasons inducing the smallest cap on `arg`."""
    if arg not in case.graph:
        raise ExplainError(f"unknown argument {arg!r}")
    visited = _visited if _visited is not None else set()
    visited.add(arg)
    value = solved.upper(arg)
    if arg in case.cs_member_args():
        return Explanation(arg, "upper", value, (), note=CS_UPPER_UNAVAILABLE)
    if value == 1:
        return Explanation(arg, "upper", value, (), note="trivial upper bound")
    candidates: list[Reason] = []
    meta_pair = {INCULPATORY: EXCULPATORY, EXCULPATORY: INCULPATORY}
    if not case.raw and arg in meta_pair:
        # The cap on an evidence hypothesis always runs through Innocence:
        # the other side's floor moves Innocence, whose coupling caps us.
        if arg == INCULPATORY:
            ceiling = _ONE - solved.lower(INNOCENCE)
            note = (
                f"Innocence >= {fmt_display(solved.lower(INNOCENCE))} "
                f"caps {arg} at {fmt_display(ceiling)}"
            )
            subs = (
                (explain_lower(case, solved, INNOCENCE, visited),)
                if solved.lower(INNOCENCE) > 0 and INNOCENCE not in visited
                else ()
            )
        else:
            ceiling = solved.upper(INNOCENCE)
            note = (
                f"Innocence <= {fmt_display(solved.upper(INNOCENCE))} "
                f"caps {arg} at {fmt_display(ceiling)}"
            )
            subs = (
                (explain_upper(case, solved, INNOCENCE, visited),)
                if solved.upper(INNOCENCE) < 1 and INNOCENCE not in visited
                else ()
            )
        candidates.append(Reason("meta-chain", (INNOCENCE,), ceiling, subs, note=note))
    else:
        for source, weight in sorted(case.graph.attackers(arg)):
            ceiling = _ONE + weight * solved.lower(source)  # weight < 0
            subs = (
                (explain_lower(case, solved, source, visited),)
                if solved.lower(source) > 0 and source not in visited
                else ()
            )
            candidates.append(Reason("attacker", (source,), ceiling, subs))
        for edge in sorted(case.graph.out_edges(arg), key=lambda e: e.target):
            if edge.weight <= 0 or (arg, edge.target) in {
                (m, g.target) for g in case.cs_groups for m, _ in g.members
            }:
                continue
            raw_ceiling = solved.upper(edge.target) / edge.weight
            ceiling = raw_ceiling if raw_ceiling < 1 else _ONE
            subs = (
                (explain_upper(case, solved, edge.target, visited),)
                if solved.upper(edge.target) < 1 and edge.target not in visited
                else ()
            )
            candidates.append(Reason("supported-child", (edge.target,), ceiling, subs))
    for ref, coeff, bound in _direct_assumptions(case, arg):
        if coeff > 0:  # c * p(arg) <= b  means  p(arg) <= b/c
            ceiling = bound / coeff
            if ceiling < 1:
                candidates.append(Reason("assumption", (arg,), ceiling, note=ref))
    if not candidates:
        return Explanation(arg, "upper", value, (), note="no structural reason found")
    best = min(r.induced for r in candidates)
    reasons = _sorted_reasons([r for r in candidates if r.induced == best])
    return Explanation(arg, "upper", value, reasons)


def explain_verdict(
    case: LegalCase, solved: BeliefBounds, threshold: Fraction
) -> Explanation:
    """Head narrative for the verdict class, chaining into the driving floor."""
    vc = classify(solved, threshold)
    if vc.kind == INNOCENT_BY_EXCULPATORY:
        head = f"innocent: exculpatory evidence (Eex >= {fmt_display(solved.lower(EXCULPATORY))})"
        inner = explain_lower(case, solved, EXCULPATORY)
        return Explanation("verdict", "verdict", solved.lower(EXCULPATORY), inner.reasons, note=head)
    if vc.kind == GUILTY_BY_INCULPATORY:
        head = f"guilty: inculpatory evidence (Einc >= {fmt_display(solved.lower(INCULPATORY))})"
        inner = explain_lower(case, solved, INCULPATORY)
        return Explanation("verdict", "verdict", solved.lower(INCULPATORY), inner.reasons, note=head)
    head = "innocent: lack of convincing evidence"
    subs: list[Reason] = []
    for meta in (INCULPATORY, EXCULPATORY):
        floor = solved.lower(meta)
        if floor > 0:
            subs.append(
                Reason(
                    "supporter",
                    (meta,),
                    floor,
                    (explain_lower(case, solved, meta),),
                )
            )
    return Explanation("verdict", "verdict", Fraction(0), _sorted_reasons(subs), note=head)


# -- rendering --------------------------------------------------------------------


def _head_line(e: Explanation) -> str:
    if e.bound == "verdict":
        return e.note
    if e.note == CS_UPPER_UNAVAILABLE:
        return f"{e.subject}: {CS_UPPER_UNAVAILABLE}"
    rel = ">=" if e.bound == "lower" else "<="
    line = f"{e.subject} {rel} {fmt_display(e.value)}"
    if e.note:
        line += f" ({e.note})"
    return line


def _reason_line(r: Reason) -> str:
    rel = ">=" if r.kind in ("supporter", "cs-group", "assumption") else "<="
    if r.kind == "cs-group":
        names = ", ".join(r.arguments)
        return f"collective support {{{names}}} ({rel} {fmt_display(r.induced)})"
    if r.kind == "assumption":
        return f"assumption {r.note} ({rel} {fmt_display(r.induced)})"
    if r.kind == "meta-chain":
        return f"meta-chain: {r.note}"
    label = {"supporter": "supporter", "attacker": "attacker", "supported-child": "supported child"}[
        r.kind
    ]
    rel = ">=" if r.kind == "supporter" else "<="
    return f"{label} {r.arguments[0]} ({rel} {fmt_display(r.induced)})"


def render(e: Explanation, depth: int = 2) -> str:
    """Deterministic text; depth limits how many reason levels are expanded.

    Single-supporter chains are rendered inline ("... via X (>= v) via Y");
    anything richer switches to an indented tree.
    """
    head = _head_line(e)
    reasons: Sequence[Reason] = e.reasons
    chain: list[str] = []
    d = depth
    while d > 0 and len(reasons) == 1 and reasons[0].kind == "supporter":
        r = reasons[0]
        chain.append(f"via {r.arguments[0]} (>= {fmt_display(r.induced)})")
        reasons = r.subs[0].reasons if r.subs else ()
        d -= 1
    if not reasons or d <= 0:
        return " ".join([head] + chain)
    lines = [" ".join([head] + chain)]
    _render_reasons(reasons, d, 1, lines)
    return "\n".join(lines)


def _render_reasons(reasons: Sequence[Reason], depth: int, indent: int, lines: list[str]) -> None:
    if depth <= 0:
        return
    pad = "  " * indent
    for r in reasons:
        lines.append(f"{pad}- {_reason_line(r)}")
        for sub in r.subs:
            if depth > 1 and (sub.reasons or sub.note):
                lines.append(f"{pad}  {_head_line(sub)}")
                _render_reasons(sub.reasons, depth - 1, indent + 2, lines)
