"""Legal-case construction and belief computation.

A legal case partitions arguments into three meta-hypotheses (`Innocence`,
inculpatory `Einc`, exculpatory `Eex`), sub-hypotheses and pieces of
evidence.  Building a case validates the structural rules, generates the
scheme constraints (Innocence capped by inculpatory evidence, floored by
exculpatory evidence, evidence hypotheses floored by their supporters,
attack edges capping their targets, collective-support groups floored
jointly) and leaves user assumptions as a separate, retractable layer.

Beliefs follow presumption of innocence: the reported belief in Innocence is
the largest value consistent with everything assumed; all other arguments
get their full exact interval.

Cases marked `raw` skip the meta layer entirely: every support edge floors
and every attack edge caps its target, nothing more.  That mode exists for
plain graph studies and small demonstrations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .constraints import (
    KIND_ASSUMPTION,
    KIND_ATT,
    KIND_CS,
    KIND_EE,
    KIND_IE,
    KIND_SE,
    ConstraintSet,
    LinearConstraint,
    Provenance,
    gen_attack,
    gen_collective_support,
    gen_support,
)
from .graph import ArgGraph, Edge
from .rationals import RatLike, as_rat
from .solver import BeliefBounds, UnsatisfiableError, check, entail_all

ROLE_META = "meta"
ROLE_SUB = "sub"
ROLE_EVIDENCE = "evidence"
ROLES = (ROLE_META, ROLE_SUB, ROLE_EVIDENCE)

INNOCENCE = "Innocence"
INCULPATORY = "Einc"
EXCULPATORY = "Eex"
META_CORE = (INNOCENCE, INCULPATORY, EXCULPATORY)
META_EXTENDED = ("Ed", "Ec", "Motive", "Opportunity", "Alibi", "Ability")

_ONE = Fraction(1)


class SchemeError(ValueError):
    """Case structure violates the scheme rules."""


class CaseUnsatisfiableError(ValueError):
    """Scheme plus assumptions admit no probability function."""

    def __init__(self, message: str, assumption_refs: tuple[str, ...] = ()) -> None:
        super().__init__(message)
        self.assumption_refs = assumption_refs


@dataclass(frozen=True)
class CsGroup:
    """Members jointly floor the target: sum of weighted beliefs <= target."""

    target: str
    members: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def of(target: str, members: Iterable[tuple[str, RatLike]]) -> "CsGroup":
        return CsGroup(target, tuple((m, as_rat(w)) for m, w in members))


@dataclass(frozen=True)
class LegalCase:
    graph: ArgGraph
    roles: Mapping[str, str]
    cs_groups: tuple[CsGroup, ...]
    scheme_constraints: ConstraintSet
    assumptions: ConstraintSet
    raw: bool = False
    labels: Mapping[str, str] = field(default_factory=dict)

    def all_constraints(self) -> ConstraintSet:
        return self.scheme_constraints.extend(self.assumptions)

    def assumption_refs(self) -> list[str]:
        return self.assumptions.refs()

    def cs_member_args(self) -> set[str]:
        return {m for g in self.cs_groups for m, _ in g.members}

    def constrained_args(self) -> set[str]:
        """Arguments mentioned by at least one active assumption."""
        out: set[str] = set()
        for tagged in self.assumptions:
            out.update(tagged.constraint.arguments)
        return out


@dataclass(frozen=True)
class Verdict:
    """Belief state of a solved case; innocence_belief is the Innocence upper."""

    bounds: BeliefBounds
    innocence_belief: Fraction | None


# -- construction ------------------------------------------------------------


def build_case(
    arguments: Sequence[tuple[str, str | None]],
    edges: Iterable[tuple[str, str, RatLike]] = (),
    cs_groups: Iterable[CsGroup] = (),
    raw: bool = False,
    labels: Mapping[str, str] | None = None,
) -> LegalCase:
    """Validate the structure and generate the scheme constraints."""
    roles: dict[str, str] = {}
    names: list[str] = []
    for name, role in arguments:
        if name in roles:
            raise SchemeError(f"duplicate argument {name!r}")
        resolved = role or (ROLE_EVIDENCE if not raw else "none")
        if not raw and resolved not in ROLES:
            raise SchemeError(f"unknown role {resolved!r} for {name!r}")
        roles[name] = resolved
        names.append(name)

    weighted: list[tuple[str, str, Fraction]] = [
        (s, t, as_rat(w)) for s, t, w in edges
    ]
    seen_pairs: set[tuple[str, str]] = set()
    for s, t, _ in weighted:
        if (s, t) in seen_pairs:
            raise SchemeError(f"duplicate edge {s} -> {t}")
        seen_pairs.add((s, t))

    groups = tuple(cs_groups)
    group_edges: dict[tuple[str, str], Fraction] = {}
    for g in groups:
        if not raw and g.target == INNOCENCE:
            raise SchemeError("collective support cannot target Innocence")
        total = sum((w for _, w in g.members), Fraction(0))
        if total > 1:
            raise SchemeError(
                f"collective-support weights for {g.target} sum to {total}, above 1"
            )
        for m, w in g.members:
            if w <= 0:
                raise SchemeError(f"collective-support weight for {m} must be positive")
            key = (m, g.target)
            if key in group_edges:
                raise SchemeError(f"edge {m} -> {g.target} appears in two groups")
            group_edges[key] = w
            if key in seen_pairs:
                declared = next(w2 for s, t, w2 in weighted if (s, t) == key)
                if declared != w:
                    raise SchemeError(
                        f"edge {m} -> {g.target} declared with weight {declared}, "
                        f"group says {w}"
                    )
            else:
                weighted.append((m, g.target, w))
                seen_pairs.add(key)

    if not raw:
        for meta in META_CORE:
            if meta not in roles:
                raise SchemeError(f"missing meta-hypothesis {meta!r}")
            if roles[meta] != ROLE_META:
                raise SchemeError(f"{meta!r} must carry the meta role")
        allowed_meta = set(META_CORE) | set(META_EXTENDED)
        for name, role in roles.items():
            if role == ROLE_META and name not in allowed_meta:
                raise SchemeError(
                    f"{name!r} cannot be a meta-hypothesis; allowed names: "
                    + ", ".join(sorted(allowed_meta))
                )
        required = {
            (INCULPATORY, INNOCENCE): Fraction(-1),
            (EXCULPATORY, INNOCENCE): Fraction(1),
        }
        for (s, t), w in required.items():
            declared = [e for e in weighted if (e[0], e[1]) == (s, t)]
            if declared and declared[0][2] != w:
                raise SchemeError(
                    f"edge {s} -> {t} must have weight {w}, got {declared[0][2]}"
                )
            if not declared:
                weighted.append((s, t, w))
                seen_pairs.add((s, t))
        for s, t, w in weighted:
            if t == INNOCENCE and (s, t) not in required:
                raise SchemeError(f"only Einc and Eex may point at Innocence ({s} does)")
            if s == INNOCENCE:
                raise SchemeError("Innocence cannot be an edge source")
            if s in (INCULPATORY, EXCULPATORY) and t != INNOCENCE:
                raise SchemeError(f"{s} may only point at Innocence")
            if t in (INCULPATORY, EXCULPATORY):
                if w <= 0:
                    raise SchemeError(
                        f"edges into {t} must be supports with positive weight"
                    )
                if w > 1:
                    raise SchemeError(f"support edge {s} -> {t} has weight {w} above 1")

    graph = ArgGraph.from_parts(names, weighted)
    for g in groups:
        if g.target not in graph:
            raise SchemeError(f"collective-support target {g.target!r} unknown")

    scheme = _generate_scheme(graph, groups, raw)
    return LegalCase(
        graph=graph,
        roles=roles,
        cs_groups=groups,
        scheme_constraints=scheme,
        assumptions=ConstraintSet(),
        raw=raw,
        labels=dict(labels or {}),
    )


def _generate_scheme(graph: ArgGraph, groups: tuple[CsGroup, ...], raw: bool) -> ConstraintSet:
    cs = ConstraintSet()
    grouped = {(m, g.target) for g in groups for m, _ in g.members}
    edges = sorted(graph.edges(), key=lambda e: (e.source, e.target))
    if not raw:
        ie_edge = Edge(INCULPATORY, INNOCENCE, Fraction(-1))
        ee_edge = Edge(EXCULPATORY, INNOCENCE, Fraction(1))
        cs = cs.add(gen_attack(ie_edge), Provenance(KIND_IE, f"{INCULPATORY}->{INNOCENCE}"))
        cs = cs.add(gen_support(ee_edge), Provenance(KIND_EE, f"{EXCULPATORY}->{INNOCENCE}"))
        support_meta = [
            e for e in edges
            if e.target in (INCULPATORY, EXCULPATORY) and (e.source, e.target) not in grouped
        ]
        evidential = [
            e for e in edges
            if e.target not in (INNOCENCE, INCULPATORY, EXCULPATORY)
            and (e.source, e.target) not in grouped
        ]
        for e in support_meta:
            cs = cs.add(gen_support(e), Provenance(KIND_SE, f"{e.source}->{e.target}"))
        for e in evidential:
            if e.is_support:
                cs = cs.add(gen_support(e), Provenance(KIND_SE, f"{e.source}->{e.target}"))
            else:
                cs = cs.add(gen_attack(e), Provenance(KIND_ATT, f"{e.source}->{e.target}"))
    else:
        for e in edges:
            if (e.source, e.target) in grouped:
                continue
            if e.is_support:
                cs = cs.add(gen_support(e), Provenance(KIND_SE, f"{e.source}->{e.target}"))
            else:
                cs = cs.add(gen_attack(e), Provenance(KIND_ATT, f"{e.source}->{e.target}"))
    for g in groups:
        cs = cs.add(
            gen_collective_support(g.members, g.target),
            Provenance(KIND_CS, g.target),
        )
    return cs


def extended_template_parts(
    motive_weight: RatLike, opportunity_weight: RatLike
) -> tuple[list[tuple[str, str]], list[tuple[str, str, Fraction]], list[CsGroup]]:
    """Building blocks of the refined scheme: direct/circumstantial inculpatory
    hypotheses, alibi and ability on the exculpatory side, and a joint
    motive/opportunity floor on the circumstantial evidence."""
    arguments = [(name, ROLE_META) for name in META_CORE + META_EXTENDED]
    edges = [
        ("Ed", INCULPATORY, _ONE),
        ("Ec", INCULPATORY, _ONE),
        ("Alibi", EXCULPATORY, _ONE),
        ("Ability", EXCULPATORY, _ONE),
    ]
    group = CsGroup.of(
        "Ec", [("Motive", as_rat(motive_weight)), ("Opportunity", as_rat(opportunity_weight))]
    )
    return arguments, edges, [group]


def build_extended_template(
    motive_weight: RatLike, opportunity_weight: RatLike
) -> LegalCase:
    """Skeleton case with the extended meta-hypotheses and no evidence yet."""
    arguments, edges, groups = extended_template_parts(motive_weight, opportunity_weight)
    return build_case(arguments, edges, groups)


# -- assumptions ---------------------------------------------------------------


def _next_ref(case: LegalCase) -> str:
    used = set(case.assumptions.refs())
    k = 1
    while f"a{k}" in used:
        k += 1
    return f"a{k}"


def assume(
    case: LegalCase,
    constraints: LinearConstraint | Sequence[LinearConstraint],
    ref: str | None = None,
) -> tuple[LegalCase, str]:
    """Add one assumption (one or two canonical constraints under one id)."""
    if isinstance(constraints, LinearConstraint):
        constraints = [constraints]
    if not constraints:
        raise SchemeError("empty assumption")
    for c in constraints:
        for arg in c.arguments:
            if arg not in case.graph:
                raise SchemeError(f"assumption references unknown argument {arg!r}")
    ref = ref or _next_ref(case)
    if ref in case.assumptions.refs():
        raise SchemeError(f"assumption id {ref!r} already in use")
    assumptions = case.assumptions
    for c in constraints:
        assumptions = assumptions.add(c, Provenance(KIND_ASSUMPTION, ref))
    return replace(case, assumptions=assumptions), ref


def retract(case: LegalCase, ref: str) -> LegalCase:
    try:
        return replace(case, assumptions=case.assumptions.drop(ref))
    except KeyError as exc:
        raise SchemeError(f"unknown assumption id {ref!r}") from exc


# -- solving -----------------------------------------------------------------------


def conflicting_assumptions(case: LegalCase) -> tuple[str, ...]:
    """Assumption ids whose removal restores satisfiability (greedy)."""
    refs = case.assumptions.refs()
    active = list(refs)

    def sat(subset: list[str]) -> bool:
        cs = case.scheme_constraints
        for tagged in case.assumptions:
            if tagged.provenance.ref in subset:
                cs = cs.add(tagged.constraint, tagged.provenance)
        return check(case.graph, cs).satisfiable

    removed: list[str] = []
    while active and not sat(active):
        for ref in active:
            trial = [r for r in active if r != ref]
            if sat(trial):
                removed.append(ref)
                active = trial
                break
        else:
            removed.append(active[0])
            active = active[1:]
    return tuple(removed)


def beliefs(case: LegalCase) -> Verdict:
    """Solve the case; presumption of innocence reports the Innocence upper."""
    try:
        bounds = entail_all(case.graph, case.all_constraints())
    except UnsatisfiableError as exc:
        refs = conflicting_assumptions(case)
        detail = f" (suspect assumptions: {', '.join(refs)})" if refs else ""
        raise CaseUnsatisfiableError(
            f"case is unsatisfiable{detail}", assumption_refs=refs
        ) from exc
    innocence = bounds.upper(INNOCENCE) if INNOCENCE in bounds.intervals else None
    return Verdict(bounds=bounds, innocence_belief=innocence)


# -- structural consequence checks ---------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def check_consequences(case: LegalCase, bounds: BeliefBounds | None = None) -> list[InequalityCheck]:
    """Cross-bound inequalities every scheme case must satisfy.

    The two meta inequalities cap each evidence hypothesis by one minus the
    other's floor; each support edge into Einc/Eex additionally caps the
    opposite hypothesis through its weighted source floor.
    """
    if case.raw:
        raise SchemeError("consequence checks need a scheme case, not a raw one")
    if bounds is None:
        bounds = beliefs(case).bounds
    out = [
        InequalityCheck(
            "upper(Einc) <= 1 - lower(Eex)",
            bounds.upper(INCULPATORY),
            1 - bounds.lower(EXCULPATORY),
        ),
        InequalityCheck(
            "upper(Eex) <= 1 - lower(Einc)",
            bounds.upper(EXCULPATORY),
            1 - bounds.lower(INCULPATORY),
        ),
    ]
    for e in sorted(case.graph.edges(), key=lambda e: (e.source, e.target)):
        if e.target == INCULPATORY:
            out.append(
                InequalityCheck(
                    f"upper(Eex) <= 1 - {e.weight}*lower({e.source})",
                    bounds.upper(EXCULPATORY),
                    1 - e.weight * bounds.lower(e.source),
                )
            )
        elif e.target == EXCULPATORY:
            out.append(
                InequalityCheck(
                    f"upper(Einc) <= 1 - {e.weight}*lower({e.source})",
                    bounds.upper(INCULPATORY),
                    1 - e.weight * bounds.lower(e.source),
                )
            )
    return out
