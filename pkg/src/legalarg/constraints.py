"""Linear atomic constraints over argument probabilities.

A constraint is kept in the canonical form

    sum_i a_i * p(A_i) <= b

with nonzero exact rational coefficients and terms sorted by argument id.
`>=` flips signs into this form and `=` expands into a pair of constraints.
The module also houses the generators for the structural constraint shapes
attached to graph edges: supports floor their target, attacks cap it, and a
collective-support group floors its target with a weighted sum of members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .graph import Edge
from .rationals import RatLike, as_rat


@dataclass(frozen=True)
class LinearConstraint:
    """Canonical `sum a_i * p(A_i) <= bound` with sorted, nonzero terms."""

    terms: tuple[tuple[str, Fraction], ...]
    bound: Fraction

    @staticmethod
    def from_map(terms: Mapping[str, Fraction], bound: RatLike) -> "LinearConstraint":
        clean = tuple(sorted((a, c) for a, c in terms.items() if c != 0))
        return LinearConstraint(clean, as_rat(bound))

    @property
    def arguments(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.terms)

    def coefficient(self, arg: str) -> Fraction:
        for a, c in self.terms:
            if a == arg:
                return c
        return Fraction(0)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum((c * assignment[a] for a, c in self.terms), Fraction(0))

    def satisfied_by(self, assignment: Mapping[str, Fraction]) -> bool:
        return self.evaluate(assignment) <= self.bound


def canonicalize(
    lhs_const: RatLike,
    lhs_terms: Mapping[str, RatLike],
    rhs_const: RatLike,
    rhs_terms: Mapping[str, RatLike],
) -> LinearConstraint:
    """Normalize `c0 + sum c_i p(A_i) <= d0 + sum d_i p(B_i)`.

    Variables move left, constants right, coefficients on the same argument
    merge, and zero coefficients are dropped.
    """
    acc: dict[str, Fraction] = {}
    for arg, coef in lhs_terms.items():
        acc[arg] = acc.get(arg, Fraction(0)) + as_rat(coef)
    for arg, coef in rhs_terms.items():
        acc[arg] = acc.get(arg, Fraction(0)) - as_rat(coef)
    bound = as_rat(rhs_const) - as_rat(lhs_const)
    return LinearConstraint.from_map(acc, bound)


# -- edge constraint generators ------------------------------------------


def gen_support(edge: Edge) -> LinearConstraint:
    """`w * p(source) <= p(target)` for a support edge (weight > 0)."""
    if edge.weight <= 0:
        raise ValueError(f"support constraint needs a positive weight: {edge}")
    return canonicalize(0, {edge.source: edge.weight}, 0, {edge.target: Fraction(1)})


def gen_attack(edge: Edge) -> LinearConstraint:
    """`p(target) <= 1 + w * p(source)` for an attack edge (weight < 0)."""
    if edge.weight >= 0:
        raise ValueError(f"attack constraint needs a negative weight: {edge}")
    return canonicalize(0, {edge.target: Fraction(1)}, 1, {edge.source: edge.weight})


def gen_collective_support(
    members: Sequence[tuple[str, RatLike]], target: str
) -> LinearConstraint:
    """`sum w_i * p(A_i) <= p(target)` with all w_i > 0 and sum w_i <= 1."""
    weights = [(arg, as_rat(w)) for arg, w in members]
    if not weights:
        raise ValueError("collective support needs at least one member")
    for arg, w in weights:
        if w <= 0:
            raise ValueError(f"collective-support weight for {arg} must be positive")
    total = sum(w for _, w in weights)
    if total > 1:
        raise ValueError(
            f"collective-support weights for {target} sum to {total}, above 1"
        )
    acc: dict[str, Fraction] = {}
    for arg, w in weights:
        acc[arg] = acc.get(arg, Fraction(0)) + w
    return canonicalize(0, acc, 0, {target: Fraction(1)})


# -- provenance-tagged constraint sets -------------------------------------

#: Constraint origin kinds.
KIND_IE = "IE"            # inculpatory-evidence cap on Innocence
KIND_EE = "EE"            # exculpatory-evidence floor on Innocence
KIND_SE = "SE"            # support edge floor
KIND_ATT = "ATT"          # attack edge cap
KIND_CS = "CS"            # collective-support group floor
KIND_ASSUMPTION = "assumption"
KIND_DSL = "dsl"


@dataclass(frozen=True)
class Provenance:
    """Where a constraint came from: a scheme rule, a user assumption, or DSL text."""

    kind: str
    ref: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.ref})" if self.ref else self.kind


@dataclass(frozen=True)
class Tagged:
    constraint: LinearConstraint
    provenance: Provenance


class ConstraintSet:
    """An ordered collection of constraints, each carrying its provenance."""

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[Tagged] = ()) -> None:
        self._items: tuple[Tagged, ...] = tuple(items)

    def add(self, constraint: LinearConstraint, provenance: Provenance) -> "ConstraintSet":
        return ConstraintSet(self._items + (Tagged(constraint, provenance),))

    def extend(self, other: "ConstraintSet") -> "ConstraintSet":
        return ConstraintSet(self._items + other._items)

    def drop(self, ref: str) -> "ConstraintSet":
        kept = tuple(t for t in self._items if t.provenance.ref != ref)
        if len(kept) == len(self._items):
            raise KeyError(f"no constraint with provenance ref {ref!r}")
        return ConstraintSet(kept)

    def refs(self) -> list[str]:
        out: list[str] = []
        for t in self._items:
            if t.provenance.ref and t.provenance.ref not in out:
                out.append(t.provenance.ref)
        return out

    def constraints(self) -> list[LinearConstraint]:
        return [t.constraint for t in self._items]

    def __iter__(self) -> Iterator[Tagged]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index: int) -> Tagged:
        return self._items[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return self._items == other._items

    def __repr__(self) -> str:
        return f"ConstraintSet({len(self._items)} constraints)"
