"""Weighted bipolar argument graphs.

Arguments are identified by case-sensitive strings of letters, digits and
underscores.  Edges carry a nonzero exact rational weight; a negative weight
is an attack, a positive one a support.  Graphs are immutable values: the
mutating operations return a new graph, so instances can be shared freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .rationals import RatLike, as_rat, fmt_exact

_IDENT_RE = re.compile(r"^[A-Za-z0-9_]+$")


class GraphError(ValueError):
    """Malformed identifier, unknown endpoint or sign-undefined weight."""


def check_identifier(name: str) -> str:
    if not isinstance(name, str) or not _IDENT_RE.match(name):
        raise GraphError(
            f"invalid argument identifier {name!r}: need a non-empty string of "
            "letters, digits or underscores"
        )
    return name


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: Fraction

    @property
    def is_attack(self) -> bool:
        return self.weight < 0

    @property
    def is_support(self) -> bool:
        return self.weight > 0

    def __str__(self) -> str:
        return f"{self.source} -> {self.target} ({fmt_exact(self.weight)})"


class ArgGraph:
    """A finite set of arguments plus at most one weighted edge per ordered pair."""

    __slots__ = ("_order", "_args", "_edges")

    def __init__(self) -> None:
        self._order: tuple[str, ...] = ()
        self._args: frozenset[str] = frozenset()
        self._edges: dict[tuple[str, str], Fraction] = {}

    @classmethod
    def from_parts(
        cls,
        arguments: Iterable[str],
        edges: Iterable[tuple[str, str, RatLike]] = (),
    ) -> "ArgGraph":
        """Bulk constructor; validates the same invariants as the incremental ops."""
        g = cls()
        order: list[str] = []
        seen: set[str] = set()
        for name in arguments:
            check_identifier(name)
            if name not in seen:
                order.append(name)
                seen.add(name)
        g._order = tuple(order)
        g._args = frozenset(seen)
        for source, target, weight in edges:
            w = as_rat(weight)
            _check_edge(g._args, source, target, w)
            g._edges[(source, target)] = w
        return g

    # -- queries ---------------------------------------------------------

    @property
    def arguments(self) -> tuple[str, ...]:
        """Arguments in insertion order (the set view is `set(g.arguments)`)."""
        return self._order

    def __contains__(self, name: str) -> bool:
        return name in self._args

    def __len__(self) -> int:
        return len(self._order)

    def edges(self) -> Iterator[Edge]:
        for (s, t), w in self._edges.items():
            yield Edge(s, t, w)

    def edge_weight(self, source: str, target: str) -> Fraction | None:
        return self._edges.get((source, target))

    def in_edges(self, name: str) -> list[Edge]:
        self._require(name)
        return [Edge(s, t, w) for (s, t), w in self._edges.items() if t == name]

    def out_edges(self, name: str) -> list[Edge]:
        self._require(name)
        return [Edge(s, t, w) for (s, t), w in self._edges.items() if s == name]

    def attackers(self, name: str) -> set[tuple[str, Fraction]]:
        """In-neighbors with negative weight, as (source, weight) pairs."""
        return {(e.source, e.weight) for e in self.in_edges(name) if e.is_attack}

    def supporters(self, name: str) -> set[tuple[str, Fraction]]:
        """In-neighbors with positive weight, as (source, weight) pairs."""
        return {(e.source, e.weight) for e in self.in_edges(name) if e.is_support}

    # -- construction ----------------------------------------------------

    def add_argument(self, name: str) -> "ArgGraph":
        check_identifier(name)
        if name in self._args:
            return self
        g = self._copy()
        g._order = self._order + (name,)
        g._args = self._args | {name}
        return g

    def add_edge(self, source: str, target: str, weight: RatLike) -> "ArgGraph":
        """Record an edge, replacing any prior edge on the same ordered pair."""
        w = as_rat(weight)
        _check_edge(self._args, source, target, w)
        g = self._copy()
        g._edges[(source, target)] = w
        return g

    def _copy(self) -> "ArgGraph":
        g = ArgGraph()
        g._order = self._order
        g._args = self._args
        g._edges = dict(self._edges)
        return g

    def _require(self, name: str) -> None:
        if name not in self._args:
            raise GraphError(f"unknown argument {name!r}")

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArgGraph):
            return NotImplemented
        return self._args == other._args and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._args, frozenset(self._edges.items())))

    def __repr__(self) -> str:
        return f"ArgGraph({len(self._order)} arguments, {len(self._edges)} edges)"


def _check_edge(args: frozenset[str], source: str, target: str, weight: Fraction) -> None:
    if source not in args:
        raise GraphError(f"unknown edge source {source!r}")
    if target not in args:
        raise GraphError(f"unknown edge target {target!r}")
    if weight == 0:
        raise GraphError(
            f"zero-weight edge {source} -> {target}: attack/support is undefined at weight 0"
        )
