"""Shared generators and fixtures for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from legalarg import scheme
from legalarg.cli import bundled_case_path
from legalarg.constraints import ConstraintSet, LinearConstraint, Provenance
from legalarg.graph import ArgGraph

COEF_GRID = [
    Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2),
    Fraction(3, 10), Fraction(-3, 10), Fraction(9, 10), Fraction(2, 3),
    Fraction(-3, 4), Fraction(2),
]
BOUND_GRID = [
    Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2),
    Fraction(7, 10), Fraction(-7, 10), Fraction(3, 4), Fraction(-9, 10),
]
WEIGHT_GRID = [
    Fraction(1), Fraction(9, 10), Fraction(1, 2), Fraction(3, 10), Fraction(1, 5),
]


def random_system(
    rng: random.Random, max_args: int = 6, max_edges: int = 8, max_constraints: int = 6
) -> tuple[ArgGraph, ConstraintSet]:
    """Random graph plus a random mix of edge constraints and raw rows."""
    from legalarg.constraints import gen_attack, gen_support

    n = rng.randint(1, max_args)
    names = [f"N{i}" for i in range(n)]
    graph = ArgGraph.from_parts(names)
    cs = ConstraintSet()
    added = set()
    for _ in range(rng.randint(0, max_edges)):
        s, t = rng.choice(names), rng.choice(names)
        if (s, t) in added:
            continue
        added.add((s, t))
        weight = rng.choice(COEF_GRID)
        graph = graph.add_edge(s, t, weight)
    for i, edge in enumerate(graph.edges()):
        c = gen_support(edge) if edge.is_support else gen_attack(edge)
        if c.terms:
            cs = cs.add(c, Provenance("SE" if edge.is_support else "ATT", f"e{i}"))
    for i in range(rng.randint(0, max_constraints)):
        terms = {
            rng.choice(names): rng.choice(COEF_GRID)
            for _ in range(rng.randint(1, 3))
        }
        c = LinearConstraint.from_map(terms, rng.choice(BOUND_GRID))
        if c.terms:
            cs = cs.add(c, Provenance("assumption", f"r{i}"))
    return graph, cs


def random_blaf(rng: random.Random, max_extra: int = 6) -> scheme.LegalCase:
    """Random structurally valid legal case, possibly with a CS group."""
    n = rng.randint(1, max_extra)
    names = [f"X{i}" for i in range(n)]
    arguments = [
        ("Innocence", "meta"), ("Einc", "meta"), ("Eex", "meta"),
    ] + [(x, rng.choice(["evidence", "sub"])) for x in names]
    edges = []
    pairs = set()
    for x in names:
        if rng.random() < 0.7:
            target = rng.choice(["Einc", "Eex"] + names)
            if target == x or (x, target) in pairs:
                continue
            pairs.add((x, target))
            if target in ("Einc", "Eex"):
                edges.append((x, target, rng.choice(WEIGHT_GRID)))
            else:
                w = rng.choice(COEF_GRID)
                edges.append((x, target, w))
    groups = []
    if n >= 3 and rng.random() < 0.4:
        members = rng.sample(names, 2)
        target = rng.choice([x for x in names if x not in members] + ["Einc"])
        if all((m, target) not in pairs for m in members):
            w = rng.choice([Fraction(1, 4), Fraction(3, 10), Fraction(2, 5)])
            groups.append(scheme.CsGroup.of(target, [(m, w) for m in members]))
    return scheme.build_case(arguments, edges, groups)


def random_assumptions(
    rng: random.Random, case: scheme.LegalCase, count: int
) -> scheme.LegalCase:
    names = list(case.graph.arguments)
    for _ in range(count):
        arg = rng.choice(names)
        value = rng.choice([Fraction(1, 2), Fraction(7, 10), Fraction(9, 10), Fraction(1)])
        sign = rng.choice([Fraction(1), Fraction(-1)])
        c = LinearConstraint.from_map({arg: sign}, sign * value)
        case, _ = scheme.assume(case, c)
    return case


@pytest.fixture
def example1_path():
    return bundled_case_path("example1")


@pytest.fixture
def example2_path():
    return bundled_case_path("example2")


@pytest.fixture
def camera_path():
    return bundled_case_path("camera")


@pytest.fixture
def three_node_path():
    return bundled_case_path("three_node")
