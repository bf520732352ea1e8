#!/usr/bin/env python3
"""Print the belief tables of the two bundled legal cases column by column.

Each column adds assumptions on top of the base case and re-solves, mirroring
the incremental what-if workflow; values are exact rationals rendered to two
digits.
"""

from fractions import Fraction

from legalarg import casefile, scheme
from legalarg.cli import bundled_case_path
from legalarg.dsl import parse_constraint
from legalarg.rationals import fmt_display, fmt_interval

HIT_AND_RUN_COLUMNS = [[], ["p(T3) >= 0.7"], ["p(E1) >= 0.9"]]
ROBBERY_COLUMNS = [
    [],
    ["p(W1) = 1", "p(E1) = 1"],
    ["p(W1) = 1", "p(E1) = 1", "p(D1) = 1"],
    ["p(W1) = 1", "p(E1) = 1", "p(D1) = 1", "p(V2) = 1"],
]
CAMERA_COLUMNS = [
    ["p(Camera1) = 0.7", "p(Camera2) = 0.9"],
    ["p(Camera1) = 1", "p(Camera2) = 0"],
]


def print_case(name: str, columns) -> None:
    doc = casefile.load(bundled_case_path(name))
    base = doc.to_case()
    solved = []
    for texts in columns:
        case = base
        for text in texts:
            case, _ = scheme.assume(case, parse_constraint(text))
        solved.append((texts, case, scheme.beliefs(case)))
    print(f"== {name} ==")
    header = ["argument"] + [" + ".join(t) or "(base)" for t, _, _ in solved]
    widths = [max(18, len(h) + 2) for h in header]
    print("".join(h.ljust(w) for h, w in zip(header, widths)))
    for arg in base.graph.arguments:
        row = [arg]
        for _, case, verdict in solved:
            lo, hi = verdict.bounds[arg]
            if arg == "Innocence":
                row.append(fmt_display(hi))
            else:
                row.append(fmt_interval(lo, hi))
        print("".join(c.ljust(w) for c, w in zip(row, widths)))
    print()


def main() -> None:
    print_case("example1", HIT_AND_RUN_COLUMNS)
    print_case("example2", ROBBERY_COLUMNS)
    print_case("camera", CAMERA_COLUMNS)


if __name__ == "__main__":
    main()
