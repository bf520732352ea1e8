"""Textual form of linear atomic constraints.

Grammar (whitespace-insensitive)::

    constraint := expr ("<=" | ">=" | "=") expr
    expr       := [("+"|"-")] term (("+"|"-") term)*
    term       := rat | rat "*" atom | atom
    atom       := "p" "(" ident ")"
    rat        := int | int "/" int | decimal

Decimals are parsed as exact rationals (0.7 becomes 7/10).  `>=` flips into
the canonical `<=` form and `=` expands into two constraints.  The printer
emits the normative form; `parse(print(c)) == [c]` for every constraint.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .constraints import LinearConstraint, canonicalize
from .rationals import fmt_exact


class ConstraintSyntaxError(ValueError):
    """Syntax error with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.reason = message


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>\d+[A-Za-z_][A-Za-z0-9_]*|[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<op><=|>=|=|\+|-|\*|/|\(|\))
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens: list[tuple[str, str, int, int]] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        value = m.group()
        if kind != "ws":
            tokens.append((kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def fail(self, message: str) -> "ConstraintSyntaxError":
        _, value, line, col = self.peek()
        shown = f", got {value!r}" if value else " at end of input"
        return ConstraintSyntaxError(message + shown, line, col)

    def expect_op(self, op: str) -> None:
        kind, value, _, _ = self.peek()
        if kind != "op" or value != op:
            raise self.fail(f"expected {op!r}")
        self.advance()

    # expr -> (constant, coefficient map)
    def parse_expr(self) -> tuple[Fraction, dict[str, Fraction]]:
        const = Fraction(0)
        coeffs: dict[str, Fraction] = {}
        sign = Fraction(1)
        kind, value, _, _ = self.peek()
        if kind == "op" and value in "+-":
            if value == "-":
                sign = Fraction(-1)
            self.advance()
        while True:
            c, terms = self.parse_term()
            const += sign * c
            for arg, coef in terms.items():
                coeffs[arg] = coeffs.get(arg, Fraction(0)) + sign * coef
            kind, value, _, _ = self.peek()
            if kind == "op" and value in "+-":
                sign = Fraction(1) if value == "+" else Fraction(-1)
                self.advance()
                continue
            return const, coeffs

    def parse_term(self) -> tuple[Fraction, dict[str, Fraction]]:
        kind, value, _, _ = self.peek()
        if kind == "number":
            coef = self.parse_rat()
            kind, value, _, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                arg = self.parse_atom()
                return Fraction(0), {arg: coef}
            return coef, {}
        if kind == "ident":
            arg = self.parse_atom()
            return Fraction(0), {arg: Fraction(1)}
        raise self.fail("expected a number or p(...)")

    def parse_rat(self) -> Fraction:
        kind, value, line, col = self.advance()
        if kind != "number":
            raise ConstraintSyntaxError(f"expected a number, got {value!r}", line, col)
        if "." in value:
            return Fraction(value)
        kind2, value2, _, _ = self.peek()
        if kind2 == "op" and value2 == "/":
            self.advance()
            kind3, value3, line3, col3 = self.advance()
            if kind3 != "number" or "." in value3:
                raise ConstraintSyntaxError("expected an integer denominator", line3, col3)
            if int(value3) == 0:
                raise ConstraintSyntaxError("zero denominator", line3, col3)
            return Fraction(int(value), int(value3))
        return Fraction(int(value))

    def parse_atom(self) -> str:
        kind, value, line, col = self.advance()
        if kind != "ident" or value != "p":
            raise ConstraintSyntaxError(
                f"expected p(...), got {value!r}", line, col
            )
        self.expect_op("(")
        kind, name, line, col = self.advance()
        if kind not in ("ident", "number") or not re.fullmatch(r"[A-Za-z0-9_]+", name):
            raise ConstraintSyntaxError("expected an argument name", line, col)
        self.expect_op(")")
        return name

    def parse_constraint(self) -> list[LinearConstraint]:
        lhs_const, lhs_terms = self.parse_expr()
        kind, rel, line, col = self.advance()
        if kind != "op" or rel not in ("<=", ">=", "="):
            raise ConstraintSyntaxError(
                f"expected <=, >= or =, got {rel!r}", line, col
            )
        rhs_const, rhs_terms = self.parse_expr()
        kind, value, line, col = self.peek()
        if kind != "eof":
            raise ConstraintSyntaxError(f"trailing input {value!r}", line, col)
        if rel == "<=":
            return [canonicalize(lhs_const, lhs_terms, rhs_const, rhs_terms)]
        if rel == ">=":
            return [canonicalize(rhs_const, rhs_terms, lhs_const, lhs_terms)]
        return [
            canonicalize(lhs_const, lhs_terms, rhs_const, rhs_terms),
            canonicalize(rhs_const, rhs_terms, lhs_const, lhs_terms),
        ]


def parse_constraint(text: str) -> list[LinearConstraint]:
    """Parse one constraint line; returns one constraint, or two for `=`."""
    return _Parser(text).parse_constraint()


def parse_one(text: str) -> LinearConstraint:
    """Parse a constraint that must not be an equality."""
    parsed = parse_constraint(text)
    if len(parsed) != 1:
        raise ConstraintSyntaxError("equality not allowed here", 1, 1)
    return parsed[0]


def print_constraint(c: LinearConstraint) -> str:
    """Normative textual form; round-trips through `parse_constraint`."""
    if not c.terms:
        return f"0 <= {fmt_exact(c.bound)}"
    parts: list[str] = []
    for i, (arg, coef) in enumerate(c.terms):
        mag = -coef if coef < 0 else coef
        body = f"p({arg})" if mag == 1 else f"{fmt_exact(mag)}*p({arg})"
        if i == 0:
            parts.append(f"-{body}" if coef < 0 else body)
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {body}")
    return f"{' '.join(parts)} <= {fmt_exact(c.bound)}"
