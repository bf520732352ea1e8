from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from legalarg.constraints import LinearConstraint
from legalarg.dsl import (
    ConstraintSyntaxError,
    parse_constraint,
    parse_one,
    print_constraint,
)


def test_parse_lower_bound_assumption():
    [c] = parse_constraint("p(T3) >= 0.7")
    assert c == LinearConstraint.from_map({"T3": F(-1)}, F(-7, 10))


def test_parse_decimals_exactly():
    [c] = parse_constraint("p(E1) >= 0.9")
    assert c.bound == F(-9, 10)


def test_equality_expands_to_two_constraints():
    pair = parse_constraint("p(A) = 1")
    assert pair == [
        LinearConstraint.from_map({"A": F(1)}, F(1)),
        LinearConstraint.from_map({"A": F(-1)}, F(-1)),
    ]


def test_parse_mixed_expression():
    [c] = parse_constraint("1/2*p(A) + p(B) - 0.25 <= 2*p(C) + 1")
    assert c == LinearConstraint.from_map(
        {"A": F(1, 2), "B": F(1), "C": F(-2)}, F(5, 4)
    )


def test_parse_constant_only_sides():
    [c] = parse_constraint("0.5 <= p(C)")
    assert c == LinearConstraint.from_map({"C": F(-1)}, F(-1, 2))


def test_parse_merges_repeated_atoms():
    [c] = parse_constraint("p(A) + p(A) <= 1")
    assert c == LinearConstraint.from_map({"A": F(2)}, F(1))


@pytest.mark.parametrize(
    "text",
    ["", "p(A) <=", "p(A) < 1", "q(A) <= 1", "p(A <= 1", "p() <= 1",
     "p(A) <= 1 extra", "p(A) <= 1/0", "p(A)) <= 1"],
)
def test_syntax_errors(text):
    with pytest.raises(ConstraintSyntaxError):
        parse_constraint(text)


def test_syntax_error_carries_position():
    with pytest.raises(ConstraintSyntaxError) as err:
        parse_constraint("p(A) <= $")
    assert err.value.line == 1 and err.value.column == 9


def test_parse_one_rejects_equality():
    with pytest.raises(ConstraintSyntaxError):
        parse_one("p(A) = 1")


def test_print_sum_form():
    c = LinearConstraint.from_map({"A": F(1), "B": F(1)}, F(1))
    assert print_constraint(c) == "p(A) + p(B) <= 1"


def test_print_negative_leading_term():
    c = LinearConstraint.from_map({"T3": F(-1)}, F(-7, 10))
    assert print_constraint(c) == "-p(T3) <= -7/10"


def test_print_empty_terms():
    c = LinearConstraint.from_map({}, F(0))
    assert print_constraint(c) == "0 <= 0"


def test_print_fractional_coefficients():
    c = LinearConstraint.from_map({"T1": F(9, 10), "Einc": F(-1)}, F(0))
    assert print_constraint(c) == "-p(Einc) + 9/10*p(T1) <= 0"


_coeffs = st.sampled_from(
    [F(1), F(-1), F(2), F(-2), F(1, 2), F(-1, 2), F(9, 10), F(-3, 7), F(5, 3)]
)
_bounds = st.sampled_from([F(0), F(1), F(-1), F(7, 10), F(-9, 10), F(13, 4)])


@given(
    terms=st.dictionaries(
        st.text(alphabet="ABCXYZ_2", min_size=1, max_size=3), _coeffs, max_size=4
    ),
    bound=_bounds,
)
def test_print_parse_round_trip(terms, bound):
    c = LinearConstraint.from_map(terms, bound)
    assert parse_constraint(print_constraint(c)) == [c]
