from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from legalarg.graph import ArgGraph, GraphError


def test_add_argument_singleton():
    g = ArgGraph().add_argument("A")
    assert "A" in g and len(g) == 1


def test_add_argument_idempotent():
    g = ArgGraph().add_argument("A")
    assert g.add_argument("A") == g


@pytest.mark.parametrize("bad", ["", "a b", "p(x)", "x-y", "café"])
def test_bad_identifiers_rejected(bad):
    with pytest.raises(GraphError):
        ArgGraph().add_argument(bad)


def test_identifiers_may_start_with_digits():
    g = ArgGraph().add_argument("9lives")
    assert "9lives" in g


def test_add_edge_and_sign_queries():
    g = ArgGraph.from_parts(["A", "B", "C"], [("A", "B", 1), ("B", "C", -1)])
    assert g.supporters("B") == {("A", Fraction(1))}
    assert g.attackers("C") == {("B", Fraction(-1))}
    assert g.attackers("B") == set()
    assert g.supporters("C") == set()


def test_isolated_node_has_no_neighbors():
    g = ArgGraph.from_parts(["A"])
    assert g.attackers("A") == set() and g.supporters("A") == set()


def test_zero_weight_rejected():
    g = ArgGraph.from_parts(["A", "B"])
    with pytest.raises(GraphError):
        g.add_edge("A", "B", 0)


def test_unknown_endpoints_rejected():
    g = ArgGraph.from_parts(["A"])
    with pytest.raises(GraphError):
        g.add_edge("A", "B", 1)
    with pytest.raises(GraphError):
        g.attackers("Z")


def test_edge_replacement_on_same_pair():
    g = ArgGraph.from_parts(["A", "B"], [("A", "B", 1)])
    g2 = g.add_edge("A", "B", Fraction(-1, 2))
    assert g2.edge_weight("A", "B") == Fraction(-1, 2)
    assert len(list(g2.edges())) == 1


def test_cycles_are_allowed():
    g = ArgGraph.from_parts(["A", "B"], [("A", "B", 1), ("B", "A", 1), ("A", "A", "1/2")])
    assert g.edge_weight("A", "A") == Fraction(1, 2)


def test_value_equality_ignores_declaration_order():
    g1 = ArgGraph.from_parts(["A", "B"], [("A", "B", 1)])
    g2 = ArgGraph.from_parts(["B", "A"], [("A", "B", 1)])
    assert g1 == g2 and hash(g1) == hash(g2)


def test_float_weights_rejected():
    g = ArgGraph.from_parts(["A", "B"])
    with pytest.raises(TypeError):
        g.add_edge("A", "B", 0.9)


_names = st.lists(
    st.text(alphabet="ABCDEF", min_size=1, max_size=2), min_size=1, max_size=5, unique=True
)


@given(
    names=_names,
    edges=st.lists(
        st.tuples(st.integers(0, 4), st.integers(0, 4), st.sampled_from(
            [Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-3, 4)]
        )),
        max_size=10,
    ),
)
def test_attackers_supporters_partition_in_neighbors(names, edges):
    g = ArgGraph.from_parts(names)
    for si, ti, w in edges:
        g = g.add_edge(names[si % len(names)], names[ti % len(names)], w)
    for a in names:
        att, sup = g.attackers(a), g.supporters(a)
        assert not {s for s, _ in att} & {s for s, _ in sup}
        incoming = {(e.source, e.weight) for e in g.in_edges(a)}
        assert att | sup == incoming
